#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ordermech/agents.hpp"
#include "ordermech/error.hpp"
#include "ordermech/rank.hpp"
#include "ordermech/tables.hpp"
#include "ordermech/verifier.hpp"

namespace ordermech {

enum class GenerateMode { exhaustive, sample, permutation };

inline GenerateMode generate_mode_from(std::string_view name) {
  if (name == "exhaustive") return GenerateMode::exhaustive;
  if (name == "sample") return GenerateMode::sample;
  if (name == "permutation") return GenerateMode::permutation;
  throw ConfigError("unknown generate mode '" + std::string(name) + "'");
}

struct GeneratorSpec {
  GenerateMode mode = GenerateMode::exhaustive;
  std::size_t agents = 2;
  std::size_t stages = 1;
  int theta_max = 3;
  std::size_t count = 100;        // sample / permutation
  TypeSpace types = TypeSpace::fixed;
  std::size_t tasks = 4;          // permutation: tasks per stage
};

/// mt19937_64 with a draw procedure that is identical across standard
/// libraries (std::uniform_int_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  int uniform(int lo, int hi) {
    if (hi < lo) throw DomainError("empty sampling range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
  }

  /// Fisher-Yates shuffle of 1..k.
  std::vector<int> permutation(std::size_t k) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 1);
    for (std::size_t i = k; i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform(0, static_cast<int>(i - 1)));
      std::swap(p[i - 1], p[j]);
    }
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

inline void check_spec(const GeneratorSpec& g) {
  if (g.agents < 2) throw InsufficientAgentsError("insufficient agents: need at least 2");
  if (g.stages < 1) throw DomainError("need at least one stage");
  if (g.mode == GenerateMode::permutation) {
    if (g.tasks < 1) throw DomainError("permutation mode needs at least one task");
    if (g.types == TypeSpace::markov) throw ConfigError("permutation mode generates fixed types");
    return;
  }
  if (g.theta_max < 0) throw DomainError("empty misalignment range");
  if (g.types == TypeSpace::markov && g.stages > 1 && g.theta_max < 1) {
    throw DomainError("markov types need theta_max >= 1 (tilde < hat)");
  }
}

inline AgentRow sample_row(Rng& rng, const GeneratorSpec& g) {
  AgentRow r{std::vector<int>(g.stages), std::vector<int>(g.stages)};
  for (std::size_t k = 0; k < g.stages; ++k) {
    if (g.types == TypeSpace::fixed || k == 0) {
      r.hat[k] = rng.uniform(0, g.theta_max);
      r.tilde[k] = r.hat[k];
    } else {
      r.hat[k] = rng.uniform(1, g.theta_max);
      r.tilde[k] = rng.uniform(0, r.hat[k] - 1);
    }
  }
  return r;
}

}  // namespace detail

/// Calls fn(table) for every generated instance; a false return stops early.
/// Exhaustive mode walks the grid in lexicographic order of agent rows.
/// Permutation mode draws one preferred order per agent and stage against the
/// identity order and uses its footrule total as the misalignment.
template <class Fn>
void for_each_instance(std::uint64_t seed, const GeneratorSpec& g, Fn&& fn) {
  detail::check_spec(g);
  if (g.mode == GenerateMode::exhaustive) {
    const auto space = g.types == TypeSpace::markov ? ReportSpace::markov : ReportSpace::fixed;
    const auto rows = detail::all_rows(space, g.stages, g.theta_max);
    if (rows.empty()) throw DomainError("empty instance grid");
    detail::for_each_assignment(rows, g.agents, [&](const std::vector<AgentRow>& r) {
      return static_cast<bool>(fn(TypeTable(r)));
    });
    return;
  }

  Rng rng(seed);
  const auto principal = PriorityOrder::identity(g.mode == GenerateMode::permutation ? g.tasks : 1);
  for (std::size_t n = 0; n < g.count; ++n) {
    std::vector<AgentRow> rows;
    for (std::size_t i = 0; i < g.agents; ++i) {
      if (g.mode == GenerateMode::sample) {
        rows.push_back(detail::sample_row(rng, g));
        continue;
      }
      std::vector<int> theta;
      for (std::size_t k = 0; k < g.stages; ++k) {
        theta.push_back(footrule(principal, PriorityOrder(rng.permutation(g.tasks))).total);
      }
      rows.push_back(AgentRow::fixed(std::move(theta)));
    }
    if (!fn(TypeTable(std::move(rows)))) return;
  }
}

inline std::vector<TypeTable> generate_instances(std::uint64_t seed, const GeneratorSpec& g) {
  std::vector<TypeTable> out;
  for_each_instance(seed, g, [&](TypeTable t) {
    out.push_back(std::move(t));
    return true;
  });
  return out;
}

}  // namespace ordermech

// Command-line front end: run, verify, oracle, sweep, demo.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ordermech/ordermech.hpp"

namespace om = ordermech;

namespace {

om::Scenario load(const std::string& path) {
  auto sc = om::load_scenario(path);
  om::apply_budget_override(sc, std::getenv("ORDERMECH_BUDGET"));
  return sc;
}

std::pair<long, long> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw om::ConfigError("range must look like a..b, got '" + text + "'");
  try {
    return {std::stol(text.substr(0, dots)), std::stol(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw om::ConfigError("range bounds must be integers, got '" + text + "'");
  }
}

int report(const om::ExperimentResult& r, const std::string& id, const std::string& out_dir) {
  if (out_dir == "-") {
    std::cout << r.csv;
  } else {
    om::write_outputs(r, id, out_dir);
    std::cout << id << ": ic=" << r.summary["ic_status"].get<std::string>()
              << " ir=" << r.summary["ir_status"].get<std::string>()
              << " so=" << r.summary["so_status"].get<std::string>()
              << " welfare=" << r.summary["welfare_mechanism"].get<std::string>() << '\n';
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordermech: delegation mechanisms under private ordering preferences"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = "out";

  auto* run = app.add_subcommand("run", "run a scenario, write <id>.csv and <id>.json");
  run->add_option("config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory, '-' prints the CSV to stdout");

  auto* verify = app.add_subcommand("verify", "run the scenario's verify block, print JSON");
  verify->add_option("config", config, "scenario JSON")->required()->check(CLI::ExistingFile);

  auto* oracle = app.add_subcommand("oracle", "exhaustive welfare optimum per instance");
  oracle->add_option("config", config, "scenario JSON")->required()->check(CLI::ExistingFile);

  std::string param;
  std::string range;
  auto* sweep = app.add_subcommand("sweep", "re-run a scenario over one integer parameter");
  sweep->add_option("config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "dotted path, e.g. profit.slope or agents.0.theta")->required();
  sweep->add_option("--range", range, "inclusive integer range a..b")->required();
  sweep->add_option("--out", out_dir, "directory for per-point outputs, '-' to skip");

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "built-in worked examples");
  demo->add_option("name", demo_name, "example1")->required()->check(CLI::IsMember({"example1"}));
  demo->add_option("--out", out_dir, "output directory, '-' prints the summary only");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto sc = load(config);
      return report(om::run_experiment(sc), sc.id, out_dir);
    }
    if (*verify) {
      auto r = om::verify_scenario(load(config));
      std::cout << r.summary.dump(2) << '\n';
      return r.exit_code;
    }
    if (*oracle) {
      std::cout << om::oracle_scenario(load(config)).dump(2) << '\n';
      return 0;
    }
    if (*sweep) {
      auto sc = load(config);
      auto [lo, hi] = parse_range(range);
      auto points = om::sweep(sc, param, lo, hi);
      int code = 0;
      for (const auto& p : points) {
        if (out_dir != "-") {
          om::write_outputs(p.result, p.result.summary["scenario_id"].get<std::string>(), out_dir);
        }
        code = std::max(code, p.result.exit_code);
      }
      std::cout << om::sweep_table(param, points);
      return code;
    }
    if (*demo) {
      auto sc = om::parse_scenario(om::example1_source(), "example1");
      auto r = om::run_experiment(sc);
      if (out_dir != "-") om::write_outputs(r, sc.id, out_dir);
      nlohmann::json brief = {{"misalignments", r.summary["misalignments"]},
                              {"settlements", r.summary["results"][0]["settlements"]},
                              {"ic_status", r.summary["ic_status"]},
                              {"ir_status", r.summary["ir_status"]}};
      std::cout << brief.dump(2) << '\n';
      return 0;
    }
  } catch (const om::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

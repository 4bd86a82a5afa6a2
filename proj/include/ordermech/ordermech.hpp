#pragma once

#include "ordermech/agents.hpp"
#include "ordermech/dynamic_mechanism.hpp"
#include "ordermech/econ.hpp"
#include "ordermech/error.hpp"
#include "ordermech/experiment.hpp"
#include "ordermech/generator.hpp"
#include "ordermech/io.hpp"
#include "ordermech/mechanism.hpp"
#include "ordermech/money.hpp"
#include "ordermech/oracle.hpp"
#include "ordermech/rank.hpp"
#include "ordermech/run.hpp"
#include "ordermech/scenario.hpp"
#include "ordermech/static_mechanism.hpp"
#include "ordermech/tables.hpp"
#include "ordermech/verifier.hpp"

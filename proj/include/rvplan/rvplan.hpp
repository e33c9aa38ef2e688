#pragma once

#include "rvplan/bench.hpp"
#include "rvplan/core.hpp"
#include "rvplan/evaluator.hpp"
#include "rvplan/generators.hpp"
#include "rvplan/io.hpp"
#include "rvplan/oracle.hpp"
#include "rvplan/planner.hpp"
#include "rvplan/simulator.hpp"

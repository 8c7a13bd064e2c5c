// Umbrella header.
#pragma once

#include "ghzn/analysis.hpp"
#include "ghzn/beamline.hpp"
#include "ghzn/experiment.hpp"
#include "ghzn/ghz_logic.hpp"
#include "ghzn/noise.hpp"
#include "ghzn/qcore.hpp"
#include "ghzn/report.hpp"
#include "ghzn/run_config.hpp"

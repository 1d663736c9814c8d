#pragma once

#include "tpsmix/basis.hpp"
#include "tpsmix/compensated_sum.hpp"
#include "tpsmix/config.hpp"
#include "tpsmix/experiments.hpp"
#include "tpsmix/interpolation_system.hpp"
#include "tpsmix/knot_grid.hpp"
#include "tpsmix/parallel.hpp"
#include "tpsmix/peano_kernel.hpp"
#include "tpsmix/power_function.hpp"
#include "tpsmix/rate_analysis.hpp"

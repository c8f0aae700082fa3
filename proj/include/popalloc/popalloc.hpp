#pragma once

// Umbrella header.

#include "popalloc/cli.hpp"
#include "popalloc/core.hpp"
#include "popalloc/csv.hpp"
#include "popalloc/errors.hpp"
#include "popalloc/layering.hpp"
#include "popalloc/metrics.hpp"
#include "popalloc/rng.hpp"
#include "popalloc/scenario.hpp"
#include "popalloc/sim.hpp"

#pragma once

// Discrete layer planning: turn an allocated bandwidth into one base layer at
// beta_min plus whole enhancement layers of fixed granularity. Receivers
// cannot take a fraction of a layer, so what does not fill a full layer is
// reported as residual.

#include <cmath>
#include <cstdint>
#include <string>

#include "popalloc/core.hpp"
#include "popalloc/errors.hpp"

namespace popalloc {

struct LayerPlan {
    double base_kbps = 0.0;              // always beta_min
    std::int64_t enhancement_count = 0;
    double enhancement_kbps = 0.0;       // layer granularity g
    double residual_kbps = 0.0;          // in [0, g)
};

inline LayerPlan plan_layers(double beta_kbps, const SystemConfig& config) {
    config.validate();
    if (!(beta_kbps >= config.beta_min_kbps && beta_kbps <= config.beta_max_kbps))
        throw BandwidthOutOfRange("plan_layers: " + std::to_string(beta_kbps) +
                                  " kbps outside [beta_min, beta_max]");
    const double granularity = config.layer_granularity_kbps;
    const double above_base = beta_kbps - config.beta_min_kbps;
    auto count = static_cast<std::int64_t>(std::floor(above_base / granularity));
    if (count < 0) count = 0;
    // The double quotient can land one layer off; nudge until
    // base + count*g <= beta < base + (count+1)*g holds exactly.
    while (static_cast<double>(count + 1) * granularity <= above_base) ++count;
    while (count > 0 && static_cast<double>(count) * granularity > above_base) --count;
    double residual = above_base - static_cast<double>(count) * granularity;
    if (residual < 0.0) residual = 0.0;
    return {config.beta_min_kbps, count, granularity, residual};
}

}  // namespace popalloc

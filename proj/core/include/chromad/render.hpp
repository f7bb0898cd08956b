#pragma once

#include <vector>

#include "chromad/image.hpp"
#include "chromad/scoring.hpp"

namespace chromad {

struct ColormapStop {
    double position = 0.0;  // in [0,1]
    Rgb8 color;
};

enum class ColormapRange { fixed, per_image_max };

/// Piecewise-linear gradient over ΔE values. Fixed clamp range keeps heat
/// maps comparable across images; per_image_max rescales each map to its own
/// maximum.
struct ColormapSpec {
    std::vector<ColormapStop> stops;
    double lo = 0.0;
    double hi = 50.0;
    ColormapRange range = ColormapRange::fixed;

    /// Dark blue -> cyan -> green -> yellow -> red over [0, 50] ΔE.
    static ColormapSpec defaults();

    void validate() const;  // throws std::invalid_argument on a malformed spec
};

ColorImage render_heatmap(const DiffMap& map, const ColormapSpec& spec);

/// original | reconstruction | heatmap in one image, separated by a 2 px
/// black gutter. All three must share dimensions.
ColorImage compose_triptych(const ColorImage& original, const ColorImage& reconstructed,
                            const ColorImage& heatmap);

}  // namespace chromad

#pragma once

#include <vector>

#include "chromad/image.hpp"

namespace chromad {

struct LabPixel {
    double L = 0.0;  // lightness, [0,100] for valid sRGB input
    double a = 0.0;  // green(-) .. red(+)
    double b = 0.0;  // blue(-) .. yellow(+)

    bool operator==(const LabPixel&) const = default;
};

struct LabImage {
    int width = 0;
    int height = 0;
    std::vector<LabPixel> pixels;

    LabImage() = default;
    LabImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h) {}

    const LabPixel& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    LabPixel& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Parametric weighting factors k_L, k_C, k_H. All 1 by default.
struct DeltaWeights {
    double kL = 1.0;
    double kC = 1.0;
    double kH = 1.0;
};

/// CIEDE2000 result with every intermediate the formula combines, so a
/// wrong branch can be pinned to a single field instead of a bad scalar.
struct DeltaE2000Breakdown {
    double dLp = 0.0;  // delta L'
    double dCp = 0.0;  // delta C'
    double dHp = 0.0;  // delta H'
    double sL = 1.0;
    double sC = 1.0;
    double sH = 1.0;
    double rT = 0.0;
    double kL = 1.0;
    double kC = 1.0;
    double kH = 1.0;
    double value = 0.0;  // Delta E00
};

/// sRGB (8-bit, D65, 2 deg observer) -> CIELAB.
LabPixel rgb_to_lab(Rgb8 rgb);
LabImage rgb_to_lab(const ColorImage& img);

/// CIELAB -> sRGB with channel-wise clamping of out-of-gamut values.
Rgb8 lab_to_rgb_clamped(const LabPixel& lab);

/// CIEDE2000 color difference. Throws std::invalid_argument on non-finite
/// input or non-positive weights.
DeltaE2000Breakdown delta_e_2000(const LabPixel& p, const LabPixel& q, const DeltaWeights& k = {});

/// Scalar shortcut for per-pixel maps.
double delta_e_2000_value(const LabPixel& p, const LabPixel& q, const DeltaWeights& k = {});

}  // namespace chromad

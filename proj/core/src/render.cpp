#include "chromad/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chromad {

ColormapSpec ColormapSpec::defaults() {
    ColormapSpec spec;
    spec.stops = {
        {0.00, {0, 0, 96}},     // dark blue
        {0.25, {0, 200, 255}},  // cyan
        {0.50, {0, 176, 0}},    // green
        {0.75, {255, 224, 0}},  // yellow
        {1.00, {224, 0, 0}},    // red
    };
    spec.lo = 0.0;
    spec.hi = 50.0;
    spec.range = ColormapRange::fixed;
    return spec;
}

void ColormapSpec::validate() const {
    if (stops.size() < 2) throw std::invalid_argument("colormap: need at least two stops");
    if (stops.front().position != 0.0 || stops.back().position != 1.0) {
        throw std::invalid_argument("colormap: stops must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < stops.size(); ++i) {
        if (!(stops[i].position > stops[i - 1].position)) {
            throw std::invalid_argument("colormap: stop positions must be strictly increasing");
        }
    }
    if (!(lo < hi)) throw std::invalid_argument("colormap: clamp range must satisfy lo < hi");
}

namespace {

Rgb8 sample_gradient(const std::vector<ColormapStop>& stops, double t) {
    if (t <= stops.front().position) return stops.front().color;
    if (t >= stops.back().position) return stops.back().color;
    std::size_t hi = 1;
    while (stops[hi].position < t) ++hi;
    const auto& a = stops[hi - 1];
    const auto& b = stops[hi];
    const double f = (t - a.position) / (b.position - a.position);
    auto lerp = [f](std::uint8_t x, std::uint8_t y) {
        return static_cast<std::uint8_t>(std::floor(x + f * (static_cast<double>(y) - x) + 0.5));
    };
    return {lerp(a.color.r, b.color.r), lerp(a.color.g, b.color.g), lerp(a.color.b, b.color.b)};
}

}  // namespace

ColorImage render_heatmap(const DiffMap& map, const ColormapSpec& spec) {
    spec.validate();
    double lo = spec.lo;
    double hi = spec.hi;
    if (spec.range == ColormapRange::per_image_max) {
        lo = 0.0;
        hi = 0.0;
        for (double v : map.values) hi = std::max(hi, v);
        if (hi <= 0.0) hi = 1.0;  // all-zero map still renders as the low stop
    }

    ColorImage out(map.width, map.height);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const double v = std::clamp(map.at(x, y), lo, hi);
            const double t = (v - lo) / (hi - lo);
            out.set(x, y, sample_gradient(spec.stops, t));
        }
    }
    return out;
}

ColorImage compose_triptych(const ColorImage& original, const ColorImage& reconstructed,
                            const ColorImage& heatmap) {
    const int w = original.width;
    const int h = original.height;
    if (reconstructed.width != w || reconstructed.height != h || heatmap.width != w || heatmap.height != h) {
        throw std::invalid_argument("compose_triptych: dimension mismatch");
    }
    constexpr int kGutter = 2;
    ColorImage out(3 * w + 2 * kGutter, h);
    const ColorImage* panels[3] = {&original, &reconstructed, &heatmap};
    for (int p = 0; p < 3; ++p) {
        const int x0 = p * (w + kGutter);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) out.set(x0 + x, y, panels[p]->at(x, y));
        }
    }
    return out;
}

}  // namespace chromad

#pragma once

#include <cstdint>
#include <vector>

namespace chromad {

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb8&) const = default;
};

/// 8-bit sRGB image, row-major, interleaved RGB.
struct ColorImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 * width * height

    ColorImage() = default;
    ColorImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(3) * w * h, 0) {}

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    Rgb8 at(int x, int y) const {
        const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        return {data[i], data[i + 1], data[i + 2]};
    }
    void set(int x, int y, Rgb8 p) {
        const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        data[i] = p.r;
        data[i + 1] = p.g;
        data[i + 2] = p.b;
    }

    bool operator==(const ColorImage&) const = default;
};

/// Grayscale intensities in [0, 255], stored as doubles so derived
/// quantities (L* rescaling, window statistics) keep full precision.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0.0) {}

    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    void set(int x, int y, double v) { data[static_cast<std::size_t>(y) * width + x] = v; }
};

/// Binary per-pixel mask; nonzero = selected.
struct PixelMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    PixelMask() = default;
    PixelMask(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { data[static_cast<std::size_t>(y) * width + x] = v ? 255 : 0; }
};

}  // namespace chromad

#include "chromad/colorspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chromad {

namespace {

// sRGB primaries -> XYZ, D65 white, 2 deg observer (IEC 61966-2-1 at
// seven decimals). The white point is taken as the exact row sums so
// that neutral inputs land on a* = b* = 0 to machine precision.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

constexpr double kWhite[3] = {
    kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2],
    kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2],
    kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2],
};

constexpr std::array<std::array<double, 3>, 3> invert3x3(const double m[3][3]) {
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    std::array<std::array<double, 3>, 3> inv{};
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

constexpr auto kXyzToRgb = invert3x3(kRgbToXyz);

double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) {
    return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

// Inverse gamma of every 8-bit code, computed once.
const std::array<double, 256>& linear_table() {
    static const std::array<double, 256> table = [] {
        std::array<double, 256> t{};
        for (int i = 0; i < 256; ++i) t[i] = srgb_to_linear(i / 255.0);
        return t;
    }();
    return table;
}

constexpr double kLabEps = 216.0 / 24389.0;  // (6/29)^3
constexpr double kLabDelta = 6.0 / 29.0;

double lab_f(double t) {
    return t > kLabEps ? std::cbrt(t) : t / (3.0 * kLabDelta * kLabDelta) + 4.0 / 29.0;
}

double lab_f_inv(double t) {
    return t > kLabDelta ? t * t * t : 3.0 * kLabDelta * kLabDelta * (t - 4.0 / 29.0);
}

constexpr double kDeg2Rad = std::numbers::pi / 180.0;

double pow7(double x) {
    const double x2 = x * x;
    return x2 * x2 * x2 * x;
}

}  // namespace

LabPixel rgb_to_lab(Rgb8 rgb) {
    const auto& lut = linear_table();
    const double r = lut[rgb.r];
    const double g = lut[rgb.g];
    const double b = lut[rgb.b];

    const double x = kRgbToXyz[0][0] * r + kRgbToXyz[0][1] * g + kRgbToXyz[0][2] * b;
    const double y = kRgbToXyz[1][0] * r + kRgbToXyz[1][1] * g + kRgbToXyz[1][2] * b;
    const double z = kRgbToXyz[2][0] * r + kRgbToXyz[2][1] * g + kRgbToXyz[2][2] * b;

    const double fx = lab_f(x / kWhite[0]);
    const double fy = lab_f(y / kWhite[1]);
    const double fz = lab_f(z / kWhite[2]);

    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LabImage rgb_to_lab(const ColorImage& img) {
    LabImage out(img.width, img.height);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        out.pixels[i] = rgb_to_lab(Rgb8{img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]});
    }
    return out;
}

Rgb8 lab_to_rgb_clamped(const LabPixel& lab) {
    const double fy = (lab.L + 16.0) / 116.0;
    const double fx = fy + lab.a / 500.0;
    const double fz = fy - lab.b / 200.0;

    const double x = lab_f_inv(fx) * kWhite[0];
    const double y = lab_f_inv(fy) * kWhite[1];
    const double z = lab_f_inv(fz) * kWhite[2];

    const double rl = kXyzToRgb[0][0] * x + kXyzToRgb[0][1] * y + kXyzToRgb[0][2] * z;
    const double gl = kXyzToRgb[1][0] * x + kXyzToRgb[1][1] * y + kXyzToRgb[1][2] * z;
    const double bl = kXyzToRgb[2][0] * x + kXyzToRgb[2][1] * y + kXyzToRgb[2][2] * z;

    auto encode = [](double lin) -> std::uint8_t {
        const double v = linear_to_srgb(std::max(lin, 0.0));
        return static_cast<std::uint8_t>(std::clamp(std::floor(v * 255.0 + 0.5), 0.0, 255.0));
    };
    return {encode(rl), encode(gl), encode(bl)};
}

DeltaE2000Breakdown delta_e_2000(const LabPixel& p, const LabPixel& q, const DeltaWeights& k) {
    if (!std::isfinite(p.L) || !std::isfinite(p.a) || !std::isfinite(p.b) ||
        !std::isfinite(q.L) || !std::isfinite(q.a) || !std::isfinite(q.b)) {
        throw std::invalid_argument("delta_e_2000: non-finite Lab input");
    }
    if (!(k.kL > 0.0) || !(k.kC > 0.0) || !(k.kH > 0.0)) {
        throw std::invalid_argument("delta_e_2000: weighting factors must be positive");
    }

    const double c1 = std::hypot(p.a, p.b);
    const double c2 = std::hypot(q.a, q.b);
    const double cBar = 0.5 * (c1 + c2);
    const double cBar7 = pow7(cBar);
    const double g = 0.5 * (1.0 - std::sqrt(cBar7 / (cBar7 + pow7(25.0))));

    const double a1p = (1.0 + g) * p.a;
    const double a2p = (1.0 + g) * q.a;
    const double c1p = std::hypot(a1p, p.b);
    const double c2p = std::hypot(a2p, q.b);

    auto hue_deg = [](double ap, double b) {
        if (ap == 0.0 && b == 0.0) return 0.0;
        double h = std::atan2(b, ap) / kDeg2Rad;
        return h < 0.0 ? h + 360.0 : h;
    };
    const double h1p = hue_deg(a1p, p.b);
    const double h2p = hue_deg(a2p, q.b);

    const double dLp = q.L - p.L;
    const double dCp = c2p - c1p;

    // Hue difference with wrap-around; defined as 0 when either chroma is 0.
    double dhp = 0.0;
    if (c1p * c2p != 0.0) {
        dhp = h2p - h1p;
        if (dhp > 180.0) {
            dhp -= 360.0;
        } else if (dhp < -180.0) {
            dhp += 360.0;
        }
    }
    const double dHp = 2.0 * std::sqrt(c1p * c2p) * std::sin(0.5 * dhp * kDeg2Rad);

    const double lBar = 0.5 * (p.L + q.L);
    const double cBarP = 0.5 * (c1p + c2p);

    double hBar = h1p + h2p;
    if (c1p * c2p != 0.0) {
        if (std::abs(h1p - h2p) <= 180.0) {
            hBar = 0.5 * (h1p + h2p);
        } else if (h1p + h2p < 360.0) {
            hBar = 0.5 * (h1p + h2p + 360.0);
        } else {
            hBar = 0.5 * (h1p + h2p - 360.0);
        }
    }

    const double t = 1.0 - 0.17 * std::cos((hBar - 30.0) * kDeg2Rad) +
                     0.24 * std::cos(2.0 * hBar * kDeg2Rad) +
                     0.32 * std::cos((3.0 * hBar + 6.0) * kDeg2Rad) -
                     0.20 * std::cos((4.0 * hBar - 63.0) * kDeg2Rad);

    const double lBar50 = (lBar - 50.0) * (lBar - 50.0);
    const double sL = 1.0 + 0.015 * lBar50 / std::sqrt(20.0 + lBar50);
    const double sC = 1.0 + 0.045 * cBarP;
    const double sH = 1.0 + 0.015 * cBarP * t;

    const double dTheta = 30.0 * std::exp(-((hBar - 275.0) / 25.0) * ((hBar - 275.0) / 25.0));
    const double cBarP7 = pow7(cBarP);
    const double rC = 2.0 * std::sqrt(cBarP7 / (cBarP7 + pow7(25.0)));
    const double rT = -std::sin(2.0 * dTheta * kDeg2Rad) * rC;

    const double termL = dLp / (k.kL * sL);
    const double termC = dCp / (k.kC * sC);
    const double termH = dHp / (k.kH * sH);

    DeltaE2000Breakdown out;
    out.dLp = dLp;
    out.dCp = dCp;
    out.dHp = dHp;
    out.sL = sL;
    out.sC = sC;
    out.sH = sH;
    out.rT = rT;
    out.kL = k.kL;
    out.kC = k.kC;
    out.kH = k.kH;
    out.value = std::sqrt(std::max(termL * termL + termC * termC + termH * termH + rT * termC * termH, 0.0));
    return out;
}

double delta_e_2000_value(const LabPixel& p, const LabPixel& q, const DeltaWeights& k) {
    return delta_e_2000(p, q, k).value;
}

}  // namespace chromad

#include "chromad/colorspace.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ciede2000_reference_pairs.hpp"

using namespace chromad;

namespace {

// L* of sRGB (119,119,119), frozen from the scikit-image reference
// implementation (rgb2lab, D65/2deg).
constexpr double kGray119L = 50.034438792538;

LabPixel random_lab(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uL(0.0, 100.0);
    std::uniform_real_distribution<double> uC(-128.0, 128.0);
    return {uL(rng), uC(rng), uC(rng)};
}

}  // namespace

TEST(RgbToLab, WhitePoint) {
    const LabPixel lab = rgb_to_lab(Rgb8{255, 255, 255});
    EXPECT_NEAR(lab.L, 100.0, 1e-3);
    EXPECT_NEAR(lab.a, 0.0, 1e-3);
    EXPECT_NEAR(lab.b, 0.0, 1e-3);
}

TEST(RgbToLab, Black) {
    const LabPixel lab = rgb_to_lab(Rgb8{0, 0, 0});
    EXPECT_DOUBLE_EQ(lab.L, 0.0);
    EXPECT_DOUBLE_EQ(lab.a, 0.0);
    EXPECT_DOUBLE_EQ(lab.b, 0.0);
}

TEST(RgbToLab, MidGrayMatchesReference) {
    const LabPixel lab = rgb_to_lab(Rgb8{119, 119, 119});
    EXPECT_NEAR(lab.L, kGray119L, 1e-3);
    EXPECT_LT(std::abs(lab.a), 1e-6);
    EXPECT_LT(std::abs(lab.b), 1e-6);
}

TEST(RgbToLab, EveryNeutralGrayIsAchromatic) {
    for (int v = 0; v < 256; ++v) {
        const auto g = static_cast<std::uint8_t>(v);
        const LabPixel lab = rgb_to_lab(Rgb8{g, g, g});
        EXPECT_LT(std::abs(lab.a), 1e-6) << "gray " << v;
        EXPECT_LT(std::abs(lab.b), 1e-6) << "gray " << v;
        EXPECT_GE(lab.L, 0.0);
        EXPECT_LE(lab.L, 100.0);
    }
}

TEST(RgbToLab, LWithinRangeForAllChannelExtremes) {
    for (int r = 0; r < 256; r += 51) {
        for (int g = 0; g < 256; g += 51) {
            for (int b = 0; b < 256; b += 51) {
                const LabPixel lab = rgb_to_lab(
                    Rgb8{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)});
                EXPECT_GE(lab.L, 0.0);
                EXPECT_LE(lab.L, 100.0 + 1e-9);
            }
        }
    }
}

TEST(RgbToLab, ImageConversionKeepsDimensions) {
    ColorImage img(3, 2);
    img.set(0, 0, {255, 0, 0});
    img.set(2, 1, {0, 0, 255});
    const LabImage lab = rgb_to_lab(img);
    EXPECT_EQ(lab.width, 3);
    EXPECT_EQ(lab.height, 2);
    EXPECT_DOUBLE_EQ(lab.at(1, 0).L, 0.0);  // untouched pixel is black
}

TEST(LabToRgb, RoundTripsEvery8BitGray) {
    for (int v = 0; v < 256; ++v) {
        const auto g = static_cast<std::uint8_t>(v);
        const Rgb8 back = lab_to_rgb_clamped(rgb_to_lab(Rgb8{g, g, g}));
        EXPECT_EQ(back, (Rgb8{g, g, g}));
    }
}

TEST(LabToRgb, RoundTripsRandomColors) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const Rgb8 c{static_cast<std::uint8_t>(rng() % 256), static_cast<std::uint8_t>(rng() % 256),
                     static_cast<std::uint8_t>(rng() % 256)};
        EXPECT_EQ(lab_to_rgb_clamped(rgb_to_lab(c)), c);
    }
}

TEST(LabToRgb, OutOfGamutClampsToValidRange) {
    const Rgb8 c = lab_to_rgb_clamped(LabPixel{50.0, 200.0, -200.0});
    EXPECT_EQ(c.r, 255);  // extreme red axis saturates
    EXPECT_EQ(c.g, 0);
}

TEST(DeltaE2000, IdenticalInputsAreZero) {
    const LabPixel p{50.0, 2.5, 0.0};
    EXPECT_DOUBLE_EQ(delta_e_2000(p, p).value, 0.0);
}

TEST(DeltaE2000, SymmetricOnHueWrapPair) {
    const LabPixel p{50.0, 2.6772, -79.7751};
    const LabPixel q{50.0, 0.0, -82.7485};
    EXPECT_NEAR(delta_e_2000(p, q).value, delta_e_2000(q, p).value, 1e-12);
}

TEST(DeltaE2000, ReferencePairSpotChecks) {
    EXPECT_NEAR(delta_e_2000(LabPixel{50.0, 2.6772, -79.7751}, LabPixel{50.0, 0.0, -82.7485}).value, 2.0425, 1e-4);
    EXPECT_NEAR(delta_e_2000(LabPixel{50.0, 2.5, 0.0}, LabPixel{73.0, 25.0, -18.0}).value, 27.1492, 1e-4);
}

TEST(DeltaE2000, AllReferencePairs) {
    for (const auto& pair : testdata::kCiede2000Pairs) {
        const double got = delta_e_2000(pair.p, pair.q).value;
        EXPECT_NEAR(got, pair.expected, 1e-4) << "pair (" << pair.p.L << "," << pair.p.a << "," << pair.p.b << ") vs ("
                                              << pair.q.L << "," << pair.q.a << "," << pair.q.b << ")";
    }
}

TEST(DeltaE2000, BreakdownRecombinesToValue) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const LabPixel p = random_lab(rng);
        const LabPixel q = random_lab(rng);
        const auto d = delta_e_2000(p, q);
        const double tL = d.dLp / (d.kL * d.sL);
        const double tC = d.dCp / (d.kC * d.sC);
        const double tH = d.dHp / (d.kH * d.sH);
        const double recombined = std::sqrt(std::max(tL * tL + tC * tC + tH * tH + d.rT * tC * tH, 0.0));
        EXPECT_NEAR(recombined, d.value, 1e-9);
        EXPECT_GE(d.sL, 1.0);
        EXPECT_GE(d.sC, 1.0);
        EXPECT_GE(d.sH, 0.985);
        EXPECT_GE(d.value, 0.0);
        EXPECT_EQ(d.kL, 1.0);
        EXPECT_EQ(d.kC, 1.0);
        EXPECT_EQ(d.kH, 1.0);
    }
}

TEST(DeltaE2000, PropertySymmetryNonNegativityIdentity) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 10000; ++i) {
        const LabPixel p = random_lab(rng);
        const LabPixel q = random_lab(rng);
        const double pq = delta_e_2000(p, q).value;
        const double qp = delta_e_2000(q, p).value;
        ASSERT_GE(pq, 0.0);
        ASSERT_NEAR(pq, qp, 1e-9);
        if (p == q) {
            ASSERT_EQ(pq, 0.0);
        } else {
            ASSERT_GT(pq + std::abs(p.L - q.L) + std::abs(p.a - q.a) + std::abs(p.b - q.b), 0.0);
        }
        ASSERT_DOUBLE_EQ(delta_e_2000(p, p).value, 0.0);
    }
}

TEST(DeltaE2000, ZeroOnlyForIdenticalInputs) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 10000; ++i) {
        const LabPixel p = random_lab(rng);
        LabPixel q = random_lab(rng);
        if (p == q) continue;
        // distinct pairs must have strictly positive difference
        ASSERT_GT(delta_e_2000(p, q).value, 0.0);
    }
}

TEST(DeltaE2000, NeutralAxisReducesToWeightedLightness) {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> uL(0.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const double l1 = uL(rng);
        const double l2 = uL(rng);
        const auto d = delta_e_2000(LabPixel{l1, 0.0, 0.0}, LabPixel{l2, 0.0, 0.0});
        EXPECT_DOUBLE_EQ(d.dCp, 0.0);
        EXPECT_DOUBLE_EQ(d.dHp, 0.0);
        const double lbar = 0.5 * (l1 + l2);
        const double sl = 1.0 + 0.015 * (lbar - 50.0) * (lbar - 50.0) / std::sqrt(20.0 + (lbar - 50.0) * (lbar - 50.0));
        EXPECT_NEAR(d.value, std::abs(l1 - l2) / sl, 1e-9);
    }
}

TEST(DeltaE2000, CustomWeightsScaleTheTerms) {
    const LabPixel p{40.0, 0.0, 0.0};
    const LabPixel q{60.0, 0.0, 0.0};
    const double base = delta_e_2000(p, q).value;
    const double half = delta_e_2000(p, q, DeltaWeights{2.0, 1.0, 1.0}).value;
    EXPECT_NEAR(half, base / 2.0, 1e-12);
}

TEST(DeltaE2000, RejectsNonFiniteInput) {
    const LabPixel ok{50.0, 0.0, 0.0};
    const LabPixel bad{std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0};
    EXPECT_THROW(delta_e_2000(ok, bad), std::invalid_argument);
    EXPECT_THROW(delta_e_2000(bad, ok), std::invalid_argument);
    const LabPixel inf{50.0, std::numeric_limits<double>::infinity(), 0.0};
    EXPECT_THROW(delta_e_2000(ok, inf), std::invalid_argument);
}

TEST(DeltaE2000, RejectsNonPositiveWeights) {
    const LabPixel p{50.0, 1.0, 1.0};
    EXPECT_THROW(delta_e_2000(p, p, DeltaWeights{0.0, 1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(delta_e_2000(p, p, DeltaWeights{1.0, -1.0, 1.0}), std::invalid_argument);
}

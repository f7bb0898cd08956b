#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chromad/colorspace.hpp"
#include "chromad/image.hpp"
#include "chromad/reconstruct.hpp"

namespace chromad {

/// Per-pixel CIEDE2000 differences between an original and its
/// reconstruction.
struct DiffMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    DiffMap() = default;
    DiffMap(int w, int h) : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0.0) {}

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    void set(int x, int y, double v) { values[static_cast<std::size_t>(y) * width + x] = v; }
};

enum class ScoreMethod { ciede2000, hist, l2, ssim };
enum class ScoreNormalize { sum, mean };

std::string to_string(ScoreMethod method);
ScoreMethod score_method_from_string(const std::string& s);

struct AnomalyScore {
    std::string image_id;
    ScoreMethod method = ScoreMethod::ciede2000;
    double value = 0.0;  // higher = more anomalous
};

DiffMap diff_map(const ReconstructionPair& pair, const DeltaWeights& k = {});

/// Sum (the default) or mean of ΔE00 over the unmasked pixels. A mask, when
/// given, selects the pixels that count.
AnomalyScore ciede_score(const DiffMap& map, const PixelMask* mask = nullptr,
                         ScoreNormalize normalize = ScoreNormalize::sum, std::string image_id = {});

/// Pooled 8x8x8 joint RGB histogram of healthy pixels, normalized to sum 1.
struct HealthyHistogram {
    static constexpr int kBinsPerChannel = 8;
    std::array<double, 512> freq{};
    std::string training_id;

    static int bin_of(Rgb8 p) {
        return ((p.r >> 5) * kBinsPerChannel + (p.g >> 5)) * kBinsPerChannel + (p.b >> 5);
    }
};

HealthyHistogram build_reference_histogram(const std::vector<ColorImage>& healthy, std::string training_id = {});

/// One minus histogram intersection against the healthy reference; in [0,1].
AnomalyScore hist_score(const ColorImage& query, const HealthyHistogram& ref, std::string image_id = {});

/// Mean squared sRGB difference with channels scaled to [0,1].
AnomalyScore l2_score(const ReconstructionPair& pair, std::string image_id = {});

/// One minus mean SSIM over the luma601 grayscale of the pair (11x11
/// Gaussian window, sigma 1.5, K1=0.01, K2=0.03, dynamic range 255; map
/// restricted to fully covered windows). Requires both images >= 11x11.
AnomalyScore ssim_score(const ReconstructionPair& pair, std::string image_id = {});

/// A scored test image with its ground-truth label (1 anomalous, -1 normal).
struct ScoreRecord {
    std::string image_id;
    int label = -1;
    ScoreMethod method = ScoreMethod::ciede2000;
    double value = 0.0;
};

/// CSV with header image_id,label,method,score. Values are printed with 17
/// significant digits so the round-trip is lossless.
void write_scores_csv(std::ostream& os, const std::vector<ScoreRecord>& records);
std::vector<ScoreRecord> read_scores_csv(std::istream& is);

}  // namespace chromad

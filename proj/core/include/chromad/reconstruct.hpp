#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chromad/colorspace.hpp"
#include "chromad/image.hpp"

namespace chromad {

enum class GrayMode { luma601, lab_l };

std::string to_string(GrayMode mode);
GrayMode gray_mode_from_string(const std::string& s);

/// Grayscale conversion. luma601 applies 0.299R + 0.587G + 0.114B to the
/// 8-bit sRGB values; lab_l rescales L* from [0,100] to [0,255].
GrayImage to_gray(const ColorImage& img, GrayMode mode);

/// Quantization of the grayscale conditioning features. Local statistics
/// use a 5x5 window with clamp-to-edge padding.
struct FeatureBinConfig {
    int intensity_bins = 32;  // over [0,256)
    int mean_bins = 16;       // over [0,256)
    int std_bins = 8;         // over [0,128); 127.5 is the max std of 8-bit data

    int total_bins() const { return intensity_bins * mean_bins * std_bins; }
    bool operator==(const FeatureBinConfig&) const = default;
};

struct FeatureVector {
    int intensity = 0;
    int mean = 0;
    int std = 0;
};

/// Optional exclusion of near-black background pixels from training.
/// A pixel is background when max(R,G,B) < threshold. Default: include all.
struct BackgroundRule {
    bool exclude = false;
    int threshold = 10;
};

/// Grayscale-feature -> chroma lookup table trained on healthy images only.
/// Each populated bin holds the coordinate-wise median (a*, b*) of every
/// training sample that fell into it; the median is the L1-optimal fit.
class ChromaLookupModel {
public:
    static constexpr std::uint32_t kFormatVersion = 1;

    struct Bin {
        double a = 0.0;
        double b = 0.0;
        std::uint64_t count = 0;
    };

    ChromaLookupModel() = default;
    ChromaLookupModel(FeatureBinConfig config, GrayMode mode, std::string training_id);

    const FeatureBinConfig& config() const { return config_; }
    GrayMode gray_mode() const { return gray_mode_; }
    const std::string& training_id() const { return training_id_; }

    int bin_index(const FeatureVector& f) const;
    FeatureVector bin_coords(int index) const;

    const Bin& bin(int index) const { return table_[index]; }
    Bin& bin(int index) { return table_[index]; }
    std::size_t populated_count() const;

    /// Chroma for a feature vector; empty bins resolve to the nearest
    /// populated bin by L1 distance in bin-index space, ties broken by the
    /// lowest (intensity, mean, std) coordinates. Throws if no bin is
    /// populated.
    Bin lookup(const FeatureVector& f) const;

    /// Index of the populated bin lookup() would read.
    int resolve_bin(const FeatureVector& f) const;

    void save(const std::filesystem::path& path) const;
    static ChromaLookupModel load(const std::filesystem::path& path);

    bool operator==(const ChromaLookupModel&) const = default;

private:
    FeatureBinConfig config_;
    GrayMode gray_mode_ = GrayMode::lab_l;
    std::string training_id_;
    std::vector<Bin> table_;
};

FeatureVector compute_feature(const GrayImage& gray, int x, int y, const FeatureBinConfig& config);

struct TrainConfig {
    FeatureBinConfig bins;
    GrayMode gray_mode = GrayMode::lab_l;
    BackgroundRule background;
    std::string training_id;
};

/// Fits the lookup colorizer on healthy images. Deterministic and
/// order-independent: bins accumulate multisets, the fit is their median.
/// Throws on an empty training set.
ChromaLookupModel train_colorizer(const std::vector<ColorImage>& healthy, const TrainConfig& config);

enum class PairSource { internal, external };

struct ReconstructionPair {
    ColorImage original;
    ColorImage reconstructed;
    PairSource source = PairSource::internal;
};

/// Recolors the query from its own grayscale: per-pixel feature lookup for
/// chroma, lightness taken from the query's grayscale, converted back to
/// sRGB with out-of-gamut values clamped channel-wise.
ReconstructionPair reconstruct(const ChromaLookupModel& model, const ColorImage& query, GrayMode mode);

/// Ingests an externally produced reconstruction (e.g. a pix2pix output).
/// No resampling; dimensions must match.
ReconstructionPair load_external_pair(const std::filesystem::path& original,
                                      const std::filesystem::path& reconstructed);

}  // namespace chromad

#include "chromad/reconstruct.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "chromad/dataset.hpp"

namespace chromad {

namespace {

constexpr char kModelMagic[4] = {'C', 'H', 'L', 'M'};
constexpr int kWindow = 5;  // local statistics window, clamp-to-edge

int clamp_bin(double value, int bins, double range) {
    const int idx = static_cast<int>(value * bins / range);
    return std::clamp(idx, 0, bins - 1);
}

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

void write_f64(std::ostream& os, double v) {
    write_u64(os, std::bit_cast<std::uint64_t>(v));
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double read_f64(std::istream& is) {
    return std::bit_cast<double>(read_u64(is));
}

double median_inplace(std::vector<double>& v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (n % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
    }
    return m;
}

}  // namespace

std::string to_string(GrayMode mode) {
    return mode == GrayMode::luma601 ? "luma601" : "lab_l";
}

GrayMode gray_mode_from_string(const std::string& s) {
    if (s == "luma601") return GrayMode::luma601;
    if (s == "lab_l") return GrayMode::lab_l;
    throw std::invalid_argument("unknown gray mode: " + s);
}

GrayImage to_gray(const ColorImage& img, GrayMode mode) {
    GrayImage out(img.width, img.height);
    const std::size_t n = img.pixel_count();
    if (mode == GrayMode::luma601) {
        for (std::size_t i = 0; i < n; ++i) {
            out.data[i] = 0.299 * img.data[3 * i] + 0.587 * img.data[3 * i + 1] + 0.114 * img.data[3 * i + 2];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const LabPixel lab = rgb_to_lab(Rgb8{img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]});
            out.data[i] = lab.L * 255.0 / 100.0;
        }
    }
    return out;
}

FeatureVector compute_feature(const GrayImage& gray, int x, int y, const FeatureBinConfig& config) {
    const int half = kWindow / 2;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int dy = -half; dy <= half; ++dy) {
        const int yy = std::clamp(y + dy, 0, gray.height - 1);
        for (int dx = -half; dx <= half; ++dx) {
            const int xx = std::clamp(x + dx, 0, gray.width - 1);
            const double v = gray.at(xx, yy);
            sum += v;
            sum2 += v * v;
        }
    }
    const double inv = 1.0 / (kWindow * kWindow);
    const double mean = sum * inv;
    const double var = std::max(sum2 * inv - mean * mean, 0.0);
    const double sd = std::sqrt(var);

    FeatureVector f;
    f.intensity = clamp_bin(gray.at(x, y), config.intensity_bins, 256.0);
    f.mean = clamp_bin(mean, config.mean_bins, 256.0);
    f.std = clamp_bin(sd, config.std_bins, 128.0);
    return f;
}

ChromaLookupModel::ChromaLookupModel(FeatureBinConfig config, GrayMode mode, std::string training_id)
    : config_(config), gray_mode_(mode), training_id_(std::move(training_id)),
      table_(static_cast<std::size_t>(config.total_bins())) {}

int ChromaLookupModel::bin_index(const FeatureVector& f) const {
    return (f.intensity * config_.mean_bins + f.mean) * config_.std_bins + f.std;
}

FeatureVector ChromaLookupModel::bin_coords(int index) const {
    FeatureVector f;
    f.std = index % config_.std_bins;
    f.mean = (index / config_.std_bins) % config_.mean_bins;
    f.intensity = index / (config_.std_bins * config_.mean_bins);
    return f;
}

std::size_t ChromaLookupModel::populated_count() const {
    std::size_t n = 0;
    for (const auto& b : table_) n += b.count > 0 ? 1 : 0;
    return n;
}

int ChromaLookupModel::resolve_bin(const FeatureVector& f) const {
    const int idx = bin_index(f);
    if (table_[idx].count > 0) return idx;

    // Ascending bin index is lexicographic (intensity, mean, std) order, so
    // keeping the first strictly-better candidate realizes the tie-break.
    int best = -1;
    int bestDist = 0;
    for (int i = 0; i < static_cast<int>(table_.size()); ++i) {
        if (table_[i].count == 0) continue;
        const FeatureVector c = bin_coords(i);
        const int dist = std::abs(c.intensity - f.intensity) + std::abs(c.mean - f.mean) + std::abs(c.std - f.std);
        if (best < 0 || dist < bestDist) {
            best = i;
            bestDist = dist;
        }
    }
    if (best < 0) throw std::runtime_error("ChromaLookupModel: model has no populated bins");
    return best;
}

ChromaLookupModel::Bin ChromaLookupModel::lookup(const FeatureVector& f) const {
    return table_[resolve_bin(f)];
}

void ChromaLookupModel::save(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open model file for writing: " + path.string());
    os.write(kModelMagic, 4);
    write_u32(os, kFormatVersion);
    write_u32(os, static_cast<std::uint32_t>(config_.intensity_bins));
    write_u32(os, static_cast<std::uint32_t>(config_.mean_bins));
    write_u32(os, static_cast<std::uint32_t>(config_.std_bins));
    write_u32(os, gray_mode_ == GrayMode::luma601 ? 0u : 1u);
    write_u32(os, static_cast<std::uint32_t>(training_id_.size()));
    os.write(training_id_.data(), static_cast<std::streamsize>(training_id_.size()));
    for (const auto& b : table_) {
        write_f64(os, b.a);
        write_f64(os, b.b);
        write_u64(os, b.count);
    }
    if (!os) throw std::runtime_error("failed writing model file: " + path.string());
}

ChromaLookupModel ChromaLookupModel::load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open model file: " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kModelMagic, 4) != 0) {
        throw std::runtime_error("not a chroma lookup model file: " + path.string());
    }
    const std::uint32_t version = read_u32(is);
    if (version != kFormatVersion) {
        throw std::runtime_error("unsupported model format version " + std::to_string(version) + " in " + path.string());
    }
    FeatureBinConfig config;
    config.intensity_bins = static_cast<int>(read_u32(is));
    config.mean_bins = static_cast<int>(read_u32(is));
    config.std_bins = static_cast<int>(read_u32(is));
    if (config.intensity_bins <= 0 || config.mean_bins <= 0 || config.std_bins <= 0) {
        throw std::runtime_error("corrupt model bin configuration in " + path.string());
    }
    const GrayMode mode = read_u32(is) == 0 ? GrayMode::luma601 : GrayMode::lab_l;
    const std::uint32_t idLen = read_u32(is);
    std::string id(idLen, '\0');
    is.read(id.data(), idLen);

    ChromaLookupModel model(config, mode, std::move(id));
    for (int i = 0; i < config.total_bins(); ++i) {
        auto& b = model.bin(i);
        b.a = read_f64(is);
        b.b = read_f64(is);
        b.count = read_u64(is);
    }
    if (!is) throw std::runtime_error("truncated model file: " + path.string());
    return model;
}

ChromaLookupModel train_colorizer(const std::vector<ColorImage>& healthy, const TrainConfig& config) {
    if (healthy.empty()) throw std::invalid_argument("train_colorizer: empty training set");

    ChromaLookupModel model(config.bins, config.gray_mode, config.training_id);
    const int total = config.bins.total_bins();
    std::vector<std::vector<double>> acc_a(total);
    std::vector<std::vector<double>> acc_b(total);

    for (const auto& img : healthy) {
        const GrayImage gray = to_gray(img, config.gray_mode);
        const LabImage lab = rgb_to_lab(img);
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                if (config.background.exclude) {
                    const Rgb8 p = img.at(x, y);
                    if (std::max({p.r, p.g, p.b}) < config.background.threshold) continue;
                }
                const FeatureVector f = compute_feature(gray, x, y, config.bins);
                const int idx = model.bin_index(f);
                const LabPixel& lp = lab.at(x, y);
                acc_a[idx].push_back(lp.a);
                acc_b[idx].push_back(lp.b);
            }
        }
    }

    for (int i = 0; i < total; ++i) {
        if (acc_a[i].empty()) continue;
        auto& bin = model.bin(i);
        bin.count = acc_a[i].size();
        bin.a = median_inplace(acc_a[i]);
        bin.b = median_inplace(acc_b[i]);
    }
    return model;
}

ReconstructionPair reconstruct(const ChromaLookupModel& model, const ColorImage& query, GrayMode mode) {
    if (model.populated_count() == 0) {
        throw std::runtime_error("reconstruct: model has no populated bins");
    }

    const GrayImage gray = to_gray(query, mode);
    ColorImage out(query.width, query.height);

    // Fallback resolution is memoized per call; repeated feature vectors are
    // the common case.
    std::vector<int> resolved(static_cast<std::size_t>(model.config().total_bins()), -1);

    for (int y = 0; y < query.height; ++y) {
        for (int x = 0; x < query.width; ++x) {
            const FeatureVector f = compute_feature(gray, x, y, model.config());
            const int idx = model.bin_index(f);
            if (resolved[idx] < 0) resolved[idx] = model.resolve_bin(f);
            const ChromaLookupModel::Bin& bin = model.bin(resolved[idx]);
            const double lightness = gray.at(x, y) * 100.0 / 255.0;
            out.set(x, y, lab_to_rgb_clamped(LabPixel{lightness, bin.a, bin.b}));
        }
    }

    return ReconstructionPair{query, std::move(out), PairSource::internal};
}

ReconstructionPair load_external_pair(const std::filesystem::path& original,
                                      const std::filesystem::path& reconstructed) {
    ColorImage orig = load_image(original);
    ColorImage recon = load_image(reconstructed);
    if (orig.width != recon.width || orig.height != recon.height) {
        throw std::runtime_error("dimension mismatch between " + original.string() + " (" +
                                 std::to_string(orig.width) + "x" + std::to_string(orig.height) + ") and " +
                                 reconstructed.string() + " (" + std::to_string(recon.width) + "x" +
                                 std::to_string(recon.height) + ")");
    }
    return ReconstructionPair{std::move(orig), std::move(recon), PairSource::external};
}

}  // namespace chromad

#include "chromad/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace chromad {

std::string to_string(ScoreMethod method) {
    switch (method) {
        case ScoreMethod::ciede2000: return "ciede2000";
        case ScoreMethod::hist: return "hist";
        case ScoreMethod::l2: return "l2";
        case ScoreMethod::ssim: return "ssim";
    }
    return "?";
}

ScoreMethod score_method_from_string(const std::string& s) {
    if (s == "ciede2000") return ScoreMethod::ciede2000;
    if (s == "hist") return ScoreMethod::hist;
    if (s == "l2") return ScoreMethod::l2;
    if (s == "ssim") return ScoreMethod::ssim;
    throw std::invalid_argument("unknown score method: " + s);
}

DiffMap diff_map(const ReconstructionPair& pair, const DeltaWeights& k) {
    if (pair.original.width != pair.reconstructed.width || pair.original.height != pair.reconstructed.height) {
        throw std::invalid_argument("diff_map: dimension mismatch");
    }
    const LabImage labA = rgb_to_lab(pair.original);
    const LabImage labB = rgb_to_lab(pair.reconstructed);
    DiffMap map(pair.original.width, pair.original.height);
    const std::size_t n = map.values.size();
    for (std::size_t i = 0; i < n; ++i) {
        map.values[i] = delta_e_2000(labA.pixels[i], labB.pixels[i], k).value;
    }
    return map;
}

AnomalyScore ciede_score(const DiffMap& map, const PixelMask* mask, ScoreNormalize normalize,
                         std::string image_id) {
    if (mask != nullptr && (mask->width != map.width || mask->height != map.height)) {
        throw std::invalid_argument("ciede_score: mask dimension mismatch");
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        if (mask != nullptr && mask->data[i] == 0) continue;
        sum += map.values[i];
        ++n;
    }
    if (normalize == ScoreNormalize::mean) {
        if (n == 0) throw std::invalid_argument("ciede_score: mean over a fully masked map");
        sum /= static_cast<double>(n);
    }
    return {std::move(image_id), ScoreMethod::ciede2000, sum};
}

HealthyHistogram build_reference_histogram(const std::vector<ColorImage>& healthy, std::string training_id) {
    if (healthy.empty()) throw std::invalid_argument("build_reference_histogram: empty image list");
    HealthyHistogram h;
    h.training_id = std::move(training_id);
    std::uint64_t total = 0;
    for (const auto& img : healthy) {
        for (std::size_t i = 0; i < img.pixel_count(); ++i) {
            const Rgb8 p{img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]};
            h.freq[HealthyHistogram::bin_of(p)] += 1.0;
            ++total;
        }
    }
    for (auto& f : h.freq) f /= static_cast<double>(total);
    return h;
}

AnomalyScore hist_score(const ColorImage& query, const HealthyHistogram& ref, std::string image_id) {
    std::array<double, 512> q{};
    const std::size_t n = query.pixel_count();
    if (n == 0) throw std::invalid_argument("hist_score: empty query image");
    for (std::size_t i = 0; i < n; ++i) {
        const Rgb8 p{query.data[3 * i], query.data[3 * i + 1], query.data[3 * i + 2]};
        q[HealthyHistogram::bin_of(p)] += 1.0;
    }
    double intersection = 0.0;
    for (std::size_t b = 0; b < q.size(); ++b) {
        intersection += std::min(q[b] / static_cast<double>(n), ref.freq[b]);
    }
    return {std::move(image_id), ScoreMethod::hist, 1.0 - intersection};
}

AnomalyScore l2_score(const ReconstructionPair& pair, std::string image_id) {
    if (pair.original.width != pair.reconstructed.width || pair.original.height != pair.reconstructed.height) {
        throw std::invalid_argument("l2_score: dimension mismatch");
    }
    double sum = 0.0;
    const std::size_t n = pair.original.data.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (static_cast<double>(pair.original.data[i]) - pair.reconstructed.data[i]) / 255.0;
        sum += d * d;
    }
    return {std::move(image_id), ScoreMethod::l2, sum / static_cast<double>(n)};
}

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;

std::array<double, kSsimWindow> gaussian_kernel() {
    std::array<double, kSsimWindow> k{};
    const int half = kSsimWindow / 2;
    double sum = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
        const double d = i - half;
        k[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
        sum += k[i];
    }
    for (auto& v : k) v /= sum;
    return k;
}

// Separable weighted filtering restricted to fully covered windows;
// output is (w-10) x (h-10).
std::vector<double> filter_valid(const std::vector<double>& img, int w, int h, int& outW, int& outH) {
    static const auto kernel = gaussian_kernel();
    const int half = kSsimWindow / 2;
    outW = w - 2 * half;
    outH = h - 2 * half;
    std::vector<double> tmp(static_cast<std::size_t>(outW) * h, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < outW; ++x) {
            double acc = 0.0;
            for (int i = 0; i < kSsimWindow; ++i) acc += kernel[i] * img[static_cast<std::size_t>(y) * w + x + i];
            tmp[static_cast<std::size_t>(y) * outW + x] = acc;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(outW) * outH, 0.0);
    for (int y = 0; y < outH; ++y) {
        for (int x = 0; x < outW; ++x) {
            double acc = 0.0;
            for (int i = 0; i < kSsimWindow; ++i) acc += kernel[i] * tmp[static_cast<std::size_t>(y + i) * outW + x];
            out[static_cast<std::size_t>(y) * outW + x] = acc;
        }
    }
    return out;
}

}  // namespace

AnomalyScore ssim_score(const ReconstructionPair& pair, std::string image_id) {
    const int w = pair.original.width;
    const int h = pair.original.height;
    if (w != pair.reconstructed.width || h != pair.reconstructed.height) {
        throw std::invalid_argument("ssim_score: dimension mismatch");
    }
    if (w < kSsimWindow || h < kSsimWindow) {
        throw std::invalid_argument("ssim_score: images must be at least 11x11");
    }

    const GrayImage ga = to_gray(pair.original, GrayMode::luma601);
    const GrayImage gb = to_gray(pair.reconstructed, GrayMode::luma601);

    const std::size_t n = ga.data.size();
    std::vector<double> a2(n), b2(n), ab(n);
    for (std::size_t i = 0; i < n; ++i) {
        a2[i] = ga.data[i] * ga.data[i];
        b2[i] = gb.data[i] * gb.data[i];
        ab[i] = ga.data[i] * gb.data[i];
    }

    int ow = 0, oh = 0;
    const auto muA = filter_valid(ga.data, w, h, ow, oh);
    const auto muB = filter_valid(gb.data, w, h, ow, oh);
    const auto mA2 = filter_valid(a2, w, h, ow, oh);
    const auto mB2 = filter_valid(b2, w, h, ow, oh);
    const auto mAB = filter_valid(ab, w, h, ow, oh);

    constexpr double kL = 255.0;
    constexpr double c1 = (0.01 * kL) * (0.01 * kL);
    constexpr double c2 = (0.03 * kL) * (0.03 * kL);

    double total = 0.0;
    const std::size_t m = muA.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double varA = mA2[i] - muA[i] * muA[i];
        const double varB = mB2[i] - muB[i] * muB[i];
        const double cov = mAB[i] - muA[i] * muB[i];
        const double num = (2.0 * muA[i] * muB[i] + c1) * (2.0 * cov + c2);
        const double den = (muA[i] * muA[i] + muB[i] * muB[i] + c1) * (varA + varB + c2);
        total += num / den;
    }
    return {std::move(image_id), ScoreMethod::ssim, 1.0 - total / static_cast<double>(m)};
}

void write_scores_csv(std::ostream& os, const std::vector<ScoreRecord>& records) {
    os << "image_id,label,method,score\n";
    char buf[64];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.value);
        os << r.image_id << ',' << r.label << ',' << to_string(r.method) << ',' << buf << '\n';
    }
}

std::vector<ScoreRecord> read_scores_csv(std::istream& is) {
    std::vector<ScoreRecord> out;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("scores CSV: empty file");
    if (line != "image_id,label,method,score") {
        throw std::runtime_error("scores CSV: unexpected header '" + line + "'");
    }
    std::size_t lineNo = 1;
    while (std::getline(is, line)) {
        ++lineNo;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string id, label, method, score;
        if (!std::getline(ss, id, ',') || !std::getline(ss, label, ',') || !std::getline(ss, method, ',') ||
            !std::getline(ss, score)) {
            throw std::runtime_error("scores CSV: malformed line " + std::to_string(lineNo));
        }
        ScoreRecord r;
        r.image_id = id;
        r.label = std::stoi(label);
        r.method = score_method_from_string(method);
        r.value = std::stod(score);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace chromad

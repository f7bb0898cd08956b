#include "chromad/dataset.hpp"

#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "chromad/colorspace.hpp"

namespace chromad {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(ClassLabel label) {
    return label == ClassLabel::healthy ? "healthy" : "diseased";
}

std::string to_string(Split split) {
    return split == Split::train ? "train" : "test";
}

namespace {

ClassLabel label_from_string(const std::string& s) {
    if (s == "healthy") return ClassLabel::healthy;
    if (s == "diseased") return ClassLabel::diseased;
    throw std::runtime_error("manifest: unknown class label '" + s + "'");
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "test") return Split::test;
    throw std::runtime_error("manifest: unknown split '" + s + "'");
}

// Pinned shuffle: Fisher-Yates over mt19937_64, j = next() mod (i+1).
void seeded_shuffle(std::vector<std::string>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

std::vector<std::string> list_files_sorted(const fs::path& dir, const fs::path& root) {
    std::vector<std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        out.push_back(e.path().lexically_relative(root).generic_string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::size_t Manifest::count(ClassLabel label, Split split) const {
    std::size_t n = 0;
    for (const auto& e : entries) {
        if (e.label == label && e.split == split) ++n;
    }
    return n;
}

void Manifest::validate() const {
    std::set<std::string> seen;
    for (const auto& e : entries) {
        if (e.label == ClassLabel::diseased && e.split == Split::train) {
            throw std::runtime_error("manifest: diseased image '" + e.path + "' assigned to the train split");
        }
        if (!seen.insert(e.path).second) {
            throw std::runtime_error("manifest: duplicate path '" + e.path + "'");
        }
    }
}

std::string Manifest::to_json() const {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["seed"] = seed;
    j["counts"] = {
        {"train_healthy", count(ClassLabel::healthy, Split::train)},
        {"test_healthy", count(ClassLabel::healthy, Split::test)},
        {"test_diseased", count(ClassLabel::diseased, Split::test)},
    };
    j["entries"] = json::array();
    for (const auto& e : entries) {
        j["entries"].push_back({{"path", e.path}, {"label", to_string(e.label)}, {"split", to_string(e.split)}});
    }
    return j.dump(2) + "\n";
}

Manifest Manifest::from_json(const std::string& text) {
    json j = json::parse(text);
    if (!j.contains("schema_version") || j["schema_version"].get<std::uint32_t>() != kSchemaVersion) {
        throw std::runtime_error("manifest: missing or unsupported schema_version");
    }
    Manifest m;
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& je : j.at("entries")) {
        m.entries.push_back(ManifestEntry{je.at("path").get<std::string>(),
                                          label_from_string(je.at("label").get<std::string>()),
                                          split_from_string(je.at("split").get<std::string>())});
    }
    m.validate();
    const auto& counts = j.at("counts");
    if (counts.at("train_healthy").get<std::size_t>() != m.count(ClassLabel::healthy, Split::train) ||
        counts.at("test_healthy").get<std::size_t>() != m.count(ClassLabel::healthy, Split::test) ||
        counts.at("test_diseased").get<std::size_t>() != m.count(ClassLabel::diseased, Split::test)) {
        throw std::runtime_error("manifest: counts do not match the entry list");
    }
    return m;
}

void Manifest::save(const fs::path& path) const {
    validate();
    const std::string text = to_json();
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write manifest: " + path.string());
        os << text;
    }
    fs::rename(tmp, path);
}

Manifest Manifest::load(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open manifest: " + path.string());
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    try {
        return from_json(text);
    } catch (const json::exception& e) {
        throw std::runtime_error("manifest " + path.string() + ": " + e.what());
    }
}

Manifest build_manifest(const fs::path& root, double healthy_train_fraction,
                        std::optional<std::size_t> diseased_test_count, std::uint64_t seed) {
    if (!(healthy_train_fraction > 0.0 && healthy_train_fraction < 1.0)) {
        throw std::invalid_argument("healthy_train_fraction must be in (0,1)");
    }
    const fs::path healthyDir = root / "healthy";
    const fs::path diseasedDir = root / "diseased";
    if (!fs::is_directory(healthyDir)) throw std::runtime_error("missing directory: " + healthyDir.string());
    if (!fs::is_directory(diseasedDir)) throw std::runtime_error("missing directory: " + diseasedDir.string());

    std::vector<std::string> healthy = list_files_sorted(healthyDir, root);
    std::vector<std::string> diseased = list_files_sorted(diseasedDir, root);
    if (healthy.empty()) throw std::runtime_error("no healthy images under " + healthyDir.string());

    std::mt19937_64 rng(seed);
    seeded_shuffle(healthy, rng);
    seeded_shuffle(diseased, rng);

    const auto nTrain = static_cast<std::size_t>(std::llround(healthy_train_fraction * static_cast<double>(healthy.size())));
    const std::size_t nDiseased = diseased_test_count.value_or(diseased.size());
    if (nDiseased > diseased.size()) {
        throw std::runtime_error("requested " + std::to_string(nDiseased) + " diseased test images, only " +
                                 std::to_string(diseased.size()) + " available");
    }

    Manifest m;
    m.seed = seed;
    for (std::size_t i = 0; i < healthy.size(); ++i) {
        m.entries.push_back({healthy[i], ClassLabel::healthy, i < nTrain ? Split::train : Split::test});
    }
    for (std::size_t i = 0; i < nDiseased; ++i) {
        m.entries.push_back({diseased[i], ClassLabel::diseased, Split::test});
    }
    m.validate();
    return m;
}

ColorImage load_image(const fs::path& path) {
    cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (raw.empty()) throw std::runtime_error("cannot decode image: " + path.string());

    if (raw.depth() == CV_16U) {
        // keep the high byte (truncate, not round)
        cv::Mat down(raw.rows, raw.cols, CV_MAKETYPE(CV_8U, raw.channels()));
        for (int y = 0; y < raw.rows; ++y) {
            const auto* src = raw.ptr<std::uint16_t>(y);
            auto* dst = down.ptr<std::uint8_t>(y);
            for (int i = 0; i < raw.cols * raw.channels(); ++i) dst[i] = static_cast<std::uint8_t>(src[i] >> 8);
        }
        raw = down;
    } else if (raw.depth() != CV_8U) {
        throw std::runtime_error("unsupported bit depth in image: " + path.string());
    }

    ColorImage img(raw.cols, raw.rows);
    if (raw.channels() == 1) {
        for (int y = 0; y < raw.rows; ++y) {
            const auto* src = raw.ptr<std::uint8_t>(y);
            for (int x = 0; x < raw.cols; ++x) img.set(x, y, {src[x], src[x], src[x]});
        }
    } else if (raw.channels() == 3 || raw.channels() == 4) {
        const int ch = raw.channels();
        for (int y = 0; y < raw.rows; ++y) {
            const auto* src = raw.ptr<std::uint8_t>(y);
            for (int x = 0; x < raw.cols; ++x) {
                // OpenCV stores BGR(A)
                img.set(x, y, {src[x * ch + 2], src[x * ch + 1], src[x * ch]});
            }
        }
    } else {
        throw std::runtime_error("unsupported channel count in image: " + path.string());
    }
    return img;
}

namespace {

void write_png_atomic(const cv::Mat& mat, const fs::path& path) {
    std::vector<unsigned char> buf;
    if (!cv::imencode(".png", mat, buf)) {
        throw std::runtime_error("PNG encoding failed for " + path.string());
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write image: " + path.string());
        os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    }
    fs::rename(tmp, path);
}

}  // namespace

void save_image_png(const ColorImage& img, const fs::path& path) {
    cv::Mat mat(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        auto* dst = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width; ++x) {
            const Rgb8 p = img.at(x, y);
            dst[x * 3] = p.b;
            dst[x * 3 + 1] = p.g;
            dst[x * 3 + 2] = p.r;
        }
    }
    write_png_atomic(mat, path);
}

PixelMask load_mask(const fs::path& path) {
    const ColorImage img = load_image(path);
    PixelMask mask(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) mask.set(x, y, img.at(x, y).r > 127);
    }
    return mask;
}

void save_mask_png(const PixelMask& mask, const fs::path& path) {
    cv::Mat mat(mask.height, mask.width, CV_8UC1);
    for (int y = 0; y < mask.height; ++y) {
        auto* dst = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < mask.width; ++x) dst[x] = mask.at(x, y) ? 255 : 0;
    }
    write_png_atomic(mat, path);
}

namespace {

// Fixture randomness: every draw comes from mt19937_64 through the two
// helpers below, so the generated trees are reproducible bit-for-bit.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Box-Muller, cosine branch only.
double normal(std::mt19937_64& rng, double mean, double sd) {
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = uniform01(rng);
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

struct LeafShape {
    double cx, cy, rx, ry;
    bool inside(int x, int y) const {
        const double dx = (x - cx) / rx;
        const double dy = (y - cy) / ry;
        return dx * dx + dy * dy <= 1.0;
    }
};

std::uint64_t image_seed(std::uint64_t seed, int kind, int index) {
    return seed * 1000003ULL + static_cast<std::uint64_t>(kind) * 1000ULL + static_cast<std::uint64_t>(index);
}

void generate_leaf(std::mt19937_64& rng, int size, ColorImage& img, PixelMask* blotchMask) {
    const int w = size;
    const int h = size;
    const LeafShape leaf{
        w * (0.5 + uniform(rng, -0.03, 0.03)),
        h * (0.5 + uniform(rng, -0.03, 0.03)),
        w * uniform(rng, 0.33, 0.40),
        h * uniform(rng, 0.26, 0.33),
    };
    const double p1 = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double p2 = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double p3 = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double f1 = uniform(rng, 1.5, 3.0);
    const double f2 = uniform(rng, 2.0, 4.0);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            // noise drawn for every pixel so the stream does not depend on
            // the leaf shape
            const double nL = normal(rng, 0.0, 0.8);
            const double na = normal(rng, 0.0, 0.8);
            const double nb = normal(rng, 0.0, 0.8);
            if (!leaf.inside(x, y)) continue;

            const double base = 48.0 +
                                14.0 * std::sin(2.0 * std::numbers::pi * f1 * x / w + p1) *
                                    std::cos(2.0 * std::numbers::pi * f2 * y / h + p2) +
                                8.0 * std::sin(2.0 * std::numbers::pi * (x + y) / (0.7 * w) + p3);
            const double L = std::clamp(base + nL, 5.0, 95.0);
            // chroma tied to lightness so the intensity features alone can
            // recover it
            const double a = -38.0 + 0.28 * (L - 48.0) + na;
            const double b = 32.0 + 0.22 * (L - 48.0) + nb;
            img.set(x, y, lab_to_rgb_clamped(LabPixel{L, a, b}));
        }
    }

    if (blotchMask == nullptr) return;

    const int nBlotches = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < nBlotches; ++i) {
        const double bx = leaf.cx + uniform(rng, -0.55, 0.55) * leaf.rx;
        const double by = leaf.cy + uniform(rng, -0.55, 0.55) * leaf.ry;
        const double brx = size * uniform(rng, 0.04, 0.10);
        const double bry = size * uniform(rng, 0.04, 0.10);
        double Lb, ab, bb;
        if (uniform01(rng) < 0.6) {  // brown spot
            Lb = uniform(rng, 32.0, 44.0);
            ab = uniform(rng, 14.0, 22.0);
            bb = uniform(rng, 26.0, 36.0);
        } else {  // yellow discoloration
            Lb = uniform(rng, 60.0, 72.0);
            ab = uniform(rng, -6.0, 2.0);
            bb = uniform(rng, 50.0, 62.0);
        }
        const int x0 = std::max(0, static_cast<int>(std::floor(bx - brx)));
        const int x1 = std::min(size - 1, static_cast<int>(std::ceil(bx + brx)));
        const int y0 = std::max(0, static_cast<int>(std::floor(by - bry)));
        const int y1 = std::min(size - 1, static_cast<int>(std::ceil(by + bry)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = (x - bx) / brx;
                const double dy = (y - by) / bry;
                if (dx * dx + dy * dy > 1.0 || !leaf.inside(x, y)) continue;
                const double L = std::clamp(Lb + normal(rng, 0.0, 0.6), 5.0, 95.0);
                const double a = ab + normal(rng, 0.0, 0.6);
                const double b = bb + normal(rng, 0.0, 0.6);
                img.set(x, y, lab_to_rgb_clamped(LabPixel{L, a, b}));
                blotchMask->set(x, y, true);
            }
        }
    }
}

}  // namespace

void synth_fixture(const FixtureSpec& spec, const fs::path& out_root) {
    if (spec.n_healthy_train <= 0 || spec.n_healthy_test <= 0 || spec.n_diseased_test <= 0 || spec.size <= 0) {
        throw std::invalid_argument("synth_fixture: all counts and size must be positive");
    }
    fs::create_directories(out_root / "healthy");
    fs::create_directories(out_root / "diseased");
    fs::create_directories(out_root / "masks");

    char name[64];
    const int nHealthy = spec.n_healthy_train + spec.n_healthy_test;
    for (int i = 0; i < nHealthy; ++i) {
        std::mt19937_64 rng(image_seed(spec.seed, 0, i));
        ColorImage img(spec.size, spec.size);
        generate_leaf(rng, spec.size, img, nullptr);
        std::snprintf(name, sizeof(name), "healthy_%04d.png", i);
        save_image_png(img, out_root / "healthy" / name);
    }
    for (int i = 0; i < spec.n_diseased_test; ++i) {
        std::mt19937_64 rng(image_seed(spec.seed, 1, i));
        ColorImage img(spec.size, spec.size);
        PixelMask mask(spec.size, spec.size);
        generate_leaf(rng, spec.size, img, &mask);
        std::snprintf(name, sizeof(name), "diseased_%04d.png", i);
        save_image_png(img, out_root / "diseased" / name);
        std::snprintf(name, sizeof(name), "diseased_%04d_mask.png", i);
        save_mask_png(mask, out_root / "masks" / name);
    }
}

}  // namespace chromad

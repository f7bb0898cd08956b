#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chromad/image.hpp"

namespace chromad {

enum class ClassLabel { healthy, diseased };
enum class Split { train, test };

std::string to_string(ClassLabel label);
std::string to_string(Split split);

struct ManifestEntry {
    std::string path;  // relative to the dataset root
    ClassLabel label = ClassLabel::healthy;
    Split split = Split::test;

    bool operator==(const ManifestEntry&) const = default;
};

/// Deterministic train/test assignment over a healthy/ + diseased/ folder
/// layout. Entries never place a diseased image in the train split; save()
/// and load() enforce that along with path uniqueness and count consistency.
struct Manifest {
    static constexpr std::uint32_t kSchemaVersion = 1;

    std::uint64_t seed = 0;
    std::vector<ManifestEntry> entries;

    std::size_t count(ClassLabel label, Split split) const;
    void validate() const;  // throws std::runtime_error on invariant violation

    std::string to_json() const;
    static Manifest from_json(const std::string& text);

    void save(const std::filesystem::path& path) const;
    static Manifest load(const std::filesystem::path& path);

    bool operator==(const Manifest&) const = default;
};

/// Shuffles the sorted healthy file list with mt19937_64(seed) and
/// Fisher-Yates (j = next() mod (i+1), i from n-1 down to 1), sends the
/// first round(fraction*n) to train and the rest to test, then shuffles the
/// diseased list with the same engine (continued stream) and sends the
/// first diseased_test_count (all when nullopt) to test.
Manifest build_manifest(const std::filesystem::path& root, double healthy_train_fraction,
                        std::optional<std::size_t> diseased_test_count, std::uint64_t seed);

/// Decodes a PNG or JPEG file to 8-bit RGB. Alpha is discarded, grayscale is
/// replicated across channels, 16-bit sources keep their high byte.
ColorImage load_image(const std::filesystem::path& path);

/// Writes 8-bit RGB PNG. The write goes to a temporary file first and is
/// renamed into place.
void save_image_png(const ColorImage& img, const std::filesystem::path& path);

PixelMask load_mask(const std::filesystem::path& path);  // nonzero where any channel > 127
void save_mask_png(const PixelMask& mask, const std::filesystem::path& path);

struct FixtureSpec {
    std::uint64_t seed = 0;
    int n_healthy_train = 40;
    int n_healthy_test = 40;
    int n_diseased_test = 40;
    int size = 128;
};

/// Generates the synthetic leaf fixture: healthy/ images (green elliptical
/// leaf, textured lightness, black background), diseased/ images (same plus
/// 1-5 brown or yellow blotches) and masks/ with one binary blotch mask per
/// diseased image. Byte-identical across runs for a fixed spec.
void synth_fixture(const FixtureSpec& spec, const std::filesystem::path& out_root);

}  // namespace chromad

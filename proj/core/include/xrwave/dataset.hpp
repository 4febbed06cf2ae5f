#ifndef XRWAVE_DATASET_HPP
#define XRWAVE_DATASET_HPP

#include <array>
#include <bitset>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "xrwave/errors.hpp"

namespace xrwave {

inline constexpr int kNumClasses = 14;
using LabelBits = std::bitset<kNumClasses>;

// Fixed class order of the ChestX-ray14 labeling scheme.
const std::array<std::string, kNumClasses>& class_names();
// Index of a class name; -1 when unknown. Trims surrounding whitespace,
// case-sensitive after that.
int class_index(const std::string& name);

struct ManifestEntry {
    std::string image_id;
    std::string path;
    std::string patient_id; // empty when the source has no patient column
    LabelBits labels;
};

struct SplitManifest {
    std::vector<ManifestEntry> train;
    std::vector<ManifestEntry> validation;
    std::vector<ManifestEntry> test;
    std::uint64_t seed = 0;
    std::array<double, 3> ratios{0.70, 0.15, 0.15};
};

// '|'-separated class tokens, or the single token "No Finding" (all-zero).
// Duplicate tokens are idempotent. Throws Error("UnknownLabel").
LabelBits encode_labels(const std::string& label_string);

// Inverse rendering: set bits joined with '|' in class order; empty set
// renders as "No Finding".
std::string decode_labels(const LabelBits& bits);

// CSV with a header row; requires columns "Image Index" and "Finding Labels",
// uses "Patient ID" when present, ignores everything else. Quoted fields
// allowed. Row order preserved.
std::vector<ManifestEntry> parse_manifest(const std::filesystem::path& csv_path);

// count[i] = entries with bit i set; multi-label entries count once per bit.
std::array<std::int64_t, kNumClasses> class_histogram(const std::vector<ManifestEntry>& entries);

// Seeded shuffle, then cut at floor(N*r1) and floor(N*(r1+r2)).
SplitManifest split(const std::vector<ManifestEntry>& entries, std::array<double, 3> ratios,
                    std::uint64_t seed);

// Patient-grouped variant: all entries of one patient land in the same split.
// Groups are shuffled and assigned greedily against the same cut points.
SplitManifest split_grouped(const std::vector<ManifestEntry>& entries,
                            std::array<double, 3> ratios, std::uint64_t seed);

// Writes train.csv / validation.csv / test.csv (manifest schema plus a
// "split" column) and split_meta.json (seed, ratios, counts) into out_dir.
void write_split(const SplitManifest& manifest, const std::filesystem::path& out_dir);

// Reads one split CSV written by write_split (or any manifest CSV).
std::vector<ManifestEntry> read_split_csv(const std::filesystem::path& csv_path);

} // namespace xrwave

#endif

#include "xrwave/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "xrwave/rng.hpp"

namespace xrwave {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// One CSV record; handles quoted fields with embedded commas and "" escapes.
std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void check_ratios(const std::array<double, 3>& ratios) {
    for (double r : ratios)
        if (r <= 0.0 || r >= 1.0)
            throw Error("BadRatios", "each ratio must lie in (0, 1)");
    const double sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error("BadRatios", "ratios sum to " + std::to_string(sum) + ", expected 1");
}

void shuffle_indices(std::vector<std::size_t>& idx, std::uint64_t seed) {
    Rng rng(seed);
    for (std::size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[rng.uniform_index(i)]);
}

void write_split_csv(const std::vector<ManifestEntry>& entries, const std::string& tag,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot open for writing: " + path.string());
    out << "Image Index,Finding Labels,Patient ID,split\n";
    for (const auto& e : entries) {
        out << csv_quote(e.image_id) << "," << csv_quote(decode_labels(e.labels)) << ","
            << csv_quote(e.patient_id) << "," << tag << "\n";
    }
}

} // namespace

const std::array<std::string, kNumClasses>& class_names() {
    static const std::array<std::string, kNumClasses> names = {
        "Infiltration", "Effusion", "Atelectasis", "Nodule", "Mass", "Consolidation",
        "Pneumothorax", "Pleural Thickening", "Cardiomegaly", "Emphysema", "Edema",
        "Fibrosis", "Pneumonia", "Hernia"};
    return names;
}

int class_index(const std::string& name) {
    const std::string key = trim(name);
    const auto& names = class_names();
    for (int i = 0; i < kNumClasses; ++i)
        if (names[i] == key) return i;
    return -1;
}

LabelBits encode_labels(const std::string& label_string) {
    LabelBits bits;
    std::stringstream ss(label_string);
    std::string token;
    while (std::getline(ss, token, '|')) {
        token = trim(token);
        if (token.empty()) continue;
        if (token == "No Finding") continue;
        const int idx = class_index(token);
        if (idx < 0) throw Error("UnknownLabel", "'" + token + "'");
        bits.set(static_cast<std::size_t>(idx));
    }
    return bits;
}

std::string decode_labels(const LabelBits& bits) {
    if (bits.none()) return "No Finding";
    std::string out;
    for (int i = 0; i < kNumClasses; ++i) {
        if (!bits.test(static_cast<std::size_t>(i))) continue;
        if (!out.empty()) out.push_back('|');
        out += class_names()[static_cast<std::size_t>(i)];
    }
    return out;
}

std::vector<ManifestEntry> parse_manifest(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw Error("FileNotFound", csv_path.string());

    std::string line;
    if (!std::getline(in, line))
        throw Error("MalformedRow", csv_path.string() + ": missing header row");
    const auto header = parse_csv_line(line);

    auto column = [&header](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (trim(header[i]) == name) return static_cast<long>(i);
        return -1L;
    };
    const long id_col = column("Image Index");
    const long label_col = column("Finding Labels");
    const long patient_col = column("Patient ID");
    if (id_col < 0) throw Error("MissingColumn", "Image Index");
    if (label_col < 0) throw Error("MissingColumn", "Finding Labels");

    std::vector<ManifestEntry> entries;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = parse_csv_line(line);
        const long needed = std::max(id_col, label_col) + 1;
        if (static_cast<long>(fields.size()) < needed)
            throw Error("MalformedRow", csv_path.string() + ":" + std::to_string(line_no));
        ManifestEntry e;
        e.image_id = trim(fields[static_cast<std::size_t>(id_col)]);
        e.path = e.image_id;
        if (patient_col >= 0 && patient_col < static_cast<long>(fields.size()))
            e.patient_id = trim(fields[static_cast<std::size_t>(patient_col)]);
        try {
            e.labels = encode_labels(fields[static_cast<std::size_t>(label_col)]);
        } catch (const Error& err) {
            throw Error(err.tag(), csv_path.string() + ":" + std::to_string(line_no) + ": " +
                                       err.what());
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

std::array<std::int64_t, kNumClasses> class_histogram(const std::vector<ManifestEntry>& entries) {
    std::array<std::int64_t, kNumClasses> counts{};
    for (const auto& e : entries)
        for (int i = 0; i < kNumClasses; ++i)
            if (e.labels.test(static_cast<std::size_t>(i))) ++counts[static_cast<std::size_t>(i)];
    return counts;
}

SplitManifest split(const std::vector<ManifestEntry>& entries, std::array<double, 3> ratios,
                    std::uint64_t seed) {
    check_ratios(ratios);
    const std::size_t n = entries.size();
    if (n < 3) throw Error("TooFewEntries", "need at least 3 entries, got " + std::to_string(n));

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle_indices(idx, seed);

    const auto cut1 = static_cast<std::size_t>(std::floor(n * ratios[0]));
    const auto cut2 = static_cast<std::size_t>(std::floor(n * (ratios[0] + ratios[1])));

    SplitManifest out;
    out.seed = seed;
    out.ratios = ratios;
    for (std::size_t i = 0; i < n; ++i) {
        const ManifestEntry& e = entries[idx[i]];
        if (i < cut1) out.train.push_back(e);
        else if (i < cut2) out.validation.push_back(e);
        else out.test.push_back(e);
    }
    return out;
}

SplitManifest split_grouped(const std::vector<ManifestEntry>& entries,
                            std::array<double, 3> ratios, std::uint64_t seed) {
    check_ratios(ratios);
    const std::size_t n = entries.size();
    if (n < 3) throw Error("TooFewEntries", "need at least 3 entries, got " + std::to_string(n));

    // Group by patient id, falling back to the image id for unlabeled rows so
    // they behave as singleton groups. Insertion order kept for determinism.
    std::vector<std::vector<std::size_t>> groups;
    std::map<std::string, std::size_t> group_of;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string key =
            entries[i].patient_id.empty() ? "#" + entries[i].image_id : entries[i].patient_id;
        auto [it, inserted] = group_of.try_emplace(key, groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(i);
    }

    std::vector<std::size_t> order(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) order[g] = g;
    shuffle_indices(order, seed);

    const auto cut1 = static_cast<std::size_t>(std::floor(n * ratios[0]));
    const auto cut2 = static_cast<std::size_t>(std::floor(n * (ratios[0] + ratios[1])));

    SplitManifest out;
    out.seed = seed;
    out.ratios = ratios;
    std::size_t assigned = 0;
    for (std::size_t g : order) {
        auto& dest = assigned < cut1 ? out.train : assigned < cut2 ? out.validation : out.test;
        for (std::size_t i : groups[g]) dest.push_back(entries[i]);
        assigned += groups[g].size();
    }
    return out;
}

void write_split(const SplitManifest& manifest, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_split_csv(manifest.train, "train", out_dir / "train.csv");
    write_split_csv(manifest.validation, "validation", out_dir / "validation.csv");
    write_split_csv(manifest.test, "test", out_dir / "test.csv");

    nlohmann::json meta;
    meta["seed"] = manifest.seed;
    meta["ratios"] = manifest.ratios;
    meta["counts"] = {{"train", manifest.train.size()},
                      {"validation", manifest.validation.size()},
                      {"test", manifest.test.size()}};
    std::ofstream out(out_dir / "split_meta.json", std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot write split_meta.json");
    out << meta.dump(2) << "\n";
}

std::vector<ManifestEntry> read_split_csv(const std::filesystem::path& csv_path) {
    return parse_manifest(csv_path);
}

} // namespace xrwave

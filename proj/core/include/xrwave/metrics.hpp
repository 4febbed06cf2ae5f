#ifndef XRWAVE_METRICS_HPP
#define XRWAVE_METRICS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "xrwave/dataset.hpp"
#include "xrwave/model.hpp"
#include "xrwave/pipeline.hpp"

namespace xrwave {

struct RocPoint {
    double threshold;
    double fpr;
    double tpr;
};

// Operating points at every distinct score, thresholds strictly decreasing,
// starting at (inf -> 0,0) and ending at (1,1). Tied scores move together,
// which makes the trapezoidal AUC equal the half-credit pairwise statistic.
struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
    std::int64_t n_pos = 0;
    std::int64_t n_neg = 0;
};

// Per-class evaluation result; curve is empty when the class has no positives
// or no negatives in the evaluated set.
struct ClassRoc {
    std::string class_name;
    std::optional<RocCurve> curve;
    std::int64_t n_pos = 0;
    std::int64_t n_neg = 0;
};

struct ComparisonRow {
    std::string class_name;
    std::optional<double> auc_raw;
    std::optional<double> auc_wavelet;
    std::optional<double> delta; // wavelet - raw, defined only when both are
    std::int64_t n_pos = 0;
    std::int64_t n_neg = 0;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
};

RocCurve roc_curve(const std::vector<double>& scores, const std::vector<int>& labels);

// Independent O(P*N) oracle: probability a random positive outscores a random
// negative, ties counting one half.
double auc_pairwise_oracle(const std::vector<double>& scores, const std::vector<int>& labels);

struct EvalConfig {
    InputMode mode = InputMode::wavelet;
    WaveletFilter filter = WaveletFilter::haar();
    int target_w = 64;
    int target_h = 64;
    std::filesystem::path image_dir; // prefix for ManifestEntry::path
    int batch_size = 20;
};

// Scores every test entry with un-augmented inputs and builds one ROC per
// class that has both positives and negatives.
std::vector<ClassRoc> evaluate(const Model& model, const std::vector<ManifestEntry>& test_entries,
                               const EvalConfig& config);

// Requires both runs to cover the same classes (same evaluated test set).
ComparisonReport compare(const std::vector<ClassRoc>& run_raw,
                         const std::vector<ClassRoc>& run_wavelet);

// ROC CSV: columns class, threshold, fpr, tpr (threshold "inf" on the first
// point). Report CSV: class, auc_raw, auc_wavelet, delta, n_pos, n_neg,
// undefined cells written as "NA".
void write_roc_csv(const std::vector<ClassRoc>& rocs, const std::filesystem::path& path);
std::vector<ClassRoc> read_roc_csv(const std::filesystem::path& path);

// Per-class summary: class, auc (NA when undefined), n_pos, n_neg. The read
// side merges curve points from an adjacent ROC CSV when provided.
void write_summary_csv(const std::vector<ClassRoc>& rocs, const std::filesystem::path& path);
std::vector<ClassRoc> read_eval_dir(const std::filesystem::path& dir);
void write_report_csv(const ComparisonReport& report, const std::filesystem::path& path);

// 800x600 SVG, axes 0-1; wavelet curve solid, raw curve dotted.
void write_roc_svg(const std::string& class_name, const RocCurve* raw, const RocCurve* wavelet,
                   const std::filesystem::path& path);

} // namespace xrwave

#endif

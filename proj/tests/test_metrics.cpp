#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_helpers.hpp"
#include "xrwave/image_io.hpp"
#include "xrwave/metrics.hpp"

using namespace xrwave;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "xrwave_metrics_tests";
    fs::create_directories(dir);
    return dir;
}

void random_scores(std::uint64_t seed, std::size_t n, std::vector<double>& scores,
                   std::vector<int>& labels) {
    Rng rng(seed);
    scores.resize(n);
    labels.resize(n);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        // Coarse quantization forces plenty of score ties.
        scores[i] = std::floor(rng.uniform() * 20.0) / 20.0;
        labels[i] = rng.uniform() < 0.3 ? 1 : 0;
        (labels[i] ? has_pos : has_neg) = true;
    }
    if (!has_pos) labels[0] = 1;
    if (!has_neg) labels[n - 1] = 0;
}

} // namespace

TEST_CASE("roc_curve: perfect and reversed rankings") {
    const RocCurve perfect = roc_curve({0.9, 0.1}, {1, 0});
    CHECK(perfect.auc == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(perfect.points.front().fpr == 0.0);
    CHECK(perfect.points.front().tpr == 0.0);
    CHECK(std::isinf(perfect.points.front().threshold));
    CHECK(perfect.points.back().fpr == 1.0);
    CHECK(perfect.points.back().tpr == 1.0);

    CHECK(auc_pairwise_oracle({0.9, 0.1}, {1, 0}) == 1.0);
    CHECK(auc_pairwise_oracle({0.1, 0.9}, {1, 0}) == 0.0);
}

TEST_CASE("roc_curve: all-tied scores give the single diagonal segment") {
    const RocCurve curve = roc_curve({0.4, 0.4, 0.4, 0.4}, {1, 0, 1, 0});
    CHECK(curve.auc == doctest::Approx(0.5).epsilon(1e-15));
    REQUIRE(curve.points.size() == 2); // (0,0) then everything at once
    CHECK(curve.points[1].fpr == 1.0);
    CHECK(curve.points[1].tpr == 1.0);
}

TEST_CASE("roc_curve: mixed ranking example") {
    // Pairwise oracle: pairs (0.9,0.8) (0.9,0.2) (0.3,0.2) correct,
    // (0.3,0.8) wrong -> 3/4.
    const std::vector<double> scores{0.9, 0.8, 0.3, 0.2};
    const std::vector<int> labels{1, 0, 1, 0};
    CHECK(auc_pairwise_oracle(scores, labels) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(roc_curve(scores, labels).auc == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("roc_curve error paths") {
    CHECK_THROWS_WITH_AS(roc_curve({0.5, 0.4}, {1, 1}), doctest::Contains("DegenerateLabels"),
                         Error);
    CHECK_THROWS_WITH_AS(roc_curve({0.5, 0.4, 0.3}, {1, 0}), doctest::Contains("LengthMismatch"),
                         Error);
    CHECK_THROWS_WITH_AS(roc_curve({0.5}, {1}), doctest::Contains("LengthMismatch"), Error);
}

TEST_CASE("property: trapezoidal AUC equals the pairwise oracle") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        std::vector<double> scores;
        std::vector<int> labels;
        random_scores(seed, 40 + seed * 17 % 400, scores, labels);
        const double trap = roc_curve(scores, labels).auc;
        const double pair = auc_pairwise_oracle(scores, labels);
        CHECK(std::abs(trap - pair) < 1e-12);
    }
}

TEST_CASE("property: AUC invariant under strictly increasing transforms") {
    std::vector<double> scores;
    std::vector<int> labels;
    random_scores(12345, 200, scores, labels);
    const double base = roc_curve(scores, labels).auc;

    std::vector<double> warped(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        warped[i] = std::exp(3.0 * scores[i]) + 7.0;
    CHECK(roc_curve(warped, labels).auc == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("property: label complement symmetry") {
    std::vector<double> scores;
    std::vector<int> labels;
    random_scores(999, 150, scores, labels);
    const double base = roc_curve(scores, labels).auc;

    std::vector<double> negated(scores.size());
    std::vector<int> flipped(labels.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        negated[i] = -scores[i];
        flipped[i] = 1 - labels[i];
    }
    CHECK(roc_curve(negated, flipped).auc == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("property: curve monotonicity and endpoints") {
    for (std::uint64_t seed : {3u, 8u, 21u}) {
        std::vector<double> scores;
        std::vector<int> labels;
        random_scores(seed, 120, scores, labels);
        const RocCurve curve = roc_curve(scores, labels);
        CHECK(curve.points.front().fpr == 0.0);
        CHECK(curve.points.front().tpr == 0.0);
        CHECK(curve.points.back().fpr == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(curve.points.back().tpr == doctest::Approx(1.0).epsilon(1e-15));
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            CHECK(curve.points[i].fpr >= curve.points[i - 1].fpr);
            CHECK(curve.points[i].tpr >= curve.points[i - 1].tpr);
            CHECK(curve.points[i].threshold < curve.points[i - 1].threshold);
        }
        CHECK(curve.auc >= 0.0);
        CHECK(curve.auc <= 1.0);
    }
}

namespace {

// Test corpus where every entry's image exists; labels cycle through the
// first few classes and Hernia never appears.
std::vector<ManifestEntry> eval_corpus(const fs::path& dir, int n) {
    fs::create_directories(dir);
    std::vector<ManifestEntry> entries;
    for (int i = 0; i < n; ++i) {
        const std::string name = "eval_" + std::to_string(i) + ".png";
        save_png(oracle::random_image(8, 8, 1000 + static_cast<std::uint64_t>(i)), dir / name);
        ManifestEntry e;
        e.image_id = name;
        e.path = name;
        e.labels.set(static_cast<std::size_t>(i % 4)); // classes 0..3 only
        entries.push_back(std::move(e));
    }
    return entries;
}

} // namespace

TEST_CASE("evaluate: zero-weight model and undefined classes") {
    const fs::path dir = temp_dir() / "eval_corpus";
    const auto entries = eval_corpus(dir, 12);

    Model model = init_model(default_architecture(), TensorShape{1, 8, 8}, 4);
    for (Layer& layer : model.layers) {
        std::fill(layer.weights.begin(), layer.weights.end(), 0.0);
        std::fill(layer.biases.begin(), layer.biases.end(), 0.0);
    }

    EvalConfig ec;
    ec.mode = InputMode::raw;
    ec.target_w = 8;
    ec.target_h = 8;
    ec.image_dir = dir;
    ec.batch_size = 5;

    const auto rocs = evaluate(model, entries, ec);
    REQUIRE(rocs.size() == kNumClasses);
    for (int c = 0; c < 4; ++c) {
        REQUIRE(rocs[static_cast<std::size_t>(c)].curve.has_value());
        // all scores identical -> tie-handling diagonal
        CHECK(rocs[static_cast<std::size_t>(c)].curve->auc ==
              doctest::Approx(0.5).epsilon(1e-15));
    }
    for (int c = 4; c < kNumClasses; ++c)
        CHECK_FALSE(rocs[static_cast<std::size_t>(c)].curve.has_value());

    CHECK_THROWS_WITH_AS(evaluate(model, {}, ec), doctest::Contains("EmptySplit"), Error);
}

TEST_CASE("compare: self comparison, undefined handling, mismatch") {
    const fs::path dir = temp_dir() / "eval_corpus2";
    const auto entries = eval_corpus(dir, 16);
    const Model model = init_model(default_architecture(), TensorShape{1, 8, 8}, 10);
    EvalConfig ec;
    ec.mode = InputMode::raw;
    ec.target_w = 8;
    ec.target_h = 8;
    ec.image_dir = dir;

    const auto rocs = evaluate(model, entries, ec);
    const ComparisonReport self = compare(rocs, rocs);
    for (const auto& row : self.rows) {
        if (row.delta) CHECK(*row.delta == 0.0);
        else {
            CHECK_FALSE(row.auc_raw.has_value());
            CHECK_FALSE(row.auc_wavelet.has_value());
        }
    }

    auto shrunk = evaluate(model, std::vector<ManifestEntry>(entries.begin(), entries.end() - 4),
                           ec);
    CHECK_THROWS_WITH_AS(compare(rocs, shrunk), doctest::Contains("SplitMismatch"), Error);
}

TEST_CASE("roc/summary CSV round-trip preserves curves and counts") {
    const fs::path dir = temp_dir() / "csv_rt";
    fs::create_directories(dir);
    std::vector<double> scores;
    std::vector<int> labels;
    random_scores(31, 80, scores, labels);

    std::vector<ClassRoc> rocs;
    ClassRoc defined;
    defined.class_name = "Effusion";
    defined.curve = roc_curve(scores, labels);
    defined.n_pos = defined.curve->n_pos;
    defined.n_neg = defined.curve->n_neg;
    rocs.push_back(defined);
    ClassRoc undefined;
    undefined.class_name = "Hernia";
    undefined.n_pos = 0;
    undefined.n_neg = 80;
    rocs.push_back(undefined);

    write_roc_csv(rocs, dir / "roc.csv");
    write_summary_csv(rocs, dir / "summary.csv");
    const auto back = read_eval_dir(dir);
    REQUIRE(back.size() == 2);
    REQUIRE(back[0].curve.has_value());
    CHECK(back[0].curve->auc == doctest::Approx(defined.curve->auc).epsilon(1e-15));
    CHECK(back[0].curve->points.size() == defined.curve->points.size());
    CHECK(back[0].n_pos == defined.n_pos);
    CHECK_FALSE(back[1].curve.has_value());
    CHECK(back[1].n_neg == 80);
}

TEST_CASE("report CSV marks undefined deltas as NA") {
    ComparisonReport report;
    ComparisonRow row;
    row.class_name = "Pneumonia";
    row.n_pos = 0;
    row.n_neg = 10;
    report.rows.push_back(row);
    const fs::path path = temp_dir() / "report.csv";
    write_report_csv(report, path);
    std::ifstream in(path);
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    CHECK(header == "class,auc_raw,auc_wavelet,delta,n_pos,n_neg");
    CHECK(line == "Pneumonia,NA,NA,NA,0,10");
}

TEST_CASE("SVG overlay: solid wavelet, dotted raw, fixed viewport") {
    const RocCurve a = roc_curve({0.9, 0.7, 0.3, 0.1}, {1, 1, 0, 0});
    const RocCurve b = roc_curve({0.9, 0.2, 0.8, 0.1}, {1, 1, 0, 0});
    const fs::path path = temp_dir() / "roc.svg";
    write_roc_svg("Atelectasis", &b, &a, path);

    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string svg = ss.str();
    CHECK(svg.find("width=\"800\" height=\"600\"") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    CHECK(svg.find("Atelectasis") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

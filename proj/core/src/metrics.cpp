#include "xrwave/metrics.hpp"

#include "xrwave/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace xrwave {

namespace {

void check_scores(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw Error("LengthMismatch", "scores and labels differ in length");
    if (scores.size() < 2)
        throw Error("LengthMismatch", "need at least 2 samples");
    std::int64_t pos = 0;
    for (int y : labels) pos += y ? 1 : 0;
    if (pos == 0 || pos == static_cast<std::int64_t>(labels.size()))
        throw Error("DegenerateLabels", "need at least one positive and one negative");
}

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(s);
}

} // namespace

RocCurve roc_curve(const std::vector<double>& scores, const std::vector<int>& labels) {
    check_scores(scores, labels);
    const std::size_t n = scores.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    for (int y : labels) (y ? curve.n_pos : curve.n_neg)++;
    const double inv_pos = 1.0 / static_cast<double>(curve.n_pos);
    const double inv_neg = 1.0 / static_cast<double>(curve.n_neg);

    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    std::int64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < n) {
        const double threshold = scores[order[i]];
        // All samples tied at this score flip together.
        while (i < n && scores[order[i]] == threshold) {
            (labels[order[i]] ? tp : fp)++;
            ++i;
        }
        curve.points.push_back({threshold, fp * inv_neg, tp * inv_pos});
    }

    double auc = 0.0;
    for (std::size_t p = 1; p < curve.points.size(); ++p) {
        const auto& a = curve.points[p - 1];
        const auto& b = curve.points[p];
        auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
    }
    curve.auc = auc;
    return curve;
}

double auc_pairwise_oracle(const std::vector<double>& scores, const std::vector<int>& labels) {
    check_scores(scores, labels);
    double wins = 0.0;
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

std::vector<ClassRoc> evaluate(const Model& model, const std::vector<ManifestEntry>& test_entries,
                               const EvalConfig& config) {
    if (test_entries.empty()) throw Error("EmptySplit", "test split is empty");

    const TensorShape shape = model.input_shape;
    std::vector<std::vector<double>> scores(kNumClasses);

    std::size_t done = 0;
    while (done < test_entries.size()) {
        const std::size_t take =
            std::min<std::size_t>(static_cast<std::size_t>(config.batch_size),
                                  test_entries.size() - done);
        Batch batch;
        batch.batch = static_cast<int>(take);
        batch.shape = shape;
        batch.data.reserve(take * shape.flat());
        for (std::size_t b = 0; b < take; ++b) {
            const Image img = load_image(config.image_dir / test_entries[done + b].path);
            const InputTensor tensor =
                build_input(img, config.mode, config.filter, config.target_w, config.target_h);
            for (const Image& ch : tensor.channels)
                batch.data.insert(batch.data.end(), ch.data.begin(), ch.data.end());
        }
        const std::vector<double> probs = forward(model, batch);
        for (std::size_t b = 0; b < take; ++b)
            for (int c = 0; c < kNumClasses; ++c)
                scores[static_cast<std::size_t>(c)].push_back(
                    probs[b * kNumClasses + static_cast<std::size_t>(c)]);
        done += take;
    }

    std::vector<ClassRoc> out;
    for (int c = 0; c < kNumClasses; ++c) {
        ClassRoc cr;
        cr.class_name = class_names()[static_cast<std::size_t>(c)];
        std::vector<int> labels;
        labels.reserve(test_entries.size());
        for (const auto& e : test_entries)
            labels.push_back(e.labels.test(static_cast<std::size_t>(c)) ? 1 : 0);
        for (int y : labels) (y ? cr.n_pos : cr.n_neg)++;
        if (cr.n_pos > 0 && cr.n_neg > 0)
            cr.curve = roc_curve(scores[static_cast<std::size_t>(c)], labels);
        out.push_back(std::move(cr));
    }
    return out;
}

ComparisonReport compare(const std::vector<ClassRoc>& run_raw,
                         const std::vector<ClassRoc>& run_wavelet) {
    if (run_raw.size() != run_wavelet.size())
        throw Error("SplitMismatch", "runs cover different class sets");
    ComparisonReport report;
    for (std::size_t i = 0; i < run_raw.size(); ++i) {
        const ClassRoc& r = run_raw[i];
        const ClassRoc& w = run_wavelet[i];
        if (r.class_name != w.class_name)
            throw Error("SplitMismatch", "class order differs between runs");
        if (r.n_pos != w.n_pos || r.n_neg != w.n_neg)
            throw Error("SplitMismatch", r.class_name + ": label counts differ between runs");
        ComparisonRow row;
        row.class_name = r.class_name;
        row.n_pos = r.n_pos;
        row.n_neg = r.n_neg;
        if (r.curve) row.auc_raw = r.curve->auc;
        if (w.curve) row.auc_wavelet = w.curve->auc;
        if (row.auc_raw && row.auc_wavelet) row.delta = *row.auc_wavelet - *row.auc_raw;
        report.rows.push_back(std::move(row));
    }
    return report;
}

void write_roc_csv(const std::vector<ClassRoc>& rocs, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot open for writing: " + path.string());
    out << "class,threshold,fpr,tpr\n";
    for (const ClassRoc& cr : rocs) {
        if (!cr.curve) continue;
        for (const RocPoint& p : cr.curve->points)
            out << cr.class_name << "," << fmt_double(p.threshold) << "," << fmt_double(p.fpr)
                << "," << fmt_double(p.tpr) << "\n";
    }
}

std::vector<ClassRoc> read_roc_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("FileNotFound", path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("class,threshold,fpr,tpr", 0) != 0)
        throw Error("MalformedRow", path.string() + ": bad ROC CSV header");

    std::map<std::string, RocCurve> curves;
    std::vector<std::string> order;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cls, thr, fpr, tpr;
        if (!std::getline(ss, cls, ',') || !std::getline(ss, thr, ',') ||
            !std::getline(ss, fpr, ',') || !std::getline(ss, tpr))
            throw Error("MalformedRow", path.string() + ": " + line);
        if (!tpr.empty() && tpr.back() == '\r') tpr.pop_back();
        if (curves.find(cls) == curves.end()) order.push_back(cls);
        curves[cls].points.push_back({parse_double(thr), parse_double(fpr), parse_double(tpr)});
    }

    std::vector<ClassRoc> out;
    for (const std::string& cls : order) {
        RocCurve& curve = curves[cls];
        double auc = 0.0;
        for (std::size_t p = 1; p < curve.points.size(); ++p)
            auc += (curve.points[p].fpr - curve.points[p - 1].fpr) *
                   (curve.points[p].tpr + curve.points[p - 1].tpr) * 0.5;
        curve.auc = auc;
        ClassRoc cr;
        cr.class_name = cls;
        cr.curve = std::move(curve);
        out.push_back(std::move(cr));
    }
    return out;
}

void write_summary_csv(const std::vector<ClassRoc>& rocs, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot open for writing: " + path.string());
    out << "class,auc,n_pos,n_neg\n";
    for (const ClassRoc& cr : rocs)
        out << cr.class_name << "," << (cr.curve ? fmt_double(cr.curve->auc) : "NA") << ","
            << cr.n_pos << "," << cr.n_neg << "\n";
}

std::vector<ClassRoc> read_eval_dir(const std::filesystem::path& dir) {
    std::ifstream in(dir / "summary.csv", std::ios::binary);
    if (!in) throw Error("FileNotFound", (dir / "summary.csv").string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("class,auc,n_pos,n_neg", 0) != 0)
        throw Error("MalformedRow", (dir / "summary.csv").string() + ": bad header");

    std::vector<ClassRoc> curves = read_roc_csv(dir / "roc.csv");
    std::map<std::string, RocCurve> by_class;
    for (ClassRoc& cr : curves)
        if (cr.curve) by_class[cr.class_name] = std::move(*cr.curve);

    std::vector<ClassRoc> out;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cls, auc, npos, nneg;
        if (!std::getline(ss, cls, ',') || !std::getline(ss, auc, ',') ||
            !std::getline(ss, npos, ',') || !std::getline(ss, nneg))
            throw Error("MalformedRow", (dir / "summary.csv").string() + ": " + line);
        if (!nneg.empty() && nneg.back() == '\r') nneg.pop_back();
        ClassRoc cr;
        cr.class_name = cls;
        cr.n_pos = std::stoll(npos);
        cr.n_neg = std::stoll(nneg);
        if (auc != "NA") {
            const auto it = by_class.find(cls);
            if (it == by_class.end())
                throw Error("MalformedRow", dir.string() + ": class " + cls +
                                                " has an AUC but no ROC rows");
            cr.curve = it->second;
        }
        out.push_back(std::move(cr));
    }
    return out;
}

void write_report_csv(const ComparisonReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot open for writing: " + path.string());
    out << "class,auc_raw,auc_wavelet,delta,n_pos,n_neg\n";
    auto cell = [](const std::optional<double>& v) { return v ? fmt_double(*v) : "NA"; };
    for (const ComparisonRow& row : report.rows)
        out << row.class_name << "," << cell(row.auc_raw) << "," << cell(row.auc_wavelet) << ","
            << cell(row.delta) << "," << row.n_pos << "," << row.n_neg << "\n";
}

void write_roc_svg(const std::string& class_name, const RocCurve* raw, const RocCurve* wavelet,
                   const std::filesystem::path& path) {
    // Fixed 800x600 viewport; plot area with margins, axes spanning [0,1].
    const double x0 = 80, y0 = 40, plot_w = 660, plot_h = 480;
    auto px = [&](double fpr) { return x0 + fpr * plot_w; };
    auto py = [&](double tpr) { return y0 + (1.0 - tpr) * plot_h; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot open for writing: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n";
    out << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"white\" stroke=\"black\"/>\n";
    out << "<text x=\"400\" y=\"25\" text-anchor=\"middle\" font-size=\"18\">ROC - " << class_name
        << "</text>\n";
    out << "<text x=\"" << x0 + plot_w / 2 << "\" y=\"585\" text-anchor=\"middle\" "
           "font-size=\"14\">False positive rate</text>\n";
    out << "<text x=\"20\" y=\"" << y0 + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
        << y0 + plot_h / 2 << ")\">True positive rate</text>\n";
    for (int t = 0; t <= 10; t += 2) {
        const double v = t / 10.0;
        out << "<text x=\"" << px(v) << "\" y=\"" << y0 + plot_h + 20
            << "\" text-anchor=\"middle\" font-size=\"12\">" << v << "</text>\n";
        out << "<text x=\"" << x0 - 10 << "\" y=\"" << py(v) + 4
            << "\" text-anchor=\"end\" font-size=\"12\">" << v << "</text>\n";
    }
    // Chance diagonal for reference.
    out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\""
        << py(1) << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";

    auto polyline = [&](const RocCurve& curve, const char* color, bool dotted) {
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
        if (dotted) out << " stroke-dasharray=\"3,4\"";
        out << " points=\"";
        for (const RocPoint& p : curve.points) out << px(p.fpr) << "," << py(p.tpr) << " ";
        out << "\"/>\n";
    };
    if (raw) polyline(*raw, "#d62728", true);       // dotted: trained on original images
    if (wavelet) polyline(*wavelet, "#1f77b4", false); // solid: trained on wavelet detail images
    out << "<text x=\"" << x0 + 10 << "\" y=\"" << y0 + 20 << "\" font-size=\"13\" "
        << "fill=\"#1f77b4\">solid: wavelet</text>\n";
    out << "<text x=\"" << x0 + 10 << "\" y=\"" << y0 + 38 << "\" font-size=\"13\" "
        << "fill=\"#d62728\">dotted: raw</text>\n";
    out << "</svg>\n";
}

} // namespace xrwave

// xrwave command-line pipeline: wavelet preprocessing, dataset splitting,
// training, ROC evaluation and the raw-vs-wavelet comparison report.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "xrwave/checkpoint.hpp"
#include "xrwave/config.hpp"
#include "xrwave/dataset.hpp"
#include "xrwave/image_io.hpp"
#include "xrwave/metrics.hpp"
#include "xrwave/synth.hpp"
#include "xrwave/trainer.hpp"
#include "xrwave/wavelet.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Tracks files created by the running command so a failure can remove its
// partial outputs before exiting nonzero.
class OutputGuard {
public:
    ~OutputGuard() {
        if (committed_) return;
        for (const fs::path& p : files_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
    fs::path track(fs::path p) {
        files_.push_back(p);
        return p;
    }
    void track_dir_contents(const fs::path& dir) {
        for (const char* name : {"train.csv", "validation.csv", "test.csv", "split_meta.json"})
            files_.push_back(dir / name);
    }
    void commit() { committed_ = true; }

private:
    std::vector<fs::path> files_;
    bool committed_ = false;
};

bool g_quiet = false;

void info(const std::string& msg) {
    if (!g_quiet) std::cout << msg << std::endl;
}

// FNV-1a over the ordered image ids; pins "same test set" for compare.
std::uint64_t test_set_fingerprint(const std::vector<xrwave::ManifestEntry>& entries) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& e : entries) {
        for (char c : e.image_id) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
        h ^= 0x1f;
        h *= 1099511628211ULL;
    }
    return h;
}

xrwave::RunConfig load_config(const std::string& config_path,
                              const std::optional<std::uint64_t>& seed_override,
                              const std::string& out_override) {
    xrwave::RunConfig cfg;
    if (!config_path.empty()) cfg = xrwave::parse_config(config_path);
    if (seed_override) cfg.hyper.seed = *seed_override;
    if (!out_override.empty()) cfg.out_dir = out_override;
    cfg.validate();
    return cfg;
}

xrwave::Model build_model(const xrwave::RunConfig& cfg) {
    const int channels = cfg.input_mode() == xrwave::InputMode::raw ? 1 : 2;
    xrwave::TensorShape shape{channels, cfg.target_h, cfg.target_w};
    xrwave::Model model =
        xrwave::init_model(xrwave::default_architecture(), shape, cfg.hyper.seed);
    xrwave::freeze_first(model, cfg.freeze_first_k);
    return model;
}

int run_dwt(const std::string& input, const std::string& filter_name, int depth,
            const std::string& out_dir, bool all_subbands) {
    OutputGuard guard;
    const xrwave::WaveletFilter filter = xrwave::WaveletFilter::by_name(filter_name);
    const xrwave::Image img = xrwave::load_image(input);
    fs::create_directories(out_dir);

    auto [vertical, horizontal] = xrwave::detail_images(img, filter);
    xrwave::save_png(vertical, guard.track(fs::path(out_dir) / "vertical.png"));
    xrwave::save_png(horizontal, guard.track(fs::path(out_dir) / "horizontal.png"));
    info("wrote vertical.png and horizontal.png");

    if (all_subbands || depth > 1) {
        const xrwave::Pyramid pyr = xrwave::decompose(img, filter, depth);
        for (int level = 0; level < pyr.depth; ++level) {
            const auto& sb = pyr.levels[static_cast<std::size_t>(level)];
            const std::string prefix = "level" + std::to_string(level + 1) + "_";
            xrwave::save_png(xrwave::rescale_unit(sb.ll),
                             guard.track(fs::path(out_dir) / (prefix + "ll.png")));
            xrwave::save_png(xrwave::rescale_unit(sb.lh),
                             guard.track(fs::path(out_dir) / (prefix + "lh.png")));
            xrwave::save_png(xrwave::rescale_unit(sb.hl),
                             guard.track(fs::path(out_dir) / (prefix + "hl.png")));
            xrwave::save_png(xrwave::rescale_unit(sb.hh),
                             guard.track(fs::path(out_dir) / (prefix + "hh.png")));
        }
        xrwave::save_png(xrwave::rescale_unit(pyr.final_ll),
                         guard.track(fs::path(out_dir) / "final_ll.png"));
        info("wrote subbands for " + std::to_string(pyr.depth) + " level(s)");
    }
    guard.commit();
    return 0;
}

int run_split(const std::string& manifest, std::vector<double> ratios, std::uint64_t seed,
              const std::string& out_dir, bool by_patient) {
    OutputGuard guard;
    const auto entries = xrwave::parse_manifest(manifest);
    const std::array<double, 3> r{ratios[0], ratios[1], ratios[2]};
    const xrwave::SplitManifest split_result =
        by_patient ? xrwave::split_grouped(entries, r, seed) : xrwave::split(entries, r, seed);
    fs::create_directories(out_dir);
    guard.track_dir_contents(out_dir);
    xrwave::write_split(split_result, out_dir);
    info("split " + std::to_string(entries.size()) + " entries into " +
         std::to_string(split_result.train.size()) + "/" +
         std::to_string(split_result.validation.size()) + "/" +
         std::to_string(split_result.test.size()));
    guard.commit();
    return 0;
}

int run_synth(const std::string& out_dir, int n, std::uint64_t seed) {
    xrwave::SynthConfig sc;
    sc.n = n;
    sc.seed = seed;
    const auto entries = xrwave::generate_synthetic_corpus(sc, out_dir);
    info("generated " + std::to_string(entries.size()) + " images under " + out_dir);
    return 0;
}

int run_train(const std::string& config_path, const std::optional<std::uint64_t>& seed_override,
              const std::string& out_override) {
    OutputGuard guard;
    xrwave::RunConfig cfg = load_config(config_path, seed_override, out_override);
    const fs::path out_dir = cfg.out_dir;
    fs::create_directories(out_dir);

    fs::path manifest = cfg.manifest_path;
    fs::path image_dir = cfg.image_dir;
    if (manifest.empty()) {
        // Self-contained demo: synthesize a corpus first.
        const fs::path synth_dir = out_dir / "synth_data";
        xrwave::SynthConfig sc;
        sc.n = cfg.synth_n;
        sc.seed = cfg.synth_seed;
        info("no manifest configured; generating synthetic corpus (n=" +
             std::to_string(sc.n) + ")");
        xrwave::generate_synthetic_corpus(sc, synth_dir);
        manifest = synth_dir / "manifest.csv";
        image_dir = synth_dir;
        cfg.manifest_path = manifest.string();
        cfg.image_dir = image_dir.string();
    }

    const auto entries = xrwave::parse_manifest(manifest);
    const xrwave::SplitManifest splits =
        cfg.split_by_patient ? xrwave::split_grouped(entries, cfg.split_ratios, cfg.split_seed)
                             : xrwave::split(entries, cfg.split_ratios, cfg.split_seed);
    const fs::path split_dir = out_dir / "splits";
    fs::create_directories(split_dir);
    guard.track_dir_contents(split_dir);
    xrwave::write_split(splits, split_dir);

    xrwave::Model model = build_model(cfg);
    info("training " + cfg.mode + " mode: " + std::to_string(splits.train.size()) +
         " train / " + std::to_string(splits.validation.size()) + " validation samples");
    xrwave::TrainResult result =
        xrwave::train(std::move(model), splits.train, splits.validation, cfg, !g_quiet);

    xrwave::save_checkpoint(result.model, guard.track(out_dir / "checkpoint.bin"));
    xrwave::write_history_csv(result.history, guard.track(out_dir / "history.csv"));
    xrwave::write_config(cfg, guard.track(out_dir / "config_used.cfg"));
    info("wrote checkpoint.bin, history.csv, config_used.cfg under " + out_dir.string());
    guard.commit();
    return 0;
}

int run_eval(const std::string& checkpoint, const std::string& test_csv,
             const std::string& config_path, const std::optional<std::uint64_t>& seed_override,
             const std::string& out_dir) {
    OutputGuard guard;
    const xrwave::RunConfig cfg = load_config(config_path, seed_override, "");
    const xrwave::Model model = xrwave::load_checkpoint(checkpoint);
    const auto test_entries = xrwave::read_split_csv(test_csv);

    xrwave::EvalConfig ec;
    ec.mode = cfg.input_mode();
    ec.filter = xrwave::WaveletFilter::by_name(cfg.filter);
    ec.target_w = cfg.target_w;
    ec.target_h = cfg.target_h;
    ec.image_dir = cfg.image_dir;
    ec.batch_size = cfg.hyper.batch_size;

    const auto rocs = xrwave::evaluate(model, test_entries, ec);
    fs::create_directories(out_dir);
    xrwave::write_roc_csv(rocs, guard.track(fs::path(out_dir) / "roc.csv"));
    xrwave::write_summary_csv(rocs, guard.track(fs::path(out_dir) / "summary.csv"));

    json meta;
    meta["mode"] = cfg.mode;
    meta["test_fingerprint"] = test_set_fingerprint(test_entries);
    meta["n_test"] = test_entries.size();
    {
        std::ofstream mf(fs::path(out_dir) / "eval_meta.json", std::ios::binary);
        guard.track(fs::path(out_dir) / "eval_meta.json");
        mf << meta.dump(2) << "\n";
    }
    for (const auto& cr : rocs)
        if (cr.curve)
            info(cr.class_name + ": AUC " + std::to_string(cr.curve->auc));
        else
            info(cr.class_name + ": undefined (needs positives and negatives)");
    guard.commit();
    return 0;
}

int run_compare(const std::string& raw_dir, const std::string& wavelet_dir,
                const std::string& out_dir) {
    OutputGuard guard;
    auto read_meta = [](const fs::path& dir) {
        std::ifstream in(dir / "eval_meta.json", std::ios::binary);
        if (!in) throw xrwave::Error("FileNotFound", (dir / "eval_meta.json").string());
        json j;
        in >> j;
        return j;
    };
    const json meta_raw = read_meta(raw_dir);
    const json meta_wavelet = read_meta(wavelet_dir);
    if (meta_raw["test_fingerprint"] != meta_wavelet["test_fingerprint"])
        throw xrwave::Error("SplitMismatch", "the two runs were evaluated on different test sets");

    const auto rocs_raw = xrwave::read_eval_dir(raw_dir);
    const auto rocs_wavelet = xrwave::read_eval_dir(wavelet_dir);
    const xrwave::ComparisonReport report = xrwave::compare(rocs_raw, rocs_wavelet);

    fs::create_directories(out_dir);
    xrwave::write_report_csv(report, guard.track(fs::path(out_dir) / "report.csv"));
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        if (!row.auc_raw && !row.auc_wavelet) continue;
        std::string fname = row.class_name;
        for (char& c : fname)
            if (c == ' ') c = '_';
        const xrwave::RocCurve* raw_curve =
            rocs_raw[i].curve ? &*rocs_raw[i].curve : nullptr;
        const xrwave::RocCurve* wavelet_curve =
            rocs_wavelet[i].curve ? &*rocs_wavelet[i].curve : nullptr;
        xrwave::write_roc_svg(row.class_name, raw_curve, wavelet_curve,
                              guard.track(fs::path(out_dir) / ("roc_" + fname + ".svg")));
        if (row.delta)
            info(row.class_name + ": delta AUC " + std::to_string(*row.delta));
        else
            info(row.class_name + ": delta undefined");
    }
    guard.commit();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelet-preprocessed chest X-ray classification pipeline"};
    app.require_subcommand(1);
    app.fallthrough(); // let global flags appear after the subcommand name

    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::string out_override;
    app.add_option("--config", config_path, "run configuration file")->configurable(false);
    app.add_option("--seed", seed_override, "override the config seed");
    app.add_option("--out", out_override, "override the output directory");
    app.add_flag("--quiet", g_quiet, "suppress progress output");

    // dwt
    auto* dwt = app.add_subcommand("dwt", "write detail images (and subbands) for one scan");
    std::string dwt_input, dwt_filter = "haar", dwt_out = "dwt_out";
    int dwt_depth = 1;
    bool dwt_subbands = false;
    dwt->add_option("input", dwt_input, "input image (.png or .pgm)")->required();
    dwt->add_option("--filter", dwt_filter, "wavelet filter: haar | db2");
    dwt->add_option("--depth", dwt_depth, "decomposition depth");
    dwt->add_flag("--subbands", dwt_subbands, "also write every subband");

    // split
    auto* split_cmd = app.add_subcommand("split", "split a manifest into train/validation/test");
    std::string split_manifest, split_out = "split_out";
    std::vector<double> split_ratios{0.70, 0.15, 0.15};
    std::uint64_t split_seed = 11;
    bool split_by_patient = false;
    split_cmd->add_option("manifest", split_manifest, "labels CSV")->required();
    split_cmd->add_option("--ratios", split_ratios, "train validation test ratios")
        ->expected(3);
    split_cmd->add_option("--split-seed", split_seed, "shuffle seed");
    split_cmd->add_flag("--by-patient", split_by_patient, "keep each patient in one split");

    // train
    auto* train_cmd = app.add_subcommand("train", "train a model per the run configuration");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score a test split and write ROC curves");
    std::string eval_checkpoint, eval_test, eval_out = "eval_out";
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "checkpoint file")->required();
    eval_cmd->add_option("--test", eval_test, "test split CSV")->required();
    eval_cmd->add_option("--eval-out", eval_out, "output directory");

    // compare
    auto* compare_cmd =
        app.add_subcommand("compare", "compare a raw-mode and a wavelet-mode evaluation");
    std::string cmp_raw, cmp_wavelet, cmp_out = "compare_out";
    compare_cmd->add_option("--raw", cmp_raw, "eval dir of the raw-mode run")->required();
    compare_cmd->add_option("--wavelet", cmp_wavelet, "eval dir of the wavelet-mode run")
        ->required();
    compare_cmd->add_option("--compare-out", cmp_out, "output directory");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate the synthetic demo corpus");
    std::string synth_out = "synth_out";
    int synth_n = 200;
    std::uint64_t synth_seed = 42;
    synth_cmd->add_option("--synth-out", synth_out, "output directory");
    synth_cmd->add_option("-n,--num", synth_n, "number of images (>= 30)");
    synth_cmd->add_option("--synth-seed", synth_seed, "corpus seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dwt->parsed())
            return run_dwt(dwt_input, dwt_filter, dwt_depth,
                           out_override.empty() ? dwt_out : out_override, dwt_subbands);
        if (split_cmd->parsed())
            return run_split(split_manifest, split_ratios,
                             seed_override.value_or(split_seed),
                             out_override.empty() ? split_out : out_override, split_by_patient);
        if (train_cmd->parsed()) return run_train(config_path, seed_override, out_override);
        if (eval_cmd->parsed())
            return run_eval(eval_checkpoint, eval_test, config_path, seed_override,
                            out_override.empty() ? eval_out : out_override);
        if (compare_cmd->parsed())
            return run_compare(cmp_raw, cmp_wavelet,
                               out_override.empty() ? cmp_out : out_override);
        if (synth_cmd->parsed()) {
            if (synth_n < 30) throw xrwave::Error("BadConfig", "synth needs n >= 30");
            return run_synth(out_override.empty() ? synth_out : out_override, synth_n,
                             seed_override.value_or(synth_seed));
        }
    } catch (const xrwave::Error& err) {
        std::cerr << "error: " << err.what() << std::endl;
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << std::endl;
        return 1;
    }
    return 0;
}

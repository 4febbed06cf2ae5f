#include "xrwave/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "xrwave/errors.hpp"

namespace xrwave {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void Hyperparams::validate() const {
    if (epochs < 1) throw Error("BadConfig", "epochs must be >= 1");
    if (batch_size < 1) throw Error("BadConfig", "batch_size must be >= 1");
    if (learning_rate < 0.0) throw Error("BadConfig", "learning_rate must be >= 0");
    if (momentum < 0.0 || momentum >= 1.0) throw Error("BadConfig", "momentum must be in [0, 1)");
}

InputMode RunConfig::input_mode() const {
    if (mode == "raw") return InputMode::raw;
    if (mode == "wavelet") return InputMode::wavelet;
    throw Error("BadConfig", "mode must be 'raw' or 'wavelet', got '" + mode + "'");
}

void RunConfig::validate() const {
    input_mode();
    WaveletFilter::by_name(filter);
    if (depth < 1) throw Error("BadConfig", "depth must be >= 1");
    if (target_w < 1 || target_h < 1) throw Error("BadConfig", "resize target must be >= 1");
    AugmentParams ap{aug_rotation_deg, aug_translate_frac, aug_scale_frac, aug_seed};
    ap.validate();
    hyper.validate();
    if (freeze_first_k < 0) throw Error("BadConfig", "freeze_first_k must be >= 0");
    if (lr_decay_factor <= 0.0 || lr_decay_factor > 1.0)
        throw Error("BadConfig", "lr_decay_factor must be in (0, 1]");
    if (lr_decay_every < 1) throw Error("BadConfig", "lr_decay_every must be >= 1");
    if (synth_n < 30) throw Error("BadConfig", "synth_n must be >= 30");
    const double sum = split_ratios[0] + split_ratios[1] + split_ratios[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error("BadRatios", "split ratios sum to " + std::to_string(sum));
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("FileNotFound", path.string());

    RunConfig cfg;
    std::map<std::string, std::function<void(const std::string&)>> setters = {
        {"mode", [&](const std::string& v) { cfg.mode = v; }},
        {"filter", [&](const std::string& v) { cfg.filter = v; }},
        {"depth", [&](const std::string& v) { cfg.depth = std::stoi(v); }},
        {"target_w", [&](const std::string& v) { cfg.target_w = std::stoi(v); }},
        {"target_h", [&](const std::string& v) { cfg.target_h = std::stoi(v); }},
        {"aug_rotation_deg", [&](const std::string& v) { cfg.aug_rotation_deg = std::stod(v); }},
        {"aug_translate_frac",
         [&](const std::string& v) { cfg.aug_translate_frac = std::stod(v); }},
        {"aug_scale_frac", [&](const std::string& v) { cfg.aug_scale_frac = std::stod(v); }},
        {"aug_seed", [&](const std::string& v) { cfg.aug_seed = std::stoull(v); }},
        {"split_train", [&](const std::string& v) { cfg.split_ratios[0] = std::stod(v); }},
        {"split_validation", [&](const std::string& v) { cfg.split_ratios[1] = std::stod(v); }},
        {"split_test", [&](const std::string& v) { cfg.split_ratios[2] = std::stod(v); }},
        {"split_seed", [&](const std::string& v) { cfg.split_seed = std::stoull(v); }},
        {"split_by_patient",
         [&](const std::string& v) { cfg.split_by_patient = (v == "true" || v == "1"); }},
        {"epochs", [&](const std::string& v) { cfg.hyper.epochs = std::stoi(v); }},
        {"batch_size", [&](const std::string& v) { cfg.hyper.batch_size = std::stoi(v); }},
        {"learning_rate", [&](const std::string& v) { cfg.hyper.learning_rate = std::stod(v); }},
        {"momentum", [&](const std::string& v) { cfg.hyper.momentum = std::stod(v); }},
        {"seed", [&](const std::string& v) { cfg.hyper.seed = std::stoull(v); }},
        {"freeze_first_k", [&](const std::string& v) { cfg.freeze_first_k = std::stoi(v); }},
        {"lr_decay_factor", [&](const std::string& v) { cfg.lr_decay_factor = std::stod(v); }},
        {"lr_decay_every", [&](const std::string& v) { cfg.lr_decay_every = std::stoi(v); }},
        {"manifest_path", [&](const std::string& v) { cfg.manifest_path = v; }},
        {"image_dir", [&](const std::string& v) { cfg.image_dir = v; }},
        {"out_dir", [&](const std::string& v) { cfg.out_dir = v; }},
        {"synth_n", [&](const std::string& v) { cfg.synth_n = std::stoi(v); }},
        {"synth_seed", [&](const std::string& v) { cfg.synth_seed = std::stoull(v); }},
    };

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw Error("BadConfig",
                        path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw Error("BadConfig", path.string() + ":" + std::to_string(line_no) +
                                         ": unknown key '" + key + "'");
        try {
            it->second(value);
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error("BadConfig", path.string() + ":" + std::to_string(line_no) +
                                         ": bad value for '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "mode = " << cfg.mode << "\n";
    out << "filter = " << cfg.filter << "\n";
    out << "depth = " << cfg.depth << "\n";
    out << "target_w = " << cfg.target_w << "\n";
    out << "target_h = " << cfg.target_h << "\n";
    out << "aug_rotation_deg = " << fmt(cfg.aug_rotation_deg) << "\n";
    out << "aug_translate_frac = " << fmt(cfg.aug_translate_frac) << "\n";
    out << "aug_scale_frac = " << fmt(cfg.aug_scale_frac) << "\n";
    out << "aug_seed = " << cfg.aug_seed << "\n";
    out << "split_train = " << fmt(cfg.split_ratios[0]) << "\n";
    out << "split_validation = " << fmt(cfg.split_ratios[1]) << "\n";
    out << "split_test = " << fmt(cfg.split_ratios[2]) << "\n";
    out << "split_seed = " << cfg.split_seed << "\n";
    out << "split_by_patient = " << (cfg.split_by_patient ? "true" : "false") << "\n";
    out << "epochs = " << cfg.hyper.epochs << "\n";
    out << "batch_size = " << cfg.hyper.batch_size << "\n";
    out << "learning_rate = " << fmt(cfg.hyper.learning_rate) << "\n";
    out << "momentum = " << fmt(cfg.hyper.momentum) << "\n";
    out << "seed = " << cfg.hyper.seed << "\n";
    out << "freeze_first_k = " << cfg.freeze_first_k << "\n";
    out << "lr_decay_factor = " << fmt(cfg.lr_decay_factor) << "\n";
    out << "lr_decay_every = " << cfg.lr_decay_every << "\n";
    out << "manifest_path = " << cfg.manifest_path << "\n";
    out << "image_dir = " << cfg.image_dir << "\n";
    out << "out_dir = " << cfg.out_dir << "\n";
    out << "synth_n = " << cfg.synth_n << "\n";
    out << "synth_seed = " << cfg.synth_seed << "\n";
    return out.str();
}

void write_config(const RunConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot open for writing: " + path.string());
    out << serialize_config(cfg);
}

} // namespace xrwave

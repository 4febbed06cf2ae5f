#ifndef XRWAVE_CONFIG_HPP
#define XRWAVE_CONFIG_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "xrwave/pipeline.hpp"

namespace xrwave {

// Table 2 defaults: 15 epochs, batch 20, initial learning rate 3e-4, SGDM.
struct Hyperparams {
    int epochs = 15;
    int batch_size = 20;
    double learning_rate = 3e-4;
    double momentum = 0.9;
    std::uint64_t seed = 1; // init + batch shuffling

    void validate() const;
};

// Full pipeline configuration. Every field has a default; a fully-defaulted
// config runs the synthetic demo (empty manifest -> cmd_train synthesizes a
// corpus first). Serialized as a flat "key = value" text file.
struct RunConfig {
    std::string mode = "wavelet"; // raw | wavelet
    // db2's two vanishing moments keep smooth background structure out of the
    // detail images, so the default demo gets clean orientation channels.
    std::string filter = "db2";
    int depth = 1;
    int target_w = 64;
    int target_h = 64;

    // Augmentation is opt-in: geometric jitter dephases the fine structure
    // that the wavelet detail channels are built from, so the defaults keep
    // training fully deterministic and let configs enable jitter explicitly.
    double aug_rotation_deg = 0.0;
    double aug_translate_frac = 0.0;
    double aug_scale_frac = 0.0;
    std::uint64_t aug_seed = 7;

    std::array<double, 3> split_ratios{0.70, 0.15, 0.15};
    std::uint64_t split_seed = 11;
    bool split_by_patient = false;

    Hyperparams hyper;
    int freeze_first_k = 0;

    // Step learning-rate decay, off by default (factor 1 = constant rate).
    double lr_decay_factor = 1.0;
    int lr_decay_every = 5;

    std::string manifest_path;  // empty -> synthesize
    std::string image_dir;
    std::string out_dir = "run_out";
    int synth_n = 200;          // corpus size when synthesizing
    std::uint64_t synth_seed = 42;

    InputMode input_mode() const;
    void validate() const;
};

RunConfig parse_config(const std::filesystem::path& path);
void write_config(const RunConfig& config, const std::filesystem::path& path);
std::string serialize_config(const RunConfig& config);

} // namespace xrwave

#endif

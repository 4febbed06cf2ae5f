#include "xrwave/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "xrwave/image_io.hpp"
#include "xrwave/rng.hpp"

namespace xrwave {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// Mean offset for the twelve non-grating classes, spread symmetrically.
double class_offset(int cls) {
    return 0.25 * (cls - 6.5) / 6.5;
}

// Class indices that carry a mean offset instead of a grating.
constexpr std::array<int, 12> kOffsetClasses = {0, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};

// Periodic separable binomial blur ([1,4,6,4,1]/16 on rows and columns, four
// passes) turning white noise into a smooth low-frequency field. The gratings
// live in the high-frequency band, so after a one-level wavelet split they
// dominate the detail images while staying faint against the raw pixels.
void smooth_field(Image& field) {
    static constexpr double kKernel[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
    const int h = field.height, w = field.width;
    Image tmp(h, w);
    // Enough passes that the field's local gradients, which leak into the
    // wavelet detail band, stay well below the grating amplitude.
    for (int pass = 0; pass < 160; ++pass) {
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                double acc = 0.0;
                for (int t = -2; t <= 2; ++t)
                    acc += kKernel[t + 2] * field.at(r, ((c + t) % w + w) % w);
                tmp.at(r, c) = acc;
            }
        for (int c = 0; c < w; ++c)
            for (int r = 0; r < h; ++r) {
                double acc = 0.0;
                for (int t = -2; t <= 2; ++t)
                    acc += kKernel[t + 2] * tmp.at(((r + t) % h + h) % h, c);
                field.at(r, c) = acc;
            }
    }
}

// Rescale to zero mean, unit variance.
void standardize(Image& field) {
    double mean = 0.0;
    for (double v : field.data) mean += v;
    mean /= static_cast<double>(field.data.size());
    double var = 0.0;
    for (double v : field.data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(field.data.size());
    const double inv_std = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (double& v : field.data) v = (v - mean) * inv_std;
}

} // namespace

std::vector<ManifestEntry> generate_synthetic_corpus(const SynthConfig& config,
                                                     const std::filesystem::path& out_dir) {
    if (config.n < 30) throw Error("BadConfig", "synthetic corpus needs n >= 30");
    std::filesystem::create_directories(out_dir);

    std::vector<ManifestEntry> entries;
    for (int i = 0; i < config.n; ++i) {
        // Independent stream per image so the corpus is stable under n changes.
        Rng rng(mix_seed(config.seed ^ (0x5157ULL + static_cast<std::uint64_t>(i))));

        // The two orientation classes are deliberately common so a short
        // desk-scale training run sees enough positives to learn them; the
        // twelve offset classes share the remainder.
        LabelBits labels;
        const double class_draw = rng.uniform();
        if (class_draw < 0.30)
            labels.set(kVerticalGratingClass);
        else if (class_draw < 0.60)
            labels.set(kHorizontalGratingClass);
        else
            labels.set(kOffsetClasses[rng.uniform_index(kOffsetClasses.size())]);
        if (rng.uniform() < config.cooccurrence_rate) {
            std::size_t extra;
            do {
                extra = rng.uniform_index(kNumClasses);
            } while (labels.test(extra));
            labels.set(extra);
        }

        // Deterministic grating phase: every positive image carries the same
        // spatial template, so the orientation signal is a stable pattern a
        // small network can latch onto at desk-scale learning rates.
        const double phase_v = 0.0;
        const double phase_h = 0.0;

        // Smooth unit-variance Gaussian background.
        Image noise(config.height, config.width);
        for (double& v : noise.data) v = rng.normal();
        smooth_field(noise);
        standardize(noise);

        Image img(config.height, config.width);
        for (int r = 0; r < config.height; ++r) {
            for (int c = 0; c < config.width; ++c) {
                double v = noise.at(r, c);
                // Class-independent diagonal carrier shared by every image. It
                // anchors the detail band's min/max, so the per-image unit
                // rescale maps non-grating detail images onto one stable
                // pattern instead of amplifying residual noise to full range.
                v += 0.18 * std::sin(kTwoPi * (r + c) / 8.0);
                // Slightly tilted plane waves: the slow phase drift across the
                // orthogonal axis means every image carries the same total
                // grating energy whatever its random phase.
                if (labels.test(kVerticalGratingClass))
                    v += config.grating_amplitude *
                         std::sin(kTwoPi * (c / 8.0 + static_cast<double>(r) / config.height) +
                                  phase_v);
                if (labels.test(kHorizontalGratingClass))
                    v += config.grating_amplitude *
                         std::sin(kTwoPi * (r / 8.0 + static_cast<double>(c) / config.width) +
                                  phase_h);
                for (int cls = 0; cls < kNumClasses; ++cls) {
                    if (cls == kVerticalGratingClass || cls == kHorizontalGratingClass) continue;
                    if (labels.test(static_cast<std::size_t>(cls))) v += class_offset(cls);
                }
                // Map ~[-4, 4] signal units onto [0, 1] for 8-bit storage.
                img.at(r, c) = std::clamp(0.5 + v / 8.0, 0.0, 1.0);
            }
        }

        char name[32];
        std::snprintf(name, sizeof(name), "synth_%05d.png", i);
        save_png16(img, out_dir / name);

        ManifestEntry e;
        e.image_id = name;
        e.path = name;
        e.patient_id = "P" + std::to_string(i);
        e.labels = labels;
        entries.push_back(std::move(e));
    }

    std::ofstream out(out_dir / "manifest.csv", std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot write manifest.csv");
    out << "Image Index,Finding Labels,Patient ID\n";
    for (const auto& e : entries)
        out << e.image_id << "," << decode_labels(e.labels) << "," << e.patient_id << "\n";
    return entries;
}

} // namespace xrwave

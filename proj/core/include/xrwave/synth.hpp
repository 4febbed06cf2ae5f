#ifndef XRWAVE_SYNTH_HPP
#define XRWAVE_SYNTH_HPP

#include <cstdint>
#include <filesystem>

#include "xrwave/dataset.hpp"

namespace xrwave {

// Desk-scale stand-in corpus: n 64x64 grayscale 16-bit PNGs across the 14
// class names. Two designated classes carry orientation signal (sinusoidal
// gratings at amplitude 0.3 over a smooth unit-variance Gaussian background
// field): Effusion gets vertical gratings (intensity varies along x),
// Atelectasis horizontal ones. The background is low-frequency and every
// image shares a weak diagonal carrier, so the first-level wavelet detail
// band is dominated by the carrier (non-grating images) or the grating
// (positives) rather than by amplified residual noise, while both stay faint
// against the raw pixels. The orientation classes are deliberately common
// (30% each) so short training runs see enough positives; the other twelve
// classes split the remainder and carry small per-class mean offsets. A
// second label is injected on 10% of images. Deterministic in seed.
struct SynthConfig {
    int n = 200;
    std::uint64_t seed = 42;
    int width = 64;
    int height = 64;
    double grating_amplitude = 0.3;
    double cooccurrence_rate = 0.10;
};

inline constexpr int kVerticalGratingClass = 1;   // Effusion
inline constexpr int kHorizontalGratingClass = 2; // Atelectasis

// Writes images plus manifest.csv (Image Index, Finding Labels, Patient ID)
// into out_dir and returns the generated entries.
std::vector<ManifestEntry> generate_synthetic_corpus(const SynthConfig& config,
                                                     const std::filesystem::path& out_dir);

} // namespace xrwave

#endif

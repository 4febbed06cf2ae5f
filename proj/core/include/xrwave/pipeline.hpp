#ifndef XRWAVE_PIPELINE_HPP
#define XRWAVE_PIPELINE_HPP

#include <cstdint>
#include <vector>

#include "xrwave/image.hpp"
#include "xrwave/wavelet.hpp"

namespace xrwave {

// Geometric augmentation ranges; each call to augment() draws one rotation,
// one translation and one isotropic scale uniformly from these ranges,
// fully determined by `seed`.
struct AugmentParams {
    double rotation_deg = 10.0;   // drawn from [-r, r], r in [0, 45]
    double translate_frac = 0.05; // of each dimension, [-t, t], t in [0, 0.25]
    double scale_frac = 0.10;     // scale in [1-s, 1+s], s in [0, 0.25]
    std::uint64_t seed = 0;

    void validate() const;
};

enum class InputMode { raw, wavelet };

// Model input: 1 channel (raw) or 2 channels (vertical, horizontal detail).
struct InputTensor {
    std::vector<Image> channels;
    InputMode mode = InputMode::raw;
};

// Bilinear resize, align-centers convention (pixel centers at half-integer
// coordinates). Output values never leave the input's [min, max].
Image resize_bilinear(const Image& image, int out_w, int out_h);

// Applies the affine map rotate(deg, about center) then translate(tx, ty
// pixels) then scale(about center), bilinearly resampled, zero fill outside
// the frame. Exposed separately from augment() so deterministic geometry can
// be exercised directly.
Image warp_affine(const Image& image, double rotation_deg, double tx_px, double ty_px,
                  double scale);

// Samples one affine perturbation from params and applies it.
Image augment(const Image& image, const AugmentParams& params);

// raw: one channel, resized to target. wavelet: detail_images() first, each
// detail channel resized to target; channel order (vertical, horizontal).
InputTensor build_input(const Image& image, InputMode mode, const WaveletFilter& filter,
                        int target_w, int target_h);

} // namespace xrwave

#endif

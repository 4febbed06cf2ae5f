#include "xrwave/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "xrwave/rng.hpp"

namespace xrwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Bilinear sample with zero fill for out-of-frame coordinates (continuous
// pixel-center coordinates: col x, row y).
double sample_zero(const Image& img, double x, double y) {
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double fx = x - x0;
    const double fy = y - y0;
    double acc = 0.0;
    for (int dy = 0; dy <= 1; ++dy) {
        const int yy = y0 + dy;
        if (yy < 0 || yy >= img.height) continue;
        const double wy = dy ? fy : 1.0 - fy;
        for (int dx = 0; dx <= 1; ++dx) {
            const int xx = x0 + dx;
            if (xx < 0 || xx >= img.width) continue;
            const double wx = dx ? fx : 1.0 - fx;
            acc += wy * wx * img.at(yy, xx);
        }
    }
    return acc;
}

} // namespace

void AugmentParams::validate() const {
    if (rotation_deg < 0.0 || rotation_deg > 45.0)
        throw Error("BadAugmentParams", "rotation range must be in [0, 45] degrees");
    if (translate_frac < 0.0 || translate_frac > 0.25)
        throw Error("BadAugmentParams", "translation range must be in [0, 0.25]");
    if (scale_frac < 0.0 || scale_frac > 0.25)
        throw Error("BadAugmentParams", "scale range must be in [0, 0.25]");
}

Image resize_bilinear(const Image& image, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1)
        throw Error("ZeroDimension", "resize target must be >= 1 in both dimensions");
    if (out_w == image.width && out_h == image.height) return image;

    Image out(out_h, out_w);
    const double sx = static_cast<double>(image.width) / out_w;
    const double sy = static_cast<double>(image.height) / out_h;
    for (int r = 0; r < out_h; ++r) {
        // Align centers, clamp to the frame so every sample is a convex
        // combination of input pixels.
        double src_y = (r + 0.5) * sy - 0.5;
        src_y = std::clamp(src_y, 0.0, static_cast<double>(image.height - 1));
        const int y0 = static_cast<int>(std::floor(src_y));
        const int y1 = std::min(y0 + 1, image.height - 1);
        const double fy = src_y - y0;
        for (int c = 0; c < out_w; ++c) {
            double src_x = (c + 0.5) * sx - 0.5;
            src_x = std::clamp(src_x, 0.0, static_cast<double>(image.width - 1));
            const int x0 = static_cast<int>(std::floor(src_x));
            const int x1 = std::min(x0 + 1, image.width - 1);
            const double fx = src_x - x0;
            out.at(r, c) = (1.0 - fy) * ((1.0 - fx) * image.at(y0, x0) + fx * image.at(y0, x1)) +
                           fy * ((1.0 - fx) * image.at(y1, x0) + fx * image.at(y1, x1));
        }
    }
    return out;
}

Image warp_affine(const Image& image, double rotation_deg, double tx_px, double ty_px,
                  double scale) {
    // Forward map, applied about the image center c:
    //   p' = c + s * (R(theta) * (p - c) + t)
    // Resampling inverts it: p = c + R(-theta) * ((p' - c)/s - t).
    const double theta = rotation_deg * kPi / 180.0;
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    const double cx = (image.width - 1) / 2.0;
    const double cy = (image.height - 1) / 2.0;
    const double inv_s = 1.0 / scale;

    Image out(image.height, image.width);
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) {
            const double ux = (c - cx) * inv_s - tx_px;
            const double uy = (r - cy) * inv_s - ty_px;
            const double sx = cos_t * ux + sin_t * uy + cx;
            const double sy = -sin_t * ux + cos_t * uy + cy;
            out.at(r, c) = sample_zero(image, sx, sy);
        }
    }
    return out;
}

Image augment(const Image& image, const AugmentParams& params) {
    params.validate();
    Rng rng(params.seed);
    const double rot = rng.uniform(-params.rotation_deg, params.rotation_deg);
    const double tx = rng.uniform(-params.translate_frac, params.translate_frac) * image.width;
    const double ty = rng.uniform(-params.translate_frac, params.translate_frac) * image.height;
    const double scale = rng.uniform(1.0 - params.scale_frac, 1.0 + params.scale_frac);
    return warp_affine(image, rot, tx, ty, scale);
}

InputTensor build_input(const Image& image, InputMode mode, const WaveletFilter& filter,
                        int target_w, int target_h) {
    InputTensor tensor;
    tensor.mode = mode;
    if (mode == InputMode::raw) {
        tensor.channels.push_back(resize_bilinear(image, target_w, target_h));
    } else {
        auto [vertical, horizontal] = detail_images(image, filter);
        tensor.channels.push_back(resize_bilinear(vertical, target_w, target_h));
        tensor.channels.push_back(resize_bilinear(horizontal, target_w, target_h));
    }
    return tensor;
}

} // namespace xrwave

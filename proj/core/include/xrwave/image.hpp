#ifndef XRWAVE_IMAGE_HPP
#define XRWAVE_IMAGE_HPP

#include <cstddef>
#include <vector>

#include "xrwave/errors.hpp"

namespace xrwave {

// Grayscale raster, row-major doubles. Loaded images are normalized to [0,1];
// intermediate buffers (subbands, detail images before rescale) may exceed it.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    Image() = default;
    Image(int h, int w, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    double& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
    double at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }

    std::size_t size() const { return data.size(); }

    double energy() const {
        double e = 0.0;
        for (double v : data) e += v * v;
        return e;
    }

    Image transposed() const {
        Image out(width, height);
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c)
                out.at(c, r) = at(r, c);
        return out;
    }
};

// Min-max rescale to [0,1]; a constant image maps to all-zero.
inline Image rescale_unit(const Image& img) {
    double lo = img.data.empty() ? 0.0 : img.data[0];
    double hi = lo;
    for (double v : img.data) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    Image out(img.height, img.width);
    if (hi > lo) {
        const double inv = 1.0 / (hi - lo);
        for (std::size_t i = 0; i < img.data.size(); ++i)
            out.data[i] = (img.data[i] - lo) * inv;
    }
    return out;
}

} // namespace xrwave

#endif

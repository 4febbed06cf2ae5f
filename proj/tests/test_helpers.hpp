#ifndef XRWAVE_TEST_HELPERS_HPP
#define XRWAVE_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "xrwave/image.hpp"
#include "xrwave/rng.hpp"
#include "xrwave/wavelet.hpp"

// Test-side oracles, kept independent of the library's transform path.
namespace oracle {

// Direct convolve-and-downsample with periodic extension.
inline std::vector<double> convolve_downsample(const std::vector<double>& x,
                                               const std::vector<double>& taps) {
    const std::size_t n = x.size();
    std::vector<double> out(n / 2, 0.0);
    for (std::size_t k = 0; k < n / 2; ++k)
        for (std::size_t t = 0; t < taps.size(); ++t)
            out[k] += taps[t] * x[(2 * k + t) % n];
    return out;
}

inline double energy(const std::vector<double>& v) {
    double e = 0.0;
    for (double x : v) e += x * x;
    return e;
}

inline xrwave::Image random_image(int h, int w, std::uint64_t seed) {
    xrwave::Image img(h, w);
    xrwave::Rng rng(seed);
    for (double& v : img.data) v = rng.uniform();
    return img;
}

inline double max_abs_diff(const xrwave::Image& a, const xrwave::Image& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

} // namespace oracle

#endif

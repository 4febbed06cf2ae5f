#ifndef XRWAVE_WAVELET_HPP
#define XRWAVE_WAVELET_HPP

#include <string>
#include <utility>
#include <vector>

#include "xrwave/image.hpp"

namespace xrwave {

// Orthonormal analysis filter pair. The highpass is the quadrature mirror of
// the lowpass: high[n] = (-1)^n * low[L-1-n].
struct WaveletFilter {
    std::string name;
    std::vector<double> lowpass;
    std::vector<double> highpass;

    // Throws Error("InvalidFilter", ...) if the invariants fail:
    // equal even length >= 2, unit energy per band, mirror relation.
    void validate() const;

    static WaveletFilter haar();
    static WaveletFilter db2();
    // Recognized names: "haar", "db2". Throws Error("UnknownFilter").
    static WaveletFilter by_name(const std::string& name);
};

// One level of the separable 2D transform. Subband letters are
// (row-direction filter, column-direction filter): HL is highpass along
// rows (captures vertical edges) and lowpass along columns.
struct SubbandSet {
    Image ll, lh, hl, hh;
};

// Multi-level decomposition; levels[0] is the finest, final_ll the coarsest
// approximation.
struct Pyramid {
    std::vector<SubbandSet> levels;
    Image final_ll;
    WaveletFilter filter;
    int depth = 0;
};

// Single-level analysis with periodic boundary:
//   approx[k] = sum_n low[n]  * x[(2k+n) mod N]
//   detail[k] = sum_n high[n] * x[(2k+n) mod N]
// Requires even N >= 2.
std::pair<std::vector<double>, std::vector<double>>
dwt1d(const std::vector<double>& signal, const WaveletFilter& filter);

// Synthesis (adjoint of the analysis operator); exact inverse for
// orthonormal filters under periodic extension.
std::vector<double> idwt1d(const std::vector<double>& approx,
                           const std::vector<double>& detail,
                           const WaveletFilter& filter);

// Rows transformed first, then columns. Both dimensions must be even.
SubbandSet dwt2d(const Image& image, const WaveletFilter& filter);
Image idwt2d(const SubbandSet& subbands, const WaveletFilter& filter);

// Recursive decomposition of the LL band, `depth` levels. Both dimensions
// must be divisible by 2^depth.
Pyramid decompose(const Image& image, const WaveletFilter& filter, int depth);
Image reconstruct(const Pyramid& pyramid);

// The two single-level detail images fed to the classifier:
// first = vertical-edge content (HL), second = horizontal-edge content (LH),
// each min-max rescaled to [0,1] (constant subbands map to all-zero).
std::pair<Image, Image> detail_images(const Image& image, const WaveletFilter& filter);

} // namespace xrwave

#endif

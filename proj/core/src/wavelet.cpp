#include "xrwave/wavelet.hpp"

#include <cmath>
#include <cstdlib>

namespace xrwave {

namespace {

constexpr double kSqrt1_2 = 0.70710678118654752440;

void check_even_signal(std::size_t n) {
    if (n < 2)
        throw Error("SignalTooShort", "signal length " + std::to_string(n) + " < 2");
    if (n % 2 != 0)
        throw Error("OddLength", "signal length " + std::to_string(n) + " is odd");
}

} // namespace

void WaveletFilter::validate() const {
    const std::size_t n = lowpass.size();
    if (n < 2 || n % 2 != 0 || highpass.size() != n)
        throw Error("InvalidFilter", name + ": bands must have equal even length >= 2");
    double elo = 0.0, ehi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        elo += lowpass[i] * lowpass[i];
        ehi += highpass[i] * highpass[i];
    }
    if (std::abs(elo - 1.0) > 1e-12 || std::abs(ehi - 1.0) > 1e-12)
        throw Error("InvalidFilter", name + ": bands are not unit-energy");
    for (std::size_t i = 0; i < n; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        if (std::abs(highpass[i] - sign * lowpass[n - 1 - i]) > 1e-12)
            throw Error("InvalidFilter", name + ": quadrature-mirror relation violated");
    }
}

WaveletFilter WaveletFilter::haar() {
    WaveletFilter f;
    f.name = "haar";
    f.lowpass = {kSqrt1_2, kSqrt1_2};
    f.highpass = {kSqrt1_2, -kSqrt1_2};
    return f;
}

WaveletFilter WaveletFilter::db2() {
    // 4-tap Daubechies, standard orthogonal construction.
    const double s3 = std::sqrt(3.0);
    const double norm = 1.0 / (4.0 * std::sqrt(2.0));
    WaveletFilter f;
    f.name = "db2";
    f.lowpass = {(1.0 + s3) * norm, (3.0 + s3) * norm, (3.0 - s3) * norm, (1.0 - s3) * norm};
    f.highpass = {f.lowpass[3], -f.lowpass[2], f.lowpass[1], -f.lowpass[0]};
    return f;
}

WaveletFilter WaveletFilter::by_name(const std::string& name) {
    if (name == "haar") return haar();
    if (name == "db2") return db2();
    throw Error("UnknownFilter", "no filter named '" + name + "'");
}

std::pair<std::vector<double>, std::vector<double>>
dwt1d(const std::vector<double>& signal, const WaveletFilter& filter) {
    const std::size_t n = signal.size();
    check_even_signal(n);
    const std::size_t half = n / 2;
    const std::size_t taps = filter.lowpass.size();
    std::vector<double> approx(half), detail(half);
    for (std::size_t k = 0; k < half; ++k) {
        double a = 0.0, d = 0.0;
        for (std::size_t t = 0; t < taps; ++t) {
            const double x = signal[(2 * k + t) % n];
            a += filter.lowpass[t] * x;
            d += filter.highpass[t] * x;
        }
        approx[k] = a;
        detail[k] = d;
    }
    return {std::move(approx), std::move(detail)};
}

std::vector<double> idwt1d(const std::vector<double>& approx,
                           const std::vector<double>& detail,
                           const WaveletFilter& filter) {
    if (approx.size() != detail.size())
        throw Error("LengthMismatch", "approx length " + std::to_string(approx.size()) +
                                          " != detail length " + std::to_string(detail.size()));
    if (approx.empty())
        throw Error("SignalTooShort", "empty subbands");
    const std::size_t half = approx.size();
    const std::size_t n = 2 * half;
    const std::size_t taps = filter.lowpass.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        for (std::size_t t = 0; t < taps; ++t) {
            const std::size_t m = (2 * k + t) % n;
            out[m] += filter.lowpass[t] * approx[k] + filter.highpass[t] * detail[k];
        }
    }
    return out;
}

SubbandSet dwt2d(const Image& image, const WaveletFilter& filter) {
    const int h = image.height, w = image.width;
    if (h < 2 || w < 2 || h % 2 != 0 || w % 2 != 0)
        throw Error("OddDimension", "image is " + std::to_string(h) + "x" + std::to_string(w) +
                                        "; both dimensions must be even and >= 2");
    const int hh = h / 2, hw = w / 2;

    // Rows first: left half approx, right half detail.
    Image rows(h, w);
    std::vector<double> line(static_cast<std::size_t>(w));
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) line[c] = image.at(r, c);
        auto [a, d] = dwt1d(line, filter);
        for (int c = 0; c < hw; ++c) {
            rows.at(r, c) = a[c];
            rows.at(r, hw + c) = d[c];
        }
    }

    // Then columns of each half.
    SubbandSet sb{Image(hh, hw), Image(hh, hw), Image(hh, hw), Image(hh, hw)};
    std::vector<double> col(static_cast<std::size_t>(h));
    for (int c = 0; c < w; ++c) {
        for (int r = 0; r < h; ++r) col[r] = rows.at(r, c);
        auto [a, d] = dwt1d(col, filter);
        const bool row_high = c >= hw;
        const int cc = row_high ? c - hw : c;
        Image& low_band = row_high ? sb.hl : sb.ll;
        Image& high_band = row_high ? sb.hh : sb.lh;
        for (int r = 0; r < hh; ++r) {
            low_band.at(r, cc) = a[r];
            high_band.at(r, cc) = d[r];
        }
    }
    return sb;
}

Image idwt2d(const SubbandSet& subbands, const WaveletFilter& filter) {
    const int hh = subbands.ll.height, hw = subbands.ll.width;
    for (const Image* band : {&subbands.lh, &subbands.hl, &subbands.hh})
        if (band->height != hh || band->width != hw)
            throw Error("DimensionMismatch", "subbands do not share dimensions");
    const int h = 2 * hh, w = 2 * hw;

    // Undo the column pass.
    Image rows(h, w);
    std::vector<double> a(static_cast<std::size_t>(hh)), d(static_cast<std::size_t>(hh));
    for (int c = 0; c < w; ++c) {
        const bool row_high = c >= hw;
        const int cc = row_high ? c - hw : c;
        const Image& low_band = row_high ? subbands.hl : subbands.ll;
        const Image& high_band = row_high ? subbands.hh : subbands.lh;
        for (int r = 0; r < hh; ++r) {
            a[r] = low_band.at(r, cc);
            d[r] = high_band.at(r, cc);
        }
        auto col = idwt1d(a, d, filter);
        for (int r = 0; r < h; ++r) rows.at(r, c) = col[r];
    }

    // Undo the row pass.
    Image out(h, w);
    std::vector<double> ra(static_cast<std::size_t>(hw)), rd(static_cast<std::size_t>(hw));
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < hw; ++c) {
            ra[c] = rows.at(r, c);
            rd[c] = rows.at(r, hw + c);
        }
        auto line = idwt1d(ra, rd, filter);
        for (int c = 0; c < w; ++c) out.at(r, c) = line[c];
    }
    return out;
}

Pyramid decompose(const Image& image, const WaveletFilter& filter, int depth) {
    if (depth < 1)
        throw Error("DepthTooDeep", "depth must be >= 1");
    const int div = 1 << depth;
    if (image.height % div != 0 || image.width % div != 0 ||
        image.height / div < 1 || image.width / div < 1)
        throw Error("DepthTooDeep", "depth " + std::to_string(depth) + " does not divide " +
                                        std::to_string(image.height) + "x" +
                                        std::to_string(image.width));
    Pyramid pyr;
    pyr.filter = filter;
    pyr.depth = depth;
    Image current = image;
    for (int level = 0; level < depth; ++level) {
        SubbandSet sb = dwt2d(current, filter);
        current = sb.ll;
        pyr.levels.push_back(std::move(sb));
    }
    pyr.final_ll = current;
    return pyr;
}

Image reconstruct(const Pyramid& pyramid) {
    Image current = pyramid.final_ll;
    for (auto it = pyramid.levels.rbegin(); it != pyramid.levels.rend(); ++it) {
        SubbandSet sb = *it;
        sb.ll = current;
        current = idwt2d(sb, pyramid.filter);
    }
    return current;
}

std::pair<Image, Image> detail_images(const Image& image, const WaveletFilter& filter) {
    SubbandSet sb = dwt2d(image, filter);
    return {rescale_unit(sb.hl), rescale_unit(sb.lh)};
}

} // namespace xrwave

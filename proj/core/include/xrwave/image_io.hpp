#ifndef XRWAVE_IMAGE_IO_HPP
#define XRWAVE_IMAGE_IO_HPP

#include <filesystem>

#include "xrwave/image.hpp"

namespace xrwave {

// Supported inputs: 8/16-bit grayscale PNG and binary PGM (P5).
// Intensities are mapped linearly from the stored integer range to [0,1];
// multi-channel PNGs are reduced to luminance by equal-weight average.
Image load_image(const std::filesystem::path& path);

// 8-bit grayscale writers; values are clamped to [0,1] then quantized.
void save_png(const Image& image, const std::filesystem::path& path);
// 16-bit grayscale PNG: keeps sub-8-bit structure (fine wavelet detail)
// intact through a disk round trip.
void save_png16(const Image& image, const std::filesystem::path& path);
void save_pgm(const Image& image, const std::filesystem::path& path);

// 16-bit PGM writer (big-endian sample bytes per the P5 spec).
void save_pgm16(const Image& image, const std::filesystem::path& path);

} // namespace xrwave

#endif

#include "xrwave/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace xrwave {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image load_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw Error("FileNotFound", path.string());

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
        throw Error("CorruptImage", path.string() + ": bad PNG signature");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error("CorruptImage", path.string() + ": libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error("CorruptImage", path.string() + ": libpng decode error");
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (bit_depth == 16) png_set_swap(png); // little-endian samples in memory
    png_read_update_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);

    std::vector<png_byte> buf(rowbytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 r = 0; r < h; ++r) rows[r] = buf.data() + r * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Image img(static_cast<int>(h), static_cast<int>(w));
    const double maxval = depth == 16 ? 65535.0 : 255.0;
    for (png_uint_32 r = 0; r < h; ++r) {
        const png_bytep row = buf.data() + r * rowbytes;
        for (png_uint_32 c = 0; c < w; ++c) {
            double sum = 0.0;
            for (int ch = 0; ch < channels; ++ch) {
                if (depth == 16) {
                    const std::size_t i = 2 * (c * channels + ch);
                    sum += static_cast<double>(row[i] | (row[i + 1] << 8));
                } else {
                    sum += static_cast<double>(row[c * channels + ch]);
                }
            }
            img.at(static_cast<int>(r), static_cast<int>(c)) = sum / (channels * maxval);
        }
    }
    return img;
}

Image load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("FileNotFound", path.string());

    auto next_token = [&in, &path]() {
        std::string tok;
        int c;
        while ((c = in.get()) != EOF) {
            if (c == '#') {
                while ((c = in.get()) != EOF && c != '\n') {}
            } else if (!std::isspace(c)) {
                tok.push_back(static_cast<char>(c));
                while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
                    tok.push_back(static_cast<char>(in.get()));
                return tok;
            }
        }
        throw Error("CorruptImage", path.string() + ": truncated PGM header");
    };

    if (next_token() != "P5")
        throw Error("UnsupportedFormat", path.string() + ": not a binary PGM (P5)");
    const long w = std::stol(next_token());
    const long h = std::stol(next_token());
    const long maxval = std::stol(next_token());
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
        throw Error("CorruptImage", path.string() + ": bad PGM dimensions or maxval");
    in.get(); // single whitespace after maxval

    Image img(static_cast<int>(h), static_cast<int>(w));
    const std::size_t npix = img.size();
    if (maxval < 256) {
        std::vector<unsigned char> buf(npix);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(npix));
        if (!in) throw Error("CorruptImage", path.string() + ": truncated PGM data");
        for (std::size_t i = 0; i < npix; ++i)
            img.data[i] = buf[i] / static_cast<double>(maxval);
    } else {
        std::vector<unsigned char> buf(npix * 2);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(npix * 2));
        if (!in) throw Error("CorruptImage", path.string() + ": truncated PGM data");
        for (std::size_t i = 0; i < npix; ++i) {
            const int v = (buf[2 * i] << 8) | buf[2 * i + 1]; // big-endian per spec
            img.data[i] = v / static_cast<double>(maxval);
        }
    }
    return img;
}

int quantize(double v, int maxval) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    return static_cast<int>(std::lround(clamped * maxval));
}

} // namespace

Image load_image(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw Error("FileNotFound", path.string());
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") return load_png(path);
    if (ext == ".pgm") return load_pgm(path);
    throw Error("UnsupportedFormat", path.string() + ": expected .png or .pgm");
}

void save_png(const Image& image, const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw Error("FileNotFound", "cannot open for writing: " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error("CorruptImage", "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("CorruptImage", path.string() + ": libpng encode error");
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_byte> row(static_cast<std::size_t>(image.width));
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c)
            row[c] = static_cast<png_byte>(quantize(image.at(r, c), 255));
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_png16(const Image& image, const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw Error("FileNotFound", "cannot open for writing: " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error("CorruptImage", "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("CorruptImage", path.string() + ": libpng encode error");
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, image.width, image.height, 16, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_byte> row(static_cast<std::size_t>(image.width) * 2);
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) {
            const int q = quantize(image.at(r, c), 65535);
            row[2 * c] = static_cast<png_byte>((q >> 8) & 0xff); // network byte order
            row[2 * c + 1] = static_cast<png_byte>(q & 0xff);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_pgm(const Image& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot open for writing: " + path.string());
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    for (double v : image.data)
        out.put(static_cast<char>(quantize(v, 255)));
    if (!out) throw Error("CorruptImage", "write failed: " + path.string());
}

void save_pgm16(const Image& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot open for writing: " + path.string());
    out << "P5\n" << image.width << " " << image.height << "\n65535\n";
    for (double v : image.data) {
        const int q = quantize(v, 65535);
        out.put(static_cast<char>((q >> 8) & 0xff));
        out.put(static_cast<char>(q & 0xff));
    }
    if (!out) throw Error("CorruptImage", "write failed: " + path.string());
}

} // namespace xrwave

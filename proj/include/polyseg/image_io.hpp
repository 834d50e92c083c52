// PNG/PGM/PPM loading and PNG output.
#pragma once

#include <png.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "polyseg/image.hpp"

namespace polyseg {

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline ImageField load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("load_image: cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("load_image: png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("load_image: png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("load_image: " + path + " is not a valid PNG");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int ch = png_get_channels(png, info);
    std::vector<png_byte> row(png_get_rowbytes(png, info));
    ImageField img(static_cast<int>(w), static_cast<int>(h), ch == 1 ? 1 : 3);
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (png_uint_32 x = 0; x < w; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                img.at(static_cast<int>(x), static_cast<int>(y), c) = row[x * ch + c] / 255.0;
            }
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

inline int pnm_next_int(std::istream& in, const std::string& path) {
    // skips whitespace and '#' comment lines
    while (true) {
        const int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int v = 0;
    if (!(in >> v)) throw std::runtime_error("load_image: malformed PNM header in " + path);
    return v;
}

inline ImageField load_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_image: cannot open " + path);
    char p, kind;
    in.get(p);
    in.get(kind);
    if (p != 'P' || (kind != '2' && kind != '3' && kind != '5' && kind != '6')) {
        throw std::runtime_error("load_image: unsupported PNM type in " + path);
    }
    const bool color = kind == '3' || kind == '6';
    const bool binary = kind == '5' || kind == '6';
    const int w = pnm_next_int(in, path);
    const int h = pnm_next_int(in, path);
    const int maxval = pnm_next_int(in, path);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) {
        throw std::runtime_error("load_image: unsupported PNM header in " + path);
    }
    ImageField img(w, h, color ? 3 : 1);
    const std::size_t n = static_cast<std::size_t>(w) * h * img.channels;
    if (binary) {
        in.get();  // single whitespace after maxval
        std::vector<unsigned char> buf(n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n) {
            throw std::runtime_error("load_image: truncated PNM data in " + path);
        }
        for (std::size_t i = 0; i < n; ++i) img.values[i] = buf[i] / static_cast<double>(maxval);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            img.values[i] = pnm_next_int(in, path) / static_cast<double>(maxval);
        }
    }
    return img;
}

}  // namespace detail

// Grayscale sources load with channels=1, color sources with channels=3 (sRGB).
inline ImageField load_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw std::runtime_error("load_image: cannot open " + path);
    unsigned char magic[2] = {0, 0};
    probe.read(reinterpret_cast<char*>(magic), 2);
    probe.close();
    if (magic[0] == 0x89 && magic[1] == 'P') return detail::load_png(path);
    if (magic[0] == 'P' && magic[1] >= '1' && magic[1] <= '6') return detail::load_pnm(path);
    throw std::runtime_error("load_image: unsupported format (not PNG/PGM/PPM): " + path);
}

// 8-bit PNG. Values clamp to [0,1] then quantize; channels must be 1 or 3.
inline void save_png(const std::string& path, const ImageField& img) {
    detail::FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("save_png: cannot open " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("save_png: png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("save_png: png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("save_png: write failed for " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_byte> row(static_cast<std::size_t>(img.width) * img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                const double v = std::clamp(img.at(x, y, c), 0.0, 1.0);
                row[static_cast<std::size_t>(x) * img.channels + c] =
                    static_cast<png_byte>(std::lround(v * 255.0));
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// Label mask as PNG with one gray level per label (background black).
inline void save_label_png(const std::string& path, const LabelMask& mask) {
    ImageField img(mask.width, mask.height, 1);
    const int maxl = std::max(mask.num_labels, 1);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            img.at(x, y) = static_cast<double>(mask.at(x, y)) / maxl;
        }
    }
    save_png(path, img);
}

}  // namespace polyseg

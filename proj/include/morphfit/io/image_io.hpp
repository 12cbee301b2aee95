/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/io/image_io.hpp
 *
 * Copyright 2026 The morphfit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#ifndef MORPHFIT_IO_IMAGE_IO_HPP
#define MORPHFIT_IO_IMAGE_IO_HPP

#include "morphfit/core/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace morphfit {
namespace io {

/// 8-bit values map to [0, 1] by dividing by 255.
inline double from_byte(std::uint8_t v) { return v / 255.0; }
inline std::uint8_t to_byte(double v)
{
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

/// Reads an 8-bit binary PPM (P6) or PGM (P5) into [0, 1] doubles.
inline Image read_ppm(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in.good())
        throw std::runtime_error("read_ppm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5" && magic != "P6")
        throw std::runtime_error("read_ppm: unsupported magic '" + magic + "' in " + path);
    const int channels = magic == "P6" ? 3 : 1;

    auto next_int = [&in, &path]() {
        // Skips whitespace and # comments between header fields.
        for (;;)
        {
            int c = in.peek();
            if (c == '#')
                in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
            else if (std::isspace(c))
                in.get();
            else
                break;
        }
        int value;
        in >> value;
        if (in.fail())
            throw std::runtime_error("read_ppm: malformed header in " + path);
        return value;
    };
    const int width = next_int();
    const int height = next_int();
    const int maxval = next_int();
    if (maxval != 255)
        throw std::runtime_error("read_ppm: only 8-bit (maxval 255) files are supported");
    in.get(); // single whitespace after maxval

    std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height * channels);
    in.read(reinterpret_cast<char*>(raw.data()), raw.size());
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
        throw std::runtime_error("read_ppm: truncated file " + path);

    Image img(height, width, channels);
    for (std::size_t i = 0; i < raw.size(); ++i)
        img.data()[i] = from_byte(raw[i]);
    return img;
}

/// Writes an 8-bit binary PPM (3 channels) or PGM (1 channel).
inline void write_ppm(const std::string& path, const Image& img)
{
    if (img.channels() != 1 && img.channels() != 3)
        throw std::invalid_argument("write_ppm: image must have 1 or 3 channels");
    std::ofstream out(path, std::ios::binary);
    if (!out.good())
        throw std::runtime_error("write_ppm: cannot open " + path);
    out << (img.channels() == 3 ? "P6" : "P5") << "\n"
        << img.width() << " " << img.height() << "\n255\n";
    std::vector<std::uint8_t> raw(img.data().size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i] = to_byte(img.data()[i]);
    out.write(reinterpret_cast<const char*>(raw.data()), raw.size());
    if (!out.good())
        throw std::runtime_error("write_ppm: write failed for " + path);
}

/// Reads an 8-bit PNG (palette/gray/rgb; 16-bit is reduced, alpha dropped).
inline Image read_png(const std::string& path)
{
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp)
        throw std::runtime_error("read_png: cannot open " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png)))
    {
        if (png)
            png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        std::fclose(fp);
        throw std::runtime_error("read_png: failed to decode " + path);
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_packing(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY &&
        png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int channels = static_cast<int>(png_get_channels(png, info));
    if (channels != 1 && channels != 3)
    {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw std::runtime_error("read_png: unsupported channel count in " + path);
    }

    std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height * channels);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = raw.data() + static_cast<std::size_t>(y) * width * channels;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);

    Image img(height, width, channels);
    for (std::size_t i = 0; i < raw.size(); ++i)
        img.data()[i] = from_byte(raw[i]);
    return img;
}

/// Writes an 8-bit PNG (1 or 3 channels), values clamped to [0, 1].
inline void write_png(const std::string& path, const Image& img)
{
    if (img.channels() != 1 && img.channels() != 3)
        throw std::invalid_argument("write_png: image must have 1 or 3 channels");
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp)
        throw std::runtime_error("write_png: cannot open " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png)))
    {
        if (png)
            png_destroy_write_struct(&png, info ? &info : nullptr);
        std::fclose(fp);
        throw std::runtime_error("write_png: failed to encode " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, img.width(), img.height(), 8,
                 img.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<std::uint8_t> raw(img.data().size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i] = to_byte(img.data()[i]);
    std::vector<png_bytep> rows(img.height());
    for (int y = 0; y < img.height(); ++y)
        rows[y] = raw.data() + static_cast<std::size_t>(y) * img.width() * img.channels();
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

/// Loads PNG or PPM/PGM by file extension.
inline Image read_image(const std::string& path)
{
    const auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "png" || ext == "PNG")
        return read_png(path);
    if (ext == "ppm" || ext == "pgm" || ext == "PPM" || ext == "PGM")
        return read_ppm(path);
    throw std::runtime_error("read_image: unsupported image format: " + path);
}

} // namespace io
} // namespace morphfit

#endif /* MORPHFIT_IO_IMAGE_IO_HPP */

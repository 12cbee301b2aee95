/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/core/image.hpp
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

#ifndef MORPHFIT_CORE_IMAGE_HPP
#define MORPHFIT_CORE_IMAGE_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace morphfit {

/**
 * Dense H x W x C tensor of doubles, row-major with interleaved channels.
 *
 * Pixel (x, y) lives at integer coordinates: continuous coordinate x == column
 * index, y == row index. All image sampling in the library follows this
 * convention.
 */
class Image
{
public:
    Image() = default;

    Image(int height, int width, int channels, double fill = 0.0)
        : height_(height), width_(width), channels_(channels),
          data_(static_cast<std::size_t>(height) * width * channels, fill)
    {
        if (height <= 0 || width <= 0 || channels <= 0)
            throw std::invalid_argument("Image: dimensions must be positive");
    }

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }

    double& at(int y, int x, int c)
    {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    double at(int y, int x, int c) const
    {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    /// Clamped lookup, used by the replicated-border gradient filters.
    double at_clamped(int y, int x, int c) const
    {
        const int yc = std::clamp(y, 0, height_ - 1);
        const int xc = std::clamp(x, 0, width_ - 1);
        return at(yc, xc, c);
    }

    /**
     * Bilinear interpolation of channel c at continuous position (x, y).
     * The caller must ensure 0 <= x <= width-1 and 0 <= y <= height-1.
     */
    double bilinear(double y, double x, int c) const
    {
        int x0 = static_cast<int>(x);
        int y0 = static_cast<int>(y);
        x0 = std::clamp(x0, 0, width_ - 2 >= 0 ? width_ - 2 : 0);
        y0 = std::clamp(y0, 0, height_ - 2 >= 0 ? height_ - 2 : 0);
        const int x1 = std::min(x0 + 1, width_ - 1);
        const int y1 = std::min(y0 + 1, height_ - 1);
        const double fx = x - x0;
        const double fy = y - y0;
        const double v00 = at(y0, x0, c);
        const double v01 = at(y0, x1, c);
        const double v10 = at(y1, x0, c);
        const double v11 = at(y1, x1, c);
        return (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) + fy * ((1.0 - fx) * v10 + fx * v11);
    }

    bool contains(double y, double x) const
    {
        return x >= 0.0 && y >= 0.0 && x <= width_ - 1.0 && y <= height_ - 1.0;
    }

private:
    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

/**
 * Per-channel spatial gradients by central differences with replicated
 * borders. Returns {d/dx, d/dy}, each with the input's shape.
 */
inline std::pair<Image, Image> image_gradients(const Image& img)
{
    Image gx(img.height(), img.width(), img.channels());
    Image gy(img.height(), img.width(), img.channels());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < img.channels(); ++c)
            {
                gx.at(y, x, c) = 0.5 * (img.at_clamped(y, x + 1, c) - img.at_clamped(y, x - 1, c));
                gy.at(y, x, c) = 0.5 * (img.at_clamped(y + 1, x, c) - img.at_clamped(y - 1, x, c));
            }
    return {std::move(gx), std::move(gy)};
}

} // namespace morphfit

#endif /* MORPHFIT_CORE_IMAGE_HPP */

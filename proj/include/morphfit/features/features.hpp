/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/features/features.hpp
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

#ifndef MORPHFIT_FEATURES_FEATURES_HPP
#define MORPHFIT_FEATURES_FEATURES_HPP

#include "morphfit/core/image.hpp"
#include "morphfit/core/parallel.hpp"
#include "morphfit/features/feature_image.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace morphfit {
namespace features {

/// Identity descriptor: the image itself, channels preserved.
inline FeatureImage extract_identity(const Image& image)
{
    return FeatureImage{image, "identity"};
}

/// Configuration of the dense orientation-histogram descriptor.
struct DenseOrientationConfig
{
    int bins = 8;
    int cell_radius = 4;
    double sigma = 2.0;
};

/**
 * Dense gradient-orientation histogram descriptor: per pixel, a
 * Gaussian-weighted soft-binned histogram of gradient orientations over the
 * (2r+1)^2 neighborhood, normalized to unit l2 norm (the zero descriptor
 * stays zero). One descriptor per pixel; C equals the bin count.
 */
inline FeatureImage extract_dense_orientation_histogram(const Image& image,
                                                        const DenseOrientationConfig& cfg = {})
{
    if (image.channels() != 1)
        throw std::invalid_argument("dense orientation histogram expects a grayscale image");
    if (cfg.bins < 1 || cfg.cell_radius < 1 || !(cfg.sigma > 0.0))
        throw std::invalid_argument("dense orientation histogram: invalid configuration");
    const int h = image.height(), w = image.width();
    const int r = cfg.cell_radius;
    if (h <= 2 * r || w <= 2 * r)
        throw std::invalid_argument("dense orientation histogram: image smaller than 2r+1 window");

    const auto [gx, gy] = image_gradients(image);
    const int b = cfg.bins;
    const double bin_scale = b / (2.0 * std::numbers::pi);

    // Gaussian window over the neighborhood.
    std::vector<double> window((2 * r + 1) * (2 * r + 1));
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
            window[(dy + r) * (2 * r + 1) + (dx + r)] =
                std::exp(-(dx * dx + dy * dy) / (2.0 * cfg.sigma * cfg.sigma));

    FeatureImage out{Image(h, w, b), "dense-oh"};
    parallel_for(h, [&](int y) {
        std::vector<double> hist(b);
        for (int x = 0; x < w; ++x)
        {
            std::fill(hist.begin(), hist.end(), 0.0);
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx)
                {
                    const int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= h || xx < 0 || xx >= w)
                        continue;
                    const double gxx = gx.at(yy, xx, 0);
                    const double gyy = gy.at(yy, xx, 0);
                    const double mag = std::hypot(gxx, gyy);
                    if (mag == 0.0)
                        continue;
                    double theta = std::atan2(gyy, gxx);
                    if (theta < 0.0)
                        theta += 2.0 * std::numbers::pi;
                    double pos = theta * bin_scale;
                    if (pos >= b)
                        pos -= b;
                    const int bin0 = static_cast<int>(pos);
                    const double frac = pos - bin0;
                    const double wgt = mag * window[(dy + r) * (2 * r + 1) + (dx + r)];
                    hist[bin0 % b] += wgt * (1.0 - frac);
                    hist[(bin0 + 1) % b] += wgt * frac;
                }
            double norm = 0.0;
            for (double v : hist)
                norm += v * v;
            norm = std::sqrt(norm);
            if (norm > 0.0)
                for (int ch = 0; ch < b; ++ch)
                    out.data.at(y, x, ch) = hist[ch] / norm;
        }
    });
    return out;
}

/// Dense feature extractor: image in, C-channel feature image out.
using FeatureExtractor = std::function<FeatureImage(const Image&)>;

namespace detail {
inline std::map<std::string, FeatureExtractor>& registry()
{
    static std::map<std::string, FeatureExtractor> map = {
        {"identity", [](const Image& img) { return extract_identity(img); }},
        {"dense-oh",
         [](const Image& img) { return extract_dense_orientation_histogram(img, {}); }},
    };
    return map;
}
} // namespace detail

/// Adds (or replaces) a named extractor.
inline void register_descriptor(const std::string& name, FeatureExtractor extractor)
{
    detail::registry()[name] = std::move(extractor);
}

/// Looks up an extractor by name; unknown names raise with the known list.
inline FeatureExtractor descriptor_registry(const std::string& name)
{
    const auto& map = detail::registry();
    const auto it = map.find(name);
    if (it == map.end())
    {
        std::string known;
        for (const auto& [key, value] : map)
            known += (known.empty() ? "" : ", ") + key;
        throw std::out_of_range("unknown descriptor '" + name + "'; available: " + known);
    }
    return it->second;
}

} // namespace features
} // namespace morphfit

#endif /* MORPHFIT_FEATURES_FEATURES_HPP */

/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/render/sampling.hpp
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

#ifndef MORPHFIT_RENDER_SAMPLING_HPP
#define MORPHFIT_RENDER_SAMPLING_HPP

#include "morphfit/camera/camera.hpp"
#include "morphfit/core/image.hpp"
#include "morphfit/features/feature_image.hpp"
#include "morphfit/render/mask.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace morphfit {
namespace render {

/**
 * CN texture sample in vertex-major, channel-interleaved layout (entry for
 * vertex i, channel ch at i*C + ch). Masked-out vertices hold zeros and are
 * excluded from every norm downstream.
 */
struct SampledTexture
{
    Eigen::VectorXd values; // C*N
    ObservationMask mask;   // N
    int channels = 1;
};

/**
 * Bilinear sampling of every feature channel at the projected vertex
 * locations. Vertices outside the image (or behind the camera) are removed
 * from the mask; their entries stay zero.
 */
inline SampledTexture sample_features(const features::FeatureImage& f,
                                      const camera::ProjectedShape& proj,
                                      const ObservationMask& mask)
{
    const int n = proj.num_vertices();
    if (mask.size() != n)
        throw std::invalid_argument("sample_features: mask/projection size mismatch");
    const int c = f.channels();

    SampledTexture out;
    out.channels = c;
    out.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * c);
    out.mask = ObservationMask(n, false);

    for (int i = 0; i < n; ++i)
    {
        if (!mask.visible[i] || proj.behind[i])
            continue;
        const double x = proj.points2d[2 * i], y = proj.points2d[2 * i + 1];
        if (!f.data.contains(y, x))
            continue;
        out.mask.visible[i] = true;
        for (int ch = 0; ch < c; ++ch)
            out.values[static_cast<Eigen::Index>(i) * c + ch] = f.data.bilinear(y, x, ch);
    }
    return out;
}

/**
 * Central-difference gradient images of every channel, bilinearly sampled at
 * the projected vertex locations. Returns {d/dx, d/dy} stacked like
 * sample_features; masked vertices are zero.
 */
inline std::pair<SampledTexture, SampledTexture>
sample_feature_gradients(const features::FeatureImage& f, const camera::ProjectedShape& proj,
                         const ObservationMask& mask)
{
    const auto [gx, gy] = image_gradients(f.data);
    features::FeatureImage fx{gx, f.descriptor_name};
    features::FeatureImage fy{gy, f.descriptor_name};
    return {sample_features(fx, proj, mask), sample_features(fy, proj, mask)};
}

/**
 * Uniformly random subset of size min(k, #visible) of the visible set,
 * deterministic under a fixed seed. Used to restrict the texture residual to
 * K vertices during fitting.
 */
inline ObservationMask residual_mask_select(const ObservationMask& visible, int k,
                                            std::uint64_t rng_seed)
{
    if (k <= 0)
        throw std::invalid_argument("residual_mask_select: K must be positive");
    std::vector<int> idx = visible.indices();
    if (static_cast<int>(idx.size()) <= k)
        return visible;

    std::mt19937_64 rng(rng_seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    ObservationMask out(visible.size(), false);
    for (int j = 0; j < k; ++j)
        out.visible[idx[j]] = true;
    return out;
}

} // namespace render
} // namespace morphfit

#endif /* MORPHFIT_RENDER_SAMPLING_HPP */

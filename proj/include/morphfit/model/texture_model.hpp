/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/model/texture_model.hpp
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

#ifndef MORPHFIT_MODEL_TEXTURE_MODEL_HPP
#define MORPHFIT_MODEL_TEXTURE_MODEL_HPP

#include "morphfit/model/pca.hpp"

#include <Eigen/Core>

#include <stdexcept>

namespace morphfit {
namespace model {

/**
 * PCA texture model over CN-dimensional per-vertex feature vectors.
 *
 * Vectorization is vertex-major with interleaved channels: entry for vertex i,
 * channel ch sits at index i*C + ch. Image sampling and the fitter use the
 * same layout.
 */
struct TextureModel
{
    PcaModel pca;     // D = C * N
    int channels = 1; // C

    int num_vertices() const { return pca.dimension() / channels; }
    int num_components() const { return pca.num_components(); }

    void validate() const
    {
        pca.validate();
        if (channels < 1)
            throw std::invalid_argument("TextureModel: channels must be >= 1");
        if (pca.dimension() % channels != 0)
            throw std::invalid_argument("TextureModel: dimension not divisible by channel count");
    }
};

/// Texture instance from texture parameters: mean + basis * lambda.
inline Eigen::VectorXd texture_instance(const TextureModel& model, const Eigen::VectorXd& lambda)
{
    return model.pca.instance(lambda);
}

} // namespace model
} // namespace morphfit

#endif /* MORPHFIT_MODEL_TEXTURE_MODEL_HPP */

/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/model/shape_model.hpp
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

#ifndef MORPHFIT_MODEL_SHAPE_MODEL_HPP
#define MORPHFIT_MODEL_SHAPE_MODEL_HPP

#include "morphfit/core/mesh.hpp"
#include "morphfit/model/pca.hpp"

#include <Eigen/Core>

#include <set>
#include <stdexcept>
#include <vector>

namespace morphfit {
namespace model {

/**
 * PCA shape model over 3N-dimensional vertex vectors. All instances share the
 * template triangulation; landmark_vertex_ids select the sparse-landmark
 * vertices used by the landmark cost term.
 */
struct ShapeModel
{
    PcaModel pca;                          // D = 3N
    Eigen::MatrixXi template_trilist;      // T x 3
    std::vector<int> landmark_vertex_ids;  // L distinct indices in [0, N)

    int num_vertices() const { return pca.dimension() / 3; }
    int num_components() const { return pca.num_components(); }
    int num_landmarks() const { return static_cast<int>(landmark_vertex_ids.size()); }

    void validate() const
    {
        pca.validate();
        if (pca.dimension() % 3 != 0)
            throw std::invalid_argument("ShapeModel: dimension must be a multiple of 3");
        std::set<int> seen;
        for (int id : landmark_vertex_ids)
        {
            if (id < 0 || id >= num_vertices())
                throw std::invalid_argument("ShapeModel: landmark vertex id out of range");
            if (!seen.insert(id).second)
                throw std::invalid_argument("ShapeModel: duplicate landmark vertex id");
        }
    }
};

/// Mesh instance from shape parameters: reshape(mean + basis * p).
inline TriMesh shape_instance(const ShapeModel& model, const Eigen::VectorXd& p)
{
    return vector_to_mesh(model.pca.instance(p), model.template_trilist);
}

/// 3N-vector instance, when the caller does not need a mesh.
inline Eigen::VectorXd shape_instance_vector(const ShapeModel& model, const Eigen::VectorXd& p)
{
    return model.pca.instance(p);
}

} // namespace model
} // namespace morphfit

#endif /* MORPHFIT_MODEL_SHAPE_MODEL_HPP */

/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/camera/jacobians.hpp
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

#ifndef MORPHFIT_CAMERA_JACOBIANS_HPP
#define MORPHFIT_CAMERA_JACOBIANS_HPP

#include "morphfit/camera/camera.hpp"
#include "morphfit/model/shape_model.hpp"

#include <Eigen/Core>

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace morphfit {
namespace camera {

/**
 * Analytic derivatives of the warp W(p, c). Rows come in (x, y) pairs per
 * requested vertex; camera columns are ordered [f, q1, q2, q3, tx, ty, tz].
 *
 * The quaternion columns are taken in the multiplicative tangent: derivatives
 * of projecting with (dq) * q with respect to the increment's vector part at
 * the identity increment. This matches quaternion_update, so additive steps in
 * these coordinates compose correctly with the multiplicative parameter
 * update.
 */
struct WarpJacobians
{
    Eigen::MatrixXd dp; // 2K x n_s
    Eigen::MatrixXd dc; // 2K x 7
};

/**
 * Jacobians of W(p, c) for a subset of vertices (all vertices when vertex_ids
 * is empty is not implied; pass the full index list for that). Throws if any
 * requested vertex falls behind the near plane, naming the vertex.
 */
inline WarpJacobians warp_jacobians_subset(const Eigen::VectorXd& p, const CameraParams& c,
                                           const model::ShapeModel& shape_model,
                                           const std::vector<int>& vertex_ids)
{
    const Eigen::VectorXd s = model::shape_instance_vector(shape_model, p);
    const Eigen::Matrix3d r = rotation_from_quaternion(c.q);
    const int n_s = shape_model.num_components();
    const int k = static_cast<int>(vertex_ids.size());

    WarpJacobians out;
    out.dp.resize(2 * k, n_s);
    out.dc.resize(2 * k, 7);

    for (int row = 0; row < k; ++row)
    {
        const int i = vertex_ids[row];
        const Eigen::Vector3d w = r * s.segment<3>(3 * i); // rotated, pre-translation
        const Eigen::Vector3d v = w + c.t;
        if (v.z() <= k_near_epsilon)
            throw std::domain_error("warp_jacobians: vertex " + std::to_string(i) +
                                    " is behind the camera");

        const double inv_z = 1.0 / v.z();
        Eigen::Matrix<double, 2, 3> proj_jac;
        proj_jac << c.f * inv_z, 0.0, -c.f * v.x() * inv_z * inv_z, //
            0.0, c.f * inv_z, -c.f * v.y() * inv_z * inv_z;

        // d v / d dq_vec at the identity increment: -2 [w]_x.
        Eigen::Matrix3d dv_dq;
        dv_dq << 0.0, 2.0 * w.z(), -2.0 * w.y(), //
            -2.0 * w.z(), 0.0, 2.0 * w.x(),      //
            2.0 * w.y(), -2.0 * w.x(), 0.0;

        out.dp.middleRows<2>(2 * row).noalias() =
            (proj_jac * r) * shape_model.pca.basis.middleRows(3 * i, 3);

        out.dc.block<2, 1>(2 * row, 0) = v.head<2>() * inv_z;          // focal length
        out.dc.block<2, 3>(2 * row, 1).noalias() = proj_jac * dv_dq;   // quaternion tangent
        out.dc.block<2, 3>(2 * row, 4) = proj_jac;                     // translation
    }
    return out;
}

/// Jacobians for every vertex of the model.
inline WarpJacobians warp_jacobians(const Eigen::VectorXd& p, const CameraParams& c,
                                    const model::ShapeModel& shape_model)
{
    std::vector<int> all(shape_model.num_vertices());
    std::iota(all.begin(), all.end(), 0);
    return warp_jacobians_subset(p, c, shape_model, all);
}

} // namespace camera
} // namespace morphfit

#endif /* MORPHFIT_CAMERA_JACOBIANS_HPP */

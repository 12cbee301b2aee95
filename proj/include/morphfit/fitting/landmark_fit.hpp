/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/fitting/landmark_fit.hpp
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

#ifndef MORPHFIT_FITTING_LANDMARK_FIT_HPP
#define MORPHFIT_FITTING_LANDMARK_FIT_HPP

#include "morphfit/camera/camera.hpp"
#include "morphfit/fitting/config.hpp"
#include "morphfit/fitting/gauss_newton.hpp"
#include "morphfit/model/shape_model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace morphfit {
namespace fitting {

namespace detail {

/// 3D coordinates of the mean-shape landmark vertices, one row per landmark.
inline Eigen::MatrixXd mean_landmark_points(const model::ShapeModel& shape_model)
{
    const auto& ids = shape_model.landmark_vertex_ids;
    Eigen::MatrixXd pts(ids.size(), 3);
    for (std::size_t j = 0; j < ids.size(); ++j)
        pts.row(j) = shape_model.pca.mean.segment<3>(3 * ids[j]).transpose();
    return pts;
}

/// Throws unless the landmark vertices affinely span 3D.
inline void require_noncoplanar_landmarks(const Eigen::MatrixXd& pts)
{
    if (pts.rows() < 4)
        throw std::invalid_argument("landmark initialization: need at least 4 landmarks");
    Eigen::MatrixXd centered = pts.rowwise() - pts.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    if (svd.singularValues()[2] < 1e-9 * svd.singularValues()[0])
        throw std::invalid_argument("landmark initialization: landmark vertices are coplanar");
}

} // namespace detail

/**
 * Closed-form camera initializer: a 2D similarity between the mean-shape
 * landmark (x, y) coordinates and the target image landmarks yields the
 * in-plane rotation (as a z-axis quaternion), the depth t_z = f / scale and
 * the image-plane translation. The focal length is taken as given.
 */
inline camera::CameraParams init_camera_from_landmarks(const Eigen::VectorXd& target_landmarks,
                                                       const model::ShapeModel& shape_model,
                                                       double focal,
                                                       const Eigen::Vector2d& principal_point)
{
    const Eigen::MatrixXd pts = detail::mean_landmark_points(shape_model);
    detail::require_noncoplanar_landmarks(pts);
    const int l = static_cast<int>(pts.rows());
    if (target_landmarks.size() != 2 * l)
        throw std::invalid_argument("init_camera_from_landmarks: landmark count mismatch");

    // Complex-number similarity fit between centered point sets.
    std::complex<double> num(0.0, 0.0);
    double den = 0.0;
    const Eigen::Vector2d model_centroid = pts.leftCols<2>().colwise().mean().transpose();
    Eigen::Vector2d target_centroid = Eigen::Vector2d::Zero();
    for (int j = 0; j < l; ++j)
        target_centroid += target_landmarks.segment<2>(2 * j);
    target_centroid /= l;

    for (int j = 0; j < l; ++j)
    {
        const std::complex<double> m(pts(j, 0) - model_centroid.x(),
                                     pts(j, 1) - model_centroid.y());
        const std::complex<double> s(target_landmarks[2 * j] - target_centroid.x(),
                                     target_landmarks[2 * j + 1] - target_centroid.y());
        num += s * std::conj(m);
        den += std::norm(m);
    }
    if (den <= 0.0 || std::abs(num) <= 0.0)
        throw std::invalid_argument("init_camera_from_landmarks: degenerate landmark layout");
    const double scale = std::abs(num) / den;
    const double theta = std::arg(num);

    camera::CameraParams cam;
    cam.f = focal;
    cam.principal_point = principal_point;
    cam.q = Eigen::Vector4d(std::cos(theta / 2.0), 0.0, 0.0, std::sin(theta / 2.0));

    const Eigen::Matrix3d r = camera::rotation_from_quaternion(cam.q);
    const Eigen::Vector3d rotated_centroid =
        r * Eigen::Vector3d(model_centroid.x(), model_centroid.y(), pts.col(2).mean());
    const double t_z = focal / scale - rotated_centroid.z();
    const double depth = rotated_centroid.z() + t_z;
    cam.t.x() = (target_centroid.x() - principal_point.x()) * depth / focal - rotated_centroid.x();
    cam.t.y() = (target_centroid.y() - principal_point.y()) * depth / focal - rotated_centroid.y();
    cam.t.z() = t_z;
    return cam;
}

/**
 * Gauss-Newton on the landmark term plus the shape prior:
 * c_l |W_l(p,c) - s_l|^2 + c_s |p|^2_{Sigma^-1}. The camera starts from the
 * closed-form similarity initializer; the focal length stays fixed unless
 * cfg.optimize_focal is set. Returns the minimizing (p, camera).
 */
inline std::pair<Eigen::VectorXd, camera::CameraParams>
fit_landmarks_only(const Eigen::VectorXd& target_landmarks, const model::ShapeModel& shape_model,
                   std::pair<int, int> image_size, const FitConfig& cfg = {})
{
    cfg.validate();
    const auto [height, width] = image_size;
    const double focal = cfg.focal_length > 0.0 ? cfg.focal_length : std::max(height, width);
    const Eigen::Vector2d principal_point(0.5 * (width - 1), 0.5 * (height - 1));
    const double c_l = cfg.landmark_weight >= 0.0 ? cfg.landmark_weight : 1.0;

    FitState state;
    state.p = Eigen::VectorXd::Zero(shape_model.num_components());
    state.cam =
        init_camera_from_landmarks(target_landmarks, shape_model, focal, principal_point);
    state.lambda = Eigen::VectorXd::Zero(0);

    const int n_s = shape_model.num_components();
    const Eigen::VectorXd prior_diag = cfg.shape_prior * shape_model.pca.eigenvalues.cwiseInverse();

    auto objective = [&](const FitState& s) {
        const LandmarkSystem lm =
            assemble_landmark_system(s, shape_model, target_landmarks, cfg.optimize_focal);
        return c_l * lm.residual.squaredNorm() +
               cfg.shape_prior *
                   (s.p.array().square() / shape_model.pca.eigenvalues.array()).sum();
    };

    double cost = objective(state);
    for (int iter = 0; iter < cfg.max_iters; ++iter)
    {
        const LandmarkSystem lm =
            assemble_landmark_system(state, shape_model, target_landmarks, cfg.optimize_focal);
        const int m_c = static_cast<int>(lm.j_c.cols());

        Eigen::MatrixXd h(n_s + m_c, n_s + m_c);
        h.topLeftCorner(n_s, n_s) = c_l * (lm.j_p.transpose() * lm.j_p);
        h.topLeftCorner(n_s, n_s) += prior_diag.asDiagonal();
        h.topRightCorner(n_s, m_c) = c_l * (lm.j_p.transpose() * lm.j_c);
        h.bottomLeftCorner(m_c, n_s) = h.topRightCorner(n_s, m_c).transpose();
        h.bottomRightCorner(m_c, m_c) = c_l * (lm.j_c.transpose() * lm.j_c);

        Eigen::VectorXd g(n_s + m_c);
        g.head(n_s) = c_l * (lm.j_p.transpose() * lm.residual) +
                      cfg.shape_prior *
                          (state.p.array() / shape_model.pca.eigenvalues.array()).matrix();
        g.tail(m_c) = c_l * (lm.j_c.transpose() * lm.residual);

        const Eigen::VectorXd delta = -detail::solve_spd(h, g, "fit_landmarks_only");

        double scale = 1.0;
        bool accepted = false;
        FitState candidate = state;
        for (int halving = 0; halving <= cfg.max_step_halvings; ++halving)
        {
            candidate = state;
            candidate.p += scale * delta.head(n_s);
            Eigen::VectorXd dc = scale * delta.tail(m_c);
            int offset = 0;
            if (cfg.optimize_focal)
            {
                candidate.cam.f += dc[0];
                offset = 1;
            }
            candidate.cam.q = camera::quaternion_update(state.cam.q, dc.segment<3>(offset));
            candidate.cam.t += dc.segment<3>(offset + 3);
            if (candidate.cam.f > 0.0)
            {
                const double candidate_cost = objective(candidate);
                if (candidate_cost <= cost * (1.0 + 1e-12) + 1e-15)
                {
                    accepted = true;
                    cost = candidate_cost;
                    break;
                }
            }
            scale *= 0.5;
        }
        if (!accepted)
            break;
        state = candidate;
        if (scale * delta.norm() < cfg.step_tol)
            break;
    }
    return {state.p, state.cam};
}

} // namespace fitting
} // namespace morphfit

#endif /* MORPHFIT_FITTING_LANDMARK_FIT_HPP */

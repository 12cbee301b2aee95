/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/camera/camera.hpp
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

#ifndef MORPHFIT_CAMERA_CAMERA_HPP
#define MORPHFIT_CAMERA_CAMERA_HPP

#include "morphfit/model/shape_model.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace morphfit {
namespace camera {

/// Vertices with camera-space depth at or below this are flagged behind-camera.
inline constexpr double k_near_epsilon = 1e-4;

/**
 * Pinhole camera: focal length in pixels (x and y assumed equal), unit
 * quaternion (q0, q1, q2, q3), translation in object units and a fixed
 * principal point. The free parameter vector is [f, q1, q2, q3, tx, ty, tz].
 */
struct CameraParams
{
    double f = 1.0;
    Eigen::Vector4d q = Eigen::Vector4d(1.0, 0.0, 0.0, 0.0);
    Eigen::Vector3d t = Eigen::Vector3d::Zero();
    Eigen::Vector2d principal_point = Eigen::Vector2d::Zero();

    void validate(double tol = 1e-12) const
    {
        if (!(f > 0.0))
            throw std::invalid_argument("CameraParams: focal length must be positive");
        if (std::abs(q.squaredNorm() - 1.0) > tol)
            throw std::invalid_argument("CameraParams: quaternion must have unit norm");
    }
};

/// Projected mesh: interleaved (x, y) pixel coordinates plus per-vertex
/// camera-space depth. Behind-camera vertices keep their depth and are flagged.
struct ProjectedShape
{
    Eigen::VectorXd points2d; // 2N, (x1, y1, ..., xN, yN)
    Eigen::VectorXd depths;   // N, camera-space v_z
    std::vector<bool> behind; // N, true when v_z <= near epsilon

    int num_vertices() const { return static_cast<int>(depths.size()); }
    Eigen::Vector2d point(int i) const { return {points2d[2 * i], points2d[2 * i + 1]}; }
    bool any_behind() const
    {
        for (bool b : behind)
            if (b)
                return true;
        return false;
    }
};

/**
 * Rotation matrix of a unit quaternion (q0, q1, q2, q3):
 *
 *   R = 2 * [ 1/2-q2^2-q3^2   q1q2-q0q3      q1q3+q0q2
 *             q1q2+q0q3       1/2-q1^2-q3^2  q2q3-q0q1
 *             q1q3-q0q2       q2q3+q0q1      1/2-q1^2-q2^2 ]
 *
 * Throws for quaternions off the unit sphere by more than 1e-9.
 */
inline Eigen::Matrix3d rotation_from_quaternion(const Eigen::Vector4d& q)
{
    if (std::abs(q.squaredNorm() - 1.0) > 1e-9)
        throw std::invalid_argument("rotation_from_quaternion: quaternion must have unit norm");
    const double q0 = q[0], q1 = q[1], q2 = q[2], q3 = q[3];
    Eigen::Matrix3d r;
    r << 0.5 - q2 * q2 - q3 * q3, q1 * q2 - q0 * q3, q1 * q3 + q0 * q2, //
        q1 * q2 + q0 * q3, 0.5 - q1 * q1 - q3 * q3, q2 * q3 - q0 * q1,  //
        q1 * q3 - q0 * q2, q2 * q3 + q0 * q1, 0.5 - q1 * q1 - q2 * q2;
    return 2.0 * r;
}

/// Rigid view transform R * x + t.
inline Eigen::Vector3d view_transform(const Eigen::Vector3d& x, const CameraParams& c)
{
    return rotation_from_quaternion(c.q) * x + c.t;
}

/**
 * Perspective projection of a camera-space point:
 * (f/v_z) * (v_x, v_y) + principal_point. Throws behind-camera for
 * v_z <= near epsilon; bulk projection (camera_apply) masks instead.
 */
inline Eigen::Vector2d perspective_project(const Eigen::Vector3d& v, double f,
                                           const Eigen::Vector2d& principal_point)
{
    if (v.z() <= k_near_epsilon)
        throw std::domain_error("perspective_project: point at or behind the near plane");
    return (f / v.z()) * v.head<2>() + principal_point;
}

/**
 * Projects every vertex of a 3N shape vector. Vertices at or behind the near
 * plane are flagged in the result instead of aborting the projection; their
 * 2D coordinates are left at zero.
 */
inline ProjectedShape camera_apply(const Eigen::VectorXd& s, const CameraParams& c)
{
    if (s.size() % 3 != 0)
        throw std::invalid_argument("camera_apply: shape vector length must be a multiple of 3");
    c.validate(1e-9);
    const int n = static_cast<int>(s.size() / 3);
    const Eigen::Matrix3d r = rotation_from_quaternion(c.q);

    ProjectedShape out;
    out.points2d = Eigen::VectorXd::Zero(2 * n);
    out.depths = Eigen::VectorXd::Zero(n);
    out.behind.assign(n, false);
    for (int i = 0; i < n; ++i)
    {
        const Eigen::Vector3d v = r * s.segment<3>(3 * i) + c.t;
        out.depths[i] = v.z();
        if (v.z() <= k_near_epsilon)
        {
            out.behind[i] = true;
            continue;
        }
        out.points2d[2 * i] = c.f * v.x() / v.z() + c.principal_point.x();
        out.points2d[2 * i + 1] = c.f * v.y() / v.z() + c.principal_point.y();
    }
    return out;
}

/// The camera function W(p, c): shape instance followed by projection.
inline ProjectedShape warp(const Eigen::VectorXd& p, const CameraParams& c,
                           const model::ShapeModel& shape_model)
{
    return camera_apply(model::shape_instance_vector(shape_model, p), c);
}

/**
 * Multiplicative quaternion update q <- (dq) * q from the vector part of the
 * increment; dq0 is recovered as sqrt(1 - |dq_vec|^2). Increments of norm >= 1
 * are scaled back to norm 0.5 to stay on the manifold. The result is
 * renormalized to unit length.
 */
inline Eigen::Vector4d quaternion_update(const Eigen::Vector4d& q, const Eigen::Vector3d& dq_vec)
{
    Eigen::Vector3d d = dq_vec;
    const double n2 = d.squaredNorm();
    if (n2 >= 1.0)
        d *= 0.5 / std::sqrt(n2);
    const double d0 = std::sqrt(1.0 - d.squaredNorm());

    const double q0 = q[0];
    const Eigen::Vector3d qv = q.tail<3>();
    Eigen::Vector4d out;
    out[0] = d0 * q0 - d.dot(qv);
    out.tail<3>() = d0 * qv + q0 * d + d.cross(qv);
    out.normalize();
    return out;
}

} // namespace camera
} // namespace morphfit

#endif /* MORPHFIT_CAMERA_CAMERA_HPP */

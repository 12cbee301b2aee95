/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/render/raycast.hpp
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

#ifndef MORPHFIT_RENDER_RAYCAST_HPP
#define MORPHFIT_RENDER_RAYCAST_HPP

#include "morphfit/camera/camera.hpp"
#include "morphfit/core/mesh.hpp"
#include "morphfit/core/parallel.hpp"
#include "morphfit/render/mask.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>

namespace morphfit {
namespace render {

/**
 * Moeller-Trumbore ray/triangle intersection. The ray is o + t*d; returns
 * true and the hit parameter when the intersection lies inside the triangle
 * within tolerance eps.
 */
inline bool ray_triangle_intersect(const Eigen::Vector3d& o, const Eigen::Vector3d& d,
                                   const Eigen::Vector3d& v0, const Eigen::Vector3d& v1,
                                   const Eigen::Vector3d& v2, double eps, double& t_out)
{
    const Eigen::Vector3d e1 = v1 - v0;
    const Eigen::Vector3d e2 = v2 - v0;
    const Eigen::Vector3d pvec = d.cross(e2);
    const double det = e1.dot(pvec);
    if (std::abs(det) < eps)
        return false;
    const double inv_det = 1.0 / det;
    const Eigen::Vector3d tvec = o - v0;
    const double u = tvec.dot(pvec) * inv_det;
    if (u < -eps || u > 1.0 + eps)
        return false;
    const Eigen::Vector3d qvec = tvec.cross(e1);
    const double v = d.dot(qvec) * inv_det;
    if (v < -eps || u + v > 1.0 + eps)
        return false;
    t_out = e2.dot(qvec) * inv_det;
    return true;
}

/**
 * Self-occlusion mask by ray casting: a vertex is observed iff the segment
 * from the camera center to the vertex hits no triangle of the mesh other
 * than triangles incident to that vertex. Behind-camera vertices are
 * unobserved. Hits at the segment end (grazing the target vertex) do not
 * occlude.
 */
inline ObservationMask occlusion_mask_raycast(const TriMesh& mesh, const camera::CameraParams& c)
{
    constexpr double eps = 1e-9;
    const int n = mesh.num_vertices();
    const int t = mesh.num_triangles();
    if (n == 0)
        throw std::invalid_argument("occlusion_mask_raycast: empty mesh");

    const Eigen::Matrix3d r = camera::rotation_from_quaternion(c.q);
    // Camera center in object space: solve R x + t = 0.
    const Eigen::Vector3d origin = -r.transpose() * c.t;

    // Byte buffer for the parallel loop; vector<bool> is bit-packed and not
    // safe for concurrent per-index writes.
    std::vector<char> observed(n, 0);
    parallel_for(n, [&](int i) {
        const Eigen::Vector3d target = mesh.vertices.row(i).transpose();
        const Eigen::Vector3d cam_space = r * target + c.t;
        if (cam_space.z() <= camera::k_near_epsilon)
            return; // behind camera; stays unobserved
        const Eigen::Vector3d dir = target - origin;

        bool occluded = false;
        for (int tri = 0; tri < t && !occluded; ++tri)
        {
            const int a = mesh.trilist(tri, 0);
            const int b = mesh.trilist(tri, 1);
            const int cc = mesh.trilist(tri, 2);
            if (a == i || b == i || cc == i)
                continue;
            double hit_t;
            if (ray_triangle_intersect(origin, dir, mesh.vertices.row(a).transpose(),
                                       mesh.vertices.row(b).transpose(),
                                       mesh.vertices.row(cc).transpose(), eps, hit_t) &&
                hit_t > eps && hit_t < 1.0 - eps)
            {
                occluded = true;
            }
        }
        if (!occluded)
            observed[i] = 1;
    });
    ObservationMask mask(n, false);
    for (int i = 0; i < n; ++i)
        mask.visible[i] = observed[i] != 0;
    return mask;
}

} // namespace render
} // namespace morphfit

#endif /* MORPHFIT_RENDER_RAYCAST_HPP */

/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/render/zbuffer.hpp
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

#ifndef MORPHFIT_RENDER_ZBUFFER_HPP
#define MORPHFIT_RENDER_ZBUFFER_HPP

#include "morphfit/camera/camera.hpp"
#include "morphfit/core/mesh.hpp"
#include "morphfit/render/mask.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace morphfit {
namespace render {

/// Depth buffer plus the index of the winning triangle per pixel (-1 = none).
struct DepthRaster
{
    Eigen::MatrixXd depth; // H x W, camera-space z of the nearest surface
    Eigen::MatrixXi tri;   // H x W, winning triangle index or -1

    int height() const { return static_cast<int>(depth.rows()); }
    int width() const { return static_cast<int>(depth.cols()); }
};

namespace detail {

/// Screen-space barycentric weights of point (px, py) in the given triangle.
/// Returns false for degenerate (zero-area) triangles.
inline bool barycentric(double x0, double y0, double x1, double y1, double x2, double y2,
                        double px, double py, double& w0, double& w1, double& w2)
{
    const double denom = (y1 - y2) * (x0 - x2) + (x2 - x1) * (y0 - y2);
    if (std::abs(denom) < 1e-12)
        return false;
    w0 = ((y1 - y2) * (px - x2) + (x2 - x1) * (py - y2)) / denom;
    w1 = ((y2 - y0) * (px - x2) + (x0 - x2) * (py - y2)) / denom;
    w2 = 1.0 - w0 - w1;
    return true;
}

} // namespace detail

/**
 * Rasterizes all triangles of a projected mesh with depth interpolation.
 * Inverse depth is interpolated (affine in screen space under perspective);
 * pixels sample at integer coordinates. Triangles with a behind-camera vertex
 * and degenerate projected triangles are skipped. Ties in depth keep the
 * lowest triangle index.
 */
inline DepthRaster rasterize_depth(const camera::ProjectedShape& proj,
                                   const Eigen::MatrixXi& trilist, int height, int width)
{
    DepthRaster raster;
    raster.depth = Eigen::MatrixXd::Constant(height, width, std::numeric_limits<double>::infinity());
    raster.tri = Eigen::MatrixXi::Constant(height, width, -1);

    for (int t = 0; t < trilist.rows(); ++t)
    {
        const int ia = trilist(t, 0), ib = trilist(t, 1), ic = trilist(t, 2);
        if (proj.behind[ia] || proj.behind[ib] || proj.behind[ic])
            continue;
        const double x0 = proj.points2d[2 * ia], y0 = proj.points2d[2 * ia + 1];
        const double x1 = proj.points2d[2 * ib], y1 = proj.points2d[2 * ib + 1];
        const double x2 = proj.points2d[2 * ic], y2 = proj.points2d[2 * ic + 1];
        const double iz0 = 1.0 / proj.depths[ia];
        const double iz1 = 1.0 / proj.depths[ib];
        const double iz2 = 1.0 / proj.depths[ic];

        const double denom = (y1 - y2) * (x0 - x2) + (x2 - x1) * (y0 - y2);
        if (std::abs(denom) < 1e-12)
            continue; // degenerate projected triangle

        const int min_x = std::max(0, static_cast<int>(std::ceil(std::min({x0, x1, x2}))));
        const int max_x = std::min(width - 1, static_cast<int>(std::floor(std::max({x0, x1, x2}))));
        const int min_y = std::max(0, static_cast<int>(std::ceil(std::min({y0, y1, y2}))));
        const int max_y = std::min(height - 1, static_cast<int>(std::floor(std::max({y0, y1, y2}))));

        for (int py = min_y; py <= max_y; ++py)
            for (int px = min_x; px <= max_x; ++px)
            {
                const double w0 = ((y1 - y2) * (px - x2) + (x2 - x1) * (py - y2)) / denom;
                const double w1 = ((y2 - y0) * (px - x2) + (x0 - x2) * (py - y2)) / denom;
                const double w2 = 1.0 - w0 - w1;
                if (w0 < -1e-12 || w1 < -1e-12 || w2 < -1e-12)
                    continue;
                const double z = 1.0 / (w0 * iz0 + w1 * iz1 + w2 * iz2);
                if (z < raster.depth(py, px))
                {
                    raster.depth(py, px) = z;
                    raster.tri(py, px) = t;
                }
            }
    }
    return raster;
}

/**
 * Z-buffer vertex visibility: a vertex is visible iff the z-buffer winner at
 * its projected pixel is a triangle incident to it and that triangle's
 * interpolated depth at the exact projected location matches the vertex depth
 * within delta_z = 1e-3 x the scene depth range.
 */
inline ObservationMask visible_vertices_zbuffer(const TriMesh& mesh, const camera::CameraParams& c,
                                                std::pair<int, int> raster_size)
{
    const auto [height, width] = raster_size;
    const camera::ProjectedShape proj = camera::camera_apply(mesh_to_vector(mesh), c);
    const DepthRaster raster = rasterize_depth(proj, mesh.trilist, height, width);

    double min_z = std::numeric_limits<double>::infinity();
    double max_z = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < proj.num_vertices(); ++i)
        if (!proj.behind[i])
        {
            min_z = std::min(min_z, proj.depths[i]);
            max_z = std::max(max_z, proj.depths[i]);
        }
    const double delta_z = (max_z > min_z ? 1e-3 * (max_z - min_z) : 0.0) + 1e-9;

    ObservationMask mask(mesh.num_vertices(), false);
    for (int i = 0; i < mesh.num_vertices(); ++i)
    {
        if (proj.behind[i])
            continue;
        const double x = proj.points2d[2 * i], y = proj.points2d[2 * i + 1];
        const int px = static_cast<int>(std::lround(x));
        const int py = static_cast<int>(std::lround(y));
        if (px < 0 || px >= width || py < 0 || py >= height)
            continue;
        // The rounded pixel may fall just outside the 1-ring (sub-pixel
        // rounding at silhouettes and mesh borders), so scan its immediate
        // neighborhood for a winner incident to the vertex.
        for (int dy = 0; dy <= 2 && !mask.visible[i]; ++dy)
            for (int dx = 0; dx <= 2; ++dx)
            {
                const int qx = px + (dx == 2 ? -1 : dx);
                const int qy = py + (dy == 2 ? -1 : dy);
                if (qx < 0 || qx >= width || qy < 0 || qy >= height)
                    continue;
                const int t = raster.tri(qy, qx);
                if (t < 0)
                    continue;
                const int ia = mesh.trilist(t, 0), ib = mesh.trilist(t, 1),
                          ic = mesh.trilist(t, 2);
                if (ia != i && ib != i && ic != i)
                    continue;
                // Winner plane's depth at the exact projected vertex location.
                double w0, w1, w2;
                if (!detail::barycentric(proj.points2d[2 * ia], proj.points2d[2 * ia + 1],
                                         proj.points2d[2 * ib], proj.points2d[2 * ib + 1],
                                         proj.points2d[2 * ic], proj.points2d[2 * ic + 1], x, y,
                                         w0, w1, w2))
                    continue;
                const double iz =
                    w0 / proj.depths[ia] + w1 / proj.depths[ib] + w2 / proj.depths[ic];
                if (iz <= 0.0)
                    continue;
                if (std::abs(1.0 / iz - proj.depths[i]) <= delta_z)
                {
                    mask.visible[i] = true;
                    break;
                }
            }
    }
    return mask;
}

} // namespace render
} // namespace morphfit

#endif /* MORPHFIT_RENDER_ZBUFFER_HPP */

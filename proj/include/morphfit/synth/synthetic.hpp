/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/synth/synthetic.hpp
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

#ifndef MORPHFIT_SYNTH_SYNTHETIC_HPP
#define MORPHFIT_SYNTH_SYNTHETIC_HPP

#include "morphfit/camera/camera.hpp"
#include "morphfit/core/image.hpp"
#include "morphfit/core/mesh.hpp"
#include "morphfit/model/shape_model.hpp"
#include "morphfit/model/texture_model.hpp"
#include "morphfit/render/zbuffer.hpp"

#include <Eigen/Core>
#include <Eigen/QR>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace morphfit {
namespace synth {

/// Unit icosphere: icosahedron subdivided `level` times (12, 42, 162, ... vertices).
inline TriMesh make_icosphere(int level)
{
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> verts = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
        {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& v : verts)
        v.normalize();
    std::vector<Eigen::Vector3i> tris = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int s = 0; s < level; ++s)
    {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            const auto it = midpoint.find(key);
            if (it != midpoint.end())
                return it->second;
            const Eigen::Vector3d m = (verts[a] + verts[b]).normalized();
            verts.push_back(m);
            const int id = static_cast<int>(verts.size()) - 1;
            midpoint[key] = id;
            return id;
        };
        std::vector<Eigen::Vector3i> next;
        next.reserve(tris.size() * 4);
        for (const auto& t : tris)
        {
            const int ab = mid(t[0], t[1]);
            const int bc = mid(t[1], t[2]);
            const int ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }

    TriMesh mesh;
    mesh.vertices.resize(verts.size(), 3);
    for (std::size_t i = 0; i < verts.size(); ++i)
        mesh.vertices.row(i) = verts[i];
    mesh.trilist.resize(tris.size(), 3);
    for (std::size_t t = 0; t < tris.size(); ++t)
        mesh.trilist.row(t) = tris[t];
    return mesh;
}

namespace detail {

/// Smooth random scalar field over vertex positions: a few low-frequency
/// sinusoids with random frequencies and phases.
inline Eigen::VectorXd smooth_field(const Eigen::MatrixXd& points, std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.14159265358979323846);
    Eigen::VectorXd field = Eigen::VectorXd::Zero(points.rows());
    for (int harmonic = 0; harmonic < 4; ++harmonic)
    {
        const Eigen::Vector3d freq(1.2 * gauss(rng), 1.2 * gauss(rng), 1.2 * gauss(rng));
        const double shift = phase(rng);
        const double amp = gauss(rng);
        for (int i = 0; i < points.rows(); ++i)
            field[i] += amp * std::sin(points.row(i).dot(freq) + shift);
    }
    return field;
}

/// Farthest-point sampling over vertex positions, seeded at start_vertex.
inline std::vector<int> farthest_point_sample(const Eigen::MatrixXd& points,
                                              const std::vector<int>& candidates, int count,
                                              int start_vertex)
{
    std::vector<int> chosen = {start_vertex};
    std::vector<double> dist(candidates.size(), std::numeric_limits<double>::infinity());
    while (static_cast<int>(chosen.size()) < count)
    {
        int best = -1;
        double best_dist = -1.0;
        for (std::size_t k = 0; k < candidates.size(); ++k)
        {
            const double d =
                (points.row(candidates[k]) - points.row(chosen.back())).norm();
            dist[k] = std::min(dist[k], d);
            if (dist[k] > best_dist)
            {
                best_dist = dist[k];
                best = candidates[k];
            }
        }
        if (best < 0 || best_dist <= 0.0)
            break;
        chosen.push_back(best);
    }
    return chosen;
}

/// Thin orthonormalization of the columns of m.
inline Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& m)
{
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

} // namespace detail

struct SyntheticModelOptions
{
    int n_shape = 30;
    int n_texture = 50;
    int channels = 3;
    int landmarks = 12;
    double shape_sigma = 1.6;   // leading shape standard deviation
    double shape_decay = 0.90;  // geometric eigenvalue decay
    double texture_sigma = 2.0;
    double texture_decay = 0.90;
};

/**
 * Procedural statistical models over a deformed icosphere: smooth random
 * vector fields (orthonormalized) as shape components and smooth low-frequency
 * per-vertex functions as texture components. Deterministic under the seed.
 * The subdivision level is the smallest reaching n_target vertices.
 */
inline std::pair<model::ShapeModel, model::TextureModel>
make_synthetic_model(std::uint64_t seed, int n_target, const SyntheticModelOptions& opts = {})
{
    if (n_target < 100)
        throw std::invalid_argument("make_synthetic_model: N_target must be >= 100");
    int level = 0;
    int n = 12;
    while (n < n_target && level < 7)
    {
        ++level;
        n = 10 * (1 << (2 * level)) + 2;
    }
    TriMesh base = make_icosphere(level);
    n = base.num_vertices();

    std::mt19937_64 rng(seed);

    // Mean shape: radially modulated sphere, slightly anisotropic.
    Eigen::VectorXd radial = detail::smooth_field(base.vertices, rng);
    radial = 1.0 + 0.06 * (radial.array() / std::max(1e-12, radial.cwiseAbs().maxCoeff()));
    Eigen::MatrixXd mean_pts = base.vertices;
    for (int i = 0; i < n; ++i)
        mean_pts.row(i) *= radial[i];
    mean_pts.col(0) *= 1.05;
    mean_pts.col(2) *= 0.95;

    model::ShapeModel shape;
    shape.template_trilist = base.trilist;
    TriMesh mean_mesh{mean_pts, base.trilist};
    shape.pca.mean = mesh_to_vector(mean_mesh);

    Eigen::MatrixXd shape_fields(3 * n, opts.n_shape);
    for (int j = 0; j < opts.n_shape; ++j)
    {
        const Eigen::VectorXd fx = detail::smooth_field(mean_pts, rng);
        const Eigen::VectorXd fy = detail::smooth_field(mean_pts, rng);
        const Eigen::VectorXd fz = detail::smooth_field(mean_pts, rng);
        for (int i = 0; i < n; ++i)
        {
            shape_fields(3 * i, j) = fx[i];
            shape_fields(3 * i + 1, j) = fy[i];
            shape_fields(3 * i + 2, j) = fz[i];
        }
    }
    shape.pca.basis = detail::orthonormal_columns(shape_fields);
    shape.pca.eigenvalues.resize(opts.n_shape);
    for (int j = 0; j < opts.n_shape; ++j)
        shape.pca.eigenvalues[j] =
            std::pow(opts.shape_sigma * std::pow(opts.shape_decay, j), 2);

    // Landmarks: well-spread vertices on the camera-facing (negative z) side.
    std::vector<int> front;
    for (int i = 0; i < n; ++i)
        if (mean_pts(i, 2) < -0.35)
            front.push_back(i);
    int start = front.front();
    for (int i : front)
        if (mean_pts(i, 2) < mean_pts(start, 2))
            start = i;
    shape.landmark_vertex_ids =
        detail::farthest_point_sample(mean_pts, front, opts.landmarks, start);

    // Texture model: smooth per-channel mean and orthonormal smooth components.
    const int c = opts.channels;
    model::TextureModel texture;
    texture.channels = c;
    texture.pca.mean.resize(static_cast<Eigen::Index>(c) * n);
    for (int ch = 0; ch < c; ++ch)
    {
        const Eigen::VectorXd field = detail::smooth_field(mean_pts, rng);
        const double peak = std::max(1e-12, field.cwiseAbs().maxCoeff());
        for (int i = 0; i < n; ++i)
            texture.pca.mean[static_cast<Eigen::Index>(i) * c + ch] =
                0.5 + 0.18 * field[i] / peak;
    }

    Eigen::MatrixXd tex_fields(static_cast<Eigen::Index>(c) * n, opts.n_texture);
    for (int j = 0; j < opts.n_texture; ++j)
        for (int ch = 0; ch < c; ++ch)
        {
            const Eigen::VectorXd field = detail::smooth_field(mean_pts, rng);
            for (int i = 0; i < n; ++i)
                tex_fields(static_cast<Eigen::Index>(i) * c + ch, j) = field[i];
        }
    texture.pca.basis = detail::orthonormal_columns(tex_fields);
    texture.pca.eigenvalues.resize(opts.n_texture);
    for (int j = 0; j < opts.n_texture; ++j)
        texture.pca.eigenvalues[j] =
            std::pow(opts.texture_sigma * std::pow(opts.texture_decay, j), 2);

    shape.validate();
    texture.validate();
    return {std::move(shape), std::move(texture)};
}

/// Ground-truth scene: models, true parameters, rendered image and landmarks.
struct SyntheticScene
{
    model::ShapeModel shape_model;
    model::TextureModel texture_model;
    Eigen::VectorXd p_true;
    camera::CameraParams camera_true;
    Eigen::VectorXd lambda_true;
    Image image;
    Eigen::VectorXd landmarks; // W_l(p*, c*), interleaved x y
    double interocular = 0.0;
};

/**
 * Paints the per-vertex texture instance into an image: per pixel, the
 * z-buffer-winning triangle's barycentric blend of its corner values.
 * Rasterizes at 2x resolution and box-downsamples to temper edge aliasing.
 * Background is zero. Throws if the instance projects entirely off frame.
 */
inline Image render_scene_image(const model::ShapeModel& shape_model,
                                const model::TextureModel& texture_model,
                                const Eigen::VectorXd& p, const camera::CameraParams& cam,
                                const Eigen::VectorXd& lambda, int height, int width)
{
    const int c = texture_model.channels;
    const Eigen::VectorXd shape_vec = model::shape_instance_vector(shape_model, p);
    const Eigen::VectorXd tex = model::texture_instance(texture_model, lambda);

    // Supersampled camera: fine coordinate x_f = 2 x + 0.5.
    camera::CameraParams fine_cam = cam;
    fine_cam.f = 2.0 * cam.f;
    fine_cam.principal_point = 2.0 * cam.principal_point + Eigen::Vector2d(0.5, 0.5);
    const int fh = 2 * height, fw = 2 * width;

    const camera::ProjectedShape proj = camera::camera_apply(shape_vec, fine_cam);
    bool any_in_frame = false;
    for (int i = 0; i < proj.num_vertices() && !any_in_frame; ++i)
        if (!proj.behind[i] && proj.points2d[2 * i] >= 0 && proj.points2d[2 * i] < fw &&
            proj.points2d[2 * i + 1] >= 0 && proj.points2d[2 * i + 1] < fh)
            any_in_frame = true;
    if (!any_in_frame)
        throw std::runtime_error("render_scene: instance projects outside the frame");

    const render::DepthRaster raster =
        render::rasterize_depth(proj, shape_model.template_trilist, fh, fw);

    Image fine(fh, fw, c);
    for (int py = 0; py < fh; ++py)
        for (int px = 0; px < fw; ++px)
        {
            const int t = raster.tri(py, px);
            if (t < 0)
                continue;
            const int ia = shape_model.template_trilist(t, 0);
            const int ib = shape_model.template_trilist(t, 1);
            const int ic = shape_model.template_trilist(t, 2);
            double w0, w1, w2;
            if (!render::detail::barycentric(
                    proj.points2d[2 * ia], proj.points2d[2 * ia + 1], proj.points2d[2 * ib],
                    proj.points2d[2 * ib + 1], proj.points2d[2 * ic], proj.points2d[2 * ic + 1],
                    px, py, w0, w1, w2))
                continue;
            for (int ch = 0; ch < c; ++ch)
                fine.at(py, px, ch) =
                    w0 * tex[static_cast<Eigen::Index>(ia) * c + ch] +
                    w1 * tex[static_cast<Eigen::Index>(ib) * c + ch] +
                    w2 * tex[static_cast<Eigen::Index>(ic) * c + ch];
        }

    Image out(height, width, c);
    for (int py = 0; py < height; ++py)
        for (int px = 0; px < width; ++px)
            for (int ch = 0; ch < c; ++ch)
                out.at(py, px, ch) =
                    0.25 * (fine.at(2 * py, 2 * px, ch) + fine.at(2 * py, 2 * px + 1, ch) +
                            fine.at(2 * py + 1, 2 * px, ch) + fine.at(2 * py + 1, 2 * px + 1, ch));
    return out;
}

/// Renders a full ground-truth scene around given true parameters.
inline SyntheticScene render_scene(model::ShapeModel shape_model,
                                   model::TextureModel texture_model, const Eigen::VectorXd& p,
                                   const camera::CameraParams& cam, const Eigen::VectorXd& lambda,
                                   int height, int width)
{
    SyntheticScene scene;
    scene.image =
        render_scene_image(shape_model, texture_model, p, cam, lambda, height, width);
    scene.p_true = p;
    scene.camera_true = cam;
    scene.lambda_true = lambda;

    const Eigen::VectorXd shape_vec = model::shape_instance_vector(shape_model, p);
    const camera::ProjectedShape proj = camera::camera_apply(shape_vec, cam);
    const auto& ids = shape_model.landmark_vertex_ids;
    scene.landmarks.resize(2 * ids.size());
    for (std::size_t j = 0; j < ids.size(); ++j)
    {
        scene.landmarks[2 * j] = proj.points2d[2 * ids[j]];
        scene.landmarks[2 * j + 1] = proj.points2d[2 * ids[j] + 1];
    }
    if (ids.size() >= 2)
    {
        const Eigen::Vector3d a = shape_vec.segment<3>(3 * ids[0]);
        const Eigen::Vector3d b = shape_vec.segment<3>(3 * ids[1]);
        scene.interocular = (a - b).norm();
    }
    scene.shape_model = std::move(shape_model);
    scene.texture_model = std::move(texture_model);
    return scene;
}

struct SceneOptions
{
    int n_target = 2500;
    SyntheticModelOptions model;
    int height = 256;
    int width = 256;
    double t_z = 4.0;
    double p_scale = 0.5;      // truth draw, in units of sqrt(eigenvalue)
    double lambda_scale = 0.7; // truth draw, in units of sqrt(eigenvalue)
    double rotation_deg = 8.0; // random truth rotation magnitude
};

/// Complete seeded scene: models plus a rendered ground-truth observation.
inline SyntheticScene make_synthetic_scene(std::uint64_t seed, const SceneOptions& opts = {})
{
    auto [shape, texture] = make_synthetic_model(seed, opts.n_target, opts.model);

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::VectorXd p(shape.num_components());
    for (int j = 0; j < p.size(); ++j)
        p[j] = opts.p_scale * std::sqrt(shape.pca.eigenvalues[j]) * gauss(rng);
    Eigen::VectorXd lambda(texture.num_components());
    for (int j = 0; j < lambda.size(); ++j)
        lambda[j] = opts.lambda_scale * std::sqrt(texture.pca.eigenvalues[j]) * gauss(rng);

    camera::CameraParams cam;
    cam.t = Eigen::Vector3d(0.0, 0.0, opts.t_z);
    cam.principal_point = Eigen::Vector2d(0.5 * (opts.width - 1), 0.5 * (opts.height - 1));

    Eigen::Vector3d axis(gauss(rng), gauss(rng), gauss(rng));
    axis.normalize();
    const double angle = opts.rotation_deg * 3.14159265358979323846 / 180.0;
    cam.q[0] = std::cos(angle / 2.0);
    cam.q.tail<3>() = std::sin(angle / 2.0) * axis;

    // Focal length so the object spans roughly 60% of the frame.
    const double max_radius = shape.pca.mean.reshaped(3, shape.num_vertices())
                                  .colwise()
                                  .norm()
                                  .maxCoeff();
    cam.f = 0.30 * std::min(opts.height, opts.width) * opts.t_z / max_radius;

    return render_scene(std::move(shape), std::move(texture), p, cam, lambda, opts.height,
                        opts.width);
}

} // namespace synth
} // namespace morphfit

#endif /* MORPHFIT_SYNTH_SYNTHETIC_HPP */

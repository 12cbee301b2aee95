/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/fitting/gauss_newton.hpp
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

#ifndef MORPHFIT_FITTING_GAUSS_NEWTON_HPP
#define MORPHFIT_FITTING_GAUSS_NEWTON_HPP

#include "morphfit/camera/camera.hpp"
#include "morphfit/camera/jacobians.hpp"
#include "morphfit/features/feature_image.hpp"
#include "morphfit/fitting/config.hpp"
#include "morphfit/model/shape_model.hpp"
#include "morphfit/model/texture_model.hpp"
#include "morphfit/render/sampling.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/QR>

#include <stdexcept>
#include <utility>
#include <vector>

namespace morphfit {
namespace fitting {

/// Feature image with its precomputed gradient images; built once per fit.
struct FeatureStack
{
    features::FeatureImage f;
    features::FeatureImage grad_x;
    features::FeatureImage grad_y;

    explicit FeatureStack(features::FeatureImage feature) : f(std::move(feature))
    {
        auto [gx, gy] = image_gradients(f.data);
        grad_x = {std::move(gx), f.descriptor_name};
        grad_y = {std::move(gy), f.descriptor_name};
    }
};

namespace detail {

/// Slices the 7-column camera Jacobian to the active unknowns.
inline Eigen::MatrixXd slice_camera_columns(const Eigen::MatrixXd& dc, bool optimize_focal)
{
    if (optimize_focal)
        return dc;
    return dc.rightCols(6);
}

/// Active vertices that project inside the image, with sampled features.
struct ActiveSample
{
    std::vector<int> vertices;
    std::vector<int> rows; // CN-space row indices
    Eigen::VectorXd sampled;
    Eigen::VectorXd xs, ys; // projected positions per active vertex
};

inline ActiveSample sample_active(const FitState& state, const camera::ProjectedShape& proj,
                                  const features::FeatureImage& f, int channels)
{
    ActiveSample out;
    for (int i : state.active.indices())
    {
        if (proj.behind[i])
            continue;
        if (!f.data.contains(proj.points2d[2 * i + 1], proj.points2d[2 * i]))
            continue;
        out.vertices.push_back(i);
    }
    const int k = static_cast<int>(out.vertices.size());
    out.rows.reserve(static_cast<std::size_t>(k) * channels);
    out.sampled.resize(static_cast<Eigen::Index>(k) * channels);
    out.xs.resize(k);
    out.ys.resize(k);
    for (int v = 0; v < k; ++v)
    {
        const int i = out.vertices[v];
        const double x = proj.points2d[2 * i];
        const double y = proj.points2d[2 * i + 1];
        out.xs[v] = x;
        out.ys[v] = y;
        for (int ch = 0; ch < channels; ++ch)
        {
            out.rows.push_back(i * channels + ch);
            out.sampled[static_cast<Eigen::Index>(v) * channels + ch] = f.data.bilinear(y, x, ch);
        }
    }
    return out;
}

/// Gathers rows of a matrix by index.
inline Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m, const std::vector<int>& rows)
{
    Eigen::MatrixXd out(rows.size(), m.cols());
    for (std::size_t r = 0; r < rows.size(); ++r)
        out.row(r) = m.row(rows[r]);
    return out;
}

inline Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& rows)
{
    Eigen::VectorXd out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        out[r] = v[rows[r]];
    return out;
}

} // namespace detail

/**
 * Data-term pieces restricted to the active rows: the image Jacobians
 * J_{F,p}, J_{F,c}, the sampled feature values and the texture model rows.
 * Camera columns follow [q1, q2, q3, tx, ty, tz], preceded by the focal
 * column when it is being optimized.
 */
struct TextureSystem
{
    std::vector<int> vertices; // active vertices that sampled successfully
    std::vector<int> rows;     // their CN-space row indices
    Eigen::MatrixXd j_p;       // |rows| x n_s
    Eigen::MatrixXd j_c;       // |rows| x m_c
    Eigen::VectorXd sampled;   // F(W(p, c)) on the active rows
    Eigen::MatrixXd u_active;  // U_t rows
    Eigen::VectorXd mean_active;
    int m_c = 6;
};

/**
 * Assembles the masked data-term system at the current state. Active vertices
 * that fall outside the image or behind the camera are dropped from the
 * system (and from the residual norms). proj must be the projection of the
 * state's shape instance.
 */
inline TextureSystem assemble_texture_system(const FitState& state,
                                             const model::ShapeModel& shape_model,
                                             const model::TextureModel& texture_model,
                                             const FeatureStack& features, bool optimize_focal,
                                             const camera::ProjectedShape& proj)
{
    const int c = texture_model.channels;
    detail::ActiveSample active = detail::sample_active(state, proj, features.f, c);

    TextureSystem sys;
    sys.m_c = optimize_focal ? 7 : 6;
    sys.vertices = std::move(active.vertices);
    sys.rows = std::move(active.rows);
    sys.sampled = std::move(active.sampled);

    const int k = static_cast<int>(sys.vertices.size());
    const camera::WarpJacobians warp_jac =
        camera::warp_jacobians_subset(state.p, state.cam, shape_model, sys.vertices);
    const Eigen::MatrixXd j_c_full = detail::slice_camera_columns(warp_jac.dc, optimize_focal);

    const int n_s = shape_model.num_components();
    sys.j_p.resize(static_cast<Eigen::Index>(k) * c, n_s);
    sys.j_c.resize(static_cast<Eigen::Index>(k) * c, sys.m_c);
    sys.u_active.resize(static_cast<Eigen::Index>(k) * c, texture_model.num_components());
    sys.mean_active.resize(static_cast<Eigen::Index>(k) * c);

    for (int v = 0; v < k; ++v)
    {
        const double x = active.xs[v];
        const double y = active.ys[v];
        for (int ch = 0; ch < c; ++ch)
        {
            const Eigen::Index row = static_cast<Eigen::Index>(v) * c + ch;
            const int model_row = sys.rows[row];
            const double gx = features.grad_x.data.bilinear(y, x, ch);
            const double gy = features.grad_y.data.bilinear(y, x, ch);
            sys.j_p.row(row) = gx * warp_jac.dp.row(2 * v) + gy * warp_jac.dp.row(2 * v + 1);
            sys.j_c.row(row) = gx * j_c_full.row(2 * v) + gy * j_c_full.row(2 * v + 1);
            sys.u_active.row(row) = texture_model.pca.basis.row(model_row);
            sys.mean_active[row] = texture_model.pca.mean[model_row];
        }
    }
    return sys;
}

/// Convenience overload computing the projection itself.
inline TextureSystem assemble_texture_system(const FitState& state,
                                             const model::ShapeModel& shape_model,
                                             const model::TextureModel& texture_model,
                                             const FeatureStack& features, bool optimize_focal)
{
    const camera::ProjectedShape proj =
        camera::camera_apply(model::shape_instance_vector(shape_model, state.p), state.cam);
    return assemble_texture_system(state, shape_model, texture_model, features, optimize_focal,
                                   proj);
}

/// Landmark-term pieces: Jacobian rows of the projectable landmark vertices.
struct LandmarkSystem
{
    Eigen::MatrixXd j_p;      // 2L' x n_s
    Eigen::MatrixXd j_c;      // 2L' x m_c
    Eigen::VectorXd residual; // W_l(p, c) - s_l
    int used_landmarks = 0;
};

namespace detail {

/// Projects only the landmark vertices; cheap even for large models.
inline camera::ProjectedShape project_landmarks(const FitState& state,
                                                const model::ShapeModel& shape_model)
{
    const auto& ids = shape_model.landmark_vertex_ids;
    Eigen::VectorXd s(3 * ids.size());
    for (std::size_t j = 0; j < ids.size(); ++j)
        s.segment<3>(3 * j) = shape_model.pca.mean.segment<3>(3 * ids[j]) +
                              shape_model.pca.basis.middleRows(3 * ids[j], 3) * state.p;
    return camera::camera_apply(s, state.cam);
}

} // namespace detail

/**
 * Assembles the sparse-landmark system. Behind-camera landmark vertices are
 * dropped; if every landmark is behind the camera this throws.
 */
inline LandmarkSystem assemble_landmark_system(const FitState& state,
                                               const model::ShapeModel& shape_model,
                                               const Eigen::VectorXd& target_landmarks,
                                               bool optimize_focal)
{
    const auto& ids = shape_model.landmark_vertex_ids;
    if (static_cast<Eigen::Index>(2 * ids.size()) != target_landmarks.size())
        throw std::invalid_argument("landmark system: target vector has wrong length");

    const camera::ProjectedShape proj = detail::project_landmarks(state, shape_model);

    std::vector<int> usable; // model vertex ids
    std::vector<int> slot;   // position within the landmark list
    for (std::size_t j = 0; j < ids.size(); ++j)
        if (!proj.behind[j])
        {
            usable.push_back(ids[j]);
            slot.push_back(static_cast<int>(j));
        }
    if (usable.empty())
        throw std::runtime_error("landmark system: every landmark vertex is behind the camera");

    const camera::WarpJacobians warp_jac =
        camera::warp_jacobians_subset(state.p, state.cam, shape_model, usable);

    LandmarkSystem sys;
    sys.used_landmarks = static_cast<int>(usable.size());
    sys.j_p = warp_jac.dp;
    sys.j_c = detail::slice_camera_columns(warp_jac.dc, optimize_focal);
    sys.residual.resize(2 * usable.size());
    for (std::size_t j = 0; j < usable.size(); ++j)
    {
        const int s = slot[j];
        sys.residual[2 * j] = proj.points2d[2 * s] - target_landmarks[2 * s];
        sys.residual[2 * j + 1] = proj.points2d[2 * s + 1] - target_landmarks[2 * s + 1];
    }
    return sys;
}

/// Cost terms of the overall objective at a state.
struct CostBreakdown
{
    double data = 0.0;
    double landmark = 0.0;
    double shape_prior = 0.0;
    double texture_prior = 0.0;
    double total = 0.0;
};

/**
 * Evaluates the overall cost: masked feature reconstruction, weighted
 * landmark reprojection and the two Gaussian priors. No Jacobians are built.
 */
inline CostBreakdown cost_eval(const FitState& state, const FeatureStack& features,
                               const Eigen::VectorXd& target_landmarks,
                               const model::ShapeModel& shape_model,
                               const model::TextureModel& texture_model, const FitConfig& cfg,
                               const camera::ProjectedShape& proj)
{
    const int c = texture_model.channels;
    const detail::ActiveSample active = detail::sample_active(state, proj, features.f, c);
    const double c_l =
        resolve_landmark_weight(cfg, texture_model.pca.dimension(), shape_model.num_landmarks());

    CostBreakdown out;
    const Eigen::MatrixXd u_rows = detail::gather_rows(texture_model.pca.basis, active.rows);
    const Eigen::VectorXd model_tex =
        detail::gather(texture_model.pca.mean, active.rows) + u_rows * state.lambda;
    out.data = (active.sampled - model_tex).squaredNorm();

    const camera::ProjectedShape lm_proj = detail::project_landmarks(state, shape_model);
    bool any_usable = false;
    double lm_sq = 0.0;
    for (int j = 0; j < lm_proj.num_vertices(); ++j)
    {
        if (lm_proj.behind[j])
            continue;
        any_usable = true;
        const double dx = lm_proj.points2d[2 * j] - target_landmarks[2 * j];
        const double dy = lm_proj.points2d[2 * j + 1] - target_landmarks[2 * j + 1];
        lm_sq += dx * dx + dy * dy;
    }
    if (!any_usable)
        throw std::runtime_error("cost_eval: every landmark vertex is behind the camera");
    out.landmark = c_l * lm_sq;

    out.shape_prior =
        cfg.shape_prior * (state.p.array().square() / shape_model.pca.eigenvalues.array()).sum();
    out.texture_prior =
        cfg.texture_prior *
        (state.lambda.array().square() / texture_model.pca.eigenvalues.array()).sum();
    out.total = out.data + out.landmark + out.shape_prior + out.texture_prior;
    return out;
}

/// Convenience overload computing the projection itself.
inline CostBreakdown cost_eval(const FitState& state, const FeatureStack& features,
                               const Eigen::VectorXd& target_landmarks,
                               const model::ShapeModel& shape_model,
                               const model::TextureModel& texture_model, const FitConfig& cfg)
{
    const camera::ProjectedShape proj =
        camera::camera_apply(model::shape_instance_vector(shape_model, state.p), state.cam);
    return cost_eval(state, features, target_landmarks, shape_model, texture_model, cfg, proj);
}

/// Joint system of the Simultaneous algorithm, exposed for verification.
struct SimultaneousSystem
{
    Eigen::MatrixXd j_f;     // stacked [J_{F,p}, J_{F,c}, -U_t] on active rows
    Eigen::MatrixXd j_w;     // stacked [J_{Wl,p}, J_{Wl,c}, 0]
    Eigen::VectorXd e_f;     // F(W(p,c)) - T(lambda)
    Eigen::VectorXd e_l;     // W_l(p,c) - s_l
    Eigen::MatrixXd hessian; // J_f^T J_f + c_l J_w^T J_w + prior blocks
    Eigen::VectorXd gradient;
    int n_s = 0, m_c = 0, n_t = 0;
    double c_l = 0.0;
};

inline SimultaneousSystem
assemble_simultaneous_system(const FitState& state, const FeatureStack& features,
                             const Eigen::VectorXd& target_landmarks,
                             const model::ShapeModel& shape_model,
                             const model::TextureModel& texture_model, const FitConfig& cfg,
                             const camera::ProjectedShape& proj)
{
    const TextureSystem tex = assemble_texture_system(state, shape_model, texture_model, features,
                                                      cfg.optimize_focal, proj);
    const LandmarkSystem lm =
        assemble_landmark_system(state, shape_model, target_landmarks, cfg.optimize_focal);

    SimultaneousSystem sys;
    sys.n_s = shape_model.num_components();
    sys.m_c = tex.m_c;
    sys.n_t = texture_model.num_components();
    sys.c_l =
        resolve_landmark_weight(cfg, texture_model.pca.dimension(), shape_model.num_landmarks());
    const int n_b = sys.n_s + sys.m_c + sys.n_t;

    sys.j_f.resize(tex.sampled.size(), n_b);
    sys.j_f.leftCols(sys.n_s) = tex.j_p;
    sys.j_f.middleCols(sys.n_s, sys.m_c) = tex.j_c;
    sys.j_f.rightCols(sys.n_t) = -tex.u_active;

    sys.j_w = Eigen::MatrixXd::Zero(lm.residual.size(), n_b);
    sys.j_w.leftCols(sys.n_s) = lm.j_p;
    sys.j_w.middleCols(sys.n_s, sys.m_c) = lm.j_c;

    sys.e_f = tex.sampled - (tex.mean_active + tex.u_active * state.lambda);
    sys.e_l = lm.residual;

    Eigen::VectorXd prior_diag = Eigen::VectorXd::Zero(n_b);
    prior_diag.head(sys.n_s) = cfg.shape_prior * shape_model.pca.eigenvalues.cwiseInverse();
    prior_diag.tail(sys.n_t) = cfg.texture_prior * texture_model.pca.eigenvalues.cwiseInverse();

    sys.hessian = sys.j_f.transpose() * sys.j_f;
    sys.hessian.noalias() += sys.c_l * (sys.j_w.transpose() * sys.j_w);
    sys.hessian += prior_diag.asDiagonal();

    sys.gradient = sys.j_f.transpose() * sys.e_f + sys.c_l * (sys.j_w.transpose() * sys.e_l);
    sys.gradient.head(sys.n_s) +=
        cfg.shape_prior * (state.p.array() / shape_model.pca.eigenvalues.array()).matrix();
    sys.gradient.tail(sys.n_t) +=
        cfg.texture_prior *
        (state.lambda.array() / texture_model.pca.eigenvalues.array()).matrix();
    return sys;
}

/// Parameter increments; dc is [q1, q2, q3, tx, ty, tz] or with a leading f.
struct StepResult
{
    Eigen::VectorXd dp;
    Eigen::VectorXd dc;
    Eigen::VectorXd dlambda; // empty for project-out
};

namespace detail {

inline Eigen::VectorXd solve_spd(Eigen::MatrixXd h, const Eigen::VectorXd& g, const char* which)
{
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive())
    {
        const Eigen::VectorXd x = ldlt.solve(g);
        if (x.allFinite())
            return x;
    }
    // Retry once with diagonal jitter before giving up.
    h.diagonal().array() += 1e-10;
    Eigen::LDLT<Eigen::MatrixXd> retry(h);
    Eigen::VectorXd x = retry.solve(g);
    if (retry.info() != Eigen::Success || !x.allFinite())
        throw std::runtime_error(std::string(which) +
                                 ": singular Hessian; increase the prior or landmark weights");
    return x;
}

} // namespace detail

/**
 * Simultaneous Gauss-Newton step: solves the joint normal equations for
 * (dp, dc, dlambda) with the priors on their own blocks.
 */
inline StepResult gn_simultaneous_step(const FitState& state, const FeatureStack& features,
                                       const Eigen::VectorXd& target_landmarks,
                                       const model::ShapeModel& shape_model,
                                       const model::TextureModel& texture_model,
                                       const FitConfig& cfg,
                                       const camera::ProjectedShape& proj,
                                       SimultaneousSystem* system_out = nullptr)
{
    SimultaneousSystem sys = assemble_simultaneous_system(state, features, target_landmarks,
                                                          shape_model, texture_model, cfg, proj);
    const Eigen::VectorXd delta = -detail::solve_spd(sys.hessian, sys.gradient, "simultaneous");

    StepResult step;
    step.dp = delta.head(sys.n_s);
    step.dc = delta.segment(sys.n_s, sys.m_c);
    step.dlambda = delta.tail(sys.n_t);
    if (system_out)
        *system_out = std::move(sys);
    return step;
}

inline StepResult gn_simultaneous_step(const FitState& state, const FeatureStack& features,
                                       const Eigen::VectorXd& target_landmarks,
                                       const model::ShapeModel& shape_model,
                                       const model::TextureModel& texture_model,
                                       const FitConfig& cfg,
                                       SimultaneousSystem* system_out = nullptr)
{
    const camera::ProjectedShape proj =
        camera::camera_apply(model::shape_instance_vector(shape_model, state.p), state.cam);
    return gn_simultaneous_step(state, features, target_landmarks, shape_model, texture_model,
                                cfg, proj, system_out);
}

/// Project-out system pieces, exposed for the dense-projector oracle.
struct ProjectOutSystem
{
    Eigen::MatrixXd j_p; // active rows x n_s
    Eigen::MatrixXd j_c;
    Eigen::MatrixXd u_active;
    Eigen::VectorXd e_f; // F(W(p,c)) - mean texture, on active rows
    Eigen::VectorXd e_l;
    Eigen::MatrixXd h_p;
    Eigen::MatrixXd h_c;
    Eigen::VectorXd g_p;
    Eigen::VectorXd g_c;
    double c_l = 0.0;
};

/**
 * Project-out Gauss-Newton step. The texture subspace is annihilated from the
 * data term through P = I - U_t U_t^T, applied in factored order so no CN x CN
 * matrix is ever formed; dp and dc solve their own block systems. The data
 * residual is taken against the mean texture, with no texture parameters in
 * the loop; recover_texture_params estimates them once fitting has finished.
 */
inline StepResult gn_project_out_step(const FitState& state, const FeatureStack& features,
                                      const Eigen::VectorXd& target_landmarks,
                                      const model::ShapeModel& shape_model,
                                      const model::TextureModel& texture_model,
                                      const FitConfig& cfg, const camera::ProjectedShape& proj,
                                      ProjectOutSystem* system_out = nullptr)
{
    const TextureSystem tex = assemble_texture_system(state, shape_model, texture_model, features,
                                                      cfg.optimize_focal, proj);
    const LandmarkSystem lm =
        assemble_landmark_system(state, shape_model, target_landmarks, cfg.optimize_focal);
    const double c_l =
        resolve_landmark_weight(cfg, texture_model.pca.dimension(), shape_model.num_landmarks());

    const Eigen::VectorXd e_f = tex.sampled - tex.mean_active;

    // Factored projector application: (J^T U) U^T costs O(CN n_t (n_s + n_c)).
    const Eigen::MatrixXd jp_u = tex.j_p.transpose() * tex.u_active; // n_s x n_t
    const Eigen::MatrixXd jc_u = tex.j_c.transpose() * tex.u_active; // m_c x n_t
    const Eigen::VectorXd u_e = tex.u_active.transpose() * e_f;      // n_t

    Eigen::MatrixXd h_p = tex.j_p.transpose() * tex.j_p;
    h_p.noalias() -= jp_u * jp_u.transpose();
    h_p.noalias() += c_l * (lm.j_p.transpose() * lm.j_p);
    h_p += (cfg.shape_prior * shape_model.pca.eigenvalues.cwiseInverse()).asDiagonal();

    Eigen::MatrixXd h_c = tex.j_c.transpose() * tex.j_c;
    h_c.noalias() -= jc_u * jc_u.transpose();
    h_c.noalias() += c_l * (lm.j_c.transpose() * lm.j_c);

    Eigen::VectorXd g_p = tex.j_p.transpose() * e_f - jp_u * u_e;
    g_p.noalias() += c_l * (lm.j_p.transpose() * lm.residual);
    g_p += cfg.shape_prior * (state.p.array() / shape_model.pca.eigenvalues.array()).matrix();

    Eigen::VectorXd g_c = tex.j_c.transpose() * e_f - jc_u * u_e;
    g_c.noalias() += c_l * (lm.j_c.transpose() * lm.residual);

    StepResult step;
    step.dp = -detail::solve_spd(h_p, g_p, "project-out");
    step.dc = -detail::solve_spd(h_c, g_c, "project-out");

    if (system_out)
    {
        system_out->j_p = tex.j_p;
        system_out->j_c = tex.j_c;
        system_out->u_active = tex.u_active;
        system_out->e_f = e_f;
        system_out->e_l = lm.residual;
        system_out->h_p = std::move(h_p);
        system_out->h_c = std::move(h_c);
        system_out->g_p = std::move(g_p);
        system_out->g_c = std::move(g_c);
        system_out->c_l = c_l;
    }
    return step;
}

inline StepResult gn_project_out_step(const FitState& state, const FeatureStack& features,
                                      const Eigen::VectorXd& target_landmarks,
                                      const model::ShapeModel& shape_model,
                                      const model::TextureModel& texture_model,
                                      const FitConfig& cfg,
                                      ProjectOutSystem* system_out = nullptr)
{
    const camera::ProjectedShape proj =
        camera::camera_apply(model::shape_instance_vector(shape_model, state.p), state.cam);
    return gn_project_out_step(state, features, target_landmarks, shape_model, texture_model, cfg,
                               proj, system_out);
}

/**
 * Texture coefficients of the current residual: least-squares projection of
 * F(W(p,c)) - mean onto the texture basis restricted to the active rows. The
 * restricted basis is re-orthonormalized through a QR factorization, which at
 * full visibility reduces to U_t^T (F(W(p,c)) - mean).
 */
inline Eigen::VectorXd recover_texture_params(const FitState& state, const FeatureStack& features,
                                              const model::ShapeModel& shape_model,
                                              const model::TextureModel& texture_model,
                                              bool optimize_focal = false)
{
    const camera::ProjectedShape proj =
        camera::camera_apply(model::shape_instance_vector(shape_model, state.p), state.cam);
    const detail::ActiveSample active =
        detail::sample_active(state, proj, features.f, texture_model.channels);
    if (active.sampled.size() == 0)
        return Eigen::VectorXd::Zero(texture_model.num_components());

    const Eigen::MatrixXd u_active = detail::gather_rows(texture_model.pca.basis, active.rows);
    const Eigen::VectorXd e =
        active.sampled - detail::gather(texture_model.pca.mean, active.rows);
    return u_active.householderQr().solve(e);
}

} // namespace fitting
} // namespace morphfit

#endif /* MORPHFIT_FITTING_GAUSS_NEWTON_HPP */

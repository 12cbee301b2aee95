/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/fitting/fit.hpp
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

#ifndef MORPHFIT_FITTING_FIT_HPP
#define MORPHFIT_FITTING_FIT_HPP

#include "morphfit/camera/camera.hpp"
#include "morphfit/features/features.hpp"
#include "morphfit/fitting/config.hpp"
#include "morphfit/fitting/gauss_newton.hpp"
#include "morphfit/fitting/landmark_fit.hpp"
#include "morphfit/model/shape_model.hpp"
#include "morphfit/model/texture_model.hpp"
#include "morphfit/render/sampling.hpp"
#include "morphfit/render/zbuffer.hpp"

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

namespace morphfit {
namespace fitting {

namespace detail {

/// Camera rescaled so the image plane maps onto a raster of different size.
inline camera::CameraParams scale_camera(const camera::CameraParams& cam, double sx, double sy)
{
    camera::CameraParams out = cam;
    out.f *= 0.5 * (sx + sy);
    out.principal_point.x() *= sx;
    out.principal_point.y() *= sy;
    return out;
}

inline FitState apply_step(const FitState& state, const StepResult& step, double scale,
                           bool optimize_focal)
{
    FitState out = state;
    out.p += scale * step.dp;
    if (step.dlambda.size() > 0)
        out.lambda += scale * step.dlambda;
    Eigen::VectorXd dc = scale * step.dc;
    int offset = 0;
    if (optimize_focal)
    {
        out.cam.f += dc[0];
        offset = 1;
    }
    out.cam.q = camera::quaternion_update(state.cam.q, dc.segment<3>(offset));
    out.cam.t += dc.segment<3>(offset + 3);
    return out;
}

} // namespace detail

/**
 * Fits the morphable model to an image by Gauss-Newton iteration.
 *
 * Initialization comes from the landmark-only fit unless an explicit
 * (p, camera) initializer is supplied. Each iteration recomputes z-buffer
 * visibility, restricts the texture residual to the K-vertex random mask,
 * takes the configured step (additive parameters, multiplicative quaternion,
 * frozen focal length by default) and backtracks by step halving whenever the
 * cost would increase. Stops at max_iters or when the scaled increment norm
 * drops below the step tolerance.
 */
inline FitResult fit(const Image& image, const Eigen::VectorXd& target_landmarks,
                     const model::ShapeModel& shape_model,
                     const model::TextureModel& texture_model,
                     const features::FeatureExtractor& extractor, const FitConfig& cfg,
                     std::optional<std::pair<Eigen::VectorXd, camera::CameraParams>> init =
                         std::nullopt)
{
    cfg.validate();
    FeatureStack features(extractor(image));
    if (features.f.channels() != texture_model.channels)
        throw std::invalid_argument("fit: extractor channels do not match the texture model");
    if (shape_model.num_vertices() != texture_model.num_vertices())
        throw std::invalid_argument("fit: shape and texture models have different vertex counts");

    FitState state;
    if (init)
    {
        state.p = init->first;
        state.cam = init->second;
    } else
    {
        auto [p0, cam0] = fit_landmarks_only(target_landmarks, shape_model,
                                             {image.height(), image.width()}, cfg);
        state.p = std::move(p0);
        state.cam = cam0;
    }
    state.lambda = Eigen::VectorXd::Zero(texture_model.num_components());

    const int raster_h =
        cfg.visibility_raster.first > 0 ? cfg.visibility_raster.first : image.height();
    const int raster_w =
        cfg.visibility_raster.second > 0 ? cfg.visibility_raster.second : image.width();
    const double scale_x = static_cast<double>(raster_w) / image.width();
    const double scale_y = static_cast<double>(raster_h) / image.height();

    auto compute_visibility = [&](const FitState& s) {
        const TriMesh mesh = model::shape_instance(shape_model, s.p);
        return render::visible_vertices_zbuffer(
            mesh, detail::scale_camera(s.cam, scale_x, scale_y), {raster_h, raster_w});
    };

    render::ObservationMask visible = compute_visibility(state);
    render::ObservationMask kmask =
        render::residual_mask_select(visible, cfg.residual_mask_size, cfg.seed);

    FitResult result;
    bool converged = false;

    for (int iter = 1; iter <= cfg.max_iters; ++iter)
    {
        if (iter > 1)
            visible = compute_visibility(state);
        if (cfg.resample_mask_per_iteration)
            kmask = render::residual_mask_select(visible, cfg.residual_mask_size,
                                                 cfg.seed + static_cast<std::uint64_t>(iter));
        state.active = render::mask_and(visible, kmask);
        if (state.active.count() == 0)
            throw std::runtime_error("fit: no active vertices (mesh left the image?)");

        const camera::ProjectedShape proj =
            camera::camera_apply(model::shape_instance_vector(shape_model, state.p), state.cam);
        const CostBreakdown cost_before = cost_eval(state, features, target_landmarks,
                                                    shape_model, texture_model, cfg, proj);
        if (!std::isfinite(cost_before.total))
            throw std::runtime_error("fit: cost is not finite; aborting");

        StepResult step;
        if (cfg.algorithm == Algorithm::simultaneous)
            step = gn_simultaneous_step(state, features, target_landmarks, shape_model,
                                        texture_model, cfg, proj);
        else
            step = gn_project_out_step(state, features, target_landmarks, shape_model,
                                       texture_model, cfg, proj);

        IterationLogEntry entry;
        entry.iteration = iter;
        entry.cost_before = cost_before.total;
        entry.active_count = state.active.count();

        double scale = 1.0;
        FitState candidate;
        CostBreakdown cost_after;
        bool accepted = false;
        for (int halving = 0; halving <= cfg.max_step_halvings; ++halving)
        {
            candidate = detail::apply_step(state, step, scale, cfg.optimize_focal);
            if (candidate.cam.f > 0.0)
            {
                cost_after = cost_eval(candidate, features, target_landmarks, shape_model,
                                       texture_model, cfg);
                if (std::isfinite(cost_after.total) &&
                    cost_after.total <= cost_before.total * (1.0 + 1e-12) + 1e-15)
                {
                    accepted = true;
                    entry.halvings = halving;
                    break;
                }
            }
            scale *= 0.5;
        }

        entry.accepted = accepted;
        if (accepted)
        {
            entry.cost_after = cost_after.total;
            entry.data = cost_after.data;
            entry.landmark = cost_after.landmark;
            entry.shape_prior = cost_after.shape_prior;
            entry.texture_prior = cost_after.texture_prior;
            entry.step_p_norm = scale * step.dp.norm();
            entry.step_c_norm = scale * step.dc.norm();
            state = std::move(candidate);
        } else
        {
            entry.cost_after = cost_before.total;
            entry.data = cost_before.data;
            entry.landmark = cost_before.landmark;
            entry.shape_prior = cost_before.shape_prior;
            entry.texture_prior = cost_before.texture_prior;
        }
        result.log.push_back(entry);

        if (!accepted)
            break; // no acceptable step left; keep the current state
        if (entry.step_p_norm + entry.step_c_norm < cfg.step_tol)
        {
            converged = true;
            break;
        }
    }

    if (cfg.algorithm == Algorithm::project_out)
        state.lambda =
            recover_texture_params(state, features, shape_model, texture_model, cfg.optimize_focal);

    result.state = state;
    result.converged = converged;
    result.mesh = model::shape_instance(shape_model, state.p);
    return result;
}

} // namespace fitting
} // namespace morphfit

#endif /* MORPHFIT_FITTING_FIT_HPP */

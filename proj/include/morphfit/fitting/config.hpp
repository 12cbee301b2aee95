/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/fitting/config.hpp
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

#ifndef MORPHFIT_FITTING_CONFIG_HPP
#define MORPHFIT_FITTING_CONFIG_HPP

#include "morphfit/camera/camera.hpp"
#include "morphfit/core/mesh.hpp"
#include "morphfit/render/mask.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace morphfit {
namespace fitting {

enum class Algorithm
{
    simultaneous,
    project_out
};

inline Algorithm algorithm_from_string(const std::string& name)
{
    if (name == "simultaneous")
        return Algorithm::simultaneous;
    if (name == "project-out")
        return Algorithm::project_out;
    throw std::invalid_argument("unknown algorithm '" + name +
                                "'; available: project-out, simultaneous");
}

inline std::string to_string(Algorithm a)
{
    return a == Algorithm::simultaneous ? "simultaneous" : "project-out";
}

struct FitConfig
{
    double landmark_weight = -1.0;  // c_l; negative selects 1e-5 * CN / L
    double shape_prior = 1e-2;      // c_s
    double texture_prior = 1e-2;    // c_t
    int residual_mask_size = 5000;  // K
    int max_iters = 50;
    double step_tol = 1e-6;
    Algorithm algorithm = Algorithm::project_out;
    bool optimize_focal = false;
    std::uint64_t seed = 0;
    bool resample_mask_per_iteration = false;
    int max_step_halvings = 8;
    double focal_length = -1.0;                  // initializer; negative selects max(H, W)
    std::pair<int, int> visibility_raster = {0, 0}; // {0,0}: use the image size

    void validate() const
    {
        if (shape_prior < 0.0 || texture_prior < 0.0)
            throw std::invalid_argument("FitConfig: weights must be non-negative");
        if (residual_mask_size < 1)
            throw std::invalid_argument("FitConfig: residual mask size must be >= 1");
        if (max_iters < 1)
            throw std::invalid_argument("FitConfig: max_iters must be >= 1");
    }
};

/// Resolves the default landmark weight 1e-5 * (CN / L).
inline double resolve_landmark_weight(const FitConfig& cfg, int texture_dimension,
                                      int num_landmarks)
{
    if (cfg.landmark_weight >= 0.0)
        return cfg.landmark_weight;
    return 1e-5 * static_cast<double>(texture_dimension) / std::max(1, num_landmarks);
}

/// Current optimization state: parameters plus the active vertex mask.
struct FitState
{
    Eigen::VectorXd p;
    camera::CameraParams cam;
    Eigen::VectorXd lambda;
    render::ObservationMask active;
};

/// One accepted (or rejected) Gauss-Newton iteration.
struct IterationLogEntry
{
    int iteration = 0;
    double cost_before = 0.0; // on this iteration's active set, pre-step
    double cost_after = 0.0;  // on the same active set, post-step
    double data = 0.0;
    double landmark = 0.0;
    double shape_prior = 0.0;
    double texture_prior = 0.0;
    double step_p_norm = 0.0;
    double step_c_norm = 0.0;
    int halvings = 0;
    bool accepted = false;
    int active_count = 0;
};

struct FitResult
{
    FitState state;
    bool converged = false;
    TriMesh mesh; // shape_instance(p)
    std::vector<IterationLogEntry> log;
};

} // namespace fitting
} // namespace morphfit

#endif /* MORPHFIT_FITTING_CONFIG_HPP */

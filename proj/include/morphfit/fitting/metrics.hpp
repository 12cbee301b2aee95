/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/fitting/metrics.hpp
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

#ifndef MORPHFIT_FITTING_METRICS_HPP
#define MORPHFIT_FITTING_METRICS_HPP

#include "morphfit/core/mesh.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace morphfit {
namespace fitting {

/**
 * Per-vertex Euclidean distance between corresponded meshes, normalized by
 * the inter-ocular distance.
 */
inline Eigen::VectorXd normalized_dense_error(const TriMesh& fitted, const TriMesh& truth,
                                              double interocular)
{
    if (fitted.num_vertices() != truth.num_vertices())
        throw std::invalid_argument("normalized_dense_error: vertex counts differ");
    if (!(interocular > 0.0))
        throw std::invalid_argument("normalized_dense_error: inter-ocular distance must be positive");
    return (fitted.vertices - truth.vertices).rowwise().norm() / interocular;
}

struct CedSummary
{
    double auc = 0.0;
    double failure_rate = 0.0;
};

/**
 * Cumulative error distribution samples on a uniform grid over [0, threshold]:
 * ced[k] = fraction of errors <= k * threshold / (points - 1).
 */
inline std::vector<double> ced_samples(std::vector<double> errors, double threshold,
                                       int points = 1001)
{
    if (errors.empty())
        throw std::invalid_argument("ced_samples: empty error list");
    if (!(threshold > 0.0))
        throw std::invalid_argument("ced_samples: threshold must be positive");
    std::sort(errors.begin(), errors.end());
    std::vector<double> ced(points);
    const double n = static_cast<double>(errors.size());
    for (int k = 0; k < points; ++k)
    {
        const double x = threshold * k / (points - 1);
        const auto it = std::upper_bound(errors.begin(), errors.end(), x);
        ced[k] = static_cast<double>(it - errors.begin()) / n;
    }
    return ced;
}

/**
 * Area under the CED up to the threshold (trapezoidal, normalized to [0, 1])
 * and the fraction of errors exceeding the threshold.
 */
inline CedSummary ced_auc(const std::vector<double>& errors, double threshold)
{
    const std::vector<double> ced = ced_samples(errors, threshold);
    CedSummary out;
    // The uniform grid spacing cancels: trapezoid = mean of interval averages.
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < ced.size(); ++k)
        acc += 0.5 * (ced[k] + ced[k + 1]);
    out.auc = acc / static_cast<double>(ced.size() - 1);

    int failures = 0;
    for (double e : errors)
        if (e > threshold)
            ++failures;
    out.failure_rate = static_cast<double>(failures) / static_cast<double>(errors.size());
    return out;
}

} // namespace fitting
} // namespace morphfit

#endif /* MORPHFIT_FITTING_METRICS_HPP */

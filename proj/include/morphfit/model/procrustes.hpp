/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/model/procrustes.hpp
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

#ifndef MORPHFIT_MODEL_PROCRUSTES_HPP
#define MORPHFIT_MODEL_PROCRUSTES_HPP

#include "morphfit/core/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SVD>

#include <stdexcept>
#include <vector>

namespace morphfit {
namespace model {

/// Rotation mapping the rows of src onto dst (both centered), reflection-safe.
inline Eigen::Matrix3d kabsch_rotation(const Eigen::MatrixXd& src, const Eigen::MatrixXd& dst)
{
    const Eigen::Matrix3d h = src.transpose() * dst;
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d r = svd.matrixV() * svd.matrixU().transpose();
    if (r.determinant() < 0.0)
    {
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(2, 2) = -1.0;
        r = svd.matrixV() * flip * svd.matrixU().transpose();
    }
    return r;
}

/**
 * Generalized Procrustes alignment: removes translation, scale and rotation
 * from a set of corresponded meshes.
 *
 * Each mesh is centered and normalized to unit centroid size, then rotations
 * are alternated against the running mean until the mean stabilizes (change
 * < 1e-10) or 100 iterations. If residuals is non-null it receives the value
 * of sum_i |X_i - mean|^2 after every iteration.
 */
inline std::vector<TriMesh> procrustes_align(const std::vector<TriMesh>& meshes,
                                             std::vector<double>* residuals = nullptr)
{
    if (meshes.size() < 2)
        throw std::invalid_argument("procrustes_align: need at least 2 meshes");
    const int n = meshes.front().num_vertices();
    for (const auto& m : meshes)
    {
        if (m.num_vertices() != n || m.trilist != meshes.front().trilist)
            throw std::invalid_argument("procrustes_align: meshes must share vertex count and trilist");
    }

    std::vector<Eigen::MatrixXd> aligned;
    aligned.reserve(meshes.size());
    for (const auto& m : meshes)
    {
        Eigen::MatrixXd v = m.vertices;
        v.rowwise() -= v.colwise().mean();
        const double norm = v.norm();
        if (norm <= 0.0)
            throw std::invalid_argument("procrustes_align: degenerate (zero-size) mesh");
        aligned.push_back(v / norm);
    }

    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, 3);
    for (const auto& v : aligned)
        mean += v;
    mean /= double(aligned.size());

    for (int iter = 0; iter < 100; ++iter)
    {
        for (auto& v : aligned)
            v = v * kabsch_rotation(v, mean).transpose();

        Eigen::MatrixXd new_mean = Eigen::MatrixXd::Zero(n, 3);
        for (const auto& v : aligned)
            new_mean += v;
        new_mean /= double(aligned.size());

        if (residuals)
        {
            double r = 0.0;
            for (const auto& v : aligned)
                r += (v - new_mean).squaredNorm();
            residuals->push_back(r);
        }

        const double change = (new_mean - mean).norm();
        mean = new_mean;
        if (change < 1e-10)
            break;
    }

    std::vector<TriMesh> out;
    out.reserve(aligned.size());
    for (const auto& v : aligned)
        out.push_back(TriMesh{v, meshes.front().trilist});
    return out;
}

} // namespace model
} // namespace morphfit

#endif /* MORPHFIT_MODEL_PROCRUSTES_HPP */

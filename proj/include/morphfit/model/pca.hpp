/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/model/pca.hpp
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

#ifndef MORPHFIT_MODEL_PCA_HPP
#define MORPHFIT_MODEL_PCA_HPP

#include <Eigen/Core>
#include <Eigen/SVD>

#include <stdexcept>
#include <string>

namespace morphfit {
namespace model {

/**
 * Linear statistical model: mean vector, orthonormal basis columns and the
 * per-component variances (PCA eigenvalues), sorted non-increasing.
 */
struct PcaModel
{
    Eigen::VectorXd mean;        // D
    Eigen::MatrixXd basis;       // D x n, orthonormal columns
    Eigen::VectorXd eigenvalues; // n, strictly positive, non-increasing

    int dimension() const { return static_cast<int>(mean.size()); }
    int num_components() const { return static_cast<int>(basis.cols()); }

    /// mean + basis * coeffs; the generator shared by shape and texture models.
    Eigen::VectorXd instance(const Eigen::VectorXd& coeffs) const
    {
        if (coeffs.size() != basis.cols())
            throw std::invalid_argument("PcaModel::instance: expected " +
                                        std::to_string(basis.cols()) + " coefficients, got " +
                                        std::to_string(coeffs.size()));
        return mean + basis * coeffs;
    }

    /// Checks orthonormality and eigenvalue ordering; throws on violation.
    void validate(double tol = 1e-10) const
    {
        const Eigen::MatrixXd gram = basis.transpose() * basis;
        const double err = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
                               .cwiseAbs()
                               .maxCoeff();
        if (err > tol)
            throw std::invalid_argument("PcaModel: basis columns not orthonormal (err " +
                                        std::to_string(err) + ")");
        for (int i = 0; i < eigenvalues.size(); ++i)
        {
            if (!(eigenvalues[i] > 0.0))
                throw std::invalid_argument("PcaModel: eigenvalues must be strictly positive");
            if (i > 0 && eigenvalues[i] > eigenvalues[i - 1] * (1.0 + tol) + tol)
                throw std::invalid_argument("PcaModel: eigenvalues must be non-increasing");
        }
    }
};

/**
 * PCA of the columns of a D x M sample matrix via thin SVD of the centered
 * data. Returned eigenvalues are sample variances (sigma^2 / (M-1)).
 *
 * Requires M >= 2 and n_keep <= min(D, M-1).
 */
inline PcaModel pca_from_samples(const Eigen::MatrixXd& samples, int n_keep)
{
    const auto d = samples.rows();
    const auto m = samples.cols();
    if (m < 2)
        throw std::invalid_argument("pca_from_samples: need at least 2 samples");
    if (n_keep < 1 || n_keep > std::min<Eigen::Index>(d, m - 1))
        throw std::invalid_argument("pca_from_samples: n_keep must be in [1, min(D, M-1)]");

    PcaModel out;
    out.mean = samples.rowwise().mean();
    Eigen::MatrixXd centered = samples.colwise() - out.mean;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU);
    out.basis = svd.matrixU().leftCols(n_keep);
    out.eigenvalues = svd.singularValues().head(n_keep).array().square() / double(m - 1);
    return out;
}

} // namespace model
} // namespace morphfit

#endif /* MORPHFIT_MODEL_PCA_HPP */

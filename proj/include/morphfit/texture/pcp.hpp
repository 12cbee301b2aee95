/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/texture/pcp.hpp
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

#ifndef MORPHFIT_TEXTURE_PCP_HPP
#define MORPHFIT_TEXTURE_PCP_HPP

#include <Eigen/Core>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace morphfit {
namespace texture {

/// Elementwise soft threshold sign(a) * max(|a| - tau, 0).
inline Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& a, double tau)
{
    if (tau < 0.0)
        throw std::invalid_argument("soft_threshold: tau must be non-negative");
    return a.array().sign() * (a.array().abs() - tau).max(0.0);
}

/// Singular value thresholding: U * shrink(S, tau) * V^T.
inline Eigen::MatrixXd svt(const Eigen::MatrixXd& a, double tau)
{
    if (tau < 0.0)
        throw std::invalid_argument("svt: tau must be non-negative");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd s = (svd.singularValues().array() - tau).max(0.0);
    int rank = 0;
    while (rank < s.size() && s[rank] > 0.0)
        ++rank;
    if (rank == 0)
        return Eigen::MatrixXd::Zero(a.rows(), a.cols());
    return svd.matrixU().leftCols(rank) * s.head(rank).asDiagonal() *
           svd.matrixV().leftCols(rank).transpose();
}

/// The standard robust-PCA regularizer 1/sqrt(max(rows, cols)).
inline double pcp_lambda_default(Eigen::Index rows, Eigen::Index cols)
{
    return 1.0 / std::sqrt(static_cast<double>(std::max(rows, cols)));
}

/// Low-rank + sparse split of an (incompletely observed) matrix.
struct PcpResult
{
    Eigen::MatrixXd low_rank;       // L, completed on unobserved entries
    Eigen::MatrixXd sparse;         // E, supported on the observed set
    int iterations = 0;
    double primal_residual = 0.0;   // |P_Omega(X - L - E)|_F / |P_Omega(X)|_F
    bool converged = false;
    // Objective |L|_* + lambda |E|_1 per iteration, evaluated at the feasible
    // pair (L, P_Omega(X - L)); ADMM iterates themselves are infeasible during
    // the transient, so this is the meaningful descent monitor.
    std::vector<double> objective_log;
};

struct PcpOptions
{
    double lambda = -1.0; // <= 0 selects pcp_lambda_default
    double tol = 1e-7;
    int max_iter = 500;
    bool log_objective = false; // fills PcpResult::objective_log (extra SVD per iteration)
};

/**
 * Principal Component Pursuit with missing values:
 *
 *   min |L|_* + lambda |E|_1   s.t.  P_Omega(X) = P_Omega(L + E)
 *
 * solved by ADMM: singular value thresholding for L, soft thresholding for E
 * on the observed set. Off the observed set E absorbs the constraint exactly,
 * which leaves L free to complete the missing entries; the returned E is
 * zeroed there. Stops when the relative primal residual drops below tol; a
 * result that exhausts max_iter is returned with converged == false.
 *
 * X must be zero outside the observed set.
 */
inline PcpResult pcp_missing_values(const Eigen::MatrixXd& x,
                                    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& omega,
                                    const PcpOptions& opts = {})
{
    if (x.rows() != omega.rows() || x.cols() != omega.cols())
        throw std::invalid_argument("pcp_missing_values: X and Omega shapes differ");
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            if (!omega(i, j) && x(i, j) != 0.0)
                throw std::invalid_argument("pcp_missing_values: X must be zero outside Omega");

    const double lambda = opts.lambda > 0.0 ? opts.lambda : pcp_lambda_default(x.rows(), x.cols());
    const double norm_x = x.norm();

    PcpResult out;
    if (norm_x == 0.0)
    {
        out.low_rank = Eigen::MatrixXd::Zero(x.rows(), x.cols());
        out.sparse = Eigen::MatrixXd::Zero(x.rows(), x.cols());
        out.converged = true;
        return out;
    }

    const double spectral =
        Eigen::BDCSVD<Eigen::MatrixXd>(x).singularValues()[0];
    double rho = 1.25 / spectral;

    const Eigen::ArrayXXd observed = omega.cast<double>().array();
    Eigen::MatrixXd low_rank = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    Eigen::MatrixXd sparse = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    Eigen::MatrixXd dual = Eigen::MatrixXd::Zero(x.rows(), x.cols());

    for (int iter = 1; iter <= opts.max_iter; ++iter)
    {
        const Eigen::MatrixXd sparse_prev = sparse;
        low_rank = svt(x - sparse + dual / rho, 1.0 / rho);

        const Eigen::MatrixXd g = x - low_rank + dual / rho;
        const Eigen::MatrixXd shrunk = soft_threshold(g, lambda / rho);
        // Observed entries are soft-thresholded; elsewhere E absorbs the
        // constraint so that only P_Omega binds.
        sparse = observed * shrunk.array() + (1.0 - observed) * g.array();

        const Eigen::MatrixXd residual = x - low_rank - sparse;
        dual += rho * residual;

        const double primal = (observed * residual.array()).matrix().norm() / norm_x;
        const double dual_res = rho * (sparse - sparse_prev).norm() / norm_x;

        if (opts.log_objective)
        {
            const double nuclear =
                Eigen::BDCSVD<Eigen::MatrixXd>(low_rank).singularValues().sum();
            const double l1 = (observed * (x - low_rank).array()).abs().sum();
            out.objective_log.push_back(nuclear + lambda * l1);
        }

        out.iterations = iter;
        out.primal_residual = primal;
        if (primal < opts.tol)
        {
            out.converged = true;
            break;
        }
        // Residual balancing every 10 iterations; per-iteration doubling can
        // spiral the penalty and freeze the iteration.
        if (iter % 10 == 0)
        {
            if (primal > 10.0 * dual_res)
                rho *= 2.0;
            else if (dual_res > 10.0 * primal)
                rho /= 2.0;
        }
    }

    out.low_rank = std::move(low_rank);
    out.sparse = (observed * sparse.array()).matrix();
    return out;
}

} // namespace texture
} // namespace morphfit

#endif /* MORPHFIT_TEXTURE_PCP_HPP */

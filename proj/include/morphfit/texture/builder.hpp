/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/texture/builder.hpp
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

#ifndef MORPHFIT_TEXTURE_BUILDER_HPP
#define MORPHFIT_TEXTURE_BUILDER_HPP

#include "morphfit/camera/camera.hpp"
#include "morphfit/core/image.hpp"
#include "morphfit/features/features.hpp"
#include "morphfit/fitting/fit.hpp"
#include "morphfit/fitting/landmark_fit.hpp"
#include "morphfit/model/pca.hpp"
#include "morphfit/model/shape_model.hpp"
#include "morphfit/model/texture_model.hpp"
#include "morphfit/render/raycast.hpp"
#include "morphfit/render/sampling.hpp"
#include "morphfit/texture/pcp.hpp"

#include <Eigen/Core>

#include <iostream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace morphfit {
namespace texture {

/// Per-image shape and camera parameters.
struct ImageFit
{
    Eigen::VectorXd p;
    camera::CameraParams cam;
};

/**
 * Stacked masked texture samples: X holds one CN column per usable image,
 * zero outside the observed set Omega (per-vertex masks replicated across
 * channels).
 */
struct MaskedTextureMatrix
{
    Eigen::MatrixXd x;                                   // CN x M
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> omega; // CN x M
    std::vector<int> kept;                               // input indices of usable columns
    int channels = 1;
};

/**
 * Samples every image at its fitted projection under the ray-cast
 * self-occlusion mask. Images whose projection misses the frame entirely are
 * excluded with a warning on stderr.
 */
inline MaskedTextureMatrix assemble_texture_matrix(const std::vector<Image>& images,
                                                   const std::vector<ImageFit>& fits,
                                                   const model::ShapeModel& shape_model,
                                                   const features::FeatureExtractor& extractor)
{
    if (images.size() != fits.size())
        throw std::invalid_argument("assemble_texture_matrix: images and fits must correspond 1:1");
    if (images.empty())
        throw std::invalid_argument("assemble_texture_matrix: empty image set");

    std::vector<Eigen::VectorXd> columns;
    std::vector<std::vector<bool>> masks;
    int channels = 0;
    MaskedTextureMatrix out;

    for (std::size_t i = 0; i < images.size(); ++i)
    {
        const features::FeatureImage f = extractor(images[i]);
        channels = f.channels();
        const TriMesh mesh = model::shape_instance(shape_model, fits[i].p);
        const render::ObservationMask occlusion = render::occlusion_mask_raycast(mesh, fits[i].cam);
        const camera::ProjectedShape proj = camera::camera_apply(mesh_to_vector(mesh), fits[i].cam);
        render::SampledTexture sample = render::sample_features(f, proj, occlusion);
        if (sample.mask.count() == 0)
        {
            std::cerr << "assemble_texture_matrix: image " << i
                      << " projects fully off-frame; column excluded\n";
            continue;
        }
        columns.push_back(std::move(sample.values));
        masks.push_back(std::move(sample.mask.visible));
        out.kept.push_back(static_cast<int>(i));
    }
    if (columns.empty())
        throw std::runtime_error("assemble_texture_matrix: no usable images");

    const Eigen::Index d = columns.front().size();
    out.channels = channels;
    out.x.resize(d, static_cast<Eigen::Index>(columns.size()));
    out.omega.resize(d, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t m = 0; m < columns.size(); ++m)
    {
        out.x.col(m) = columns[m];
        for (Eigen::Index i = 0; i < d; ++i)
            out.omega(i, m) = masks[m][static_cast<int>(i / channels)];
    }
    return out;
}

/**
 * Texture model from masked samples: the low-rank matrix recovered by
 * Principal Component Pursuit replaces the raw columns, then PCA keeps
 * n_texture components.
 */
inline model::TextureModel build_texture_model(const MaskedTextureMatrix& data, int n_texture,
                                               const PcpOptions& pcp = {})
{
    const Eigen::Index m = data.x.cols();
    if (m < 2)
        throw std::invalid_argument("build_texture_model: need at least 2 texture samples");
    const PcpResult recovered = pcp_missing_values(data.x, data.omega, pcp);
    if (!recovered.converged)
        std::cerr << "build_texture_model: PCP stopped at max iterations (residual "
                  << recovered.primal_residual << ")\n";

    const int keep = std::min<int>(n_texture, static_cast<int>(m) - 1);
    model::TextureModel model;
    model.pca = model::pca_from_samples(recovered.low_rank, keep);
    model.channels = data.channels;
    return model;
}

struct RefinementOptions
{
    int n_texture = 50;
    PcpOptions pcp;
    fitting::FitConfig fit;
    std::vector<double> round_residuals; // filled per round: relative masked
                                         // reconstruction error of the assembled matrix
};

namespace detail {

/// Relative reconstruction error of observed entries through the model.
inline double masked_reconstruction_residual(const MaskedTextureMatrix& data,
                                             const model::TextureModel& model)
{
    double num = 0.0, den = 0.0;
    for (Eigen::Index col = 0; col < data.x.cols(); ++col)
    {
        std::vector<int> rows;
        for (Eigen::Index i = 0; i < data.x.rows(); ++i)
            if (data.omega(i, col))
                rows.push_back(static_cast<int>(i));
        if (rows.empty())
            continue;
        Eigen::MatrixXd u(rows.size(), model.pca.num_components());
        Eigen::VectorXd e(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
        {
            u.row(r) = model.pca.basis.row(rows[r]);
            e[r] = data.x(rows[r], col) - model.pca.mean[rows[r]];
        }
        const Eigen::VectorXd coeffs = u.householderQr().solve(e);
        num += (e - u * coeffs).squaredNorm();
        den += e.squaredNorm();
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

} // namespace detail

/**
 * Iterative texture-model refinement. Round one fits every image from its
 * landmarks alone, builds a texture model from those fits; each further round
 * refits all images with the full cost under the current model and rebuilds.
 * Images that fail to fit are dropped from that round with a warning.
 */
inline model::TextureModel iterative_refinement(const std::vector<Image>& images,
                                                const std::vector<Eigen::VectorXd>& landmarks,
                                                const model::ShapeModel& shape_model,
                                                const features::FeatureExtractor& extractor,
                                                int rounds, RefinementOptions& opts)
{
    if (rounds < 1)
        throw std::invalid_argument("iterative_refinement: rounds must be >= 1");
    if (images.empty())
        throw std::invalid_argument("iterative_refinement: empty image set");
    if (images.size() != landmarks.size())
        throw std::invalid_argument("iterative_refinement: images and landmarks must correspond");

    opts.round_residuals.clear();

    std::vector<ImageFit> fits(images.size());
    std::vector<bool> usable(images.size(), true);
    for (std::size_t i = 0; i < images.size(); ++i)
    {
        try
        {
            auto [p, cam] = fitting::fit_landmarks_only(
                landmarks[i], shape_model, {images[i].height(), images[i].width()}, opts.fit);
            fits[i] = {std::move(p), cam};
        } catch (const std::exception& e)
        {
            std::cerr << "iterative_refinement: landmark fit failed for image " << i << ": "
                      << e.what() << "\n";
            usable[i] = false;
        }
    }

    model::TextureModel model;
    for (int round = 0; round < rounds; ++round)
    {
        if (round > 0)
        {
            for (std::size_t i = 0; i < images.size(); ++i)
            {
                if (!usable[i])
                    continue;
                try
                {
                    fitting::FitResult result =
                        fitting::fit(images[i], landmarks[i], shape_model, model, extractor,
                                     opts.fit, std::make_pair(fits[i].p, fits[i].cam));
                    fits[i] = {result.state.p, result.state.cam};
                } catch (const std::exception& e)
                {
                    std::cerr << "iterative_refinement: fit failed for image " << i << ": "
                              << e.what() << "\n";
                    usable[i] = false;
                }
            }
        }

        std::vector<Image> round_images;
        std::vector<ImageFit> round_fits;
        for (std::size_t i = 0; i < images.size(); ++i)
            if (usable[i])
            {
                round_images.push_back(images[i]);
                round_fits.push_back(fits[i]);
            }
        const MaskedTextureMatrix data =
            assemble_texture_matrix(round_images, round_fits, shape_model, extractor);
        model = build_texture_model(data, opts.n_texture, opts.pcp);
        opts.round_residuals.push_back(detail::masked_reconstruction_residual(data, model));
    }
    return model;
}

} // namespace texture
} // namespace morphfit

#endif /* MORPHFIT_TEXTURE_BUILDER_HPP */

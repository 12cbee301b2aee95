/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: tests/test_model_core.cpp
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
#include "morphfit/model/pca.hpp"
#include "morphfit/model/procrustes.hpp"
#include "morphfit/model/shape_model.hpp"
#include "morphfit/model/texture_model.hpp"

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include <random>

using namespace morphfit;

namespace {

// Independent dense matvec: mean + basis * coeffs, one entry at a time.
Eigen::VectorXd matvec_oracle(const model::PcaModel& m, const Eigen::VectorXd& coeffs)
{
    Eigen::VectorXd out(m.mean.size());
    for (Eigen::Index i = 0; i < m.mean.size(); ++i)
    {
        double acc = m.mean[i];
        for (Eigen::Index j = 0; j < m.basis.cols(); ++j)
            acc += m.basis(i, j) * coeffs[j];
        out[i] = acc;
    }
    return out;
}

model::ShapeModel tiny_shape_model(int n_vertices, int n_components, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    model::ShapeModel m;
    m.pca.mean.resize(3 * n_vertices);
    for (Eigen::Index i = 0; i < m.pca.mean.size(); ++i)
        m.pca.mean[i] = gauss(rng);

    Eigen::MatrixXd raw(3 * n_vertices, n_components);
    for (Eigen::Index i = 0; i < raw.size(); ++i)
        raw(i % raw.rows(), i / raw.rows()) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    m.pca.basis = qr.householderQ() * Eigen::MatrixXd::Identity(3 * n_vertices, n_components);

    m.pca.eigenvalues.resize(n_components);
    for (int j = 0; j < n_components; ++j)
        m.pca.eigenvalues[j] = std::pow(1.5 * std::pow(0.9, j), 2);

    m.template_trilist.resize(1, 3);
    m.template_trilist << 0, 1, 2;
    m.landmark_vertex_ids = {0, 1, 2, 3};
    return m;
}

TriMesh random_blob(int n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    TriMesh mesh;
    mesh.vertices.resize(n, 3);
    for (int i = 0; i < n; ++i)
        mesh.vertices.row(i) << gauss(rng), gauss(rng), gauss(rng);
    mesh.trilist.resize(1, 3);
    mesh.trilist << 0, 1, 2;
    return mesh;
}

} // namespace

TEST(ShapeInstance, ZeroParametersGiveMeanMesh)
{
    const auto m = tiny_shape_model(10, 4, 1);
    const TriMesh mesh = shape_instance(m, Eigen::VectorXd::Zero(4));
    const Eigen::VectorXd flat = mesh_to_vector(mesh);
    EXPECT_NEAR((flat - m.pca.mean).cwiseAbs().maxCoeff(), 0.0, 0.0);
    EXPECT_EQ(mesh.trilist, m.template_trilist);
}

TEST(ShapeInstance, SingleBasisColumnShiftsOneCoordinate)
{
    model::ShapeModel m;
    m.pca.mean = Eigen::VectorXd::Zero(9);
    m.pca.basis = Eigen::MatrixXd::Zero(9, 1);
    m.pca.basis(0, 0) = 1.0; // x of vertex 0
    m.pca.eigenvalues = Eigen::VectorXd::Ones(1);
    m.template_trilist.resize(1, 3);
    m.template_trilist << 0, 1, 2;

    Eigen::VectorXd p(1);
    p << 2.0;
    const TriMesh mesh = shape_instance(m, p);
    EXPECT_DOUBLE_EQ(mesh.vertices(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(mesh.vertices(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(mesh.vertices(1, 0), 0.0);
}

TEST(ShapeInstance, MatchesDenseMatvecOracle)
{
    const auto m = tiny_shape_model(25, 6, 2);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial)
    {
        Eigen::VectorXd p(6);
        for (int j = 0; j < 6; ++j)
            p[j] = 3.0 * std::sqrt(m.pca.eigenvalues[j]) * unit(rng);
        const Eigen::VectorXd expected = matvec_oracle(m.pca, p);
        const Eigen::VectorXd actual = mesh_to_vector(shape_instance(m, p));
        EXPECT_LT((expected - actual).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(ShapeInstance, DimensionMismatchThrows)
{
    const auto m = tiny_shape_model(10, 4, 4);
    EXPECT_THROW(shape_instance(m, Eigen::VectorXd::Zero(5)), std::invalid_argument);
}

TEST(ShapeInstance, LinearityHoldsToFloatingPoint)
{
    const auto m = tiny_shape_model(12, 5, 5);
    std::mt19937_64 rng(6);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd p1(5), p2(5);
    for (int j = 0; j < 5; ++j)
    {
        p1[j] = gauss(rng);
        p2[j] = gauss(rng);
    }
    const double a = 0.7, b = -1.3;
    const Eigen::VectorXd lhs =
        model::shape_instance_vector(m, a * p1 + b * p2) - m.pca.mean;
    const Eigen::VectorXd rhs = a * (model::shape_instance_vector(m, p1) - m.pca.mean) +
                                b * (model::shape_instance_vector(m, p2) - m.pca.mean);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TextureInstance, ZeroAndBasisColumnCases)
{
    model::TextureModel m;
    m.channels = 2;
    m.pca.mean = Eigen::VectorXd::LinSpaced(8, 0.0, 7.0);
    m.pca.basis = Eigen::MatrixXd::Identity(8, 3);
    m.pca.eigenvalues = Eigen::VectorXd::Ones(3);

    EXPECT_EQ(texture_instance(m, Eigen::VectorXd::Zero(3)), m.pca.mean);

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(3);
    lambda[1] = 2.5;
    const Eigen::VectorXd t = texture_instance(m, lambda);
    EXPECT_DOUBLE_EQ(t[1], m.pca.mean[1] + 2.5);
    EXPECT_DOUBLE_EQ(t[0], m.pca.mean[0]);

    EXPECT_THROW(texture_instance(m, Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST(TextureInstance, MatchesDenseMatvecOracle)
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    model::TextureModel m;
    m.channels = 1;
    m.pca.mean.resize(30);
    for (int i = 0; i < 30; ++i)
        m.pca.mean[i] = gauss(rng);
    Eigen::MatrixXd raw(30, 4);
    for (int i = 0; i < 30; ++i)
        for (int j = 0; j < 4; ++j)
            raw(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    m.pca.basis = qr.householderQ() * Eigen::MatrixXd::Identity(30, 4);
    m.pca.eigenvalues = Eigen::VectorXd::Ones(4);

    Eigen::VectorXd lambda(4);
    lambda << 0.3, -1.2, 0.5, 2.0;
    EXPECT_LT((texture_instance(m, lambda) - matvec_oracle(m.pca, lambda)).cwiseAbs().maxCoeff(),
              1e-12);
}

TEST(PcaFromSamples, AntipodalPairGivesZeroMeanAndDirection)
{
    Eigen::VectorXd v(6);
    v << 1.0, -2.0, 0.5, 3.0, 0.0, -1.0;
    Eigen::MatrixXd samples(6, 2);
    samples.col(0) = v;
    samples.col(1) = -v;

    const auto pca = model::pca_from_samples(samples, 1);
    EXPECT_LT(pca.mean.cwiseAbs().maxCoeff(), 1e-14);
    const double cosine = std::abs(pca.basis.col(0).dot(v.normalized()));
    EXPECT_NEAR(cosine, 1.0, 1e-12);
    // |[v, -v]| has singular value sqrt(2)|v|; variance over M-1 = 2 |v|^2.
    EXPECT_NEAR(pca.eigenvalues[0], 2.0 * v.squaredNorm(), 1e-10);
}

TEST(PcaFromSamples, PlanarSamplesHaveRankTwo)
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd c(10), a(10), b(10);
    for (int i = 0; i < 10; ++i)
    {
        c[i] = gauss(rng);
        a[i] = gauss(rng);
        b[i] = gauss(rng);
    }
    Eigen::MatrixXd samples(10, 6);
    for (int k = 0; k < 6; ++k)
        samples.col(k) = c + gauss(rng) * a + gauss(rng) * b;

    // Independent oracle: singular values of the centered matrix.
    Eigen::MatrixXd centered = samples.colwise() - samples.rowwise().mean().eval();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    ASSERT_GT(svd.singularValues()[1], 1e-8);
    ASSERT_LT(svd.singularValues()[2], 1e-10);

    const auto pca = model::pca_from_samples(samples, 5);
    EXPECT_GT(pca.eigenvalues[1], 1e-8);
    for (int j = 2; j < 5; ++j)
        EXPECT_LT(pca.eigenvalues[j], 1e-10);
}

TEST(PcaFromSamples, FullRankReconstructionIsComplete)
{
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd samples(20, 5);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 5; ++j)
            samples(i, j) = gauss(rng);

    const auto pca = model::pca_from_samples(samples, 4);
    for (int k = 0; k < 5; ++k)
    {
        const Eigen::VectorXd x = samples.col(k);
        const Eigen::VectorXd rebuilt =
            pca.mean + pca.basis * (pca.basis.transpose() * (x - pca.mean));
        EXPECT_LT((x - rebuilt).norm() / x.norm(), 1e-8);
    }
    EXPECT_NO_THROW(pca.validate());
}

TEST(PcaFromSamples, RejectsBadArguments)
{
    Eigen::MatrixXd one_sample(4, 1);
    one_sample.setZero();
    EXPECT_THROW(model::pca_from_samples(one_sample, 1), std::invalid_argument);

    Eigen::MatrixXd samples = Eigen::MatrixXd::Random(4, 3);
    EXPECT_THROW(model::pca_from_samples(samples, 3), std::invalid_argument); // > M-1
}

TEST(Procrustes, RotatedCopyAlignsExactly)
{
    const TriMesh mesh = random_blob(15, 17);
    TriMesh rotated = mesh;
    const Eigen::Matrix3d r =
        Eigen::AngleAxisd(M_PI / 2.0, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    rotated.vertices = mesh.vertices * r.transpose();

    const auto aligned = model::procrustes_align({mesh, rotated});
    EXPECT_LT((aligned[0].vertices - aligned[1].vertices).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Procrustes, ScaledCopyAlignsExactly)
{
    const TriMesh mesh = random_blob(12, 19);
    TriMesh scaled = mesh;
    scaled.vertices *= 3.0;

    const auto aligned = model::procrustes_align({mesh, scaled});
    EXPECT_LT((aligned[0].vertices - aligned[1].vertices).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Procrustes, ResidualDecreasesMonotonically)
{
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const TriMesh base = random_blob(30, 29);

    std::vector<TriMesh> meshes;
    for (int k = 0; k < 5; ++k)
    {
        TriMesh m = base;
        for (int i = 0; i < m.vertices.rows(); ++i)
            for (int d = 0; d < 3; ++d)
                m.vertices(i, d) += 0.1 * gauss(rng);
        const Eigen::Vector3d axis = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng)).normalized();
        const Eigen::Matrix3d r = Eigen::AngleAxisd(0.5 * gauss(rng), axis).toRotationMatrix();
        m.vertices = (m.vertices * r.transpose()).eval();
        m.vertices.rowwise() += Eigen::RowVector3d(gauss(rng), gauss(rng), gauss(rng));
        meshes.push_back(std::move(m));
    }

    std::vector<double> residuals;
    model::procrustes_align(meshes, &residuals);
    ASSERT_GE(residuals.size(), 2u);
    for (std::size_t k = 1; k < residuals.size(); ++k)
        EXPECT_LE(residuals[k], residuals[k - 1] + 1e-12);
}

TEST(Procrustes, RequiresTwoMeshes)
{
    EXPECT_THROW(model::procrustes_align({random_blob(5, 31)}), std::invalid_argument);
}

TEST(TriMeshValidate, CatchesBadTriangles)
{
    TriMesh mesh = random_blob(4, 37);
    mesh.trilist.resize(1, 3);
    mesh.trilist << 0, 1, 7; // out of range
    EXPECT_THROW(mesh.validate(), std::invalid_argument);
    mesh.trilist << 0, 1, 1; // repeated index
    EXPECT_THROW(mesh.validate(), std::invalid_argument);
}

TEST(PcaModel, ValidateRejectsNonOrthonormalBasis)
{
    model::PcaModel m;
    m.mean = Eigen::VectorXd::Zero(4);
    m.basis = Eigen::MatrixXd::Ones(4, 2);
    m.eigenvalues = Eigen::VectorXd::Ones(2);
    EXPECT_THROW(m.validate(), std::invalid_argument);
}

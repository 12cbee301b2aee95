/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: tests/test_camera.cpp
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
#include "morphfit/camera/camera.hpp"
#include "morphfit/camera/jacobians.hpp"
#include "morphfit/synth/synthetic.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace morphfit;
using camera::CameraParams;

namespace {

Eigen::Vector4d random_unit_quaternion(std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Vector4d q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    return q.normalized();
}

CameraParams random_camera(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    CameraParams c;
    c.f = 400.0 + 100.0 * unit(rng);
    c.q = random_unit_quaternion(rng);
    c.t = Eigen::Vector3d(0.4 * unit(rng), 0.4 * unit(rng), 5.0 + unit(rng));
    c.principal_point = Eigen::Vector2d(128.0, 128.0);
    return c;
}

/// Central differences of the warp in the multiplicative camera tangent.
Eigen::MatrixXd warp_fd_dc(const Eigen::VectorXd& p, const CameraParams& c,
                           const model::ShapeModel& m, double h)
{
    const int n = m.num_vertices();
    Eigen::MatrixXd fd(2 * n, 7);
    for (int col = 0; col < 7; ++col)
    {
        CameraParams plus = c, minus = c;
        if (col == 0)
        {
            plus.f += h;
            minus.f -= h;
        } else if (col <= 3)
        {
            Eigen::Vector3d d = Eigen::Vector3d::Zero();
            d[col - 1] = h;
            plus.q = camera::quaternion_update(c.q, d);
            minus.q = camera::quaternion_update(c.q, -d);
        } else
        {
            plus.t[col - 4] += h;
            minus.t[col - 4] -= h;
        }
        fd.col(col) =
            (camera::warp(p, plus, m).points2d - camera::warp(p, minus, m).points2d) / (2.0 * h);
    }
    return fd;
}

Eigen::MatrixXd warp_fd_dp(const Eigen::VectorXd& p, const CameraParams& c,
                           const model::ShapeModel& m, double h)
{
    const int n = m.num_vertices();
    Eigen::MatrixXd fd(2 * n, p.size());
    for (int col = 0; col < p.size(); ++col)
    {
        Eigen::VectorXd plus = p, minus = p;
        plus[col] += h;
        minus[col] -= h;
        fd.col(col) =
            (camera::warp(plus, c, m).points2d - camera::warp(minus, c, m).points2d) / (2.0 * h);
    }
    return fd;
}

} // namespace

TEST(RotationFromQuaternion, IdentityQuaternion)
{
    const Eigen::Matrix3d r = camera::rotation_from_quaternion({1.0, 0.0, 0.0, 0.0});
    EXPECT_LT((r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RotationFromQuaternion, NinetyDegreesAboutX)
{
    const double s = std::sqrt(2.0) / 2.0;
    const Eigen::Matrix3d r = camera::rotation_from_quaternion({s, s, 0.0, 0.0});
    Eigen::Matrix3d expected;
    expected << 1, 0, 0, 0, 0, -1, 0, 1, 0;
    EXPECT_LT((r - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RotationFromQuaternion, HalfTurnAboutX)
{
    const Eigen::Matrix3d r = camera::rotation_from_quaternion({0.0, 1.0, 0.0, 0.0});
    EXPECT_LT((r - Eigen::Vector3d(1, -1, -1).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff(),
              1e-15);
}

TEST(RotationFromQuaternion, OrthonormalWithUnitDeterminant)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Eigen::Matrix3d r = camera::rotation_from_quaternion(random_unit_quaternion(rng));
        EXPECT_LT((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_NEAR(r.determinant(), 1.0, 1e-10);
    }
}

TEST(RotationFromQuaternion, DoubleCoverIsExact)
{
    std::mt19937_64 rng(6);
    const Eigen::Vector4d q = random_unit_quaternion(rng);
    const Eigen::Matrix3d a = camera::rotation_from_quaternion(q);
    const Eigen::Matrix3d b = camera::rotation_from_quaternion(-q);
    EXPECT_EQ((a - b).cwiseAbs().maxCoeff(), 0.0);
}

TEST(RotationFromQuaternion, RejectsNonUnitQuaternion)
{
    EXPECT_THROW(camera::rotation_from_quaternion({1.0, 0.5, 0.0, 0.0}), std::invalid_argument);
}

TEST(ViewTransform, IdentityAndTranslation)
{
    CameraParams c;
    EXPECT_LT((camera::view_transform({1, 2, 3}, c) - Eigen::Vector3d(1, 2, 3)).norm(), 1e-15);

    c.t = Eigen::Vector3d(0, 0, 5);
    EXPECT_LT((camera::view_transform({0, 0, 0}, c) - Eigen::Vector3d(0, 0, 5)).norm(), 1e-15);
}

TEST(ViewTransform, RotatesWithQuaternion)
{
    CameraParams c;
    const double s = std::sqrt(2.0) / 2.0;
    c.q = Eigen::Vector4d(s, s, 0, 0); // 90 degrees about x
    EXPECT_LT((camera::view_transform({0, 1, 0}, c) - Eigen::Vector3d(0, 0, 1)).norm(), 1e-12);
}

TEST(PerspectiveProject, KnownValues)
{
    const Eigen::Vector2d pp(320, 240);
    EXPECT_LT((camera::perspective_project({0, 0, 5}, 100, pp) - Eigen::Vector2d(320, 240)).norm(),
              1e-12);
    EXPECT_LT((camera::perspective_project({1, 2, 5}, 100, pp) - Eigen::Vector2d(340, 280)).norm(),
              1e-12);
    // Doubling the depth halves the offset from the principal point.
    EXPECT_LT((camera::perspective_project({1, 2, 10}, 100, pp) - Eigen::Vector2d(330, 260)).norm(),
              1e-12);
}

TEST(PerspectiveProject, BehindCameraThrows)
{
    EXPECT_THROW(camera::perspective_project({0, 0, -1}, 100, {0, 0}), std::domain_error);
    EXPECT_THROW(camera::perspective_project({0, 0, 0}, 100, {0, 0}), std::domain_error);
}

TEST(CameraApply, SingleVertexAtPrincipalPoint)
{
    CameraParams c;
    c.f = 100;
    c.t = Eigen::Vector3d(0, 0, 5);
    c.principal_point = Eigen::Vector2d(320, 240);
    Eigen::VectorXd s(3);
    s << 0, 0, 0;
    const auto proj = camera::camera_apply(s, c);
    EXPECT_NEAR(proj.points2d[0], 320, 1e-12);
    EXPECT_NEAR(proj.points2d[1], 240, 1e-12);
    EXPECT_NEAR(proj.depths[0], 5, 1e-12);
    EXPECT_FALSE(proj.behind[0]);
}

TEST(CameraApply, DepthOnlyDifferenceCollapsesOnAxisOnly)
{
    CameraParams c;
    c.f = 100;
    c.t = Eigen::Vector3d(0, 0, 5);
    Eigen::VectorXd on_axis(6);
    on_axis << 0, 0, 0, 0, 0, 1;
    auto proj = camera::camera_apply(on_axis, c);
    EXPECT_NEAR((proj.point(0) - proj.point(1)).norm(), 0.0, 1e-12);

    Eigen::VectorXd off_axis(6);
    off_axis << 0.5, 0, 0, 0.5, 0, 1;
    proj = camera::camera_apply(off_axis, c);
    EXPECT_GT((proj.point(0) - proj.point(1)).norm(), 1.0);
}

TEST(CameraApply, MatchesPerVertexComposition)
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const CameraParams c = random_camera(rng);
    Eigen::VectorXd s(3 * 20);
    for (int i = 0; i < s.size(); ++i)
        s[i] = gauss(rng);

    const auto proj = camera::camera_apply(s, c);
    for (int i = 0; i < 20; ++i)
    {
        const Eigen::Vector3d v = camera::view_transform(s.segment<3>(3 * i), c);
        if (v.z() <= camera::k_near_epsilon)
        {
            EXPECT_TRUE(proj.behind[i]);
            continue;
        }
        const Eigen::Vector2d expected =
            camera::perspective_project(v, c.f, c.principal_point);
        EXPECT_LT((proj.point(i) - expected).norm(), 1e-12);
        EXPECT_NEAR(proj.depths[i], v.z(), 1e-12);
    }
}

TEST(CameraApply, FlagsBehindVerticesWithoutAborting)
{
    CameraParams c;
    c.t = Eigen::Vector3d(0, 0, 1);
    Eigen::VectorXd s(6);
    s << 0, 0, 0, 0, 0, -2; // second vertex lands behind the camera
    const auto proj = camera::camera_apply(s, c);
    EXPECT_FALSE(proj.behind[0]);
    EXPECT_TRUE(proj.behind[1]);
}

TEST(Warp, ZeroParametersProjectTheMeanMesh)
{
    auto [shape, texture] = synth::make_synthetic_model(11, 162);
    (void)texture;
    CameraParams c;
    c.f = 200;
    c.t = Eigen::Vector3d(0, 0, 4);
    const auto direct = camera::camera_apply(shape.pca.mean, c);
    const auto warped = camera::warp(Eigen::VectorXd::Zero(shape.num_components()), c, shape);
    EXPECT_LT((direct.points2d - warped.points2d).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Warp, TranslationShiftIsFirstOrderCorrect)
{
    auto [shape, texture] = synth::make_synthetic_model(12, 162);
    (void)texture;
    CameraParams c;
    c.f = 200;
    c.t = Eigen::Vector3d(0, 0, 4);
    const Eigen::VectorXd p = Eigen::VectorXd::Zero(shape.num_components());

    const double delta = 1e-6;
    CameraParams shifted = c;
    shifted.t.x() += delta;
    const auto base = camera::warp(p, c, shape);
    const auto moved = camera::warp(p, shifted, shape);
    for (int i = 0; i < shape.num_vertices(); i += 17)
    {
        const double expected = c.f * delta / base.depths[i];
        EXPECT_NEAR(moved.points2d[2 * i] - base.points2d[2 * i], expected, 1e-9);
        EXPECT_NEAR(moved.points2d[2 * i + 1] - base.points2d[2 * i + 1], 0.0, 1e-9);
    }
}

TEST(WarpJacobians, TranslationColumnsAreAnalytic)
{
    auto [shape, texture] = synth::make_synthetic_model(13, 162);
    (void)texture;
    CameraParams c;
    c.f = 300;
    c.t = Eigen::Vector3d(0.1, -0.2, 4);
    const Eigen::VectorXd p = Eigen::VectorXd::Zero(shape.num_components());

    const auto jac = camera::warp_jacobians(p, c, shape);
    const auto proj = camera::warp(p, c, shape);
    for (int i = 0; i < shape.num_vertices(); ++i)
    {
        EXPECT_NEAR(jac.dc(2 * i, 4), c.f / proj.depths[i], 1e-10);     // dx'/dtx
        EXPECT_NEAR(jac.dc(2 * i, 5), 0.0, 1e-12);                       // dx'/dty
        EXPECT_NEAR(jac.dc(2 * i + 1, 5), c.f / proj.depths[i], 1e-10); // dy'/dty
        EXPECT_NEAR(jac.dc(2 * i + 1, 4), 0.0, 1e-12);                   // dy'/dtx
    }
}

TEST(WarpJacobians, MatchFiniteDifferences)
{
    auto [shape, texture] = synth::make_synthetic_model(14, 162);
    (void)texture;
    std::mt19937_64 rng(15);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double h = 1e-6;

    for (int trial = 0; trial < 10; ++trial)
    {
        CameraParams c = random_camera(rng);
        c.t.z() = 5.0 + std::abs(c.t.z());
        Eigen::VectorXd p(shape.num_components());
        for (int j = 0; j < p.size(); ++j)
            p[j] = 0.5 * std::sqrt(shape.pca.eigenvalues[j]) * gauss(rng);

        const auto proj = camera::warp(p, c, shape);
        if (proj.any_behind())
            continue;

        const auto jac = camera::warp_jacobians(p, c, shape);
        const Eigen::MatrixXd fd_dc = warp_fd_dc(p, c, shape, h);
        const Eigen::MatrixXd fd_dp = warp_fd_dp(p, c, shape, h);

        for (int col = 0; col < 7; ++col)
        {
            const double scale = std::max(1.0, fd_dc.col(col).cwiseAbs().maxCoeff());
            EXPECT_LT((jac.dc.col(col) - fd_dc.col(col)).cwiseAbs().maxCoeff() / scale, 1e-4)
                << "camera column " << col;
        }
        for (int col = 0; col < p.size(); ++col)
        {
            const double scale = std::max(1.0, fd_dp.col(col).cwiseAbs().maxCoeff());
            EXPECT_LT((jac.dp.col(col) - fd_dp.col(col)).cwiseAbs().maxCoeff() / scale, 1e-4)
                << "shape column " << col;
        }
    }
}

TEST(WarpJacobians, ZeroBasisGivesZeroShapeJacobian)
{
    model::ShapeModel m;
    m.pca.mean.resize(9);
    m.pca.mean << 0, 0, 0, 1, 0, 0, 0, 1, 0;
    m.pca.basis = Eigen::MatrixXd::Zero(9, 2);
    m.pca.eigenvalues = Eigen::VectorXd::Ones(2);
    m.template_trilist.resize(1, 3);
    m.template_trilist << 0, 1, 2;

    CameraParams c;
    c.f = 100;
    c.t = Eigen::Vector3d(0, 0, 3);
    const auto jac = camera::warp_jacobians(Eigen::VectorXd::Zero(2), c, m);
    EXPECT_EQ(jac.dp.cwiseAbs().maxCoeff(), 0.0);
}

TEST(WarpJacobians, BehindCameraVertexNamedInError)
{
    model::ShapeModel m;
    m.pca.mean.resize(6);
    m.pca.mean << 0, 0, 0, 0, 0, -9;
    m.pca.basis = Eigen::MatrixXd::Zero(6, 1);
    m.pca.basis(0, 0) = 1.0;
    m.pca.eigenvalues = Eigen::VectorXd::Ones(1);
    m.template_trilist.resize(0, 3);

    CameraParams c;
    c.t = Eigen::Vector3d(0, 0, 3);
    try
    {
        camera::warp_jacobians(Eigen::VectorXd::Zero(1), c, m);
        FAIL() << "expected behind-camera error";
    } catch (const std::domain_error& e)
    {
        EXPECT_NE(std::string(e.what()).find("vertex 1"), std::string::npos);
    }
}

TEST(QuaternionUpdate, IdentityIncrementKeepsQuaternion)
{
    std::mt19937_64 rng(16);
    const Eigen::Vector4d q = random_unit_quaternion(rng);
    const Eigen::Vector4d out = camera::quaternion_update(q, Eigen::Vector3d::Zero());
    EXPECT_LT((out - q).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(QuaternionUpdate, TwoNinetyDegreeIncrementsMakeAHalfTurn)
{
    const double s = std::sqrt(2.0) / 2.0;
    Eigen::Vector4d q(1, 0, 0, 0);
    q = camera::quaternion_update(q, Eigen::Vector3d(s, 0, 0));
    q = camera::quaternion_update(q, Eigen::Vector3d(s, 0, 0));
    EXPECT_LT((q - Eigen::Vector4d(0, 1, 0, 0)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(QuaternionUpdate, MatchesRotationMatrixProduct)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(-0.3, 0.3);
    for (int trial = 0; trial < 20; ++trial)
    {
        const Eigen::Vector4d q = random_unit_quaternion(rng);
        const Eigen::Vector3d d(unit(rng), unit(rng), unit(rng));
        Eigen::Vector4d dq;
        dq[0] = std::sqrt(1.0 - d.squaredNorm());
        dq.tail<3>() = d;

        const Eigen::Matrix3d expected = camera::rotation_from_quaternion(dq.normalized()) *
                                         camera::rotation_from_quaternion(q);
        const Eigen::Matrix3d actual =
            camera::rotation_from_quaternion(camera::quaternion_update(q, d));
        EXPECT_LT((expected - actual).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(QuaternionUpdate, PreservesUnitNorm)
{
    std::mt19937_64 rng(18);
    std::uniform_real_distribution<double> unit(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Eigen::Vector4d q = random_unit_quaternion(rng);
        const Eigen::Vector3d d(unit(rng), unit(rng), unit(rng)); // may exceed unit norm
        const Eigen::Vector4d out = camera::quaternion_update(q, d);
        EXPECT_LT(std::abs(out.norm() - 1.0), 1e-12);
    }
}

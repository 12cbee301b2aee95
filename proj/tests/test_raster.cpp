/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: tests/test_raster.cpp
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
#include "morphfit/render/raycast.hpp"
#include "morphfit/render/sampling.hpp"
#include "morphfit/render/zbuffer.hpp"
#include "morphfit/synth/synthetic.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace morphfit;
using camera::CameraParams;

namespace {

CameraParams frontal_camera(double f = 200.0, double tz = 4.0,
                            const Eigen::Vector2d& pp = {127.5, 127.5})
{
    CameraParams c;
    c.f = f;
    c.t = Eigen::Vector3d(0, 0, tz);
    c.principal_point = pp;
    return c;
}

/// Single triangle in the z = 0 plane, facing the camera at z = -tz.
TriMesh single_triangle()
{
    TriMesh mesh;
    mesh.vertices.resize(3, 3);
    mesh.vertices << -0.5, -0.5, 0.0, //
        0.5, -0.5, 0.0,               //
        0.0, 0.6, 0.0;
    mesh.trilist.resize(1, 3);
    mesh.trilist << 0, 1, 2;
    return mesh;
}

features::FeatureImage make_feature(const Image& img)
{
    return {img, "test"};
}

} // namespace

TEST(Raycast, SingleTriangleFullyVisible)
{
    const auto mask = render::occlusion_mask_raycast(single_triangle(), frontal_camera());
    EXPECT_EQ(mask.count(), 3);
}

TEST(Raycast, CoveredTriangleIsInvisible)
{
    // Front triangle strictly larger and nearer; the back one is fully covered.
    TriMesh mesh;
    mesh.vertices.resize(6, 3);
    mesh.vertices << -1.0, -1.0, -0.5, //
        1.0, -1.0, -0.5,               //
        0.0, 1.2, -0.5,                // front triangle (closer: smaller depth)
        -0.3, -0.3, 0.5,               //
        0.3, -0.3, 0.5,                //
        0.0, 0.4, 0.5;                 // back triangle
    mesh.trilist.resize(2, 3);
    mesh.trilist << 0, 1, 2, 3, 4, 5;

    const auto mask = render::occlusion_mask_raycast(mesh, frontal_camera());
    EXPECT_TRUE(mask.visible[0]);
    EXPECT_TRUE(mask.visible[1]);
    EXPECT_TRUE(mask.visible[2]);
    EXPECT_FALSE(mask.visible[3]);
    EXPECT_FALSE(mask.visible[4]);
    EXPECT_FALSE(mask.visible[5]);

    // Oracle: the segment to each back vertex crosses the front triangle.
    const Eigen::Matrix3d r = camera::rotation_from_quaternion(frontal_camera().q);
    const Eigen::Vector3d origin = -r.transpose() * frontal_camera().t;
    for (int i = 3; i < 6; ++i)
    {
        double t_hit;
        const bool hit = render::ray_triangle_intersect(
            origin, mesh.vertices.row(i).transpose() - origin, mesh.vertices.row(0).transpose(),
            mesh.vertices.row(1).transpose(), mesh.vertices.row(2).transpose(), 1e-9, t_hit);
        ASSERT_TRUE(hit);
        EXPECT_GT(t_hit, 0.0);
        EXPECT_LT(t_hit, 1.0);
    }
}

TEST(Raycast, BehindCameraVertexInvisible)
{
    TriMesh mesh = single_triangle();
    mesh.vertices(1, 2) = -10.0; // behind the camera at z = -4
    const auto mask = render::occlusion_mask_raycast(mesh, frontal_camera());
    EXPECT_FALSE(mask.visible[1]);
}

TEST(Zbuffer, SingleTriangleMatchesRaycast)
{
    const TriMesh mesh = single_triangle();
    const CameraParams c = frontal_camera();
    const auto ray = render::occlusion_mask_raycast(mesh, c);
    const auto zb = render::visible_vertices_zbuffer(mesh, c, {256, 256});
    EXPECT_EQ(ray.visible, zb.visible);
    EXPECT_EQ(zb.count(), 3);
}

TEST(Zbuffer, AgreesWithRaycastOnIcosphere)
{
    const TriMesh mesh = synth::make_icosphere(4); // 2562 vertices
    const CameraParams c = frontal_camera(600.0, 4.0, {255.5, 255.5});

    const auto ray = render::occlusion_mask_raycast(mesh, c);
    const auto zb = render::visible_vertices_zbuffer(mesh, c, {512, 512});

    // Visible cap of a unit sphere at distance 4: (1 - r/d)/2 = 37.5%.
    EXPECT_GT(ray.count(), static_cast<int>(0.34 * mesh.num_vertices()));
    EXPECT_LT(ray.count(), static_cast<int>(0.45 * mesh.num_vertices()));

    int agree = 0;
    for (int i = 0; i < mesh.num_vertices(); ++i)
        agree += ray.visible[i] == zb.visible[i] ? 1 : 0;
    EXPECT_GE(static_cast<double>(agree) / mesh.num_vertices(), 0.99);
}

TEST(Zbuffer, EmptyOverlapMeansAllInvisible)
{
    TriMesh mesh = single_triangle();
    CameraParams c = frontal_camera();
    c.principal_point = Eigen::Vector2d(-4000.0, -4000.0); // projects far off the raster
    const auto zb = render::visible_vertices_zbuffer(mesh, c, {64, 64});
    EXPECT_EQ(zb.count(), 0);
}

TEST(Zbuffer, SkipsDegenerateTriangles)
{
    TriMesh mesh = single_triangle();
    mesh.vertices.row(2) = mesh.vertices.row(1); // collapses the projected triangle
    mesh.vertices(2, 2) += 1e-12;
    const auto zb = render::visible_vertices_zbuffer(mesh, frontal_camera(), {64, 64});
    EXPECT_EQ(zb.count(), 0); // nothing rasterized, nothing visible
}

TEST(SampleFeatures, ConstantImage)
{
    Image img(16, 16, 2, 0.375);
    Eigen::VectorXd s(6);
    s << 0.0, 0.0, 0.0, 0.01, 0.01, 0.0;
    const auto proj = camera::camera_apply(s, frontal_camera(100.0, 2.0, {7.5, 7.5}));
    const auto sampled =
        render::sample_features(make_feature(img), proj, render::ObservationMask(2, true));
    EXPECT_EQ(sampled.mask.count(), 2);
    for (int i = 0; i < sampled.values.size(); ++i)
        EXPECT_DOUBLE_EQ(sampled.values[i], 0.375);
}

TEST(SampleFeatures, LinearRampInterpolatesExactly)
{
    Image img(4, 32, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 32; ++x)
            img.at(y, x, 0) = x;

    camera::ProjectedShape proj;
    proj.points2d.resize(2);
    proj.points2d << 10.5, 1.5;
    proj.depths = Eigen::VectorXd::Ones(1);
    proj.behind = {false};

    const auto sampled =
        render::sample_features(make_feature(img), proj, render::ObservationMask(1, true));
    EXPECT_DOUBLE_EQ(sampled.values[0], 10.5);
}

TEST(SampleFeatures, AffineImagesAreExact)
{
    Image img(24, 24, 1);
    for (int y = 0; y < 24; ++y)
        for (int x = 0; x < 24; ++x)
            img.at(y, x, 0) = 1.25 * x - 0.5 * y + 3.0;

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pos(0.0, 23.0);
    camera::ProjectedShape proj;
    const int n = 40;
    proj.points2d.resize(2 * n);
    proj.depths = Eigen::VectorXd::Ones(n);
    proj.behind.assign(n, false);
    for (int i = 0; i < n; ++i)
    {
        proj.points2d[2 * i] = pos(rng);
        proj.points2d[2 * i + 1] = pos(rng);
    }
    const auto sampled =
        render::sample_features(make_feature(img), proj, render::ObservationMask(n, true));
    for (int i = 0; i < n; ++i)
    {
        const double expected =
            1.25 * proj.points2d[2 * i] - 0.5 * proj.points2d[2 * i + 1] + 3.0;
        EXPECT_NEAR(sampled.values[i], expected, 1e-12);
    }
}

TEST(SampleFeatures, OutOfImageVerticesAreMaskedOut)
{
    Image img(8, 8, 1, 1.0);
    camera::ProjectedShape proj;
    proj.points2d.resize(4);
    proj.points2d << -5.0, -5.0, 3.0, 3.0;
    proj.depths = Eigen::VectorXd::Ones(2);
    proj.behind = {false, false};

    const auto sampled =
        render::sample_features(make_feature(img), proj, render::ObservationMask(2, true));
    EXPECT_FALSE(sampled.mask.visible[0]);
    EXPECT_TRUE(sampled.mask.visible[1]);
    EXPECT_DOUBLE_EQ(sampled.values[0], 0.0);
    EXPECT_DOUBLE_EQ(sampled.values[1], 1.0);
}

TEST(SampleFeatureGradients, RampAndQuadratic)
{
    // I = 3x: interior d/dx = 3, d/dy = 0.
    Image ramp(8, 16, 1);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 16; ++x)
            ramp.at(y, x, 0) = 3.0 * x;

    camera::ProjectedShape proj;
    proj.points2d.resize(2);
    proj.points2d << 7.0, 4.0;
    proj.depths = Eigen::VectorXd::Ones(1);
    proj.behind = {false};

    auto [gx, gy] =
        render::sample_feature_gradients(make_feature(ramp), proj, render::ObservationMask(1, true));
    EXPECT_DOUBLE_EQ(gx.values[0], 3.0);
    EXPECT_DOUBLE_EQ(gy.values[0], 0.0);

    // I = x^2: central difference at integer x = k is exactly 2k.
    Image quad(4, 32, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 32; ++x)
            quad.at(y, x, 0) = static_cast<double>(x) * x;
    proj.points2d << 9.0, 2.0;
    auto [qx, qy] =
        render::sample_feature_gradients(make_feature(quad), proj, render::ObservationMask(1, true));
    EXPECT_DOUBLE_EQ(qx.values[0], 18.0);
    EXPECT_DOUBLE_EQ(qy.values[0], 0.0);
}

TEST(SampleFeatureGradients, MaskedVerticesAreZero)
{
    Image img(8, 8, 1, 0.5);
    camera::ProjectedShape proj;
    proj.points2d.resize(2);
    proj.points2d << 4.0, 4.0;
    proj.depths = Eigen::VectorXd::Ones(1);
    proj.behind = {false};
    auto [gx, gy] =
        render::sample_feature_gradients(make_feature(img), proj, render::ObservationMask(1, false));
    EXPECT_DOUBLE_EQ(gx.values[0], 0.0);
    EXPECT_DOUBLE_EQ(gy.values[0], 0.0);
    EXPECT_EQ(gx.mask.count(), 0);
}

TEST(ResidualMaskSelect, KeepsAllWhenKCoversVisible)
{
    render::ObservationMask visible(100, false);
    for (int i = 0; i < 100; i += 2)
        visible.visible[i] = true;
    const auto out = render::residual_mask_select(visible, 1000, 42);
    EXPECT_EQ(out.visible, visible.visible);
}

TEST(ResidualMaskSelect, SelectsExactlyKOnLargeHead)
{
    // K = 5000 on a 53,490-vertex mesh with every vertex visible.
    render::ObservationMask visible(53490, true);
    const auto out = render::residual_mask_select(visible, 5000, 7);
    EXPECT_EQ(out.count(), 5000);
}

TEST(ResidualMaskSelect, DeterministicUnderSeedAndSubsetOfVisible)
{
    std::mt19937_64 rng(9);
    render::ObservationMask visible(2000, false);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int i = 0; i < 2000; ++i)
        visible.visible[i] = coin(rng) < 0.6;

    const auto a = render::residual_mask_select(visible, 300, 1234);
    const auto b = render::residual_mask_select(visible, 300, 1234);
    EXPECT_EQ(a.visible, b.visible);
    EXPECT_EQ(a.count(), 300);

    const auto c = render::residual_mask_select(visible, 300, 999);
    EXPECT_NE(a.visible, c.visible); // different seed, different subset

    for (int i = 0; i < 2000; ++i)
        if (a.visible[i])
            EXPECT_TRUE(visible.visible[i]);
}

TEST(ResidualMaskSelect, RejectsNonPositiveK)
{
    EXPECT_THROW(render::residual_mask_select(render::ObservationMask(5, true), 0, 1),
                 std::invalid_argument);
}

/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/core/mesh.hpp
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

#ifndef MORPHFIT_CORE_MESH_HPP
#define MORPHFIT_CORE_MESH_HPP

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace morphfit {

/**
 * Triangle mesh: N vertices in object-space coordinates plus a T x 3 list of
 * vertex indices. Indices are 0-based in memory (file formats convert).
 */
struct TriMesh
{
    Eigen::MatrixXd vertices; // N x 3
    Eigen::MatrixXi trilist;  // T x 3

    int num_vertices() const { return static_cast<int>(vertices.rows()); }
    int num_triangles() const { return static_cast<int>(trilist.rows()); }

    /// Throws std::invalid_argument on out-of-range or degenerate indices.
    void validate() const
    {
        const int n = num_vertices();
        for (int t = 0; t < trilist.rows(); ++t)
        {
            const int a = trilist(t, 0), b = trilist(t, 1), c = trilist(t, 2);
            if (a < 0 || a >= n || b < 0 || b >= n || c < 0 || c >= n)
                throw std::invalid_argument("TriMesh: triangle " + std::to_string(t) +
                                            " references a vertex outside [0, N)");
            if (a == b || b == c || a == c)
                throw std::invalid_argument("TriMesh: triangle " + std::to_string(t) +
                                            " repeats a vertex index");
        }
    }
};

/// Flatten N x 3 vertices to the 3N vector [x1,y1,z1,...,xN,yN,zN].
inline Eigen::VectorXd mesh_to_vector(const TriMesh& mesh)
{
    Eigen::MatrixXd vt = mesh.vertices.transpose();
    return Eigen::Map<Eigen::VectorXd>(vt.data(), vt.size());
}

/// Inverse of mesh_to_vector for a given triangulation.
inline TriMesh vector_to_mesh(const Eigen::VectorXd& s, const Eigen::MatrixXi& trilist)
{
    if (s.size() % 3 != 0)
        throw std::invalid_argument("vector_to_mesh: length must be a multiple of 3");
    const int n = static_cast<int>(s.size() / 3);
    TriMesh mesh;
    mesh.vertices = Eigen::Map<const Eigen::Matrix<double, 3, Eigen::Dynamic>>(s.data(), 3, n).transpose();
    mesh.trilist = trilist;
    return mesh;
}

} // namespace morphfit

#endif /* MORPHFIT_CORE_MESH_HPP */

/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/io/mesh_io.hpp
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

#ifndef MORPHFIT_IO_MESH_IO_HPP
#define MORPHFIT_IO_MESH_IO_HPP

#include "morphfit/core/mesh.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace morphfit {
namespace io {

namespace detail {
inline void require(bool ok, const std::string& message)
{
    if (!ok)
        throw std::runtime_error(message);
}
} // namespace detail

/// ASCII OBJ writer: v records and 1-based f records only.
inline void write_obj(const std::string& path, const TriMesh& mesh)
{
    std::ofstream out(path);
    detail::require(out.good(), "write_obj: cannot open " + path);
    char line[128];
    for (int i = 0; i < mesh.num_vertices(); ++i)
    {
        std::snprintf(line, sizeof(line), "v %.17g %.17g %.17g\n", mesh.vertices(i, 0),
                      mesh.vertices(i, 1), mesh.vertices(i, 2));
        out << line;
    }
    for (int t = 0; t < mesh.num_triangles(); ++t)
        out << "f " << mesh.trilist(t, 0) + 1 << ' ' << mesh.trilist(t, 1) + 1 << ' '
            << mesh.trilist(t, 2) + 1 << '\n';
    detail::require(out.good(), "write_obj: write failed for " + path);
}

/// ASCII OBJ reader for triangle meshes (v/f records; other records ignored).
inline TriMesh read_obj(const std::string& path)
{
    std::ifstream in(path);
    detail::require(in.good(), "read_obj: cannot open " + path);
    std::vector<Eigen::Vector3d> verts;
    std::vector<Eigen::Vector3i> tris;
    std::string line;
    while (std::getline(in, line))
    {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "v")
        {
            Eigen::Vector3d v;
            ss >> v.x() >> v.y() >> v.z();
            detail::require(!ss.fail(), "read_obj: malformed vertex in " + path);
            verts.push_back(v);
        } else if (tag == "f")
        {
            // Face corners may carry /vt/vn suffixes; the vertex index leads.
            Eigen::Vector3i f;
            for (int k = 0; k < 3; ++k)
            {
                std::string corner;
                ss >> corner;
                detail::require(!corner.empty(), "read_obj: malformed face in " + path);
                f[k] = std::stoi(corner) - 1;
            }
            tris.push_back(f);
        }
    }
    TriMesh mesh;
    mesh.vertices.resize(verts.size(), 3);
    for (std::size_t i = 0; i < verts.size(); ++i)
        mesh.vertices.row(i) = verts[i];
    mesh.trilist.resize(tris.size(), 3);
    for (std::size_t t = 0; t < tris.size(); ++t)
        mesh.trilist.row(t) = tris[t];
    mesh.validate();
    return mesh;
}

/// Binary little-endian PLY writer with double vertex coordinates.
inline void write_ply(const std::string& path, const TriMesh& mesh)
{
    std::ofstream out(path, std::ios::binary);
    detail::require(out.good(), "write_ply: cannot open " + path);
    out << "ply\nformat binary_little_endian 1.0\n";
    out << "element vertex " << mesh.num_vertices() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "element face " << mesh.num_triangles() << "\n";
    out << "property list uchar int vertex_indices\n";
    out << "end_header\n";
    for (int i = 0; i < mesh.num_vertices(); ++i)
    {
        const double xyz[3] = {mesh.vertices(i, 0), mesh.vertices(i, 1), mesh.vertices(i, 2)};
        out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    }
    for (int t = 0; t < mesh.num_triangles(); ++t)
    {
        const std::uint8_t count = 3;
        const std::int32_t idx[3] = {mesh.trilist(t, 0), mesh.trilist(t, 1), mesh.trilist(t, 2)};
        out.write(reinterpret_cast<const char*>(&count), 1);
        out.write(reinterpret_cast<const char*>(idx), sizeof(idx));
    }
    detail::require(out.good(), "write_ply: write failed for " + path);
}

/// Binary little-endian PLY reader (float or double coordinates, triangles).
inline TriMesh read_ply(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    detail::require(in.good(), "read_ply: cannot open " + path);
    std::string line;
    std::getline(in, line);
    detail::require(line == "ply", "read_ply: not a ply file: " + path);

    int n_vertices = -1, n_faces = -1;
    bool doubles = false;
    std::string element;
    while (std::getline(in, line) && line != "end_header")
    {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "format")
        {
            std::string fmt;
            ss >> fmt;
            detail::require(fmt == "binary_little_endian",
                            "read_ply: only binary_little_endian is supported");
        } else if (tag == "element")
        {
            int count;
            ss >> element >> count;
            if (element == "vertex")
                n_vertices = count;
            else if (element == "face")
                n_faces = count;
        } else if (tag == "property" && element == "vertex")
        {
            std::string type;
            ss >> type;
            if (type == "double")
                doubles = true;
        }
    }
    detail::require(n_vertices >= 0 && n_faces >= 0, "read_ply: missing elements in " + path);

    TriMesh mesh;
    mesh.vertices.resize(n_vertices, 3);
    for (int i = 0; i < n_vertices; ++i)
        for (int k = 0; k < 3; ++k)
        {
            if (doubles)
            {
                double v;
                in.read(reinterpret_cast<char*>(&v), sizeof(v));
                mesh.vertices(i, k) = v;
            } else
            {
                float v;
                in.read(reinterpret_cast<char*>(&v), sizeof(v));
                mesh.vertices(i, k) = v;
            }
        }
    mesh.trilist.resize(n_faces, 3);
    for (int t = 0; t < n_faces; ++t)
    {
        std::uint8_t count;
        in.read(reinterpret_cast<char*>(&count), 1);
        detail::require(count == 3, "read_ply: only triangle faces are supported");
        std::int32_t idx[3];
        in.read(reinterpret_cast<char*>(idx), sizeof(idx));
        mesh.trilist(t, 0) = idx[0];
        mesh.trilist(t, 1) = idx[1];
        mesh.trilist(t, 2) = idx[2];
    }
    detail::require(in.good(), "read_ply: truncated file " + path);
    mesh.validate();
    return mesh;
}

} // namespace io
} // namespace morphfit

#endif /* MORPHFIT_IO_MESH_IO_HPP */

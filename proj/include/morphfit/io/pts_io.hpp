/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/io/pts_io.hpp
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

#ifndef MORPHFIT_IO_PTS_IO_HPP
#define MORPHFIT_IO_PTS_IO_HPP

#include <Eigen/Core>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace morphfit {
namespace io {

/**
 * Reads iBUG pts landmarks (version/n_points header, brace-delimited x y
 * lines, 1-based coordinates) into the interleaved 0-based vector
 * [x1, y1, ..., xL, yL].
 */
inline Eigen::VectorXd read_pts(const std::string& path)
{
    std::ifstream in(path);
    if (!in.good())
        throw std::runtime_error("read_pts: cannot open " + path);
    std::string line;
    int n_points = -1;
    while (std::getline(in, line))
    {
        if (line.rfind("n_points:", 0) == 0)
            n_points = std::stoi(line.substr(9));
        if (line.find('{') != std::string::npos)
            break;
    }
    if (n_points < 0)
        throw std::runtime_error("read_pts: missing n_points in " + path);

    Eigen::VectorXd out(2 * n_points);
    for (int i = 0; i < n_points; ++i)
    {
        if (!std::getline(in, line))
            throw std::runtime_error("read_pts: truncated file " + path);
        std::istringstream ss(line);
        double x, y;
        ss >> x >> y;
        if (ss.fail())
            throw std::runtime_error("read_pts: malformed point in " + path);
        out[2 * i] = x - 1.0;
        out[2 * i + 1] = y - 1.0;
    }
    return out;
}

/// Writes landmarks in iBUG pts format (1-based on disk).
inline void write_pts(const std::string& path, const Eigen::VectorXd& points)
{
    if (points.size() % 2 != 0)
        throw std::invalid_argument("write_pts: interleaved x y vector required");
    std::ofstream out(path);
    if (!out.good())
        throw std::runtime_error("write_pts: cannot open " + path);
    const int n = static_cast<int>(points.size() / 2);
    out << "version: 1\nn_points: " << n << "\n{\n";
    char line[80];
    for (int i = 0; i < n; ++i)
    {
        std::snprintf(line, sizeof(line), "%.17g %.17g\n", points[2 * i] + 1.0,
                      points[2 * i + 1] + 1.0);
        out << line;
    }
    out << "}\n";
    if (!out.good())
        throw std::runtime_error("write_pts: write failed for " + path);
}

} // namespace io
} // namespace morphfit

#endif /* MORPHFIT_IO_PTS_IO_HPP */

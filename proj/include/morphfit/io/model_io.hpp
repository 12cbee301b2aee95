/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/io/model_io.hpp
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

#ifndef MORPHFIT_IO_MODEL_IO_HPP
#define MORPHFIT_IO_MODEL_IO_HPP

#include "morphfit/model/shape_model.hpp"
#include "morphfit/model/texture_model.hpp"

#include <json.hpp>

#include <Eigen/Core>

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace morphfit {
namespace io {

/**
 * Model container format "morphfit-model/1": a single-line JSON header
 * terminated by '\n', followed by raw little-endian float64 arrays
 * (column-major) in the order the header declares them.
 */
inline constexpr const char* k_model_format = "morphfit-model/1";

namespace detail {

inline void write_array(std::ostream& out, const Eigen::MatrixXd& m)
{
    // Eigen matrices are column-major; dump the buffer as-is.
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(double) * m.size()));
}

inline Eigen::MatrixXd read_array(std::istream& in, Eigen::Index rows, Eigen::Index cols,
                                  const std::string& name)
{
    Eigen::MatrixXd m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
    if (!in.good())
        throw std::runtime_error("model container: truncated array '" + name + "'");
    return m;
}

inline nlohmann::json array_decl(const std::string& name, Eigen::Index rows, Eigen::Index cols)
{
    return nlohmann::json{{"name", name}, {"rows", rows}, {"cols", cols}};
}

struct Header
{
    nlohmann::json json;
    std::map<std::string, std::pair<Eigen::Index, Eigen::Index>> arrays;
};

inline Header read_header(std::istream& in, const std::string& path)
{
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("model container: missing header in " + path);
    Header h;
    h.json = nlohmann::json::parse(line);
    if (h.json.value("format", "") != k_model_format)
        throw std::runtime_error("model container: unsupported format in " + path);
    for (const auto& a : h.json.at("arrays"))
        h.arrays[a.at("name")] = {a.at("rows").get<Eigen::Index>(),
                                  a.at("cols").get<Eigen::Index>()};
    return h;
}

} // namespace detail

inline void save_shape_model(const std::string& path, const model::ShapeModel& m)
{
    std::ofstream out(path, std::ios::binary);
    if (!out.good())
        throw std::runtime_error("save_shape_model: cannot open " + path);

    nlohmann::json header;
    header["format"] = k_model_format;
    header["kind"] = "shape";
    header["dimension"] = m.pca.dimension();
    header["components"] = m.pca.num_components();
    header["landmark_vertex_ids"] = m.landmark_vertex_ids;
    header["order"] = "column-major";
    header["arrays"] = nlohmann::json::array(
        {detail::array_decl("mean", m.pca.mean.size(), 1),
         detail::array_decl("basis", m.pca.basis.rows(), m.pca.basis.cols()),
         detail::array_decl("eigenvalues", m.pca.eigenvalues.size(), 1),
         detail::array_decl("trilist", m.template_trilist.rows(), 3)});
    out << header.dump() << '\n';

    detail::write_array(out, m.pca.mean);
    detail::write_array(out, m.pca.basis);
    detail::write_array(out, m.pca.eigenvalues);
    detail::write_array(out, m.template_trilist.cast<double>());
    if (!out.good())
        throw std::runtime_error("save_shape_model: write failed for " + path);
}

inline model::ShapeModel load_shape_model(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in.good())
        throw std::runtime_error("load_shape_model: cannot open " + path);
    const auto header = detail::read_header(in, path);
    if (header.json.value("kind", "") != "shape")
        throw std::runtime_error("load_shape_model: not a shape model: " + path);

    model::ShapeModel m;
    for (const auto& a : header.json.at("arrays"))
    {
        const std::string name = a.at("name");
        const auto [rows, cols] = header.arrays.at(name);
        Eigen::MatrixXd data = detail::read_array(in, rows, cols, name);
        if (name == "mean")
            m.pca.mean = data.col(0);
        else if (name == "basis")
            m.pca.basis = std::move(data);
        else if (name == "eigenvalues")
            m.pca.eigenvalues = data.col(0);
        else if (name == "trilist")
            m.template_trilist = data.cast<int>();
    }
    m.landmark_vertex_ids = header.json.at("landmark_vertex_ids").get<std::vector<int>>();
    m.validate();
    return m;
}

inline void save_texture_model(const std::string& path, const model::TextureModel& m)
{
    std::ofstream out(path, std::ios::binary);
    if (!out.good())
        throw std::runtime_error("save_texture_model: cannot open " + path);

    nlohmann::json header;
    header["format"] = k_model_format;
    header["kind"] = "texture";
    header["dimension"] = m.pca.dimension();
    header["components"] = m.pca.num_components();
    header["channels"] = m.channels;
    header["order"] = "column-major";
    header["arrays"] = nlohmann::json::array(
        {detail::array_decl("mean", m.pca.mean.size(), 1),
         detail::array_decl("basis", m.pca.basis.rows(), m.pca.basis.cols()),
         detail::array_decl("eigenvalues", m.pca.eigenvalues.size(), 1)});
    out << header.dump() << '\n';

    detail::write_array(out, m.pca.mean);
    detail::write_array(out, m.pca.basis);
    detail::write_array(out, m.pca.eigenvalues);
    if (!out.good())
        throw std::runtime_error("save_texture_model: write failed for " + path);
}

inline model::TextureModel load_texture_model(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in.good())
        throw std::runtime_error("load_texture_model: cannot open " + path);
    const auto header = detail::read_header(in, path);
    if (header.json.value("kind", "") != "texture")
        throw std::runtime_error("load_texture_model: not a texture model: " + path);

    model::TextureModel m;
    m.channels = header.json.at("channels").get<int>();
    for (const auto& a : header.json.at("arrays"))
    {
        const std::string name = a.at("name");
        const auto [rows, cols] = header.arrays.at(name);
        Eigen::MatrixXd data = detail::read_array(in, rows, cols, name);
        if (name == "mean")
            m.pca.mean = data.col(0);
        else if (name == "basis")
            m.pca.basis = std::move(data);
        else if (name == "eigenvalues")
            m.pca.eigenvalues = data.col(0);
    }
    m.validate();
    return m;
}

} // namespace io
} // namespace morphfit

#endif /* MORPHFIT_IO_MODEL_IO_HPP */

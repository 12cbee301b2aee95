/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/io/camera_io.hpp
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

#ifndef MORPHFIT_IO_CAMERA_IO_HPP
#define MORPHFIT_IO_CAMERA_IO_HPP

#include "morphfit/camera/camera.hpp"

#include <json.hpp>

namespace morphfit {
namespace io {

/// Camera parameters as {f, q:[4], t:[3], principal_point:[2]}.
inline nlohmann::json camera_to_json(const camera::CameraParams& c)
{
    return nlohmann::json{{"f", c.f},
                          {"q", {c.q[0], c.q[1], c.q[2], c.q[3]}},
                          {"t", {c.t[0], c.t[1], c.t[2]}},
                          {"principal_point", {c.principal_point[0], c.principal_point[1]}}};
}

inline camera::CameraParams camera_from_json(const nlohmann::json& j)
{
    camera::CameraParams c;
    c.f = j.at("f").get<double>();
    for (int i = 0; i < 4; ++i)
        c.q[i] = j.at("q").at(i).get<double>();
    for (int i = 0; i < 3; ++i)
        c.t[i] = j.at("t").at(i).get<double>();
    for (int i = 0; i < 2; ++i)
        c.principal_point[i] = j.at("principal_point").at(i).get<double>();
    return c;
}

} // namespace io
} // namespace morphfit

#endif /* MORPHFIT_IO_CAMERA_IO_HPP */

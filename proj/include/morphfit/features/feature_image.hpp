/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/features/feature_image.hpp
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

#ifndef MORPHFIT_FEATURES_FEATURE_IMAGE_HPP
#define MORPHFIT_FEATURES_FEATURE_IMAGE_HPP

#include "morphfit/core/image.hpp"

#include <string>

namespace morphfit {
namespace features {

/// Dense C-channel feature map of an image, tagged with its descriptor name.
struct FeatureImage
{
    Image data;
    std::string descriptor_name;

    int height() const { return data.height(); }
    int width() const { return data.width(); }
    int channels() const { return data.channels(); }
};

} // namespace features
} // namespace morphfit

#endif /* MORPHFIT_FEATURES_FEATURE_IMAGE_HPP */

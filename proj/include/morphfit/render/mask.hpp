/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/render/mask.hpp
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

#ifndef MORPHFIT_RENDER_MASK_HPP
#define MORPHFIT_RENDER_MASK_HPP

#include <vector>

namespace morphfit {
namespace render {

/// Per-vertex observation mask; true marks a vertex as observed/usable.
struct ObservationMask
{
    std::vector<bool> visible;

    ObservationMask() = default;
    explicit ObservationMask(int n, bool value = false) : visible(n, value) {}

    int size() const { return static_cast<int>(visible.size()); }

    int count() const
    {
        int c = 0;
        for (bool b : visible)
            c += b ? 1 : 0;
        return c;
    }

    std::vector<int> indices() const
    {
        std::vector<int> out;
        out.reserve(visible.size());
        for (int i = 0; i < size(); ++i)
            if (visible[i])
                out.push_back(i);
        return out;
    }
};

/// Intersection of two masks of equal length.
inline ObservationMask mask_and(const ObservationMask& a, const ObservationMask& b)
{
    ObservationMask out(a.size());
    for (int i = 0; i < a.size(); ++i)
        out.visible[i] = a.visible[i] && b.visible[i];
    return out;
}

} // namespace render
} // namespace morphfit

#endif /* MORPHFIT_RENDER_MASK_HPP */

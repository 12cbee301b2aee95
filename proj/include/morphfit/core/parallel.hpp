/*
 * morphfit - statistical 3D morphable models and Gauss-Newton fitting.
 *
 * File: include/morphfit/core/parallel.hpp
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

#ifndef MORPHFIT_CORE_PARALLEL_HPP
#define MORPHFIT_CORE_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace morphfit {

/// Worker count: hardware concurrency capped by the MORPHFIT_THREADS env var.
inline int max_threads()
{
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0)
        n = 1;
    if (const char* env = std::getenv("MORPHFIT_THREADS"))
    {
        const int cap = std::atoi(env);
        if (cap > 0)
            n = std::min(n, cap);
    }
    return n;
}

/**
 * Runs fn(i) for i in [0, count). Iterations must be independent; each index
 * is processed exactly once, so results are identical to the serial loop.
 */
template <typename Fn>
void parallel_for(int count, Fn&& fn)
{
    const int workers = std::min(max_threads(), count);
    if (workers <= 1)
    {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w)
    {
        const int begin = w * chunk;
        const int end = std::min(begin + chunk, count);
        if (begin >= end)
            break;
        pool.emplace_back([begin, end, &fn] {
            for (int i = begin; i < end; ++i)
                fn(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace morphfit

#endif /* MORPHFIT_CORE_PARALLEL_HPP */

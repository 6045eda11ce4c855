/*
 * Copyright 2026 The trajkanon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TRAJKANON_PARALLEL_HPP
#define TRAJKANON_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trajkanon {

/// Number of worker threads a `threads` knob resolves to (0 = runtime default).
inline int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

/// Runs fn(i) for i in [0, n) on up to `threads` threads with dynamic
/// scheduling. The first exception thrown by any iteration is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const long count = static_cast<long>(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(resolve_threads(threads))
#endif
    for (long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    (void)threads;
    if (failure) std::rethrow_exception(failure);
}

}  // namespace trajkanon

#endif  // TRAJKANON_PARALLEL_HPP

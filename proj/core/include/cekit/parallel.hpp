/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CEKIT_PARALLEL_HPP_
#define CEKIT_PARALLEL_HPP_

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace cekit {

// Worker count for parallel solver restarts.  Capped by the CEKIT_THREADS
// environment variable when set.
int worker_count();

// Runs body(i) for i in [0, n) on the worker pool.  Results must be written
// to pre-sized slots indexed by i; the reduction after the join is then
// deterministic regardless of scheduling.  Exceptions are rethrown once.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace cekit

#endif  // CEKIT_PARALLEL_HPP_

// Copyright 2026 The Smoothmart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Deterministic block-parallel loops. Work is cut into blocks whose
// boundaries depend only on the problem size, so per-block results (and
// any in-order combination of them) are identical for every worker count.

#ifndef SMOOTHMART_PARALLEL_H_
#define SMOOTHMART_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace smoothmart {

// Process-wide worker count; values < 1 select 1.
void SetWorkerCount(int workers);
int WorkerCount();

inline constexpr std::size_t kDefaultBlockSize = 1024;

std::size_t BlockCount(std::size_t n, std::size_t block_size);

// Calls body(block, begin, end) for every block of [0, n). Blocks are
// distributed over WorkerCount() threads; the first exception thrown by
// any body is rethrown after all workers finish.
void ParallelBlocks(
    std::size_t n, std::size_t block_size,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace smoothmart

#endif  // SMOOTHMART_PARALLEL_H_

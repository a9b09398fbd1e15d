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


#include "smoothmart/parallel.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace smoothmart {
namespace {

std::atomic<int> g_workers{1};

}  // namespace

void SetWorkerCount(int workers) { g_workers = std::max(1, workers); }

int WorkerCount() { return g_workers; }

std::size_t BlockCount(std::size_t n, std::size_t block_size) {
  return (n + block_size - 1) / block_size;
}

void ParallelBlocks(
    std::size_t n, std::size_t block_size,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t blocks = BlockCount(n, block_size);
  auto run = [&](std::size_t b) {
    const std::size_t begin = b * block_size;
    body(b, begin, std::min(n, begin + block_size));
  };
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(WorkerCount()), blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  // The error of the lowest failing block wins, so the reported failure
  // does not depend on scheduling.
  std::exception_ptr error;
  std::size_t error_block = blocks;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      {
        std::lock_guard<std::mutex> lock(error_mu);
        if (b > error_block) continue;
      }
      try {
        run(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (b < error_block) {
          error_block = b;
          error = std::current_exception();
        }
        next = blocks;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace smoothmart

// Copyright 2026 The qsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsync/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace qsync {
namespace {

thread_local bool t_inside_worker = false;

std::atomic<int>& budget() {
  static std::atomic<int> workers{default_workers()};
  return workers;
}

}  // namespace

std::optional<int> env_worker_cap() {
  const char* env = std::getenv(kWorkerEnvVar);
  if (env == nullptr) return std::nullopt;
  try {
    const int cap = std::stoi(env);
    if (cap >= 1) return cap;
  } catch (const std::exception&) {
    // malformed value: no cap
  }
  return std::nullopt;
}

int default_workers() {
  const int n = int(std::max(1u, std::thread::hardware_concurrency()));
  return std::min(n, env_worker_cap().value_or(n));
}

int max_workers() { return budget().load(); }

void set_max_workers(int workers) { budget().store(std::max(1, workers)); }

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t width =
      std::min<std::size_t>(count, std::size_t(max_workers()));
  if (width <= 1 || t_inside_worker) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;

  auto worker = [&] {
    t_inside_worker = true;
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) break;
      const std::size_t i = next.fetch_add(1);
      if (i >= count) break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
    t_inside_worker = false;
  };

  {
    std::vector<std::jthread> threads;
    threads.reserve(width);
    for (std::size_t t = 0; t < width; ++t) threads.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace qsync

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

#pragma once

// Process-wide worker budget. Nested parallel_for calls made from inside a
// worker run inline, so nesting never exceeds the global budget.

#include <cstddef>
#include <functional>
#include <optional>

namespace qsync {

// Name of the environment variable that caps the worker count.
inline constexpr const char* kWorkerEnvVar = "QSYNC_MAX_WORKERS";

// Hardware concurrency, capped by QSYNC_MAX_WORKERS when set.
// Cap from the environment variable, if set to a positive integer.
std::optional<int> env_worker_cap();

int default_workers();

int max_workers();
void set_max_workers(int workers);

// Calls body(i) for i in [0, count). Order of execution is unspecified;
// callers write results into index-addressed slots. If any call throws, the
// remaining indices are skipped and the exception from the lowest failing
// index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace qsync

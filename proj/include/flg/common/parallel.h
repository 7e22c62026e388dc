// Copyright 2026 The FLG Authors.
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

#ifndef FLG_COMMON_PARALLEL_H_
#define FLG_COMMON_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace flg {

// Worker count from FLG_THREADS (0 or unset = hardware concurrency).
size_t ThreadCount();

// Runs body(i) for i in [0, n) on up to ThreadCount() threads. Each index is
// executed exactly once; the first exception thrown by any body is rethrown
// on the calling thread after all workers join.
void ParallelFor(size_t n, const std::function<void(size_t)>& body);

}  // namespace flg

#endif  // FLG_COMMON_PARALLEL_H_

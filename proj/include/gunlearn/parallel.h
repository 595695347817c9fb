//
// Copyright 2026 The gunlearn Authors
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
//

#ifndef GUNLEARN_PARALLEL_H_
#define GUNLEARN_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace gunlearn {

// Worker count from GUNLEARN_THREADS, defaulting to 1.
int ThreadCount();

// Runs fn(i) for i in [0, count) on up to ThreadCount() threads. The first
// exception thrown by any task is rethrown after all workers join.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace gunlearn

#endif  // GUNLEARN_PARALLEL_H_

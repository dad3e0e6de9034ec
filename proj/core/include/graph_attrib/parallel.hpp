// Copyright 2026  The graph-attrib Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef GRAPH_ATTRIB_PARALLEL_HPP_
#define GRAPH_ATTRIB_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace graph_attrib {

/// Upper bound on worker threads. Initialized from the GRAPH_ATTRIB_THREADS
/// environment variable when set, else from std::thread::hardware_concurrency.
std::size_t max_threads();

/// Overrides the thread cap for the rest of the process (0 restores the
/// environment/hardware default).
void set_max_threads(std::size_t n);

/// Calls body(i) for every i in [0, count), splitting the range into
/// contiguous blocks across at most max_threads() threads. Each index is
/// visited exactly once; callers write results into slots keyed by i, so the
/// outcome never depends on scheduling. The first exception thrown by any
/// body is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

}  // namespace graph_attrib

#endif  // GRAPH_ATTRIB_PARALLEL_HPP_

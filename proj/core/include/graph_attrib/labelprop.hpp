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

#ifndef GRAPH_ATTRIB_LABELPROP_HPP_
#define GRAPH_ATTRIB_LABELPROP_HPP_

#include <span>
#include <vector>

#include "graph_attrib/graph.hpp"
#include "graph_attrib/segments.hpp"
#include "graph_attrib/types.hpp"

namespace graph_attrib {

// N x C per-node class scores. Rows [0, labeled_count) belong to profile
// nodes. `needs_fallback[i]` marks unlabeled rows that received no label mass
// (isolated nodes, or nodes not yet reached within the iteration budget).
struct SoftLabelMatrix {
  Matrix scores;
  Index labeled_count = 0;
  std::vector<bool> needs_fallback;

  Index rows() const { return scores.rows(); }
  Index classes() const { return scores.cols(); }
};

struct LpConfig {
  // Weight of the propagated term; must be in (0, 1).
  double alpha = 0.95;
  // Fixed number of update steps. Convergence is never tested.
  int iterations = 20;
  // Reset profile rows to their one-hot labels after every step.
  bool freeze_labeled = true;

  void validate() const;
};

// One-hot rows for profiles, zero rows for tests.
SoftLabelMatrix init_labels(const SegmentSet &set);

// alpha * S * F + (1 - alpha) * F0, then (if frozen) rows < M copied from F0.
SoftLabelMatrix lp_step(const SoftLabelMatrix &current, const NormalizedOperator &op,
                        const SoftLabelMatrix &initial, const LpConfig &config);

// Applies lp_step config.iterations times starting from init_labels(set) and
// flags zero unlabeled rows in needs_fallback.
SoftLabelMatrix run_lp(const SegmentSet &set, const AffinityGraph &graph,
                       const LpConfig &config);

// Unfrozen fixed point (1 - alpha) (I - alpha S)^-1 F0 by a direct solve.
// Reference for testing run_lp; O(N^3).
SoftLabelMatrix lp_closed_form(const SegmentSet &set, const AffinityGraph &graph,
                               double alpha);

// Row argmax, ties to the lowest class. When `fallback` is non-empty, rows
// flagged in needs_fallback take fallback[row] instead.
std::vector<ClassIndex> predict_argmax(const SoftLabelMatrix &labels,
                                       std::span<const ClassIndex> fallback = {});

// Full LP classifier: run_lp + argmax, with the cosine baseline resolving
// flagged rows. Returns one class per node.
std::vector<ClassIndex> classify_lp(const SegmentSet &set, const AffinityGraph &graph,
                                    const LpConfig &config);

}  // namespace graph_attrib

#endif  // GRAPH_ATTRIB_LABELPROP_HPP_

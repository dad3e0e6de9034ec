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

#ifndef GRAPH_ATTRIB_GRAPH_HPP_
#define GRAPH_ATTRIB_GRAPH_HPP_

#include <iosfwd>
#include <vector>

#include "graph_attrib/segments.hpp"
#include "graph_attrib/types.hpp"

namespace graph_attrib {

// How pairs of segments are connected.
//  - FullyConnected: every pair.
//  - KNearest: a pair is kept when either node is among the other's
//    `neighbors` most cosine-similar nodes (union kNN).
//  - Threshold: a pair is kept iff its raw cosine similarity exceeds
//    `threshold`. The edge weight is still the rescaled (1 + cos) / 2.
struct GraphConstructionConfig {
  enum class Strategy { FullyConnected, KNearest, Threshold };

  Strategy strategy = Strategy::Threshold;
  double threshold = 0.6;
  int neighbors = 10;

  static GraphConstructionConfig fully_connected();
  static GraphConstructionConfig k_nearest(int k);
  static GraphConstructionConfig thresholded(double tau);

  // Throws Error for tau outside [-1, 1) or non-positive k.
  void validate() const;
};

// Symmetric, zero-diagonal affinity matrix with entries in [0, 1].
struct AffinityGraph {
  Matrix affinity;
  // Number of unordered pairs with positive weight.
  Index kept_edges = 0;

  Index node_count() const { return affinity.rows(); }
  Vector degrees() const { return affinity.rowwise().sum(); }
};

enum class OperatorFlavor {
  LabelPropagation,  // D^-1/2 A D^-1/2
  Gcn,               // (D+I)^-1/2 (A+I) (D+I)^-1/2
};

struct NormalizedOperator {
  Matrix matrix;
  OperatorFlavor flavor = OperatorFlavor::LabelPropagation;
};

// dot(a, b) / (|a| |b|), clamped to [-1, 1].
double cosine(const Vector &a, const Vector &b);

AffinityGraph build_affinity(const Matrix &features,
                             const GraphConstructionConfig &config);
AffinityGraph build_affinity(const SegmentSet &set,
                             const GraphConstructionConfig &config);

// Nodes with zero degree. Their rows and columns of the LP operator are zero.
std::vector<bool> isolated_nodes(const AffinityGraph &graph);

NormalizedOperator sym_normalize(const AffinityGraph &graph);
NormalizedOperator gcn_normalize(const AffinityGraph &graph);

// One "i j weight" line per edge with i < j, weight printed with 17
// significant digits.
void write_edge_list(const AffinityGraph &graph, std::ostream &out);

}  // namespace graph_attrib

#endif  // GRAPH_ATTRIB_GRAPH_HPP_

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

#ifndef GRAPH_ATTRIB_BASELINE_HPP_
#define GRAPH_ATTRIB_BASELINE_HPP_

#include <vector>

#include "graph_attrib/segments.hpp"
#include "graph_attrib/types.hpp"

namespace graph_attrib {

// One mean profile vector per speaker; row c of `centroids` is class c.
struct CentroidModel {
  Matrix centroids;

  int num_classes() const { return static_cast<int>(centroids.rows()); }
};

CentroidModel fit_centroids(const SegmentSet &set);

// Class whose centroid has the highest cosine similarity; ties go to the
// lowest class index.
ClassIndex classify_cosine(const CentroidModel &model, const Vector &vector);

// classify_cosine for every node of the set (profiles included).
std::vector<ClassIndex> classify_all_cosine(const CentroidModel &model,
                                            const SegmentSet &set);

}  // namespace graph_attrib

#endif  // GRAPH_ATTRIB_BASELINE_HPP_

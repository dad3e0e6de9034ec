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

#include "graph_attrib/baseline.hpp"

#include "graph_attrib/graph.hpp"

namespace graph_attrib {

CentroidModel fit_centroids(const SegmentSet &set) {
  const int classes = set.num_classes();
  Matrix sums = Matrix::Zero(classes, set.emb_dim());
  std::vector<int> counts(classes, 0);
  for (Index i = 0; i < set.profile_count(); ++i) {
    const ClassIndex c = *set[i].speaker;
    sums.row(c) += set[i].vector.transpose();
    ++counts[c];
  }
  for (int c = 0; c < classes; ++c) sums.row(c) /= static_cast<double>(counts[c]);
  return {std::move(sums)};
}

ClassIndex classify_cosine(const CentroidModel &model, const Vector &vector) {
  if (vector.size() != model.centroids.cols()) throw Error("classify_cosine: dimension mismatch");
  if (vector.norm() == 0.0) throw Error("classify_cosine: zero-norm input");
  ClassIndex best = 0;
  double best_score = -2.0;
  for (int c = 0; c < model.num_classes(); ++c) {
    // A centroid can cancel to zero only with exactly opposing profiles.
    const Vector centroid = model.centroids.row(c).transpose();
    const double score = centroid.norm() == 0.0 ? 0.0 : cosine(centroid, vector);
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }
  return best;
}

std::vector<ClassIndex> classify_all_cosine(const CentroidModel &model,
                                            const SegmentSet &set) {
  std::vector<ClassIndex> out;
  out.reserve(static_cast<std::size_t>(set.size()));
  for (const Segment &s : set.segments()) out.push_back(classify_cosine(model, s.vector));
  return out;
}

}  // namespace graph_attrib

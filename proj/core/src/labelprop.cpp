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

#include "graph_attrib/labelprop.hpp"

#include <string>

#include "graph_attrib/baseline.hpp"

namespace graph_attrib {

void LpConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error("lp.alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (iterations < 0) {
    throw Error("lp.iterations must be non-negative, got " + std::to_string(iterations));
  }
}

SoftLabelMatrix init_labels(const SegmentSet &set) {
  SoftLabelMatrix f;
  f.scores = Matrix::Zero(set.size(), set.num_classes());
  f.labeled_count = set.profile_count();
  f.needs_fallback.assign(static_cast<std::size_t>(set.size()), false);
  for (Index i = 0; i < set.profile_count(); ++i) f.scores(i, *set[i].speaker) = 1.0;
  return f;
}

SoftLabelMatrix lp_step(const SoftLabelMatrix &current, const NormalizedOperator &op,
                        const SoftLabelMatrix &initial, const LpConfig &config) {
  if (op.flavor != OperatorFlavor::LabelPropagation) {
    throw Error("lp_step: operator must be the D^-1/2 A D^-1/2 flavor");
  }
  if (current.scores.rows() != initial.scores.rows() ||
      current.scores.cols() != initial.scores.cols() ||
      op.matrix.rows() != current.scores.rows() || op.matrix.cols() != op.matrix.rows()) {
    throw Error("lp_step: shape mismatch");
  }
  SoftLabelMatrix next = current;
  next.scores.noalias() = config.alpha * (op.matrix * current.scores);
  next.scores += (1.0 - config.alpha) * initial.scores;
  if (config.freeze_labeled) {
    next.scores.topRows(initial.labeled_count) = initial.scores.topRows(initial.labeled_count);
  }
  return next;
}

namespace {

void flag_empty_rows(SoftLabelMatrix &f) {
  f.needs_fallback.assign(static_cast<std::size_t>(f.rows()), false);
  for (Index i = f.labeled_count; i < f.rows(); ++i) {
    f.needs_fallback[static_cast<std::size_t>(i)] = (f.scores.row(i).array() == 0.0).all();
  }
}

void check_graph_matches(const SegmentSet &set, const AffinityGraph &graph) {
  if (graph.node_count() != set.size()) {
    throw Error("label propagation: graph has " + std::to_string(graph.node_count()) +
                " nodes but the set has " + std::to_string(set.size()));
  }
}

}  // namespace

SoftLabelMatrix run_lp(const SegmentSet &set, const AffinityGraph &graph,
                       const LpConfig &config) {
  config.validate();
  check_graph_matches(set, graph);
  const NormalizedOperator s = sym_normalize(graph);
  const SoftLabelMatrix initial = init_labels(set);
  SoftLabelMatrix f = initial;
  for (int t = 0; t < config.iterations; ++t) f = lp_step(f, s, initial, config);
  flag_empty_rows(f);
  return f;
}

SoftLabelMatrix lp_closed_form(const SegmentSet &set, const AffinityGraph &graph,
                               double alpha) {
  LpConfig check;
  check.alpha = alpha;
  check.validate();
  check_graph_matches(set, graph);
  const NormalizedOperator s = sym_normalize(graph);
  const SoftLabelMatrix initial = init_labels(set);
  const Index n = set.size();
  const Matrix system = Matrix::Identity(n, n) - alpha * s.matrix;
  SoftLabelMatrix f = initial;
  f.scores = system.partialPivLu().solve((1.0 - alpha) * initial.scores);
  if (!f.scores.allFinite()) throw Error("lp_closed_form: singular system");
  flag_empty_rows(f);
  return f;
}

std::vector<ClassIndex> predict_argmax(const SoftLabelMatrix &labels,
                                       std::span<const ClassIndex> fallback) {
  if (!fallback.empty() && static_cast<Index>(fallback.size()) != labels.rows()) {
    throw Error("predict_argmax: fallback size does not match the number of rows");
  }
  std::vector<ClassIndex> out(static_cast<std::size_t>(labels.rows()));
  for (Index i = 0; i < labels.rows(); ++i) {
    const auto row = static_cast<std::size_t>(i);
    if (!fallback.empty() && row < labels.needs_fallback.size() && labels.needs_fallback[row]) {
      out[row] = fallback[row];
      continue;
    }
    Index best = 0;
    labels.scores.row(i).maxCoeff(&best);  // first maximum wins
    out[row] = static_cast<ClassIndex>(best);
  }
  return out;
}

std::vector<ClassIndex> classify_lp(const SegmentSet &set, const AffinityGraph &graph,
                                    const LpConfig &config) {
  const SoftLabelMatrix f = run_lp(set, graph, config);
  const std::vector<ClassIndex> fallback = classify_all_cosine(fit_centroids(set), set);
  return predict_argmax(f, fallback);
}

}  // namespace graph_attrib

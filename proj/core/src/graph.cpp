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

#include "graph_attrib/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "graph_attrib/parallel.hpp"

namespace graph_attrib {

GraphConstructionConfig GraphConstructionConfig::fully_connected() {
  GraphConstructionConfig c;
  c.strategy = Strategy::FullyConnected;
  return c;
}

GraphConstructionConfig GraphConstructionConfig::k_nearest(int k) {
  GraphConstructionConfig c;
  c.strategy = Strategy::KNearest;
  c.neighbors = k;
  return c;
}

GraphConstructionConfig GraphConstructionConfig::thresholded(double tau) {
  GraphConstructionConfig c;
  c.strategy = Strategy::Threshold;
  c.threshold = tau;
  return c;
}

void GraphConstructionConfig::validate() const {
  switch (strategy) {
    case Strategy::Threshold:
      if (!(threshold >= -1.0 && threshold < 1.0)) {
        throw Error("graph.threshold must lie in [-1, 1), got " + std::to_string(threshold));
      }
      break;
    case Strategy::KNearest:
      if (neighbors <= 0) {
        throw Error("graph.neighbors must be positive, got " + std::to_string(neighbors));
      }
      break;
    case Strategy::FullyConnected:
      break;
  }
}

double cosine(const Vector &a, const Vector &b) {
  if (a.size() != b.size()) throw Error("cosine: dimension mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw Error("cosine: zero-norm input");
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

namespace {

// Upper triangle of the raw cosine matrix, mirrored so that the result is
// bitwise symmetric. Diagonal left at zero; it is never read.
Matrix pairwise_cosine(const Matrix &x) {
  const Index n = x.rows();
  Vector norms = x.rowwise().norm();
  for (Index i = 0; i < n; ++i) {
    if (!(norms[i] > 0.0) || !std::isfinite(norms[i])) {
      throw Error("build_affinity: row " + std::to_string(i) + " has zero or non-finite norm");
    }
  }
  Matrix cos = Matrix::Zero(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const auto i = static_cast<Index>(row);
    for (Index j = i + 1; j < n; ++j) {
      cos(i, j) = std::clamp(x.row(i).dot(x.row(j)) / (norms[i] * norms[j]), -1.0, 1.0);
    }
  });
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) cos(j, i) = cos(i, j);
  }
  return cos;
}

}  // namespace

AffinityGraph build_affinity(const Matrix &features,
                             const GraphConstructionConfig &config) {
  config.validate();
  const Index n = features.rows();
  if (n < 2) throw Error("build_affinity: need at least 2 nodes");

  const Matrix cos = pairwise_cosine(features);

  // keep(i, j) for i < j.
  std::vector<char> keep(static_cast<std::size_t>(n * n), 0);
  auto mark = [&](Index i, Index j) {
    if (i > j) std::swap(i, j);
    keep[static_cast<std::size_t>(i * n + j)] = 1;
  };
  using Strategy = GraphConstructionConfig::Strategy;
  switch (config.strategy) {
    case Strategy::FullyConnected:
      for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) mark(i, j);
      break;
    case Strategy::Threshold:
      for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
          if (cos(i, j) > config.threshold) mark(i, j);
      break;
    case Strategy::KNearest: {
      const Index k = std::min<Index>(config.neighbors, n - 1);
      std::vector<Index> order(static_cast<std::size_t>(n - 1));
      for (Index i = 0; i < n; ++i) {
        std::size_t slot = 0;
        for (Index j = 0; j < n; ++j)
          if (j != i) order[slot++] = j;
        // Most similar first; ties go to the lower index.
        std::partial_sort(order.begin(), order.begin() + k, order.end(),
                          [&](Index a, Index b) {
                            if (cos(i, a) != cos(i, b)) return cos(i, a) > cos(i, b);
                            return a < b;
                          });
        for (Index t = 0; t < k; ++t) mark(i, order[static_cast<std::size_t>(t)]);
      }
      break;
    }
  }

  AffinityGraph graph;
  graph.affinity = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (!keep[static_cast<std::size_t>(i * n + j)]) continue;
      const double w = (1.0 + cos(i, j)) / 2.0;
      graph.affinity(i, j) = w;
      graph.affinity(j, i) = w;
      if (w > 0.0) ++graph.kept_edges;
    }
  }
  return graph;
}

AffinityGraph build_affinity(const SegmentSet &set,
                             const GraphConstructionConfig &config) {
  return build_affinity(set.features(), config);
}

std::vector<bool> isolated_nodes(const AffinityGraph &graph) {
  const Vector d = graph.degrees();
  std::vector<bool> isolated(static_cast<std::size_t>(d.size()));
  for (Index i = 0; i < d.size(); ++i) isolated[static_cast<std::size_t>(i)] = d[i] == 0.0;
  return isolated;
}

namespace {

Matrix normalize_by_degree(const Matrix &a) {
  const Vector d = a.rowwise().sum();
  const Index n = a.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (a(i, j) != 0.0) out(i, j) = a(i, j) / std::sqrt(d[i] * d[j]);
    }
  }
  return out;
}

}  // namespace

NormalizedOperator sym_normalize(const AffinityGraph &graph) {
  return {normalize_by_degree(graph.affinity), OperatorFlavor::LabelPropagation};
}

NormalizedOperator gcn_normalize(const AffinityGraph &graph) {
  const Index n = graph.node_count();
  return {normalize_by_degree(graph.affinity + Matrix::Identity(n, n)), OperatorFlavor::Gcn};
}

void write_edge_list(const AffinityGraph &graph, std::ostream &out) {
  const Index n = graph.node_count();
  char buf[64];
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double w = graph.affinity(i, j);
      if (w <= 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.17g", w);
      out << i << ' ' << j << ' ' << buf << '\n';
    }
  }
}

}  // namespace graph_attrib

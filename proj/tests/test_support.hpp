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

// Test-only helpers: instance generators and reference computations that
// deliberately avoid the library's own code paths.
#ifndef GRAPH_ATTRIB_TESTS_TEST_SUPPORT_HPP_
#define GRAPH_ATTRIB_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "graph_attrib/graph.hpp"
#include "graph_attrib/random.hpp"
#include "graph_attrib/segments.hpp"

namespace graph_attrib::testing {

// First labels.size() rows become profiles with those labels; the rest are
// unlabeled tests.
inline SegmentSet make_set(const Matrix &features, const std::vector<int> &labels,
                           int classes) {
  std::vector<Segment> segs;
  for (Index i = 0; i < features.rows(); ++i) {
    Segment s;
    s.id = "n" + std::to_string(i);
    s.vector = features.row(i).transpose();
    if (i < static_cast<Index>(labels.size())) {
      s.kind = SegmentKind::Profile;
      s.speaker = labels[static_cast<std::size_t>(i)];
    }
    segs.push_back(std::move(s));
  }
  return SegmentSet(std::move(segs), features.cols(), classes);
}

inline Matrix random_matrix(Index rows, Index cols, Rng &rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
  return m;
}

// Random session with every class covered by at least one profile.
inline SegmentSet random_set(Rng &rng, Index n, Index m, int classes, Index dim) {
  std::vector<int> labels;
  for (Index i = 0; i < m; ++i)
    labels.push_back(i < classes ? static_cast<int>(i)
                                 : static_cast<int>(rng.uniform_index(classes)));
  return make_set(random_matrix(n, dim, rng), labels, classes);
}

inline bool is_connected(const Matrix &a) {
  const Index n = a.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<Index> q;
  q.push(0);
  seen[0] = true;
  Index count = 1;
  while (!q.empty()) {
    const Index u = q.front();
    q.pop();
    for (Index v = 0; v < n; ++v) {
      if (a(u, v) > 0.0 && !seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        ++count;
        q.push(v);
      }
    }
  }
  return count == n;
}

// D^-1/2 A D^-1/2 by explicit dense diagonal-matrix products.
inline Matrix dense_normalize(const Matrix &a) {
  const Index n = a.rows();
  Matrix d_inv_sqrt = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    double deg = 0.0;
    for (Index j = 0; j < n; ++j) deg += a(i, j);
    d_inv_sqrt(i, i) = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
  }
  return d_inv_sqrt * a * d_inv_sqrt;
}

// Gaussian elimination with partial pivoting, written out by hand.
inline Matrix gauss_solve(Matrix a, Matrix b) {
  const Index n = a.rows();
  for (Index col = 0; col < n; ++col) {
    Index pivot = col;
    for (Index r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    a.row(col).swap(a.row(pivot));
    b.row(col).swap(b.row(pivot));
    for (Index r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (Index c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      for (Index c = 0; c < b.cols(); ++c) b(r, c) -= f * b(col, c);
    }
  }
  Matrix x = Matrix::Zero(n, b.cols());
  for (Index r = n - 1; r >= 0; --r) {
    for (Index c = 0; c < b.cols(); ++c) {
      double s = b(r, c);
      for (Index k = r + 1; k < n; ++k) s -= a(r, k) * x(k, c);
      x(r, c) = s / a(r, r);
    }
  }
  return x;
}

// Central finite-difference gradient of f at x.
inline Matrix central_difference(const std::function<double(const Matrix &)> &f, Matrix x,
                                 double step) {
  Matrix g(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      const double orig = x(i, j);
      x(i, j) = orig + step;
      const double up = f(x);
      x(i, j) = orig - step;
      const double down = f(x);
      x(i, j) = orig;
      g(i, j) = (up - down) / (2.0 * step);
    }
  }
  return g;
}

// max |a - b| / max(|a|, |b|, floor) over all entries.
inline double max_relative_error(const Matrix &a, const Matrix &b, double floor = 1e-6) {
  double worst = 0.0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      const double denom = std::max({std::abs(a(i, j)), std::abs(b(i, j)), floor});
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / denom);
    }
  return worst;
}

}  // namespace graph_attrib::testing

#endif  // GRAPH_ATTRIB_TESTS_TEST_SUPPORT_HPP_

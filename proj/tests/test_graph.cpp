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

#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "graph_attrib/graph.hpp"
#include "test_support.hpp"

using namespace graph_attrib;
using graph_attrib::testing::dense_normalize;
using graph_attrib::testing::is_connected;
using graph_attrib::testing::random_matrix;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Index>(r.size()), static_cast<Index>(r.begin()->size()));
  Index i = 0;
  for (const auto &row : r) m.row(i++) = vec(row).transpose();
  return m;
}

AffinityGraph from_matrix(const Matrix &a) {
  AffinityGraph g;
  g.affinity = a;
  return g;
}

Matrix path3() { return rows({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}); }

}  // namespace

TEST_CASE("cosine") {
  CHECK(cosine(vec({1, 0}), vec({1, 0})) == 1.0);
  CHECK(cosine(vec({1, 0}), vec({0, 1})) == 0.0);
  CHECK(cosine(vec({1, 0}), vec({-1, 0})) == -1.0);
  CHECK(cosine(vec({3, 0}), vec({0.5, 0})) == 1.0);
  CHECK_THROWS_AS(cosine(vec({0, 0}), vec({1, 0})), Error);
  CHECK_THROWS_AS(cosine(vec({1, 0}), vec({1, 0, 0})), Error);
}

TEST_CASE("build_affinity: threshold applies to the raw cosine") {
  SUBCASE("cosine 0.8 is kept with weight 0.9") {
    const AffinityGraph g = build_affinity(rows({{1, 0}, {0.8, 0.6}}),
                                           GraphConstructionConfig::thresholded(0.6));
    CHECK(g.affinity(0, 1) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(g.affinity(1, 0) == g.affinity(0, 1));
    CHECK(g.kept_edges == 1);
  }
  SUBCASE("cosine 0.5 is pruned although (1+cos)/2 = 0.75 > 0.6") {
    const AffinityGraph g = build_affinity(rows({{1, 0}, {0.5, std::sqrt(0.75)}}),
                                           GraphConstructionConfig::thresholded(0.6));
    CHECK(g.affinity(0, 1) == 0.0);
    CHECK(g.kept_edges == 0);
  }
  SUBCASE("three identical vectors, fully connected") {
    const AffinityGraph g = build_affinity(rows({{2, 1}, {2, 1}, {2, 1}}),
                                           GraphConstructionConfig::fully_connected());
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j) CHECK(g.affinity(i, j) == doctest::Approx(i == j ? 0.0 : 1.0).epsilon(1e-15));
    CHECK(g.kept_edges == 3);
  }
  SUBCASE("fewer than two nodes") {
    CHECK_THROWS_AS(build_affinity(rows({{1, 0}}), GraphConstructionConfig::fully_connected()),
                    Error);
  }
  SUBCASE("bad configs") {
    CHECK_THROWS_AS(GraphConstructionConfig::thresholded(1.0).validate(), Error);
    CHECK_THROWS_AS(GraphConstructionConfig::thresholded(-1.5).validate(), Error);
    CHECK_THROWS_AS(GraphConstructionConfig::k_nearest(0).validate(), Error);
  }
}

TEST_CASE("build_affinity: k-nearest keeps the union of neighbor lists") {
  Matrix x(4, 2);
  const double angles[] = {0, 10, 25, 90};
  for (int i = 0; i < 4; ++i) {
    const double r = angles[i] * M_PI / 180.0;
    x.row(i) << std::cos(r), std::sin(r);
  }
  const AffinityGraph g = build_affinity(x, GraphConstructionConfig::k_nearest(1));
  // 0<->1 and 1<-2 and 2<-3: node 3 is nobody's nearest neighbor but still
  // keeps its own edge.
  CHECK(g.affinity(0, 1) > 0.0);
  CHECK(g.affinity(1, 2) > 0.0);
  CHECK(g.affinity(2, 3) > 0.0);
  CHECK(g.affinity(0, 2) == 0.0);
  CHECK(g.affinity(0, 3) == 0.0);
  CHECK(g.affinity(1, 3) == 0.0);
  CHECK(g.kept_edges == 3);

  const AffinityGraph all = build_affinity(x, GraphConstructionConfig::k_nearest(10));
  CHECK(all.affinity == build_affinity(x, GraphConstructionConfig::fully_connected()).affinity);
}

TEST_CASE("build_affinity properties on random sets") {
  Rng rng(314);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.uniform_index(60));
    const Index d = 2 + static_cast<Index>(rng.uniform_index(8));
    const Matrix x = random_matrix(n, d, rng);
    const GraphConstructionConfig configs[] = {
        GraphConstructionConfig::fully_connected(),
        GraphConstructionConfig::k_nearest(1 + static_cast<int>(rng.uniform_index(6))),
        GraphConstructionConfig::thresholded(rng.uniform(-0.9, 0.9))};
    for (const auto &cfg : configs) {
      const AffinityGraph g = build_affinity(x, cfg);
      CHECK((g.affinity.array() == g.affinity.transpose().array()).all());
      CHECK((g.affinity.diagonal().array() == 0.0).all());
      CHECK(g.affinity.minCoeff() >= 0.0);
      CHECK(g.affinity.maxCoeff() <= 1.0);
    }
    // No pruning at tau = -1.
    CHECK(build_affinity(x, GraphConstructionConfig::thresholded(-1.0)).affinity ==
          build_affinity(x, GraphConstructionConfig::fully_connected()).affinity);
    // Raising tau never adds edges.
    Index previous = n * n;
    for (double tau = -1.0; tau < 1.0; tau += 0.1) {
      const Index kept = build_affinity(x, GraphConstructionConfig::thresholded(tau)).kept_edges;
      CHECK(kept <= previous);
      previous = kept;
    }
  }
}

TEST_CASE("sym_normalize") {
  SUBCASE("unit degrees") {
    CHECK(sym_normalize(from_matrix(rows({{0, 1}, {1, 0}}))).matrix == rows({{0, 1}, {1, 0}}));
  }
  SUBCASE("scaling cancels") {
    CHECK(sym_normalize(from_matrix(rows({{0, 2}, {2, 0}}))).matrix == rows({{0, 1}, {1, 0}}));
  }
  SUBCASE("3-node path, against the dense D^-1/2 A D^-1/2 product") {
    const Matrix s = sym_normalize(from_matrix(path3())).matrix;
    const Matrix oracle = dense_normalize(path3());
    CHECK(s(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(oracle(0, 1) == doctest::Approx(0.70710678118654752).epsilon(1e-15));
    CHECK((s - oracle).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("isolated nodes give zero rows and columns") {
    const Matrix a = rows({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}});
    const AffinityGraph g = from_matrix(a);
    const Matrix s = sym_normalize(g).matrix;
    CHECK(s.row(2).isZero(0));
    CHECK(s.col(2).isZero(0));
    CHECK(isolated_nodes(g) == std::vector<bool>{false, false, true});
  }
}

TEST_CASE("gcn_normalize") {
  SUBCASE("single isolated node") {
    AffinityGraph g = from_matrix(Matrix::Zero(1, 1));
    CHECK(gcn_normalize(g).matrix == Matrix::Ones(1, 1));
  }
  SUBCASE("two connected nodes") {
    const Matrix l = gcn_normalize(from_matrix(rows({{0, 1}, {1, 0}}))).matrix;
    CHECK(l == Matrix::Constant(2, 2, 0.5));
  }
  SUBCASE("3-node path, against the dense product") {
    const Matrix l = gcn_normalize(from_matrix(path3())).matrix;
    const Matrix oracle = dense_normalize(path3() + Matrix::Identity(3, 3));
    CHECK(l(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(l(0, 1) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-15));
    CHECK(oracle(0, 1) == doctest::Approx(0.40824829046386302).epsilon(1e-15));
    CHECK((l - oracle).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("normalized operators on random graphs") {
  Rng rng(2718);
  for (int trial = 0; trial < 25; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.uniform_index(199));  // up to 200
    const Matrix x = random_matrix(n, 8, rng);
    const AffinityGraph g = build_affinity(x, GraphConstructionConfig::thresholded(rng.uniform(-1.0, 0.3)));
    const Matrix s = sym_normalize(g).matrix;
    const Matrix l = gcn_normalize(g).matrix;
    CHECK((s.array() == s.transpose().array()).all());
    CHECK((l.array() == l.transpose().array()).all());
    CHECK((s - dense_normalize(g.affinity)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(l.diagonal().minCoeff() > 0.0);
    CHECK(l.rowwise().sum().minCoeff() > 0.0);

    Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= 1.0 + 1e-10);
    Eigen::SelfAdjointEigenSolver<Matrix> el(l, Eigen::EigenvaluesOnly);
    CHECK(el.eigenvalues().maxCoeff() <= 1.0 + 1e-10);

    // D^1/2 1 is a fixed point of S on connected graphs; the (A+I) analogue
    // holds for L on any graph.
    const Vector root_deg = g.degrees().cwiseSqrt();
    if (is_connected(g.affinity)) {
      CHECK((s * root_deg - root_deg).cwiseAbs().maxCoeff() < 1e-10);
    }
    const Vector root_deg_hat = (g.degrees().array() + 1.0).sqrt().matrix();
    CHECK((l * root_deg_hat - root_deg_hat).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("scaling all edge weights leaves S unchanged") {
  Rng rng(5);
  const AffinityGraph g = build_affinity(random_matrix(30, 5, rng), GraphConstructionConfig::thresholded(0.0));
  AffinityGraph scaled = g;
  scaled.affinity *= 3.7;
  CHECK((sym_normalize(g).matrix - sym_normalize(scaled).matrix).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("edge list dump") {
  Rng rng(9);
  const AffinityGraph g = build_affinity(random_matrix(12, 4, rng), GraphConstructionConfig::thresholded(0.2));
  std::ostringstream out;
  write_edge_list(g, out);
  std::istringstream in(out.str());
  Index i, j, lines = 0;
  double w;
  Matrix back = Matrix::Zero(12, 12);
  while (in >> i >> j >> w) {
    CHECK(i < j);
    back(i, j) = back(j, i) = w;
    ++lines;
  }
  CHECK(lines == g.kept_edges);
  CHECK(back == g.affinity);
}

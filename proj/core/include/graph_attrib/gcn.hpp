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

#ifndef GRAPH_ATTRIB_GCN_HPP_
#define GRAPH_ATTRIB_GCN_HPP_

#include <Eigen/SparseCore>

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graph_attrib/graph.hpp"
#include "graph_attrib/labelprop.hpp"
#include "graph_attrib/random.hpp"
#include "graph_attrib/segments.hpp"
#include "graph_attrib/types.hpp"

namespace graph_attrib {

// Two-layer graph convolutional network trained per session:
//
//   H      = ELU(L X W1)
//   logits = L (H . dropout) W2
//   Z      = softmax_rows(logits)
//
// with L = (D+I)^-1/2 (A+I) (D+I)^-1/2 and the loss summed over a mask of
// labeled nodes. Everything is double precision and seed-deterministic.

struct GcnConfig {
  int hidden = 64;
  double dropout = 0.5;
  double learning_rate = 0.01;
  double weight_decay = 5e-4;
  int patience = 20;
  int max_epochs = 400;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GcnParams {
  Matrix w1;  // D x H
  Matrix w2;  // H x C

  Index input_dim() const { return w1.rows(); }
  Index hidden() const { return w1.cols(); }
  Index classes() const { return w2.cols(); }
  bool operator==(const GcnParams &o) const { return w1 == o.w1 && w2 == o.w2; }
};

struct GcnGradients {
  Matrix w1;
  Matrix w2;
};

struct ProbabilityMatrix {
  Matrix probs;
  Matrix logits;  // pre-softmax
};

// Graph operator and input features of one session, prepared once for the
// many forward passes of training. L is stored sparse and L X is cached.
class GcnGraph {
 public:
  GcnGraph(const NormalizedOperator &op, const Matrix &features);

  const Eigen::SparseMatrix<double> &op() const { return op_; }
  const Matrix &propagated_features() const { return propagated_; }
  Index node_count() const { return op_.rows(); }
  Index feature_dim() const { return propagated_.cols(); }

 private:
  Eigen::SparseMatrix<double> op_;
  Matrix propagated_;
};

// Intermediates of one forward pass, kept for gcn_backward().
struct ForwardState {
  Matrix pre_activation;  // L X W1
  Matrix hidden;          // ELU(pre_activation)
  Matrix dropout_mask;    // empty when dropout is off
  Matrix hidden_dropped;  // hidden . dropout_mask
  ProbabilityMatrix output;
};

double elu(double x);
double elu_derivative(double x);

// Max-subtracted row softmax.
Matrix softmax_rows(const Matrix &logits);

ForwardState gcn_forward(const GcnGraph &graph, const GcnParams &params);
// `dropout_mask` is N x H with entries 0 or 1/(1-p).
ForwardState gcn_forward(const GcnGraph &graph, const GcnParams &params,
                         const Matrix &dropout_mask);

// -sum_{i in mask} sum_j F_ij ln Z_ij, with ln Z taken from the logits via
// log-sum-exp. Duplicate mask entries count twice. Mask entries must be
// labeled nodes.
double masked_cross_entropy(const ProbabilityMatrix &z, const SoftLabelMatrix &targets,
                            std::span<const Index> mask);

// masked_cross_entropy + weight_decay * (|W1|^2 + |W2|^2) / 2.
double regularized_loss(const ProbabilityMatrix &z, const SoftLabelMatrix &targets,
                        std::span<const Index> mask, const GcnParams &params,
                        double weight_decay);

// Exact gradient of regularized_loss with respect to W1 and W2.
GcnGradients gcn_backward(const GcnGraph &graph, const GcnParams &params,
                          const ForwardState &state, const SoftLabelMatrix &targets,
                          std::span<const Index> mask, double weight_decay);

struct AdamState {
  Matrix m_w1, v_w1, m_w2, v_w2;
  long step = 0;

  static AdamState zeros_like(const GcnParams &params);
};

struct AdamSettings {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam update. Increments state.step before applying it.
void adam_step(GcnParams &params, const GcnGradients &grads, AdamState &state,
               double learning_rate, const AdamSettings &settings = {});

// Glorot-uniform W1 (D x H) and W2 (H x C).
GcnParams init_params(Index input_dim, Index hidden, Index classes, Rng &rng);

// N x H matrix of 0 and 1/(1-p) entries; each entry kept with probability 1-p.
Matrix sample_dropout_mask(Index rows, Index cols, double rate, Rng &rng);

struct TrainOutcome {
  GcnParams params;  // parameters at the epoch with the lowest validation loss
  double best_val_loss = 0.0;
  int best_epoch = 0;
  int epochs_run = 0;
  std::vector<double> val_history;
  std::vector<double> train_history;
};

// Full-batch training on train_mask with early stopping on the validation
// loss (no dropout, no weight decay). Stops after `patience` consecutive
// epochs without strict improvement, or at max_epochs.
TrainOutcome train_fold(const GcnGraph &graph, const SoftLabelMatrix &targets,
                        std::span<const Index> train_mask, std::span<const Index> val_mask,
                        const GcnConfig &config);

// Splits the labeled nodes into two halves. Profiles are walked speaker by
// speaker (node order within a speaker) and dealt alternately to A and B, so
// the halves differ in size by at most one and, with >= 2 profiles per
// speaker, both cover every speaker.
std::array<std::vector<Index>, 2> split_labeled_nodes(const SegmentSet &set);

struct SessionOutcome {
  ProbabilityMatrix output;  // softmax of the summed fold logits
  std::array<TrainOutcome, 2> folds;
  std::array<std::vector<Index>, 2> halves;
};

// Trains model A (train on half A, validate on B) and model B (the reverse)
// and sums their pre-softmax logits.
SessionOutcome train_session(const SegmentSet &set, const AffinityGraph &graph,
                             const GcnConfig &config);

// Logit-sum ensemble of already-computed outputs.
ProbabilityMatrix combine_logits(std::span<const ProbabilityMatrix> members);

// Row argmax of the logits (of probs when logits are absent), ties to the
// lowest class.
std::vector<ClassIndex> predict_gcn(const ProbabilityMatrix &z);

// Model dump: {"hidden", "dim", "classes", "W1": [...], "W2": [...]} with the
// weights row-major at full double precision.
std::string serialize_params(const GcnParams &params);
GcnParams parse_params(std::string_view text);
void save_params(const GcnParams &params, const std::filesystem::path &path);

}  // namespace graph_attrib

#endif  // GRAPH_ATTRIB_GCN_HPP_

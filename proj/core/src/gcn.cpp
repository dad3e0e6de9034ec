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

#include "graph_attrib/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"

namespace graph_attrib {

void GcnConfig::validate() const {
  if (hidden <= 0) throw Error("gcn.hidden must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error("gcn.dropout must lie in [0, 1)");
  if (!(learning_rate > 0.0)) throw Error("gcn.learning_rate must be positive");
  if (!(weight_decay >= 0.0)) throw Error("gcn.weight_decay must be non-negative");
  if (patience <= 0) throw Error("gcn.patience must be positive");
  if (max_epochs <= 0) throw Error("gcn.max_epochs must be positive");
}

GcnGraph::GcnGraph(const NormalizedOperator &op, const Matrix &features) {
  if (op.flavor != OperatorFlavor::Gcn) {
    throw Error("GcnGraph: operator must be the renormalized (A+I) flavor");
  }
  if (op.matrix.rows() != features.rows() || op.matrix.cols() != op.matrix.rows()) {
    throw Error("GcnGraph: operator and feature shapes disagree");
  }
  op_ = op.matrix.sparseView();
  op_.makeCompressed();
  propagated_ = op_ * features;
}

double elu(double x) { return x > 0.0 ? x : std::expm1(x); }

double elu_derivative(double x) { return x > 0.0 ? 1.0 : std::exp(x); }

Matrix softmax_rows(const Matrix &logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Index i = 0; i < logits.rows(); ++i) {
    const double top = logits.row(i).maxCoeff();
    out.row(i) = (logits.row(i).array() - top).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

namespace {

ForwardState forward_impl(const GcnGraph &graph, const GcnParams &params,
                          const Matrix *dropout_mask) {
  if (params.input_dim() != graph.feature_dim() || params.w2.rows() != params.hidden()) {
    throw Error("gcn_forward: parameter shapes do not match the inputs");
  }
  ForwardState s;
  s.pre_activation.noalias() = graph.propagated_features() * params.w1;
  s.hidden = s.pre_activation.unaryExpr([](double v) { return elu(v); });
  if (dropout_mask != nullptr) {
    if (dropout_mask->rows() != s.hidden.rows() || dropout_mask->cols() != s.hidden.cols()) {
      throw Error("gcn_forward: dropout mask shape mismatch");
    }
    s.dropout_mask = *dropout_mask;
    s.hidden_dropped = s.hidden.cwiseProduct(*dropout_mask);
  } else {
    s.hidden_dropped = s.hidden;
  }
  const Matrix projected = s.hidden_dropped * params.w2;
  s.output.logits = graph.op() * projected;
  s.output.probs = softmax_rows(s.output.logits);
  return s;
}

void check_mask(const SoftLabelMatrix &targets, std::span<const Index> mask,
                const char *who) {
  if (mask.empty()) throw Error(std::string(who) + ": empty mask");
  for (Index i : mask) {
    if (i < 0 || i >= targets.labeled_count) {
      throw Error(std::string(who) + ": mask entry " + std::to_string(i) +
                  " is not a labeled node");
    }
  }
}

}  // namespace

ForwardState gcn_forward(const GcnGraph &graph, const GcnParams &params) {
  return forward_impl(graph, params, nullptr);
}

ForwardState gcn_forward(const GcnGraph &graph, const GcnParams &params,
                         const Matrix &dropout_mask) {
  return forward_impl(graph, params, &dropout_mask);
}

double masked_cross_entropy(const ProbabilityMatrix &z, const SoftLabelMatrix &targets,
                            std::span<const Index> mask) {
  check_mask(targets, mask, "masked_cross_entropy");
  if (z.logits.rows() != targets.rows() || z.logits.cols() != targets.classes()) {
    throw Error("masked_cross_entropy: shape mismatch");
  }
  double loss = 0.0;
  for (Index i : mask) {
    const auto row = z.logits.row(i);
    const double top = row.maxCoeff();
    const double lse = top + std::log((row.array() - top).exp().sum());
    for (Index j = 0; j < row.size(); ++j) {
      const double f = targets.scores(i, j);
      if (f != 0.0) loss -= f * (row[j] - lse);
    }
  }
  return loss;
}

double regularized_loss(const ProbabilityMatrix &z, const SoftLabelMatrix &targets,
                        std::span<const Index> mask, const GcnParams &params,
                        double weight_decay) {
  return masked_cross_entropy(z, targets, mask) +
         0.5 * weight_decay * (params.w1.squaredNorm() + params.w2.squaredNorm());
}

GcnGradients gcn_backward(const GcnGraph &graph, const GcnParams &params,
                          const ForwardState &state, const SoftLabelMatrix &targets,
                          std::span<const Index> mask, double weight_decay) {
  check_mask(targets, mask, "gcn_backward");
  const Matrix &probs = state.output.probs;

  Matrix d_logits = Matrix::Zero(probs.rows(), probs.cols());
  for (Index i : mask) {
    const double mass = targets.scores.row(i).sum();
    d_logits.row(i) += mass * probs.row(i) - targets.scores.row(i);
  }

  const Matrix d_projected = graph.op().transpose() * d_logits;
  GcnGradients g;
  g.w2.noalias() = state.hidden_dropped.transpose() * d_projected;
  g.w2 += weight_decay * params.w2;

  Matrix d_hidden = d_projected * params.w2.transpose();
  if (state.dropout_mask.size() != 0) d_hidden = d_hidden.cwiseProduct(state.dropout_mask);
  const Matrix d_pre = d_hidden.cwiseProduct(
      state.pre_activation.unaryExpr([](double v) { return elu_derivative(v); }));
  g.w1.noalias() = graph.propagated_features().transpose() * d_pre;
  g.w1 += weight_decay * params.w1;
  return g;
}

AdamState AdamState::zeros_like(const GcnParams &params) {
  AdamState s;
  s.m_w1 = Matrix::Zero(params.w1.rows(), params.w1.cols());
  s.v_w1 = s.m_w1;
  s.m_w2 = Matrix::Zero(params.w2.rows(), params.w2.cols());
  s.v_w2 = s.m_w2;
  return s;
}

namespace {

void adam_update(Matrix &x, const Matrix &grad, Matrix &m, Matrix &v, long t,
                 double lr, const AdamSettings &s) {
  m = s.beta1 * m + (1.0 - s.beta1) * grad;
  v = s.beta2 * v + (1.0 - s.beta2) * grad.cwiseAbs2();
  const double m_corr = 1.0 - std::pow(s.beta1, static_cast<double>(t));
  const double v_corr = 1.0 - std::pow(s.beta2, static_cast<double>(t));
  x.array() -= lr * (m.array() / m_corr) / ((v.array() / v_corr).sqrt() + s.epsilon);
}

}  // namespace

void adam_step(GcnParams &params, const GcnGradients &grads, AdamState &state,
               double learning_rate, const AdamSettings &settings) {
  if (state.m_w1.rows() != params.w1.rows() || state.m_w1.cols() != params.w1.cols() ||
      state.m_w2.rows() != params.w2.rows() || state.m_w2.cols() != params.w2.cols()) {
    throw Error("adam_step: optimizer state does not match parameter shapes");
  }
  ++state.step;
  adam_update(params.w1, grads.w1, state.m_w1, state.v_w1, state.step, learning_rate, settings);
  adam_update(params.w2, grads.w2, state.m_w2, state.v_w2, state.step, learning_rate, settings);
}

GcnParams init_params(Index input_dim, Index hidden, Index classes, Rng &rng) {
  auto glorot = [&rng](Index fan_in, Index fan_out) {
    const double r = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix w(fan_in, fan_out);
    for (Index i = 0; i < fan_in; ++i)
      for (Index j = 0; j < fan_out; ++j) w(i, j) = rng.uniform(-r, r);
    return w;
  };
  GcnParams p;
  p.w1 = glorot(input_dim, hidden);
  p.w2 = glorot(hidden, classes);
  return p;
}

Matrix sample_dropout_mask(Index rows, Index cols, double rate, Rng &rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw Error("dropout rate must lie in [0, 1)");
  const double scale = 1.0 / (1.0 - rate);
  Matrix mask(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) mask(i, j) = rng.uniform01() >= rate ? scale : 0.0;
  return mask;
}

TrainOutcome train_fold(const GcnGraph &graph, const SoftLabelMatrix &targets,
                        std::span<const Index> train_mask, std::span<const Index> val_mask,
                        const GcnConfig &config) {
  config.validate();
  check_mask(targets, train_mask, "train_fold (train)");
  check_mask(targets, val_mask, "train_fold (validation)");
  for (Index a : train_mask)
    for (Index b : val_mask)
      if (a == b) throw Error("train_fold: train and validation masks overlap");
  if (targets.rows() != graph.node_count()) throw Error("train_fold: shape mismatch");

  Rng rng(config.seed);
  GcnParams params = init_params(graph.feature_dim(), config.hidden, targets.classes(), rng);
  AdamState adam = AdamState::zeros_like(params);

  TrainOutcome outcome;
  outcome.params = params;
  outcome.best_val_loss = std::numeric_limits<double>::infinity();
  int stale = 0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const ForwardState state =
        config.dropout > 0.0
            ? gcn_forward(graph, params,
                          sample_dropout_mask(graph.node_count(), config.hidden,
                                              config.dropout, rng))
            : gcn_forward(graph, params);
    const double train_loss =
        regularized_loss(state.output, targets, train_mask, params, config.weight_decay);
    if (!std::isfinite(train_loss)) {
      throw Error("train_fold: non-finite training loss at epoch " + std::to_string(epoch));
    }
    outcome.train_history.push_back(train_loss);
    const GcnGradients grads =
        gcn_backward(graph, params, state, targets, train_mask, config.weight_decay);
    adam_step(params, grads, adam, config.learning_rate);

    const double val_loss =
        masked_cross_entropy(gcn_forward(graph, params).output, targets, val_mask);
    if (!std::isfinite(val_loss)) {
      throw Error("train_fold: non-finite validation loss at epoch " + std::to_string(epoch));
    }
    outcome.val_history.push_back(val_loss);
    outcome.epochs_run = epoch;
    if (val_loss < outcome.best_val_loss) {
      outcome.best_val_loss = val_loss;
      outcome.best_epoch = epoch;
      outcome.params = params;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  return outcome;
}

std::array<std::vector<Index>, 2> split_labeled_nodes(const SegmentSet &set) {
  std::vector<std::vector<Index>> by_speaker(static_cast<std::size_t>(set.num_classes()));
  for (Index i = 0; i < set.profile_count(); ++i) {
    by_speaker[static_cast<std::size_t>(*set[i].speaker)].push_back(i);
  }
  std::array<std::vector<Index>, 2> halves;
  std::size_t dealt = 0;
  for (const auto &nodes : by_speaker)
    for (Index node : nodes) halves[dealt++ % 2].push_back(node);
  for (auto &h : halves) std::sort(h.begin(), h.end());
  return halves;
}

SessionOutcome train_session(const SegmentSet &set, const AffinityGraph &graph,
                             const GcnConfig &config) {
  config.validate();
  if (set.profile_count() < 2) throw Error("train_session: need at least 2 labeled nodes");
  if (graph.node_count() != set.size()) throw Error("train_session: graph/set size mismatch");

  const GcnGraph prepared(gcn_normalize(graph), set.features());
  const SoftLabelMatrix targets = init_labels(set);

  SessionOutcome out;
  out.halves = split_labeled_nodes(set);
  for (int fold = 0; fold < 2; ++fold) {
    GcnConfig fold_config = config;
    fold_config.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(fold + 1)});
    out.folds[fold] = train_fold(prepared, targets, out.halves[fold], out.halves[1 - fold],
                                 fold_config);
  }
  const std::array<ProbabilityMatrix, 2> members = {
      gcn_forward(prepared, out.folds[0].params).output,
      gcn_forward(prepared, out.folds[1].params).output};
  out.output = combine_logits(members);
  return out;
}

ProbabilityMatrix combine_logits(std::span<const ProbabilityMatrix> members) {
  if (members.empty()) throw Error("combine_logits: no members");
  ProbabilityMatrix out;
  out.logits = members.front().logits;
  for (std::size_t m = 1; m < members.size(); ++m) {
    if (members[m].logits.rows() != out.logits.rows() ||
        members[m].logits.cols() != out.logits.cols()) {
      throw Error("combine_logits: shape mismatch");
    }
    out.logits += members[m].logits;
  }
  out.probs = softmax_rows(out.logits);
  return out;
}

std::vector<ClassIndex> predict_gcn(const ProbabilityMatrix &z) {
  const Matrix &scores = z.logits.size() != 0 ? z.logits : z.probs;
  std::vector<ClassIndex> out(static_cast<std::size_t>(scores.rows()));
  for (Index i = 0; i < scores.rows(); ++i) {
    Index best = 0;
    scores.row(i).maxCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<ClassIndex>(best);
  }
  return out;
}

namespace {

std::vector<double> row_major(const Matrix &m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
  return flat;
}

Matrix from_row_major(const std::vector<double> &flat, Index rows, Index cols,
                      const char *name) {
  if (static_cast<Index>(flat.size()) != rows * cols) {
    throw Error(std::string("model dump: ") + name + " has " + std::to_string(flat.size()) +
                " entries, expected " + std::to_string(rows * cols));
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = flat[static_cast<std::size_t>(i * cols + j)];
  return m;
}

}  // namespace

std::string serialize_params(const GcnParams &params) {
  nlohmann::json doc;
  doc["hidden"] = params.hidden();
  doc["dim"] = params.input_dim();
  doc["classes"] = params.classes();
  doc["W1"] = row_major(params.w1);
  doc["W2"] = row_major(params.w2);
  return doc.dump() + "\n";
}

GcnParams parse_params(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto hidden = doc.at("hidden").get<Index>();
    const auto dim = doc.at("dim").get<Index>();
    const auto classes = doc.at("classes").get<Index>();
    GcnParams p;
    p.w1 = from_row_major(doc.at("W1").get<std::vector<double>>(), dim, hidden, "W1");
    p.w2 = from_row_major(doc.at("W2").get<std::vector<double>>(), hidden, classes, "W2");
    return p;
  } catch (const nlohmann::json::exception &e) {
    throw Error(std::string("model dump: ") + e.what());
  }
}

void save_params(const GcnParams &params, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << serialize_params(params);
}

}  // namespace graph_attrib

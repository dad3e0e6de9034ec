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

#ifndef GRAPH_ATTRIB_EVAL_HPP_
#define GRAPH_ATTRIB_EVAL_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graph_attrib/gcn.hpp"
#include "graph_attrib/graph.hpp"
#include "graph_attrib/labelprop.hpp"
#include "graph_attrib/segments.hpp"
#include "graph_attrib/synth.hpp"

namespace graph_attrib {

enum class Method { Cosine, LabelPropagation, Gcn };

// "cosine", "lp", "gcn".
std::string_view method_name(Method m);
Method parse_method(std::string_view name);

// Hyperparameters shared by every classifier of a run.
struct MethodSettings {
  GraphConstructionConfig graph;
  LpConfig lp;
  GcnConfig gcn;
};

// Predicted class of every test segment (in set order). The set must not
// carry test labels; callers pass SegmentSet::without_test_labels().
std::vector<ClassIndex> predict_test_segments(Method method, const SegmentSet &view,
                                              const MethodSettings &settings);

// Fraction of positions where prediction and truth differ.
double segment_error_rate(std::span<const ClassIndex> predictions,
                          std::span<const ClassIndex> truth);

// (baseline - method) / baseline, in percent.
double relative_error_reduction(double baseline_mean, double method_mean);

struct ExperimentConfig {
  std::vector<Method> methods = {Method::Cosine, Method::LabelPropagation, Method::Gcn};
  std::vector<int> ks = {5, 10, 20, 30};
  int repeats = 10;
  std::uint64_t seed = 0;
  MethodSettings settings;

  void validate() const;
};

// Per-run error rates of one method at one profile budget; errors[r] is
// repeat r.
struct RunResult {
  Method method = Method::Cosine;
  int k = 0;
  std::vector<double> errors;
};

struct ReportRow {
  Method method = Method::Cosine;
  int k = 0;
  double mean = 0.0;  // fraction in [0, 1]
  double stddev = 0.0;  // population standard deviation (divide by R)
  std::optional<double> rer;  // percent vs Cosine at the same k; empty for Cosine

  bool operator==(const ReportRow &) const = default;
};

struct EvalReport {
  std::vector<ReportRow> rows;
};

// Which profile ids a method was handed in one (repeat, k) cell.
struct SampleRecord {
  int k = 0;
  int repeat = 0;
  Method method = Method::Cosine;
  std::set<std::string> profile_ids;
};

struct ExperimentResult {
  std::vector<RunResult> runs;
  EvalReport report;
  std::vector<SampleRecord> samples;
};

// Seed of the profile draw for (repeat, k); independent of the method list.
std::uint64_t sample_seed(std::uint64_t master, int repeat, int k);
// Seed handed to GCN training for (repeat, k).
std::uint64_t gcn_seed(std::uint64_t master, int repeat, int k);

// For every k and repeat: draw one consecutive-profile sample, restrict the
// set to it, and evaluate every method on that same restricted set.
// Deterministic in (set, config); repeats may run on several threads.
ExperimentResult run_experiment(const SegmentSet &set, const ExperimentConfig &config);
ExperimentResult run_experiment(const SynthConfig &synth, const ExperimentConfig &config);

// Mean, population std and RER per (method, k), rows ordered by k then by
// method as listed in `methods`.
EvalReport aggregate(std::span<const RunResult> runs, std::span<const Method> methods,
                     std::span<const int> ks);

// Fixed-width table, percentages with one decimal; RER blank for Cosine.
std::string report_to_table(const EvalReport &report);
// method,k,mean,std,rer at full precision (shortest round-trip form).
std::string report_to_csv(const EvalReport &report);
// method,k,repeat,error_rate.
std::string runs_to_csv(std::span<const RunResult> runs);
EvalReport parse_report_csv(std::string_view text);

}  // namespace graph_attrib

#endif  // GRAPH_ATTRIB_EVAL_HPP_

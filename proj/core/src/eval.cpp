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

#include "graph_attrib/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "graph_attrib/baseline.hpp"
#include "graph_attrib/parallel.hpp"
#include "graph_attrib/random.hpp"

namespace graph_attrib {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Cosine:
      return "cosine";
    case Method::LabelPropagation:
      return "lp";
    case Method::Gcn:
      return "gcn";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "cosine") return Method::Cosine;
  if (name == "lp") return Method::LabelPropagation;
  if (name == "gcn") return Method::Gcn;
  throw Error("unknown method '" + std::string(name) + "' (expected cosine, lp or gcn)");
}

namespace {

std::vector<ClassIndex> predict_with_graph(Method method, const SegmentSet &view,
                                           const AffinityGraph *graph,
                                           const MethodSettings &settings) {
  std::vector<ClassIndex> all;
  switch (method) {
    case Method::Cosine:
      all = classify_all_cosine(fit_centroids(view), view);
      break;
    case Method::LabelPropagation:
      all = classify_lp(view, *graph, settings.lp);
      break;
    case Method::Gcn:
      all = predict_gcn(train_session(view, *graph, settings.gcn).output);
      break;
  }
  return {all.begin() + view.profile_count(), all.end()};
}

std::vector<ClassIndex> test_truth(const SegmentSet &set) {
  if (!set.has_test_labels()) throw Error("evaluation needs ground truth on every test segment");
  std::vector<ClassIndex> truth;
  truth.reserve(static_cast<std::size_t>(set.test_count()));
  for (Index i = set.profile_count(); i < set.size(); ++i) truth.push_back(*set[i].speaker);
  return truth;
}

}  // namespace

std::vector<ClassIndex> predict_test_segments(Method method, const SegmentSet &view,
                                              const MethodSettings &settings) {
  for (Index i = view.profile_count(); i < view.size(); ++i) {
    if (view[i].speaker) throw Error("classifier input must not carry test labels");
  }
  if (method == Method::Cosine) return predict_with_graph(method, view, nullptr, settings);
  const AffinityGraph graph = build_affinity(view, settings.graph);
  return predict_with_graph(method, view, &graph, settings);
}

double segment_error_rate(std::span<const ClassIndex> predictions,
                          std::span<const ClassIndex> truth) {
  if (predictions.size() != truth.size()) throw Error("segment_error_rate: length mismatch");
  if (predictions.empty()) throw Error("segment_error_rate: empty input");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += predictions[i] != truth[i];
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

double relative_error_reduction(double baseline_mean, double method_mean) {
  if (!(baseline_mean > 0.0)) throw Error("relative_error_reduction: baseline mean must be positive");
  return 100.0 * (baseline_mean - method_mean) / baseline_mean;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw Error("eval.methods must not be empty");
  for (std::size_t i = 0; i < methods.size(); ++i)
    for (std::size_t j = i + 1; j < methods.size(); ++j)
      if (methods[i] == methods[j]) {
        throw Error("eval.methods lists '" + std::string(method_name(methods[i])) + "' twice");
      }
  if (ks.empty()) throw Error("eval.ks must not be empty");
  for (int k : ks)
    if (k <= 0) throw Error("eval.ks entries must be positive, got " + std::to_string(k));
  if (repeats < 1) throw Error("eval.repeats must be at least 1");
  settings.graph.validate();
  settings.lp.validate();
  settings.gcn.validate();
}

std::uint64_t sample_seed(std::uint64_t master, int repeat, int k) {
  return derive_seed(master, {0x5A, static_cast<std::uint64_t>(repeat), static_cast<std::uint64_t>(k)});
}

std::uint64_t gcn_seed(std::uint64_t master, int repeat, int k) {
  return derive_seed(master, {0x6C, static_cast<std::uint64_t>(repeat), static_cast<std::uint64_t>(k)});
}

namespace {

struct CellResult {
  std::vector<double> errors;  // one per method
  std::vector<std::set<std::string>> ids;
};

}  // namespace

ExperimentResult run_experiment(const SegmentSet &set, const ExperimentConfig &config) {
  config.validate();
  const std::vector<ClassIndex> truth = test_truth(set);

  // Fail on an oversized k before doing any work, naming the short speaker.
  std::vector<int> profiles(static_cast<std::size_t>(set.num_classes()), 0);
  for (Index i = 0; i < set.profile_count(); ++i) ++profiles[static_cast<std::size_t>(*set[i].speaker)];
  for (int k : config.ks) {
    for (int c = 0; c < set.num_classes(); ++c) {
      if (profiles[static_cast<std::size_t>(c)] < k) {
        throw Error("eval.ks value " + std::to_string(k) + " exceeds the " +
                    std::to_string(profiles[static_cast<std::size_t>(c)]) +
                    " profile segments of speaker " + std::to_string(c));
      }
    }
  }

  const std::size_t cells = config.ks.size() * static_cast<std::size_t>(config.repeats);
  std::vector<CellResult> results(cells);
  parallel_for(cells, [&](std::size_t cell) {
    const int k = config.ks[cell / static_cast<std::size_t>(config.repeats)];
    const int repeat = static_cast<int>(cell % static_cast<std::size_t>(config.repeats));

    const ProfileSample sample =
        sample_consecutive_profiles(set, k, sample_seed(config.seed, repeat, k));
    const SegmentSet view = restrict_to_sample(set, sample).without_test_labels();

    MethodSettings settings = config.settings;
    settings.gcn.seed = gcn_seed(config.seed, repeat, k);
    std::optional<AffinityGraph> graph;

    CellResult &out = results[cell];
    for (Method m : config.methods) {
      if (m != Method::Cosine && !graph) graph = build_affinity(view, settings.graph);
      const std::vector<ClassIndex> predicted =
          predict_with_graph(m, view, graph ? &*graph : nullptr, settings);
      out.errors.push_back(segment_error_rate(predicted, truth));
      std::set<std::string> ids;
      for (Index i = 0; i < view.profile_count(); ++i) ids.insert(view[i].id);
      out.ids.push_back(std::move(ids));
    }
    for (const auto &ids : out.ids) {
      if (ids != sample.all_ids()) throw Error("protocol violation: methods saw different profiles");
    }
  });

  ExperimentResult result;
  for (std::size_t ki = 0; ki < config.ks.size(); ++ki) {
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      RunResult run{config.methods[mi], config.ks[ki], {}};
      for (int r = 0; r < config.repeats; ++r) {
        const CellResult &cell = results[ki * static_cast<std::size_t>(config.repeats) + static_cast<std::size_t>(r)];
        run.errors.push_back(cell.errors[mi]);
        result.samples.push_back({config.ks[ki], r, config.methods[mi], cell.ids[mi]});
      }
      result.runs.push_back(std::move(run));
    }
  }
  result.report = aggregate(result.runs, config.methods, config.ks);
  return result;
}

ExperimentResult run_experiment(const SynthConfig &synth, const ExperimentConfig &config) {
  return run_experiment(gen_session(synth), config);
}

EvalReport aggregate(std::span<const RunResult> runs, std::span<const Method> methods,
                     std::span<const int> ks) {
  auto find = [&](Method m, int k) -> const RunResult * {
    for (const RunResult &r : runs)
      if (r.method == m && r.k == k) return &r;
    return nullptr;
  };
  EvalReport report;
  for (int k : ks) {
    std::optional<double> baseline;
    if (const RunResult *b = find(Method::Cosine, k); b != nullptr && !b->errors.empty()) {
      double sum = 0.0;
      for (double e : b->errors) sum += e;
      baseline = sum / static_cast<double>(b->errors.size());
    }
    for (Method m : methods) {
      const RunResult *run = find(m, k);
      if (run == nullptr || run->errors.empty()) continue;
      const auto n = static_cast<double>(run->errors.size());
      double sum = 0.0;
      for (double e : run->errors) sum += e;
      const double mean = sum / n;
      double sq = 0.0;
      for (double e : run->errors) sq += (e - mean) * (e - mean);
      ReportRow row{m, k, mean, std::sqrt(sq / n), std::nullopt};
      if (m != Method::Cosine && baseline && *baseline > 0.0) {
        row.rer = relative_error_reduction(*baseline, mean);
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string one_decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

double parse_double(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw Error("report csv line " + std::to_string(line) + ": bad number '" +
                std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::string report_to_table(const EvalReport &report) {
  std::ostringstream out;
  out << "# segment error rate (%), std is the population standard deviation over repeats\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-8s %4s %8s %8s %8s\n", "method", "k", "mean", "std", "RER");
  out << line;
  for (const ReportRow &r : report.rows) {
    std::snprintf(line, sizeof line, "%-8s %4d %8s %8s %8s\n",
                  std::string(method_name(r.method)).c_str(), r.k,
                  one_decimal(100.0 * r.mean).c_str(), one_decimal(100.0 * r.stddev).c_str(),
                  r.rer ? one_decimal(*r.rer).c_str() : "");
    out << line;
  }
  return out.str();
}

std::string report_to_csv(const EvalReport &report) {
  std::string out = "method,k,mean,std,rer\n";
  for (const ReportRow &r : report.rows) {
    out += std::string(method_name(r.method)) + "," + std::to_string(r.k) + "," +
           shortest(r.mean) + "," + shortest(r.stddev) + "," + (r.rer ? shortest(*r.rer) : "") +
           "\n";
  }
  return out;
}

std::string runs_to_csv(std::span<const RunResult> runs) {
  std::string out = "method,k,repeat,error_rate\n";
  for (const RunResult &r : runs) {
    for (std::size_t i = 0; i < r.errors.size(); ++i) {
      out += std::string(method_name(r.method)) + "," + std::to_string(r.k) + "," +
             std::to_string(i) + "," + shortest(r.errors[i]) + "\n";
    }
  }
  return out;
}

EvalReport parse_report_csv(std::string_view text) {
  EvalReport report;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != "method,k,mean,std,rer") throw Error("report csv: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 5) {
      throw Error("report csv line " + std::to_string(line_no) + ": expected 5 fields");
    }
    ReportRow row;
    row.method = parse_method(fields[0]);
    row.k = static_cast<int>(parse_double(fields[1], line_no));
    row.mean = parse_double(fields[2], line_no);
    row.stddev = parse_double(fields[3], line_no);
    if (!fields[4].empty()) row.rer = parse_double(fields[4], line_no);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace graph_attrib

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

#include "app.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace graph_attrib::app {
namespace {

using nlohmann::json;

// Walks a JSON object, remembering which keys were read so the leftovers can
// be reported.
class Section {
 public:
  Section(const json &node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw Error("config: '" + label() + "' must be an object");
  }

  bool has(const std::string &key) {
    seen_.push_back(key);
    return node_.contains(key);
  }

  template <typename T>
  void read(const std::string &key, T &target) {
    if (!has(key)) return;
    const json &v = node_.at(key);
    const std::string name = field(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw Error("config: field '" + name + "' must be a boolean");
      target = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw Error("config: field '" + name + "' must be an integer");
      if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)
        throw Error("config: field '" + name + "' must be non-negative");
      target = v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw Error("config: field '" + name + "' must be a number");
      target = v.get<T>();
    } else {
      if (!v.is_string()) throw Error("config: field '" + name + "' must be a string");
      target = v.get<std::string>();
    }
  }

  const json &child(const std::string &key) { return node_.at(key); }
  std::string field(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
        throw Error("config: unknown key '" + field(it.key()) + "'");
    }
  }

 private:
  std::string label() const { return path_.empty() ? "<root>" : path_; }

  const json &node_;
  std::string path_;
  std::vector<std::string> seen_;
};

GraphConstructionConfig::Strategy parse_strategy(const std::string &s) {
  if (s == "threshold") return GraphConstructionConfig::Strategy::Threshold;
  if (s == "knn") return GraphConstructionConfig::Strategy::KNearest;
  if (s == "full") return GraphConstructionConfig::Strategy::FullyConnected;
  throw Error("config: field 'graph.strategy' must be threshold, knn or full, got '" + s + "'");
}

template <typename Fn>
void with_field(const std::string &name, Fn &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    throw Error("config: invalid '" + name + "': " + e.what());
  }
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw Error("cannot write file '" + path.string() + "'");
}

std::filesystem::path prepare_output_dir(const AppConfig &cfg) {
  if (!cfg.output) throw Error("no output directory (pass --output or set io.output)");
  std::error_code ec;
  std::filesystem::create_directories(*cfg.output, ec);
  if (ec || !std::filesystem::is_directory(*cfg.output))
    throw Error("cannot create output directory '" + cfg.output->string() + "'");
  return *cfg.output;
}

SegmentSet load_input(const AppConfig &cfg) {
  if (!cfg.input) throw Error("no input file (pass --input or set io.input)");
  if (!std::filesystem::exists(*cfg.input))
    throw Error("input file '" + cfg.input->string() + "' does not exist");
  try {
    return load_segment_set(*cfg.input);
  } catch (const Error &e) {
    throw Error("input file '" + cfg.input->string() + "': " + e.what());
  }
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void cmd_gen(const AppConfig &cfg, std::ostream &out) {
  if (!cfg.synth) throw Error("config: missing field 'synth' (required by gen)");
  const SegmentSet set = gen_session(*cfg.synth);
  const auto path = prepare_output_dir(cfg) / "session.json";
  save_segment_set(set, path);
  out << "wrote " << path.string() << ": N=" << set.size() << " M=" << set.profile_count()
      << " C=" << set.num_classes() << "\n";
}

void cmd_graph(const AppConfig &cfg, std::ostream &out) {
  const SegmentSet set = load_input(cfg);
  const AffinityGraph g = build_affinity(set, cfg.settings.graph);
  std::ostringstream edges;
  write_edge_list(g, edges);
  const auto path = prepare_output_dir(cfg) / "graph.edges";
  write_file(path, edges.str());
  const auto isolated = isolated_nodes(g);
  out << "wrote " << path.string() << ": nodes=" << g.node_count() << " edges=" << g.kept_edges
      << " isolated=" << std::count(isolated.begin(), isolated.end(), true) << "\n";
}

void cmd_run(const AppConfig &cfg, Method method, std::ostream &out) {
  const SegmentSet set = load_input(cfg);
  const SegmentSet view = set.without_test_labels();
  const auto dir = prepare_output_dir(cfg);

  std::vector<ClassIndex> test_pred;
  if (method == Method::Gcn) {
    // Same path as predict_test_segments, kept open here to dump the models.
    const SessionOutcome s = train_session(view, build_affinity(view, cfg.settings.graph), cfg.settings.gcn);
    const auto all = predict_gcn(s.output);
    test_pred.assign(all.begin() + view.profile_count(), all.end());
    for (int f = 0; f < 2; ++f)
      save_params(s.folds[f].params, dir / ("gcn_fold" + std::to_string(f) + ".json"));
  } else {
    test_pred = predict_test_segments(method, view, cfg.settings);
  }

  std::string csv = "id,predicted_class\n";
  for (std::size_t i = 0; i < test_pred.size(); ++i)
    csv += set[static_cast<std::size_t>(set.profile_count()) + i].id + "," + std::to_string(test_pred[i]) + "\n";
  const auto path = dir / "predictions.csv";
  write_file(path, csv);
  out << "wrote " << path.string() << ": " << test_pred.size() << " test segments, method "
      << method_name(method) << "\n";

  if (set.has_test_labels()) {
    std::vector<ClassIndex> truth;
    for (Index i = set.profile_count(); i < set.size(); ++i) truth.push_back(*set[static_cast<std::size_t>(i)].speaker);
    out << "segment error rate: " << fixed(segment_error_rate(test_pred, truth), 4) << "\n";
  }
}

void cmd_eval(const AppConfig &cfg, std::ostream &out) {
  ExperimentResult result;
  if (cfg.input) {
    result = run_experiment(load_input(cfg), cfg.experiment());
  } else if (cfg.synth) {
    result = run_experiment(*cfg.synth, cfg.experiment());
  } else {
    throw Error("eval needs an input file or a 'synth' config section");
  }
  const auto dir = prepare_output_dir(cfg);
  write_file(dir / "runs.csv", runs_to_csv(result.runs));
  write_file(dir / "summary.csv", report_to_csv(result.report));
  const std::string table = report_to_table(result.report);
  write_file(dir / "table.txt", table);
  out << table;
}

std::string one_line(std::string s) {
  for (char &c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

void AppConfig::apply_seed(std::uint64_t master) {
  seed = master;
  settings.gcn.seed = master;
  if (synth) synth->seed = master;
}

ExperimentConfig AppConfig::experiment() const {
  ExperimentConfig e;
  e.methods = methods;
  e.ks = ks;
  e.repeats = repeats;
  e.seed = seed;
  e.settings = settings;
  return e;
}

void AppConfig::validate() const {
  with_field("graph", [&] { settings.graph.validate(); });
  with_field("lp", [&] { settings.lp.validate(); });
  with_field("gcn", [&] { settings.gcn.validate(); });
  with_field("eval", [&] { experiment().validate(); });
  if (synth) with_field("synth", [&] { synth->validate(); });
}

AppConfig parse_app_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception &e) {
    throw Error(std::string("config: not valid JSON: ") + e.what());
  }
  AppConfig cfg;
  Section top(root, "");
  std::uint64_t seed = 0;
  top.read("seed", seed);

  if (top.has("graph")) {
    Section s(top.child("graph"), "graph");
    std::string strategy = "threshold";
    s.read("strategy", strategy);
    cfg.settings.graph.strategy = parse_strategy(strategy);
    s.read("threshold", cfg.settings.graph.threshold);
    s.read("neighbors", cfg.settings.graph.neighbors);
    s.finish();
  }
  if (top.has("lp")) {
    Section s(top.child("lp"), "lp");
    s.read("alpha", cfg.settings.lp.alpha);
    s.read("iterations", cfg.settings.lp.iterations);
    s.read("freeze_labeled", cfg.settings.lp.freeze_labeled);
    s.finish();
  }
  if (top.has("gcn")) {
    Section s(top.child("gcn"), "gcn");
    GcnConfig &g = cfg.settings.gcn;
    s.read("hidden", g.hidden);
    s.read("dropout", g.dropout);
    s.read("learning_rate", g.learning_rate);
    s.read("weight_decay", g.weight_decay);
    s.read("patience", g.patience);
    s.read("max_epochs", g.max_epochs);
    s.finish();
  }
  if (top.has("eval")) {
    Section s(top.child("eval"), "eval");
    if (s.has("methods")) {
      const json &m = s.child("methods");
      if (!m.is_array()) throw Error("config: field 'eval.methods' must be an array of strings");
      cfg.methods.clear();
      for (const json &v : m) {
        if (!v.is_string()) throw Error("config: field 'eval.methods' must be an array of strings");
        with_field("eval.methods", [&] { cfg.methods.push_back(parse_method(v.get<std::string>())); });
      }
    }
    if (s.has("ks")) {
      const json &k = s.child("ks");
      if (!k.is_array()) throw Error("config: field 'eval.ks' must be an array of integers");
      cfg.ks.clear();
      for (const json &v : k) {
        if (!v.is_number_integer()) throw Error("config: field 'eval.ks' must be an array of integers");
        cfg.ks.push_back(v.get<int>());
      }
    }
    s.read("repeats", cfg.repeats);
    s.finish();
  }
  if (top.has("synth")) {
    Section s(top.child("synth"), "synth");
    SynthConfig c;
    s.read("num_speakers", c.num_speakers);
    s.read("profiles_per_speaker", c.profiles_per_speaker);
    s.read("tests_per_speaker", c.tests_per_speaker);
    s.read("emb_dim", c.emb_dim);
    s.read("profile_noise", c.profile_noise);
    s.read("test_noise", c.test_noise);
    s.read("domain_shift", c.domain_shift);
    s.finish();
    cfg.synth = c;
  }
  if (top.has("io")) {
    Section s(top.child("io"), "io");
    std::string path;
    if (s.has("input")) {
      s.read("input", path);
      cfg.input = path;
    }
    if (s.has("output")) {
      s.read("output", path);
      cfg.output = path;
    }
    s.finish();
  }
  top.finish();
  cfg.apply_seed(seed);
  cfg.validate();
  return cfg;
}

AppConfig load_app_config(const std::filesystem::path &path) {
  if (!std::filesystem::exists(path)) throw Error("config file '" + path.string() + "' does not exist");
  return parse_app_config(read_file(path));
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App cli{"Speaker attribution of embedding vectors by graph-based semi-supervised learning",
               "graph-attrib"};
  cli.require_subcommand(1);
  std::string config_path, input_path, output_path, method_text;
  std::optional<std::uint64_t> seed;

  auto common = [&](CLI::App *sub, bool needs_input) {
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    auto *in = sub->add_option("--input", input_path, "embedding-set file");
    if (needs_input) in->check(CLI::ExistingFile);
    sub->add_option("--output", output_path, "output directory");
    sub->add_option("--seed", seed, "master seed (overrides the config)");
  };
  CLI::App *gen = cli.add_subcommand("gen", "generate a synthetic session");
  common(gen, false);
  CLI::App *graph = cli.add_subcommand("graph", "dump the affinity graph as an edge list");
  common(graph, true);
  CLI::App *run = cli.add_subcommand("run", "classify the test segments of one session");
  common(run, true);
  run->add_option("--method", method_text, "cosine, lp or gcn")
      ->required()
      ->check(CLI::IsMember({"cosine", "lp", "gcn"}));
  CLI::App *eval = cli.add_subcommand("eval", "run the repeated-sampling evaluation");
  common(eval, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    cli.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << cli.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << cli.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "graph-attrib: usage error: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    AppConfig cfg = config_path.empty() ? AppConfig{} : load_app_config(config_path);
    if (seed) cfg.apply_seed(*seed);
    if (!input_path.empty()) cfg.input = input_path;
    if (!output_path.empty()) cfg.output = output_path;

    if (gen->parsed()) cmd_gen(cfg, out);
    if (graph->parsed()) cmd_graph(cfg, out);
    if (run->parsed()) cmd_run(cfg, parse_method(method_text), out);
    if (eval->parsed()) cmd_eval(cfg, out);
  } catch (const std::exception &e) {
    err << "graph-attrib: error: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace graph_attrib::app

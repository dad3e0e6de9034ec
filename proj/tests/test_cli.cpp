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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "app.hpp"
#include "graph_attrib/segments.hpp"

using namespace graph_attrib;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "graph-attrib");
  std::ostringstream out, err;
  const int code = app::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string &name) : dir(fs::temp_directory_path() / ("graph_attrib_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path write(const std::string &file, const std::string &text) const {
    std::ofstream(dir / file) << text;
    return dir / file;
  }
};

const char *kSmallSynth = R"({
  "seed": 5,
  "synth": {"num_speakers": 3, "profiles_per_speaker": 6, "tests_per_speaker": 10,
            "emb_dim": 8, "profile_noise": 0.1, "test_noise": 0.1, "domain_shift": 0.1},
  "gcn": {"hidden": 8, "max_epochs": 50},
  "eval": {"ks": [2, 4], "repeats": 2}
})";

const char *kNoiseless = R"({
  "synth": {"num_speakers": 3, "profiles_per_speaker": 4, "tests_per_speaker": 5,
            "emb_dim": 6, "profile_noise": 0, "test_noise": 0, "domain_shift": 0},
  "gcn": {"hidden": 8}
})";

bool single_line(const std::string &s) { return !s.empty() && s.find('\n') == s.size() - 1; }

}  // namespace

TEST_CASE("config parsing") {
  const app::AppConfig c = app::parse_app_config(kSmallSynth);
  CHECK(c.seed == 5);
  CHECK(c.synth->seed == 5);
  CHECK(c.settings.gcn.seed == 5);
  CHECK(c.settings.gcn.hidden == 8);
  CHECK(c.ks == std::vector<int>{2, 4});
  CHECK(c.settings.lp.alpha == 0.95);

  auto message = [](const char *text) {
    try {
      app::parse_app_config(text);
    } catch (const Error &e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"gcn": {"hiden": 3}})").find("gcn.hiden") != std::string::npos);
  CHECK(message(R"({"sed": 3})").find("'sed'") != std::string::npos);
  CHECK(message(R"({"lp": {"alpha": "high"}})").find("lp.alpha") != std::string::npos);
  CHECK(message(R"({"lp": {"alpha": 1.5}})").find("lp") != std::string::npos);
  CHECK(message(R"({"graph": {"strategy": "star"}})").find("graph.strategy") != std::string::npos);
  CHECK(message(R"({"eval": {"methods": ["svm"]}})").find("eval.methods") != std::string::npos);
  CHECK(message("{oops").find("JSON") != std::string::npos);
}

TEST_CASE("gen") {
  Scratch s("gen");
  const auto cfg = s.write("cfg.json", kSmallSynth);
  const Result r = cli({"gen", "--config", cfg.string(), "--output", (s.dir / "a").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("N=48 M=18 C=3") != std::string::npos);
  const SegmentSet set = load_segment_set(s.dir / "a" / "session.json");
  CHECK(set.size() == 48);

  REQUIRE(cli({"gen", "--config", cfg.string(), "--output", (s.dir / "b").string()}).code == 0);
  CHECK(slurp(s.dir / "a" / "session.json") == slurp(s.dir / "b" / "session.json"));
  REQUIRE(cli({"gen", "--config", cfg.string(), "--seed", "6", "--output", (s.dir / "c").string()}).code == 0);
  CHECK(slurp(s.dir / "a" / "session.json") != slurp(s.dir / "c" / "session.json"));

  const auto bare = s.write("bare.json", R"({"lp": {"alpha": 0.9}})");
  const Result missing = cli({"gen", "--config", bare.string(), "--output", s.dir.string()});
  CHECK(missing.code != 0);
  CHECK(missing.err.find("synth") != std::string::npos);
  CHECK(single_line(missing.err));
}

TEST_CASE("graph") {
  Scratch s("graph");
  const auto cfg = s.write("cfg.json", kSmallSynth);
  REQUIRE(cli({"gen", "--config", cfg.string(), "--output", s.dir.string()}).code == 0);
  const auto input = s.dir / "session.json";
  const std::string before = slurp(input);
  const Result r = cli({"graph", "--input", input.string(), "--output", (s.dir / "g").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("nodes=48") != std::string::npos);
  std::istringstream edges(slurp(s.dir / "g" / "graph.edges"));
  int i, j;
  double w;
  int count = 0;
  while (edges >> i >> j >> w) {
    CHECK(i < j);
    CHECK(w > 0.8);
    ++count;
  }
  CHECK(count > 0);
  CHECK(slurp(input) == before);
}

TEST_CASE("run") {
  Scratch s("run");
  const auto cfg = s.write("cfg.json", kNoiseless);
  REQUIRE(cli({"gen", "--config", cfg.string(), "--output", s.dir.string()}).code == 0);
  const auto input = s.dir / "session.json";
  const std::string before = slurp(input);

  for (const std::string method : {"cosine", "lp", "gcn"}) {
    CAPTURE(method);
    const auto out = s.dir / method;
    const Result r = cli({"run", "--config", cfg.string(), "--input", input.string(), "--method", method,
                          "--output", out.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("segment error rate: 0.0000") != std::string::npos);
    const std::string csv = slurp(out / "predictions.csv");
    CHECK(csv.rfind("id,predicted_class\nt0_0,0\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 16);
    CHECK(fs::exists(out / "gcn_fold0.json") == (method == "gcn"));
  }
  CHECK(slurp(input) == before);

  SUBCASE("unknown method") {
    const Result r = cli({"run", "--input", input.string(), "--method", "svm", "--output", s.dir.string()});
    CHECK(r.code != 0);
    CHECK(single_line(r.err));
  }
  SUBCASE("no ground truth") {
    save_segment_set(load_segment_set(input).without_test_labels(), s.dir / "unlabeled.json");
    const Result r = cli({"run", "--input", (s.dir / "unlabeled.json").string(), "--method", "lp", "--output",
                          (s.dir / "u").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("error rate") == std::string::npos);
    CHECK(fs::exists(s.dir / "u" / "predictions.csv"));
  }
  SUBCASE("bad input") {
    const auto junk = s.write("junk.json", "[1, 2]");
    const Result r = cli({"run", "--input", junk.string(), "--method", "lp", "--output", s.dir.string()});
    CHECK(r.code != 0);
    CHECK(r.err.find("junk.json") != std::string::npos);
    CHECK(single_line(r.err));
  }
}

TEST_CASE("eval") {
  Scratch s("eval");
  const auto cfg = s.write("cfg.json", kSmallSynth);
  const Result a = cli({"eval", "--config", cfg.string(), "--output", (s.dir / "a").string()});
  REQUIRE(a.code == 0);
  const Result b = cli({"eval", "--config", cfg.string(), "--output", (s.dir / "b").string()});
  REQUIRE(b.code == 0);
  for (const char *f : {"runs.csv", "summary.csv", "table.txt"}) {
    CAPTURE(f);
    CHECK(slurp(s.dir / "a" / f) == slurp(s.dir / "b" / f));
  }
  const std::string summary = slurp(s.dir / "a" / "summary.csv");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 1 + 3 * 2);
  CHECK(a.out == slurp(s.dir / "a" / "table.txt"));

  const auto big = s.write("big.json", R"({"synth": {"num_speakers": 2, "profiles_per_speaker": 3,
      "tests_per_speaker": 2, "emb_dim": 4}, "eval": {"ks": [5]}})");
  const Result r = cli({"eval", "--config", big.string(), "--output", s.dir.string()});
  CHECK(r.code != 0);
  CHECK(r.err.find("speaker") != std::string::npos);
  CHECK(single_line(r.err));
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code != 0);
  CHECK(cli({"frobnicate"}).code != 0);
  const Result r = cli({"run", "--method", "lp", "--input", "/nonexistent/file.json"});
  CHECK(r.code != 0);
  CHECK(single_line(r.err));
  CHECK(cli({"--help"}).code == 0);
}

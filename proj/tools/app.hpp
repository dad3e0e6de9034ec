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

#ifndef GRAPH_ATTRIB_TOOLS_APP_HPP_
#define GRAPH_ATTRIB_TOOLS_APP_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "graph_attrib/eval.hpp"

namespace graph_attrib::app {

// Everything a command needs. The single master seed feeds the generator,
// the GCN and the evaluation protocol.
struct AppConfig {
  std::uint64_t seed = 0;
  MethodSettings settings;
  std::vector<Method> methods = {Method::Cosine, Method::LabelPropagation, Method::Gcn};
  std::vector<int> ks = {5, 10, 20, 30};
  int repeats = 10;
  std::optional<SynthConfig> synth;
  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> output;

  // Copies the master seed into every sub-config.
  void apply_seed(std::uint64_t master);
  ExperimentConfig experiment() const;
  void validate() const;
};

// JSON with every key checked. Unknown keys and wrong types throw Error with
// the dotted field name in the message.
AppConfig parse_app_config(std::string_view text);
AppConfig load_app_config(const std::filesystem::path &path);

// Full command line entry point, returns the process exit code.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace graph_attrib::app

#endif  // GRAPH_ATTRIB_TOOLS_APP_HPP_

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

#ifndef GRAPH_ATTRIB_SYNTH_HPP_
#define GRAPH_ATTRIB_SYNTH_HPP_

#include <cstdint>

#include "graph_attrib/segments.hpp"

namespace graph_attrib {

// Synthetic session: speaker directions on the unit sphere, isotropic
// Gaussian perturbations (per-coordinate standard deviation profile_noise /
// test_noise), and a per-session bias of norm domain_shift added to every
// test vector before normalization to model a channel mismatch between
// enrollment and meeting audio.
struct SynthConfig {
  int num_speakers = 8;
  int profiles_per_speaker = 30;
  int tests_per_speaker = 100;
  int emb_dim = 64;
  double profile_noise = 0.4;
  double test_noise = 0.4;
  double domain_shift = 0.3;
  std::uint64_t seed = 0;

  void validate() const;
};

// Profiles come first, grouped by speaker, then tests grouped by speaker.
// Ids are "p<speaker>_<n>" and "t<speaker>_<n>". Test segments carry their
// ground-truth speaker.
SegmentSet gen_session(const SynthConfig &config);

// Every vector has norm within 1e-9 of one.
bool all_vectors_unit_norm(const SegmentSet &set);

}  // namespace graph_attrib

#endif  // GRAPH_ATTRIB_SYNTH_HPP_

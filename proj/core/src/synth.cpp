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

#include "graph_attrib/synth.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "graph_attrib/random.hpp"

namespace graph_attrib {

void SynthConfig::validate() const {
  if (num_speakers < 2) throw Error("synth.num_speakers must be at least 2");
  if (emb_dim < 2) throw Error("synth.emb_dim must be at least 2");
  if (profiles_per_speaker < 1) throw Error("synth.profiles_per_speaker must be at least 1");
  if (tests_per_speaker < 1) throw Error("synth.tests_per_speaker must be at least 1");
  if (!(profile_noise >= 0.0)) throw Error("synth.profile_noise must be non-negative");
  if (!(test_noise >= 0.0)) throw Error("synth.test_noise must be non-negative");
  if (!(domain_shift >= 0.0)) throw Error("synth.domain_shift must be non-negative");
}

namespace {

Vector random_unit(Index dim, Rng &rng) {
  Vector v(dim);
  double norm = 0.0;
  // A zero draw has probability zero, but loop rather than divide by it.
  while (norm == 0.0) {
    for (Index d = 0; d < dim; ++d) v[d] = rng.normal();
    norm = v.norm();
  }
  return v / norm;
}

Vector perturbed(const Vector &mean, double sigma, const Vector &bias, Rng &rng) {
  Vector v = mean;
  if (sigma > 0.0)
    for (Index d = 0; d < v.size(); ++d) v[d] += sigma * rng.normal();
  v += bias;
  const double norm = v.norm();
  // Noise or bias exactly cancelling the mean: fall back to the mean itself.
  return norm > 0.0 ? Vector(v / norm) : mean;
}

}  // namespace

SegmentSet gen_session(const SynthConfig &config) {
  config.validate();
  const Index dim = config.emb_dim;
  Rng rng(config.seed);

  std::vector<Vector> means;
  means.reserve(static_cast<std::size_t>(config.num_speakers));
  for (int c = 0; c < config.num_speakers; ++c) means.push_back(random_unit(dim, rng));
  const Vector shift = config.domain_shift * random_unit(dim, rng);
  const Vector no_shift = Vector::Zero(dim);

  std::vector<Segment> segments;
  segments.reserve(static_cast<std::size_t>(
      config.num_speakers * (config.profiles_per_speaker + config.tests_per_speaker)));
  for (int c = 0; c < config.num_speakers; ++c) {
    for (int n = 0; n < config.profiles_per_speaker; ++n) {
      segments.push_back({"p" + std::to_string(c) + "_" + std::to_string(n),
                          SegmentKind::Profile, c,
                          perturbed(means[c], config.profile_noise, no_shift, rng)});
    }
  }
  for (int c = 0; c < config.num_speakers; ++c) {
    for (int n = 0; n < config.tests_per_speaker; ++n) {
      segments.push_back({"t" + std::to_string(c) + "_" + std::to_string(n),
                          SegmentKind::Test, c,
                          perturbed(means[c], config.test_noise, shift, rng)});
    }
  }
  return SegmentSet(std::move(segments), dim, config.num_speakers);
}

bool all_vectors_unit_norm(const SegmentSet &set) {
  for (const Segment &s : set.segments()) {
    if (std::abs(s.vector.norm() - 1.0) > 1e-9) return false;
  }
  return !set.segments().empty();
}

}  // namespace graph_attrib

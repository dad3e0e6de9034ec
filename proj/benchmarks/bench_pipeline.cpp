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

#include <benchmark/benchmark.h>

#include "graph_attrib/gcn.hpp"
#include "graph_attrib/labelprop.hpp"
#include "graph_attrib/synth.hpp"

namespace {

using namespace graph_attrib;

SegmentSet session(int speakers, int tests) {
  SynthConfig c;
  c.num_speakers = speakers;
  c.profiles_per_speaker = 10;
  c.tests_per_speaker = tests;
  c.profile_noise = c.test_noise = 0.05;
  return gen_session(c);
}

void BM_BuildAffinity(benchmark::State &state) {
  const SegmentSet set = session(8, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_affinity(set, GraphConstructionConfig{}));
  state.SetItemsProcessed(state.iterations() * set.size() * set.size());
}
BENCHMARK(BM_BuildAffinity)->Arg(25)->Arg(100)->Arg(400);

void BM_RunLp(benchmark::State &state) {
  const SegmentSet set = session(8, static_cast<int>(state.range(0))).without_test_labels();
  const AffinityGraph g = build_affinity(set, GraphConstructionConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(run_lp(set, g, LpConfig{}));
}
BENCHMARK(BM_RunLp)->Arg(25)->Arg(100)->Arg(400);

// One training epoch: forward with dropout, backward, Adam.
void BM_GcnEpoch(benchmark::State &state) {
  const SegmentSet set = session(8, static_cast<int>(state.range(0))).without_test_labels();
  const GcnGraph prepared(gcn_normalize(build_affinity(set, GraphConstructionConfig{})), set.features());
  const SoftLabelMatrix targets = init_labels(set);
  const auto halves = split_labeled_nodes(set);
  Rng rng(1);
  GcnParams params = init_params(set.emb_dim(), 64, set.num_classes(), rng);
  AdamState adam = AdamState::zeros_like(params);
  for (auto _ : state) {
    const ForwardState s =
        gcn_forward(prepared, params, sample_dropout_mask(prepared.node_count(), 64, 0.5, rng));
    adam_step(params, gcn_backward(prepared, params, s, targets, halves[0], 5e-4), adam, 0.01);
  }
}
BENCHMARK(BM_GcnEpoch)->Arg(25)->Arg(100)->Arg(400);

void BM_TrainSession(benchmark::State &state) {
  const SegmentSet set = session(8, 100).without_test_labels();
  const AffinityGraph g = build_affinity(set, GraphConstructionConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(train_session(set, g, GcnConfig{}));
}
BENCHMARK(BM_TrainSession)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

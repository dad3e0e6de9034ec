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

#ifndef GRAPH_ATTRIB_SEGMENTS_HPP_
#define GRAPH_ATTRIB_SEGMENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graph_attrib/types.hpp"

namespace graph_attrib {

enum class SegmentKind { Profile, Test };

// One embedding vector of a session. Profile segments are the labeled graph
// nodes; test segments may carry a ground-truth speaker for evaluation only.
struct Segment {
  std::string id;
  SegmentKind kind = SegmentKind::Test;
  std::optional<ClassIndex> speaker;
  Vector vector;

  bool operator==(const Segment &other) const {
    return id == other.id && kind == other.kind && speaker == other.speaker &&
           vector.size() == other.vector.size() && vector == other.vector;
  }
};

// Validated, immutable collection of the segments of one session.
//
// Profiles always precede tests, so node i < profile_count() is labeled.
// Construction enforces: ids unique, one shared dimension, finite nonzero
// vectors, every profile labeled in [0, num_classes), every class covered by
// at least one profile, and 0 < M < N.
class SegmentSet {
 public:
  // Reorders profiles ahead of tests (stable within each kind).
  SegmentSet(std::vector<Segment> segments, Index emb_dim, int num_classes);

  const std::vector<Segment> &segments() const { return segments_; }
  const Segment &operator[](std::size_t i) const { return segments_[i]; }

  Index size() const { return static_cast<Index>(segments_.size()); }
  Index profile_count() const { return profile_count_; }
  Index test_count() const { return size() - profile_count_; }
  Index emb_dim() const { return emb_dim_; }
  int num_classes() const { return num_classes_; }

  // N x D feature matrix, row i = segment i.
  Matrix features() const;

  // Speaker of each profile node, in node order.
  std::vector<ClassIndex> profile_labels() const;

  // True when every test segment carries a ground-truth speaker.
  bool has_test_labels() const;

  // Copy with all test-segment speakers erased. Classifiers only ever see
  // this view; ground truth stays with the evaluation code.
  SegmentSet without_test_labels() const;

  const Segment *find(std::string_view id) const;

  bool operator==(const SegmentSet &other) const = default;

 private:
  std::vector<Segment> segments_;
  Index profile_count_ = 0;
  Index emb_dim_ = 0;
  int num_classes_ = 0;
};

// Profile ids picked per speaker by sample_consecutive_profiles().
struct ProfileSample {
  std::map<ClassIndex, std::vector<std::string>> per_speaker;
  int count_per_speaker = 0;

  std::set<std::string> all_ids() const;
  bool operator==(const ProfileSample &other) const = default;
};

// Embedding-set file (JSON): {"version": 1, "dim", "num_classes",
// "segments": [{"id", "kind": "profile"|"test", "speaker": int|null,
// "vector": [...]}]}.
SegmentSet parse_segment_set(std::string_view text);
SegmentSet load_segment_set(const std::filesystem::path &path);
std::string serialize_segment_set(const SegmentSet &set);
void save_segment_set(const SegmentSet &set, const std::filesystem::path &path);

// Elementwise mean. Reduces frame-level embeddings to one segment vector.
Vector average_vectors(std::span<const Vector> vectors);

// For each speaker, draws a start index uniformly in [0, n_s - k] and takes the
// k consecutive profiles (in set order) from there. No wrap-around.
ProfileSample sample_consecutive_profiles(const SegmentSet &set, int k,
                                          std::uint64_t seed);

// Keeps only the sampled profiles (original order); tests are untouched.
SegmentSet restrict_to_sample(const SegmentSet &set, const ProfileSample &sample);

}  // namespace graph_attrib

#endif  // GRAPH_ATTRIB_SEGMENTS_HPP_

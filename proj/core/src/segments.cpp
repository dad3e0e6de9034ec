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

#include "graph_attrib/segments.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "graph_attrib/random.hpp"
#include "json.hpp"

namespace graph_attrib {

using nlohmann::json;

SegmentSet::SegmentSet(std::vector<Segment> segments, Index emb_dim,
                       int num_classes)
    : emb_dim_(emb_dim), num_classes_(num_classes) {
  if (emb_dim <= 0) throw Error("invalid dim: must be positive");
  if (num_classes <= 0) throw Error("invalid num_classes: must be positive");

  std::unordered_set<std::string> ids;
  std::vector<int> profiles_per_class(num_classes, 0);
  for (const Segment &s : segments) {
    if (!ids.insert(s.id).second) throw Error("duplicate segment id '" + s.id + "'");
    if (s.vector.size() != emb_dim) {
      throw Error("dimension mismatch: segment '" + s.id + "' has " +
                  std::to_string(s.vector.size()) + " entries, expected " +
                  std::to_string(emb_dim));
    }
    if (!s.vector.allFinite() || s.vector.norm() == 0.0) {
      throw Error("invalid vector: segment '" + s.id + "' is non-finite or zero");
    }
    if (s.speaker && (*s.speaker < 0 || *s.speaker >= num_classes)) {
      throw Error("invalid speaker: segment '" + s.id + "' has speaker " +
                  std::to_string(*s.speaker) + " outside [0, " +
                  std::to_string(num_classes) + ")");
    }
    if (s.kind == SegmentKind::Profile) {
      if (!s.speaker) throw Error("unlabeled profile: segment '" + s.id + "'");
      ++profiles_per_class[*s.speaker];
    }
  }
  for (int c = 0; c < num_classes; ++c) {
    if (profiles_per_class[c] == 0) {
      throw Error("uncovered class: class " + std::to_string(c) +
                  " has no profile segment");
    }
  }

  std::stable_partition(segments.begin(), segments.end(), [](const Segment &s) {
    return s.kind == SegmentKind::Profile;
  });
  profile_count_ = std::count_if(segments.begin(), segments.end(), [](const Segment &s) {
    return s.kind == SegmentKind::Profile;
  });
  if (profile_count_ == static_cast<Index>(segments.size())) {
    throw Error("no test segments: need 0 < M < N");
  }
  segments_ = std::move(segments);
}

Matrix SegmentSet::features() const {
  Matrix x(size(), emb_dim_);
  for (Index i = 0; i < size(); ++i) x.row(i) = segments_[i].vector.transpose();
  return x;
}

std::vector<ClassIndex> SegmentSet::profile_labels() const {
  std::vector<ClassIndex> labels;
  labels.reserve(profile_count_);
  for (Index i = 0; i < profile_count_; ++i) labels.push_back(*segments_[i].speaker);
  return labels;
}

bool SegmentSet::has_test_labels() const {
  return std::all_of(segments_.begin() + profile_count_, segments_.end(),
                     [](const Segment &s) { return s.speaker.has_value(); });
}

SegmentSet SegmentSet::without_test_labels() const {
  SegmentSet copy = *this;
  for (auto it = copy.segments_.begin() + profile_count_; it != copy.segments_.end(); ++it) {
    it->speaker.reset();
  }
  return copy;
}

const Segment *SegmentSet::find(std::string_view id) const {
  auto it = std::find_if(segments_.begin(), segments_.end(),
                         [&](const Segment &s) { return s.id == id; });
  return it == segments_.end() ? nullptr : &*it;
}

std::set<std::string> ProfileSample::all_ids() const {
  std::set<std::string> ids;
  for (const auto &[speaker, list] : per_speaker) ids.insert(list.begin(), list.end());
  return ids;
}

namespace {

template <typename T>
T required_field(const json &obj, const char *key, const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error("malformed file: missing '" + std::string(key) + "' in " + where);
  try {
    return it->get<T>();
  } catch (const json::exception &) {
    throw Error("malformed file: field '" + std::string(key) + "' in " + where +
                " has the wrong type");
  }
}

}  // namespace

SegmentSet parse_segment_set(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw Error(std::string("malformed file: ") + e.what());
  }
  if (!doc.is_object()) throw Error("malformed file: top level must be an object");

  const auto version = required_field<int>(doc, "version", "document");
  if (version != 1) throw Error("malformed file: unsupported version " + std::to_string(version));
  const auto dim = required_field<Index>(doc, "dim", "document");
  const auto num_classes = required_field<int>(doc, "num_classes", "document");
  auto seg_it = doc.find("segments");
  if (seg_it == doc.end() || !seg_it->is_array()) {
    throw Error("malformed file: 'segments' must be an array");
  }

  std::vector<Segment> segments;
  segments.reserve(seg_it->size());
  for (std::size_t n = 0; n < seg_it->size(); ++n) {
    const json &item = (*seg_it)[n];
    const std::string where = "segments[" + std::to_string(n) + "]";
    if (!item.is_object()) throw Error("malformed file: " + where + " is not an object");
    Segment s;
    s.id = required_field<std::string>(item, "id", where);
    const auto kind = required_field<std::string>(item, "kind", where);
    if (kind == "profile") {
      s.kind = SegmentKind::Profile;
    } else if (kind == "test") {
      s.kind = SegmentKind::Test;
    } else {
      throw Error("malformed file: " + where + " has unknown kind '" + kind + "'");
    }
    auto spk = item.find("speaker");
    if (spk != item.end() && !spk->is_null()) {
      if (!spk->is_number_integer()) {
        throw Error("malformed file: " + where + " speaker must be an integer or null");
      }
      s.speaker = spk->get<ClassIndex>();
    }
    auto vec = item.find("vector");
    if (vec == item.end() || !vec->is_array()) {
      throw Error("malformed file: " + where + " needs a 'vector' array");
    }
    s.vector.resize(static_cast<Index>(vec->size()));
    for (std::size_t d = 0; d < vec->size(); ++d) {
      if (!(*vec)[d].is_number()) {
        throw Error("malformed file: " + where + " vector entry " + std::to_string(d) +
                    " is not a number");
      }
      s.vector[static_cast<Index>(d)] = (*vec)[d].get<double>();
    }
    segments.push_back(std::move(s));
  }
  return SegmentSet(std::move(segments), dim, num_classes);
}

SegmentSet load_segment_set(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_segment_set(buffer.str());
}

std::string serialize_segment_set(const SegmentSet &set) {
  json segments = json::array();
  for (const Segment &s : set.segments()) {
    json item;
    item["id"] = s.id;
    item["kind"] = s.kind == SegmentKind::Profile ? "profile" : "test";
    item["speaker"] = s.speaker ? json(*s.speaker) : json(nullptr);
    item["vector"] = std::vector<double>(s.vector.data(), s.vector.data() + s.vector.size());
    segments.push_back(std::move(item));
  }
  json doc;
  doc["version"] = 1;
  doc["dim"] = set.emb_dim();
  doc["num_classes"] = set.num_classes();
  doc["segments"] = std::move(segments);
  return doc.dump(1) + "\n";
}

void save_segment_set(const SegmentSet &set, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << serialize_segment_set(set);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

Vector average_vectors(std::span<const Vector> vectors) {
  if (vectors.empty()) throw Error("average_vectors: empty list");
  Vector sum = Vector::Zero(vectors.front().size());
  for (const Vector &v : vectors) {
    if (v.size() != sum.size()) throw Error("average_vectors: dimension mismatch");
    sum += v;
  }
  return sum / static_cast<double>(vectors.size());
}

ProfileSample sample_consecutive_profiles(const SegmentSet &set, int k,
                                          std::uint64_t seed) {
  if (k <= 0) throw Error("sample_consecutive_profiles: k must be positive");
  std::vector<std::vector<std::string>> by_speaker(set.num_classes());
  for (Index i = 0; i < set.profile_count(); ++i) {
    by_speaker[*set[i].speaker].push_back(set[i].id);
  }
  Rng rng(seed);
  ProfileSample sample;
  sample.count_per_speaker = k;
  for (int c = 0; c < set.num_classes(); ++c) {
    const auto &ids = by_speaker[c];
    const auto available = static_cast<int>(ids.size());
    if (available < k) {
      throw Error("insufficient profiles: speaker " + std::to_string(c) + " has " +
                  std::to_string(available) + " profile segments, need " +
                  std::to_string(k));
    }
    const auto start = static_cast<int>(rng.uniform_index(available - k + 1));
    sample.per_speaker[c].assign(ids.begin() + start, ids.begin() + start + k);
  }
  return sample;
}

SegmentSet restrict_to_sample(const SegmentSet &set, const ProfileSample &sample) {
  const std::set<std::string> keep = sample.all_ids();
  for (const std::string &id : keep) {
    const Segment *s = set.find(id);
    if (s == nullptr) throw Error("unknown id '" + id + "' in profile sample");
    if (s->kind != SegmentKind::Profile) {
      throw Error("sampled id '" + id + "' is not a profile segment");
    }
  }
  std::vector<Segment> kept;
  kept.reserve(keep.size() + static_cast<std::size_t>(set.test_count()));
  for (const Segment &s : set.segments()) {
    if (s.kind == SegmentKind::Test || keep.count(s.id) > 0) kept.push_back(s);
  }
  return SegmentSet(std::move(kept), set.emb_dim(), set.num_classes());
}

}  // namespace graph_attrib

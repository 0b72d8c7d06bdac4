// SPDX-License-Identifier: Apache-2.0

#include "odal/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "odal/error.hpp"
#include "odal/rng.hpp"

namespace odal {

namespace fs = std::filesystem;

namespace {

bool is_image_file(const fs::path& p) {
  const std::string ext = normalize_token(p.extension().string());
  return ext == ".ppm" || ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

nlohmann::json read_json_file(const fs::path& path, ErrorCode code, const std::string& context) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(code, context + e.what());
  }
}

void require_unique_ids(const DatasetManifest& m) {
  std::set<std::string> seen;
  for (const auto& f : m.frames) {
    if (!seen.insert(f.frame_id).second) throw Error(ErrorCode::kDuplicateFrame, "\"" + f.frame_id + "\"");
  }
}

}  // namespace

const FrameLabel* DatasetManifest::find(std::string_view frame_id) const {
  const auto it = std::find_if(frames.begin(), frames.end(), [&](const FrameLabel& f) { return f.frame_id == frame_id; });
  return it == frames.end() ? nullptr : &*it;
}

DatasetManifest load_manifest(const fs::path& dir, const CabinOntology& ontology) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kIo, dir.string() + " is not a directory");
  std::vector<fs::path> images;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) images.push_back(entry.path());
  }
  std::sort(images.begin(), images.end());

  DatasetManifest m;
  m.source_dir = dir;
  m.ontology_ref = ontology.checksum();
  for (const auto& image : images) {
    const std::string frame_id = image.stem().string();
    const fs::path label_path = dir / (frame_id + ".json");
    if (!fs::exists(label_path)) throw Error(ErrorCode::kMissingLabel, "frame \"" + frame_id + "\"");
    const auto doc = read_json_file(label_path, ErrorCode::kMalformedLabel, "frame \"" + frame_id + "\": ");
    FrameLabel frame;
    frame.frame_id = frame_id;
    frame.image_ref = image.filename().string();
    frame.objects = parse_label_objects(doc, ontology, frame_id);
    m.frames.push_back(std::move(frame));
  }
  std::stable_sort(m.frames.begin(), m.frames.end(),
                   [](const FrameLabel& a, const FrameLabel& b) { return a.frame_id < b.frame_id; });
  require_unique_ids(m);
  return m;
}

DatasetManifest load_dataset(const fs::path& path, const CabinOntology& ontology) {
  if (fs::is_directory(path)) return load_manifest(path, ontology);
  auto doc = read_json_file(path, ErrorCode::kMalformedLabel, path.string() + ": ");
  auto m = manifest_from_json(doc, ontology);
  m.source_dir = path.parent_path();
  return m;
}

nlohmann::json manifest_to_json(const DatasetManifest& manifest) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& f : manifest.frames) doc.push_back(frame_to_json(f));
  return doc;
}

DatasetManifest manifest_from_json(const nlohmann::json& doc, const CabinOntology& ontology) {
  if (!doc.is_array()) throw Error(ErrorCode::kMalformedLabel, "manifest must be a JSON array");
  DatasetManifest m;
  m.ontology_ref = ontology.checksum();
  for (const auto& entry : doc) m.frames.push_back(frame_from_json(entry, ontology));
  require_unique_ids(m);
  return m;
}

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << manifest_to_json(manifest).dump(2) << "\n";
}

DatasetManifest with_absolute_refs(const DatasetManifest& manifest) {
  DatasetManifest out = manifest;
  for (auto& f : out.frames) {
    fs::path ref(f.image_ref);
    if (ref.is_relative()) f.image_ref = fs::absolute(manifest.source_dir / ref).lexically_normal().string();
  }
  return out;
}

SplitResult split_dataset(const DatasetManifest& manifest, double train_fraction, std::uint64_t seed) {
  if (manifest.empty()) throw Error(ErrorCode::kEmptyDataset, "cannot split an empty dataset");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train fraction must lie strictly between 0 and 1");
  }
  const std::size_t n = manifest.size();
  // The epsilon keeps products such as 0.29 * 100 from flooring one short.
  const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction + 1e-9));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  SeededStream rng(seed);
  rng.shuffle(std::span(order));

  SplitResult result;
  for (auto* part : {&result.train, &result.val}) {
    part->source_dir = manifest.source_dir;
    part->ontology_ref = manifest.ontology_ref;
  }
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_train ? result.train : result.val).frames.push_back(manifest.frames[order[i]]);
  }
  for (auto* part : {&result.train, &result.val}) {
    std::sort(part->frames.begin(), part->frames.end(),
              [](const FrameLabel& a, const FrameLabel& b) { return a.frame_id < b.frame_id; });
  }
  if (result.train.empty()) result.warnings.push_back("training split is empty (floor of " + std::to_string(n) + " x fraction)");
  if (result.val.empty()) result.warnings.push_back("validation split is empty");
  return result;
}

std::map<std::string, int> visible_class_counts(const DatasetManifest& manifest, const CabinOntology& ontology) {
  std::map<std::string, int> counts;
  for (const auto& c : ontology.classes()) counts[c] = 0;
  for (const auto& f : manifest.frames) {
    for (const auto& [name, state] : f.objects) {
      if (state.is_visible) ++counts[name];
    }
  }
  return counts;
}

UpsampleResult upsample_rare(const DatasetManifest& manifest, const CabinOntology& ontology, int min_count,
                             std::uint64_t seed) {
  if (min_count < 1) throw Error(ErrorCode::kInvalidArgument, "min_count must be at least 1");
  UpsampleResult result;
  result.manifest = manifest;
  auto counts = visible_class_counts(manifest, ontology);

  std::vector<std::pair<int, std::string>> deficient;
  for (const auto& [name, count] : counts) {
    if (count == 0) {
      result.warnings.push_back("class \"" + name + "\" has no visible occurrence; nothing to up-sample");
    } else if (count < min_count) {
      deficient.emplace_back(count, name);
    }
  }
  std::sort(deficient.begin(), deficient.end());

  std::map<std::string, int> copies_of;  // source frame id -> duplicates made so far
  for (const auto& [initial, name] : deficient) {
    if (counts[name] >= min_count) continue;  // lifted by an earlier class's duplicates
    std::vector<std::size_t> sources;
    for (std::size_t i = 0; i < manifest.frames.size(); ++i) {
      const auto it = manifest.frames[i].objects.find(name);
      if (it != manifest.frames[i].objects.end() && it->second.is_visible) sources.push_back(i);
    }
    SeededStream rng(derive_seed(seed, name));
    rng.shuffle(std::span(sources));
    for (std::size_t k = 0; counts[name] < min_count; ++k) {
      const FrameLabel& src = manifest.frames[sources[k % sources.size()]];
      FrameLabel copy = src;
      copy.frame_id = src.frame_id + "__up" + std::to_string(++copies_of[src.frame_id]);
      for (const auto& [cls, state] : copy.objects) {
        if (state.is_visible) ++counts[cls];
      }
      result.manifest.frames.push_back(std::move(copy));
    }
  }
  return result;
}

void write_label_file(const fs::path& path, const FrameLabel& frame) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << label_objects_to_json(frame.objects).dump(2) << "\n";
}

}  // namespace odal

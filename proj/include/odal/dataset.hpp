// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "odal/image.hpp"
#include "odal/model.hpp"
#include "odal/ontology.hpp"

namespace odal {

// Relative image_refs resolve against source_dir.
struct DatasetManifest {
  std::vector<FrameLabel> frames;
  std::filesystem::path source_dir;
  std::string ontology_ref;  // CabinOntology::checksum() used for validation

  const FrameLabel* find(std::string_view frame_id) const;
  bool empty() const noexcept { return frames.empty(); }
  std::size_t size() const noexcept { return frames.size(); }
};

// Images (.ppm .png .jpg .jpeg .bmp) with sibling <frame_id>.json labels.
// Frames come back sorted by frame_id.
DatasetManifest load_manifest(const std::filesystem::path& dir, const CabinOntology& ontology);
// Reads either a dataset directory or an exported manifest array.
DatasetManifest load_dataset(const std::filesystem::path& path, const CabinOntology& ontology);

nlohmann::json manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& doc, const CabinOntology& ontology);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);
// Copy whose image_refs are absolute, for manifests written away from the images.
DatasetManifest with_absolute_refs(const DatasetManifest& manifest);

struct SplitResult {
  DatasetManifest train;
  DatasetManifest val;
  std::vector<std::string> warnings;
};

// Seeded uniform split; |train| = floor(N * train_fraction).
SplitResult split_dataset(const DatasetManifest& manifest, double train_fraction, std::uint64_t seed);

struct UpsampleResult {
  DatasetManifest manifest;
  std::vector<std::string> warnings;
};

// Duplicates frames holding under-represented classes until every class has
// at least min_count visible occurrences. Copies get "__up<k>" suffixes.
UpsampleResult upsample_rare(const DatasetManifest& manifest, const CabinOntology& ontology, int min_count,
                             std::uint64_t seed);

// Per-class visible occurrence counts (classes absent from the data map to 0).
std::map<std::string, int> visible_class_counts(const DatasetManifest& manifest, const CabinOntology& ontology);

struct Fixture {
  DatasetManifest manifest;
  std::vector<RgbImage> images;  // parallel to manifest.frames
};

// Synthetic stand-in for a recorded dataset: flat-colour images with 0-4
// visible objects and a skewed position distribution.
Fixture generate_fixture(int n_frames, const CabinOntology& ontology, std::uint64_t seed);
// Writes <frame_id>.ppm and <frame_id>.json per frame into dir.
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);
void write_label_file(const std::filesystem::path& path, const FrameLabel& frame);

}  // namespace odal

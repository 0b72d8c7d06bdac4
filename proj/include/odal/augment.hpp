// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "odal/dataset.hpp"

namespace odal {

enum class AugmentLevel { kNone, kBasic, kExtensive };

std::string_view augment_level_name(AugmentLevel level);
AugmentLevel augment_level_from_name(std::string_view name);

struct Rotate {
  double degrees = 0.0;
  friend bool operator==(const Rotate&, const Rotate&) = default;
};
struct HFlip {
  friend bool operator==(const HFlip&, const HFlip&) = default;
};
struct Brightness {
  double factor = 1.0;
  friend bool operator==(const Brightness&, const Brightness&) = default;
};
struct Affine {
  double shear_degrees = 0.0;
  double translate_x = 0.0;  // fraction of width
  double translate_y = 0.0;  // fraction of height
  friend bool operator==(const Affine&, const Affine&) = default;
};
struct Sharpness {
  double factor = 1.0;
  friend bool operator==(const Sharpness&, const Sharpness&) = default;
};

using TransformSpec = std::variant<Rotate, HFlip, Brightness, Affine, Sharpness>;

// Sampling ranges; defaults are mild so cabin geometry stays recognizable.
struct AugmentRanges {
  double max_rotation_degrees = 15.0;
  double flip_probability = 0.5;
  double brightness_min = 0.7;
  double brightness_max = 1.3;
  double max_shear_degrees = 10.0;
  double max_translate = 0.1;
  double sharpness_min = 0.5;
  double sharpness_max = 2.0;
};

bool within_ranges(const TransformSpec& spec, const AugmentRanges& ranges);

struct AugmentationItem {
  std::string frame_id;
  std::vector<TransformSpec> transforms;
  friend bool operator==(const AugmentationItem&, const AugmentationItem&) = default;
};

struct AugmentationPlan {
  AugmentLevel level = AugmentLevel::kNone;
  std::uint64_t seed = 0;
  std::vector<AugmentationItem> items;
  friend bool operator==(const AugmentationPlan&, const AugmentationPlan&) = default;
};

AugmentationPlan plan_augmentations(const DatasetManifest& manifest, AugmentLevel level, std::uint64_t seed,
                                    const AugmentRanges& ranges = {});

nlohmann::json transform_to_json(const TransformSpec& spec);
TransformSpec transform_from_json(const nlohmann::json& doc);
nlohmann::json plan_to_json(const AugmentationPlan& plan);
AugmentationPlan plan_from_json(const nlohmann::json& doc);

// Applies one transform. HFlip also mirrors object positions unless
// mirror_labels is false; every other transform leaves the label unchanged.
std::pair<RgbImage, FrameLabel> apply_transform(const RgbImage& image, const FrameLabel& label,
                                                const TransformSpec& spec, const CabinOntology& ontology,
                                                bool mirror_labels = true);

std::pair<RgbImage, FrameLabel> apply_item(const RgbImage& image, const FrameLabel& label,
                                           const AugmentationItem& item, const CabinOntology& ontology,
                                           bool mirror_labels = true);

}  // namespace odal

// SPDX-License-Identifier: Apache-2.0

#include "odal/augment.hpp"

#include "odal/error.hpp"
#include "odal/rng.hpp"

namespace odal {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool in(double v, double lo, double hi) { return v >= lo && v <= hi; }

}  // namespace

std::string_view augment_level_name(AugmentLevel level) {
  switch (level) {
    case AugmentLevel::kNone: return "none";
    case AugmentLevel::kBasic: return "basic";
    case AugmentLevel::kExtensive: return "extensive";
  }
  return "none";
}

AugmentLevel augment_level_from_name(std::string_view name) {
  const std::string n = normalize_token(name);
  if (n == "none") return AugmentLevel::kNone;
  if (n == "basic") return AugmentLevel::kBasic;
  if (n == "extensive") return AugmentLevel::kExtensive;
  throw Error(ErrorCode::kInvalidArgument, "unknown augmentation level \"" + std::string(name) + "\"");
}

bool within_ranges(const TransformSpec& spec, const AugmentRanges& r) {
  return std::visit(Overloaded{
                        [&](const Rotate& t) { return in(t.degrees, -r.max_rotation_degrees, r.max_rotation_degrees); },
                        [](const HFlip&) { return true; },
                        [&](const Brightness& t) { return in(t.factor, r.brightness_min, r.brightness_max); },
                        [&](const Affine& t) {
                          return in(t.shear_degrees, -r.max_shear_degrees, r.max_shear_degrees) &&
                                 in(t.translate_x, -r.max_translate, r.max_translate) &&
                                 in(t.translate_y, -r.max_translate, r.max_translate);
                        },
                        [&](const Sharpness& t) { return in(t.factor, r.sharpness_min, r.sharpness_max); },
                    },
                    spec);
}

AugmentationPlan plan_augmentations(const DatasetManifest& manifest, AugmentLevel level, std::uint64_t seed,
                                    const AugmentRanges& r) {
  AugmentationPlan plan{level, seed, {}};
  if (level == AugmentLevel::kNone) return plan;
  for (const auto& frame : manifest.frames) {
    SeededStream rng(derive_seed(seed, frame.frame_id));
    AugmentationItem item{frame.frame_id, {}};
    item.transforms.emplace_back(Rotate{rng.uniform(-r.max_rotation_degrees, r.max_rotation_degrees)});
    if (rng.bernoulli(r.flip_probability)) item.transforms.emplace_back(HFlip{});
    item.transforms.emplace_back(Brightness{rng.uniform(r.brightness_min, r.brightness_max)});
    if (level == AugmentLevel::kExtensive) {
      Affine a;
      a.shear_degrees = rng.uniform(-r.max_shear_degrees, r.max_shear_degrees);
      a.translate_x = rng.uniform(-r.max_translate, r.max_translate);
      a.translate_y = rng.uniform(-r.max_translate, r.max_translate);
      item.transforms.emplace_back(a);
      item.transforms.emplace_back(Sharpness{rng.uniform(r.sharpness_min, r.sharpness_max)});
    }
    plan.items.push_back(std::move(item));
  }
  return plan;
}

nlohmann::json transform_to_json(const TransformSpec& spec) {
  return std::visit(
      Overloaded{
          [](const Rotate& t) { return nlohmann::json{{"kind", "rotate"}, {"degrees", t.degrees}}; },
          [](const HFlip&) { return nlohmann::json{{"kind", "hflip"}}; },
          [](const Brightness& t) { return nlohmann::json{{"kind", "brightness"}, {"factor", t.factor}}; },
          [](const Affine& t) {
            return nlohmann::json{{"kind", "affine"},
                                  {"shear_degrees", t.shear_degrees},
                                  {"translate_x", t.translate_x},
                                  {"translate_y", t.translate_y}};
          },
          [](const Sharpness& t) { return nlohmann::json{{"kind", "sharpness"}, {"factor", t.factor}}; },
      },
      spec);
}

TransformSpec transform_from_json(const nlohmann::json& doc) {
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "rotate") return Rotate{doc.at("degrees").get<double>()};
    if (kind == "hflip") return HFlip{};
    if (kind == "brightness") return Brightness{doc.at("factor").get<double>()};
    if (kind == "affine") {
      return Affine{doc.at("shear_degrees").get<double>(), doc.at("translate_x").get<double>(),
                    doc.at("translate_y").get<double>()};
    }
    if (kind == "sharpness") return Sharpness{doc.at("factor").get<double>()};
    throw Error(ErrorCode::kInvalidArgument, "unknown transform kind \"" + kind + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed transform: ") + e.what());
  }
}

nlohmann::json plan_to_json(const AugmentationPlan& plan) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& item : plan.items) {
    nlohmann::json transforms = nlohmann::json::array();
    for (const auto& t : item.transforms) transforms.push_back(transform_to_json(t));
    items.push_back({{"frame_id", item.frame_id}, {"transforms", transforms}});
  }
  return {{"level", augment_level_name(plan.level)}, {"seed", plan.seed}, {"items", items}};
}

AugmentationPlan plan_from_json(const nlohmann::json& doc) {
  try {
    AugmentationPlan plan;
    plan.level = augment_level_from_name(doc.at("level").get<std::string>());
    plan.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& item : doc.at("items")) {
      AugmentationItem parsed{item.at("frame_id").get<std::string>(), {}};
      for (const auto& t : item.at("transforms")) parsed.transforms.push_back(transform_from_json(t));
      plan.items.push_back(std::move(parsed));
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed augmentation plan: ") + e.what());
  }
}

std::pair<RgbImage, FrameLabel> apply_transform(const RgbImage& image, const FrameLabel& label,
                                                const TransformSpec& spec, const CabinOntology& ontology,
                                                bool mirror_labels) {
  FrameLabel out_label = label;
  RgbImage out_image = std::visit(
      Overloaded{
          [&](const Rotate& t) { return rotate(image, t.degrees); },
          [&](const HFlip&) {
            if (mirror_labels) {
              for (auto& [name, state] : out_label.objects) state.position = ontology.mirror_position(state.position);
            }
            return hflip(image);
          },
          [&](const Brightness& t) { return adjust_brightness(image, t.factor); },
          [&](const Affine& t) { return affine(image, t.shear_degrees, t.translate_x, t.translate_y); },
          [&](const Sharpness& t) { return adjust_sharpness(image, t.factor); },
      },
      spec);
  return {std::move(out_image), std::move(out_label)};
}

std::pair<RgbImage, FrameLabel> apply_item(const RgbImage& image, const FrameLabel& label,
                                           const AugmentationItem& item, const CabinOntology& ontology,
                                           bool mirror_labels) {
  std::pair<RgbImage, FrameLabel> current{image, label};
  for (const auto& t : item.transforms) current = apply_transform(current.first, current.second, t, ontology, mirror_labels);
  return current;
}

}  // namespace odal

// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "odal/augment.hpp"
#include "odal/error.hpp"
#include "odal/image.hpp"

using odal::AugmentLevel;
using odal::CabinOntology;

namespace {

const CabinOntology& onto() { return CabinOntology::builtin(); }

template <typename T>
bool holds(const odal::TransformSpec& s) {
  return std::holds_alternative<T>(s);
}

}  // namespace

TEST(AugmentPlan, NoneIsEmpty) {
  const auto fx = odal::generate_fixture(10, onto(), 1);
  EXPECT_TRUE(odal::plan_augmentations(fx.manifest, AugmentLevel::kNone, 1).items.empty());
}

TEST(AugmentPlan, BasicDrawsOnlyBasicKinds) {
  const auto fx = odal::generate_fixture(200, onto(), 1);
  const auto plan = odal::plan_augmentations(fx.manifest, AugmentLevel::kBasic, 4);
  ASSERT_EQ(plan.items.size(), 200u);
  int flips = 0;
  for (const auto& item : plan.items) {
    for (const auto& t : item.transforms) {
      EXPECT_TRUE(holds<odal::Rotate>(t) || holds<odal::HFlip>(t) || holds<odal::Brightness>(t));
      EXPECT_TRUE(odal::within_ranges(t, {}));
      flips += holds<odal::HFlip>(t);
    }
  }
  EXPECT_GT(flips, 60);
  EXPECT_LT(flips, 140);
}

TEST(AugmentPlan, ExtensiveAddsAffineAndSharpness) {
  const auto fx = odal::generate_fixture(50, onto(), 1);
  const auto plan = odal::plan_augmentations(fx.manifest, AugmentLevel::kExtensive, 4);
  for (const auto& item : plan.items) {
    bool affine = false, sharp = false;
    for (const auto& t : item.transforms) {
      affine |= holds<odal::Affine>(t);
      sharp |= holds<odal::Sharpness>(t);
      EXPECT_TRUE(odal::within_ranges(t, {}));
    }
    EXPECT_TRUE(affine && sharp);
  }
}

TEST(AugmentPlan, PureInManifestLevelSeed) {
  const auto fx = odal::generate_fixture(30, onto(), 1);
  const auto a = odal::plan_augmentations(fx.manifest, AugmentLevel::kExtensive, 11);
  EXPECT_EQ(a, odal::plan_augmentations(fx.manifest, AugmentLevel::kExtensive, 11));
  EXPECT_NE(a, odal::plan_augmentations(fx.manifest, AugmentLevel::kExtensive, 12));
}

TEST(AugmentPlan, JsonRoundTrip) {
  const auto fx = odal::generate_fixture(30, onto(), 1);
  const auto plan = odal::plan_augmentations(fx.manifest, AugmentLevel::kExtensive, 5);
  EXPECT_EQ(odal::plan_from_json(odal::plan_to_json(plan)), plan);
  EXPECT_THROW(odal::transform_from_json({{"kind", "warp"}}), odal::Error);
}

TEST(AugmentRanges, RejectOutOfRange) {
  EXPECT_FALSE(odal::within_ranges(odal::Rotate{16.0}, {}));
  EXPECT_FALSE(odal::within_ranges(odal::Brightness{1.5}, {}));
  EXPECT_FALSE(odal::within_ranges(odal::Affine{0.0, 0.2, 0.0}, {}));
  EXPECT_FALSE(odal::within_ranges(odal::Sharpness{0.1}, {}));
  EXPECT_TRUE(odal::within_ranges(odal::Rotate{-15.0}, {}));
}

TEST(AugmentApply, HFlipMirrorsLabels) {
  odal::FrameLabel label{"f", "f.ppm",
                         {{"backpack", {"Seat.Row2.Left", true}},
                          {"laptop", {"Seat.Row2.Middle", true}},
                          {"wallet", {"Seat.Row1.Right", false}}}};
  const auto img = odal::RgbImage::filled(4, 2, 10, 20, 30);
  const auto [flipped, mirrored] = odal::apply_transform(img, label, odal::HFlip{}, onto());
  EXPECT_EQ(mirrored.objects.at("backpack").position, "Seat.Row2.Right");
  EXPECT_EQ(mirrored.objects.at("laptop").position, "Seat.Row2.Middle");
  EXPECT_EQ(mirrored.objects.at("wallet").position, "Seat.Row1.Left");
  EXPECT_FALSE(mirrored.objects.at("wallet").is_visible);
  const auto [_, kept] = odal::apply_transform(img, label, odal::HFlip{}, onto(), false);
  EXPECT_EQ(kept, label);
}

TEST(AugmentApply, HFlipTwiceIsIdentity) {
  std::mt19937 rng(4);
  const auto fx = odal::generate_fixture(50, onto(), 6);
  for (std::size_t i = 0; i < fx.manifest.size(); ++i) {
    odal::RgbImage img = odal::RgbImage::filled(static_cast<int>(1 + rng() % 9), static_cast<int>(1 + rng() % 9), 0, 0, 0);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng());
    odal::AugmentationItem item{fx.manifest.frames[i].frame_id, {odal::HFlip{}, odal::HFlip{}}};
    const auto [out_img, out_label] = odal::apply_item(img, fx.manifest.frames[i], item, onto());
    EXPECT_EQ(out_img, img);
    EXPECT_EQ(out_label, fx.manifest.frames[i]);
  }
}

TEST(AugmentApply, NonFlipTransformsKeepLabels) {
  const auto fx = odal::generate_fixture(5, onto(), 2);
  const auto& label = fx.manifest.frames[0];
  for (const odal::TransformSpec& t : std::vector<odal::TransformSpec>{
           odal::Rotate{10.0}, odal::Brightness{1.2}, odal::Affine{5.0, 0.05, -0.05}, odal::Sharpness{1.8}}) {
    const auto [img, out] = odal::apply_transform(fx.images[0], label, t, onto());
    EXPECT_EQ(out, label);
    EXPECT_EQ(img.width, fx.images[0].width);
    EXPECT_EQ(img.height, fx.images[0].height);
  }
}

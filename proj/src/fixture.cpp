// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <numeric>

#include "odal/dataset.hpp"
#include "odal/error.hpp"
#include "odal/rng.hpp"

namespace odal {

namespace fs = std::filesystem;

namespace {

constexpr int kFixtureWidth = 32;
constexpr int kFixtureHeight = 24;
constexpr double kInvisibleExtraProbability = 0.15;

// Zipf-like weights: earlier positions are more frequent, UNDEFINED is last.
std::size_t draw_position(SeededStream& rng, std::size_t n_positions) {
  double total = 0.0;
  for (std::size_t k = 0; k < n_positions; ++k) total += 1.0 / static_cast<double>(k + 1);
  double u = rng.uniform01() * total;
  for (std::size_t k = 0; k < n_positions; ++k) {
    u -= 1.0 / static_cast<double>(k + 1);
    if (u < 0.0) return k;
  }
  return n_positions - 1;
}

}  // namespace

Fixture generate_fixture(int n_frames, const CabinOntology& ontology, std::uint64_t seed) {
  if (n_frames < 0) throw Error(ErrorCode::kInvalidArgument, "n_frames must be non-negative");
  Fixture fixture;
  fixture.manifest.ontology_ref = ontology.checksum();
  const auto& classes = ontology.classes();
  const auto& positions = ontology.positions();
  const int width = n_frames >= 10000 ? 5 : 4;

  for (int i = 0; i < n_frames; ++i) {
    SeededStream rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    char id[32];
    std::snprintf(id, sizeof(id), "fixture_%0*d", width, i);
    FrameLabel frame;
    frame.frame_id = id;
    frame.image_ref = frame.frame_id + ".ppm";

    std::vector<std::size_t> order(classes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span(order));
    const std::size_t n_visible = std::min<std::size_t>(rng.below(5), classes.size());
    for (std::size_t k = 0; k < n_visible; ++k) {
      frame.objects[classes[order[k]]] = ObjectState{positions[draw_position(rng, positions.size())], true};
    }
    if (n_visible < classes.size() && rng.bernoulli(kInvisibleExtraProbability)) {
      frame.objects[classes[order[n_visible]]] = ObjectState{positions[draw_position(rng, positions.size())], false};
    }
    fixture.images.push_back(RgbImage::filled(kFixtureWidth, kFixtureHeight, static_cast<std::uint8_t>(rng.below(256)),
                                              static_cast<std::uint8_t>(rng.below(256)),
                                              static_cast<std::uint8_t>(rng.below(256))));
    fixture.manifest.frames.push_back(std::move(frame));
  }
  return fixture;
}

void write_fixture(const Fixture& fixture, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < fixture.manifest.frames.size(); ++i) {
    const auto& frame = fixture.manifest.frames[i];
    write_ppm(dir / (frame.frame_id + ".ppm"), fixture.images[i]);
    write_label_file(dir / (frame.frame_id + ".json"), frame);
  }
}

}  // namespace odal

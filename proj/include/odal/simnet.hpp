// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "odal/dataset.hpp"
#include "odal/wire.hpp"

namespace odal {

struct LinkModel {
  double bandwidth_up = 10'000'000.0;  // bytes per second
  double rtt_s = 0.04;
  double jitter_std_s = 0.0;
  std::uint64_t seed = 1;

  void validate() const;  // throws kConfigInvalid
};

struct ComputeProfile {
  double edge_encode_s = 0.08;
  double edge_full_s = 2.5;
  double cloud_decode_s = 0.35;

  void validate() const;
};

struct ImageMeta {
  std::uint64_t width = 4000;
  std::uint64_t height = 3000;
  double compression_factor = 1.0;
};

// ceil(w * h * 3 / compression_factor).
std::uint64_t payload_bytes(const ImageMeta& image);
// Full envelope size of an embedding upload described by meta.
std::uint64_t payload_bytes(const EmbeddingMeta& embedding);

// Upload time of one message: rtt/2 + size/bandwidth plus a Gaussian jitter
// sample clamped at zero. The sample of call k depends only on (seed, k).
class LinkSimulator {
 public:
  explicit LinkSimulator(LinkModel link);
  double upload(std::uint64_t size);  // uses and advances the call index
  double upload_at(std::uint64_t size, std::uint64_t call_index) const;
  std::uint64_t calls() const noexcept { return calls_; }

 private:
  LinkModel link_;
  std::uint64_t calls_ = 0;
};

enum class Scenario { kRawUpload, kEmbeddingUpload, kOnBoardOnly };
inline constexpr std::array<Scenario, 3> kScenarios{Scenario::kRawUpload, Scenario::kEmbeddingUpload,
                                                    Scenario::kOnBoardOnly};
std::string_view scenario_name(Scenario scenario);

struct ScenarioResult {
  Scenario scenario = Scenario::kRawUpload;
  std::vector<double> latency_s;           // per frame, manifest order
  std::vector<std::uint64_t> frame_bytes;  // uplink per frame
  std::uint64_t uplink_bytes = 0;
  double p50_s = 0.0;
  double p95_s = 0.0;
  double mean_s = 0.0;
};

struct SimReport {
  std::vector<std::string> frame_ids;
  std::array<ScenarioResult, 3> scenarios;

  const ScenarioResult& get(Scenario s) const { return scenarios[static_cast<std::size_t>(s)]; }
};

// Nearest-rank percentile of an unsorted sample; 0 for an empty one.
double percentile(std::vector<double> values, double p);

// Per frame: RawUpload = upload(image) + cloud_decode, EmbeddingUpload =
// edge_encode + upload(envelope) + cloud_decode, OnBoardOnly = edge_full with
// no uplink. Upload calls alternate raw, embedding per frame. The embedding
// envelope carries each frame's id. Throws kEmptyDataset.
SimReport compare_scenarios(const DatasetManifest& manifest, const LinkModel& link, const ComputeProfile& compute,
                            const ImageMeta& image, const EmbeddingMeta& embedding);

nlohmann::json sim_report_to_json(const SimReport& report);
// One row per frame: frame_id, then latency and uplink bytes per scenario.
std::string sim_report_to_csv(const SimReport& report);

struct ScenarioConfig {
  LinkModel link;
  ComputeProfile compute;
  ImageMeta image;
  EmbeddingMeta embedding;

  static ScenarioConfig builtin();
  static ScenarioConfig from_json(const nlohmann::json& doc);
  static ScenarioConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

}  // namespace odal

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "odal/backends.hpp"
#include "odal/dataset.hpp"
#include "odal/error.hpp"

namespace odal {

enum class TransportMode { kLoopback, kNetworked };

struct PipelineConfig {
  TransportMode mode = TransportMode::kLoopback;
  std::string cloud_url;                   // networked mode
  std::shared_ptr<LlmBackend> llm;         // loopback mode
  std::shared_ptr<VisionBackend> vision;   // defaults to a MockVisionBackend
  PromptVersion prompt_version = PromptVersion::kV1;
  int parallel = 1;                        // in-flight bound, networked mode only
  double timeout_s = 30.0;
  // Reads the image bytes of a frame; defaults to reading image_ref from disk
  // (relative paths resolve against the manifest source_dir).
  std::function<std::vector<std::byte>(const FrameLabel&)> image_loader;
};

struct RunRecord {
  std::string frame_id;
  std::optional<ModelResponse> response;
  std::optional<ErrorCode> error_code;
  std::string error_message;
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
  double encode_ms = 0.0;
  double infer_ms = 0.0;
  double total_ms = 0.0;

  bool ok() const noexcept { return response.has_value(); }
};

// One record per frame, in manifest order. A failing frame records its error
// and the batch carries on. Throws kConfigInvalid for unusable configs.
std::vector<RunRecord> run_pipeline(const DatasetManifest& manifest, const PipelineConfig& config);

// Wall-clock fields are only written when include_timing is set so that
// replays of the same inputs produce identical files.
nlohmann::json run_record_to_json(const RunRecord& record, bool include_timing = false);
RunRecord run_record_from_json(const nlohmann::json& doc);

std::vector<RunRecord> read_run_records(const std::filesystem::path& path);
void write_run_records(const std::filesystem::path& path, const std::vector<RunRecord>& records,
                       bool include_timing = false);

}  // namespace odal

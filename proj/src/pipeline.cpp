// SPDX-License-Identifier: Apache-2.0

#include "odal/pipeline.hpp"

#include <atomic>
#include <cstring>
#include <chrono>
#include <fstream>
#include <thread>

#include "odal/nodes.hpp"
#include "odal/wire.hpp"

namespace odal {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open image " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

// Runs one frame end to end. `send` carries the envelope to the cloud side.
template <typename Send>
RunRecord process_frame(const FrameLabel& frame, const PipelineConfig& cfg, VisionBackend& vision, Send&& send) {
  RunRecord record;
  record.frame_id = frame.frame_id;
  const auto started = Clock::now();
  try {
    const auto image = cfg.image_loader(frame);
    const auto encode_start = Clock::now();
    const EmbeddingTensor tensor = edge_encode(image, vision);
    record.encode_ms = ms_since(encode_start);
    const auto envelope = encode_embedding_message(tensor, frame.frame_id, cfg.prompt_version);
    record.bytes_up = envelope.size();
    const auto infer_start = Clock::now();
    auto [response, reply_bytes] = send(std::span<const std::byte>(envelope));
    record.infer_ms = ms_since(infer_start);
    record.bytes_down = reply_bytes;
    record.response = std::move(response);
  } catch (const Error& e) {
    record.error_code = e.code();
    record.error_message = e.what();
  } catch (const std::exception& e) {
    record.error_code = ErrorCode::kIo;
    record.error_message = e.what();
  }
  record.total_ms = ms_since(started);
  return record;
}

}  // namespace

std::vector<RunRecord> run_pipeline(const DatasetManifest& manifest, const PipelineConfig& config) {
  PipelineConfig cfg = config;
  if (cfg.parallel < 1) throw Error(ErrorCode::kConfigInvalid, "parallel must be at least 1");
  if (cfg.mode == TransportMode::kLoopback && !cfg.llm) {
    throw Error(ErrorCode::kConfigInvalid, "loopback mode needs an in-process backend");
  }
  if (cfg.mode == TransportMode::kNetworked && cfg.cloud_url.empty()) {
    throw Error(ErrorCode::kConfigInvalid, "networked mode needs a cloud URL");
  }
  if (!cfg.vision) cfg.vision = std::make_shared<MockVisionBackend>();
  if (!cfg.image_loader) {
    const auto base = manifest.source_dir;
    cfg.image_loader = [base](const FrameLabel& f) {
      std::filesystem::path p(f.image_ref);
      if (p.is_relative() && !base.empty()) p = base / p;
      return read_file_bytes(p);
    };
  }

  std::vector<RunRecord> records(manifest.frames.size());
  if (cfg.mode == TransportMode::kLoopback) {
    CloudNode node(cfg.llm);
    for (std::size_t i = 0; i < manifest.frames.size(); ++i) {
      records[i] = process_frame(manifest.frames[i], cfg, *cfg.vision, [&](std::span<const std::byte> env) {
        ModelResponse r = node.infer(env);
        // Count the same reply bytes the HTTP transport would carry.
        const std::size_t reply_bytes = response_to_wire_json(r).dump().size();
        return std::pair{std::move(r), reply_bytes};
      });
    }
    return records;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    CloudClient client(cfg.cloud_url, cfg.timeout_s);
    for (std::size_t i = next++; i < manifest.frames.size(); i = next++) {
      records[i] = process_frame(manifest.frames[i], cfg, *cfg.vision,
                                 [&](std::span<const std::byte> env) { return client.infer(env); });
    }
  };
  const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.parallel), std::max<std::size_t>(manifest.frames.size(), 1));
  std::vector<std::thread> threads;
  for (std::size_t w = 1; w < n_workers; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return records;
}

nlohmann::json run_record_to_json(const RunRecord& r, bool include_timing) {
  nlohmann::json doc{{"frame_id", r.frame_id}, {"bytes_up", r.bytes_up}, {"bytes_down", r.bytes_down}};
  if (r.response) {
    doc["text"] = r.response->text;
    doc["token_count"] = r.response->token_count;
    doc["backend_id"] = r.response->backend_id;
    doc["truncated"] = r.response->truncated;
  }
  if (r.error_code) {
    doc["error"] = error_code_name(*r.error_code);
    doc["message"] = r.error_message;
  }
  if (include_timing) {
    doc["timing"] = {{"encode_ms", r.encode_ms}, {"infer_ms", r.infer_ms}, {"total_ms", r.total_ms}};
    if (r.response) doc["latency_ms"] = r.response->latency_ms;
  }
  return doc;
}

RunRecord run_record_from_json(const nlohmann::json& doc) {
  try {
    RunRecord r;
    r.frame_id = doc.at("frame_id").get<std::string>();
    r.bytes_up = doc.value("bytes_up", std::uint64_t{0});
    r.bytes_down = doc.value("bytes_down", std::uint64_t{0});
    if (doc.contains("text")) {
      ModelResponse resp;
      resp.frame_id = r.frame_id;
      resp.text = doc.at("text").get<std::string>();
      resp.token_count = doc.value("token_count", 0);
      resp.backend_id = doc.value("backend_id", std::string());
      resp.truncated = doc.value("truncated", false);
      resp.latency_ms = doc.value("latency_ms", 0.0);
      r.response = std::move(resp);
    }
    if (doc.contains("error")) {
      const std::string name = doc.at("error").get<std::string>();
      r.error_code = ErrorCode::kIo;
      for (int c = 0; c <= static_cast<int>(ErrorCode::kDuplicateFrame); ++c) {
        if (error_code_name(static_cast<ErrorCode>(c)) == name) r.error_code = static_cast<ErrorCode>(c);
      }
      r.error_message = doc.value("message", std::string());
    }
    if (doc.contains("timing")) {
      const auto& t = doc.at("timing");
      r.encode_ms = t.value("encode_ms", 0.0);
      r.infer_ms = t.value("infer_ms", 0.0);
      r.total_ms = t.value("total_ms", 0.0);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed run record: ") + e.what());
  }
}

std::vector<RunRecord> read_run_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(run_record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
    }
  }
  return out;
}

void write_run_records(const std::filesystem::path& path, const std::vector<RunRecord>& records, bool include_timing) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& r : records) out << run_record_to_json(r, include_timing).dump() << "\n";
}

}  // namespace odal

// SPDX-License-Identifier: Apache-2.0

#include "odal/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "odal/error.hpp"
#include "odal/resources.hpp"
#include "odal/rng.hpp"

namespace odal {

void LinkModel::validate() const {
  if (!(bandwidth_up > 0.0) || !std::isfinite(bandwidth_up)) throw Error(ErrorCode::kConfigInvalid, "bandwidth must be > 0");
  if (!(rtt_s >= 0.0)) throw Error(ErrorCode::kConfigInvalid, "rtt must be >= 0");
  if (!(jitter_std_s >= 0.0)) throw Error(ErrorCode::kConfigInvalid, "jitter must be >= 0");
}

void ComputeProfile::validate() const {
  if (!(edge_encode_s >= 0.0) || !(edge_full_s >= 0.0) || !(cloud_decode_s >= 0.0)) {
    throw Error(ErrorCode::kConfigInvalid, "compute times must be >= 0");
  }
}

std::uint64_t payload_bytes(const ImageMeta& image) {
  if (image.width == 0 || image.height == 0 || !(image.compression_factor > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "image dimensions and compression factor must be positive");
  }
  const std::uint64_t raw = image.width * image.height * 3;
  const double f = image.compression_factor;
  if (f == std::floor(f) && f < 1e18) {
    const auto div = static_cast<std::uint64_t>(f);
    return (raw + div - 1) / div;
  }
  return static_cast<std::uint64_t>(std::ceil(static_cast<double>(raw) / f));
}

std::uint64_t payload_bytes(const EmbeddingMeta& embedding) {
  if (embedding.tokens == 0 || embedding.dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding shape must be positive");
  }
  return envelope_size(embedding_meta_json(embedding).size(),
                       embedding.tokens * embedding.dim * dtype_width(embedding.dtype));
}

LinkSimulator::LinkSimulator(LinkModel link) : link_(link) { link_.validate(); }

double LinkSimulator::upload(std::uint64_t size) { return upload_at(size, calls_++); }

double LinkSimulator::upload_at(std::uint64_t size, std::uint64_t call_index) const {
  double t = link_.rtt_s / 2.0 + static_cast<double>(size) / link_.bandwidth_up;
  if (link_.jitter_std_s > 0.0) {
    SeededStream rng(derive_seed(link_.seed, call_index));
    t += std::max(0.0, rng.gaussian(0.0, link_.jitter_std_s));
  }
  return t;
}

std::string_view scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::kRawUpload: return "RawUpload";
    case Scenario::kEmbeddingUpload: return "EmbeddingUpload";
    case Scenario::kOnBoardOnly: return "OnBoardOnly";
  }
  return "?";
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

SimReport compare_scenarios(const DatasetManifest& manifest, const LinkModel& link, const ComputeProfile& compute,
                            const ImageMeta& image, const EmbeddingMeta& embedding) {
  if (manifest.empty()) throw Error(ErrorCode::kEmptyDataset, "nothing to simulate");
  compute.validate();
  LinkSimulator sim(link);
  const std::uint64_t image_bytes = payload_bytes(image);

  SimReport report;
  for (std::size_t s = 0; s < kScenarios.size(); ++s) report.scenarios[s].scenario = kScenarios[s];
  auto& raw = report.scenarios[0];
  auto& emb = report.scenarios[1];
  auto& onboard = report.scenarios[2];
  for (const auto& frame : manifest.frames) {
    report.frame_ids.push_back(frame.frame_id);
    raw.latency_s.push_back(sim.upload(image_bytes) + compute.cloud_decode_s);
    raw.frame_bytes.push_back(image_bytes);
    raw.uplink_bytes += image_bytes;

    EmbeddingMeta meta = embedding;
    meta.frame_id = frame.frame_id;
    const std::uint64_t env_bytes = payload_bytes(meta);
    emb.latency_s.push_back(compute.edge_encode_s + sim.upload(env_bytes) + compute.cloud_decode_s);
    emb.frame_bytes.push_back(env_bytes);
    emb.uplink_bytes += env_bytes;

    onboard.latency_s.push_back(compute.edge_full_s);
    onboard.frame_bytes.push_back(0);
  }
  for (auto& r : report.scenarios) {
    r.p50_s = percentile(r.latency_s, 50.0);
    r.p95_s = percentile(r.latency_s, 95.0);
    r.mean_s = std::accumulate(r.latency_s.begin(), r.latency_s.end(), 0.0) / static_cast<double>(r.latency_s.size());
  }
  return report;
}

nlohmann::json sim_report_to_json(const SimReport& report) {
  nlohmann::json scenarios = nlohmann::json::object();
  for (const auto& r : report.scenarios) {
    scenarios[std::string(scenario_name(r.scenario))] = {{"uplink_bytes", r.uplink_bytes},
                                                         {"p50_s", r.p50_s},
                                                         {"p95_s", r.p95_s},
                                                         {"mean_s", r.mean_s},
                                                         {"latency_s", r.latency_s}};
  }
  return {{"frames", report.frame_ids}, {"scenarios", scenarios}};
}

std::string sim_report_to_csv(const SimReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "frame_id";
  for (const auto& r : report.scenarios) {
    out << "," << scenario_name(r.scenario) << "_latency_s," << scenario_name(r.scenario) << "_uplink_bytes";
  }
  out << "\n";
  for (std::size_t i = 0; i < report.frame_ids.size(); ++i) {
    out << report.frame_ids[i];
    for (const auto& r : report.scenarios) {
      out << "," << r.latency_s[i] << "," << r.frame_bytes[i];
    }
    out << "\n";
  }
  return out.str();
}

ScenarioConfig ScenarioConfig::builtin() { return from_json(nlohmann::json::parse(resources::scenario_json)); }

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& doc) {
  try {
    ScenarioConfig c;
    if (doc.contains("link")) {
      const auto& l = doc["link"];
      c.link.bandwidth_up = l.value("bandwidth_up_bytes_per_s", c.link.bandwidth_up);
      c.link.rtt_s = l.value("rtt_s", c.link.rtt_s);
      c.link.jitter_std_s = l.value("jitter_std_s", c.link.jitter_std_s);
      c.link.seed = l.value("seed", c.link.seed);
    }
    if (doc.contains("compute")) {
      const auto& p = doc["compute"];
      c.compute.edge_encode_s = p.value("edge_encode_s", c.compute.edge_encode_s);
      c.compute.edge_full_s = p.value("edge_full_s", c.compute.edge_full_s);
      c.compute.cloud_decode_s = p.value("cloud_decode_s", c.compute.cloud_decode_s);
    }
    if (doc.contains("image")) {
      const auto& i = doc["image"];
      c.image.width = i.value("width", c.image.width);
      c.image.height = i.value("height", c.image.height);
      c.image.compression_factor = i.value("compression_factor", c.image.compression_factor);
    }
    c.embedding.tokens = 576;
    c.embedding.dim = 1024;
    c.embedding.dtype = DType::kF16;
    c.embedding.encoder_id = "clip-vit-l14-336";
    if (doc.contains("embedding")) {
      const auto& e = doc["embedding"];
      c.embedding.tokens = e.value("tokens", c.embedding.tokens);
      c.embedding.dim = e.value("dim", c.embedding.dim);
      c.embedding.dtype = dtype_from_name(e.value("dtype", std::string(dtype_name(c.embedding.dtype))));
      c.embedding.encoder_id = e.value("encoder_id", c.embedding.encoder_id);
      c.embedding.prompt_version = prompt_version_from_name(e.value("prompt_version", std::string("v1")));
      c.embedding.scale = e.value("scale", 1.0f);
    }
    c.link.validate();
    c.compute.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid, std::string("scenario config: ") + e.what());
  }
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::kConfigInvalid, path.string() + ": not JSON");
  return from_json(doc);
}

nlohmann::json ScenarioConfig::to_json() const {
  return {{"link",
           {{"bandwidth_up_bytes_per_s", link.bandwidth_up},
            {"rtt_s", link.rtt_s},
            {"jitter_std_s", link.jitter_std_s},
            {"seed", link.seed}}},
          {"compute",
           {{"edge_encode_s", compute.edge_encode_s},
            {"edge_full_s", compute.edge_full_s},
            {"cloud_decode_s", compute.cloud_decode_s}}},
          {"image",
           {{"width", image.width}, {"height", image.height}, {"compression_factor", image.compression_factor}}},
          {"embedding",
           {{"tokens", embedding.tokens},
            {"dim", embedding.dim},
            {"dtype", dtype_name(embedding.dtype)},
            {"encoder_id", embedding.encoder_id},
            {"prompt_version", prompt_version_name(embedding.prompt_version)}}}};
}

}  // namespace odal

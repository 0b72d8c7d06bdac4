// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <httplib.h>

#include <filesystem>
#include <unistd.h>

#include "odal/image.hpp"
#include "odal/nodes.hpp"
#include "odal/pipeline.hpp"
#include "odal/wire.hpp"

namespace {

const odal::CabinOntology& onto() { return odal::CabinOntology::builtin(); }

struct Harness {
  odal::Fixture fixture = odal::generate_fixture(12, onto(), 5);
  std::map<std::string, std::vector<std::byte>> images;

  Harness() {
    for (std::size_t i = 0; i < fixture.manifest.frames.size(); ++i) {
      images[fixture.manifest.frames[i].frame_id] = odal::encode_ppm(fixture.images[i]);
    }
  }

  odal::PipelineConfig config(odal::TransportMode mode) const {
    odal::PipelineConfig cfg;
    cfg.mode = mode;
    cfg.vision = std::make_shared<odal::MockVisionBackend>(odal::MockVisionConfig{"mock", 16, 32, odal::DType::kF16, 0});
    cfg.image_loader = [this](const odal::FrameLabel& f) { return images.at(f.frame_id); };
    return cfg;
  }

  std::shared_ptr<odal::LlmBackend> oracle() const {
    return std::make_shared<odal::OracleBackend>(fixture.manifest, odal::ErrorProfile{0.2, 0.2, 0.5, 9}, onto());
  }
};

std::string as_string(const std::vector<std::byte>& bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

std::vector<std::byte> as_bytes(const std::string& s) {
  const auto span = std::as_bytes(std::span(s.data(), s.size()));
  return {span.begin(), span.end()};
}

}  // namespace

TEST(Pipeline, LoopbackAndNetworkedProduceIdenticalRecords) {
  Harness s;
  auto lcfg = s.config(odal::TransportMode::kLoopback);
  lcfg.llm = s.oracle();
  const auto loop = odal::run_pipeline(s.fixture.manifest, lcfg);

  odal::CloudServer server(std::make_shared<odal::CloudNode>(s.oracle()));
  server.start();
  for (int parallel : {1, 4}) {
    auto ncfg = s.config(odal::TransportMode::kNetworked);
    ncfg.cloud_url = server.base_url();
    ncfg.parallel = parallel;
    const auto net = odal::run_pipeline(s.fixture.manifest, ncfg);
    ASSERT_EQ(net.size(), loop.size());
    for (std::size_t i = 0; i < loop.size(); ++i) {
      EXPECT_TRUE(net[i].ok()) << net[i].error_message;
      EXPECT_EQ(odal::run_record_to_json(net[i]), odal::run_record_to_json(loop[i])) << parallel;
      const auto tensor = odal::MockVisionBackend({"mock", 16, 32, odal::DType::kF16, 0}).encode(s.images.at(net[i].frame_id));
      EXPECT_EQ(net[i].bytes_up, odal::kEnvelopeOverhead + odal::embedding_meta_json(odal::meta_for(tensor, net[i].frame_id, odal::PromptVersion::kV1)).size() + 16 * 32 * 2);
    }
  }
  server.stop();
}

TEST(Pipeline, RecordsFollowManifestOrder) {
  Harness s;
  auto cfg = s.config(odal::TransportMode::kLoopback);
  cfg.llm = s.oracle();
  const auto records = odal::run_pipeline(s.fixture.manifest, cfg);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i].frame_id, s.fixture.manifest.frames[i].frame_id);
    EXPECT_EQ(records[i].response->frame_id, records[i].frame_id);
  }
}

TEST(Pipeline, UnreachableCloudIsRecordedPerFrame) {
  Harness s;
  auto cfg = s.config(odal::TransportMode::kNetworked);
  cfg.cloud_url = "http://127.0.0.1:1";
  cfg.timeout_s = 2;
  const auto records = odal::run_pipeline(s.fixture.manifest, cfg);
  ASSERT_EQ(records.size(), s.fixture.manifest.size());
  for (const auto& r : records) {
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.error_code, odal::ErrorCode::kBackendUnreachable);
  }
}

TEST(Pipeline, FailingFrameDoesNotStopTheBatch) {
  Harness s;
  auto cfg = s.config(odal::TransportMode::kLoopback);
  cfg.llm = s.oracle();
  const auto bad = s.fixture.manifest.frames[3].frame_id;
  cfg.image_loader = [&](const odal::FrameLabel& f) {
    return f.frame_id == bad ? std::vector<std::byte>{} : s.images.at(f.frame_id);
  };
  const auto records = odal::run_pipeline(s.fixture.manifest, cfg);
  for (const auto& r : records) EXPECT_EQ(r.ok(), r.frame_id != bad);
  EXPECT_EQ(records[3].error_code, odal::ErrorCode::kInvalidArgument);
}

TEST(Pipeline, RejectsUnusableConfigs) {
  Harness s;
  auto cfg = s.config(odal::TransportMode::kLoopback);
  EXPECT_THROW(odal::run_pipeline(s.fixture.manifest, cfg), odal::Error);
  cfg.llm = s.oracle();
  cfg.parallel = 0;
  EXPECT_THROW(odal::run_pipeline(s.fixture.manifest, cfg), odal::Error);
  auto net = s.config(odal::TransportMode::kNetworked);
  EXPECT_THROW(odal::run_pipeline(s.fixture.manifest, net), odal::Error);
}

TEST(Pipeline, ReadsImagesFromTheDatasetDirectory) {
  Harness s;
  const auto dir = std::filesystem::temp_directory_path() / ("odal_pipe_" + std::to_string(::getpid()));
  odal::write_fixture(s.fixture, dir);
  const auto manifest = odal::load_manifest(dir, onto());
  odal::PipelineConfig cfg;
  cfg.llm = s.oracle();
  cfg.vision = std::make_shared<odal::MockVisionBackend>(odal::MockVisionConfig{"mock", 2, 2, odal::DType::kF32, 0});
  for (const auto& r : odal::run_pipeline(manifest, cfg)) EXPECT_TRUE(r.ok()) << r.error_message;
  std::filesystem::remove_all(dir);
}

TEST(RunRecords, JsonRoundTripAndTimingOptIn) {
  odal::RunRecord ok;
  ok.frame_id = "a";
  ok.response = odal::ModelResponse{"a", "{}", 1, "oracle", 0.0, false};
  ok.bytes_up = 100;
  ok.bytes_down = 20;
  ok.encode_ms = 1.5;
  odal::RunRecord bad;
  bad.frame_id = "b";
  bad.error_code = odal::ErrorCode::kBackendUnreachable;
  bad.error_message = "down";

  const auto plain = odal::run_record_to_json(ok);
  EXPECT_FALSE(plain.contains("timing"));
  EXPECT_FALSE(plain.contains("latency_ms"));
  EXPECT_TRUE(odal::run_record_to_json(ok, true).contains("timing"));

  const auto path = std::filesystem::temp_directory_path() / ("odal_runs_" + std::to_string(::getpid()) + ".jsonl");
  odal::write_run_records(path, {ok, bad});
  const auto back = odal::read_run_records(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].response, ok.response);
  EXPECT_EQ(back[0].bytes_up, 100u);
  EXPECT_FALSE(back[1].ok());
  EXPECT_EQ(back[1].error_code, odal::ErrorCode::kBackendUnreachable);
  EXPECT_EQ(back[1].error_message, "down");
  std::filesystem::remove(path);
}

TEST(HttpContract, CloudHealthAndInfer) {
  odal::CloudServer server(std::make_shared<odal::CloudNode>(std::make_shared<odal::ScriptedBackend>("{}")));
  server.start();
  httplib::Client client(server.base_url());

  auto health = client.Get("/v1/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  const auto h = nlohmann::json::parse(health->body);
  EXPECT_EQ(h.at("status"), "ok");
  EXPECT_EQ(h.at("backend_id"), "mock");

  odal::MockVisionBackend vision({"mock", 3, 5, odal::DType::kI8Scaled, 0});
  const std::vector<std::byte> image(8, std::byte{1});
  auto env = odal::encode_embedding_message(vision.encode(image), "frame_x", odal::PromptVersion::kV2);
  auto res = client.Post("/v1/infer", as_string(env), "application/octet-stream");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto doc = nlohmann::json::parse(res->body);
  EXPECT_EQ(doc.at("frame_id"), "frame_x");
  EXPECT_EQ(doc.at("text"), "{}");
  EXPECT_EQ(doc.at("token_count"), 1);
  EXPECT_EQ(doc.at("truncated"), false);

  env[env.size() - 1] ^= std::byte{0x10};
  res = client.Post("/v1/infer", as_string(env), "application/octet-stream");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(nlohmann::json::parse(res->body).at("error"), "ChecksumMismatch");

  res = client.Post("/v1/infer", "garbage", "application/octet-stream");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(nlohmann::json::parse(res->body).at("error"), "BadMagic");
  server.stop();
}

TEST(HttpContract, EdgeEncode) {
  auto vision = std::make_shared<odal::MockVisionBackend>(odal::MockVisionConfig{"mock", 4, 6, odal::DType::kF16, 0});
  odal::EdgeMockServer server(vision);
  server.start();
  httplib::Client client(server.base_url());

  const std::vector<std::byte> image(30, std::byte{9});
  auto res = client.Post("/v1/encode", as_string(image), "application/octet-stream");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto decoded = odal::decode_embedding_message(as_bytes(res->body));
  EXPECT_EQ(decoded.tensor, vision->encode(image));

  res = client.Post("/v1/encode", "", "application/octet-stream");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  const auto err = odal::decode_envelope(as_bytes(res->body));
  EXPECT_EQ(err.type, odal::MessageType::kError);
  EXPECT_EQ(nlohmann::json::parse(err.meta).at("error"), "InvalidArgument");

  odal::RemoteVisionBackend remote(server.base_url(), 5);
  EXPECT_EQ(remote.encode(image), vision->encode(image));
  EXPECT_THROW(remote.encode({}), odal::Error);
  server.stop();
}

// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "odal/error.hpp"
#include "odal/simnet.hpp"

namespace {

odal::DatasetManifest frames(int n) {
  odal::DatasetManifest m;
  for (int i = 0; i < n; ++i) m.frames.push_back({"frame_" + std::to_string(1000 + i), "", {}});
  return m;
}

odal::SimReport run(const odal::LinkModel& link, int n = 25) {
  const auto cfg = odal::ScenarioConfig::builtin();
  return odal::compare_scenarios(frames(n), link, cfg.compute, cfg.image, cfg.embedding);
}

}  // namespace

TEST(Upload, ClosedFormExample) {
  odal::LinkSimulator sim({10'000'000.0, 0.04, 0.0, 1});
  EXPECT_NEAR(sim.upload(1'000'000), 0.12, 1e-12);
  EXPECT_DOUBLE_EQ(sim.upload(0), 0.02);
  EXPECT_EQ(sim.calls(), 2u);
}

TEST(Upload, JitterIsSeededAndNonNegative) {
  const odal::LinkModel link{1e6, 0.01, 0.05, 77};
  odal::LinkSimulator a(link), b(link);
  bool any_jitter = false;
  for (int i = 0; i < 500; ++i) {
    const double ta = a.upload(1000);
    EXPECT_EQ(ta, b.upload(1000));
    EXPECT_EQ(ta, a.upload_at(1000, static_cast<std::uint64_t>(i)));
    EXPECT_GE(ta, 0.005 + 0.001);
    any_jitter = any_jitter || ta > 0.006 + 1e-9;
  }
  EXPECT_TRUE(any_jitter);
  odal::LinkSimulator c({1e6, 0.01, 0.05, 78});
  bool differs = false;
  for (int i = 0; i < 10; ++i) differs = differs || c.upload(1000) != a.upload_at(1000, static_cast<std::uint64_t>(i));
  EXPECT_TRUE(differs);
}

TEST(Payload, ImageAndEmbeddingSizes) {
  EXPECT_EQ(odal::payload_bytes(odal::ImageMeta{4000, 3000, 1.0}), 36'000'000u);
  EXPECT_EQ(odal::payload_bytes(odal::ImageMeta{4000, 3000, 10.0}), 3'600'000u);
  EXPECT_EQ(odal::payload_bytes(odal::ImageMeta{1, 1, 2.0}), 2u);
  EXPECT_EQ(odal::payload_bytes(odal::ImageMeta{10, 10, 7.0}), 43u);

  const auto cfg = odal::ScenarioConfig::builtin();
  const auto meta_len = odal::embedding_meta_json(cfg.embedding).size();
  EXPECT_EQ(odal::payload_bytes(cfg.embedding), 1'179'648u + odal::kEnvelopeOverhead + meta_len);
}

TEST(Compare, ZeroJitterClosedForm) {
  const auto cfg = odal::ScenarioConfig::builtin();
  const auto rep = run(cfg.link);
  const double raw_bytes = 36'000'000.0;
  for (std::size_t i = 0; i < rep.frame_ids.size(); ++i) {
    auto emb = cfg.embedding;
    emb.frame_id = rep.frame_ids[i];
    const auto emb_bytes = odal::payload_bytes(emb);
    EXPECT_EQ(rep.get(odal::Scenario::kRawUpload).latency_s[i],
              0.04 / 2 + raw_bytes / 10'000'000.0 + cfg.compute.cloud_decode_s);
    EXPECT_EQ(rep.get(odal::Scenario::kEmbeddingUpload).latency_s[i],
              cfg.compute.edge_encode_s + (0.04 / 2 + static_cast<double>(emb_bytes) / 10'000'000.0) +
                  cfg.compute.cloud_decode_s);
    EXPECT_EQ(rep.get(odal::Scenario::kOnBoardOnly).latency_s[i], cfg.compute.edge_full_s);
    EXPECT_EQ(rep.get(odal::Scenario::kEmbeddingUpload).frame_bytes[i], emb_bytes);
    EXPECT_EQ(rep.get(odal::Scenario::kOnBoardOnly).frame_bytes[i], 0u);
  }
}

TEST(Compare, EmbeddingUplinkIsAboutAThirtiethOfRaw) {
  const auto rep = run(odal::ScenarioConfig::builtin().link, 223);
  const double raw = static_cast<double>(rep.get(odal::Scenario::kRawUpload).uplink_bytes);
  const double emb = static_cast<double>(rep.get(odal::Scenario::kEmbeddingUpload).uplink_bytes);
  EXPECT_EQ(rep.get(odal::Scenario::kRawUpload).uplink_bytes, 223ull * 36'000'000ull);
  EXPECT_EQ(rep.get(odal::Scenario::kOnBoardOnly).uplink_bytes, 0u);
  EXPECT_GT(raw / emb, 30.0);
  EXPECT_LT(raw / emb, 31.0);
}

TEST(Compare, BytesAreLinkIndependentAndReportsDeterministic) {
  const auto a = run({1e7, 0.04, 0.02, 5});
  const auto b = run({3e5, 0.3, 0.0, 9});
  const auto a2 = run({1e7, 0.04, 0.02, 5});
  for (auto s : odal::kScenarios) {
    EXPECT_EQ(a.get(s).uplink_bytes, b.get(s).uplink_bytes);
    EXPECT_EQ(a.get(s).frame_bytes, b.get(s).frame_bytes);
    EXPECT_EQ(a.get(s).latency_s, a2.get(s).latency_s);
  }
  EXPECT_EQ(odal::sim_report_to_json(a), odal::sim_report_to_json(a2));
  EXPECT_EQ(odal::sim_report_to_csv(a), odal::sim_report_to_csv(a2));
}

TEST(Compare, MoreBandwidthNeverSlower) {
  double prev_bw = 1e5;
  auto prev = run({prev_bw, 0.04, 0.03, 3});
  for (double bw : {1e6, 1e7, 1e8, 1e12}) {
    const auto next = run({bw, 0.04, 0.03, 3});
    for (auto s : odal::kScenarios) {
      for (std::size_t i = 0; i < next.frame_ids.size(); ++i) EXPECT_LE(next.get(s).latency_s[i], prev.get(s).latency_s[i]);
    }
    prev = next;
  }
  // Near-infinite bandwidth leaves the compute terms in charge.
  const auto fast = run({1e15, 0.0, 0.0, 1});
  EXPECT_LT(fast.get(odal::Scenario::kRawUpload).mean_s, fast.get(odal::Scenario::kEmbeddingUpload).mean_s);
  EXPECT_LT(fast.get(odal::Scenario::kEmbeddingUpload).mean_s, fast.get(odal::Scenario::kOnBoardOnly).mean_s);
}

TEST(Compare, EmbeddingFasterThanRawOnDefaults) {
  const auto rep = run(odal::ScenarioConfig::builtin().link);
  EXPECT_LT(rep.get(odal::Scenario::kEmbeddingUpload).p95_s, rep.get(odal::Scenario::kRawUpload).p50_s);
}

TEST(Percentile, NearestRank) {
  EXPECT_EQ(odal::percentile({}, 50), 0.0);
  EXPECT_EQ(odal::percentile({3, 1, 2}, 50), 2.0);
  EXPECT_EQ(odal::percentile({1, 2, 3, 4}, 50), 2.0);
  EXPECT_EQ(odal::percentile({1, 2, 3, 4}, 95), 4.0);
  EXPECT_EQ(odal::percentile({5}, 0), 5.0);
}

TEST(Compare, RejectsEmptyAndInvalid) {
  const auto cfg = odal::ScenarioConfig::builtin();
  try {
    odal::compare_scenarios({}, cfg.link, cfg.compute, cfg.image, cfg.embedding);
    FAIL();
  } catch (const odal::Error& e) {
    EXPECT_EQ(e.code(), odal::ErrorCode::kEmptyDataset);
  }
  EXPECT_THROW(odal::LinkModel({0.0, 0.04, 0, 1}).validate(), odal::Error);
  EXPECT_THROW(odal::LinkModel({1.0, -1, 0, 1}).validate(), odal::Error);
  EXPECT_THROW(odal::ComputeProfile({-1, 0, 0}).validate(), odal::Error);
}

TEST(ScenarioConfig, JsonRoundTrip) {
  const auto cfg = odal::ScenarioConfig::builtin();
  EXPECT_EQ(cfg.embedding.tokens, 576u);
  EXPECT_EQ(cfg.embedding.dim, 1024u);
  EXPECT_EQ(cfg.embedding.dtype, odal::DType::kF16);
  EXPECT_EQ(odal::ScenarioConfig::from_json(cfg.to_json()).to_json(), cfg.to_json());
}

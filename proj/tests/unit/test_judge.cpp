// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <functional>
#include <random>

#include "odal/error.hpp"
#include "odal/judge.hpp"

using odal::ObjectOutcome;
using odal::ParseStatus;

namespace {

const odal::CabinOntology& onto() { return odal::CabinOntology::builtin(); }

constexpr const char* kR1L = "Seat.Row1.Left";
constexpr const char* kR1R = "Seat.Row1.Right";
constexpr const char* kR2L = "Seat.Row2.Left";
constexpr const char* kR2M = "Seat.Row2.Middle";
constexpr const char* kR2R = "Seat.Row2.Right";

odal::FrameLabel label(std::string id, std::map<std::string, odal::ObjectState> objects) {
  return {std::move(id), "", std::move(objects)};
}

odal::Detection det(std::string cls, std::optional<std::string> pos) {
  odal::Detection d;
  d.raw_name = cls;
  d.raw_position = pos.value_or("?");
  d.canonical_class = onto().canonicalize_class(cls);
  d.position = std::move(pos);
  return d;
}

std::string entry(const std::string& name, const std::string& pos, const char* vis = "True") {
  return "\"" + name + "\": {\"position\": \"" + pos + "\", \"is_visible\": \"" + vis + "\"}";
}

class FakeChat final : public odal::ChatClient {
 public:
  using Handler = std::function<odal::ChatReply(const std::vector<odal::ChatMessage>&)>;
  explicit FakeChat(Handler h) : handler_(std::move(h)) {}
  odal::ChatReply complete(const std::vector<odal::ChatMessage>& messages, double temperature, int) override {
    ++calls;
    last_temperature = temperature;
    return handler_(messages);
  }
  std::atomic<int> calls{0};
  double last_temperature = -1;

 private:
  Handler handler_;
};

// Hand-constructed golden pairs with the verdict worked out by hand.
struct GoldenPair {
  odal::FrameLabel gt;
  std::string response;
  ParseStatus status;
  std::vector<ObjectOutcome> per_object;
  std::vector<std::string> hallucinations;
  std::vector<std::string> neutral;
};

std::vector<GoldenPair> golden_pairs() {
  const odal::ObjectState v2m{kR2M, true};
  std::vector<GoldenPair> g;
  g.push_back({label("g01", {{"backpack", v2m}}), "{" + entry("backpack", kR2M) + "}", ParseStatus::kValidStrict,
               {{"backpack", true, true}}, {}, {}});
  g.push_back({label("g02", {{"backpack", v2m}}), "{" + entry("backpack", kR2L) + "}", ParseStatus::kValidStrict,
               {{"backpack", true, false}}, {}, {}});
  g.push_back({label("g03", {{"backpack", v2m}}), "{" + entry("laptop", kR1R) + "}", ParseStatus::kValidStrict,
               {{"backpack", false, false}}, {"laptop"}, {}});
  g.push_back({label("g04", {{"backpack", v2m}}), "{}", ParseStatus::kValidStrict, {{"backpack", false, false}}, {}, {}});
  g.push_back({label("g05", {{"backpack", v2m}}), "There is a backpack on the middle rear seat.", ParseStatus::kInvalid,
               {{"backpack", false, false}}, {}, {}});
  g.push_back({label("g06", {}), "{}", ParseStatus::kValidStrict, {}, {}, {}});
  g.push_back({label("g07", {}), "{" + entry("wallet", kR1L) + "}", ParseStatus::kValidStrict, {}, {"wallet"}, {}});
  g.push_back({label("g08", {{"backpack", v2m}, {"laptop", {kR1L, true}}}),
               "{" + entry("Rucksack", "seat.row2.middle") + ", " + entry("laptop", kR1R) + "}", ParseStatus::kValidStrict,
               {{"backpack", true, true}, {"laptop", true, false}}, {}, {}});
  g.push_back({label("g09", {{"wallet", {kR2L, false}}}), "{" + entry("wallet", kR2L) + "}", ParseStatus::kValidStrict,
               {}, {}, {"wallet"}});
  g.push_back({label("g10", {{"wallet", {kR2L, false}}, {"keys", {kR1L, true}}}),
               "{" + entry("wallet", kR2L) + ", " + entry("keys", kR1L) + "}", ParseStatus::kValidStrict,
               {{"keys", true, true}}, {}, {"wallet"}});
  g.push_back({label("g11", {{"backpack", v2m}}), "{" + entry("backpack", kR2L) + ", " + entry("rucksack", kR2M) + "}",
               ParseStatus::kValidStrict, {{"backpack", true, false}}, {"rucksack"}, {}});
  g.push_back({label("g12", {{"keys", {"UNDEFINED", true}}}), "{" + entry("keys", "UNDEFINED") + "}",
               ParseStatus::kValidStrict, {{"keys", true, true}}, {}, {}});
  g.push_back({label("g13", {{"keys", {"UNDEFINED", true}}}), "{" + entry("keys", kR1L) + "}",
               ParseStatus::kValidStrict, {{"keys", true, false}}, {}, {}});
  g.push_back({label("g14", {{"smartphone", {kR1R, true}}}), R"({"cell phone": "Seat.Row1.Right"})",
               ParseStatus::kValidJsonOnly, {{"smartphone", true, true}}, {}, {}});
  g.push_back({label("g15", {{"laptop", {kR1L, true}}}), "{" + entry("laptop", "Trunk") + "}", ParseStatus::kValidStrict,
               {{"laptop", true, false}}, {}, {}});
  g.push_back({label("g16", {{"laptop", {kR1L, true}}}), "{" + entry("dragon", kR1L) + ", " + entry("laptop", kR1L) + "}",
               ParseStatus::kValidStrict, {{"laptop", true, true}}, {"dragon"}, {}});
  g.push_back({label("g17", {{"umbrella", {kR2R, true}}, {"jacket", {kR2L, true}}, {"book", {kR1L, true}}}),
               "Here you go:\n```json\n{" + entry("umbrella", kR2R) + ", " + entry("jacket", kR2R) + "}\n```",
               ParseStatus::kValidStrict, {{"book", false, false}, {"jacket", true, false}, {"umbrella", true, true}}, {},
               {}});
  g.push_back({label("g18", {{"handbag", v2m}}), R"(["handbag"])", ParseStatus::kValidJsonOnly,
               {{"handbag", false, false}}, {}, {}});
  g.push_back({label("g19", {{"sunglasses", {kR1R, true}}, {"headphones", v2m}}),
               "{" + entry("SUNGLASSES", "seat.row1.right", "true") + ", " + entry("headset", kR2L) + "}",
               ParseStatus::kValidStrict, {{"headphones", true, false}, {"sunglasses", true, true}}, {}, {}});
  g.push_back({label("g20", {{"coffee cup", {kR2L, true}}, {"water bottle", {kR2R, true}}, {"wallet", {kR1L, false}}}),
               "{" + entry("mug", kR2L) + ", " + entry("bottle", kR2L) + ", " + entry("wallet", kR1L) + ", " +
                   entry("billfold", kR1L) + "}",
               ParseStatus::kValidStrict, {{"coffee cup", true, true}, {"water bottle", true, false}}, {"billfold"},
               {"wallet"}});
  return g;
}

std::string verdict_reply(const GoldenPair& p) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& o : p.per_object) per.push_back({{"class", o.gt_class}, {"detected", o.detected}, {"localized", o.localized}});
  return nlohmann::json{{"per_object", per}, {"hallucinations", p.hallucinations}, {"neutral", p.neutral}}.dump();
}

odal::JudgeConfig llm_config() {
  odal::JudgeConfig cfg;
  cfg.kind = odal::JudgeKind::kLlm;
  cfg.max_retries = 2;
  return cfg;
}

}  // namespace

TEST(RulesJudge, ExactMatch) {
  const auto gt = label("f", {{"backpack", {kR2M, true}}});
  const auto v = odal::judge_frame_rules({det("backpack", kR2M)}, gt);
  EXPECT_EQ(v.per_object, (std::vector<ObjectOutcome>{{"backpack", true, true}}));
  EXPECT_TRUE(v.hallucinations.empty());
  EXPECT_EQ(v.judge_kind, odal::JudgeKind::kRules);
}

TEST(RulesJudge, PositionMismatch) {
  const auto gt = label("f", {{"backpack", {kR2M, true}}});
  const auto v = odal::judge_frame_rules({det("backpack", kR2L)}, gt);
  EXPECT_EQ(v.per_object, (std::vector<ObjectOutcome>{{"backpack", true, false}}));
}

TEST(RulesJudge, UnmatchedDetectionIsHallucination) {
  const auto gt = label("f", {{"backpack", {kR2M, true}}});
  const auto v = odal::judge_frame_rules({det("laptop", kR1R)}, gt);
  EXPECT_EQ(v.per_object, (std::vector<ObjectOutcome>{{"backpack", false, false}}));
  EXPECT_EQ(v.hallucinations, std::vector<std::string>{"laptop"});
}

TEST(RulesJudge, UnparseablePositionDetectsWithoutLocalizing) {
  const auto gt = label("f", {{"backpack", {kR2M, true}}});
  const auto v = odal::judge_frame_rules({det("backpack", std::nullopt)}, gt);
  EXPECT_EQ(v.per_object, (std::vector<ObjectOutcome>{{"backpack", true, false}}));
}

TEST(RulesJudge, InvisiblePolicy) {
  const auto gt = label("f", {{"wallet", {kR2L, false}}});
  const std::vector<odal::Detection> dets{det("wallet", kR2L), det("billfold", kR2L)};
  const auto neutral = odal::judge_frame_rules(dets, gt);
  EXPECT_EQ(neutral.neutral, std::vector<std::string>{"wallet"});
  EXPECT_EQ(neutral.hallucinations, std::vector<std::string>{"billfold"});
  const auto strict = odal::judge_frame_rules(dets, gt, ParseStatus::kValidStrict, {false});
  EXPECT_TRUE(strict.neutral.empty());
  EXPECT_EQ(strict.hallucinations.size(), 2u);
}

TEST(RulesJudge, InvariantsOnRandomDetections) {
  std::mt19937_64 rng(7);
  const auto& classes = onto().classes();
  const auto& positions = onto().positions();
  for (int iter = 0; iter < 2000; ++iter) {
    odal::FrameLabel gt = label("f", {});
    const int n_gt = static_cast<int>(rng() % 5);
    for (int i = 0; i < n_gt; ++i) {
      gt.objects[classes[rng() % classes.size()]] = {positions[rng() % positions.size()], rng() % 4 != 0};
    }
    std::vector<odal::Detection> dets;
    const int n_det = static_cast<int>(rng() % 7);
    for (int i = 0; i < n_det; ++i) {
      const bool unknown = rng() % 6 == 0;
      dets.push_back(det(unknown ? "gizmo" : classes[rng() % classes.size()], positions[rng() % positions.size()]));
    }
    const auto v = odal::judge_frame_rules(dets, gt);
    EXPECT_EQ(v.accounted_detections(), dets.size());
    EXPECT_EQ(v.per_object.size(), gt.visible_count());
    for (const auto& o : v.per_object) EXPECT_TRUE(o.detected || !o.localized);
    EXPECT_EQ(odal::judge_frame_rules(dets, gt), v);

    // Permutation stability when classes are unique.
    std::map<std::string, odal::Detection> unique;
    for (const auto& d : dets) {
      if (!d.is_unknown()) unique.emplace(*d.canonical_class, d);
    }
    std::vector<odal::Detection> u;
    for (const auto& [k, d] : unique) u.push_back(d);
    const auto base = odal::judge_frame_rules(u, gt);
    std::shuffle(u.begin(), u.end(), rng);
    auto shuffled = odal::judge_frame_rules(u, gt);
    std::sort(shuffled.hallucinations.begin(), shuffled.hallucinations.end());
    std::sort(shuffled.neutral.begin(), shuffled.neutral.end());
    EXPECT_EQ(shuffled.per_object, base.per_object);
    EXPECT_EQ(shuffled.hallucinations, base.hallucinations);
    EXPECT_EQ(shuffled.neutral, base.neutral);
  }
}

TEST(RulesJudge, GoldenPairs) {
  for (const auto& p : golden_pairs()) {
    const auto v = odal::judge_response_rules(p.response, p.gt, onto());
    EXPECT_EQ(v.frame_id, p.gt.frame_id);
    EXPECT_EQ(v.parse_status, p.status) << p.gt.frame_id;
    EXPECT_EQ(v.per_object, p.per_object) << p.gt.frame_id;
    EXPECT_EQ(v.hallucinations, p.hallucinations) << p.gt.frame_id;
    EXPECT_EQ(v.neutral, p.neutral) << p.gt.frame_id;
  }
}

TEST(LlmJudge, AgreesWithRulesOnGoldenPairs) {
  const auto pairs = golden_pairs();
  FakeChat chat([&](const std::vector<odal::ChatMessage>& msgs) {
    for (const auto& p : pairs) {
      if (msgs == odal::build_judge_prompt(p.response, p.gt, onto())) return odal::ChatReply{verdict_reply(p), {}};
    }
    return odal::ChatReply{"no idea", {}};
  });
  const auto cfg = llm_config();
  for (const auto& p : pairs) {
    auto llm = odal::judge_frame_llm(p.response, p.gt, onto(), cfg, chat);
    auto rules = odal::judge_response_rules(p.response, p.gt, onto());
    EXPECT_EQ(llm.judge_kind, odal::JudgeKind::kLlm) << p.gt.frame_id;
    llm.diagnostics.clear();
    rules.diagnostics.clear();
    llm.judge_kind = rules.judge_kind;
    EXPECT_EQ(llm, rules) << p.gt.frame_id;
  }
  EXPECT_EQ(chat.calls.load(), static_cast<int>(pairs.size()));
  EXPECT_EQ(chat.last_temperature, 0.0);
}

TEST(LlmJudge, FixedVerdictIsTakenAsIs) {
  const auto gt = label("f", {{"backpack", {kR2M, true}}, {"laptop", {kR1L, true}}});
  FakeChat chat([](const auto&) {
    return odal::ChatReply{
        "```json\n{\"per_object\": [{\"class\": \"laptop\", \"detected\": 1, \"localized\": 0}, "
        "{\"class\": \"Rucksack\", \"detected\": true, \"localized\": true}], \"hallucinations\": [\"cat\"]}\n```",
        {}};
  });
  const auto v = odal::judge_frame_llm("prose", gt, onto(), llm_config(), chat);
  EXPECT_EQ(v.per_object, (std::vector<ObjectOutcome>{{"backpack", true, true}, {"laptop", true, false}}));
  EXPECT_EQ(v.hallucinations, std::vector<std::string>{"cat"});
  EXPECT_EQ(v.parse_status, ParseStatus::kInvalid);
  EXPECT_EQ(v.judge_kind, odal::JudgeKind::kLlm);
}

TEST(LlmJudge, ProseIsRetriedThenFallsBack) {
  const auto gt = label("f", {{"backpack", {kR2M, true}}});
  FakeChat chat([](const auto&) { return odal::ChatReply{"The response looks right to me.", {}}; });
  auto cfg = llm_config();
  cfg.max_retries = 3;
  const auto v = odal::judge_frame_llm("{" + entry("backpack", kR2M) + "}", gt, onto(), cfg, chat);
  EXPECT_EQ(chat.calls.load(), 4);
  EXPECT_EQ(v.judge_kind, odal::JudgeKind::kRules);
  EXPECT_EQ(v.per_object, (std::vector<ObjectOutcome>{{"backpack", true, true}}));
  EXPECT_EQ(v.diagnostics.back(), "fell back to rules judge");

  cfg.fallback_to_rules = false;
  try {
    odal::judge_frame_llm("{}", gt, onto(), cfg, chat);
    FAIL();
  } catch (const odal::Error& e) {
    EXPECT_EQ(e.code(), odal::ErrorCode::kVerdictMalformed);
  }
}

TEST(LlmJudge, InvalidVerdictsAreRejected) {
  const auto gt = label("f", {{"backpack", {kR2M, true}}, {"wallet", {kR1L, false}}});
  for (const char* reply : {
           R"({"per_object": []})",
           R"({"per_object": [{"class": "backpack", "detected": false, "localized": true}]})",
           R"({"per_object": [{"class": "backpack"}, {"class": "wallet"}]})",
           R"({"per_object": [{"class": "backpack"}, {"class": "backpack"}]})",
           R"({"per_object": [{"class": "backpack", "detected": "yes"}]})",
           R"({"per_object": [{"class": "backpack"}], "hallucinations": "none"})",
           R"({"hallucinations": []})",
           R"([])",
       }) {
    try {
      odal::parse_judge_reply(reply, gt, onto());
      FAIL() << reply;
    } catch (const odal::Error& e) {
      EXPECT_EQ(e.code(), odal::ErrorCode::kVerdictMalformed) << reply;
    }
  }
}

TEST(LlmJudge, UnreachableEndpoint) {
  const auto gt = label("f", {{"backpack", {kR2M, true}}});
  odal::OpenAiChatClient client({"http://127.0.0.1:1", "gpt-4o", "", 2.0});
  auto cfg = llm_config();
  cfg.max_retries = 0;
  const auto v = odal::judge_frame_llm("{}", gt, onto(), cfg, client);
  EXPECT_EQ(v.judge_kind, odal::JudgeKind::kRules);
  cfg.fallback_to_rules = false;
  try {
    odal::judge_frame_llm("{}", gt, onto(), cfg, client);
    FAIL();
  } catch (const odal::Error& e) {
    EXPECT_EQ(e.code(), odal::ErrorCode::kJudgeUnreachable);
  }
}

TEST(LlmJudge, OpenAiCompatibleServer) {
  const auto gt = label("f", {{"backpack", {kR2M, true}}});
  nlohmann::json seen;
  std::string auth;
  httplib::Server server;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen = nlohmann::json::parse(req.body);
    auth = req.get_header_value("Authorization");
    const std::string content = R"({"per_object": [{"class": "backpack", "detected": true, "localized": false}], "hallucinations": [], "neutral": []})";
    res.set_content(nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}},
                                   {"usage", {{"completion_tokens", 17}}}}
                        .dump(),
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  odal::OpenAiChatClient client({"http://127.0.0.1:" + std::to_string(port), "judge-model", "secret", 5.0});
  const auto v = odal::judge_frame_llm("{}", gt, onto(), llm_config(), client);
  EXPECT_EQ(v.judge_kind, odal::JudgeKind::kLlm);
  EXPECT_EQ(v.per_object, (std::vector<ObjectOutcome>{{"backpack", true, false}}));
  EXPECT_EQ(seen.at("model"), "judge-model");
  EXPECT_EQ(seen.at("temperature"), 0.0);
  EXPECT_EQ(seen.at("messages").size(), 2u);
  EXPECT_EQ(auth, "Bearer secret");
  server.stop();
  t.join();
}

TEST(JudgePrompt, ListsGroundTruthAndSchema) {
  const auto gt = label("f", {{"backpack", {kR2M, true}}, {"wallet", {kR1L, false}}});
  const auto msgs = odal::build_judge_prompt("RESPONSE TEXT", gt, onto());
  ASSERT_EQ(msgs.size(), 2u);
  EXPECT_EQ(msgs[0].role, "system");
  EXPECT_EQ(msgs[1].role, "user");
  const auto& user = msgs[1].content;
  EXPECT_NE(user.find("- backpack at Seat.Row2.Middle (visible)"), std::string::npos);
  EXPECT_NE(user.find("- wallet at Seat.Row1.Left (not visible)"), std::string::npos);
  EXPECT_NE(user.find("RESPONSE TEXT"), std::string::npos);
  for (const char* key : {"per_object", "hallucinations", "detected", "localized"}) {
    EXPECT_NE(user.find(key), std::string::npos) << key;
  }
  EXPECT_NE(msgs[0].content.find("JSON only"), std::string::npos);
  EXPECT_EQ(odal::build_judge_prompt("RESPONSE TEXT", gt, onto()), msgs);

  const auto empty = odal::build_judge_prompt("{}", label("e", {}), onto())[1].content;
  EXPECT_NE(empty.find("(none)"), std::string::npos);
  EXPECT_NE(empty.find("hallucinations"), std::string::npos);
}

TEST(JudgeBatch, OrderMissingTextsAndLabels) {
  odal::DatasetManifest m;
  m.frames = {label("a", {{"backpack", {kR2M, true}}}), label("b", {{"laptop", {kR1L, true}}})};
  odal::JudgeConfig rules;
  const std::vector<odal::JudgeItem> items{{"b", "{" + entry("laptop", kR1L) + "}"}, {"a", std::nullopt}};
  const auto v = odal::judge_batch(items, m, onto(), rules, nullptr);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].frame_id, "b");
  EXPECT_EQ(v[0].per_object[0].localized, true);
  EXPECT_EQ(v[1].parse_status, ParseStatus::kInvalid);
  EXPECT_EQ(v[1].diagnostics, std::vector<std::string>{"no model response"});

  try {
    odal::judge_batch({{"zzz", "{}"}}, m, onto(), rules, nullptr);
    FAIL();
  } catch (const odal::Error& e) {
    EXPECT_EQ(e.code(), odal::ErrorCode::kMissingLabel);
  }
  auto llm = llm_config();
  EXPECT_THROW(odal::judge_batch(items, m, onto(), llm, nullptr), odal::Error);
  llm.parallelism = 0;
  EXPECT_THROW(llm.validate(), odal::Error);
}

TEST(JudgeBatch, ParallelLlmKeepsInputOrder) {
  const auto pairs = golden_pairs();
  odal::DatasetManifest m;
  std::vector<odal::JudgeItem> items;
  for (const auto& p : pairs) {
    m.frames.push_back(p.gt);
    items.push_back({p.gt.frame_id, p.response});
  }
  FakeChat chat([&](const std::vector<odal::ChatMessage>& msgs) {
    for (const auto& p : pairs) {
      if (msgs == odal::build_judge_prompt(p.response, p.gt, onto())) return odal::ChatReply{verdict_reply(p), {}};
    }
    return odal::ChatReply{"?", {}};
  });
  auto cfg = llm_config();
  cfg.parallelism = 4;
  const auto v = odal::judge_batch(items, m, onto(), cfg, &chat);
  ASSERT_EQ(v.size(), pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(v[i].frame_id, pairs[i].gt.frame_id);
    EXPECT_EQ(v[i].per_object, pairs[i].per_object);
    EXPECT_EQ(v[i].judge_kind, odal::JudgeKind::kLlm);
  }
}

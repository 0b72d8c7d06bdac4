// SPDX-License-Identifier: Apache-2.0

#include "odal/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "odal/augment.hpp"
#include "odal/bench.hpp"
#include "odal/dataset.hpp"
#include "odal/image.hpp"
#include "odal/judge.hpp"
#include "odal/nodes.hpp"
#include "odal/pipeline.hpp"
#include "odal/rng.hpp"
#include "odal/simnet.hpp"

namespace odal {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kSynopsis =
    "usage: odal [--ontology FILE] <command> ...\n"
    "commands:\n"
    "  dataset validate|split|upsample|fixture\n"
    "  augment plan|apply\n"
    "  serve cloud|edge-mock\n"
    "  run         edge-to-cloud pipeline over a dataset, writes responses.jsonl\n"
    "  judge rules|llm\n"
    "  score       verdicts.jsonl -> report\n"
    "  report      render stored reports\n"
    "  simulate    raw vs embedding vs on-board latency and uplink\n";

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path);
  f << text;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  auto doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::kInvalidArgument, path.string() + ": not JSON");
  return doc;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct OracleFlags {
  double p_miss = 0.0;
  double p_mislocalize = 0.0;
  double p_hallucinate = 0.0;
  std::uint64_t seed = 0;
  std::string mock_text = "{}";
  std::string mock_script;
  std::string model = "gpt-4o";
  double timeout_s = 60.0;

  void add_to(CLI::App* app) {
    app->add_option("--p-miss", p_miss, "oracle: probability of dropping a visible object");
    app->add_option("--p-mislocalize", p_mislocalize, "oracle: probability of reporting a wrong position");
    app->add_option("--p-hallucinate", p_hallucinate, "oracle: mean invented objects per frame");
    app->add_option("--seed", seed, "oracle seed");
    app->add_option("--mock-text", mock_text, "mock: reply text");
    app->add_option("--mock-script", mock_script, "mock: JSON file {frame_id: text}");
    app->add_option("--model", model, "openai: model name");
    app->add_option("--timeout", timeout_s, "backend timeout in seconds");
  }

  LlmBackendContext context(const DatasetManifest* manifest, const CabinOntology& ontology) const {
    LlmBackendContext ctx;
    ctx.manifest = manifest;
    ctx.ontology = ontology;
    ctx.profile = {p_miss, p_mislocalize, p_hallucinate, seed};
    ctx.mock_text = mock_text;
    if (!mock_script.empty()) ctx.mock_script = read_json(mock_script).get<std::map<std::string, std::string>>();
    ctx.model = model;
    ctx.api_key = api_key_from_env();
    ctx.timeout_s = timeout_s;
    return ctx;
  }

  json snapshot() const {
    return {{"p_miss", p_miss}, {"p_mislocalize", p_mislocalize}, {"p_hallucinate", p_hallucinate}, {"seed", seed}};
  }
};

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) { build(); }

  int run(int argc, const char* const* argv) {
    try {
      app_.parse(argc, argv);
      return 0;
    } catch (const CLI::CallForHelp& e) {
      return app_.exit(e, out_, err_);
    } catch (const CLI::CallForAllHelp& e) {
      return app_.exit(e, out_, err_);
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n" << kSynopsis;
      return 2;
    } catch (const Error& e) {
      err_ << "error: " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return 1;
    }
  }

 private:
  CabinOntology ontology() const {
    return ontology_path_.empty() ? CabinOntology::builtin() : CabinOntology::load(ontology_path_);
  }

  void build() {
    app_.name("odal");
    app_.description("In-cabin object detection and localization: split inference and benchmark");
    app_.add_option("--ontology", ontology_path_, "ontology JSON (default: built-in)");
    app_.require_subcommand(1);
    build_dataset();
    build_augment();
    build_serve();
    build_run();
    build_judge();
    build_score();
    build_report();
    build_simulate();
  }

  void build_dataset() {
    auto* ds = app_.add_subcommand("dataset", "dataset tools");
    ds->require_subcommand(1);

    auto* validate = ds->add_subcommand("validate", "check labels against the ontology");
    validate->add_option("path", d_path_, "dataset directory or manifest JSON")->required();
    validate->callback([this] {
      const auto onto = ontology();
      const auto m = load_dataset(d_path_, onto);
      if (m.empty()) throw Error(ErrorCode::kEmptyDataset, d_path_ + " has no labeled frames");
      std::size_t visible = 0;
      for (const auto& f : m.frames) visible += f.visible_count();
      out_ << m.size() << " frames, " << visible << " visible objects, ontology " << m.ontology_ref << "\n";
    });

    auto* split = ds->add_subcommand("split", "seeded train/validation split");
    split->add_option("path", d_path_, "dataset")->required();
    split->add_option("--fraction", d_fraction_, "training fraction")->capture_default_str();
    split->add_option("--seed", d_seed_, "shuffle seed")->capture_default_str();
    split->add_option("--out", d_out_, "output directory for train.json and val.json")->required();
    split->callback([this] {
      const auto m = load_dataset(d_path_, ontology());
      const auto r = split_dataset(m, d_fraction_, d_seed_);
      for (const auto& w : r.warnings) err_ << "warning: " << w << "\n";
      fs::create_directories(d_out_);
      write_manifest(fs::path(d_out_) / "train.json", with_absolute_refs(r.train));
      write_manifest(fs::path(d_out_) / "val.json", with_absolute_refs(r.val));
      out_ << "train " << r.train.size() << ", val " << r.val.size() << "\n";
    });

    auto* up = ds->add_subcommand("upsample", "duplicate frames of rare classes");
    up->add_option("path", d_path_, "dataset")->required();
    up->add_option("--min-count", d_min_count_, "minimum visible occurrences per class")->capture_default_str();
    up->add_option("--seed", d_seed_, "seed")->capture_default_str();
    up->add_option("--out", d_out_, "output manifest JSON")->required();
    up->callback([this] {
      const auto onto = ontology();
      const auto m = load_dataset(d_path_, onto);
      const auto r = upsample_rare(m, onto, d_min_count_, d_seed_);
      for (const auto& w : r.warnings) err_ << "warning: " << w << "\n";
      write_manifest(d_out_, with_absolute_refs(r.manifest));
      out_ << m.size() << " -> " << r.manifest.size() << " frames\n";
    });

    auto* fixture = ds->add_subcommand("fixture", "write a synthetic labeled dataset");
    fixture->add_option("--frames", d_frames_, "number of frames")->capture_default_str();
    fixture->add_option("--seed", d_seed_, "seed")->capture_default_str();
    fixture->add_option("--out", d_out_, "output directory")->required();
    fixture->callback([this] {
      const auto fx = generate_fixture(d_frames_, ontology(), d_seed_);
      write_fixture(fx, d_out_);
      out_ << fx.manifest.size() << " frames written to " << d_out_ << "\n";
    });
  }

  void build_augment() {
    auto* aug = app_.add_subcommand("augment", "augmentation planning and application");
    aug->require_subcommand(1);

    auto* plan = aug->add_subcommand("plan", "seeded augmentation plan");
    plan->add_option("path", a_path_, "dataset")->required();
    plan->add_option("--level", a_level_, "none|basic|extensive")
        ->check(CLI::IsMember({"none", "basic", "extensive"}))
        ->capture_default_str();
    plan->add_option("--seed", a_seed_, "seed")->capture_default_str();
    plan->add_option("--out", a_out_, "plan JSON (default: stdout)");
    plan->callback([this] {
      const auto m = load_dataset(a_path_, ontology());
      const auto p = plan_augmentations(m, augment_level_from_name(a_level_), a_seed_);
      emit(a_out_, plan_to_json(p).dump(2) + "\n", out_);
    });

    auto* apply = aug->add_subcommand("apply", "apply a plan to PPM images");
    apply->add_option("path", a_path_, "dataset")->required();
    apply->add_option("--plan", a_plan_, "plan JSON")->required();
    apply->add_option("--out", a_out_, "output directory")->required();
    apply->add_flag("--no-mirror-labels", a_no_mirror_, "keep positions unchanged on horizontal flips");
    apply->callback([this] {
      const auto onto = ontology();
      const auto m = load_dataset(a_path_, onto);
      const auto p = plan_from_json(read_json(a_plan_));
      fs::create_directories(a_out_);
      std::size_t written = 0;
      for (const auto& item : p.items) {
        const FrameLabel* label = m.find(item.frame_id);
        if (label == nullptr) throw Error(ErrorCode::kMissingLabel, "plan names unknown frame \"" + item.frame_id + "\"");
        fs::path ref(label->image_ref);
        if (ref.is_relative()) ref = m.source_dir / ref;
        const auto [img, lbl] = apply_item(read_ppm(ref), *label, item, onto, !a_no_mirror_);
        write_ppm(fs::path(a_out_) / (item.frame_id + ".ppm"), img);
        write_label_file(fs::path(a_out_) / (item.frame_id + ".json"), lbl);
        ++written;
      }
      out_ << written << " frames written to " << a_out_ << "\n";
    });
  }

  void build_serve() {
    auto* serve = app_.add_subcommand("serve", "run a node as an HTTP service");
    serve->require_subcommand(1);

    auto* cloud = serve->add_subcommand("cloud", "cloud node: POST /v1/infer, GET /v1/health");
    cloud->add_option("--host", s_host_, "bind address")->capture_default_str();
    cloud->add_option("--port", s_port_, "port (0 picks a free one)")->capture_default_str();
    cloud->add_option("--backend", s_backend_, "mock|oracle|openai:URL|remote:URL")->capture_default_str();
    cloud->add_option("--dataset", s_dataset_, "ground truth for the oracle backend");
    s_oracle_.add_to(cloud);
    cloud->callback([this] {
      const auto onto = ontology();
      DatasetManifest m;
      if (!s_dataset_.empty()) m = load_dataset(s_dataset_, onto);
      auto backend = std::shared_ptr<LlmBackend>(
          make_llm_backend(s_backend_, s_oracle_.context(s_dataset_.empty() ? nullptr : &m, onto)));
      CloudServer server(std::make_shared<CloudNode>(backend));
      server.start(s_host_, s_port_);
      out_ << "cloud node (" << backend->id() << ") listening on " << server.base_url() << std::endl;
      server.wait();
    });

    auto* edge = serve->add_subcommand("edge-mock", "mock vision encoder: POST /v1/encode");
    edge->add_option("--host", s_host_, "bind address")->capture_default_str();
    edge->add_option("--port", s_port_, "port (0 picks a free one)")->capture_default_str();
    edge->add_option("--seed", s_vision_seed_, "embedding seed")->capture_default_str();
    edge->callback([this] {
      MockVisionConfig cfg;
      cfg.seed = s_vision_seed_;
      EdgeMockServer server(std::make_shared<MockVisionBackend>(cfg));
      server.start(s_host_, s_port_);
      out_ << "edge-mock encoder listening on " << server.base_url() << std::endl;
      server.wait();
    });
  }

  void build_run() {
    auto* run = app_.add_subcommand("run", "encode every frame on the edge and query the cloud");
    run->add_option("path", r_path_, "dataset")->required();
    run->add_option("--backend", r_backend_, "in-process backend: mock|oracle|openai:URL|remote:URL")
        ->capture_default_str();
    run->add_option("--cloud", r_cloud_, "cloud node URL (networked mode)");
    run->add_option("--vision", r_vision_, "mock or the URL of a /v1/encode service")->capture_default_str();
    run->add_option("--vision-seed", r_vision_seed_, "mock encoder seed")->capture_default_str();
    run->add_option("--prompt", r_prompt_, "v1|v2")->check(CLI::IsMember({"v1", "v2"}))->capture_default_str();
    run->add_option("--parallel", r_parallel_, "in-flight requests (networked mode)")->capture_default_str();
    run->add_option("--out", r_out_, "responses JSONL")->required();
    run->add_option("--run-manifest", r_manifest_, "write a run manifest JSON");
    run->add_flag("--record-timing", r_timing_, "include wall-clock timings in the records");
    r_oracle_.add_to(run);
    run->callback([this] {
      const auto onto = ontology();
      const auto m = load_dataset(r_path_, onto);
      if (m.empty()) throw Error(ErrorCode::kEmptyDataset, r_path_ + " has no labeled frames");
      PipelineConfig cfg;
      cfg.prompt_version = prompt_version_from_name(r_prompt_);
      cfg.parallel = r_parallel_;
      cfg.timeout_s = r_oracle_.timeout_s;
      std::string backend_id;
      if (r_cloud_.empty()) {
        cfg.mode = TransportMode::kLoopback;
        cfg.llm = std::shared_ptr<LlmBackend>(make_llm_backend(r_backend_, r_oracle_.context(&m, onto)));
        backend_id = cfg.llm->id();
      } else {
        cfg.mode = TransportMode::kNetworked;
        cfg.cloud_url = r_cloud_;
        backend_id = CloudClient(r_cloud_, r_oracle_.timeout_s).health().value("backend_id", "remote:" + r_cloud_);
      }
      if (r_vision_ == "mock") {
        MockVisionConfig vc;
        vc.seed = r_vision_seed_;
        cfg.vision = std::make_shared<MockVisionBackend>(vc);
      } else {
        cfg.vision = std::make_shared<RemoteVisionBackend>(r_vision_, r_oracle_.timeout_s);
      }
      const auto records = run_pipeline(m, cfg);
      write_run_records(r_out_, records, r_timing_);
      std::size_t failed = 0;
      std::uint64_t up = 0;
      for (const auto& r : records) {
        failed += r.ok() ? 0 : 1;
        up += r.bytes_up;
      }
      if (!r_manifest_.empty()) {
        json config{{"ontology", onto.checksum()},
                    {"dataset", r_path_},
                    {"prompt_version", r_prompt_},
                    {"backend_id", backend_id},
                    {"vision_id", cfg.vision->id()},
                    {"vision_seed", r_vision_seed_},
                    {"oracle", r_oracle_.snapshot()},
                    {"mode", r_cloud_.empty() ? "loopback" : "networked"}};
        json doc{{"run_id", "run-" + hex64(fnv1a64(config.dump()))},
                 {"config", config},
                 {"artifacts", {{"responses", r_out_}}}};
        emit(r_manifest_, doc.dump(2) + "\n", out_);
      }
      out_ << records.size() << " frames, " << failed << " failed, " << up << " bytes uplinked\n";
      if (failed == records.size()) throw Error(ErrorCode::kBackendUnreachable, "every frame failed");
    });
  }

  void build_judge() {
    auto* judge = app_.add_subcommand("judge", "turn stored responses into verdicts");
    judge->require_subcommand(1);
    auto common = [this](CLI::App* sub) {
      sub->add_option("path", j_path_, "dataset holding the ground truth")->required();
      sub->add_option("--responses", j_responses_, "responses JSONL from run")->required();
      sub->add_option("--out", j_out_, "verdicts JSONL (default: stdout)");
      sub->add_flag("--invisible-as-hallucination", j_invisible_hallucination_,
                    "count detections of invisible objects as hallucinations");
      sub->add_flag("--no-fenced", j_no_fenced_, "do not extract ```-fenced JSON from prose");
    };

    auto* rules = judge->add_subcommand("rules", "deterministic rules judge");
    common(rules);
    rules->callback([this] { judge_stored(JudgeKind::kRules); });

    auto* llm = judge->add_subcommand("llm", "OpenAI-compatible judge model");
    common(llm);
    llm->add_option("--endpoint", j_endpoint_, "chat-completions base URL")->required();
    llm->add_option("--model", j_model_, "judge model")->capture_default_str();
    llm->add_option("--max-retries", j_retries_, "retries on malformed verdicts")->capture_default_str();
    llm->add_option("--parallel", j_parallel_, "in-flight judge requests")->capture_default_str();
    llm->add_option("--timeout", j_timeout_, "request timeout in seconds")->capture_default_str();
    llm->add_option("--templates", j_templates_, "directory with system.txt and user.txt");
    llm->add_flag("--no-fallback", j_no_fallback_, "fail instead of falling back to the rules judge");
    llm->callback([this] { judge_stored(JudgeKind::kLlm); });
  }

  void judge_stored(JudgeKind kind) {
    const auto onto = ontology();
    const auto m = load_dataset(j_path_, onto);
    std::vector<JudgeItem> items;
    for (const auto& r : read_run_records(j_responses_)) {
      items.push_back({r.frame_id, r.response ? std::optional<std::string>(r.response->text) : std::nullopt});
    }
    JudgeConfig cfg;
    cfg.kind = kind;
    cfg.rules.invisible_as_neutral = !j_invisible_hallucination_;
    cfg.parse.extract_fenced = !j_no_fenced_;
    std::unique_ptr<ChatClient> client;
    const JudgeTemplates templates = j_templates_.empty() ? JudgeTemplates::builtin() : JudgeTemplates::load(j_templates_);
    if (kind == JudgeKind::kLlm) {
      cfg.endpoint = j_endpoint_;
      cfg.model = j_model_;
      cfg.api_key = api_key_from_env();
      cfg.max_retries = j_retries_;
      cfg.parallelism = j_parallel_;
      cfg.fallback_to_rules = !j_no_fallback_;
      cfg.timeout_s = j_timeout_;
      client = std::make_unique<OpenAiChatClient>(OpenAiChatConfig{cfg.endpoint, cfg.model, cfg.api_key, cfg.timeout_s});
    }
    const auto verdicts = judge_batch(items, m, onto, cfg, client.get(), templates);
    std::ostringstream text;
    for (const auto& v : verdicts) text << verdict_to_json(v).dump() << "\n";
    emit(j_out_, text.str(), out_);
  }

  void build_score() {
    auto* score = app_.add_subcommand("score", "aggregate verdicts into a report");
    score->add_option("--verdicts", c_verdicts_, "verdicts JSONL")->required();
    score->add_option("--policy", c_policy_, "literal|clean-empty")
        ->check(CLI::IsMember({"literal", "clean-empty"}))
        ->capture_default_str();
    score->add_flag("--clamp", c_clamp_, "clamp frame scores at zero");
    score->add_option("--format", c_format_, "table|json|csv")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    score->add_option("--out", c_out_, "output file (default: stdout)");
    score->add_option("--prompt", c_prompt_, "prompt version of the run")
        ->check(CLI::IsMember({"v1", "v2"}))
        ->capture_default_str();
    score->add_option("--backend-id", c_backend_, "backend id of the run");
    score->add_flag("--vision-encoder", c_vision_, "fine-tune descriptor: vision encoder trained");
    score->add_flag("--comprehensive", c_comprehensive_, "fine-tune descriptor: all linear layers adapted");
    score->add_option("--run-manifest", c_manifest_, "take run meta from, and record artifacts in, a run manifest");
    score->callback([this] {
      const auto verdicts = read_verdicts(c_verdicts_);
      RunMeta meta;
      meta.prompt_version = c_prompt_;
      meta.backend_id = c_backend_;
      json manifest;
      if (!c_manifest_.empty()) {
        manifest = read_json(c_manifest_);
        meta.prompt_version = manifest.at("config").value("prompt_version", meta.prompt_version);
        meta.backend_id = manifest.at("config").value("backend_id", meta.backend_id);
      }
      meta.fine_tune = {c_vision_, c_comprehensive_};
      meta.judge_kind = "Rules";
      for (const auto& v : verdicts) {
        if (v.judge_kind == JudgeKind::kLlm) meta.judge_kind = "LLM";
      }
      const ScorePolicy policy{delta_rule_from_name(c_policy_), c_clamp_};
      const auto report = aggregate(verdicts, policy, meta);
      emit(c_out_, emit_report({report}, report_format_from_name(c_format_)), out_);
      if (!c_manifest_.empty()) {
        manifest["artifacts"]["verdicts"] = c_verdicts_;
        if (!c_out_.empty()) manifest["artifacts"]["report"] = c_out_;
        manifest["config"]["policy"] = {{"delta_rule", c_policy_}, {"clamp", c_clamp_}};
        emit(c_manifest_, manifest.dump(2) + "\n", out_);
      }
    });
  }

  void build_report() {
    auto* report = app_.add_subcommand("report", "render stored reports");
    report->add_option("reports", p_reports_, "report JSON files")->required();
    report->add_option("--format", p_format_, "table|json|csv")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    report->add_option("--out", p_out_, "output file (default: stdout)");
    report->callback([this] {
      std::vector<MetricReport> reports;
      for (const auto& p : p_reports_) reports.push_back(read_report(p));
      emit(p_out_, emit_report(reports, report_format_from_name(p_format_)), out_);
    });
  }

  void build_simulate() {
    auto* sim = app_.add_subcommand("simulate", "compare raw upload, embedding upload and on-board placement");
    sim->add_option("path", m_path_, "dataset (frame ids only)");
    sim->add_option("--frames", m_frames_, "simulate N synthetic frames instead of a dataset")->capture_default_str();
    sim->add_option("--scenario", m_scenario_, "scenario JSON (default: built-in)");
    sim->add_option("--bandwidth", m_bandwidth_, "override uplink bytes per second");
    sim->add_option("--jitter", m_jitter_, "override jitter std in seconds");
    sim->add_option("--seed", m_seed_, "override jitter seed");
    sim->add_option("--compression", m_compression_, "override image compression factor");
    sim->add_option("--format", m_format_, "table|json|csv")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    sim->add_option("--out", m_out_, "output file (default: stdout)");
    sim->callback([this] {
      auto cfg = m_scenario_.empty() ? ScenarioConfig::builtin() : ScenarioConfig::load(m_scenario_);
      if (m_bandwidth_) cfg.link.bandwidth_up = *m_bandwidth_;
      if (m_jitter_) cfg.link.jitter_std_s = *m_jitter_;
      if (m_seed_) cfg.link.seed = *m_seed_;
      if (m_compression_) cfg.image.compression_factor = *m_compression_;
      DatasetManifest m;
      if (!m_path_.empty()) {
        m = load_dataset(m_path_, ontology());
      } else {
        for (int i = 0; i < m_frames_; ++i) {
          char id[32];
          std::snprintf(id, sizeof id, "frame_%04d", i);
          m.frames.push_back(FrameLabel{id, "", {}});
        }
      }
      const auto report = compare_scenarios(m, cfg.link, cfg.compute, cfg.image, cfg.embedding);
      if (m_format_ == "json") {
        json doc = sim_report_to_json(report);
        doc["config"] = cfg.to_json();
        emit(m_out_, doc.dump(2) + "\n", out_);
      } else if (m_format_ == "csv") {
        emit(m_out_, sim_report_to_csv(report), out_);
      } else {
        std::ostringstream t;
        char line[160];
        std::snprintf(line, sizeof line, "%-16s  %14s  %10s  %10s  %10s\n", "Scenario", "Uplink (B)", "p50 (s)",
                      "p95 (s)", "mean (s)");
        t << line;
        for (const auto& r : report.scenarios) {
          std::snprintf(line, sizeof line, "%-16s  %14llu  %10.4f  %10.4f  %10.4f\n",
                        std::string(scenario_name(r.scenario)).c_str(), static_cast<unsigned long long>(r.uplink_bytes),
                        r.p50_s, r.p95_s, r.mean_s);
          t << line;
        }
        emit(m_out_, t.str(), out_);
      }
    });
  }

  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_;
  std::string ontology_path_;

  std::string d_path_, d_out_;
  double d_fraction_ = 0.8;
  std::uint64_t d_seed_ = 0;
  int d_min_count_ = 10;
  int d_frames_ = 223;

  std::string a_path_, a_out_, a_plan_, a_level_ = "basic";
  std::uint64_t a_seed_ = 0;
  bool a_no_mirror_ = false;

  std::string s_host_ = "127.0.0.1", s_backend_ = "mock", s_dataset_;
  int s_port_ = 8080;
  std::uint64_t s_vision_seed_ = 0;
  OracleFlags s_oracle_;

  std::string r_path_, r_backend_ = "mock", r_cloud_, r_vision_ = "mock", r_prompt_ = "v1", r_out_, r_manifest_;
  std::uint64_t r_vision_seed_ = 0;
  int r_parallel_ = 1;
  bool r_timing_ = false;
  OracleFlags r_oracle_;

  std::string j_path_, j_responses_, j_out_, j_endpoint_, j_model_ = "gpt-4o", j_templates_;
  int j_retries_ = 2, j_parallel_ = 1;
  double j_timeout_ = 60.0;
  bool j_no_fallback_ = false, j_invisible_hallucination_ = false, j_no_fenced_ = false;

  std::string c_verdicts_, c_policy_ = "literal", c_format_ = "json", c_out_, c_prompt_ = "v1", c_backend_, c_manifest_;
  bool c_clamp_ = false, c_vision_ = false, c_comprehensive_ = false;

  std::vector<std::string> p_reports_;
  std::string p_format_ = "table", p_out_;

  std::string m_path_, m_scenario_, m_format_ = "table", m_out_;
  int m_frames_ = 223;
  std::optional<double> m_bandwidth_, m_jitter_, m_compression_;
  std::optional<std::uint64_t> m_seed_;
};

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  return cli.run(argc, argv);
}

}  // namespace odal

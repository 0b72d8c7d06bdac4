// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "odal/model.hpp"
#include "odal/rational.hpp"

namespace odal {

// When the frame bonus applies: LiteralD0 whenever no object was detected,
// CleanEmptyOnly only for frames with nothing to detect and nothing reported.
enum class DeltaRule { kLiteralD0, kCleanEmptyOnly };

std::string_view delta_rule_name(DeltaRule rule);  // "literal" / "clean-empty"
DeltaRule delta_rule_from_name(std::string_view name);

struct ScorePolicy {
  DeltaRule delta_rule = DeltaRule::kLiteralD0;
  bool clamp_frame_at_zero = false;

  friend bool operator==(const ScorePolicy&, const ScorePolicy&) = default;
};

struct FrameScore {
  std::string frame_id;
  Rational score;
  std::int64_t visible = 0;    // N_f
  std::int64_t detected = 0;   // C_f
  std::int64_t localized = 0;
  std::int64_t hallucinated = 0;  // H_f
  bool delta = false;

  std::int64_t max_score() const noexcept { return visible > 1 ? visible : 1; }
  friend bool operator==(const FrameScore&, const FrameScore&) = default;
};

// S_f = sum(d*l + d*(1-l)/2) - H_f + delta, optionally clamped at zero.
FrameScore frame_score(const Verdict& verdict, const ScorePolicy& policy = {});

struct SnrValue {
  bool capped = false;  // H = 0 with C > 0
  Rational value;       // C/H, the cap when capped, 0 when C = H = 0
  std::int64_t cap = 0;

  friend bool operator==(const SnrValue&, const SnrValue&) = default;
};

SnrValue snr(std::int64_t correct, std::int64_t hallucinated, std::int64_t cap);

// Truncated to `digits` decimals; capped values render as "CAP(n)".
std::string format_snr(const SnrValue& value, int digits = 4);
// Integral percentages render bare ("100"), others rounded half-up to
// `digits` decimals.
std::string format_pct(const Rational& pct, int digits = 2);

struct FineTuneDescriptor {
  bool vision_encoder = false;
  bool comprehensive = false;

  friend bool operator==(const FineTuneDescriptor&, const FineTuneDescriptor&) = default;
};

struct RunMeta {
  std::string prompt_version = "v1";
  std::string backend_id;
  std::string judge_kind = "Rules";
  FineTuneDescriptor fine_tune;

  friend bool operator==(const RunMeta&, const RunMeta&) = default;
};

struct MetricReport {
  RunMeta meta;
  ScorePolicy policy;
  std::int64_t frames = 0;
  Rational total_score;
  std::int64_t total_max = 0;
  Rational odal_score_pct;
  std::int64_t correct = 0;       // C
  std::int64_t localized = 0;
  std::int64_t hallucinated = 0;  // H
  std::int64_t snr_cap = 0;
  SnrValue odal_snr;
  Rational json_rate_strict_pct;
  Rational json_rate_lenient_pct;
  std::vector<FrameScore> per_frame;  // sorted by frame_id

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// Throws kEmptyRun for no verdicts and kDuplicateFrame for repeated ids.
MetricReport aggregate(const std::vector<Verdict>& verdicts, const ScorePolicy& policy = {}, const RunMeta& meta = {});

inline constexpr std::string_view kReportSchema = "odalbench/1";

nlohmann::json report_to_json(const MetricReport& report);
MetricReport report_from_json(const nlohmann::json& doc);
std::string report_to_text(const MetricReport& report);  // pretty JSON plus newline
MetricReport read_report(const std::filesystem::path& path);

enum class ReportFormat { kTable, kJson, kCsv };
ReportFormat report_format_from_name(std::string_view name);

// Rows ordered by descending SNR (capped values rank at their cap), ties in
// input order. The table carries the columns Version, Vision Encoder,
// Comprehensive, ODAL_score (%), ODAL_SNR, JSON Rate (%).
std::string emit_report(const std::vector<MetricReport>& reports, ReportFormat format);

// Verdict JSON-lines.
std::vector<Verdict> read_verdicts(const std::filesystem::path& path);
void write_verdicts(const std::filesystem::path& path, const std::vector<Verdict>& verdicts);

}  // namespace odal

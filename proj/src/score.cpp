// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <set>

#include "odal/bench.hpp"
#include "odal/ontology.hpp"

namespace odal {

std::string_view delta_rule_name(DeltaRule rule) {
  return rule == DeltaRule::kLiteralD0 ? "literal" : "clean-empty";
}

DeltaRule delta_rule_from_name(std::string_view name) {
  const std::string n = normalize_token(name);
  if (n == "literal") return DeltaRule::kLiteralD0;
  if (n == "clean-empty") return DeltaRule::kCleanEmptyOnly;
  throw Error(ErrorCode::kInvalidArgument, "unknown delta rule \"" + std::string(name) + "\"");
}

FrameScore frame_score(const Verdict& verdict, const ScorePolicy& policy) {
  FrameScore fs;
  fs.frame_id = verdict.frame_id;
  fs.visible = static_cast<std::int64_t>(verdict.per_object.size());
  std::int64_t halves = 0;
  for (const auto& o : verdict.per_object) {
    if (!o.detected) continue;
    ++fs.detected;
    if (o.localized) {
      ++fs.localized;
      halves += 2;
    } else {
      halves += 1;
    }
  }
  fs.hallucinated = static_cast<std::int64_t>(verdict.hallucinations.size());
  if (policy.delta_rule == DeltaRule::kLiteralD0) {
    fs.delta = fs.detected == 0;
  } else {
    fs.delta = fs.visible == 0 && verdict.hallucinations.empty() && verdict.neutral.empty();
  }
  fs.score = Rational(halves, 2) - Rational(fs.hallucinated) + Rational(fs.delta ? 1 : 0);
  if (policy.clamp_frame_at_zero && fs.score < Rational(0)) fs.score = Rational(0);
  return fs;
}

SnrValue snr(std::int64_t correct, std::int64_t hallucinated, std::int64_t cap) {
  SnrValue v;
  v.cap = cap;
  if (hallucinated > 0) {
    v.value = Rational(correct, hallucinated);
  } else if (correct > 0) {
    v.capped = true;
    v.value = Rational(cap);
  }
  return v;
}

std::string format_snr(const SnrValue& value, int digits) {
  if (value.capped) return "CAP(" + std::to_string(value.cap) + ")";
  return value.value.to_fixed(digits, false);
}

std::string format_pct(const Rational& pct, int digits) {
  if (pct.is_integer()) return std::to_string(pct.num());
  return pct.to_fixed(digits, true);
}

MetricReport aggregate(const std::vector<Verdict>& verdicts, const ScorePolicy& policy, const RunMeta& meta) {
  if (verdicts.empty()) throw Error(ErrorCode::kEmptyRun, "no verdicts to score");
  MetricReport r;
  r.meta = meta;
  r.policy = policy;
  std::set<std::string> ids;
  std::int64_t strict = 0;
  std::int64_t lenient = 0;
  for (const auto& v : verdicts) {
    if (!ids.insert(v.frame_id).second) {
      throw Error(ErrorCode::kDuplicateFrame, "frame \"" + v.frame_id + "\" judged twice");
    }
    FrameScore fs = frame_score(v, policy);
    r.total_score += fs.score;
    r.total_max += fs.max_score();
    r.correct += fs.detected;
    r.localized += fs.localized;
    r.hallucinated += fs.hallucinated;
    r.snr_cap += fs.visible;
    if (v.parse_status == ParseStatus::kValidStrict) ++strict;
    if (v.parse_status != ParseStatus::kInvalid) ++lenient;
    r.per_frame.push_back(std::move(fs));
  }
  std::sort(r.per_frame.begin(), r.per_frame.end(),
            [](const FrameScore& a, const FrameScore& b) { return a.frame_id < b.frame_id; });
  r.frames = static_cast<std::int64_t>(verdicts.size());
  r.odal_score_pct = Rational(100) * r.total_score / Rational(r.total_max);
  r.odal_snr = snr(r.correct, r.hallucinated, r.snr_cap);
  r.json_rate_strict_pct = Rational(100 * strict, r.frames);
  r.json_rate_lenient_pct = Rational(100 * lenient, r.frames);
  return r;
}

}  // namespace odal

// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "odal/bench.hpp"
#include "odal/ontology.hpp"

namespace odal {

namespace {

using nlohmann::json;

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidArgument, "bad integer \"" + std::string(s) + "\"");
  }
  return v;
}

Rational rational_from_string(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(s));
  return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
}

json pct_json(const Rational& pct) { return {{"exact", pct.to_string()}, {"display", format_pct(pct)}}; }

Rational pct_from(const json& doc) { return rational_from_string(doc.at("exact").get<std::string>()); }

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

json report_to_json(const MetricReport& r) {
  json per_frame = json::array();
  for (const auto& f : r.per_frame) {
    per_frame.push_back({{"frame_id", f.frame_id},
                         {"S", f.score.to_string()},
                         {"N", f.visible},
                         {"C", f.detected},
                         {"L", f.localized},
                         {"H", f.hallucinated},
                         {"max", f.max_score()},
                         {"delta", f.delta}});
  }
  json snr_doc{{"capped", r.odal_snr.capped},
               {"exact", r.odal_snr.value.to_string()},
               {"cap", r.odal_snr.cap},
               {"display", format_snr(r.odal_snr)}};
  return {{"schema", kReportSchema},
          {"run_meta",
           {{"prompt_version", r.meta.prompt_version},
            {"backend_id", r.meta.backend_id},
            {"judge_kind", r.meta.judge_kind},
            {"fine_tune", {{"vision_encoder", r.meta.fine_tune.vision_encoder},
                           {"comprehensive", r.meta.fine_tune.comprehensive}}}}},
          {"policy", {{"delta_rule", delta_rule_name(r.policy.delta_rule)}, {"clamp", r.policy.clamp_frame_at_zero}}},
          {"frames", r.frames},
          {"total_score", r.total_score.to_string()},
          {"total_max", r.total_max},
          {"odal_score_pct", pct_json(r.odal_score_pct)},
          {"C", r.correct},
          {"L", r.localized},
          {"H", r.hallucinated},
          {"snr_cap", r.snr_cap},
          {"odal_snr", snr_doc},
          {"json_rate_strict_pct", pct_json(r.json_rate_strict_pct)},
          {"json_rate_lenient_pct", pct_json(r.json_rate_lenient_pct)},
          {"per_frame", per_frame}};
}

MetricReport report_from_json(const json& doc) {
  try {
    if (doc.at("schema").get<std::string>() != kReportSchema) {
      throw Error(ErrorCode::kInvalidArgument, "unsupported report schema \"" + doc.at("schema").get<std::string>() + "\"");
    }
    MetricReport r;
    const auto& meta = doc.at("run_meta");
    r.meta.prompt_version = meta.at("prompt_version").get<std::string>();
    r.meta.backend_id = meta.at("backend_id").get<std::string>();
    r.meta.judge_kind = meta.at("judge_kind").get<std::string>();
    r.meta.fine_tune.vision_encoder = meta.at("fine_tune").at("vision_encoder").get<bool>();
    r.meta.fine_tune.comprehensive = meta.at("fine_tune").at("comprehensive").get<bool>();
    r.policy.delta_rule = delta_rule_from_name(doc.at("policy").at("delta_rule").get<std::string>());
    r.policy.clamp_frame_at_zero = doc.at("policy").at("clamp").get<bool>();
    r.frames = doc.at("frames").get<std::int64_t>();
    r.total_score = rational_from_string(doc.at("total_score").get<std::string>());
    r.total_max = doc.at("total_max").get<std::int64_t>();
    r.odal_score_pct = pct_from(doc.at("odal_score_pct"));
    r.correct = doc.at("C").get<std::int64_t>();
    r.localized = doc.at("L").get<std::int64_t>();
    r.hallucinated = doc.at("H").get<std::int64_t>();
    r.snr_cap = doc.at("snr_cap").get<std::int64_t>();
    const auto& s = doc.at("odal_snr");
    r.odal_snr.capped = s.at("capped").get<bool>();
    r.odal_snr.value = rational_from_string(s.at("exact").get<std::string>());
    r.odal_snr.cap = s.at("cap").get<std::int64_t>();
    r.json_rate_strict_pct = pct_from(doc.at("json_rate_strict_pct"));
    r.json_rate_lenient_pct = pct_from(doc.at("json_rate_lenient_pct"));
    for (const auto& f : doc.at("per_frame")) {
      FrameScore fs;
      fs.frame_id = f.at("frame_id").get<std::string>();
      fs.score = rational_from_string(f.at("S").get<std::string>());
      fs.visible = f.at("N").get<std::int64_t>();
      fs.detected = f.at("C").get<std::int64_t>();
      fs.localized = f.at("L").get<std::int64_t>();
      fs.hallucinated = f.at("H").get<std::int64_t>();
      fs.delta = f.at("delta").get<bool>();
      r.per_frame.push_back(std::move(fs));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed report: ") + e.what());
  }
}

std::string report_to_text(const MetricReport& report) { return report_to_json(report).dump(2) + "\n"; }

MetricReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::kInvalidArgument, path.string() + ": not JSON");
  return report_from_json(doc);
}

ReportFormat report_format_from_name(std::string_view name) {
  const std::string n = normalize_token(name);
  if (n == "table") return ReportFormat::kTable;
  if (n == "json") return ReportFormat::kJson;
  if (n == "csv") return ReportFormat::kCsv;
  throw Error(ErrorCode::kInvalidArgument, "unknown report format \"" + std::string(name) + "\"");
}

std::string emit_report(const std::vector<MetricReport>& reports, ReportFormat format) {
  if (reports.empty()) throw Error(ErrorCode::kEmptyRun, "no reports to emit");
  std::vector<std::size_t> order(reports.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return reports[a].odal_snr.value > reports[b].odal_snr.value;
  });

  if (format == ReportFormat::kJson) {
    if (reports.size() == 1) return report_to_text(reports.front());
    json arr = json::array();
    for (auto i : order) arr.push_back(report_to_json(reports[i]));
    return arr.dump(2) + "\n";
  }

  if (format == ReportFormat::kCsv) {
    std::string out =
        "version,vision_encoder,comprehensive,odal_score_pct,odal_snr,json_rate_pct,json_rate_lenient_pct,C,H,"
        "snr_cap,frames,backend_id,judge_kind\n";
    for (auto i : order) {
      const auto& r = reports[i];
      out += upper(r.meta.prompt_version) + "," + yes_no(r.meta.fine_tune.vision_encoder) + "," +
             yes_no(r.meta.fine_tune.comprehensive) + "," + format_pct(r.odal_score_pct) + "," +
             format_snr(r.odal_snr) + "," + format_pct(r.json_rate_strict_pct) + "," +
             format_pct(r.json_rate_lenient_pct) + "," + std::to_string(r.correct) + "," +
             std::to_string(r.hallucinated) + "," + std::to_string(r.snr_cap) + "," + std::to_string(r.frames) + "," +
             csv_field(r.meta.backend_id) + "," + csv_field(r.meta.judge_kind) + "\n";
    }
    return out;
  }

  const std::vector<std::string> header{"Version", "Vision Encoder", "Comprehensive",
                                        "ODAL_score (%)", "ODAL_SNR", "JSON Rate (%)"};
  std::vector<std::vector<std::string>> rows{header};
  for (auto i : order) {
    const auto& r = reports[i];
    rows.push_back({upper(r.meta.prompt_version), yes_no(r.meta.fine_tune.vision_encoder),
                    yes_no(r.meta.fine_tune.comprehensive), format_pct(r.odal_score_pct), format_snr(r.odal_snr),
                    format_pct(r.json_rate_strict_pct)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << "\n";
  };
  emit_row(rows.front());
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << "\n";
  for (std::size_t i = 1; i < rows.size(); ++i) emit_row(rows[i]);
  return out.str();
}

}  // namespace odal

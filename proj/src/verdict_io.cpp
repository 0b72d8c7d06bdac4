// SPDX-License-Identifier: Apache-2.0

#include <fstream>

#include "odal/bench.hpp"

namespace odal {

std::vector<Verdict> read_verdicts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<Verdict> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded()) {
      throw Error(ErrorCode::kVerdictMalformed, path.string() + ":" + std::to_string(line_no) + ": not JSON");
    }
    out.push_back(verdict_from_json(doc));
  }
  return out;
}

void write_verdicts(const std::filesystem::path& path, const std::vector<Verdict>& verdicts) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& v : verdicts) out << verdict_to_json(v).dump() << "\n";
}

}  // namespace odal

// SPDX-License-Identifier: Apache-2.0

#include "odal/prompt.hpp"

#include <fstream>
#include <sstream>

#include "odal/error.hpp"
#include "odal/resources.hpp"

namespace odal {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const PromptTemplates& PromptTemplates::builtin() {
  static const PromptTemplates t{std::string(resources::prompts_system_txt), std::string(resources::prompts_v1_user_txt),
                                 std::string(resources::prompts_v2_user_txt)};
  return t;
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  return {read_text(dir / "system.txt"), read_text(dir / "v1_user.txt"), read_text(dir / "v2_user.txt")};
}

std::string substitute(std::string_view text, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find("{{", pos);
    if (open == std::string_view::npos) break;
    const auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    out.append(text.substr(pos, open - pos));
    const std::string key(text.substr(open + 2, close - open - 2));
    if (const auto it = values.find(key); it != values.end()) {
      out += it->second;
    } else {
      out.append(text.substr(open, close + 2 - open));
    }
    pos = close + 2;
  }
  out.append(text.substr(pos));
  return out;
}

RenderedPrompt render_prompt(PromptVersion version, const CabinOntology& ontology, const PromptTemplates& templates) {
  if (version == PromptVersion::kV2) return {templates.system, templates.v2_user};

  std::string positions;
  for (const auto& p : ontology.positions()) positions += "- " + p + "\n";
  const std::string example_position = ontology.find_position("Seat.Row2.Middle").value_or(ontology.positions().front());
  const std::string example_class = ontology.classes().empty() ? "backpack" : ontology.classes().front();
  nlohmann::json example{{example_class, {{"position", example_position}, {"is_visible", "True"}}}};
  return {templates.system,
          substitute(templates.v1_user, {{"positions", positions}, {"example", example.dump(2)}})};
}

std::string render_response_json(const std::map<std::string, ObjectState>& objects) {
  return label_objects_to_json(objects).dump();
}

}  // namespace odal

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "odal/model.hpp"
#include "odal/ontology.hpp"

namespace odal {

// Raw template texts. User templates may use {{positions}} and {{example}}.
struct PromptTemplates {
  std::string system;
  std::string v1_user;
  std::string v2_user;

  static const PromptTemplates& builtin();
  // Reads system.txt, v1_user.txt and v2_user.txt from dir.
  static PromptTemplates load(const std::filesystem::path& dir);
};

struct RenderedPrompt {
  std::string system_text;
  std::string user_text;
};

// V1 spells out the position vocabulary and an example response; V2 only
// describes the scene and the task. The system text is shared.
RenderedPrompt render_prompt(PromptVersion version, const CabinOntology& ontology,
                             const PromptTemplates& templates = PromptTemplates::builtin());

// Replaces every {{name}} with values[name]; unknown placeholders stay as-is.
std::string substitute(std::string_view text, const std::map<std::string, std::string>& values);

// Canonical model-response rendering: {name: {position, is_visible}} with
// "True"/"False" strings, compact, keys sorted.
std::string render_response_json(const std::map<std::string, ObjectState>& objects);

}  // namespace odal

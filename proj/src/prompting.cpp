// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include "attrib/prompting.hpp"

#include "attrib/error.hpp"
#include "attrib/text.hpp"

namespace attrib {

const std::vector<PromptTemplate>& template_catalog() {
  static const std::vector<PromptTemplate> catalog = {
      {TemplateId::kNone, ""},
      {TemplateId::kP1, "Here is the text from the same author:"},
      {TemplateId::kP2,
       "Analyze the writing styles of the input texts, disregarding the differences in topic "
       "and content.\nHere is the text from the same author:"},
      {TemplateId::kP3,
       "Focus on grammatical styles indicative of authorship. Here is the text from the same "
       "author:"},
      {TemplateId::kP4,
       "Analyze the writing styles of the input texts, disregarding the differences in topic "
       "and content.\nReasoning based on linguistic features such as phrasal verbs, modal "
       "verbs, punctuation, rare words, affixes, quantities, humor, sarcasm, typographical "
       "errors, and misspellings. Here is the text from the same author:"},
  };
  return catalog;
}

const PromptTemplate& template_by_id(TemplateId id) {
  for (const PromptTemplate& t : template_catalog()) {
    if (t.id == id) return t;
  }
  throw InputError("unknown template id");
}

TemplateId parse_template_id(std::string_view name) {
  if (name == "none") return TemplateId::kNone;
  if (name == "p1") return TemplateId::kP1;
  if (name == "p2") return TemplateId::kP2;
  if (name == "p3") return TemplateId::kP3;
  if (name == "p4") return TemplateId::kP4;
  throw InputError("unknown template '" + std::string(name) + "' (expected none|p1|p2|p3|p4)");
}

std::string_view template_name(TemplateId id) {
  switch (id) {
    case TemplateId::kNone: return "none";
    case TemplateId::kP1: return "p1";
    case TemplateId::kP2: return "p2";
    case TemplateId::kP3: return "p3";
    case TemplateId::kP4: return "p4";
  }
  return "?";
}

Prompt build_prompt(std::span<const std::string> examples, const PromptTemplate& tmpl,
                    std::optional<std::size_t> max_example_chars) {
  if (examples.empty()) throw InputError("prompt needs at least one example text");

  Prompt prompt;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    std::string_view ex = examples[i];
    if (max_example_chars) ex = text::prefix(ex, *max_example_chars);
    if (ex.empty()) {
      throw InputError("example " + std::to_string(i) + " is empty" +
                       (max_example_chars ? " after truncation" : ""));
    }
    if (i > 0) prompt.full_prefix += "\n\n";
    prompt.full_prefix += ex;
  }
  prompt.full_prefix += '\n';
  if (tmpl.id != TemplateId::kNone) {
    prompt.full_prefix += tmpl.connective;
    prompt.full_prefix += '\n';
  }
  prompt.query_start_offset = text::length(prompt.full_prefix);
  return prompt;
}

}  // namespace attrib

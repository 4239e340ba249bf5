// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace attrib {

enum class TemplateId { kNone, kP1, kP2, kP3, kP4 };

struct PromptTemplate {
  TemplateId id = TemplateId::kP1;
  // Instruction placed between the example texts and the query.
  std::string connective;
};

// Conditioning text placed before a query.
struct Prompt {
  std::string full_prefix;
  // Length of full_prefix in characters (code points); the query starts here.
  std::size_t query_start_offset = 0;
};

// The five layouts: no instruction, then instructions 1 through 4.
const std::vector<PromptTemplate>& template_catalog();

const PromptTemplate& template_by_id(TemplateId id);

// "none", "p1" .. "p4"; throws InputError on anything else.
TemplateId parse_template_id(std::string_view name);
std::string_view template_name(TemplateId id);

// Layout:
//   example_1 "\n\n" example_2 ... "\n" connective "\n"
// or, for the no-instruction template,
//   example_1 "\n\n" ... example_n "\n"
// With max_example_chars set, each example keeps only its first
// max_example_chars characters.
Prompt build_prompt(std::span<const std::string> examples, const PromptTemplate& tmpl,
                    std::optional<std::size_t> max_example_chars = std::nullopt);

}  // namespace attrib

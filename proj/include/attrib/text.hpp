// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// UTF-8 helpers. A "character" everywhere in this library is one Unicode
// code point, which is also the unit of completion-server text offsets.
namespace attrib::text {

// Throws InputError on malformed UTF-8.
std::u32string decode(std::string_view utf8);

std::string encode(std::u32string_view codepoints);
std::string encode(char32_t codepoint);

// Number of code points; throws InputError on malformed UTF-8.
std::size_t length(std::string_view utf8);

// Longest prefix holding at most `max_chars` code points.
std::string_view prefix(std::string_view utf8, std::size_t max_chars);

bool is_valid(std::string_view utf8) noexcept;

}  // namespace attrib::text

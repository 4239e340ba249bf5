// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace attrib {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration, violated precondition or malformed input data.
class InputError : public Error {
 public:
  using Error::Error;
};

// Malformed line in a JSONL file; line numbers are 1-based.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Failure inside a scoring backend.
class BackendError : public Error {
 public:
  enum class Kind {
    kPromptOverflow,
    kTransport,
    kProtocol,
    kMissingEntry,
  };

  BackendError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace attrib

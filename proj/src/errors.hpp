// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loopterm {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  EmptyPolyhedron,
  Precondition,
  Parse,
  StrictInequality,
  Unsupported,
  Io,
  Tool,
  Internal,
};

const char *to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Parse diagnostics carry a 1-based source position (0 when unknown).
class ParseError : public Error {
public:
  ParseError(ErrorCode code, const std::string &message, std::size_t line,
             std::size_t column)
      : Error(code, format(message, line, column)), line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  static std::string format(const std::string &message, std::size_t line,
                            std::size_t column) {
    if (line == 0)
      return message;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

inline void require(bool condition, ErrorCode code, const std::string &what) {
  if (!condition)
    throw Error(code, what);
}

} // namespace loopterm

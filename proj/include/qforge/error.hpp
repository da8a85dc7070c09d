#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qforge {

/// Invalid UTF-8 on ingest. `offset` is the byte index of the first bad byte.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t offset, const std::string& what)
      : std::runtime_error(what + " at byte offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Markup grammar violation. Line and column are 1-based; column counts
/// code points, not bytes.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// The CLI maps each of these onto a stable exit code.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RenderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent evaluation inputs (missing or duplicate ids, bad lines).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reports built with different metric configurations cannot share a table.
class ReportConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qforge

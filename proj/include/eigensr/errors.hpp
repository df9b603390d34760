#pragma once

#include <stdexcept>
#include <string>

namespace eigensr {

// I/O failure: missing file, short read, unwritable path.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally invalid file contents (bad magic, unsupported encoding).
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller violated a precondition.
struct ArgumentError : std::invalid_argument {
  explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A comparison score could not be defined (e.g. empty joint mask).
struct UndefinedScoreError : std::runtime_error {
  explicit UndefinedScoreError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace eigensr

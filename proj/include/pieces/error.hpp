#pragma once

#include <stdexcept>
#include <string>

namespace pieces {

// Error taxonomy mirrored by the CLI exit codes:
//   ConfigError -> 1, FormatError -> 2, IoError -> 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid UTF-8 input; carries the offset of the offending byte.
struct Utf8Error : FormatError {
  Utf8Error(const std::string& what, size_t offset)
      : FormatError(what), byte_offset(offset) {}
  size_t byte_offset;
};

}  // namespace pieces

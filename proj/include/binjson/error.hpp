#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace binjson {

enum class Errc {
  Truncated,
  BadTag,
  Overflow,
  Unsupported,
  TopLevelShape,
  SchemaRequired,
  InvalidUtf8,
  TrailingBytes,
  LengthMismatch,
  KeyContainsNul,
  RangeError,
  SyntaxError,
  DuplicateKey,
  SchemaSyntax,
  SchemaMismatch,
  ResolutionError,
};

const char* errc_name(Errc kind);

// Unified error for parsing, encoding and decoding. `offset` is the byte
// position in the offending buffer (or text) when meaningful, npos otherwise.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(Errc kind, std::string detail, std::size_t offset = npos)
      : std::runtime_error(format(kind, detail, offset)),
        kind_(kind),
        offset_(offset),
        detail_(std::move(detail)) {}

  Errc kind() const { return kind_; }
  std::size_t offset() const { return offset_; }
  const std::string& detail() const { return detail_; }

 private:
  static std::string format(Errc kind, const std::string& detail,
                            std::size_t offset);

  Errc kind_;
  std::size_t offset_;
  std::string detail_;
};

}  // namespace binjson

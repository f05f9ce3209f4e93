#include <cstdint>
#include <string>

#include "binjson/cursor.hpp"
#include "binjson/error.hpp"

namespace binjson {

const char* errc_name(Errc kind) {
  switch (kind) {
    case Errc::Truncated: return "Truncated";
    case Errc::BadTag: return "BadTag";
    case Errc::Overflow: return "Overflow";
    case Errc::Unsupported: return "Unsupported";
    case Errc::TopLevelShape: return "TopLevelShape";
    case Errc::SchemaRequired: return "SchemaRequired";
    case Errc::InvalidUtf8: return "InvalidUtf8";
    case Errc::TrailingBytes: return "TrailingBytes";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::KeyContainsNul: return "KeyContainsNul";
    case Errc::RangeError: return "RangeError";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::DuplicateKey: return "DuplicateKey";
    case Errc::SchemaSyntax: return "SchemaSyntax";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::ResolutionError: return "ResolutionError";
  }
  return "UnknownError";
}

std::string Error::format(Errc kind, const std::string& detail,
                          std::size_t offset) {
  std::string out = errc_name(kind);
  if (offset != npos) out += " at offset " + std::to_string(offset);
  if (!detail.empty()) {
    out += ": ";
    out += detail;
  }
  return out;
}

bool utf8_valid(const char* data, std::size_t size) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(data);
  std::size_t i = 0;
  while (i < size) {
    std::uint8_t b = p[i];
    if (b < 0x80) {
      ++i;
      continue;
    }
    std::size_t len;
    std::uint32_t cp;
    if ((b & 0xE0) == 0xC0) {
      len = 2;
      cp = b & 0x1F;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
      cp = b & 0x0F;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4;
      cp = b & 0x07;
    } else {
      return false;
    }
    if (i + len > size) return false;
    for (std::size_t k = 1; k < len; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    if (len == 2 && cp < 0x80) return false;
    if (len == 3 && cp < 0x800) return false;
    if (len == 4 && cp < 0x10000) return false;
    if (cp > 0x10FFFF) return false;
    if (cp >= 0xD800 && cp <= 0xDFFF) return false;
    i += len;
  }
  return true;
}

bool ascii_only(const std::string& s) {
  for (unsigned char c : s)
    if (c >= 0x80) return false;
  return true;
}

}  // namespace binjson

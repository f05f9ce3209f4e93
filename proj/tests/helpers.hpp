#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "binjson/value.hpp"

namespace testutil {

inline std::string fixture_dir() {
  if (const char* env = std::getenv("BINJSON_FIXTURES")) return env;
  return "fixtures";
}

inline std::string fixture_path(const std::string& name) {
  return fixture_dir() + "/" + name;
}

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string& s = buf.str();
  return {s.begin(), s.end()};
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline binjson::JsonValue canonical_doc() {
  return binjson::parse_json(read_text(fixture_path("test.json")));
}

inline std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  for (std::uint8_t b : bytes) {
    if (!out.empty()) out += ' ';
    out += digits[b >> 4];
    out += digits[b & 0xF];
  }
  return out;
}

inline std::vector<std::uint8_t> from_hex(const std::string& text) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::vector<std::uint8_t> out;
  int hi = -1;
  for (char c : text) {
    int n = nibble(c);
    if (n < 0) continue;
    if (hi < 0) {
      hi = n;
    } else {
      out.push_back(static_cast<std::uint8_t>((hi << 4) | n));
      hi = -1;
    }
  }
  return out;
}

// Deterministic generator of JSON documents: depth <= 8, strings <= 64 code
// points, integers over the full signed-64 range.
class DocGenerator {
 public:
  explicit DocGenerator(std::uint64_t seed) : rng_(seed) {}

  binjson::JsonValue value(int depth = 0) {
    int pick = depth >= 8 ? static_cast<int>(rng_() % 5)
                          : static_cast<int>(rng_() % 7);
    switch (pick) {
      case 0: return binjson::JsonValue(nullptr);
      case 1: return binjson::JsonValue(rng_() % 2 == 0);
      case 2: return integer();
      case 3: return floating();
      case 4: return binjson::JsonValue(string());
      case 5: {
        binjson::JsonValue::Array items;
        std::size_t n = rng_() % 5;
        for (std::size_t i = 0; i < n; ++i) items.push_back(value(depth + 1));
        return binjson::JsonValue(std::move(items));
      }
      default: {
        binjson::JsonValue::Object entries;
        std::size_t n = rng_() % 5;
        for (std::size_t i = 0; i < n; ++i) {
          std::string key = string();
          bool dup = false;
          for (const auto& [k, v] : entries) dup = dup || k == key;
          if (dup) continue;
          entries.emplace_back(std::move(key), value(depth + 1));
        }
        return binjson::JsonValue(std::move(entries));
      }
    }
  }

  binjson::JsonValue object(int depth = 0) {
    binjson::JsonValue::Object entries;
    std::size_t n = rng_() % 5;
    for (std::size_t i = 0; i < n; ++i) {
      std::string key = string();
      bool dup = false;
      for (const auto& [k, v] : entries) dup = dup || k == key;
      if (dup) continue;
      entries.emplace_back(std::move(key), value(depth + 1));
    }
    return binjson::JsonValue(std::move(entries));
  }

  binjson::JsonValue integer() {
    // Mix small magnitudes (exercising every width class) with full-range
    // values.
    switch (rng_() % 4) {
      case 0: return binjson::JsonValue(
          static_cast<std::int64_t>(rng_() % 256) - 128);
      case 1: return binjson::JsonValue(
          static_cast<std::int64_t>(rng_() % 100000) - 50000);
      case 2: return binjson::JsonValue(
          static_cast<std::int64_t>(static_cast<std::int32_t>(rng_())));
      default: return binjson::JsonValue(static_cast<std::int64_t>(rng_()));
    }
  }

  binjson::JsonValue floating() {
    for (;;) {
      double d;
      if (rng_() % 2 == 0) {
        d = static_cast<double>(static_cast<std::int64_t>(rng_() % 2000000) -
                                1000000) /
            1024.0;
      } else {
        std::uint64_t bits = rng_();
        std::memcpy(&d, &bits, 8);
      }
      if (std::isfinite(d)) return binjson::JsonValue(d);
    }
  }

  std::string string() {
    std::size_t n = rng_() % 65;  // up to 64 code points
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
      switch (rng_() % 8) {
        case 0: {  // 2-byte code point
          append_codepoint(out, 0x80 + rng_() % 0x700);
          break;
        }
        case 1: {  // 3-byte code point (skip surrogates)
          std::uint32_t cp = 0x800 + rng_() % (0xD800 - 0x800);
          append_codepoint(out, cp);
          break;
        }
        case 2: {  // 4-byte code point
          append_codepoint(out, 0x10000 + rng_() % 0x10000);
          break;
        }
        default:
          out += static_cast<char>('a' + rng_() % 26);
      }
    }
    return out;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  static void append_codepoint(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace testutil

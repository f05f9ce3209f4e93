#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "binjson/cursor.hpp"
#include "binjson/error.hpp"
#include "binjson/formats.hpp"

namespace binjson {

namespace {

// Emits the smallest integer element: i (int8), U (uint8), I (int16),
// l (int32), L (int64); multi-byte payloads are big-endian two's complement.
void encode_int(std::int64_t n, ByteWriter& out) {
  if (n >= std::numeric_limits<std::int8_t>::min() &&
      n <= std::numeric_limits<std::int8_t>::max()) {
    out.u8('i');
    out.u8(static_cast<std::uint8_t>(n));
  } else if (n >= 0 && n <= 0xFF) {
    out.u8('U');
    out.u8(static_cast<std::uint8_t>(n));
  } else if (n >= std::numeric_limits<std::int16_t>::min() &&
             n <= std::numeric_limits<std::int16_t>::max()) {
    out.u8('I');
    out.be(static_cast<std::uint16_t>(n), 2);
  } else if (n >= std::numeric_limits<std::int32_t>::min() &&
             n <= std::numeric_limits<std::int32_t>::max()) {
    out.u8('l');
    out.be(static_cast<std::uint32_t>(n), 4);
  } else {
    out.u8('L');
    out.be(static_cast<std::uint64_t>(n), 8);
  }
}

void encode_value(const JsonValue& v, ByteWriter& out) {
  switch (v.kind()) {
    case JsonValue::Kind::Null:
      out.u8('Z');
      break;
    case JsonValue::Kind::Bool:
      out.u8(v.as_bool() ? 'T' : 'F');
      break;
    case JsonValue::Kind::Int:
      encode_int(v.as_int(), out);
      break;
    case JsonValue::Kind::Float:
      out.u8('D');
      out.be(double_bits(v.as_float()), 8);
      break;
    case JsonValue::Kind::Str:
      out.u8('S');
      encode_int(static_cast<std::int64_t>(v.as_str().size()), out);
      out.raw(v.as_str());
      break;
    case JsonValue::Kind::Arr:
      out.u8('[');
      for (const auto& item : v.as_arr()) encode_value(item, out);
      out.u8(']');
      break;
    case JsonValue::Kind::Obj:
      out.u8('{');
      for (const auto& [key, item] : v.as_obj()) {
        // Object keys are length-prefixed strings without the 'S' marker.
        encode_int(static_cast<std::int64_t>(key.size()), out);
        out.raw(key);
        encode_value(item, out);
      }
      out.u8('}');
      break;
  }
}

class Decoder {
 public:
  Decoder(const std::uint8_t* data, std::size_t size, SpanSink* sink)
      : cur_(data, size), sink_(sink) {}

  ByteCursor& cursor() { return cur_; }

  JsonValue value() { return value_with(next_marker()); }

 private:
  std::uint8_t next_marker() {
    std::uint8_t m = cur_.read_u8();
    while (m == 'N') {  // no-op marker
      span(cur_.position() - 1, "no-op", "");
      m = cur_.read_u8();
    }
    return m;
  }

  void span(std::size_t start, std::string label, std::string decoded) {
    if (sink_)
      sink_->add(start, cur_.position() - start, std::move(label),
                 std::move(decoded));
  }

  std::int64_t int_payload(std::uint8_t marker, std::size_t start) {
    switch (marker) {
      case 'i': return static_cast<std::int8_t>(cur_.read_be(1));
      case 'U': return static_cast<std::int64_t>(cur_.read_be(1));
      case 'I': return static_cast<std::int16_t>(cur_.read_be(2));
      case 'l': return static_cast<std::int32_t>(cur_.read_be(4));
      case 'L': return static_cast<std::int64_t>(cur_.read_be(8));
      default:
        throw Error(Errc::BadTag,
                    "expected an integer marker, got 0x" + hex(marker), start);
    }
  }

  static std::string hex(std::uint8_t b) {
    static const char digits[] = "0123456789abcdef";
    return {digits[b >> 4], digits[b & 0xF]};
  }

  std::size_t length_element() {
    std::size_t start = cur_.position();
    std::uint8_t marker = next_marker();
    std::int64_t n = int_payload(marker, start);
    if (n < 0)
      throw Error(Errc::LengthMismatch, "negative length", start);
    span(start, "length", std::to_string(n));
    return static_cast<std::size_t>(n);
  }

  std::string string_payload(std::size_t len) {
    std::size_t at = cur_.position();
    std::string s = cur_.read_string(len);
    if (!utf8_valid(s))
      throw Error(Errc::InvalidUtf8, "string payload is not UTF-8", at);
    if (sink_ && len > 0) sink_->add(at, len, "string payload", s);
    return s;
  }

  // Parses an 'H' high-precision literal: Int when integral and in range,
  // Float when finitely representable, Overflow otherwise.
  JsonValue high_precision(const std::string& text, std::size_t at) {
    bool integral = text.find_first_of(".eE") == std::string::npos;
    if (integral) {
      errno = 0;
      char* end = nullptr;
      long long n = std::strtoll(text.c_str(), &end, 10);
      if (end != text.c_str() + text.size())
        throw Error(Errc::BadTag, "malformed high-precision number", at);
      if (errno == ERANGE)
        throw Error(Errc::Overflow,
                    "high-precision integer exceeds signed 64 bits", at);
      return JsonValue(static_cast<std::int64_t>(n));
    }
    errno = 0;
    char* end = nullptr;
    double d = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size())
      throw Error(Errc::BadTag, "malformed high-precision number", at);
    if (std::isinf(d) || std::isnan(d))
      throw Error(Errc::Overflow,
                  "high-precision number is not representable", at);
    return JsonValue(d);
  }

  JsonValue value_with(std::uint8_t marker) {
    std::size_t start = cur_.position() - 1;
    switch (marker) {
      case 'Z':
        span(start, "null", "null");
        return JsonValue(nullptr);
      case 'T':
        span(start, "bool", "true");
        return JsonValue(true);
      case 'F':
        span(start, "bool", "false");
        return JsonValue(false);
      case 'i':
      case 'U':
      case 'I':
      case 'l':
      case 'L': {
        std::int64_t n = int_payload(marker, start);
        span(start, "integer", std::to_string(n));
        return JsonValue(n);
      }
      case 'd': {
        double d = bits_float(static_cast<std::uint32_t>(cur_.read_be(4)));
        if (std::isinf(d) || std::isnan(d))
          throw Error(Errc::Unsupported, "NaN/infinity have no JSON value",
                      start);
        span(start, "float32", dump_json(JsonValue(d)));
        return JsonValue(d);
      }
      case 'D': {
        double d = bits_double(cur_.read_be(8));
        if (std::isinf(d) || std::isnan(d))
          throw Error(Errc::Unsupported, "NaN/infinity have no JSON value",
                      start);
        span(start, "float64", dump_json(JsonValue(d)));
        return JsonValue(d);
      }
      case 'C': {
        std::uint8_t c = cur_.read_u8();
        if (c > 0x7F)
          throw Error(Errc::InvalidUtf8, "char marker above ASCII", start);
        std::string s(1, static_cast<char>(c));
        span(start, "char", s);
        return JsonValue(std::move(s));
      }
      case 'S': {
        span(start, "string marker", "");
        std::size_t len = length_element();
        return JsonValue(string_payload(len));
      }
      case 'H': {
        span(start, "high-precision marker", "");
        std::size_t len = length_element();
        std::size_t at = cur_.position();
        std::string text = string_payload(len);
        return high_precision(text, at);
      }
      case '[': {
        span(start, "array open", "");
        JsonValue::Array items;
        for (;;) {
          std::uint8_t m = next_marker();
          if (m == ']') {
            span(cur_.position() - 1, "array close", "");
            return JsonValue(std::move(items));
          }
          items.push_back(value_with(m));
        }
      }
      case '{': {
        span(start, "object open", "");
        JsonValue::Object entries;
        for (;;) {
          std::uint8_t m = next_marker();
          if (m == '}') {
            span(cur_.position() - 1, "object close", "");
            return JsonValue(std::move(entries));
          }
          // Keys are length-prefixed strings without the 'S' marker; the
          // marker just read is the key's length element.
          std::size_t key_start = cur_.position() - 1;
          std::int64_t n = int_payload(m, key_start);
          if (n < 0)
            throw Error(Errc::LengthMismatch, "negative key length",
                        key_start);
          span(key_start, "key length", std::to_string(n));
          std::string key = string_payload(static_cast<std::size_t>(n));
          entries.emplace_back(std::move(key), value());
        }
      }
      default:
        throw Error(Errc::BadTag, "unknown marker 0x" + hex(marker), start);
    }
  }

  ByteCursor cur_;
  SpanSink* sink_;
};

}  // namespace

std::vector<std::uint8_t> ubj_encode(const JsonValue& doc) {
  ByteWriter out;
  encode_value(doc, out);
  return std::move(out.bytes());
}

JsonValue ubj_decode(const std::uint8_t* data, std::size_t size,
                     SpanSink* sink) {
  Decoder dec(data, size, sink);
  JsonValue v = dec.value();
  if (!dec.cursor().at_end())
    throw Error(Errc::TrailingBytes,
                std::to_string(dec.cursor().remaining()) +
                    " byte(s) past the document",
                dec.cursor().position());
  return v;
}

}  // namespace binjson

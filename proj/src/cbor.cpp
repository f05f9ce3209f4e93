#include <cmath>
#include <limits>
#include <optional>

#include "binjson/cursor.hpp"
#include "binjson/error.hpp"
#include "binjson/formats.hpp"

namespace binjson {

namespace {

void header(ByteWriter& out, int major, std::uint64_t argument) {
  std::uint8_t base = static_cast<std::uint8_t>(major << 5);
  if (argument < 24) {
    out.u8(base | static_cast<std::uint8_t>(argument));
  } else if (argument <= 0xFF) {
    out.u8(base | 24);
    out.u8(static_cast<std::uint8_t>(argument));
  } else if (argument <= 0xFFFF) {
    out.u8(base | 25);
    out.be(argument, 2);
  } else if (argument <= 0xFFFFFFFFu) {
    out.u8(base | 26);
    out.be(argument, 4);
  } else {
    out.u8(base | 27);
    out.be(argument, 8);
  }
}

void encode_value(const JsonValue& v, ByteWriter& out) {
  switch (v.kind()) {
    case JsonValue::Kind::Null:
      out.u8(0xF6);
      break;
    case JsonValue::Kind::Bool:
      out.u8(v.as_bool() ? 0xF5 : 0xF4);
      break;
    case JsonValue::Kind::Int: {
      std::int64_t n = v.as_int();
      if (n >= 0)
        header(out, 0, static_cast<std::uint64_t>(n));
      else
        header(out, 1, static_cast<std::uint64_t>(-(n + 1)));
      break;
    }
    case JsonValue::Kind::Float:
      out.u8(0xFB);
      out.be(double_bits(v.as_float()), 8);
      break;
    case JsonValue::Kind::Str:
      header(out, 3, v.as_str().size());
      out.raw(v.as_str());
      break;
    case JsonValue::Kind::Arr:
      header(out, 4, v.as_arr().size());
      for (const auto& item : v.as_arr()) encode_value(item, out);
      break;
    case JsonValue::Kind::Obj:
      header(out, 5, v.as_obj().size());
      for (const auto& [key, item] : v.as_obj()) {
        header(out, 3, key.size());
        out.raw(key);
        encode_value(item, out);
      }
      break;
  }
}

// Widens an IEEE binary16 bit pattern to double.
double half_to_double(std::uint16_t h) {
  int sign = (h >> 15) & 1;
  int exponent = (h >> 10) & 0x1F;
  int mantissa = h & 0x3FF;
  double magnitude;
  if (exponent == 0) {
    magnitude = std::ldexp(mantissa, -24);
  } else if (exponent == 31) {
    // JSON cannot hold NaN/infinity; surface as an error at the call site.
    return std::numeric_limits<double>::infinity();
  } else {
    magnitude = std::ldexp(1024 + mantissa, exponent - 25);
  }
  return sign ? -magnitude : magnitude;
}

class Decoder {
 public:
  Decoder(const std::uint8_t* data, std::size_t size, SpanSink* sink,
          Warnings* warnings)
      : cur_(data, size), sink_(sink), warnings_(warnings) {}

  ByteCursor& cursor() { return cur_; }

  JsonValue value() {
    std::size_t start = cur_.position();
    std::uint8_t initial = cur_.peek_u8();
    int major = initial >> 5;
    switch (major) {
      case 0: {
        auto u = argument(start, "uint");
        if (!u)
          throw Error(Errc::BadTag, "indefinite length on an integer", start);
        if (*u > static_cast<std::uint64_t>(
                     std::numeric_limits<std::int64_t>::max()))
          throw Error(Errc::Overflow,
                      "unsigned value exceeds signed 64 bits", start);
        return finish_int(start, static_cast<std::int64_t>(*u));
      }
      case 1: {
        auto u = argument(start, "negative int");
        if (!u)
          throw Error(Errc::BadTag, "indefinite length on an integer", start);
        if (*u > static_cast<std::uint64_t>(
                     std::numeric_limits<std::int64_t>::max()))
          throw Error(Errc::Overflow,
                      "negative value exceeds signed 64 bits", start);
        return finish_int(start, -1 - static_cast<std::int64_t>(*u));
      }
      case 2:
        throw Error(Errc::Unsupported,
                    "byte strings are not JSON-compatible", start);
      case 3: return text(start);
      case 4: return array(start);
      case 5: return map(start);
      case 6: {
        auto tag = argument(start, "semantic tag");
        if (!tag)
          throw Error(Errc::BadTag, "indefinite length on a semantic tag",
                      start);
        if (*tag == 2 || *tag == 3)
          throw Error(Errc::Unsupported,
                      "bignum exceeds the signed-64 value model", start);
        if (warnings_)
          warnings_->push_back("skipped semantic tag " + std::to_string(*tag) +
                               " at offset " + std::to_string(start));
        return value();
      }
      default: return simple(start);
    }
  }

 private:
  // Reads an initial byte plus extension bytes; nullopt for additional 31
  // (indefinite length). A sentinel value would collide with a literal
  // 8-byte argument of 2^64-1.
  std::optional<std::uint64_t> argument(std::size_t start, const char* what) {
    std::uint8_t initial = cur_.read_u8();
    int additional = initial & 0x1F;
    std::uint64_t arg;
    if (additional < 24) {
      arg = additional;
    } else if (additional == 24) {
      arg = cur_.read_be(1);
    } else if (additional == 25) {
      arg = cur_.read_be(2);
    } else if (additional == 26) {
      arg = cur_.read_be(4);
    } else if (additional == 27) {
      arg = cur_.read_be(8);
    } else if (additional == 31) {
      return std::nullopt;
    } else {
      throw Error(Errc::BadTag,
                  std::string("reserved additional value in ") + what, start);
    }
    return arg;
  }

  void span(std::size_t start, std::string label, std::string decoded) {
    if (sink_)
      sink_->add(start, cur_.position() - start, std::move(label),
                 std::move(decoded));
  }

  JsonValue finish_int(std::size_t start, std::int64_t n) {
    span(start, "integer", std::to_string(n));
    return JsonValue(n);
  }

  std::string chunk(std::size_t header_start, std::uint64_t len) {
    span(header_start, "text header", "length " + std::to_string(len));
    std::size_t payload = cur_.position();
    std::string s = cur_.read_string(len);
    if (!utf8_valid(s))
      throw Error(Errc::InvalidUtf8, "text payload is not UTF-8", payload);
    if (sink_ && len > 0) sink_->add(payload, len, "text payload", s);
    return s;
  }

  JsonValue text(std::size_t start) {
    auto len = argument(start, "text string");
    if (len) return JsonValue(chunk(start, *len));
    span(start, "text header", "indefinite");
    std::string s;
    for (;;) {
      std::size_t at = cur_.position();
      if (cur_.peek_u8() == 0xFF) {
        cur_.read_u8();
        span(at, "stop code", "");
        break;
      }
      if ((cur_.peek_u8() >> 5) != 3)
        throw Error(Errc::BadTag, "indefinite text chunk is not a text string",
                    at);
      auto len2 = argument(at, "text chunk");
      if (!len2)
        throw Error(Errc::BadTag, "nested indefinite text string", at);
      s += chunk(at, *len2);
    }
    return JsonValue(std::move(s));
  }

  JsonValue array(std::size_t start) {
    auto count = argument(start, "array");
    JsonValue::Array items;
    if (!count) {
      span(start, "array header", "indefinite");
      while (cur_.peek_u8() != 0xFF) items.push_back(value());
      std::size_t at = cur_.position();
      cur_.read_u8();
      span(at, "stop code", "");
    } else {
      span(start, "array header", std::to_string(*count) + " element(s)");
      for (std::uint64_t i = 0; i < *count; ++i) items.push_back(value());
    }
    return JsonValue(std::move(items));
  }

  JsonValue map(std::size_t start) {
    auto count = argument(start, "map");
    JsonValue::Object entries;
    auto entry = [&] {
      JsonValue key = value();
      if (!key.is_str())
        throw Error(Errc::BadTag, "map key is not a text string",
                    cur_.position());
      entries.emplace_back(key.as_str(), value());
    };
    if (!count) {
      span(start, "map header", "indefinite");
      while (cur_.peek_u8() != 0xFF) entry();
      std::size_t at = cur_.position();
      cur_.read_u8();
      span(at, "stop code", "");
    } else {
      span(start, "map header", std::to_string(*count) + " entr(ies)");
      for (std::uint64_t i = 0; i < *count; ++i) entry();
    }
    return JsonValue(std::move(entries));
  }

  JsonValue simple(std::size_t start) {
    std::uint8_t initial = cur_.read_u8();
    int additional = initial & 0x1F;
    switch (additional) {
      case 20:
        span(start, "bool", "false");
        return JsonValue(false);
      case 21:
        span(start, "bool", "true");
        return JsonValue(true);
      case 22:
        span(start, "null", "null");
        return JsonValue(nullptr);
      case 25: {
        double d = half_to_double(static_cast<std::uint16_t>(cur_.read_be(2)));
        return finish_float(start, d, "float16");
      }
      case 26: {
        double d = bits_float(static_cast<std::uint32_t>(cur_.read_be(4)));
        return finish_float(start, d, "float32");
      }
      case 27:
        return finish_float(start, bits_double(cur_.read_be(8)), "float64");
      default:
        throw Error(Errc::BadTag,
                    "major-7 sub-type " + std::to_string(additional) +
                        " is not JSON-compatible",
                    start);
    }
  }

  JsonValue finish_float(std::size_t start, double d, std::string label) {
    if (std::isnan(d) || std::isinf(d))
      throw Error(Errc::Unsupported, "NaN/infinity have no JSON value", start);
    span(start, std::move(label), dump_json(JsonValue(d)));
    return JsonValue(d);
  }

  ByteCursor cur_;
  SpanSink* sink_;
  Warnings* warnings_;
};

}  // namespace

std::vector<std::uint8_t> cbor_header_encode(int major,
                                             std::uint64_t argument) {
  if (major < 0 || major > 7)
    throw Error(Errc::RangeError, "major type must be 0..7");
  ByteWriter out;
  header(out, major, argument);
  return std::move(out.bytes());
}

std::vector<std::uint8_t> cbor_encode(const JsonValue& doc) {
  ByteWriter out;
  encode_value(doc, out);
  return std::move(out.bytes());
}

JsonValue cbor_decode(const std::uint8_t* data, std::size_t size,
                      SpanSink* sink, Warnings* warnings) {
  Decoder dec(data, size, sink, warnings);
  JsonValue v = dec.value();
  if (!dec.cursor().at_end())
    throw Error(Errc::TrailingBytes,
                std::to_string(dec.cursor().remaining()) +
                    " byte(s) past the document",
                dec.cursor().position());
  return v;
}

}  // namespace binjson

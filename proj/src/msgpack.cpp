#include <cmath>
#include <limits>

#include "binjson/cursor.hpp"
#include "binjson/error.hpp"
#include "binjson/formats.hpp"

namespace binjson {

namespace {

void encode_value(const JsonValue& v, ByteWriter& out) {
  switch (v.kind()) {
    case JsonValue::Kind::Null:
      out.u8(0xC0);
      break;
    case JsonValue::Kind::Bool:
      out.u8(v.as_bool() ? 0xC3 : 0xC2);
      break;
    case JsonValue::Kind::Int: {
      std::int64_t n = v.as_int();
      if (n >= 0) {
        auto u = static_cast<std::uint64_t>(n);
        if (u <= 0x7F) {
          out.u8(static_cast<std::uint8_t>(u));
        } else if (u <= 0xFF) {
          out.u8(0xCC);
          out.u8(static_cast<std::uint8_t>(u));
        } else if (u <= 0xFFFF) {
          out.u8(0xCD);
          out.be(u, 2);
        } else if (u <= 0xFFFFFFFFu) {
          out.u8(0xCE);
          out.be(u, 4);
        } else {
          out.u8(0xCF);
          out.be(u, 8);
        }
      } else if (n >= -32) {
        out.u8(static_cast<std::uint8_t>(0xE0 | (n & 0x1F)));
      } else if (n >= std::numeric_limits<std::int8_t>::min()) {
        out.u8(0xD0);
        out.u8(static_cast<std::uint8_t>(n));
      } else if (n >= std::numeric_limits<std::int16_t>::min()) {
        out.u8(0xD1);
        out.be(static_cast<std::uint16_t>(n), 2);
      } else if (n >= std::numeric_limits<std::int32_t>::min()) {
        out.u8(0xD2);
        out.be(static_cast<std::uint32_t>(n), 4);
      } else {
        out.u8(0xD3);
        out.be(static_cast<std::uint64_t>(n), 8);
      }
      break;
    }
    case JsonValue::Kind::Float:
      out.u8(0xCB);
      out.be(double_bits(v.as_float()), 8);
      break;
    case JsonValue::Kind::Str: {
      const std::string& s = v.as_str();
      std::size_t n = s.size();
      if (n < 32) {
        out.u8(static_cast<std::uint8_t>(0xA0 + n));
      } else if (n <= 0xFF) {
        out.u8(0xD9);
        out.u8(static_cast<std::uint8_t>(n));
      } else if (n <= 0xFFFF) {
        out.u8(0xDA);
        out.be(n, 2);
      } else {
        out.u8(0xDB);
        out.be(n, 4);
      }
      out.raw(s);
      break;
    }
    case JsonValue::Kind::Arr: {
      const auto& items = v.as_arr();
      std::size_t n = items.size();
      if (n < 16) {
        out.u8(static_cast<std::uint8_t>(0x90 + n));
      } else if (n <= 0xFFFF) {
        out.u8(0xDC);
        out.be(n, 2);
      } else {
        out.u8(0xDD);
        out.be(n, 4);
      }
      for (const auto& item : items) encode_value(item, out);
      break;
    }
    case JsonValue::Kind::Obj: {
      const auto& entries = v.as_obj();
      std::size_t n = entries.size();
      if (n < 16) {
        out.u8(static_cast<std::uint8_t>(0x80 + n));
      } else if (n <= 0xFFFF) {
        out.u8(0xDE);
        out.be(n, 2);
      } else {
        out.u8(0xDF);
        out.be(n, 4);
      }
      for (const auto& [key, item] : entries) {
        encode_value(JsonValue(key), out);
        encode_value(item, out);
      }
      break;
    }
  }
}

class Decoder {
 public:
  Decoder(const std::uint8_t* data, std::size_t size, SpanSink* sink)
      : cur_(data, size), sink_(sink) {}

  ByteCursor& cursor() { return cur_; }

  JsonValue value() {
    std::size_t start = cur_.position();
    std::uint8_t tag = cur_.read_u8();
    if (tag <= 0x7F) return leaf_int(start, tag, "positive fixint");
    if (tag >= 0xE0)
      return leaf_int(start, static_cast<std::int8_t>(tag), "negative fixint");
    if (tag >= 0xA0 && tag <= 0xBF) return str(start, tag - 0xA0, "fixstr");
    if (tag >= 0x90 && tag <= 0x9F) return arr(start, tag - 0x90, "fixarray");
    if (tag >= 0x80 && tag <= 0x8F) return obj(start, tag - 0x80, "fixmap");
    switch (tag) {
      case 0xC0:
        span(start, "nil", "null");
        return JsonValue(nullptr);
      case 0xC2:
        span(start, "bool", "false");
        return JsonValue(false);
      case 0xC3:
        span(start, "bool", "true");
        return JsonValue(true);
      case 0xCC: return leaf_int(start, cur_.read_be(1), "uint8");
      case 0xCD: return leaf_int(start, cur_.read_be(2), "uint16");
      case 0xCE: return leaf_int(start, cur_.read_be(4), "uint32");
      case 0xCF: {
        std::uint64_t u = cur_.read_be(8);
        if (u > static_cast<std::uint64_t>(
                    std::numeric_limits<std::int64_t>::max()))
          throw Error(Errc::Overflow,
                      "uint64 " + std::to_string(u) +
                          " exceeds signed 64 bits",
                      start);
        return leaf_int(start, static_cast<std::int64_t>(u), "uint64");
      }
      case 0xD0:
        return leaf_int(start, static_cast<std::int8_t>(cur_.read_be(1)),
                        "int8");
      case 0xD1:
        return leaf_int(start, static_cast<std::int16_t>(cur_.read_be(2)),
                        "int16");
      case 0xD2:
        return leaf_int(start, static_cast<std::int32_t>(cur_.read_be(4)),
                        "int32");
      case 0xD3:
        return leaf_int(start, static_cast<std::int64_t>(cur_.read_be(8)),
                        "int64");
      case 0xCA: {
        double d = bits_float(static_cast<std::uint32_t>(cur_.read_be(4)));
        return leaf_float(start, d, "float32");
      }
      case 0xCB:
        return leaf_float(start, bits_double(cur_.read_be(8)), "float64");
      case 0xD9: return str(start, cur_.read_be(1), "str8");
      case 0xDA: return str(start, cur_.read_be(2), "str16");
      case 0xDB: return str(start, cur_.read_be(4), "str32");
      case 0xDC: return arr(start, cur_.read_be(2), "array16");
      case 0xDD: return arr(start, cur_.read_be(4), "array32");
      case 0xDE: return obj(start, cur_.read_be(2), "map16");
      case 0xDF: return obj(start, cur_.read_be(4), "map32");
      case 0xC4:
      case 0xC5:
      case 0xC6:
        throw Error(Errc::Unsupported, "bin type is not JSON-compatible",
                    start);
      case 0xC7:
      case 0xC8:
      case 0xC9:
      case 0xD4:
      case 0xD5:
      case 0xD6:
      case 0xD7:
      case 0xD8:
        throw Error(Errc::Unsupported,
                    "ext/timestamp types are not JSON-compatible", start);
      default:
        throw Error(Errc::BadTag, "unassigned tag 0xc1", start);
    }
  }

 private:
  void span(std::size_t start, std::string label, std::string decoded) {
    if (sink_)
      sink_->add(start, cur_.position() - start, std::move(label),
                 std::move(decoded));
  }

  JsonValue leaf_int(std::size_t start, std::int64_t n, std::string label) {
    span(start, std::move(label), std::to_string(n));
    return JsonValue(n);
  }

  JsonValue leaf_float(std::size_t start, double d, std::string label) {
    span(start, std::move(label), dump_json(JsonValue(d)));
    return JsonValue(d);
  }

  JsonValue str(std::size_t start, std::uint64_t len, std::string label) {
    span(start, label + " header", "length " + std::to_string(len));
    std::size_t payload = cur_.position();
    std::string s = cur_.read_string(len);
    if (!utf8_valid(s))
      throw Error(Errc::InvalidUtf8, "string payload is not UTF-8", payload);
    if (sink_ && len > 0) sink_->add(payload, len, "string payload", s);
    return JsonValue(std::move(s));
  }

  JsonValue arr(std::size_t start, std::uint64_t count, std::string label) {
    span(start, label + " header", std::to_string(count) + " element(s)");
    JsonValue::Array items;
    items.reserve(count < 4096 ? count : 4096);
    for (std::uint64_t i = 0; i < count; ++i) items.push_back(value());
    return JsonValue(std::move(items));
  }

  JsonValue obj(std::size_t start, std::uint64_t count, std::string label) {
    span(start, label + " header", std::to_string(count) + " entr(ies)");
    JsonValue::Object entries;
    for (std::uint64_t i = 0; i < count; ++i) {
      JsonValue key = value();
      if (!key.is_str())
        throw Error(Errc::BadTag, "map key is not a string", cur_.position());
      entries.emplace_back(key.as_str(), value());
    }
    return JsonValue(std::move(entries));
  }

  ByteCursor cur_;
  SpanSink* sink_;
};

}  // namespace

std::vector<std::uint8_t> mp_encode(const JsonValue& doc) {
  ByteWriter out;
  encode_value(doc, out);
  return std::move(out.bytes());
}

JsonValue mp_decode(const std::uint8_t* data, std::size_t size,
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

#include <cmath>
#include <limits>

#include "binjson/cursor.hpp"
#include "binjson/error.hpp"
#include "binjson/formats.hpp"

namespace binjson {

namespace {

void encode_document(const JsonValue::Object& entries, ByteWriter& out);

void encode_element(const std::string& key, const JsonValue& v,
                    ByteWriter& out) {
  auto name = [&](std::uint8_t tag) {
    out.u8(tag);
    if (key.find('\0') != std::string::npos)
      throw Error(Errc::KeyContainsNul, "key \"" + key + "\" embeds 0x00");
    out.raw(key);
    out.u8(0x00);
  };
  switch (v.kind()) {
    case JsonValue::Kind::Null:
      name(0x0A);
      break;
    case JsonValue::Kind::Bool:
      name(0x08);
      out.u8(v.as_bool() ? 0x01 : 0x00);
      break;
    case JsonValue::Kind::Int: {
      std::int64_t n = v.as_int();
      if (n >= std::numeric_limits<std::int32_t>::min() &&
          n <= std::numeric_limits<std::int32_t>::max()) {
        name(0x10);
        out.le(static_cast<std::uint32_t>(n), 4);
      } else {
        name(0x12);
        out.le(static_cast<std::uint64_t>(n), 8);
      }
      break;
    }
    case JsonValue::Kind::Float:
      name(0x01);
      out.le(double_bits(v.as_float()), 8);
      break;
    case JsonValue::Kind::Str:
      name(0x02);
      // The int32 prefix counts the trailing NUL.
      out.le(v.as_str().size() + 1, 4);
      out.raw(v.as_str());
      out.u8(0x00);
      break;
    case JsonValue::Kind::Arr: {
      name(0x04);
      JsonValue::Object indexed;
      indexed.reserve(v.as_arr().size());
      std::size_t i = 0;
      for (const auto& item : v.as_arr())
        indexed.emplace_back(std::to_string(i++), item);
      encode_document(indexed, out);
      break;
    }
    case JsonValue::Kind::Obj:
      name(0x03);
      encode_document(v.as_obj(), out);
      break;
  }
}

void encode_document(const JsonValue::Object& entries, ByteWriter& out) {
  std::size_t length_at = out.size();
  out.le(0, 4);  // patched below
  for (const auto& [key, item] : entries) encode_element(key, item, out);
  out.u8(0x00);
  out.patch_le(length_at, out.size() - length_at, 4);
}

class Decoder {
 public:
  Decoder(const std::uint8_t* data, std::size_t size, SpanSink* sink)
      : cur_(data, size), sink_(sink) {}

  ByteCursor& cursor() { return cur_; }

  JsonValue document(bool as_array) {
    std::size_t start = cur_.position();
    auto declared = static_cast<std::int32_t>(cur_.read_le(4));
    if (declared < 5)
      throw Error(Errc::LengthMismatch,
                  "document length " + std::to_string(declared) +
                      " below the 5-byte minimum",
                  start);
    span(start, "length prefix", std::to_string(declared) + " bytes");
    std::size_t end = start + static_cast<std::size_t>(declared);
    if (end > cur_.size())
      throw Error(Errc::Truncated,
                  "document length exceeds the buffer", start);
    JsonValue::Object entries;
    std::size_t index = 0;
    while (true) {
      std::size_t tag_at = cur_.position();
      if (tag_at >= end)
        throw Error(Errc::LengthMismatch,
                    "document ran past its declared length", tag_at);
      std::uint8_t tag = cur_.read_u8();
      if (tag == 0x00) {
        span(tag_at, "document terminator", "");
        if (cur_.position() != end)
          throw Error(Errc::LengthMismatch,
                      "declared length " + std::to_string(declared) +
                          " does not match actual " +
                          std::to_string(cur_.position() - start),
                      tag_at);
        break;
      }
      std::string key = element_name(tag_at);
      if (as_array && key != std::to_string(index))
        throw Error(Errc::LengthMismatch,
                    "array key \"" + key + "\" is not the expected \"" +
                        std::to_string(index) + "\"",
                    tag_at);
      ++index;
      entries.emplace_back(std::move(key), element_value(tag, tag_at));
    }
    if (as_array) {
      JsonValue::Array items;
      items.reserve(entries.size());
      for (auto& [k, item] : entries) items.push_back(std::move(item));
      return JsonValue(std::move(items));
    }
    return JsonValue(std::move(entries));
  }

 private:
  void span(std::size_t start, std::string label, std::string decoded) {
    if (sink_)
      sink_->add(start, cur_.position() - start, std::move(label),
                 std::move(decoded));
  }

  std::string element_name(std::size_t tag_at) {
    // tag byte + NUL-terminated element name
    std::size_t name_at = cur_.position();
    std::string key;
    for (;;) {
      std::uint8_t b = cur_.read_u8();
      if (b == 0x00) break;
      key += static_cast<char>(b);
    }
    if (!utf8_valid(key))
      throw Error(Errc::InvalidUtf8, "element name is not UTF-8", name_at);
    span(tag_at, "type tag + name", key);
    return key;
  }

  JsonValue element_value(std::uint8_t tag, std::size_t tag_at) {
    std::size_t at = cur_.position();
    switch (tag) {
      case 0x01: {
        double d = bits_double(cur_.read_le(8));
        if (std::isinf(d) || std::isnan(d))
          throw Error(Errc::Unsupported, "NaN/infinity have no JSON value",
                      at);
        span(at, "double", dump_json(JsonValue(d)));
        return JsonValue(d);
      }
      case 0x02: {
        auto len = static_cast<std::int32_t>(cur_.read_le(4));
        if (len < 1)
          throw Error(Errc::LengthMismatch, "string length below 1", at);
        span(at, "string length", std::to_string(len));
        std::size_t payload = cur_.position();
        std::string s = cur_.read_string(static_cast<std::size_t>(len) - 1);
        if (cur_.read_u8() != 0x00)
          throw Error(Errc::LengthMismatch, "string missing NUL terminator",
                      cur_.position() - 1);
        if (!utf8_valid(s))
          throw Error(Errc::InvalidUtf8, "string payload is not UTF-8",
                      payload);
        span(payload, "string payload + NUL", s);
        return JsonValue(std::move(s));
      }
      case 0x03: return document(false);
      case 0x04: return document(true);
      case 0x08: {
        std::uint8_t b = cur_.read_u8();
        if (b > 1)
          throw Error(Errc::BadTag,
                      "boolean payload must be 0x00 or 0x01", at);
        span(at, "bool", b ? "true" : "false");
        return JsonValue(b == 1);
      }
      case 0x0A:
        span(at, "null", "null");
        return JsonValue(nullptr);
      case 0x10: {
        auto n = static_cast<std::int32_t>(cur_.read_le(4));
        span(at, "int32", std::to_string(n));
        return JsonValue(static_cast<std::int64_t>(n));
      }
      case 0x12: {
        auto n = static_cast<std::int64_t>(cur_.read_le(8));
        span(at, "int64", std::to_string(n));
        return JsonValue(n);
      }
      case 0x05:
      case 0x06:
      case 0x07:
      case 0x09:
      case 0x0B:
      case 0x0C:
      case 0x0D:
      case 0x0E:
      case 0x0F:
      case 0x11:
      case 0x13:
      case 0x7F:
      case 0xFF:
        throw Error(Errc::Unsupported,
                    "BSON extension type 0x" + hex(tag) +
                        " is not JSON-compatible",
                    tag_at);
      default:
        throw Error(Errc::BadTag, "unknown element tag 0x" + hex(tag),
                    tag_at);
    }
  }

  static std::string hex(std::uint8_t b) {
    static const char digits[] = "0123456789abcdef";
    return {digits[b >> 4], digits[b & 0xF]};
  }

  ByteCursor cur_;
  SpanSink* sink_;
};

}  // namespace

std::vector<std::uint8_t> bson_encode(const JsonValue& doc) {
  if (!doc.is_obj())
    throw Error(Errc::TopLevelShape, "BSON requires an object root");
  ByteWriter out;
  encode_document(doc.as_obj(), out);
  return std::move(out.bytes());
}

JsonValue bson_decode(const std::uint8_t* data, std::size_t size,
                      SpanSink* sink) {
  Decoder dec(data, size, sink);
  JsonValue v = dec.document(false);
  if (!dec.cursor().at_end())
    throw Error(Errc::TrailingBytes,
                std::to_string(dec.cursor().remaining()) +
                    " byte(s) past the document",
                dec.cursor().position());
  return v;
}

}  // namespace binjson

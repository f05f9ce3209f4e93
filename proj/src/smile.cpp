#include <cmath>
#include <limits>
#include <unordered_map>

#include "binjson/cursor.hpp"
#include "binjson/error.hpp"
#include "binjson/formats.hpp"
#include "binjson/intcodec.hpp"

namespace binjson {

namespace {

constexpr std::size_t kSharedWindow = 1024;  // table cap; then stop adding
constexpr std::size_t kSharedMaxBytes = 64;  // only short strings are shared

// Smile varint: 7-bit groups, most-significant group first; the final byte
// carries the low 6 bits and is marked by a SET most-significant bit (the
// inverse of LEB128's continuation convention), so no byte is ever 0xff.
void write_vint(std::uint64_t u, ByteWriter& out) {
  std::uint8_t last = 0x80 | static_cast<std::uint8_t>(u & 0x3F);
  u >>= 6;
  std::uint8_t groups[10];
  int n = 0;
  while (u) {
    groups[n++] = static_cast<std::uint8_t>(u & 0x7F);
    u >>= 7;
  }
  while (n) out.u8(groups[--n]);
  out.u8(last);
}

std::uint64_t read_vint(ByteCursor& cur) {
  std::uint64_t v = 0;
  for (int i = 0;; ++i) {
    if (i == 10)
      throw Error(Errc::Overflow, "varint longer than 10 bytes",
                  cur.position());
    std::uint8_t b = cur.read_u8();
    if (b & 0x80) return (v << 6) | (b & 0x3F);
    v = (v << 7) | b;
  }
}

// 7-bit-group float transform: the big-endian IEEE bit pattern is emitted
// least-significant 7 bits first.
void write_float7(std::uint64_t bits, int byte_width, ByteWriter& out) {
  int groups = (byte_width * 8 + 6) / 7;  // 5 for binary32, 10 for binary64
  for (int i = 0; i < groups; ++i)
    out.u8(static_cast<std::uint8_t>((bits >> (7 * i)) & 0x7F));
}

std::uint64_t read_float7(ByteCursor& cur, int byte_width) {
  int groups = (byte_width * 8 + 6) / 7;
  std::uint64_t bits = 0;
  for (int i = 0; i < groups; ++i) {
    std::uint8_t b = cur.read_u8();
    if (b & 0x80)
      throw Error(Errc::BadTag, "7-bit float group has its high bit set",
                  cur.position() - 1);
    bits |= static_cast<std::uint64_t>(b) << (7 * i);
  }
  return bits;
}

// Back-reference table kept identical on both sides of the wire: every
// eligible literal is appended in stream order, lookups resolve to the most
// recent index, and additions stop once the window is full.
class SharedTable {
 public:
  // Returns the most recent index of `s`, or npos when absent.
  std::size_t find(const std::string& s) const {
    auto it = index_.find(s);
    return it == index_.end() ? npos : it->second;
  }

  void add(const std::string& s) {
    if (s.empty() || s.size() > kSharedMaxBytes) return;
    if (entries_.size() >= kSharedWindow) return;
    index_[s] = entries_.size();
    entries_.push_back(s);
  }

  const std::string& at(std::size_t idx) const { return entries_[idx]; }
  std::size_t size() const { return entries_.size(); }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

class Encoder {
 public:
  explicit Encoder(const SmileOptions& options) : opt_(options) {}

  std::vector<std::uint8_t> run(const JsonValue& doc) {
    out_.raw(":)\n");
    std::uint8_t flags = 0;
    if (opt_.shared_names) flags |= 0x01;
    if (opt_.shared_values) flags |= 0x02;
    out_.u8(flags);  // high nibble: version 0; raw binary never emitted
    value(doc);
    return std::move(out_.bytes());
  }

 private:
  void value(const JsonValue& v) {
    switch (v.kind()) {
      case JsonValue::Kind::Null:
        out_.u8(0x21);
        break;
      case JsonValue::Kind::Bool:
        out_.u8(v.as_bool() ? 0x23 : 0x22);
        break;
      case JsonValue::Kind::Int: {
        std::int64_t n = v.as_int();
        if (n >= -16 && n <= 15) {
          out_.u8(static_cast<std::uint8_t>(0xC0 + zigzag_encode(n, 64)));
        } else if (n >= std::numeric_limits<std::int32_t>::min() &&
                   n <= std::numeric_limits<std::int32_t>::max()) {
          out_.u8(0x24);
          write_vint(zigzag_encode(n, 32), out_);
        } else {
          out_.u8(0x25);
          write_vint(zigzag_encode(n, 64), out_);
        }
        break;
      }
      case JsonValue::Kind::Float:
        if (opt_.use_float32) {
          out_.u8(0x28);
          write_float7(float_bits(static_cast<float>(v.as_float())), 4, out_);
        } else {
          out_.u8(0x29);
          write_float7(double_bits(v.as_float()), 8, out_);
        }
        break;
      case JsonValue::Kind::Str:
        string_value(v.as_str());
        break;
      case JsonValue::Kind::Arr:
        out_.u8(0xF8);
        for (const auto& item : v.as_arr()) value(item);
        out_.u8(0xF9);
        break;
      case JsonValue::Kind::Obj:
        out_.u8(0xFA);
        for (const auto& [key, item] : v.as_obj()) {
          name(key);
          value(item);
        }
        out_.u8(0xFB);
        break;
    }
  }

  // A back-reference whose low index byte would be 0xff is not taken (the
  // literal is re-emitted) to uphold the no-0xff output guarantee.
  static bool ref_emittable(std::size_t idx, std::size_t short_limit) {
    if (idx < short_limit) return true;
    return idx < kSharedWindow && (idx & 0xFF) != 0xFF;
  }

  void string_value(const std::string& s) {
    if (s.empty()) {
      out_.u8(0x20);
      return;
    }
    if (opt_.shared_values && s.size() <= kSharedMaxBytes) {
      std::size_t idx = values_.find(s);
      if (idx != SharedTable::npos && ref_emittable(idx, 31)) {
        if (idx < 31) {
          out_.u8(static_cast<std::uint8_t>(0x01 + idx));
        } else {
          out_.u8(0xEC);
          out_.be(idx, 2);
        }
        return;
      }
    }
    std::size_t n = s.size();
    if (ascii_only(s)) {
      if (n <= 32) {
        out_.u8(static_cast<std::uint8_t>(0x40 + n - 1));
        out_.raw(s);
      } else if (n <= 64) {
        out_.u8(static_cast<std::uint8_t>(0x60 + n - 33));
        out_.raw(s);
      } else {
        out_.u8(0xE0);
        out_.raw(s);
        out_.u8(0xFC);
      }
    } else {
      if (n <= 33) {
        out_.u8(static_cast<std::uint8_t>(0x80 + n - 2));
        out_.raw(s);
      } else if (n <= 65) {
        out_.u8(static_cast<std::uint8_t>(0xA0 + n - 34));
        out_.raw(s);
      } else {
        out_.u8(0xE4);
        out_.raw(s);
        out_.u8(0xFC);
      }
    }
    if (opt_.shared_values) values_.add(s);
  }

  void name(const std::string& key) {
    if (key.empty()) {
      out_.u8(0x20);
      return;
    }
    if (opt_.shared_names && key.size() <= kSharedMaxBytes) {
      std::size_t idx = names_.find(key);
      if (idx != SharedTable::npos && ref_emittable(idx, 64)) {
        if (idx < 64) {
          out_.u8(static_cast<std::uint8_t>(0x40 + idx));
        } else {
          out_.u8(static_cast<std::uint8_t>(0x30 | (idx >> 8)));
          out_.u8(static_cast<std::uint8_t>(idx & 0xFF));
        }
        return;
      }
    }
    std::size_t n = key.size();
    if (ascii_only(key) && n <= 64) {
      out_.u8(static_cast<std::uint8_t>(0x80 + n - 1));
      out_.raw(key);
    } else if (!ascii_only(key) && n >= 2 && n <= 57) {
      out_.u8(static_cast<std::uint8_t>(0xC0 + n - 2));
      out_.raw(key);
    } else {
      out_.u8(0x34);
      out_.raw(key);
      out_.u8(0xFC);
    }
    if (opt_.shared_names) names_.add(key);
  }

  SmileOptions opt_;
  ByteWriter out_;
  SharedTable names_;
  SharedTable values_;
};

class Decoder {
 public:
  Decoder(const std::uint8_t* data, std::size_t size, SpanSink* sink)
      : cur_(data, size), sink_(sink) {}

  ByteCursor& cursor() { return cur_; }

  JsonValue run() {
    if (cur_.size() < 4 || cur_.cur()[0] != 0x3A || cur_.cur()[1] != 0x29 ||
        cur_.cur()[2] != 0x0A)
      throw Error(Errc::BadTag, "missing Smile header 3a 29 0a", 0);
    cur_.skip(3);
    std::uint8_t flags = cur_.read_u8();
    shared_names_ = flags & 0x01;
    shared_values_ = flags & 0x02;
    if (sink_)
      sink_->add(0, 4, "header",
                 std::string("version ") + std::to_string(flags >> 4) +
                     (shared_names_ ? ", shared names" : "") +
                     (shared_values_ ? ", shared values" : "") +
                     ((flags & 0x04) ? ", raw binary" : ""));
    JsonValue v = value();
    if (!cur_.at_end() && cur_.peek_u8() == 0xFF) {
      std::size_t at = cur_.position();
      cur_.read_u8();
      span(at, "end marker", "");
    }
    return v;
  }

 private:
  void span(std::size_t start, std::string label, std::string decoded) {
    if (sink_)
      sink_->add(start, cur_.position() - start, std::move(label),
                 std::move(decoded));
  }

  std::string literal_string(std::size_t token_at, std::size_t len,
                             const char* cls, bool ascii) {
    std::size_t at = cur_.position();
    std::string s = cur_.read_string(len);
    if (ascii) {
      if (!ascii_only(s))
        throw Error(Errc::InvalidUtf8, "non-ASCII byte in an ASCII class",
                    at);
    } else if (!utf8_valid(s)) {
      throw Error(Errc::InvalidUtf8, "string payload is not UTF-8", at);
    }
    span(token_at, cls, s);
    return s;
  }

  std::string long_string(std::size_t token_at, const char* cls, bool ascii) {
    std::string s;
    for (;;) {
      std::uint8_t b = cur_.read_u8();
      if (b == 0xFC) break;
      s += static_cast<char>(b);
    }
    if (ascii ? !ascii_only(s) : !utf8_valid(s))
      throw Error(Errc::InvalidUtf8, "string payload is not UTF-8", token_at);
    span(token_at, cls, s);
    return s;
  }

  JsonValue value() {
    std::size_t at = cur_.position();
    std::uint8_t t = cur_.read_u8();
    if (t >= 0x01 && t <= 0x1F) {
      std::size_t idx = t - 1;
      if (!shared_values_ || idx >= values_.size())
        throw Error(Errc::BadTag, "shared value reference out of range", at);
      std::string s = values_.at(idx);
      span(at, "shared value ref", s);
      return JsonValue(std::move(s));
    }
    if (t == 0x20) {
      span(at, "empty string", "");
      return JsonValue(std::string());
    }
    if (t == 0x21) {
      span(at, "null", "null");
      return JsonValue(nullptr);
    }
    if (t == 0x22 || t == 0x23) {
      span(at, "bool", t == 0x23 ? "true" : "false");
      return JsonValue(t == 0x23);
    }
    if (t == 0x24 || t == 0x25) {
      std::uint64_t u = read_vint(cur_);
      std::int64_t n = zigzag_decode(u, t == 0x24 ? 32 : 64);
      span(at, t == 0x24 ? "int32 varint" : "int64 varint",
           std::to_string(n));
      return JsonValue(n);
    }
    if (t == 0x26) return big_integer(at);
    if (t == 0x28 || t == 0x29) {
      double d;
      if (t == 0x28) {
        d = bits_float(static_cast<std::uint32_t>(read_float7(cur_, 4)));
      } else {
        d = bits_double(read_float7(cur_, 8));
      }
      if (std::isinf(d) || std::isnan(d))
        throw Error(Errc::Unsupported, "NaN/infinity have no JSON value", at);
      span(at, t == 0x28 ? "float32" : "float64", dump_json(JsonValue(d)));
      return JsonValue(d);
    }
    if (t == 0x2A) return big_decimal(at);
    if (t >= 0x40 && t <= 0x7F) {
      bool tiny = t <= 0x5F;
      std::size_t len = tiny ? (t - 0x40 + 1) : (t - 0x60 + 33);
      std::string s = literal_string(at, len,
                                     tiny ? "tiny ASCII" : "small ASCII",
                                     true);
      add_shared_value(s);
      return JsonValue(std::move(s));
    }
    if (t >= 0x80 && t <= 0xBF) {
      bool tiny = t <= 0x9F;
      std::size_t len = tiny ? (t - 0x80 + 2) : (t - 0xA0 + 34);
      std::string s = literal_string(at, len,
                                     tiny ? "tiny Unicode" : "small Unicode",
                                     false);
      add_shared_value(s);
      return JsonValue(std::move(s));
    }
    if (t >= 0xC0 && t <= 0xDF) {
      std::int64_t n = zigzag_decode(t - 0xC0, 64);
      span(at, "small int", std::to_string(n));
      return JsonValue(n);
    }
    if (t == 0xE0 || t == 0xE4) {
      std::string s = long_string(at, t == 0xE0 ? "long ASCII" : "long Unicode",
                                  t == 0xE0);
      // Long-class strings exceed 64 bytes, so they are never shared.
      return JsonValue(std::move(s));
    }
    if (t == 0xEC) {
      std::size_t idx = static_cast<std::size_t>(cur_.read_be(2));
      if (!shared_values_ || idx >= values_.size())
        throw Error(Errc::BadTag, "shared value reference out of range", at);
      std::string s = values_.at(idx);
      span(at, "shared value ref", s);
      return JsonValue(std::move(s));
    }
    if (t == 0xE8 || t == 0xFD)
      throw Error(Errc::Unsupported, "raw binary values are out of scope", at);
    if (t == 0xF8) {
      span(at, "array open", "");
      JsonValue::Array items;
      while (cur_.peek_u8() != 0xF9) items.push_back(value());
      std::size_t close = cur_.position();
      cur_.read_u8();
      span(close, "array close", "");
      return JsonValue(std::move(items));
    }
    if (t == 0xFA) {
      span(at, "object open", "");
      JsonValue::Object entries;
      for (;;) {
        std::size_t kat = cur_.position();
        if (cur_.peek_u8() == 0xFB) {
          cur_.read_u8();
          span(kat, "object close", "");
          return JsonValue(std::move(entries));
        }
        std::string key = name();
        entries.emplace_back(std::move(key), value());
      }
    }
    throw Error(Errc::BadTag, "unassigned value token", at);
  }

  std::string name() {
    std::size_t at = cur_.position();
    std::uint8_t t = cur_.read_u8();
    if (t == 0x20) {
      span(at, "empty key", "");
      return std::string();
    }
    if (t >= 0x30 && t <= 0x33) {
      std::size_t idx = (static_cast<std::size_t>(t & 0x03) << 8) |
                        cur_.read_u8();
      return shared_name(at, idx);
    }
    if (t == 0x34) {
      std::string s = long_string(at, "long key", false);
      add_shared_name(s);
      return s;
    }
    if (t >= 0x40 && t <= 0x7F) return shared_name(at, t - 0x40);
    if (t >= 0x80 && t <= 0xBF) {
      std::string s = literal_string(at, t - 0x80 + 1, "ASCII key", true);
      add_shared_name(s);
      return s;
    }
    if (t >= 0xC0 && t <= 0xF7) {
      std::string s = literal_string(at, t - 0xC0 + 2, "Unicode key", false);
      add_shared_name(s);
      return s;
    }
    throw Error(Errc::BadTag, "unassigned key token", at);
  }

  std::string shared_name(std::size_t at, std::size_t idx) {
    if (!shared_names_ || idx >= names_.size())
      throw Error(Errc::BadTag, "shared name reference out of range", at);
    std::string s = names_.at(idx);
    span(at, "shared name ref", s);
    return s;
  }

  void add_shared_value(const std::string& s) {
    if (shared_values_) values_.add(s);
  }
  void add_shared_name(const std::string& s) {
    if (shared_names_) names_.add(s);
  }

  // BigInteger: varint byte count, then that many value bytes packed through
  // the 7-bit transform (big-endian magnitude, two's complement).
  JsonValue big_integer(std::size_t at) {
    std::uint64_t raw_len = read_vint(cur_);
    std::int64_t n = read_packed_int(at, raw_len);
    span(at, "big integer", std::to_string(n));
    return JsonValue(n);
  }

  JsonValue big_decimal(std::size_t at) {
    std::uint64_t scale_u = read_vint(cur_);
    std::int64_t scale = zigzag_decode(scale_u, 32);
    std::uint64_t raw_len = read_vint(cur_);
    std::int64_t n = read_packed_int(at, raw_len);
    if (scale != 0)
      throw Error(Errc::Overflow,
                  "scaled decimal is not representable as signed 64", at);
    span(at, "big decimal", std::to_string(n));
    return JsonValue(n);
  }

  // `raw_len` counts the unpacked big-endian two's-complement bytes; they
  // arrive as ceil(8n/7) groups of 7 bits, most significant group first,
  // with the padding in the first group's high bits.
  std::int64_t read_packed_int(std::size_t at, std::uint64_t raw_len) {
    if (raw_len > 8)
      throw Error(Errc::Overflow,
                  "big number exceeds the signed-64 value model", at);
    if (raw_len == 0) return 0;
    int groups = static_cast<int>((raw_len * 8 + 6) / 7);
    std::uint64_t bits = 0;
    for (int i = 0; i < groups; ++i) {
      std::uint8_t b = cur_.read_u8();
      if (b & 0x80)
        throw Error(Errc::BadTag, "7-bit group has its high bit set",
                    cur_.position() - 1);
      bits = (bits << 7) | b;
    }
    int width = static_cast<int>(raw_len * 8);
    if (width < 64) {
      bits &= (std::uint64_t(1) << width) - 1;
      if ((bits >> (width - 1)) & 1)  // sign-extend
        bits |= ~std::uint64_t(0) << width;
    }
    return static_cast<std::int64_t>(bits);
  }

  ByteCursor cur_;
  SpanSink* sink_;
  bool shared_names_ = false;
  bool shared_values_ = false;
  SharedTable names_;
  SharedTable values_;
};

}  // namespace

std::vector<std::uint8_t> smile_float7_encode(std::uint64_t bits,
                                              int byte_width) {
  if (byte_width != 4 && byte_width != 8)
    throw Error(Errc::RangeError, "byte width must be 4 or 8");
  ByteWriter out;
  write_float7(bits, byte_width, out);
  return std::move(out.bytes());
}

std::vector<std::uint8_t> smile_encode(const JsonValue& doc,
                                       const SmileOptions& options) {
  return Encoder(options).run(doc);
}

JsonValue smile_decode(const std::uint8_t* data, std::size_t size,
                       SpanSink* sink) {
  Decoder dec(data, size, sink);
  JsonValue v = dec.run();
  if (!dec.cursor().at_end())
    throw Error(Errc::TrailingBytes,
                std::to_string(dec.cursor().remaining()) +
                    " byte(s) past the document",
                dec.cursor().position());
  return v;
}

}  // namespace binjson

#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "binjson/error.hpp"

namespace binjson {

// Sequential reader over a byte buffer. Every accessor checks bounds and
// throws Error{Truncated, offset} when the buffer is exhausted.
class ByteCursor {
 public:
  ByteCursor(const std::uint8_t* data, std::size_t size)
      : data_(data), size_(size) {}
  explicit ByteCursor(const std::vector<std::uint8_t>& buf)
      : data_(buf.data()), size_(buf.size()) {}

  std::size_t position() const { return pos_; }
  std::size_t size() const { return size_; }
  std::size_t remaining() const { return size_ - pos_; }
  bool at_end() const { return pos_ == size_; }
  const std::uint8_t* cur() const { return data_ + pos_; }

  void require(std::size_t n) const {
    if (n > remaining())
      throw Error(Errc::Truncated,
                  "need " + std::to_string(n) + " byte(s), have " +
                      std::to_string(remaining()),
                  pos_);
  }

  std::uint8_t peek_u8() const {
    require(1);
    return data_[pos_];
  }

  std::uint8_t read_u8() {
    require(1);
    return data_[pos_++];
  }

  void skip(std::size_t n) {
    require(n);
    pos_ += n;
  }

  const std::uint8_t* read_bytes(std::size_t n) {
    require(n);
    const std::uint8_t* p = data_ + pos_;
    pos_ += n;
    return p;
  }

  std::string read_string(std::size_t n) {
    const std::uint8_t* p = read_bytes(n);
    return std::string(reinterpret_cast<const char*>(p), n);
  }

  std::uint64_t read_be(std::size_t n) {
    const std::uint8_t* p = read_bytes(n);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v = (v << 8) | p[i];
    return v;
  }

  std::uint64_t read_le(std::size_t n) {
    const std::uint8_t* p = read_bytes(n);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i)
      v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
  }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

// Append-only writer with endian helpers.
class ByteWriter {
 public:
  std::vector<std::uint8_t>& bytes() { return out_; }
  const std::vector<std::uint8_t>& bytes() const { return out_; }
  std::size_t size() const { return out_.size(); }

  void u8(std::uint8_t b) { out_.push_back(b); }

  void raw(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }

  void raw(const std::vector<std::uint8_t>& v) { raw(v.data(), v.size()); }
  void raw(const std::string& s) { raw(s.data(), s.size()); }

  void be(std::uint64_t v, std::size_t n) {
    for (std::size_t i = n; i-- > 0;)
      out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void le(std::uint64_t v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
      out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  // Overwrites n little-endian bytes at an earlier position (length patches).
  void patch_le(std::size_t at, std::uint64_t v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
      out_[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
  }

 private:
  std::vector<std::uint8_t> out_;
};

// Bit-pattern helpers shared by the codecs.
inline std::uint64_t double_bits(double d) {
  std::uint64_t u;
  std::memcpy(&u, &d, 8);
  return u;
}

inline double bits_double(std::uint64_t u) {
  double d;
  std::memcpy(&d, &u, 8);
  return d;
}

inline std::uint32_t float_bits(float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  return u;
}

inline float bits_float(std::uint32_t u) {
  float f;
  std::memcpy(&f, &u, 4);
  return f;
}

// Validates UTF-8 (rejects surrogates, overlongs and values above U+10FFFF).
bool utf8_valid(const char* data, std::size_t size);
inline bool utf8_valid(const std::string& s) {
  return utf8_valid(s.data(), s.size());
}

// True when every byte is < 0x80.
bool ascii_only(const std::string& s);

}  // namespace binjson

#include "binjson/intcodec.hpp"

#include <limits>

#include "binjson/error.hpp"

namespace binjson {

namespace {

void check_width(int width) {
  if (width != 32 && width != 64)
    throw Error(Errc::RangeError, "width must be 32 or 64, got " +
                                      std::to_string(width));
}

void check_signed_range(std::int64_t n, int width) {
  check_width(width);
  if (width == 32 && (n < std::numeric_limits<std::int32_t>::min() ||
                      n > std::numeric_limits<std::int32_t>::max()))
    throw Error(Errc::RangeError,
                std::to_string(n) + " does not fit in 32 signed bits");
}

}  // namespace

std::vector<std::uint8_t> leb128_encode_unsigned(std::uint64_t n) {
  std::vector<std::uint8_t> out;
  do {
    std::uint8_t group = n & 0x7F;
    n >>= 7;
    out.push_back(n ? (group | 0x80) : group);
  } while (n);
  return out;
}

std::pair<std::uint64_t, std::size_t> leb128_decode_unsigned(
    const std::uint8_t* data, std::size_t size) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < size; ++i) {
    if (i == 10)
      throw Error(Errc::Overflow, "varint longer than 10 groups", i);
    std::uint64_t group = data[i] & 0x7F;
    // The 10th byte may only contribute the final bit of a 64-bit value.
    if (i == 9 && group > 1)
      throw Error(Errc::Overflow, "varint exceeds 64 bits", i);
    value |= group << (7 * i);
    if (!(data[i] & 0x80)) return {value, i + 1};
  }
  throw Error(Errc::Truncated, "varint continuation byte missing", size);
}

std::vector<std::uint8_t> leb128_encode_signed_twos(std::int64_t n,
                                                    int width) {
  check_signed_range(n, width);
  std::uint64_t pattern = static_cast<std::uint64_t>(n);
  if (width == 32) pattern &= 0xFFFFFFFFu;
  return leb128_encode_unsigned(pattern);
}

std::pair<std::int64_t, std::size_t> leb128_decode_signed_twos(
    const std::uint8_t* data, std::size_t size, int width) {
  check_width(width);
  auto [pattern, consumed] = leb128_decode_unsigned(data, size);
  if (width == 32) {
    if (pattern > 0xFFFFFFFFu)
      throw Error(Errc::Overflow, "value exceeds 32 bits");
    return {static_cast<std::int32_t>(static_cast<std::uint32_t>(pattern)),
            consumed};
  }
  return {static_cast<std::int64_t>(pattern), consumed};
}

std::uint64_t zigzag_encode(std::int64_t n, int width) {
  check_signed_range(n, width);
  if (width == 32) {
    auto v = static_cast<std::int32_t>(n);
    return static_cast<std::uint32_t>((v << 1) ^ (v >> 31));
  }
  return static_cast<std::uint64_t>((n << 1) ^ (n >> 63));
}

std::int64_t zigzag_decode(std::uint64_t u, int width) {
  check_width(width);
  if (width == 32 && u > 0xFFFFFFFFu)
    throw Error(Errc::RangeError,
                std::to_string(u) + " does not fit in 32 bits");
  std::uint64_t magnitude = u >> 1;
  return (u & 1) ? -static_cast<std::int64_t>(magnitude) - 1
                 : static_cast<std::int64_t>(magnitude);
}

}  // namespace binjson

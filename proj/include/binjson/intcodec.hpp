#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace binjson {

// LEB128: little-endian base-128 groups of 7 bits; every byte except the last
// has its most-significant bit set. Encoders always emit the minimal form;
// the decoder also accepts redundant leading-zero groups up to 10 bytes.

std::vector<std::uint8_t> leb128_encode_unsigned(std::uint64_t n);

// Returns (value, bytes consumed). Throws Error{Truncated} when the stream
// ends before a byte with a clear MSB, Error{Overflow} when the varint spans
// more than 10 groups or does not fit in 64 bits.
std::pair<std::uint64_t, std::size_t> leb128_decode_unsigned(
    const std::uint8_t* data, std::size_t size);

// Encodes a signed integer by taking its `width`-bit two's-complement bit
// pattern and feeding it through the unsigned encoder. width is 32 or 64.
// Throws Error{RangeError} when n does not fit in `width` signed bits.
std::vector<std::uint8_t> leb128_encode_signed_twos(std::int64_t n, int width);

// Inverse of leb128_encode_signed_twos (sign-extends the decoded pattern).
std::pair<std::int64_t, std::size_t> leb128_decode_signed_twos(
    const std::uint8_t* data, std::size_t size, int width);

// ZigZag: (n << 1) XOR (n >> (width - 1)) with arithmetic shift; maps
// non-negative n to 2n and negative n to 2|n| - 1. width is 32 or 64.
// Throws Error{RangeError} when the input does not fit the width.
std::uint64_t zigzag_encode(std::int64_t n, int width);
std::int64_t zigzag_decode(std::uint64_t u, int width);

}  // namespace binjson

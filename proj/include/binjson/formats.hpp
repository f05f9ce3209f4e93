#pragma once

// Per-format entry points. The generic encode/decode dispatch in codec.hpp is
// the usual way in; these are exposed for tests and the inspector.

#include <cstdint>
#include <vector>

#include "binjson/codec.hpp"
#include "binjson/value.hpp"

namespace binjson {

// MessagePack: minimal-width tags, big-endian payloads.
std::vector<std::uint8_t> mp_encode(const JsonValue& doc);
JsonValue mp_decode(const std::uint8_t* data, std::size_t size,
                    SpanSink* sink = nullptr);

// CBOR: definite-length output; indefinite forms and float16 decode-only.
std::vector<std::uint8_t> cbor_header_encode(int major, std::uint64_t argument);
std::vector<std::uint8_t> cbor_encode(const JsonValue& doc);
JsonValue cbor_decode(const std::uint8_t* data, std::size_t size,
                      SpanSink* sink = nullptr, Warnings* warnings = nullptr);

// UBJSON: mnemonic ASCII markers, big-endian payloads.
std::vector<std::uint8_t> ubj_encode(const JsonValue& doc);
JsonValue ubj_decode(const std::uint8_t* data, std::size_t size,
                     SpanSink* sink = nullptr);

// BSON: little-endian length-prefixed documents; object roots only.
std::vector<std::uint8_t> bson_encode(const JsonValue& doc);
JsonValue bson_decode(const std::uint8_t* data, std::size_t size,
                      SpanSink* sink = nullptr);

// Smile: 4-byte header, class-based strings, ZigZag varint integers.
std::vector<std::uint8_t> smile_encode(const JsonValue& doc,
                                       const SmileOptions& options = {});
JsonValue smile_decode(const std::uint8_t* data, std::size_t size,
                       SpanSink* sink = nullptr);

// The 7-bit-group transform used for Smile floats: the big-endian IEEE bit
// pattern emitted least-significant 7 bits first; 5 bytes for binary32,
// 10 for binary64.
std::vector<std::uint8_t> smile_float7_encode(std::uint64_t bits,
                                              int byte_width);

}  // namespace binjson

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "binjson/value.hpp"

namespace binjson {

class AvroSchema;  // see avro.hpp

enum class FormatId { MessagePack, Cbor, Ubjson, Bson, Smile, AvroBinary };

// Stable display name ("MessagePack", "CBOR", ...), used by the CLI table.
const char* format_name(FormatId id);

// Lookup by CLI token ("msgpack", "cbor", "ubjson", "bson", "smile", "avro").
std::optional<FormatId> format_from_token(const std::string& token);

// Infers a format from a file extension (.mp/.cbor/.ubj/.bson/.smile/.avro).
std::optional<FormatId> format_from_extension(const std::string& path);

const std::vector<FormatId>& all_formats();

struct SmileOptions {
  bool shared_names = true;    // back-reference property names
  bool shared_values = false;  // back-reference short string values
  bool use_float32 = false;    // emit floats as binary32 instead of binary64
};

// Profile used by the size-comparison table; pins the flags under which the
// golden Smile fixture was produced.
inline SmileOptions smile_fixture_profile() { return {false, false, true}; }

struct CodecOptions {
  SmileOptions smile;
  // Avro: writer schema required for encode; reader optional for decode.
  std::shared_ptr<const AvroSchema> schema;
  std::shared_ptr<const AvroSchema> reader;
};

// A labeled byte range produced while decoding, for the hexdump inspector.
// Spans are non-overlapping, ordered by offset, and together cover the whole
// buffer of a successfully decoded document.
struct AnnotatedSpan {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::string label;    // e.g. "type tag", "length prefix", "payload"
  std::string decoded;  // optional text rendering of the span's value
};

// Decoders report spans through this sink when one is supplied.
class SpanSink {
 public:
  virtual ~SpanSink() = default;
  virtual void add(std::size_t offset, std::size_t length, std::string label,
                   std::string decoded) = 0;
};

class SpanRecorder : public SpanSink {
 public:
  void add(std::size_t offset, std::size_t length, std::string label,
           std::string decoded) override {
    spans_.push_back({offset, length, std::move(label), std::move(decoded)});
  }
  const std::vector<AnnotatedSpan>& spans() const { return spans_; }

 private:
  std::vector<AnnotatedSpan> spans_;
};

// Non-fatal notes surfaced by decoders (e.g. skipped CBOR semantic tags).
using Warnings = std::vector<std::string>;

// Encodes one document. Throws Error{TopLevelShape} when the root does not
// satisfy the format's constraint (BSON and Avro require an object root) and
// Error{SchemaRequired} for Avro without a writer schema.
std::vector<std::uint8_t> encode(FormatId format, const JsonValue& doc,
                                 const CodecOptions& options = {});

// Decodes exactly one document; throws Error{TrailingBytes} when input
// continues past it. `sink` and `warnings` are optional.
JsonValue decode(FormatId format, const std::uint8_t* data, std::size_t size,
                 const CodecOptions& options = {}, SpanSink* sink = nullptr,
                 Warnings* warnings = nullptr);

inline JsonValue decode(FormatId format, const std::vector<std::uint8_t>& buf,
                        const CodecOptions& options = {},
                        SpanSink* sink = nullptr,
                        Warnings* warnings = nullptr) {
  return decode(format, buf.data(), buf.size(), options, sink, warnings);
}

}  // namespace binjson

#include "binjson/codec.hpp"

#include <algorithm>
#include <cctype>

#include "binjson/avro.hpp"
#include "binjson/error.hpp"
#include "binjson/formats.hpp"

namespace binjson {

const char* format_name(FormatId id) {
  switch (id) {
    case FormatId::MessagePack: return "MessagePack";
    case FormatId::Cbor: return "CBOR";
    case FormatId::Ubjson: return "UBJSON";
    case FormatId::Bson: return "BSON";
    case FormatId::Smile: return "Smile";
    case FormatId::AvroBinary: return "Avro";
  }
  return "?";
}

std::optional<FormatId> format_from_token(const std::string& token) {
  std::string t;
  for (char c : token) t += static_cast<char>(std::tolower(c));
  if (t == "msgpack" || t == "messagepack" || t == "mp")
    return FormatId::MessagePack;
  if (t == "cbor") return FormatId::Cbor;
  if (t == "ubjson" || t == "ubj") return FormatId::Ubjson;
  if (t == "bson") return FormatId::Bson;
  if (t == "smile") return FormatId::Smile;
  if (t == "avro") return FormatId::AvroBinary;
  return std::nullopt;
}

std::optional<FormatId> format_from_extension(const std::string& path) {
  auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return std::nullopt;
  std::string ext = path.substr(dot + 1);
  if (ext == "mp") return FormatId::MessagePack;
  if (ext == "cbor") return FormatId::Cbor;
  if (ext == "ubj") return FormatId::Ubjson;
  if (ext == "bson") return FormatId::Bson;
  if (ext == "smile") return FormatId::Smile;
  if (ext == "avro") return FormatId::AvroBinary;
  return std::nullopt;
}

const std::vector<FormatId>& all_formats() {
  static const std::vector<FormatId> formats = {
      FormatId::MessagePack, FormatId::Cbor,  FormatId::Ubjson,
      FormatId::Bson,        FormatId::Smile, FormatId::AvroBinary,
  };
  return formats;
}

std::vector<std::uint8_t> encode(FormatId format, const JsonValue& doc,
                                 const CodecOptions& options) {
  switch (format) {
    case FormatId::MessagePack: return mp_encode(doc);
    case FormatId::Cbor: return cbor_encode(doc);
    case FormatId::Ubjson: return ubj_encode(doc);
    case FormatId::Bson: return bson_encode(doc);
    case FormatId::Smile: return smile_encode(doc, options.smile);
    case FormatId::AvroBinary:
      if (!options.schema)
        throw Error(Errc::SchemaRequired,
                    "Avro encoding needs a writer schema");
      if (!doc.is_obj())
        throw Error(Errc::TopLevelShape, "Avro requires an object root");
      return avro_encode(doc, *options.schema);
  }
  throw Error(Errc::Unsupported, "unknown format");
}

JsonValue decode(FormatId format, const std::uint8_t* data, std::size_t size,
                 const CodecOptions& options, SpanSink* sink,
                 Warnings* warnings) {
  switch (format) {
    case FormatId::MessagePack: return mp_decode(data, size, sink);
    case FormatId::Cbor: return cbor_decode(data, size, sink, warnings);
    case FormatId::Ubjson: return ubj_decode(data, size, sink);
    case FormatId::Bson: return bson_decode(data, size, sink);
    case FormatId::Smile: return smile_decode(data, size, sink);
    case FormatId::AvroBinary:
      if (!options.schema)
        throw Error(Errc::SchemaRequired,
                    "Avro decoding needs the writer schema");
      return avro_decode(data, size, *options.schema, options.reader.get(),
                         sink);
  }
  throw Error(Errc::Unsupported, "unknown format");
}

}  // namespace binjson

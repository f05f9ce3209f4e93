#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "binjson/codec.hpp"
#include "binjson/value.hpp"

namespace binjson {

// Recursive Avro schema parsed from the JSON schema dialect.
class AvroSchema {
 public:
  enum class Kind {
    Null,
    Boolean,
    Int,
    Long,
    Float,
    Double,
    Bytes,
    String,
    Record,
    Enum,
    Array,
    Map,
    Union,
    Fixed,
  };

  struct Field {
    std::string name;
    std::shared_ptr<const AvroSchema> schema;
    std::optional<JsonValue> default_value;
  };

  Kind kind = Kind::Null;
  std::string name;                 // Record / Enum / Fixed
  std::vector<Field> fields;        // Record
  std::vector<std::string> symbols; // Enum
  std::shared_ptr<const AvroSchema> items;   // Array
  std::shared_ptr<const AvroSchema> values;  // Map
  std::vector<std::shared_ptr<const AvroSchema>> branches;  // Union
  std::size_t fixed_size = 0;       // Fixed

  const Field* find_field(const std::string& field_name) const;
  // Human-readable type label used in error messages ("record Main", "int").
  std::string label() const;
};

using AvroSchemaPtr = std::shared_ptr<const AvroSchema>;

// Parses the Avro JSON schema dialect (primitive name strings, type objects,
// union arrays, named-type references). Defaults are retained for schema
// resolution. Throws Error{SchemaSyntax} with the offending node path.
AvroSchemaPtr avro_parse_schema(const JsonValue& document);
AvroSchemaPtr avro_parse_schema_text(const std::string& text);
AvroSchemaPtr avro_load_schema_file(const std::string& path);

// Encodes `value` under `schema` (conformance checked). Arrays and maps are
// written as a single block plus a zero terminator.
// Throws Error{SchemaMismatch} with the offending path and Error{RangeError}
// for an Int branch outside 32-bit range.
std::vector<std::uint8_t> avro_encode(const JsonValue& value,
                                      const AvroSchema& schema);

// Decodes bytes produced under `writer`. When `reader` is given, the output
// conforms to the reader schema via Avro schema resolution (field matching by
// name, defaults for reader-only fields, numeric promotions, union branch
// matching). Negative array/map block counts are honored.
JsonValue avro_decode(const std::uint8_t* data, std::size_t size,
                      const AvroSchema& writer,
                      const AvroSchema* reader = nullptr,
                      SpanSink* sink = nullptr);

enum class Compatibility { Full, Backward, Forward, Incompatible };

const char* compatibility_name(Compatibility level);

struct CompatibilityVerdict {
  Compatibility level = Compatibility::Incompatible;
  std::vector<std::string> reasons;  // per-path explanations of failures
};

// Classifies a schema change. Backward: data written under `old_schema` is
// readable under `new_schema`; Forward: the converse; Full: both.
CompatibilityVerdict avro_check_compat(const AvroSchema& old_schema,
                                       const AvroSchema& new_schema);

}  // namespace binjson

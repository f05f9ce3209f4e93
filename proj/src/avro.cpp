#include "binjson/avro.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "binjson/cursor.hpp"
#include "binjson/error.hpp"
#include "binjson/intcodec.hpp"

namespace binjson {

namespace {

using Kind = AvroSchema::Kind;

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Null: return "null";
    case Kind::Boolean: return "boolean";
    case Kind::Int: return "int";
    case Kind::Long: return "long";
    case Kind::Float: return "float";
    case Kind::Double: return "double";
    case Kind::Bytes: return "bytes";
    case Kind::String: return "string";
    case Kind::Record: return "record";
    case Kind::Enum: return "enum";
    case Kind::Array: return "array";
    case Kind::Map: return "map";
    case Kind::Union: return "union";
    case Kind::Fixed: return "fixed";
  }
  return "?";
}

class SchemaParser {
 public:
  AvroSchemaPtr parse(const JsonValue& node, const std::string& path) {
    if (node.is_str()) return by_name(node.as_str(), path);
    if (node.is_arr()) {
      auto schema = std::make_shared<AvroSchema>();
      schema->kind = Kind::Union;
      std::size_t i = 0;
      for (const auto& branch : node.as_arr()) {
        auto parsed = parse(branch, path + "[" + std::to_string(i++) + "]");
        if (parsed->kind == Kind::Union)
          throw Error(Errc::SchemaSyntax,
                      path + ": unions may not directly nest unions");
        for (const auto& other : schema->branches)
          if (!distinct_in_union(*other, *parsed))
            throw Error(Errc::SchemaSyntax,
                        path + ": duplicate union branch " + parsed->label());
        schema->branches.push_back(std::move(parsed));
      }
      if (schema->branches.empty())
        throw Error(Errc::SchemaSyntax, path + ": empty union");
      return schema;
    }
    if (!node.is_obj())
      throw Error(Errc::SchemaSyntax, path + ": expected a schema node");
    const JsonValue* type = node.find("type");
    if (!type || !type->is_str())
      throw Error(Errc::SchemaSyntax, path + ": missing \"type\" name");
    const std::string& t = type->as_str();
    if (t == "record") return record(node, path);
    if (t == "enum") return enumeration(node, path);
    if (t == "array") {
      auto schema = std::make_shared<AvroSchema>();
      schema->kind = Kind::Array;
      const JsonValue* items = node.find("items");
      if (!items)
        throw Error(Errc::SchemaSyntax, path + ": array without \"items\"");
      schema->items = parse(*items, path + ".items");
      return schema;
    }
    if (t == "map") {
      auto schema = std::make_shared<AvroSchema>();
      schema->kind = Kind::Map;
      const JsonValue* values = node.find("values");
      if (!values)
        throw Error(Errc::SchemaSyntax, path + ": map without \"values\"");
      schema->values = parse(*values, path + ".values");
      return schema;
    }
    if (t == "fixed") {
      auto schema = std::make_shared<AvroSchema>();
      schema->kind = Kind::Fixed;
      schema->name = required_name(node, path);
      const JsonValue* size = node.find("size");
      if (!size || !size->is_int() || size->as_int() < 0)
        throw Error(Errc::SchemaSyntax, path + ": fixed without a valid size");
      schema->fixed_size = static_cast<std::size_t>(size->as_int());
      named_[schema->name] = schema;
      return schema;
    }
    return by_name(t, path);  // {"type": "long"} and named references
  }

 private:
  static bool distinct_in_union(const AvroSchema& a, const AvroSchema& b) {
    if (a.kind != b.kind) return true;
    // Multiple named types of the same kind may coexist under distinct names.
    if (a.kind == Kind::Record || a.kind == Kind::Enum || a.kind == Kind::Fixed)
      return a.name != b.name;
    return false;
  }

  std::string required_name(const JsonValue& node, const std::string& path) {
    const JsonValue* name = node.find("name");
    if (!name || !name->is_str() || name->as_str().empty())
      throw Error(Errc::SchemaSyntax, path + ": missing \"name\"");
    return name->as_str();
  }

  AvroSchemaPtr record(const JsonValue& node, const std::string& path) {
    auto schema = std::make_shared<AvroSchema>();
    schema->kind = Kind::Record;
    schema->name = required_name(node, path);
    named_[schema->name] = schema;
    const JsonValue* fields = node.find("fields");
    if (!fields || !fields->is_arr())
      throw Error(Errc::SchemaSyntax, path + ": record without \"fields\"");
    std::size_t i = 0;
    for (const auto& fnode : fields->as_arr()) {
      std::string fpath = path + ".fields[" + std::to_string(i++) + "]";
      if (!fnode.is_obj())
        throw Error(Errc::SchemaSyntax, fpath + ": expected a field object");
      AvroSchema::Field field;
      field.name = required_name(fnode, fpath);
      for (const auto& existing : schema->fields)
        if (existing.name == field.name)
          throw Error(Errc::SchemaSyntax,
                      fpath + ": duplicate field \"" + field.name + "\"");
      const JsonValue* ftype = fnode.find("type");
      if (!ftype)
        throw Error(Errc::SchemaSyntax, fpath + ": field without \"type\"");
      field.schema = parse(*ftype, fpath + ".type");
      if (const JsonValue* dflt = fnode.find("default"))
        field.default_value = *dflt;
      schema->fields.push_back(std::move(field));
    }
    return schema;
  }

  AvroSchemaPtr enumeration(const JsonValue& node, const std::string& path) {
    auto schema = std::make_shared<AvroSchema>();
    schema->kind = Kind::Enum;
    schema->name = required_name(node, path);
    const JsonValue* symbols = node.find("symbols");
    if (!symbols || !symbols->is_arr())
      throw Error(Errc::SchemaSyntax, path + ": enum without \"symbols\"");
    for (const auto& sym : symbols->as_arr()) {
      if (!sym.is_str())
        throw Error(Errc::SchemaSyntax, path + ": non-string enum symbol");
      if (std::find(schema->symbols.begin(), schema->symbols.end(),
                    sym.as_str()) != schema->symbols.end())
        throw Error(Errc::SchemaSyntax,
                    path + ": duplicate enum symbol \"" + sym.as_str() + "\"");
      schema->symbols.push_back(sym.as_str());
    }
    if (schema->symbols.empty())
      throw Error(Errc::SchemaSyntax, path + ": empty enum");
    named_[schema->name] = schema;
    return schema;
  }

  AvroSchemaPtr by_name(const std::string& t, const std::string& path) {
    static const std::map<std::string, Kind> primitives = {
        {"null", Kind::Null},     {"boolean", Kind::Boolean},
        {"int", Kind::Int},       {"long", Kind::Long},
        {"float", Kind::Float},   {"double", Kind::Double},
        {"bytes", Kind::Bytes},   {"string", Kind::String},
    };
    auto prim = primitives.find(t);
    if (prim != primitives.end()) {
      auto schema = std::make_shared<AvroSchema>();
      schema->kind = prim->second;
      return schema;
    }
    auto named = named_.find(t);
    if (named != named_.end()) return named->second;
    throw Error(Errc::SchemaSyntax, path + ": unknown type \"" + t + "\"");
  }

  std::map<std::string, AvroSchemaPtr> named_;
};

void write_long_varint(std::int64_t n, ByteWriter& out) {
  auto bytes = leb128_encode_unsigned(zigzag_encode(n, 64));
  out.raw(bytes);
}

void write_int_varint(std::int64_t n, ByteWriter& out) {
  auto bytes = leb128_encode_unsigned(zigzag_encode(n, 32));
  out.raw(bytes);
}

bool conforms(const JsonValue& v, const AvroSchema& s);

// True when v can be encoded under this non-union schema kind.
bool conforms_kind(const JsonValue& v, const AvroSchema& s) {
  switch (s.kind) {
    case Kind::Null: return v.is_null();
    case Kind::Boolean: return v.is_bool();
    case Kind::Int:
      return v.is_int() &&
             v.as_int() >= std::numeric_limits<std::int32_t>::min() &&
             v.as_int() <= std::numeric_limits<std::int32_t>::max();
    case Kind::Long: return v.is_int();
    case Kind::Float:
    case Kind::Double: return v.is_float() || v.is_int();
    case Kind::Bytes:
    case Kind::String: return v.is_str();
    case Kind::Enum:
      return v.is_str() &&
             std::find(s.symbols.begin(), s.symbols.end(), v.as_str()) !=
                 s.symbols.end();
    case Kind::Fixed: return v.is_str() && v.as_str().size() == s.fixed_size;
    case Kind::Array: return v.is_arr();
    case Kind::Map: return v.is_obj();
    case Kind::Record: {
      if (!v.is_obj()) return false;
      for (const auto& field : s.fields) {
        const JsonValue* fv = v.find(field.name);
        if (fv == nullptr) {
          if (!field.default_value) return false;
          continue;
        }
        if (!conforms(*fv, *field.schema)) return false;
      }
      return true;
    }
    case Kind::Union: return false;  // handled by conforms()
  }
  return false;
}

bool conforms(const JsonValue& v, const AvroSchema& s) {
  if (s.kind != Kind::Union) return conforms_kind(v, s);
  for (const auto& branch : s.branches)
    if (conforms(v, *branch)) return true;
  return false;
}

class AvroEncoder {
 public:
  std::vector<std::uint8_t> run(const JsonValue& value,
                                const AvroSchema& schema) {
    encode(value, schema, "$");
    return std::move(out_.bytes());
  }

 private:
  [[noreturn]] void mismatch(const std::string& path, const JsonValue& v,
                             const AvroSchema& s) {
    throw Error(Errc::SchemaMismatch, path + ": value " + dump_json(v) +
                                          " does not conform to " + s.label());
  }

  void encode(const JsonValue& v, const AvroSchema& s,
              const std::string& path) {
    switch (s.kind) {
      case Kind::Null:
        if (!v.is_null()) mismatch(path, v, s);
        break;
      case Kind::Boolean:
        if (!v.is_bool()) mismatch(path, v, s);
        out_.u8(v.as_bool() ? 0x01 : 0x00);
        break;
      case Kind::Int: {
        if (!v.is_int()) mismatch(path, v, s);
        std::int64_t n = v.as_int();
        if (n < std::numeric_limits<std::int32_t>::min() ||
            n > std::numeric_limits<std::int32_t>::max())
          throw Error(Errc::RangeError,
                      path + ": " + std::to_string(n) +
                          " does not fit the 32-bit int branch");
        write_int_varint(n, out_);
        break;
      }
      case Kind::Long:
        if (!v.is_int()) mismatch(path, v, s);
        write_long_varint(v.as_int(), out_);
        break;
      case Kind::Float: {
        if (!v.is_float() && !v.is_int()) mismatch(path, v, s);
        double d = v.is_float() ? v.as_float()
                                : static_cast<double>(v.as_int());
        out_.le(float_bits(static_cast<float>(d)), 4);
        break;
      }
      case Kind::Double: {
        if (!v.is_float() && !v.is_int()) mismatch(path, v, s);
        double d = v.is_float() ? v.as_float()
                                : static_cast<double>(v.as_int());
        out_.le(double_bits(d), 8);
        break;
      }
      case Kind::Bytes:
      case Kind::String:
        if (!v.is_str()) mismatch(path, v, s);
        write_long_varint(static_cast<std::int64_t>(v.as_str().size()), out_);
        out_.raw(v.as_str());
        break;
      case Kind::Fixed:
        if (!v.is_str() || v.as_str().size() != s.fixed_size)
          mismatch(path, v, s);
        out_.raw(v.as_str());
        break;
      case Kind::Enum: {
        if (!v.is_str()) mismatch(path, v, s);
        auto it = std::find(s.symbols.begin(), s.symbols.end(), v.as_str());
        if (it == s.symbols.end()) mismatch(path, v, s);
        write_int_varint(it - s.symbols.begin(), out_);
        break;
      }
      case Kind::Array: {
        if (!v.is_arr()) mismatch(path, v, s);
        const auto& items = v.as_arr();
        if (!items.empty()) {
          write_long_varint(static_cast<std::int64_t>(items.size()), out_);
          std::size_t i = 0;
          for (const auto& item : items)
            encode(item, *s.items, path + "[" + std::to_string(i++) + "]");
        }
        out_.u8(0x00);  // block terminator
        break;
      }
      case Kind::Map: {
        if (!v.is_obj()) mismatch(path, v, s);
        const auto& entries = v.as_obj();
        if (!entries.empty()) {
          write_long_varint(static_cast<std::int64_t>(entries.size()), out_);
          for (const auto& [key, item] : entries) {
            write_long_varint(static_cast<std::int64_t>(key.size()), out_);
            out_.raw(key);
            encode(item, *s.values, path + "." + key);
          }
        }
        out_.u8(0x00);
        break;
      }
      case Kind::Record: {
        if (!v.is_obj()) mismatch(path, v, s);
        for (const auto& field : s.fields) {
          const JsonValue* fv = v.find(field.name);
          std::string fpath = path + "." + field.name;
          if (fv == nullptr) {
            // Absent fields fall back to their default; fields are encoded
            // even when equal to an explicitly-set default.
            if (!field.default_value)
              throw Error(Errc::SchemaMismatch,
                          fpath + ": required field is missing");
            encode(*field.default_value, *field.schema, fpath);
          } else {
            encode(*fv, *field.schema, fpath);
          }
        }
        break;
      }
      case Kind::Union: {
        for (std::size_t i = 0; i < s.branches.size(); ++i) {
          if (conforms(v, *s.branches[i])) {
            write_int_varint(static_cast<std::int64_t>(i), out_);
            encode(v, *s.branches[i],
                   path + "<" + s.branches[i]->label() + ">");
            return;
          }
        }
        mismatch(path, v, s);
      }
    }
  }

  ByteWriter out_;
};

// Static schema-resolution check shared by avro_decode and avro_check_compat.
// `reasons` (optional) collects per-path explanations of failures.
bool resolves(const AvroSchema& reader, const AvroSchema& writer,
              const std::string& path, std::vector<std::string>* reasons);

bool note(std::vector<std::string>* reasons, const std::string& text) {
  if (reasons) reasons->push_back(text);
  return false;
}

bool primitive_promotable(Kind writer, Kind reader) {
  if (writer == reader) return true;
  switch (writer) {
    case Kind::Int:
      return reader == Kind::Long || reader == Kind::Float ||
             reader == Kind::Double;
    case Kind::Long:
      return reader == Kind::Float || reader == Kind::Double;
    case Kind::Float:
      return reader == Kind::Double;
    default:
      return false;
  }
}

bool resolves(const AvroSchema& reader, const AvroSchema& writer,
              const std::string& path, std::vector<std::string>* reasons) {
  // Writer union: every branch the writer may emit must be readable.
  if (writer.kind == Kind::Union) {
    bool ok = true;
    for (const auto& branch : writer.branches) {
      if (reader.kind == Kind::Union) {
        bool matched = false;
        for (const auto& rb : reader.branches)
          if (resolves(*rb, *branch, path, nullptr)) {
            matched = true;
            break;
          }
        if (!matched)
          ok = note(reasons, path + ": writer union branch " +
                                 branch->label() +
                                 " matches no reader branch");
      } else if (!resolves(reader, *branch, path, nullptr)) {
        ok = note(reasons, path + ": writer union branch " + branch->label() +
                               " is not readable as " + reader.label());
      }
    }
    return ok;
  }
  // Reader union against a non-union writer: some branch must accept it.
  if (reader.kind == Kind::Union) {
    for (const auto& rb : reader.branches)
      if (resolves(*rb, writer, path, nullptr)) return true;
    return note(reasons, path + ": writer " + writer.label() +
                             " matches no reader union branch");
  }
  switch (reader.kind) {
    case Kind::Null:
    case Kind::Boolean:
    case Kind::Int:
    case Kind::Long:
    case Kind::Float:
    case Kind::Double:
    case Kind::Bytes:
    case Kind::String:
      if (primitive_promotable(writer.kind, reader.kind)) return true;
      return note(reasons, path + ": writer " + writer.label() +
                               " is not promotable to reader " +
                               reader.label());
    case Kind::Array:
      if (writer.kind != Kind::Array)
        return note(reasons, path + ": writer " + writer.label() +
                                 " is not an array");
      return resolves(*reader.items, *writer.items, path + "[]", reasons);
    case Kind::Map:
      if (writer.kind != Kind::Map)
        return note(reasons,
                    path + ": writer " + writer.label() + " is not a map");
      return resolves(*reader.values, *writer.values, path + ".*", reasons);
    case Kind::Fixed:
      if (writer.kind != Kind::Fixed || writer.name != reader.name ||
          writer.fixed_size != reader.fixed_size)
        return note(reasons, path + ": fixed name/size mismatch");
      return true;
    case Kind::Enum: {
      if (writer.kind != Kind::Enum || writer.name != reader.name)
        return note(reasons, path + ": writer " + writer.label() +
                                 " does not match reader " + reader.label());
      bool ok = true;
      for (const auto& sym : writer.symbols)
        if (std::find(reader.symbols.begin(), reader.symbols.end(), sym) ==
            reader.symbols.end())
          ok = note(reasons, path + ": writer symbol \"" + sym +
                                 "\" is unknown to the reader");
      return ok;
    }
    case Kind::Record: {
      if (writer.kind != Kind::Record || writer.name != reader.name)
        return note(reasons, path + ": writer " + writer.label() +
                                 " does not match reader " + reader.label());
      bool ok = true;
      for (const auto& rf : reader.fields) {
        const AvroSchema::Field* wf = writer.find_field(rf.name);
        std::string fpath = path + "." + rf.name;
        if (wf == nullptr) {
          if (!rf.default_value)
            ok = note(reasons, fpath +
                                   ": reader-only field has no default");
          continue;
        }
        if (!resolves(*rf.schema, *wf->schema, fpath, reasons)) ok = false;
      }
      return ok;  // writer-only fields are skipped on read
    }
    case Kind::Union:
      return false;  // unreachable; handled above
  }
  return false;
}

class AvroDecoder {
 public:
  AvroDecoder(const std::uint8_t* data, std::size_t size, SpanSink* sink)
      : cur_(data, size), sink_(sink) {}

  ByteCursor& cursor() { return cur_; }

  JsonValue run(const AvroSchema& writer, const AvroSchema* reader) {
    if (reader != nullptr) {
      std::vector<std::string> reasons;
      if (!resolves(*reader, writer, "$", &reasons)) {
        std::string detail = "reader cannot resolve writer";
        for (const auto& r : reasons) detail += "; " + r;
        throw Error(Errc::ResolutionError, detail);
      }
    }
    return decode(writer, reader, "$");
  }

 private:
  void span(std::size_t start, std::string label, std::string decoded) {
    if (sink_)
      sink_->add(start, cur_.position() - start, std::move(label),
                 std::move(decoded));
  }

  std::int64_t read_varint(int width, std::size_t at, const char* what) {
    std::uint64_t u;
    std::size_t consumed;
    std::tie(u, consumed) = leb128_decode_unsigned(cur_.cur(),
                                                   cur_.remaining());
    cur_.skip(consumed);
    (void)at;
    (void)what;
    return zigzag_decode(u, width);
  }

  // Decodes a value written under `writer`, shaped by `reader` when given.
  JsonValue decode(const AvroSchema& writer, const AvroSchema* reader,
                   const std::string& path) {
    if (writer.kind == Kind::Union) {
      std::size_t at = cur_.position();
      std::int64_t index = read_varint(32, at, "union index");
      if (index < 0 ||
          static_cast<std::size_t>(index) >= writer.branches.size())
        throw Error(Errc::SchemaMismatch,
                    path + ": union branch index " + std::to_string(index) +
                        " out of range",
                    at);
      span(at, "union index",
           writer.branches[static_cast<std::size_t>(index)]->label());
      const AvroSchema& branch =
          *writer.branches[static_cast<std::size_t>(index)];
      if (reader == nullptr) return decode(branch, nullptr, path);
      if (reader->kind == Kind::Union) {
        for (const auto& rb : reader->branches)
          if (resolves(*rb, branch, path, nullptr))
            return decode(branch, rb.get(), path);
        throw Error(Errc::ResolutionError,
                    path + ": writer branch " + branch.label() +
                        " matches no reader branch",
                    at);
      }
      return decode(branch, reader, path);
    }
    if (reader != nullptr && reader->kind == Kind::Union) {
      for (const auto& rb : reader->branches)
        if (resolves(*rb, writer, path, nullptr))
          return decode(writer, rb.get(), path);
      throw Error(Errc::ResolutionError,
                  path + ": writer " + writer.label() +
                      " matches no reader branch",
                  cur_.position());
    }
    Kind target = reader ? reader->kind : writer.kind;
    std::size_t at = cur_.position();
    switch (writer.kind) {
      case Kind::Null:
        span(at, "null", "null");
        return JsonValue(nullptr);
      case Kind::Boolean: {
        std::uint8_t b = cur_.read_u8();
        if (b > 1)
          throw Error(Errc::BadTag, path + ": boolean byte must be 0 or 1",
                      at);
        span(at, "boolean", b ? "true" : "false");
        return JsonValue(b == 1);
      }
      case Kind::Int:
      case Kind::Long: {
        std::int64_t n =
            read_varint(writer.kind == Kind::Int ? 32 : 64, at, "int");
        span(at, writer.kind == Kind::Int ? "int varint" : "long varint",
             std::to_string(n));
        if (target == Kind::Float || target == Kind::Double)
          return JsonValue(static_cast<double>(n));
        return JsonValue(n);
      }
      case Kind::Float: {
        double d = bits_float(static_cast<std::uint32_t>(cur_.read_le(4)));
        if (std::isinf(d) || std::isnan(d))
          throw Error(Errc::Unsupported, "NaN/infinity have no JSON value",
                      at);
        span(at, "float", dump_json(JsonValue(d)));
        return JsonValue(d);
      }
      case Kind::Double: {
        double d = bits_double(cur_.read_le(8));
        if (std::isinf(d) || std::isnan(d))
          throw Error(Errc::Unsupported, "NaN/infinity have no JSON value",
                      at);
        span(at, "double", dump_json(JsonValue(d)));
        return JsonValue(d);
      }
      case Kind::Bytes:
      case Kind::String: {
        std::int64_t len = read_varint(64, at, "length");
        if (len < 0)
          throw Error(Errc::LengthMismatch, path + ": negative length", at);
        span(at, "length prefix", std::to_string(len));
        std::size_t payload = cur_.position();
        std::string s = cur_.read_string(static_cast<std::size_t>(len));
        if (!utf8_valid(s))
          throw Error(Errc::InvalidUtf8,
                      path + ": payload is not UTF-8 text", payload);
        if (sink_ && len > 0)
          sink_->add(payload, static_cast<std::size_t>(len), "payload", s);
        return JsonValue(std::move(s));
      }
      case Kind::Fixed: {
        std::string s = cur_.read_string(writer.fixed_size);
        if (!utf8_valid(s))
          throw Error(Errc::InvalidUtf8,
                      path + ": payload is not UTF-8 text", at);
        span(at, "fixed payload", s);
        return JsonValue(std::move(s));
      }
      case Kind::Enum: {
        std::int64_t index = read_varint(32, at, "enum index");
        if (index < 0 ||
            static_cast<std::size_t>(index) >= writer.symbols.size())
          throw Error(Errc::SchemaMismatch,
                      path + ": enum index out of range", at);
        const std::string& sym =
            writer.symbols[static_cast<std::size_t>(index)];
        span(at, "enum index", sym);
        if (reader && std::find(reader->symbols.begin(),
                                reader->symbols.end(),
                                sym) == reader->symbols.end())
          throw Error(Errc::ResolutionError,
                      path + ": symbol \"" + sym +
                          "\" is unknown to the reader",
                      at);
        return JsonValue(sym);
      }
      case Kind::Array: {
        JsonValue::Array items;
        const AvroSchema* reader_items =
            reader ? reader->items.get() : nullptr;
        for (;;) {
          std::size_t bat = cur_.position();
          std::int64_t count = read_varint(64, bat, "block count");
          if (count == 0) {
            span(bat, "block terminator", "");
            break;
          }
          if (count < 0) {
            // Negative block count: absolute value items, preceded by the
            // block's byte length.
            std::int64_t nbytes = read_varint(64, bat, "block size");
            if (nbytes < 0)
              throw Error(Errc::LengthMismatch,
                          path + ": negative block byte size", bat);
            count = -count;
            span(bat, "block header",
                 std::to_string(count) + " item(s), " +
                     std::to_string(nbytes) + " byte(s)");
          } else {
            span(bat, "block count", std::to_string(count) + " item(s)");
          }
          for (std::int64_t i = 0; i < count; ++i)
            items.push_back(decode(*writer.items, reader_items,
                                   path + "[" + std::to_string(items.size()) +
                                       "]"));
        }
        return JsonValue(std::move(items));
      }
      case Kind::Map: {
        JsonValue::Object entries;
        const AvroSchema* reader_values =
            reader ? reader->values.get() : nullptr;
        for (;;) {
          std::size_t bat = cur_.position();
          std::int64_t count = read_varint(64, bat, "block count");
          if (count == 0) {
            span(bat, "block terminator", "");
            break;
          }
          if (count < 0) {
            std::int64_t nbytes = read_varint(64, bat, "block size");
            if (nbytes < 0)
              throw Error(Errc::LengthMismatch,
                          path + ": negative block byte size", bat);
            count = -count;
          }
          span(bat, "block count", std::to_string(count) + " entr(ies)");
          for (std::int64_t i = 0; i < count; ++i) {
            std::size_t kat = cur_.position();
            std::int64_t klen = read_varint(64, kat, "key length");
            if (klen < 0)
              throw Error(Errc::LengthMismatch,
                          path + ": negative key length", kat);
            span(kat, "key length", std::to_string(klen));
            std::size_t payload = cur_.position();
            std::string key =
                cur_.read_string(static_cast<std::size_t>(klen));
            if (!utf8_valid(key))
              throw Error(Errc::InvalidUtf8, path + ": key is not UTF-8",
                          payload);
            if (sink_ && klen > 0)
              sink_->add(payload, static_cast<std::size_t>(klen), "key", key);
            entries.emplace_back(
                key, decode(*writer.values, reader_values, path + "." + key));
          }
        }
        return JsonValue(std::move(entries));
      }
      case Kind::Record: {
        JsonValue::Object entries;
        if (reader == nullptr) {
          for (const auto& field : writer.fields)
            entries.emplace_back(
                field.name,
                decode(*field.schema, nullptr, path + "." + field.name));
          return JsonValue(std::move(entries));
        }
        // Resolved read: writer order drives the wire; reader order shapes
        // the output, with defaults for reader-only fields.
        std::vector<std::pair<std::string, JsonValue>> decoded;
        for (const auto& wf : writer.fields) {
          const AvroSchema::Field* rf = reader->find_field(wf.name);
          if (rf == nullptr) {
            // Skipped: decode under the writer schema and discard.
            decode(*wf.schema, nullptr, path + "." + wf.name);
            continue;
          }
          decoded.emplace_back(
              wf.name, decode(*wf.schema, rf->schema.get(),
                              path + "." + wf.name));
        }
        for (const auto& rf : reader->fields) {
          auto it = std::find_if(decoded.begin(), decoded.end(),
                                 [&](const auto& p) {
                                   return p.first == rf.name;
                                 });
          if (it != decoded.end()) {
            entries.emplace_back(rf.name, std::move(it->second));
          } else {
            entries.emplace_back(rf.name, *rf.default_value);
          }
        }
        return JsonValue(std::move(entries));
      }
      case Kind::Union:
        break;  // handled above
    }
    throw Error(Errc::SchemaMismatch, path + ": unreachable schema kind");
  }

  ByteCursor cur_;
  SpanSink* sink_;
};

}  // namespace

const AvroSchema::Field* AvroSchema::find_field(
    const std::string& field_name) const {
  for (const auto& field : fields)
    if (field.name == field_name) return &field;
  return nullptr;
}

std::string AvroSchema::label() const {
  std::string out = kind_name(kind);
  if (!name.empty()) {
    out += ' ';
    out += name;
  }
  return out;
}

AvroSchemaPtr avro_parse_schema(const JsonValue& document) {
  SchemaParser parser;
  return parser.parse(document, "$");
}

AvroSchemaPtr avro_parse_schema_text(const std::string& text) {
  return avro_parse_schema(parse_json(text));
}

AvroSchemaPtr avro_load_schema_file(const std::string& path) {
  return avro_parse_schema(load_json_file(path));
}

std::vector<std::uint8_t> avro_encode(const JsonValue& value,
                                      const AvroSchema& schema) {
  return AvroEncoder().run(value, schema);
}

JsonValue avro_decode(const std::uint8_t* data, std::size_t size,
                      const AvroSchema& writer, const AvroSchema* reader,
                      SpanSink* sink) {
  AvroDecoder dec(data, size, sink);
  JsonValue v = dec.run(writer, reader);
  if (!dec.cursor().at_end())
    throw Error(Errc::TrailingBytes,
                std::to_string(dec.cursor().remaining()) +
                    " byte(s) past the document",
                dec.cursor().position());
  return v;
}

const char* compatibility_name(Compatibility level) {
  switch (level) {
    case Compatibility::Full: return "Full";
    case Compatibility::Backward: return "Backward";
    case Compatibility::Forward: return "Forward";
    case Compatibility::Incompatible: return "Incompatible";
  }
  return "?";
}

CompatibilityVerdict avro_check_compat(const AvroSchema& old_schema,
                                       const AvroSchema& new_schema) {
  CompatibilityVerdict verdict;
  std::vector<std::string> backward_reasons;
  std::vector<std::string> forward_reasons;
  bool backward = resolves(new_schema, old_schema, "$", &backward_reasons);
  bool forward = resolves(old_schema, new_schema, "$", &forward_reasons);
  if (backward && forward) {
    verdict.level = Compatibility::Full;
  } else if (backward) {
    verdict.level = Compatibility::Backward;
    for (const auto& r : forward_reasons)
      verdict.reasons.push_back("not forward: " + r);
  } else if (forward) {
    verdict.level = Compatibility::Forward;
    for (const auto& r : backward_reasons)
      verdict.reasons.push_back("not backward: " + r);
  } else {
    verdict.level = Compatibility::Incompatible;
    for (const auto& r : backward_reasons)
      verdict.reasons.push_back("not backward: " + r);
    for (const auto& r : forward_reasons)
      verdict.reasons.push_back("not forward: " + r);
  }
  return verdict;
}

}  // namespace binjson

// Python bindings: JsonValue maps to native Python objects (None, bool, int,
// float, str, list, dict); dicts rely on Python's insertion-ordered keys.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "binjson/avro.hpp"
#include "binjson/codec.hpp"
#include "binjson/error.hpp"
#include "binjson/formats.hpp"
#include "binjson/intcodec.hpp"
#include "binjson/value.hpp"

namespace py = pybind11;
using namespace binjson;

namespace {

JsonValue from_py(const py::handle& obj) {
  if (obj.is_none()) return JsonValue(nullptr);
  if (py::isinstance<py::bool_>(obj)) return JsonValue(obj.cast<bool>());
  if (py::isinstance<py::int_>(obj)) {
    try {
      return JsonValue(obj.cast<std::int64_t>());
    } catch (const py::cast_error&) {
      throw Error(Errc::RangeError, "integer exceeds signed 64 bits");
    }
  }
  if (py::isinstance<py::float_>(obj)) return JsonValue(obj.cast<double>());
  if (py::isinstance<py::str>(obj)) return JsonValue(obj.cast<std::string>());
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    JsonValue::Array items;
    for (const auto& item : obj) items.push_back(from_py(item));
    return JsonValue(std::move(items));
  }
  if (py::isinstance<py::dict>(obj)) {
    JsonValue::Object entries;
    for (const auto& [key, item] : obj.cast<py::dict>())
      entries.emplace_back(key.cast<std::string>(), from_py(item));
    return JsonValue(std::move(entries));
  }
  throw Error(Errc::Unsupported, "value is not JSON-compatible");
}

py::object to_py(const JsonValue& v) {
  switch (v.kind()) {
    case JsonValue::Kind::Null: return py::none();
    case JsonValue::Kind::Bool: return py::bool_(v.as_bool());
    case JsonValue::Kind::Int: return py::int_(v.as_int());
    case JsonValue::Kind::Float: return py::float_(v.as_float());
    case JsonValue::Kind::Str: return py::str(v.as_str());
    case JsonValue::Kind::Arr: {
      py::list out;
      for (const auto& item : v.as_arr()) out.append(to_py(item));
      return out;
    }
    case JsonValue::Kind::Obj: {
      py::dict out;
      for (const auto& [key, item] : v.as_obj())
        out[py::str(key)] = to_py(item);
      return out;
    }
  }
  return py::none();
}

FormatId format_arg(const std::string& token) {
  auto f = format_from_token(token);
  if (!f) throw Error(Errc::Unsupported, "unknown format \"" + token + "\"");
  return *f;
}

CodecOptions options_arg(const std::optional<std::string>& schema,
                         const std::optional<std::string>& reader,
                         bool shared_names, bool shared_values,
                         bool float32) {
  CodecOptions options;
  options.smile.shared_names = shared_names;
  options.smile.shared_values = shared_values;
  options.smile.use_float32 = float32;
  if (schema) options.schema = avro_parse_schema_text(*schema);
  if (reader) options.reader = avro_parse_schema_text(*reader);
  return options;
}

}  // namespace

PYBIND11_MODULE(_binjson, m) {
  m.doc() = "multi-format binary JSON toolkit";

  py::register_exception<Error>(m, "CodecError");

  m.def(
      "encode",
      [](const std::string& format, const py::object& doc,
         const std::optional<std::string>& schema, bool shared_names,
         bool shared_values, bool float32) {
        auto bytes = encode(format_arg(format), from_py(doc),
                            options_arg(schema, std::nullopt, shared_names,
                                        shared_values, float32));
        return py::bytes(reinterpret_cast<const char*>(bytes.data()),
                         bytes.size());
      },
      py::arg("format"), py::arg("doc"), py::arg("schema") = py::none(),
      py::arg("smile_shared_names") = true,
      py::arg("smile_shared_values") = false,
      py::arg("smile_float32") = false,
      "Encode a JSON-compatible value; returns bytes.");

  m.def(
      "decode",
      [](const std::string& format, const py::bytes& data,
         const std::optional<std::string>& schema,
         const std::optional<std::string>& reader) {
        std::string buf = data;
        return to_py(decode(format_arg(format),
                            reinterpret_cast<const std::uint8_t*>(buf.data()),
                            buf.size(),
                            options_arg(schema, reader, true, false, false)));
      },
      py::arg("format"), py::arg("data"), py::arg("schema") = py::none(),
      py::arg("reader_schema") = py::none(),
      "Decode one document; raises CodecError on malformed input.");

  m.def("parse_json",
        [](const std::string& text) { return to_py(parse_json(text)); });
  m.def("dump_json",
        [](const py::object& doc) { return dump_json(from_py(doc)); });

  m.def("leb128_encode_unsigned", [](std::uint64_t n) {
    auto bytes = leb128_encode_unsigned(n);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()),
                     bytes.size());
  });
  m.def("leb128_decode_unsigned", [](const py::bytes& data) {
    std::string buf = data;
    return leb128_decode_unsigned(
        reinterpret_cast<const std::uint8_t*>(buf.data()), buf.size());
  });
  m.def("leb128_encode_signed_twos", [](std::int64_t n, int width) {
    auto bytes = leb128_encode_signed_twos(n, width);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()),
                     bytes.size());
  });
  m.def("zigzag_encode", &zigzag_encode, py::arg("n"), py::arg("width"));
  m.def("zigzag_decode", &zigzag_decode, py::arg("u"), py::arg("width"));

  m.def(
      "check_compat",
      [](const std::string& old_schema, const std::string& new_schema) {
        auto verdict = avro_check_compat(*avro_parse_schema_text(old_schema),
                                         *avro_parse_schema_text(new_schema));
        return py::make_tuple(compatibility_name(verdict.level),
                              verdict.reasons);
      },
      py::arg("old_schema"), py::arg("new_schema"),
      "Classify a schema change; returns (level, reasons).");

  m.def(
      "compare_sizes",
      [](const py::object& doc, const std::optional<std::string>& schema) {
        JsonValue v = from_py(doc);
        CodecOptions options;
        options.smile = smile_fixture_profile();
        if (schema) options.schema = avro_parse_schema_text(*schema);
        py::dict out;
        for (FormatId f : all_formats()) {
          if (f == FormatId::AvroBinary && !options.schema) continue;
          out[py::str(format_name(f))] =
              py::int_(encode(f, v, options).size());
        }
        return out;
      },
      py::arg("doc"), py::arg("schema") = py::none(),
      "Encoded byte count per format.");
}

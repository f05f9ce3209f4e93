#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace binjson {

// In-memory JSON document. Object entries keep insertion order and keys are
// unique within one object. Int holds anything representable in signed 64
// bits; other numeric literals become Float. Float is never NaN or infinity.
class JsonValue {
 public:
  enum class Kind { Null, Bool, Int, Float, Str, Arr, Obj };

  using Array = std::vector<JsonValue>;
  using Object = std::vector<std::pair<std::string, JsonValue>>;
  using Storage = std::variant<std::nullptr_t, bool, std::int64_t, double,
                               std::string, Array, Object>;

  JsonValue() : v_(nullptr) {}
  JsonValue(std::nullptr_t) : v_(nullptr) {}
  JsonValue(bool b) : v_(b) {}
  JsonValue(std::int64_t n) : v_(n) {}
  JsonValue(int n) : v_(static_cast<std::int64_t>(n)) {}
  JsonValue(double d) : v_(d) {}
  JsonValue(const char* s) : v_(std::string(s)) {}
  JsonValue(std::string s) : v_(std::move(s)) {}
  JsonValue(Array a) : v_(std::move(a)) {}
  JsonValue(Object o) : v_(std::move(o)) {}

  Kind kind() const { return static_cast<Kind>(v_.index()); }

  bool is_null() const { return kind() == Kind::Null; }
  bool is_bool() const { return kind() == Kind::Bool; }
  bool is_int() const { return kind() == Kind::Int; }
  bool is_float() const { return kind() == Kind::Float; }
  bool is_str() const { return kind() == Kind::Str; }
  bool is_arr() const { return kind() == Kind::Arr; }
  bool is_obj() const { return kind() == Kind::Obj; }

  bool as_bool() const { return std::get<bool>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_float() const { return std::get<double>(v_); }
  const std::string& as_str() const { return std::get<std::string>(v_); }
  const Array& as_arr() const { return std::get<Array>(v_); }
  Array& as_arr() { return std::get<Array>(v_); }
  const Object& as_obj() const { return std::get<Object>(v_); }
  Object& as_obj() { return std::get<Object>(v_); }

  // Null lookup helper: returns nullptr when the key is absent.
  const JsonValue* find(const std::string& key) const;

  friend bool operator==(const JsonValue& a, const JsonValue& b) {
    return a.v_ == b.v_;
  }
  friend bool operator!=(const JsonValue& a, const JsonValue& b) {
    return !(a == b);
  }

 private:
  Storage v_;
};

// Structural equality: kinds must match exactly (Int(n) != Float(n) even when
// numerically equal) and object key order is significant.
inline bool canon_eq(const JsonValue& a, const JsonValue& b) { return a == b; }

// Parses UTF-8 JSON text (RFC 8259). Object key order is preserved.
// Throws Error{SyntaxError, offset} on malformed input, Error{DuplicateKey}
// on repeated object keys, Error{RangeError} on integers above signed-64.
JsonValue parse_json(const std::string& text);

// Serializes a JsonValue back to compact JSON text. Floats use the shortest
// round-trippable decimal form and always carry a '.' or exponent so the
// Int/Float distinction survives a text round-trip.
std::string dump_json(const JsonValue& value);

// Loads and parses a JSON document from a file.
JsonValue load_json_file(const std::string& path);

}  // namespace binjson

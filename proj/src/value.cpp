#include "binjson/value.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "binjson/error.hpp"

namespace binjson {

const JsonValue* JsonValue::find(const std::string& key) const {
  for (const auto& [k, v] : as_obj())
    if (k == key) return &v;
  return nullptr;
}

namespace {

// SAX handler building a JsonValue while preserving object key order and
// rejecting duplicate keys and unsigned values above the signed-64 range.
class Builder : public nlohmann::json_sax<nlohmann::json> {
 public:
  JsonValue take() { return std::move(root_); }

  bool null() override { return value(JsonValue(nullptr)); }
  bool boolean(bool b) override { return value(JsonValue(b)); }
  bool number_integer(number_integer_t n) override {
    return value(JsonValue(static_cast<std::int64_t>(n)));
  }
  bool number_unsigned(number_unsigned_t n) override {
    if (n > static_cast<number_unsigned_t>(
                std::numeric_limits<std::int64_t>::max()))
      throw Error(Errc::RangeError,
                  "integer " + std::to_string(n) + " exceeds signed 64 bits");
    return value(JsonValue(static_cast<std::int64_t>(n)));
  }
  bool number_float(number_float_t d, const string_t&) override {
    return value(JsonValue(static_cast<double>(d)));
  }
  bool string(string_t& s) override { return value(JsonValue(s)); }
  bool binary(binary_t&) override { return false; }

  bool start_object(std::size_t) override {
    stack_.push_back(JsonValue(JsonValue::Object{}));
    return true;
  }
  bool key(string_t& k) override {
    JsonValue& obj = stack_.back();
    if (obj.find(k) != nullptr)
      throw Error(Errc::DuplicateKey, "repeated object key \"" + k + "\"");
    pending_keys_.push_back(k);
    return true;
  }
  bool end_object() override { return close(); }

  bool start_array(std::size_t) override {
    stack_.push_back(JsonValue(JsonValue::Array{}));
    return true;
  }
  bool end_array() override { return close(); }

  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    // nlohmann reports 1-based character positions; convert to byte offsets.
    throw Error(Errc::SyntaxError, ex.what(),
                position == 0 ? 0 : position - 1);
  }

 private:
  bool value(JsonValue v) {
    if (stack_.empty()) {
      root_ = std::move(v);
      return true;
    }
    JsonValue& top = stack_.back();
    if (top.is_arr()) {
      top.as_arr().push_back(std::move(v));
    } else {
      top.as_obj().emplace_back(std::move(pending_keys_.back()), std::move(v));
      pending_keys_.pop_back();
    }
    return true;
  }

  bool close() {
    JsonValue done = std::move(stack_.back());
    stack_.pop_back();
    return value(std::move(done));
  }

  JsonValue root_;
  std::vector<JsonValue> stack_;
  std::vector<std::string> pending_keys_;
};

void dump_escaped(const std::string& s, std::string& out) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

void dump(const JsonValue& v, std::string& out) {
  switch (v.kind()) {
    case JsonValue::Kind::Null:
      out += "null";
      break;
    case JsonValue::Kind::Bool:
      out += v.as_bool() ? "true" : "false";
      break;
    case JsonValue::Kind::Int:
      out += std::to_string(v.as_int());
      break;
    case JsonValue::Kind::Float: {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof buf, v.as_float());
      std::string text(buf, res.ptr);
      // Keep the Float kind recoverable from the text form.
      if (text.find('.') == std::string::npos &&
          text.find('e') == std::string::npos &&
          text.find("inf") == std::string::npos)
        text += ".0";
      out += text;
      break;
    }
    case JsonValue::Kind::Str:
      dump_escaped(v.as_str(), out);
      break;
    case JsonValue::Kind::Arr: {
      out += '[';
      bool first = true;
      for (const auto& item : v.as_arr()) {
        if (!first) out += ',';
        first = false;
        dump(item, out);
      }
      out += ']';
      break;
    }
    case JsonValue::Kind::Obj: {
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.as_obj()) {
        if (!first) out += ',';
        first = false;
        dump_escaped(key, out);
        out += ':';
        dump(item, out);
      }
      out += '}';
      break;
    }
  }
}

}  // namespace

JsonValue parse_json(const std::string& text) {
  Builder builder;
  nlohmann::json::sax_parse(text, &builder);
  return builder.take();
}

std::string dump_json(const JsonValue& value) {
  std::string out;
  dump(value, out);
  return out;
}

JsonValue load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::SyntaxError, "cannot open file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

}  // namespace binjson

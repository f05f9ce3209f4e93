// binjson: convert documents between binary JSON formats, inspect annotated
// hexdumps, compare encoded sizes, and check Avro schema compatibility.
//
// Exit codes: 0 success (Full for check-compat), 1 codec error, 2 usage or
// parse error, 3 backward-only, 4 forward-only, 5 incompatible.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "binjson/avro.hpp"
#include "binjson/codec.hpp"
#include "binjson/error.hpp"
#include "binjson/value.hpp"

namespace {

using namespace binjson;

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Truncated, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string& s = buf.str();
  return {s.begin(), s.end()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Truncated, "cannot open " + path);
  out.write(reinterpret_cast<const char*>(b.data()),
            static_cast<std::streamsize>(b.size()));
}

// "json" or a binary format; nullopt means JSON text.
std::optional<FormatId> parse_format_token(const std::string& token) {
  if (token == "json") return std::nullopt;
  auto f = format_from_token(token);
  if (!f)
    throw CLI::ValidationError("unknown format \"" + token + "\"");
  return f;
}

std::optional<FormatId> infer_format(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return std::nullopt;
  auto f = format_from_extension(path);
  if (!f)
    throw CLI::ValidationError("cannot infer a format from \"" + path +
                               "\"; pass --from/--to");
  return f;
}

bool color_enabled() {
  const char* no_color = std::getenv("NO_COLOR");
  return no_color == nullptr || no_color[0] == '\0';
}

struct ConvertArgs {
  std::string input;
  std::string out;
  std::string from;
  std::string to;
  std::string schema;
  std::string reader;
  bool smile_no_shared_names = false;
  bool smile_shared_values = false;
  bool smile_float32 = false;
};

CodecOptions codec_options(const ConvertArgs& args) {
  CodecOptions options;
  options.smile.shared_names = !args.smile_no_shared_names;
  options.smile.shared_values = args.smile_shared_values;
  options.smile.use_float32 = args.smile_float32;
  if (!args.schema.empty())
    options.schema = avro_load_schema_file(args.schema);
  if (!args.reader.empty())
    options.reader = avro_load_schema_file(args.reader);
  return options;
}

int cmd_convert(const ConvertArgs& args) {
  auto from = args.from.empty() ? infer_format(args.input)
                                : parse_format_token(args.from);
  auto to = args.to.empty() ? infer_format(args.out)
                            : parse_format_token(args.to);
  CodecOptions options = codec_options(args);
  JsonValue doc;
  if (from) {
    auto bytes = read_file(args.input);
    doc = decode(*from, bytes.data(), bytes.size(), options);
  } else {
    std::ostringstream buf;
    std::ifstream in(args.input, std::ios::binary);
    if (!in) throw Error(Errc::Truncated, "cannot open " + args.input);
    buf << in.rdbuf();
    doc = parse_json(buf.str());
  }
  if (to) {
    if (*to == FormatId::AvroBinary && !options.schema)
      throw CLI::ValidationError("--schema is required for Avro output");
    write_file(args.out, encode(*to, doc, options));
  } else {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw Error(Errc::Truncated, "cannot open " + args.out);
    out << dump_json(doc) << "\n";
  }
  return 0;
}

void print_hex_line(const std::vector<std::uint8_t>& bytes, std::size_t start,
                    std::size_t count) {
  std::printf("%08zx  ", start);
  for (std::size_t i = 0; i < 16; ++i) {
    if (i < count)
      std::printf("%02x ", bytes[start + i]);
    else
      std::printf("   ");
    if (i == 7) std::printf(" ");
  }
  std::printf("\n");
}

int cmd_inspect(const std::string& input, const std::string& format_token,
                const std::string& schema_path) {
  auto bytes = read_file(input);
  auto format = format_token.empty() ? infer_format(input)
                                     : parse_format_token(format_token);
  if (!format)
    throw CLI::ValidationError("inspect works on binary formats only");
  CodecOptions options;
  if (!schema_path.empty()) options.schema = avro_load_schema_file(schema_path);
  SpanRecorder recorder;
  Warnings warnings;
  std::string failure;
  try {
    decode(*format, bytes.data(), bytes.size(), options, &recorder, &warnings);
  } catch (const Error& e) {
    failure = e.what();
  }
  bool color = color_enabled();
  const char* dim = color ? "\x1b[2m" : "";
  const char* label_style = color ? "\x1b[36m" : "";
  const char* reset = color ? "\x1b[0m" : "";

  std::size_t span_index = 0;
  const auto& spans = recorder.spans();
  for (std::size_t line = 0; line < bytes.size(); line += 16) {
    std::size_t count = std::min<std::size_t>(16, bytes.size() - line);
    std::printf("%s", dim);
    print_hex_line(bytes, line, count);
    std::printf("%s", reset);
    while (span_index < spans.size() &&
           spans[span_index].offset < line + count) {
      const auto& s = spans[span_index];
      std::printf("  %s[%04zx +%zu] %s%s", label_style, s.offset, s.length,
                  s.label.c_str(), reset);
      if (!s.decoded.empty()) std::printf(" = %s", s.decoded.c_str());
      std::printf("\n");
      ++span_index;
    }
  }
  if (bytes.empty()) std::printf("(empty file)\n");
  for (const auto& w : warnings) std::printf("warning: %s\n", w.c_str());
  if (!failure.empty()) {
    std::printf("error: %s\n", failure.c_str());
    return 1;
  }
  return 0;
}

int cmd_compare(const std::string& input, const std::string& schema_path) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw Error(Errc::Truncated, "cannot open " + input);
  std::ostringstream buf;
  buf << in.rdbuf();
  JsonValue doc = parse_json(buf.str());

  CodecOptions options;
  options.smile = smile_fixture_profile();
  if (!schema_path.empty()) options.schema = avro_load_schema_file(schema_path);

  // Rows sorted by format name; per-format errors become table entries.
  std::vector<std::pair<std::string, std::string>> rows;
  for (FormatId f : all_formats()) {
    if (f == FormatId::AvroBinary && !options.schema) continue;
    std::string cell;
    try {
      cell = std::to_string(encode(f, doc, options).size());
    } catch (const Error& e) {
      cell = std::string("error: ") + errc_name(e.kind());
    }
    rows.emplace_back(format_name(f), cell);
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [name, cell] : rows)
    std::printf("%s\t%s\n", name.c_str(), cell.c_str());
  return 0;
}

int cmd_check_compat(const std::string& old_path, const std::string& new_path,
                     const std::vector<std::string>& transitive) {
  AvroSchemaPtr old_schema;
  AvroSchemaPtr new_schema;
  std::vector<AvroSchemaPtr> others;
  try {
    old_schema = avro_load_schema_file(old_path);
    new_schema = avro_load_schema_file(new_path);
    for (const auto& p : transitive) others.push_back(avro_load_schema_file(p));
  } catch (const Error& e) {
    std::fprintf(stderr, "schema error: %s\n", e.what());
    return 2;
  }

  auto report = [](const std::string& old_name, const std::string& new_name,
                   const CompatibilityVerdict& verdict) {
    std::printf("%s -> %s: %s\n", old_name.c_str(), new_name.c_str(),
                compatibility_name(verdict.level));
    for (const auto& reason : verdict.reasons)
      std::printf("  %s\n", reason.c_str());
  };

  CompatibilityVerdict verdict = avro_check_compat(*old_schema, *new_schema);
  report(old_path, new_path, verdict);

  Compatibility worst = verdict.level;
  auto rank = [](Compatibility c) {
    switch (c) {
      case Compatibility::Full: return 0;
      case Compatibility::Backward: return 1;
      case Compatibility::Forward: return 2;
      case Compatibility::Incompatible: return 3;
    }
    return 3;
  };
  for (std::size_t i = 0; i < others.size(); ++i) {
    CompatibilityVerdict v = avro_check_compat(*others[i], *new_schema);
    report(transitive[i], new_path, v);
    if (rank(v.level) > rank(worst)) worst = v.level;
  }

  switch (worst) {
    case Compatibility::Full: return 0;
    case Compatibility::Backward: return 3;
    case Compatibility::Forward: return 4;
    case Compatibility::Incompatible: return 5;
  }
  return 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"binary JSON toolkit"};
  app.require_subcommand(1);

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "convert between formats");
  convert->add_option("input", conv.input, "input file")->required();
  convert->add_option("--out", conv.out, "output file")->required();
  convert->add_option("--from", conv.from,
                      "input format (json|msgpack|cbor|ubjson|bson|smile|avro)");
  convert->add_option("--to", conv.to, "output format");
  convert->add_option("--schema", conv.schema, "Avro writer schema (.avsc)");
  convert->add_option("--reader-schema", conv.reader,
                      "Avro reader schema for resolved decoding");
  convert->add_flag("--smile-no-shared-names", conv.smile_no_shared_names,
                    "disable Smile property-name back-references");
  convert->add_flag("--smile-shared-values", conv.smile_shared_values,
                    "enable Smile string-value back-references");
  convert->add_flag("--smile-float32", conv.smile_float32,
                    "encode Smile floats as binary32");

  std::string ins_input, ins_format, ins_schema;
  auto* inspect = app.add_subcommand("inspect", "annotated hexdump");
  inspect->add_option("input", ins_input, "input file")->required();
  inspect->add_option("--format", ins_format, "format override");
  inspect->add_option("--schema", ins_schema, "Avro writer schema");

  std::string cmp_input, cmp_schema;
  auto* compare = app.add_subcommand("compare", "per-format size table");
  compare->add_option("input", cmp_input, "input JSON file")->required();
  compare->add_option("--schema", cmp_schema, "Avro schema (adds an Avro row)");

  std::string old_path, new_path;
  std::vector<std::string> transitive;
  auto* check = app.add_subcommand("check-compat",
                                   "classify an Avro schema change");
  check->add_option("old", old_path, "old schema")->required();
  check->add_option("new", new_path, "new schema")->required();
  check->add_option("--transitive", transitive,
                    "additional older schemas to check against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (convert->parsed()) return cmd_convert(conv);
    if (inspect->parsed()) return cmd_inspect(ins_input, ins_format,
                                              ins_schema);
    if (compare->parsed()) return cmd_compare(cmp_input, cmp_schema);
    if (check->parsed())
      return cmd_check_compat(old_path, new_path, transitive);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const binjson::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    // Missing schemas and malformed schemas are usage-level failures.
    if (e.kind() == binjson::Errc::SchemaRequired ||
        e.kind() == binjson::Errc::SchemaSyntax)
      return 2;
    return 1;
  }
  return 2;
}

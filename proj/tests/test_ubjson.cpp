#include <doctest.h>

#include "binjson/error.hpp"
#include "binjson/formats.hpp"
#include "helpers.hpp"

using namespace binjson;
using testutil::from_hex;
using testutil::to_hex;

namespace {
JsonValue decode_hex(const std::string& hex) {
  auto bytes = from_hex(hex);
  return ubj_decode(bytes.data(), bytes.size());
}
}  // namespace

TEST_CASE("scalar encodings") {
  CHECK(to_hex(ubj_encode(JsonValue(nullptr))) == "5a");
  CHECK(to_hex(ubj_encode(JsonValue(true))) == "54");
  CHECK(to_hex(ubj_encode(JsonValue(false))) == "46");
  CHECK(to_hex(ubj_encode(JsonValue(5))) == "69 05");
  CHECK(to_hex(ubj_encode(JsonValue(200))) == "55 c8");
  CHECK(to_hex(ubj_encode(JsonValue(-25200))) == "49 9d 90");
  CHECK(to_hex(ubj_encode(JsonValue(100000))) == "6c 00 01 86 a0");
  CHECK(to_hex(ubj_encode(JsonValue(std::int64_t{1} << 40))) ==
        "4c 00 00 01 00 00 00 00 00");
  CHECK(to_hex(ubj_encode(JsonValue(1.0))) ==
        "44 3f f0 00 00 00 00 00 00");
  CHECK(to_hex(ubj_encode(JsonValue("a"))) == "53 69 01 61");
}

TEST_CASE("containers are bracketed without lengths") {
  CHECK(to_hex(ubj_encode(parse_json("[true]"))) == "5b 54 5d");
  CHECK(to_hex(ubj_encode(parse_json("[]"))) == "5b 5d");
  CHECK(to_hex(ubj_encode(parse_json("{}"))) == "7b 7d");
  // Keys are length-prefixed strings without the 'S' marker.
  CHECK(to_hex(ubj_encode(parse_json(R"({"a":true})"))) ==
        "7b 69 01 61 54 7d");
}

TEST_CASE("every marker byte is printable ASCII") {
  testutil::DocGenerator gen(31);
  for (int i = 0; i < 50; ++i) {
    auto bytes = ubj_encode(gen.value());
    // Walk markers via a decode with spans: simpler proxy — check the first
    // byte and every container frame byte are printable.
    CHECK(bytes[0] >= 0x20);
    CHECK(bytes[0] < 0x7F);
  }
}

TEST_CASE("decode dispatch") {
  CHECK(decode_hex("5a").is_null());
  CHECK(decode_hex("43 61").as_str() == "a");
  CHECK(decode_hex("54").as_bool());
  CHECK(decode_hex("55 c8").as_int() == 200);
  CHECK(decode_hex("44 3f f0 00 00 00 00 00 00").as_float() == 1.0);
  CHECK(decode_hex("64 3f 80 00 00").as_float() == 1.0);  // float32 widened
  // no-op markers are skipped
  CHECK(decode_hex("5b 4e 54 4e 5d").as_arr().size() == 1);
}

TEST_CASE("high-precision numbers decode when representable") {
  // 'H' + length 2 + "42"
  CHECK(decode_hex("48 69 02 34 32").as_int() == 42);
  // "2.5"
  CHECK(decode_hex("48 69 03 32 2e 35").as_float() == 2.5);
  // An integer beyond signed-64
  CHECK_THROWS_WITH_AS(
      decode_hex("48 69 14 39 39 39 39 39 39 39 39 39 39 39 39 39 39 39 39 "
                 "39 39 39 39"),
      doctest::Contains("Overflow"), Error);
}

TEST_CASE("decode errors") {
  CHECK_THROWS_WITH_AS(decode_hex("51"), doctest::Contains("BadTag"), Error);
  CHECK_THROWS_WITH_AS(decode_hex("69"), doctest::Contains("Truncated"),
                       Error);
  CHECK_THROWS_WITH_AS(decode_hex("5a 5a"),
                       doctest::Contains("TrailingBytes"), Error);
  CHECK_THROWS_WITH_AS(decode_hex("53 69 01 ff"),
                       doctest::Contains("InvalidUtf8"), Error);
  CHECK_THROWS_WITH_AS(decode_hex("53 69 ff 61"),
                       doctest::Contains("LengthMismatch"), Error);
}

TEST_CASE("round-trip identity over a generated corpus") {
  testutil::DocGenerator gen(37);
  for (int i = 0; i < 500; ++i) {
    JsonValue doc = gen.value();
    auto bytes = ubj_encode(doc);
    CHECK(canon_eq(ubj_decode(bytes.data(), bytes.size()), doc));
  }
}

TEST_CASE("canonical document encodes to 151 bytes and round-trips") {
  JsonValue doc = testutil::canonical_doc();
  auto bytes = ubj_encode(doc);
  CHECK(bytes.size() == 151);
  CHECK(bytes == testutil::read_file(testutil::fixture_path("test.ubj")));
  CHECK(canon_eq(ubj_decode(bytes.data(), bytes.size()), doc));
}

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
  return mp_decode(bytes.data(), bytes.size());
}
}  // namespace

TEST_CASE("scalar encodings") {
  CHECK(to_hex(mp_encode(JsonValue(nullptr))) == "c0");
  CHECK(to_hex(mp_encode(JsonValue(false))) == "c2");
  CHECK(to_hex(mp_encode(JsonValue(true))) == "c3");
  CHECK(to_hex(mp_encode(JsonValue(5))) == "05");
  CHECK(to_hex(mp_encode(JsonValue(-3))) == "fd");
  CHECK(to_hex(mp_encode(JsonValue("ab"))) == "a2 61 62");
  CHECK(to_hex(mp_encode(JsonValue(JsonValue::Array{}))) == "90");
  CHECK(to_hex(mp_encode(JsonValue(-25200))) == "d1 9d 90");
}

TEST_CASE("smallest width is chosen for every integer") {
  CHECK(to_hex(mp_encode(JsonValue(127))) == "7f");
  CHECK(to_hex(mp_encode(JsonValue(128))) == "cc 80");
  CHECK(to_hex(mp_encode(JsonValue(255))) == "cc ff");
  CHECK(to_hex(mp_encode(JsonValue(256))) == "cd 01 00");
  CHECK(to_hex(mp_encode(JsonValue(65536))) == "ce 00 01 00 00");
  CHECK(to_hex(mp_encode(JsonValue(std::int64_t{1} << 32))) ==
        "cf 00 00 00 01 00 00 00 00");
  CHECK(to_hex(mp_encode(JsonValue(-32))) == "e0");
  CHECK(to_hex(mp_encode(JsonValue(-33))) == "d0 df");
  CHECK(to_hex(mp_encode(JsonValue(-129))) == "d1 ff 7f");
  CHECK(to_hex(mp_encode(JsonValue(-32769))) == "d2 ff ff 7f ff");
  CHECK(to_hex(mp_encode(JsonValue(std::int64_t{-2147483649}))) ==
        "d3 ff ff ff ff 7f ff ff ff");
}

TEST_CASE("floats always encode as float64") {
  CHECK(to_hex(mp_encode(JsonValue(1.0))) == "cb 3f f0 00 00 00 00 00 00");
}

TEST_CASE("decode dispatch") {
  CHECK(decode_hex("c0").is_null());
  CHECK(decode_hex("cd c4 df").as_int() == 50399);
  CHECK(decode_hex("cc 05").as_int() == 5);  // non-minimal width accepted
  CHECK(decode_hex("ca 3f 80 00 00").as_float() == 1.0);
  CHECK(decode_hex("93 01 02 03").as_arr().size() == 3);
  JsonValue obj = decode_hex("81 a1 61 c3");
  CHECK(obj.find("a")->as_bool());
}

TEST_CASE("decode errors") {
  CHECK_THROWS_WITH_AS(decode_hex("c1"), doctest::Contains("BadTag"), Error);
  CHECK_THROWS_WITH_AS(decode_hex(""), doctest::Contains("Truncated"), Error);
  CHECK_THROWS_WITH_AS(decode_hex("cd 01"), doctest::Contains("Truncated"),
                       Error);
  // uint64 above the signed range
  CHECK_THROWS_WITH_AS(decode_hex("cf ff ff ff ff ff ff ff ff"),
                       doctest::Contains("Overflow"), Error);
  // bin and ext families are not JSON-compatible
  CHECK_THROWS_WITH_AS(decode_hex("c4 01 00"),
                       doctest::Contains("Unsupported"), Error);
  CHECK_THROWS_WITH_AS(decode_hex("d6 ff 00 00 00 00"),
                       doctest::Contains("Unsupported"), Error);
  CHECK_THROWS_WITH_AS(decode_hex("c0 c0"),
                       doctest::Contains("TrailingBytes"), Error);
  CHECK_THROWS_WITH_AS(decode_hex("a2 61 ff"),
                       doctest::Contains("InvalidUtf8"), Error);
}

TEST_CASE("round-trip identity over a generated corpus") {
  testutil::DocGenerator gen(101);
  for (int i = 0; i < 500; ++i) {
    JsonValue doc = gen.value();
    auto bytes = mp_encode(doc);
    CHECK(canon_eq(mp_decode(bytes.data(), bytes.size()), doc));
  }
}

TEST_CASE("re-encoding a decoded document is never longer") {
  // Decode a deliberately wide encoding, then re-encode minimally.
  auto wide = from_hex("cd 00 05");
  JsonValue v = mp_decode(wide.data(), wide.size());
  CHECK(mp_encode(v).size() <= wide.size());
}

TEST_CASE("canonical document encodes to 118 bytes and round-trips") {
  JsonValue doc = testutil::canonical_doc();
  auto bytes = mp_encode(doc);
  CHECK(bytes.size() == 118);
  CHECK(bytes == testutil::read_file(testutil::fixture_path("test.mp")));
  CHECK(canon_eq(mp_decode(bytes.data(), bytes.size()), doc));
}

#!/usr/bin/env python3
"""End-to-end tests for the binjson command-line tool.

Usage: test_cli.py <path-to-binjson-binary>
Run from the repository root so the fixtures/ directory is reachable.
"""

import json
import os
import subprocess
import sys
import tempfile

CLI = sys.argv[1] if len(sys.argv) > 1 else "build/binjson"
FIXTURES = os.environ.get("BINJSON_FIXTURES", "fixtures")

failures = 0


def check(name, condition, detail=""):
    global failures
    if condition:
        print(f"ok   {name}")
    else:
        failures += 1
        print(f"FAIL {name} {detail}")


def run(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([CLI, *args], capture_output=True, text=True,
                          env=env)


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


def main():
    canonical = json.load(open(os.path.join(FIXTURES, "test.json")))
    schema = os.path.join(FIXTURES, "test.avsc")

    with tempfile.TemporaryDirectory() as tmp:
        # convert: JSON -> MessagePack inferred from the .mp extension
        out_mp = os.path.join(tmp, "doc.mp")
        r = run("convert", os.path.join(FIXTURES, "test.json"),
                "--out", out_mp)
        check("convert json->mp exits 0", r.returncode == 0, r.stderr)
        check("convert json->mp is 118 bytes",
              os.path.getsize(out_mp) == 118)
        check("convert json->mp matches the golden fixture",
              read_bytes(out_mp) ==
              read_bytes(os.path.join(FIXTURES, "test.mp")))

        # convert back to JSON text; the document must survive unchanged
        out_json = os.path.join(tmp, "doc.json")
        r = run("convert", out_mp, "--out", out_json)
        check("convert mp->json exits 0", r.returncode == 0, r.stderr)
        check("mp->json round-trips the document",
              json.load(open(out_json)) == canonical)

        # explicit --from/--to override the extension
        out_any = os.path.join(tmp, "doc.bin")
        r = run("convert", os.path.join(FIXTURES, "test.json"),
                "--out", out_any, "--from", "json", "--to", "cbor")
        check("explicit --to cbor exits 0", r.returncode == 0, r.stderr)
        check("explicit --to cbor matches the golden fixture",
              read_bytes(out_any) ==
              read_bytes(os.path.join(FIXTURES, "test.cbor")))

        # Smile fixture flags reproduce the golden Smile bytes
        out_smile = os.path.join(tmp, "doc.smile")
        r = run("convert", os.path.join(FIXTURES, "test.json"),
                "--out", out_smile, "--smile-no-shared-names",
                "--smile-float32")
        check("smile fixture flags exit 0", r.returncode == 0, r.stderr)
        check("smile fixture flags match the golden fixture",
              read_bytes(out_smile) ==
              read_bytes(os.path.join(FIXTURES, "test.smile")))

        # Avro output requires a writer schema
        out_avro = os.path.join(tmp, "doc.avro")
        r = run("convert", os.path.join(FIXTURES, "test.json"),
                "--out", out_avro)
        check("avro without --schema exits 2", r.returncode == 2, r.stderr)
        r = run("convert", os.path.join(FIXTURES, "test.json"),
                "--out", out_avro, "--schema", schema)
        check("avro with --schema exits 0", r.returncode == 0, r.stderr)
        check("avro output matches the golden fixture",
              read_bytes(out_avro) ==
              read_bytes(os.path.join(FIXTURES, "test.avro")))

        # corrupt input is a codec error (exit 1)
        bad = os.path.join(tmp, "bad.mp")
        with open(bad, "wb") as f:
            f.write(b"\xc1")
        r = run("convert", bad, "--out", out_json)
        check("corrupt input exits 1", r.returncode == 1, r.stderr)
        check("corrupt input names the error kind", "BadTag" in r.stderr,
              r.stderr)

        # unknown format token is a usage error
        r = run("convert", os.path.join(FIXTURES, "test.json"),
                "--out", out_any, "--to", "xml")
        check("unknown format exits 2", r.returncode == 2, r.stderr)

        # inspect: annotated hexdump; NO_COLOR strips ANSI escapes
        r = run("inspect", os.path.join(FIXTURES, "test.mp"),
                env_extra={"NO_COLOR": "1"})
        check("inspect exits 0", r.returncode == 0, r.stderr)
        check("inspect prints hexdump offsets",
              r.stdout.startswith("00000000"), r.stdout[:40])
        check("inspect annotates spans", "[0000" in r.stdout)
        check("NO_COLOR output has no escapes", "\x1b[" not in r.stdout)
        r = run("inspect", os.path.join(FIXTURES, "test.mp"),
                env_extra={"NO_COLOR": ""})
        check("empty NO_COLOR keeps color", "\x1b[" in r.stdout)

        # inspect on a corrupt file reports the error and exits 1
        r = run("inspect", bad, "--format", "msgpack",
                env_extra={"NO_COLOR": "1"})
        check("inspect on corrupt input exits 1", r.returncode == 1)
        check("inspect reports the failure", "error:" in r.stdout, r.stdout)

        # compare: tab-separated table sorted by format name
        r = run("compare", os.path.join(FIXTURES, "test.json"),
                "--schema", schema)
        check("compare exits 0", r.returncode == 0, r.stderr)
        expected = ("Avro\t56\nBSON\t223\nCBOR\t118\nMessagePack\t118\n"
                    "Smile\t127\nUBJSON\t151\n")
        check("compare table is exact", r.stdout == expected, repr(r.stdout))
        r = run("compare", os.path.join(FIXTURES, "test.json"))
        check("compare omits Avro without a schema",
              "Avro" not in r.stdout and "BSON\t223" in r.stdout, r.stdout)

        # compare reports per-format errors for unencodable documents
        scalar = os.path.join(tmp, "scalar.json")
        with open(scalar, "w") as f:
            f.write("true\n")
        r = run("compare", scalar)
        check("compare reports BSON shape errors",
              "BSON\terror: TopLevelShape" in r.stdout, r.stdout)

        # check-compat exit codes
        enum1 = os.path.join(tmp, "enum1.avsc")
        enum2 = os.path.join(tmp, "enum2.avsc")
        strings = os.path.join(tmp, "string.avsc")
        bytes_s = os.path.join(tmp, "bytes.avsc")
        with open(enum1, "w") as f:
            f.write('{"type":"enum","name":"E","symbols":["X"]}')
        with open(enum2, "w") as f:
            f.write('{"type":"enum","name":"E","symbols":["X","Y"]}')
        with open(strings, "w") as f:
            f.write('"string"')
        with open(bytes_s, "w") as f:
            f.write('"bytes"')

        r = run("check-compat", schema, schema)
        check("identical schemas exit 0", r.returncode == 0, r.stderr)
        check("identical schemas report Full", ": Full" in r.stdout, r.stdout)
        r = run("check-compat", enum1, enum2)
        check("added enum symbol exits 3", r.returncode == 3, r.stdout)
        check("added enum symbol reports Backward",
              ": Backward" in r.stdout, r.stdout)
        check("verdict explains itself", "not forward" in r.stdout, r.stdout)
        r = run("check-compat", enum2, enum1)
        check("removed enum symbol exits 4", r.returncode == 4, r.stdout)
        r = run("check-compat", strings, bytes_s)
        check("string->bytes exits 5", r.returncode == 5, r.stdout)
        # --transitive checks every older schema and keeps the worst verdict
        r = run("check-compat", enum1, enum2, "--transitive", enum2)
        check("transitive worst-of exits 3", r.returncode == 3, r.stdout)
        check("transitive prints one line per pair",
              r.stdout.count(" -> ") == 2, r.stdout)

        # malformed schema files are usage errors
        broken = os.path.join(tmp, "broken.avsc")
        with open(broken, "w") as f:
            f.write('{"type":"recccord"}')
        r = run("check-compat", broken, enum1)
        check("broken schema exits 2", r.returncode == 2, r.stderr)

    print(f"{failures} failure(s)" if failures else "all cli tests passed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Regenerate the golden fixtures under fixtures/.

Standalone reference encoders, kept deliberately independent of the C++
implementation. Run from the repository root:

    python3 scripts/make_fixtures.py
"""

import json
import struct
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


# ---------------------------------------------------------------------------
# MessagePack


def mp_encode(value):
    out = bytearray()

    def emit(v):
        nonlocal out
        if v is None:
            out.append(0xC0)
        elif isinstance(v, bool):
            out.append(0xC3 if v else 0xC2)
        elif isinstance(v, int):
            if 0 <= v <= 0x7F:
                out.append(v)
            elif -32 <= v < 0:
                out.append(0x100 + v)
            elif 0 <= v <= 0xFF:
                out += bytes([0xCC, v])
            elif 0 <= v <= 0xFFFF:
                out.append(0xCD)
                out += struct.pack(">H", v)
            elif 0 <= v <= 0xFFFFFFFF:
                out.append(0xCE)
                out += struct.pack(">I", v)
            elif v >= 0:
                out.append(0xCF)
                out += struct.pack(">Q", v)
            elif v >= -0x80:
                out.append(0xD0)
                out += struct.pack(">b", v)
            elif v >= -0x8000:
                out.append(0xD1)
                out += struct.pack(">h", v)
            elif v >= -0x80000000:
                out.append(0xD2)
                out += struct.pack(">i", v)
            else:
                out.append(0xD3)
                out += struct.pack(">q", v)
        elif isinstance(v, float):
            out.append(0xCB)
            out += struct.pack(">d", v)
        elif isinstance(v, str):
            raw = v.encode("utf-8")
            n = len(raw)
            if n < 32:
                out.append(0xA0 + n)
            elif n <= 0xFF:
                out += bytes([0xD9, n])
            elif n <= 0xFFFF:
                out.append(0xDA)
                out += struct.pack(">H", n)
            else:
                out.append(0xDB)
                out += struct.pack(">I", n)
            out += raw
        elif isinstance(v, list):
            n = len(v)
            if n < 16:
                out.append(0x90 + n)
            elif n <= 0xFFFF:
                out.append(0xDC)
                out += struct.pack(">H", n)
            else:
                out.append(0xDD)
                out += struct.pack(">I", n)
            for item in v:
                emit(item)
        elif isinstance(v, dict):
            n = len(v)
            if n < 16:
                out.append(0x80 + n)
            elif n <= 0xFFFF:
                out.append(0xDE)
                out += struct.pack(">H", n)
            else:
                out.append(0xDF)
                out += struct.pack(">I", n)
            for key, item in v.items():
                emit(key)
                emit(item)
        else:
            raise TypeError(type(v))

    emit(value)
    return bytes(out)


# ---------------------------------------------------------------------------
# CBOR


def cbor_header(major, arg):
    if arg < 24:
        return bytes([(major << 5) | arg])
    if arg <= 0xFF:
        return bytes([(major << 5) | 24, arg])
    if arg <= 0xFFFF:
        return bytes([(major << 5) | 25]) + struct.pack(">H", arg)
    if arg <= 0xFFFFFFFF:
        return bytes([(major << 5) | 26]) + struct.pack(">I", arg)
    return bytes([(major << 5) | 27]) + struct.pack(">Q", arg)


def cbor_encode(value):
    out = bytearray()

    def emit(v):
        nonlocal out
        if v is None:
            out.append(0xF6)
        elif isinstance(v, bool):
            out.append(0xF5 if v else 0xF4)
        elif isinstance(v, int):
            if v >= 0:
                out += cbor_header(0, v)
            else:
                out += cbor_header(1, -1 - v)
        elif isinstance(v, float):
            out.append(0xFB)
            out += struct.pack(">d", v)
        elif isinstance(v, str):
            raw = v.encode("utf-8")
            out += cbor_header(3, len(raw))
            out += raw
        elif isinstance(v, list):
            out += cbor_header(4, len(v))
            for item in v:
                emit(item)
        elif isinstance(v, dict):
            out += cbor_header(5, len(v))
            for key, item in v.items():
                emit(key)
                emit(item)
        else:
            raise TypeError(type(v))

    emit(value)
    return bytes(out)


# ---------------------------------------------------------------------------
# UBJSON


def ubj_int(v):
    if -0x80 <= v <= 0x7F:
        return b"i" + struct.pack(">b", v)
    if 0 <= v <= 0xFF:
        return b"U" + struct.pack(">B", v)
    if -0x8000 <= v <= 0x7FFF:
        return b"I" + struct.pack(">h", v)
    if -0x80000000 <= v <= 0x7FFFFFFF:
        return b"l" + struct.pack(">i", v)
    return b"L" + struct.pack(">q", v)


def ubj_encode(value):
    out = bytearray()

    def emit_key(k):
        nonlocal out
        raw = k.encode("utf-8")
        out += ubj_int(len(raw))
        out += raw

    def emit(v):
        nonlocal out
        if v is None:
            out += b"Z"
        elif isinstance(v, bool):
            out += b"T" if v else b"F"
        elif isinstance(v, int):
            out += ubj_int(v)
        elif isinstance(v, float):
            out += b"D" + struct.pack(">d", v)
        elif isinstance(v, str):
            raw = v.encode("utf-8")
            out += b"S"
            out += ubj_int(len(raw))
            out += raw
        elif isinstance(v, list):
            out += b"["
            for item in v:
                emit(item)
            out += b"]"
        elif isinstance(v, dict):
            out += b"{"
            for key, item in v.items():
                emit_key(key)
                emit(item)
            out += b"}"
        else:
            raise TypeError(type(v))

    emit(value)
    return bytes(out)


# ---------------------------------------------------------------------------
# BSON


def bson_document(entries):
    body = bytearray()
    for key, value in entries:
        name = key.encode("utf-8") + b"\x00"
        if isinstance(value, bool):
            body += b"\x08" + name + (b"\x01" if value else b"\x00")
        elif value is None:
            body += b"\x0a" + name
        elif isinstance(value, int):
            if -0x80000000 <= value <= 0x7FFFFFFF:
                body += b"\x10" + name + struct.pack("<i", value)
            else:
                body += b"\x12" + name + struct.pack("<q", value)
        elif isinstance(value, float):
            body += b"\x01" + name + struct.pack("<d", value)
        elif isinstance(value, str):
            raw = value.encode("utf-8") + b"\x00"
            body += b"\x02" + name + struct.pack("<i", len(raw)) + raw
        elif isinstance(value, list):
            nested = bson_document((str(i), v) for i, v in enumerate(value))
            body += b"\x04" + name + nested
        elif isinstance(value, dict):
            body += b"\x03" + name + bson_document(value.items())
        else:
            raise TypeError(type(value))
    return struct.pack("<i", len(body) + 5) + bytes(body) + b"\x00"


def bson_encode(value):
    if not isinstance(value, dict):
        raise TypeError("BSON root must be a document")
    return bson_document(value.items())


# ---------------------------------------------------------------------------
# Smile


def smile_vint(u):
    # 7 bits per byte, most-significant group first; the final byte carries
    # the low 6 bits and has its high bit set.
    out = [0x80 | (u & 0x3F)]
    u >>= 6
    while u:
        out.append(u & 0x7F)
        u >>= 7
    return bytes(reversed(out))


def smile_seven_bit(raw):
    # IEEE bit pattern emitted least-significant 7 bits first.
    bits = int.from_bytes(raw, "big")
    groups = (len(raw) * 8 + 6) // 7
    return bytes((bits >> (7 * i)) & 0x7F for i in range(groups))


def zigzag(n, width):
    return ((n << 1) ^ (n >> (width - 1))) & ((1 << width) - 1)


def smile_encode(value, shared_names=False, shared_values=False, float32=False):
    out = bytearray(b":)\n")
    out.append((0x01 if shared_names else 0) | (0x02 if shared_values else 0))
    name_table = {}
    value_table = {}

    def emit_key(k):
        nonlocal out
        raw = k.encode("utf-8")
        if shared_names and raw in name_table:
            idx = name_table[raw]
            if idx < 64:
                out.append(0x40 + idx)
            else:
                out.append(0x30 | (idx >> 8))
                out.append(idx & 0xFF)
            return
        if not raw:
            out.append(0x20)
            return
        is_ascii = all(b < 0x80 for b in raw)
        if is_ascii and len(raw) <= 64:
            out.append(0x80 + len(raw) - 1)
            out += raw
        elif not is_ascii and 2 <= len(raw) <= 57:
            out.append(0xC0 + len(raw) - 2)
            out += raw
        else:
            out.append(0x34)
            out += raw
            out.append(0xFC)
        if shared_names and len(raw) <= 64 and len(name_table) < 1024:
            name_table[raw] = len(name_table)

    def emit_str(raw, is_ascii):
        nonlocal out
        n = len(raw)
        if is_ascii:
            if n <= 32:
                out.append(0x40 + n - 1)
            elif n <= 64:
                out.append(0x60 + n - 33)
            else:
                out.append(0xE0)
                out += raw
                out.append(0xFC)
                return
        else:
            if n <= 33:
                out.append(0x80 + n - 2)
            elif n <= 65:
                out.append(0xA0 + n - 34)
            else:
                out.append(0xE4)
                out += raw
                out.append(0xFC)
                return
        out += raw

    def emit(v):
        nonlocal out
        if v is None:
            out.append(0x21)
        elif isinstance(v, bool):
            out.append(0x23 if v else 0x22)
        elif isinstance(v, int):
            if -16 <= v <= 15:
                out.append(0xC0 + (((v << 1) ^ (v >> 63)) & 0x1F))
            elif -0x80000000 <= v <= 0x7FFFFFFF:
                out.append(0x24)
                out += smile_vint(zigzag(v, 32))
            else:
                out.append(0x25)
                out += smile_vint(zigzag(v, 64))
        elif isinstance(v, float):
            if float32:
                out.append(0x28)
                out += smile_seven_bit(struct.pack(">f", v))
            else:
                out.append(0x29)
                out += smile_seven_bit(struct.pack(">d", v))
        elif isinstance(v, str):
            raw = v.encode("utf-8")
            if not raw:
                out.append(0x20)
                return
            if shared_values and len(raw) <= 64 and raw in value_table:
                idx = value_table[raw]
                if idx <= 30:
                    out.append(0x01 + idx)
                else:
                    out.append(0xEC)
                    out += struct.pack(">H", idx)
                return
            emit_str(raw, all(b < 0x80 for b in raw))
            if shared_values and len(raw) <= 64 and len(value_table) < 1024:
                value_table[raw] = len(value_table)
        elif isinstance(v, list):
            out.append(0xF8)
            for item in v:
                emit(item)
            out.append(0xF9)
        elif isinstance(v, dict):
            out.append(0xFA)
            for key, item in v.items():
                emit_key(key)
                emit(item)
            out.append(0xFB)
        else:
            raise TypeError(type(v))

    emit(value)
    return bytes(out)


# ---------------------------------------------------------------------------
# Avro binary encoding (runtime schema, no framing)


def leb128(u):
    out = bytearray()
    while True:
        byte = u & 0x7F
        u >>= 7
        if u:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def avro_varint(n, width=64):
    return leb128(zigzag(n, width))


def avro_encode(value, schema):
    out = bytearray()

    def branch_matches(v, s):
        kind = s["type"] if isinstance(s, dict) else s
        if kind == "null":
            return v is None
        if kind == "boolean":
            return isinstance(v, bool)
        if kind in ("int", "long"):
            return isinstance(v, int) and not isinstance(v, bool)
        if kind in ("float", "double"):
            return isinstance(v, (int, float)) and not isinstance(v, bool)
        if kind in ("string", "enum"):
            return isinstance(v, str)
        if kind == "array":
            return isinstance(v, list)
        if kind in ("record", "map"):
            return isinstance(v, dict)
        return False

    def emit(v, s):
        if isinstance(s, list):  # union
            for index, branch in enumerate(s):
                if branch_matches(v, branch):
                    out.extend(avro_varint(index, 32))
                    emit(v, branch)
                    return
            raise ValueError(f"no union branch for {v!r}")
        kind = s["type"] if isinstance(s, dict) else s
        if kind == "null":
            assert v is None
        elif kind == "boolean":
            out.append(0x01 if v else 0x00)
        elif kind == "int":
            out.extend(avro_varint(v, 32))
        elif kind == "long":
            out.extend(avro_varint(v, 64))
        elif kind == "float":
            out.extend(struct.pack("<f", v))
        elif kind == "double":
            out.extend(struct.pack("<d", v))
        elif kind == "string":
            raw = v.encode("utf-8")
            out.extend(avro_varint(len(raw), 64))
            out.extend(raw)
        elif kind == "array":
            if v:
                out.extend(avro_varint(len(v), 64))
                for item in v:
                    emit(item, s["items"])
            out.extend(b"\x00")
        elif kind == "map":
            if v:
                out.extend(avro_varint(len(v), 64))
                for key, item in v.items():
                    raw = key.encode("utf-8")
                    out.extend(avro_varint(len(raw), 64))
                    out.extend(raw)
                    emit(item, s["values"])
            out.extend(b"\x00")
        elif kind == "record":
            for field in s["fields"]:
                emit(v.get(field["name"]), field["type"])
        elif kind == "enum":
            out.extend(avro_varint(s["symbols"].index(v), 32))
        else:
            raise ValueError(f"unsupported schema {s!r}")

    emit(value, schema)
    return bytes(out)


# ---------------------------------------------------------------------------


def main():
    doc_path = FIXTURES / "test.json"
    schema_path = FIXTURES / "test.avsc"
    doc = json.loads(doc_path.read_text(), parse_float=float)
    schema = json.loads(schema_path.read_text())

    outputs = {
        "test.mp": mp_encode(doc),
        "test.cbor": cbor_encode(doc),
        "test.ubj": ubj_encode(doc),
        "test.bson": bson_encode(doc),
        # Pinned to the survey tool behaviour: no sharing, 32-bit floats.
        "test.smile": smile_encode(doc, float32=True),
        # Lossless variant used by the cross-format agreement check.
        "test.lossless.smile": smile_encode(doc, float32=False),
        "test.avro": avro_encode(doc, schema),
    }
    for name, data in outputs.items():
        (FIXTURES / name).write_bytes(data)
        print(f"{name}\t{len(data)}")


if __name__ == "__main__":
    sys.exit(main())

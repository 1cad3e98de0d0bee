"""Binary serialization shared repo-wide.

Every blob starts with the header: magic ``DSL1`` (4 bytes), format version
u16 little-endian, type tag u8.  Tags: 0 BitVec, 1 BitMatrix, 2 SparseMatrix,
3 code registry, 4 hash key, 5 trapdoor key.  Dimensions are u32
little-endian; bit payloads are packed little-endian and padded to a byte
boundary (per row for matrices).
"""

from __future__ import annotations

import struct
from typing import Tuple, Union

from .gf2 import BitMatrix, BitVec, SparseMatrix

MAGIC = b"DSL1"
VERSION = 1

TAG_BITVEC = 0
TAG_BITMATRIX = 1
TAG_SPARSEMATRIX = 2
TAG_CODE_REGISTRY = 3
TAG_HASH_KEY = 4
TAG_TRAPDOOR_KEY = 5

GF2Object = Union[BitVec, BitMatrix, SparseMatrix]


class FormatError(ValueError):
    pass


def header(tag: int) -> bytes:
    return MAGIC + struct.pack("<HB", VERSION, tag)


def read_header(data: bytes, offset: int = 0) -> Tuple[int, int]:
    """Validate the header at offset; return (tag, next offset)."""
    if data[offset : offset + 4] != MAGIC:
        raise FormatError("bad magic")
    version, tag = struct.unpack_from("<HB", data, offset + 4)
    if version != VERSION:
        raise FormatError(f"unsupported format version {version}")
    return tag, offset + 7


def dump(obj: GF2Object) -> bytes:
    if isinstance(obj, BitVec):
        return header(TAG_BITVEC) + struct.pack("<I", obj.n) + obj.to_bytes()
    if isinstance(obj, BitMatrix):
        out = [header(TAG_BITMATRIX), struct.pack("<II", obj.rows, obj.cols)]
        nbytes = (obj.cols + 7) // 8
        for r in obj.row_bits:
            out.append(r.to_bytes(nbytes, "little"))
        return b"".join(out)
    if isinstance(obj, SparseMatrix):
        out = [
            header(TAG_SPARSEMATRIX),
            struct.pack("<II", obj.n, obj.m),
            struct.pack("<H", obj.k),
        ]
        for col in obj.columns:
            out.append(struct.pack(f"<{obj.k}I", *col))
        return b"".join(out)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def load(data: bytes, offset: int = 0) -> GF2Object:
    obj, _ = load_at(data, offset)
    return obj


def load_at(data: bytes, offset: int = 0) -> Tuple[GF2Object, int]:
    """Deserialize one object; return (object, next offset)."""
    tag, pos = read_header(data, offset)
    if tag == TAG_BITVEC:
        (n,) = struct.unpack_from("<I", data, pos)
        pos += 4
        nbytes = (n + 7) // 8
        vec = BitVec.from_bytes(n, data[pos : pos + nbytes])
        return vec, pos + nbytes
    if tag == TAG_BITMATRIX:
        rows, cols = struct.unpack_from("<II", data, pos)
        pos += 8
        nbytes = (cols + 7) // 8
        mask = (1 << cols) - 1
        row_bits = []
        for _ in range(rows):
            row_bits.append(int.from_bytes(data[pos : pos + nbytes], "little") & mask)
            pos += nbytes
        return BitMatrix(rows, cols, row_bits), pos
    if tag == TAG_SPARSEMATRIX:
        n, m = struct.unpack_from("<II", data, pos)
        pos += 8
        (k,) = struct.unpack_from("<H", data, pos)
        pos += 2
        columns = []
        for _ in range(m):
            columns.append(struct.unpack_from(f"<{k}I", data, pos))
            pos += 4 * k
        return SparseMatrix(n, m, k, columns), pos
    raise FormatError(f"unexpected type tag {tag}")


def save(obj: GF2Object, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(dump(obj))


def load_file(path: str) -> GF2Object:
    with open(path, "rb") as fh:
        return load(fh.read())

"""Sparsification: the bijection between dense bit strings and regular
sparse vectors, and its block-structured left inverse.

Convention fixed repo-wide: a block value is read big-endian (first bit of
the block is the most significant), block indices are 0-based, and block i
of the sparse vector occupies positions [i*(n/w), (i+1)*(n/w)).
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf2 import BitMatrix, BitVec


@dataclass(frozen=True)
class GadgetParams:
    """n: sparse length; w: block count; n/w must be a power of two, so
    each block encodes s = log2(n/w) >= 1 bits."""

    n: int
    w: int

    def __post_init__(self):
        if self.w < 1 or self.n % self.w != 0:
            raise ValueError("w must divide n")
        blk = self.n // self.w
        if blk < 2 or blk & (blk - 1):
            raise ValueError("n/w must be a power of two >= 2")

    @property
    def block(self) -> int:
        return self.n // self.w

    @property
    def s(self) -> int:
        return (self.n // self.w).bit_length() - 1

    @property
    def dense_len(self) -> int:
        return self.w * self.s


def _block_value(x: BitVec, i: int, s: int) -> int:
    """Big-endian integer value of block i of the dense vector."""
    v = 0
    base = i * s
    for j in range(s):
        v = (v << 1) | ((x.bits >> (base + j)) & 1)
    return v


def sparsify(p: GadgetParams, x: BitVec) -> BitVec:
    """Dense w*s bits -> regular sparse vector: one set bit per block, at
    the offset named by the block's value."""
    if x.n != p.dense_len:
        raise ValueError(f"expected {p.dense_len} bits, got {x.n}")
    bits = 0
    for i in range(p.w):
        bits |= 1 << (i * p.block + _block_value(x, i, p.s))
    return BitVec(p.n, bits)


def gadget_mul(p: GadgetParams, v: BitVec) -> BitVec:
    """Apply the block left inverse without materializing the matrix: XOR
    the big-endian offset encoding of every set position into its block."""
    if v.n != p.n:
        raise ValueError(f"expected {p.n} bits, got {v.n}")
    out = 0
    b = v.bits
    s = p.s
    blk = p.block
    while b:
        low = b & -b
        pos = low.bit_length() - 1
        b ^= low
        i, off = divmod(pos, blk)
        base = i * s
        for j in range(s):
            if (off >> (s - 1 - j)) & 1:
                out ^= 1 << (base + j)
    return BitVec(p.dense_len, out)


def gadget_matrix(p: GadgetParams) -> BitMatrix:
    """Explicit (w*s) x n matrix form of gadget_mul: block-diagonal copies
    of the s x 2^s matrix whose column c is the big-endian encoding of c.
    Kept for tests; evaluation paths use gadget_mul."""
    rows = [0] * p.dense_len
    for i in range(p.w):
        for c in range(p.block):
            col = i * p.block + c
            for j in range(p.s):
                if (c >> (p.s - 1 - j)) & 1:
                    rows[i * p.s + j] |= 1 << col
    return BitMatrix(p.dense_len, p.n, rows)


def sparsify_table(p: GadgetParams) -> list:
    """For block value v, the set-bit offset it maps to (identity; spelled
    out so batch code reads clearly)."""
    return list(range(p.block))

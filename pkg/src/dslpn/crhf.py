"""Compressing hash from the masked sparse-matrix distribution.

Key generation draws a dense H and a sparse M and publishes A' = H M; the
hash of a t*s-bit input is A' applied to its sparsification.  Collisions of
the hash are, structurally, kernel vectors of M whenever H has no light
kernel vector itself; collision_analyze reports which side of that
dichotomy a concrete collision falls on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .gadget import GadgetParams, sparsify
from .gf2 import BitMatrix, BitVec, SparseMatrix, min_distance, rank
from .params import CrhfParams
from .sampling import GoodDistSpec, good_sparse, uniform_matrix, uniform_sparse


@dataclass(frozen=True)
class CrhfKey:
    params: CrhfParams
    a_prime: BitMatrix
    h: Optional[BitMatrix] = None  # debug only
    m: Optional[SparseMatrix] = None  # debug only

    @property
    def gadget(self) -> GadgetParams:
        return GadgetParams(self.params.m, self.params.t)

    def check_debug(self) -> bool:
        if self.h is None or self.m is None:
            raise ValueError("not a debug key")
        return self.a_prime == self.h.mul(self.m.densify())


def crhf_gen(
    params: CrhfParams,
    rng: np.random.Generator,
    debug: bool = False,
    good_spec: Optional[GoodDistSpec] = None,
    factored: bool = False,
) -> CrhfKey:
    """Sample a hash key.

    good_spec requests a verified dual-distance floor for M; None samples
    uniformly (the tiny exhaustive test sizes force duplicate columns, where
    no floor above 2 exists).  factored draws H as H' T with T of shape
    (n/2) x n instead of uniformly, an alternate path whose key distribution
    the tests compare against the direct one.
    """
    n, m, k = params.n, params.m, params.k
    if factored:
        if params.n % 2:
            raise ValueError("factored path needs even n")
        h_outer = uniform_matrix(params.out_bits, n // 2, rng)
        t_mat = uniform_matrix(n // 2, n, rng)
        h = h_outer.mul(t_mat)
    else:
        h = uniform_matrix(params.out_bits, n, rng)
    if good_spec is not None:
        m_mat = good_sparse(good_spec, rng)
    else:
        m_mat = uniform_sparse(n, m, k, rng)
    h_cols = h.column_bits()
    a_cols = []
    for col in m_mat.columns:
        acc = 0
        for r in col:
            acc ^= h_cols[r]
        a_cols.append(acc)
    a_prime = BitMatrix(m, params.out_bits, a_cols).transpose()
    return CrhfKey(params, a_prime, h if debug else None, m_mat if debug else None)


def crhf_hash(key: CrhfKey, x: BitVec) -> BitVec:
    """A' spfy(x): XOR of one key column per block of x."""
    if x.n != key.params.ttilde:
        raise ValueError(f"input must be {key.params.ttilde} bits")
    xt = sparsify(key.gadget, x)
    masks = key.a_prime.column_bits()
    acc = 0
    b = xt.bits
    while b:
        low = b & -b
        acc ^= masks[low.bit_length() - 1]
        b ^= low
    return BitVec(key.params.out_bits, acc)


@dataclass(frozen=True)
class CollisionReport:
    """Where a collision came from: spfy-difference weight (always <= 2t),
    whether it lies in the kernel of M, and failing that, whether only
    H (M x') = 0 held (a light kernel vector of H)."""

    diff_weight: int
    in_kernel_m: bool
    h_kernel_only: bool
    m_image_weight: int


def collision_analyze(key: CrhfKey, x1: BitVec, x2: BitVec) -> CollisionReport:
    if key.m is None:
        raise ValueError("collision analysis needs a debug key")
    if x1 == x2:
        raise ValueError("x1 and x2 must differ")
    if crhf_hash(key, x1) != crhf_hash(key, x2):
        raise ValueError("inputs do not collide")
    g = key.gadget
    diff = sparsify(g, x1) ^ sparsify(g, x2)
    image = key.m.mul_vec(diff)
    return CollisionReport(
        diff_weight=diff.weight(),
        in_kernel_m=image.is_zero(),
        h_kernel_only=not image.is_zero(),
        m_image_weight=image.weight(),
    )


def h_min_distance(key: CrhfKey) -> Optional[int]:
    """Exact minimum weight of a nonzero kernel vector of the debug H;
    None when H has full column rank (no nonzero kernel at all)."""
    if key.h is None:
        raise ValueError("needs a debug key")
    return min_distance(key.h)


def hash_all_inputs(key: CrhfKey) -> np.ndarray:
    """Hashes of every input, index i = hash of the i-th bit pattern.

    Input blocks select key columns independently, so the table is built by
    XOR-broadcasting per-block column tables; output packed into uint64
    (out_bits <= 64 at exhaustive sizes)."""
    p = key.params
    if p.ttilde > 24:
        raise ValueError("exhaustive table capped at 2^24 inputs")
    if p.out_bits > 64:
        raise ValueError("packed table needs out_bits <= 64")
    masks = key.a_prime.column_bits()
    blk = 1 << p.s
    table = np.zeros(1, dtype=np.uint64)
    for i in range(p.t):
        # block value v selects key column i*blk + v (sparsify maps value
        # v to offset v within the block)
        cols = np.array(
            [masks[i * blk + v] for v in range(blk)], dtype=np.uint64
        )
        table = table[None, :] ^ cols[:, None]
        table = table.reshape(-1)
    return table


def input_index_to_bitvec(idx: int, p: CrhfParams) -> BitVec:
    """Invert hash_all_inputs' indexing: digit i (least significant first)
    of the table index is block i's sparse offset."""
    bits = 0
    for i in range(p.t):
        v = (idx >> (i * p.s)) & ((1 << p.s) - 1)
        for j in range(p.s):
            if (v >> (p.s - 1 - j)) & 1:
                bits |= 1 << (i * p.s + j)
    return BitVec(p.ttilde, bits)


def exhaustive_collisions(key: CrhfKey, limit: Optional[int] = None) -> List[Tuple[BitVec, BitVec]]:
    """All colliding input pairs (grouped by hash bucket), as BitVecs."""
    p = key.params
    table = hash_all_inputs(key)
    order = np.argsort(table, kind="stable")
    sorted_vals = table[order]
    pairs: List[Tuple[BitVec, BitVec]] = []
    start = 0
    for i in range(1, len(sorted_vals) + 1):
        if i == len(sorted_vals) or sorted_vals[i] != sorted_vals[start]:
            bucket = order[start:i]
            for a in range(len(bucket)):
                for b in range(a + 1, len(bucket)):
                    pairs.append(
                        (
                            input_index_to_bitvec(int(bucket[a]), p),
                            input_index_to_bitvec(int(bucket[b]), p),
                        )
                    )
                    if limit is not None and len(pairs) >= limit:
                        return pairs
            start = i
    return pairs


def rank_statistics(params: CrhfParams, rng: np.random.Generator, samples: int, factored: bool) -> Dict[int, int]:
    """Histogram of rank(A') over fresh keys, for comparing the direct and
    factored key-generation paths."""
    hist: Dict[int, int] = {}
    for _ in range(samples):
        key = crhf_gen(params, rng, factored=factored)
        r = rank(key.a_prime)
        hist[r] = hist.get(r, 0) + 1
    return hist

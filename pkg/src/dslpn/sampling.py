"""Seeded randomness and all samplers.

Every sampler takes an explicit numpy Generator; nothing touches global
state.  Parallel trials must derive independent generators from one master
Seed via distinct stream ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .gf2 import BitMatrix, BitVec, SparseMatrix

MASTER_SEED_BYTES = 32


class RejectionExhausted(RuntimeError):
    """Rejection sampling gave up: acceptable matrices are too rare at the
    requested parameters."""


@dataclass(frozen=True)
class Seed:
    """Master seed (32 bytes) plus a stream id.

    The same (master, stream) pair reproduces the identical byte stream on
    every platform (counter-based Philox generator).
    """

    master: bytes
    stream: int = 0

    def __post_init__(self):
        if len(self.master) != MASTER_SEED_BYTES:
            raise ValueError(f"master seed must be {MASTER_SEED_BYTES} bytes")
        if self.stream < 0:
            raise ValueError("stream id must be non-negative")

    @classmethod
    def from_hex(cls, hexstr: str, stream: int = 0) -> "Seed":
        raw = bytes.fromhex(hexstr)
        if len(raw) > MASTER_SEED_BYTES:
            raise ValueError("seed hex longer than 32 bytes")
        return cls(raw.rjust(MASTER_SEED_BYTES, b"\x00"), stream)

    @classmethod
    def from_int(cls, value: int, stream: int = 0) -> "Seed":
        return cls(value.to_bytes(MASTER_SEED_BYTES, "big"), stream)

    def with_stream(self, stream: int) -> "Seed":
        return Seed(self.master, stream)

    def generator(self) -> np.random.Generator:
        entropy = int.from_bytes(self.master, "big")
        seq = np.random.SeedSequence(entropy, spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(seq))

    def substream(self, *ids: int) -> np.random.Generator:
        """Child generator for e.g. one Monte-Carlo trial; results do not
        depend on how trials are sharded across workers."""
        entropy = int.from_bytes(self.master, "big")
        seq = np.random.SeedSequence(entropy, spawn_key=(self.stream, *ids))
        return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True)
class GoodDistSpec:
    """Rejection-sampling target: k-sparse n x m matrices whose kernel has
    no nonzero vector of weight < d.

    d >= 3 is the interesting range (d=1 accepts everything, d=2 only
    forbids duplicate columns); m must stay below n^(k/2) or low-weight
    kernel vectors become unavoidable.
    """

    n: int
    m: int
    k: int
    d: int
    max_rejects: int = 200

    def __post_init__(self):
        if self.k < 1 or self.k > self.n:
            raise ValueError("need 1 <= k <= n")
        if self.d < 1:
            raise ValueError("need d >= 1")
        if self.m < 1:
            raise ValueError("need m >= 1")
        if self.m * self.m >= self.n ** self.k:
            raise ValueError("m must satisfy m < n^(k/2)")


def bernoulli_vec(eps: float, n: int, rng: np.random.Generator) -> BitVec:
    """Length-n vector of i.i.d. Bernoulli(eps) bits."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must be in [0, 1]")
    if n == 0:
        return BitVec(0)
    if eps == 0.0:
        return BitVec.zeros(n)
    if eps == 1.0:
        return BitVec.ones(n)
    hits = np.flatnonzero(rng.random(n) < eps)
    bits = 0
    for i in hits.tolist():
        bits |= 1 << i
    return BitVec(n, bits)


def bernoulli_matrix(eps: float, rows: int, cols: int, rng: np.random.Generator) -> BitMatrix:
    """rows x cols matrix of i.i.d. Bernoulli(eps) bits."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must be in [0, 1]")
    if eps == 0.0:
        return BitMatrix.zeros(rows, cols)
    out = []
    for _ in range(rows):
        out.append(bernoulli_vec(eps, cols, rng).bits)
    return BitMatrix(rows, cols, out)


def uniform_bitvec(n: int, rng: np.random.Generator) -> BitVec:
    nbytes = (n + 7) // 8
    bits = int.from_bytes(rng.bytes(nbytes), "little") & ((1 << n) - 1)
    return BitVec(n, bits)


def uniform_matrix(rows: int, cols: int, rng: np.random.Generator) -> BitMatrix:
    return BitMatrix(rows, cols, [uniform_bitvec(cols, rng).bits for _ in range(rows)])


def _floyd_columns(n: int, m: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """m independent uniform k-subsets of [n] (Floyd's algorithm, vectorized
    across columns).  Returns an (m, k) array, unsorted."""
    out = np.empty((m, k), dtype=np.int64)
    for h in range(k):
        j = n - k + h
        t = rng.integers(0, j + 1, size=m)
        if h:
            present = (out[:, :h] == t[:, None]).any(axis=1)
            t = np.where(present, j, t)
        out[:, h] = t
    return out


def uniform_sparse(n: int, m: int, k: int, rng: np.random.Generator) -> SparseMatrix:
    """Each column an independent uniform k-subset of the n rows."""
    if k > n:
        raise ValueError("k > n")
    if m < 1:
        raise ValueError("m >= 1 required")
    picks = np.sort(_floyd_columns(n, m, k, rng), axis=1)
    return SparseMatrix(n, m, k, [tuple(row) for row in picks.tolist()])


def good_sparse(spec: GoodDistSpec, rng: np.random.Generator) -> SparseMatrix:
    """Rejection-sample a k-sparse matrix with verified dual distance >= d.

    Stands in for an efficiently sampleable good distribution at desk scale:
    each candidate is checked by the exact bounded-weight kernel search, so
    conditional on acceptance the dual-distance guarantee holds with
    certainty.  Raises RejectionExhausted after max_rejects failures.
    """
    from .attacks import dual_distance  # deferred: attacks imports sampling

    for _ in range(spec.max_rejects + 1):
        cand = uniform_sparse(spec.n, spec.m, spec.k, rng)
        if spec.d == 1:
            return cand
        found, _ = dual_distance(cand, spec.d - 1)
        if found is None:
            return cand
    raise RejectionExhausted(
        f"no matrix with dual distance >= {spec.d} in {spec.max_rejects + 1} attempts"
    )


def dense_sparse_matrix(
    n: int,
    m: int,
    k: int,
    alpha,
    spec: Optional[GoodDistSpec],
    rng: np.random.Generator,
) -> Tuple[BitMatrix, BitMatrix, SparseMatrix]:
    """The masked distribution A = T M: T uniform (alpha*n) x n, M sparse.

    Returns (A, T, M); T and M exist for testing and attack harnesses,
    production callers discard them.  alpha defaults to 1/2 in callers; it
    is exposed so the square-T attack experiments can set alpha = 1.
    """
    rows = alpha * n
    n_prime = int(rows)
    if n_prime != rows:
        raise ValueError("alpha * n must be an integer")
    if spec is None:
        spec = GoodDistSpec(n=n, m=m, k=k, d=1)
    if (spec.n, spec.m, spec.k) != (n, m, k):
        raise ValueError("spec inconsistent with (n, m, k)")
    t_mat = uniform_matrix(n_prime, n, rng)
    m_mat = good_sparse(spec, rng)
    t_cols = t_mat.column_bits()
    a_rows_t = []  # build A column-wise, then transpose
    for col in m_mat.columns:
        acc = 0
        for r in col:
            acc ^= t_cols[r]
        a_rows_t.append(acc)
    a_mat = BitMatrix(m, n_prime, a_rows_t).transpose()
    return a_mat, t_mat, m_mat


def lpn_sample(a: BitMatrix, eps: float, rng: np.random.Generator) -> BitVec:
    """b = s A + e with fresh uniform s and e ~ Ber(eps)^m."""
    s = uniform_bitvec(a.rows, rng)
    e = bernoulli_vec(eps, a.cols, rng)
    return a.vec_mul(s) ^ e

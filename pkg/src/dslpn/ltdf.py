"""All-but-one lossy trapdoor function.

The function key is (A, B): A = T M from the masked sparse distribution and
B = S A + E + W(tau*), where W(tau) embeds the branch matrix H_tau between
the code's generator and the block left inverse.  Evaluation at branch tau
subtracts W(tau), so at every branch except tau* the branch term survives
as an invertible field multiple of the input, recoverable through the code;
at tau* it cancels and the output collapses onto the noise ball around a
compressed image.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .ecc import BlockCode
from .frd import FrdFamily
from .gadget import GadgetParams, gadget_mul, sparsify
from .gf2 import BitMatrix, BitVec, SparseMatrix
from .params import LtdfParams
from .sampling import (
    GoodDistSpec,
    bernoulli_matrix,
    dense_sparse_matrix,
    uniform_matrix,
)


@dataclass(frozen=True)
class AboKeyPair:
    params: LtdfParams
    code: BlockCode
    frd: FrdFamily
    a: BitMatrix  # n/2 x m
    b: BitMatrix  # ell x m
    s: BitMatrix  # ell x n/2 (trapdoor)
    tau_star: BitVec  # lossy branch (trapdoor)
    t_mat: Optional[BitMatrix] = None  # debug
    m_mat: Optional[SparseMatrix] = None  # debug
    e_mat: Optional[BitMatrix] = None  # debug

    @property
    def gadget(self) -> GadgetParams:
        return GadgetParams(self.params.m, self.params.t)


def branch_term_vec(code: BlockCode, frd: FrdFamily, gp: GadgetParams, tau: BitVec, xt: BitVec) -> BitVec:
    """W(tau) applied to a sparse vector, matrix-free: collapse to the dense
    form, multiply by tau in the field, encode."""
    return code.encode(frd.apply(tau, gadget_mul(gp, xt)))


def branch_matrix(code: BlockCode, frd: FrdFamily, gp: GadgetParams, tau: BitVec) -> BitMatrix:
    """Materialized ell x m branch term; tests and keygen only (evaluation
    stays matrix-free)."""
    cols = []
    for j in range(gp.n):
        xt = BitVec(gp.n, 1 << j)
        cols.append(branch_term_vec(code, frd, gp, tau, xt).bits)
    return BitMatrix(gp.n, code.block_len, cols).transpose()


def abo_gen(
    params: LtdfParams,
    code: BlockCode,
    tau_star: BitVec,
    rng: np.random.Generator,
    debug: bool = False,
    good_d: int = 1,
    eps_override: Optional[float] = None,
) -> AboKeyPair:
    """Sample a key pair with lossy branch tau_star.

    eps_override exists for the noiseless test mode (eps = 0); good_d sets
    the verified dual-distance floor for M (1 = plain uniform sampling, for
    tiny sizes where no floor is achievable)."""
    if code.dim != params.L or code.block_len != params.ell:
        raise ValueError("code does not match parameters")
    if tau_star.n != params.L:
        raise ValueError("branch must have L bits")
    if params.n % 2:
        raise ValueError("n must be even")
    frd = FrdFamily.build(params.L)
    gp = GadgetParams(params.m, params.t)
    eps = params.eps if eps_override is None else eps_override
    spec = GoodDistSpec(n=params.n, m=params.m, k=params.k, d=good_d)
    a_mat, t_mat, m_mat = dense_sparse_matrix(
        params.n, params.m, params.k, 0.5, spec, rng
    )
    s_mat = uniform_matrix(params.ell, params.n // 2, rng)
    e_mat = bernoulli_matrix(eps, params.ell, params.m, rng)
    w_star = branch_matrix(code, frd, gp, tau_star)
    b_mat = BitMatrix(
        params.ell,
        params.m,
        [
            sa ^ e ^ w
            for sa, e, w in zip(s_mat.mul(a_mat).row_bits, e_mat.row_bits, w_star.row_bits)
        ],
    )
    return AboKeyPair(
        params=params, code=code, frd=frd, a=a_mat, b=b_mat, s=s_mat,
        tau_star=tau_star,
        t_mat=t_mat if debug else None,
        m_mat=m_mat if debug else None,
        e_mat=e_mat if debug else None,
    )


def abo_eval(key: AboKeyPair, tau: BitVec, x: BitVec) -> BitVec:
    """y = (A spfy(x) || (B - W(tau)) spfy(x)) without materializing any
    ell x m matrix: the branch contribution collapses to encode(tau * x)."""
    p = key.params
    if tau.n != p.L or x.n != p.L:
        raise ValueError("branch and input must have L bits")
    xt = sparsify(key.gadget, x)
    y1 = key.a.cols_xor(xt)
    y2 = key.b.cols_xor(xt) ^ key.code.encode(key.frd.apply(tau, x))
    return y1.concat(y2)


def abo_eval_explicit(key: AboKeyPair, tau: BitVec, x: BitVec) -> BitVec:
    """Oracle for abo_eval: materialize B_tau = B - W(tau) and multiply."""
    p = key.params
    xt = sparsify(key.gadget, x)
    w_tau = branch_matrix(key.code, key.frd, key.gadget, tau)
    b_tau = BitMatrix(p.ell, p.m, [b ^ w for b, w in zip(key.b.row_bits, w_tau.row_bits)])
    return key.a.mul_vec(xt).concat(b_tau.mul_vec(xt))


class InversionFailure(Exception):
    """Decoding failed: output not produced by this branch, or the noise
    left the correctable ball."""


def abo_invert(key: AboKeyPair, tau: BitVec, y: BitVec) -> BitVec:
    """Recover x from y = F(tau, x) for tau != tau*: peel S off, decode the
    codeword of tau' * x (tau' = tau* - tau, invertible), divide out tau'."""
    p = key.params
    if tau.n != p.L:
        raise ValueError("branch must have L bits")
    if tau == key.tau_star:
        raise ValueError("lossy branch has no inversion contract")
    if y.n != p.n // 2 + p.ell:
        raise ValueError("output must have n/2 + ell bits")
    y1 = y.slice(0, p.n // 2)
    y2 = y.slice(p.n // 2, y.n)
    y_prime = y2 ^ key.s.mul_vec(y1)
    decoded = key.code.decode(y_prime)
    if decoded is None:
        raise InversionFailure("code decoder gave up")
    diff = key.tau_star ^ tau
    return key.frd.apply_inv(diff, decoded)


def block_table_images(col_masks: Sequence[int], nbits: int, t: int, s: int) -> np.ndarray:
    """Linear images over the whole sparse domain: index digit i (base 2^s,
    least significant first) holds block i's offset; row = packed image,
    little-endian uint64 words."""
    if t * s > 24:
        raise ValueError("domain too large to enumerate")
    nwords = (nbits + 63) // 64
    blk = 1 << s

    def packed(vec_bits: int) -> np.ndarray:
        return np.frombuffer(vec_bits.to_bytes(nwords * 8, "little"), dtype=np.uint64)

    table = np.zeros((1, nwords), dtype=np.uint64)
    for i in range(t):
        block_tbl = np.empty((blk, nwords), dtype=np.uint64)
        for v in range(blk):
            block_tbl[v] = packed(col_masks[i * blk + v])
        table = (block_tbl[:, None, :] ^ table[None, :, :]).reshape(-1, nwords)
    return table


def domain_index_to_input(idx: int, p: LtdfParams) -> BitVec:
    """Dense input whose block values are the base-2^s digits of idx."""
    bits = 0
    for i in range(p.t):
        v = (idx >> (i * p.s)) & ((1 << p.s) - 1)
        for j in range(p.s):
            if (v >> (p.s - 1 - j)) & 1:
                bits |= 1 << (i * p.s + j)
    return BitVec(p.L, bits)


def enumerate_outputs(key: AboKeyPair, tau: BitVec) -> np.ndarray:
    """Packed outputs of F(tau, .) over the whole domain (L <= 24)."""
    p = key.params
    a_cols = key.a.columns_cached()
    b_cols = key.b.columns_cached()
    gp = key.gadget
    shift = p.n // 2
    combined = []
    for j in range(p.m):
        w_col = branch_term_vec(key.code, key.frd, gp, tau, BitVec(p.m, 1 << j)).bits
        combined.append(a_cols[j] | ((b_cols[j] ^ w_col) << shift))
    return block_table_images(combined, shift + p.ell, p.t, p.s)


@dataclass(frozen=True)
class LossinessReport:
    domain_count: int
    image_count: int
    y1_count: int
    max_noise_weight: Optional[int]
    ratio: float


def lossiness_measure(key: AboKeyPair, tau: BitVec) -> LossinessReport:
    """Exhaustive image count at branch tau; at the lossy branch of a debug
    key, also the exact max of wt(E spfy(x)) over the domain (the noise-ball
    radius in the image-count bound)."""
    p = key.params
    table = enumerate_outputs(key, tau)
    image_count = int(np.unique(table, axis=0).shape[0])
    y1_mask = np.uint64((1 << (p.n // 2)) - 1)
    y1_count = int(np.unique(table[:, 0] & y1_mask).shape[0])
    max_noise = None
    if tau == key.tau_star and key.e_mat is not None:
        noise_tbl = block_table_images(
            key.e_mat.columns_cached(), p.ell, p.t, p.s
        )
        max_noise = int(np.bitwise_count(noise_tbl).sum(axis=1).max())
    domain = 1 << p.L
    return LossinessReport(
        domain_count=domain,
        image_count=image_count,
        y1_count=y1_count,
        max_noise_weight=max_noise,
        ratio=image_count / domain,
    )


def noise_weight_check(
    e_mat: BitMatrix,
    gp: GadgetParams,
    n_samples: int,
    rng: np.random.Generator,
) -> Tuple[int, float]:
    """Monte-Carlo max of wt(E spfy(x)) over sampled dense inputs, plus the
    pooled per-coordinate rate."""
    masks = e_mat.columns_cached()
    offsets = rng.integers(0, gp.block, size=(n_samples, gp.w))
    base = np.arange(gp.w) * gp.block
    max_w = 0
    total = 0
    for row in (offsets + base):
        acc = 0
        for pos in row.tolist():
            acc ^= masks[pos]
        w = acc.bit_count()
        total += w
        if w > max_w:
            max_w = w
    return max_w, total / (n_samples * e_mat.rows)


def marginal_noise_rate(
    eps: float,
    t: int,
    ell: int,
    n_draws: int,
    rng: np.random.Generator,
) -> Tuple[int, int]:
    """(ones, samples) for the per-coordinate marginal of E spfy(x) over
    fresh E columns: each coordinate XORs t independent Bernoulli(eps) bits,
    so draws are pooled over ell coordinates x n_draws fresh matrices."""
    ones = 0
    samples = n_draws * ell
    for _ in range(n_draws):
        cols = rng.random((ell, t)) < eps
        ones += int(np.bitwise_xor.reduce(cols, axis=1).sum())
    return ones, samples

"""Pluggable binary block codes with bounded-distance decoding.

The workhorse is a concatenated code: outer shortened Reed-Solomon over
GF(2^b), inner short binary linear code decoded by exhaustive
nearest-codeword search.  A repetition code is registered for tests.  Any
error pattern of weight <= t_err decodes exactly; beyond that decode may
return anything or None (never crashes).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import serialize
from .frd import is_irreducible
from .gf2 import BitMatrix, BitVec, rank

_POPCNT8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


# ---------------------------------------------------------------------------
# Small extension fields with a primitive generator.

def _first_primitive_poly(b: int) -> int:
    """Smallest-encoding degree-b polynomial that is irreducible with x a
    multiplicative generator (so exp tables are powers of x)."""
    order = (1 << b) - 1
    factors = _prime_factors(order)
    for low in range(1, 1 << b, 2):
        mod = (1 << b) | low
        if not is_irreducible(mod):
            continue
        if all(_poly_pow_mod(2, order // p, mod) != 1 for p in factors):
            return mod
    raise RuntimeError(f"no primitive polynomial of degree {b}")


def _prime_factors(n: int) -> List[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_pow_mod(base: int, e: int, mod: int) -> int:
    from .frd import _poly_mod, _poly_mul

    acc, cur = 1, _poly_mod(base, mod)
    while e:
        if e & 1:
            acc = _poly_mod(_poly_mul(acc, cur), mod)
        cur = _poly_mod(_poly_mul(cur, cur), mod)
        e >>= 1
    return acc


class GF2m:
    """GF(2^b) with log/exp tables over the generator x."""

    def __init__(self, b: int):
        self.b = b
        self.order = (1 << b) - 1
        self.modulus = _first_primitive_poly(b)
        exp = [0] * (2 * self.order)
        log = [0] * (1 << b)
        acc = 1
        for i in range(self.order):
            exp[i] = acc
            log[acc] = i
            acc <<= 1
            if acc >> b:
                acc ^= self.modulus
        assert acc == 1, "x is not primitive"
        for i in range(self.order, 2 * self.order):
            exp[i] = exp[i - self.order]
        self.exp = exp
        self.log = log
        self.np_exp = np.array(exp, dtype=np.int64)
        self.np_log = np.array(log, dtype=np.int64)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError
        return self.exp[self.order - self.log[a]]

    def pow_alpha(self, e: int) -> int:
        return self.exp[e % self.order]


@lru_cache(maxsize=None)
def _field(b: int) -> GF2m:
    return GF2m(b)


# ---------------------------------------------------------------------------
# Block-code interface.

class BlockCode:
    """dim message bits -> block_len codeword bits; decoding guaranteed for
    error weight <= t_err."""

    name: str
    dim: int
    block_len: int
    t_err: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.dim, self.block_len)

    @property
    def delta(self) -> Fraction:
        """Guaranteed correctable fraction t_err / block_len."""
        return Fraction(self.t_err, self.block_len)

    def encode(self, x: BitVec) -> BitVec:
        raise NotImplementedError

    def decode(self, y: BitVec) -> Optional[BitVec]:
        raise NotImplementedError


class RepetitionCode(BlockCode):
    """Each message bit repeated r times (r odd); majority decode."""

    def __init__(self, dim: int, r: int = 3):
        if r < 1 or r % 2 == 0:
            raise ValueError("repetition factor must be odd")
        self.dim = dim
        self.r = r
        self.block_len = dim * r
        self.t_err = (r - 1) // 2
        self.name = f"rep{r}-{dim}"

    def encode(self, x: BitVec) -> BitVec:
        if x.n != self.dim:
            raise ValueError("length mismatch")
        bits = 0
        grp = (1 << self.r) - 1
        for i in range(self.dim):
            if (x.bits >> i) & 1:
                bits |= grp << (i * self.r)
        return BitVec(self.block_len, bits)

    def decode(self, y: BitVec) -> Optional[BitVec]:
        if y.n != self.block_len:
            raise ValueError("length mismatch")
        grp = (1 << self.r) - 1
        bits = 0
        for i in range(self.dim):
            votes = ((y.bits >> (i * self.r)) & grp).bit_count()
            if votes * 2 > self.r:
                bits |= 1 << i
        return BitVec(self.dim, bits)


# ---------------------------------------------------------------------------
# Inner code: short random linear code, exhaustive nearest-codeword decode.

class InnerCode:
    """[n_in, b] binary linear code with a full codeword table."""

    def __init__(self, b: int, n_in: int, gen_rows: Sequence[int]):
        if len(gen_rows) != b:
            raise ValueError("generator must have b rows")
        self.b = b
        self.n_in = n_in
        self.gen_rows = list(gen_rows)
        table = np.zeros(1 << b, dtype=np.uint64)
        for v in range(1, 1 << b):
            low = v & -v
            table[v] = table[v ^ low] ^ np.uint64(gen_rows[low.bit_length() - 1])
        self.table = table
        nbytes = (n_in + 7) // 8
        self.table_bytes = (
            table[:, None] >> (np.arange(nbytes, dtype=np.uint64) * np.uint64(8))
        ).astype(np.uint8)
        self.min_dist = int(
            _POPCNT8[self.table_bytes[1:]].sum(axis=1).min()
        )

    def encode_symbol(self, v: int) -> int:
        return int(self.table[v])

    def decode_blocks(self, blocks: np.ndarray) -> np.ndarray:
        """Nearest codeword per row of a (count, nbytes) uint8 array; ties
        resolved toward the smallest message value."""
        dist = _POPCNT8[blocks[:, None, :] ^ self.table_bytes[None, :, :]].sum(
            axis=2, dtype=np.uint32
        )
        return dist.argmin(axis=1)


def _search_inner_code(b: int, n_in: int, tries: int = 300) -> InnerCode:
    """Best-distance full-rank [n_in, b] code over seeded random generators;
    deterministic for fixed (b, n_in, tries)."""
    seq = np.random.SeedSequence(0xECC0DE, spawn_key=(b, n_in))
    rng = np.random.Generator(np.random.Philox(seq))
    best: Optional[InnerCode] = None
    mask = (1 << n_in) - 1
    for _ in range(tries):
        rows = [int.from_bytes(rng.bytes((n_in + 7) // 8), "little") & mask for _ in range(b)]
        if rank(BitMatrix(b, n_in, rows)) != b:
            continue
        cand = InnerCode(b, n_in, rows)
        if best is None or cand.min_dist > best.min_dist:
            best = cand
    if best is None:
        raise RuntimeError("no full-rank inner generator found")
    return best


# ---------------------------------------------------------------------------
# Outer code: shortened systematic Reed-Solomon.

class ReedSolomon:
    """[n_sym, k_sym] RS over GF(2^b), roots alpha^1..alpha^(2t)."""

    def __init__(self, field: GF2m, n_sym: int, k_sym: int):
        if not 0 < k_sym <= n_sym <= field.order:
            raise ValueError("bad RS dimensions")
        self.field = field
        self.n = n_sym
        self.k = k_sym
        self.t = (n_sym - k_sym) // 2
        self.n_par = n_sym - k_sym
        g = [1]
        for i in range(1, self.n_par + 1):
            root = field.pow_alpha(i)
            nxt = [0] * (len(g) + 1)
            for d, c in enumerate(g):
                nxt[d + 1] ^= c
                nxt[d] ^= field.mul(c, root)
            g = nxt
        self.gen_poly = g  # degree n_par, monic
        self._syn_exp = np.array(
            [[(i * p) % field.order for p in range(n_sym)] for i in range(1, self.n_par + 1)],
            dtype=np.int64,
        )

    def encode(self, msg: Sequence[int]) -> List[int]:
        """Systematic: codeword[p] = coefficient of x^p; message sits at
        degrees n_par..n-1, parity = msg(x) x^n_par mod gen_poly below."""
        if len(msg) != self.k:
            raise ValueError("message length mismatch")
        if self.n_par == 0:
            return list(msg)
        f = self.field
        rem = [0] * self.n_par
        for sym in reversed(msg):  # highest degree first
            feedback = rem[-1] ^ sym
            rem = [0] + rem[:-1]
            if feedback:
                fl = f.log[feedback]
                for d in range(self.n_par):
                    c = self.gen_poly[d]
                    if c:
                        rem[d] ^= f.exp[fl + f.log[c]]
        return rem + list(msg)

    def syndromes(self, word: np.ndarray) -> np.ndarray:
        f = self.field
        logs = f.np_log[word]
        terms = f.np_exp[(logs[None, :] + self._syn_exp) % f.order]
        terms = np.where(word[None, :] == 0, 0, terms)
        return np.bitwise_xor.reduce(terms, axis=1)

    def decode(self, word: Sequence[int]) -> Optional[List[int]]:
        """Berlekamp-Massey + Chien + Forney; returns the message symbols or
        None when the word is not within distance t of a codeword."""
        f = self.field
        w = np.asarray(word, dtype=np.int64)
        if w.shape != (self.n,):
            raise ValueError("word length mismatch")
        syn = self.syndromes(w)
        if not syn.any():
            return [int(x) for x in w[self.n_par :]]
        s = [int(x) for x in syn]
        sigma, prev = [1], [1]
        l_cur, m_gap, b_disc = 0, 1, 1
        for step in range(self.n_par):
            delta = s[step]
            for i in range(1, l_cur + 1):
                if i < len(sigma) and sigma[i] and s[step - i]:
                    delta ^= f.exp[f.log[sigma[i]] + f.log[s[step - i]]]
            if delta == 0:
                m_gap += 1
            elif 2 * l_cur <= step:
                keep = list(sigma)
                coef = f.mul(delta, f.inv(b_disc))
                sigma = self._add_shifted(sigma, prev, coef, m_gap)
                l_cur = step + 1 - l_cur
                prev, b_disc, m_gap = keep, delta, 1
            else:
                coef = f.mul(delta, f.inv(b_disc))
                sigma = self._add_shifted(sigma, prev, coef, m_gap)
                m_gap += 1
        if l_cur > self.t:
            return None
        # Chien search over the n (shortened) positions.
        positions = []
        for p in range(self.n):
            x = f.pow_alpha(-p % f.order)
            if self._eval(sigma, x) == 0:
                positions.append(p)
        if len(positions) != l_cur:
            return None
        omega = self._poly_mul_trunc(s, sigma, self.n_par)
        sigma_deriv = [sigma[d] if d % 2 == 1 else 0 for d in range(1, len(sigma))]
        corrected = w.copy()
        for p in positions:
            x_inv = f.pow_alpha(-p % f.order)
            denom = self._eval(sigma_deriv, x_inv)
            if denom == 0:
                return None
            mag = f.mul(self._eval(omega, x_inv), f.inv(denom))
            corrected[p] ^= mag
        if self.syndromes(corrected).any():
            return None
        return [int(x) for x in corrected[self.n_par :]]

    def _add_shifted(self, sigma: List[int], prev: List[int], coef: int, shift: int) -> List[int]:
        f = self.field
        out = list(sigma) + [0] * max(0, shift + len(prev) - len(sigma))
        for d, c in enumerate(prev):
            if c and coef:
                out[d + shift] ^= f.exp[f.log[coef] + f.log[c]]
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    def _eval(self, poly: Sequence[int], x: int) -> int:
        f = self.field
        acc = 0
        for c in reversed(poly):
            acc = f.mul(acc, x) ^ c
        return acc

    def _poly_mul_trunc(self, a: Sequence[int], b: Sequence[int], trunc: int) -> List[int]:
        f = self.field
        out = [0] * min(trunc, len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if i + j >= trunc:
                    break
                if cb:
                    out[i + j] ^= f.exp[f.log[ca] + f.log[cb]]
        return out


# ---------------------------------------------------------------------------
# Concatenation.

def _pick_symbol_bits(dim: int) -> int:
    """Symbol size: prefer divisors of dim (keeps rate exactly dim/(8 dim)),
    closest to 8; fall back to the smallest feasible b."""
    feasible = [b for b in range(4, 17) if 2 * -(-dim // b) <= (1 << b) - 1]
    divisors = [b for b in feasible if dim % b == 0]
    pool = divisors if divisors else feasible
    if not pool:
        raise ValueError(f"dim {dim} too large for <=16-bit symbols")
    return min(pool, key=lambda b: (abs(b - 8), -b))


class ConcatenatedCode(BlockCode):
    """Outer shortened RS over GF(2^b) at rate 1/2, inner [n_in, b] code
    decoded by exhaustive search.  Bounded-distance guarantee: an inner
    block only fails past floor((d_in-1)/2) bit errors, so any pattern of
    weight <= t_err = (t_rs+1) * (floor((d_in-1)/2)+1) - 1 leaves at most
    t_rs wrong symbols for the outer decoder."""

    def __init__(self, dim: int, symbol_bits: Optional[int] = None,
                 inner_len: Optional[int] = None, inner: Optional[InnerCode] = None):
        if dim < 8:
            raise ValueError("need dim >= 8")
        b = symbol_bits if symbol_bits is not None else _pick_symbol_bits(dim)
        n_in = inner_len if inner_len is not None else 4 * b
        if n_in <= b:
            raise ValueError("inner code must add redundancy")
        k_out = -(-dim // b)
        n_out = 2 * k_out
        field = _field(b)
        if n_out > field.order:
            raise ValueError("outer length exceeds field order")
        self.dim = dim
        self.b = b
        self.k_out = k_out
        self.n_out = n_out
        self.field = field
        self.rs = ReedSolomon(field, n_out, k_out)
        self.inner = inner if inner is not None else _search_inner_code(b, n_in)
        if self.inner.b != b or self.inner.n_in != n_in:
            raise ValueError("inner code shape mismatch")
        self.block_len = n_out * n_in
        inner_guard = (self.inner.min_dist - 1) // 2 + 1
        self.t_err = (self.rs.t + 1) * inner_guard - 1
        self.name = (
            f"concat-b{b}-rs{n_out}.{k_out}-in{n_in}.{b}.d{self.inner.min_dist}-dim{dim}"
        )

    def _to_symbols(self, x: BitVec) -> List[int]:
        mask = (1 << self.b) - 1
        return [(x.bits >> (g * self.b)) & mask for g in range(self.k_out)]

    def encode(self, x: BitVec) -> BitVec:
        if x.n != self.dim:
            raise ValueError("length mismatch")
        cw = self.rs.encode(self._to_symbols(x))
        bits = 0
        for g, sym in enumerate(cw):
            bits |= self.inner.encode_symbol(sym) << (g * self.inner.n_in)
        return BitVec(self.block_len, bits)

    def decode(self, y: BitVec) -> Optional[BitVec]:
        if y.n != self.block_len:
            raise ValueError("length mismatch")
        n_in = self.inner.n_in
        nbytes = (n_in + 7) // 8
        mask = (1 << n_in) - 1
        blocks = np.zeros((self.n_out, nbytes), dtype=np.uint8)
        for g in range(self.n_out):
            raw = (y.bits >> (g * n_in)) & mask
            blocks[g] = np.frombuffer(raw.to_bytes(nbytes, "little"), dtype=np.uint8)
        symbols = self.inner.decode_blocks(blocks)
        msg = self.rs.decode([int(v) for v in symbols])
        if msg is None:
            return None
        bits = 0
        for g, sym in enumerate(msg):
            bits |= sym << (g * self.b)
        bits &= (1 << self.dim) - 1
        return BitVec(self.dim, bits)


# ---------------------------------------------------------------------------
# Registry: named, reproducible code constructions.

_BUILDERS = {}


def _register(name: str, builder) -> None:
    _BUILDERS[name] = builder


_register("rep3-8", lambda: RepetitionCode(8, 3))
_register("concat-tiny24", lambda: ConcatenatedCode(8, symbol_bits=4, inner_len=6))


def get_code(name: str) -> BlockCode:
    if name in _BUILDERS:
        return _BUILDERS[name]()
    if name.startswith("concat-dim"):
        return ConcatenatedCode(int(name[len("concat-dim"):]))
    raise KeyError(f"unknown code {name!r}")


@lru_cache(maxsize=None)
def code_for_dim(dim: int) -> ConcatenatedCode:
    """The shipped concatenated code for a given message size."""
    return ConcatenatedCode(dim)


def registry_blob(codes: Sequence[BlockCode]) -> bytes:
    """Versioned blob of code descriptors (generator matrices included), so
    experiments can pin bit-identical codes across runs."""
    out = [serialize.header(serialize.TAG_CODE_REGISTRY), struct.pack("<H", len(codes))]
    for code in codes:
        name = code.name.encode()
        out.append(struct.pack("<H", len(name)))
        out.append(name)
        if isinstance(code, RepetitionCode):
            out.append(struct.pack("<BII", 0, code.dim, code.r))
        elif isinstance(code, ConcatenatedCode):
            out.append(struct.pack("<BIII", 1, code.dim, code.b, code.inner.n_in))
            out.append(serialize.dump(BitMatrix(code.b, code.inner.n_in, code.inner.gen_rows)))
        else:
            raise TypeError(f"cannot serialize {type(code)!r}")
    return b"".join(out)


def load_registry(blob: bytes) -> Dict[str, BlockCode]:
    tag, pos = serialize.read_header(blob)
    if tag != serialize.TAG_CODE_REGISTRY:
        raise serialize.FormatError("not a code registry")
    (count,) = struct.unpack_from("<H", blob, pos)
    pos += 2
    out: Dict[str, BlockCode] = {}
    for _ in range(count):
        (nlen,) = struct.unpack_from("<H", blob, pos)
        pos += 2
        name = blob[pos : pos + nlen].decode()
        pos += nlen
        kind = blob[pos]
        if kind == 0:
            _, dim, r = struct.unpack_from("<BII", blob, pos)
            pos += 9
            out[name] = RepetitionCode(dim, r)
        elif kind == 1:
            _, dim, b, n_in = struct.unpack_from("<BIII", blob, pos)
            pos += 13
            gen, pos = serialize.load_at(blob, pos)
            inner = InnerCode(b, n_in, gen.row_bits)
            out[name] = ConcatenatedCode(dim, symbol_bits=b, inner_len=n_in, inner=inner)
        else:
            raise serialize.FormatError(f"unknown code kind {kind}")
    return out

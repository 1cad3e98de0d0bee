"""Full-rank-difference matrix family over GF(2)^(L x L).

H_tau is multiplication by tau in the field GF(2^L) written in the
polynomial basis, so H_a ^ H_b = H_{a^b} and every H_tau with tau != 0 is
invertible.  Field elements are ints: bit i holds the coefficient of x^i.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List

from .gf2 import BitMatrix, BitVec


def _poly_mul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _poly_mod(a: int, mod: int) -> int:
    dm = mod.bit_length() - 1
    while a.bit_length() - 1 >= dm and a:
        a ^= mod << (a.bit_length() - 1 - dm)
    return a


def _poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def _pow_x_2k(mod: int, reps: int, start: int = 2) -> int:
    """start^(2^reps) mod the given modulus polynomial."""
    acc = _poly_mod(start, mod)
    for _ in range(reps):
        acc = _poly_mod(_poly_mul(acc, acc), mod)
    return acc


def _prime_factors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(mod: int) -> bool:
    """Rabin's test over GF(2): x^(2^L) = x mod f, and x^(2^(L/p)) - x is
    coprime to f for every prime p dividing L."""
    L = mod.bit_length() - 1
    if L < 1:
        return False
    if not mod & 1:  # zero constant term -> divisible by x
        return L == 1 and mod == 2
    if _pow_x_2k(mod, L) != _poly_mod(2, mod):
        return False
    for p in _prime_factors(L):
        h = _pow_x_2k(mod, L // p) ^ 2
        if _poly_gcd(mod, _poly_mod(h, mod)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def first_irreducible(L: int) -> int:
    """Lexicographically first irreducible monic polynomial of degree L:
    smallest integer encoding with bit L set.  Deterministic, table-free."""
    if L < 1:
        raise ValueError("degree must be >= 1")
    top = 1 << L
    for low in range(1, top, 2):  # constant term must be 1 for L > 1
        if is_irreducible(top | low):
            return top | low
    raise RuntimeError("unreachable: irreducible polynomials exist for every degree")


@dataclass(frozen=True)
class FrdFamily:
    """Branch-matrix family of bit length L with a verified modulus."""

    L: int
    modulus: int

    @classmethod
    def build(cls, L: int) -> "FrdFamily":
        return cls(L, first_irreducible(L))

    def __post_init__(self):
        if self.modulus.bit_length() - 1 != self.L or not is_irreducible(self.modulus):
            raise ValueError("modulus must be irreducible of degree L")

    def mul(self, a: int, b: int) -> int:
        return _poly_mod(_poly_mul(a, b), self.modulus)

    def inv(self, a: int) -> int:
        """Field inverse via extended Euclid."""
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        r0, r1 = self.modulus, _poly_mod(a, self.modulus)
        s0, s1 = 0, 1
        while r1:
            d = r0.bit_length() - r1.bit_length()
            if d < 0:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            r0 ^= r1 << d
            s0 ^= s1 << d
        assert r0 == 1
        return _poly_mod(s0, self.modulus)

    def matrix(self, tau) -> BitMatrix:
        """H_tau with column j = tau * x^j mod modulus."""
        t = tau.bits if isinstance(tau, BitVec) else int(tau)
        cols = []
        acc = _poly_mod(t, self.modulus)
        for _ in range(self.L):
            cols.append(acc)
            acc = _poly_mod(acc << 1, self.modulus)
        rows = [0] * self.L
        for j, c in enumerate(cols):
            while c:
                low = c & -c
                rows[low.bit_length() - 1] |= 1 << j
                c ^= low
        return BitMatrix(self.L, self.L, rows)

    def apply(self, tau, x: BitVec) -> BitVec:
        """H_tau @ x without the matrix: the field product tau * x."""
        t = tau.bits if isinstance(tau, BitVec) else int(tau)
        return BitVec(self.L, self.mul(t, x.bits))

    def apply_inv(self, tau, x: BitVec) -> BitVec:
        """H_tau^-1 @ x = tau^-1 * x (multiplication matrices compose as
        field products)."""
        t = tau.bits if isinstance(tau, BitVec) else int(tau)
        return BitVec(self.L, self.mul(self.inv(t), x.bits))

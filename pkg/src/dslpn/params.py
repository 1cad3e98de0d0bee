"""Parameter derivation: the compression-regime calculator and the full
hash / trapdoor parameter chains, plus entropy and Hamming-ball arithmetic.

Derived quantities are exact rationals or integers wherever possible;
floating point enters only through the binary entropy function and its
inverse (bisection to 1e-12) and through log2 margins, whose sign is always
cross-checked against exact big-integer ball counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple


def entropy(x: float) -> float:
    """Binary entropy H(x) for x in (0, 1)."""
    if not 0.0 < x < 1.0:
        raise ValueError("entropy domain is (0, 1)")
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def entropy_inv(y: float, tol: float = 1e-12) -> float:
    """Unique preimage of y under H in (0, 1/2], by bisection."""
    if not 0.0 < y <= 1.0:
        raise ValueError("entropy_inv domain is (0, 1]")
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if mid == lo or mid == hi:
            break
        if entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def hamming_ball_sizes(n: int, w: int) -> Tuple[int, int, int]:
    """Exact sizes (|B_le|, |B_eq|, |B_reg|) of the radius-w balls over n bits.

    B_reg partitions the n coordinates into w blocks with one set bit each
    and needs w | n; w = 0 gives (1, 1, 1).
    """
    if w < 0 or w > n:
        raise ValueError("need 0 <= w <= n")
    if w == 0:
        return 1, 1, 1
    if n % w != 0:
        raise ValueError("regular ball needs w | n")
    b_le = sum(math.comb(n, t) for t in range(w + 1))
    b_eq = math.comb(n, w)
    b_reg = (n // w) ** w
    return b_le, b_eq, b_reg


def ball_le(n: int, w: int) -> int:
    """Exact |B_le(n, w)|, with w clamped to n."""
    if w >= n:
        return 1 << n
    return sum(math.comb(n, t) for t in range(w + 1))


def min_delta(k: int, d) -> Fraction:
    """Smallest exponent delta (t = n^delta) compatible with compression
    factor D under the sample cap m < n^(k/2)."""
    d = Fraction(d)
    if k < 3:
        raise ValueError("need k >= 3")
    if d <= 0:
        raise ValueError("need D > 0")
    return 1 - (Fraction(k, 2) - 1) / (d * k - 1)


def _ceil_pow(n: int, expo: Fraction) -> int:
    """ceil(n^expo) for rational expo > 0, exactly (integer root)."""
    p, q = expo.numerator, expo.denominator
    x = n ** p
    r = _iroot(x, q)
    return r if r ** q == x else r + 1


def _iroot(x: int, q: int) -> int:
    """floor(x^(1/q)) for big ints."""
    if x < 0:
        raise ValueError
    if x == 0:
        return 0
    r = int(round(x ** (1.0 / q))) if x.bit_length() < 900 else 1 << (x.bit_length() // q + 1)
    while r ** q > x:
        r = (r * (q - 1) + x // r ** (q - 1)) // q
    while (r + 1) ** q <= x:
        r += 1
    return r


def min_m(n: int, k: int, d, delta) -> int:
    """Smallest sample count for compression factor D at t = n^delta:
    ceil(n^(1 + (Dk-1)(1-delta)))."""
    d = Fraction(d)
    delta = Fraction(delta)
    expo = 1 + (d * k - 1) * (1 - delta)
    return _ceil_pow(n, expo)


LOG2_E = math.log2(math.e)


@dataclass(frozen=True)
class CompressionRegime:
    """Concrete sizes for the regular-ball counting inequality.

    t block-sparse inputs of length m must outnumber the D-th power of the
    ball of radius k*t over n bits.  delta is the effective exponent
    log_n(t), kept as a rational when constructed by the derivers.
    """

    k: int
    D: Fraction
    delta: Fraction
    n: int
    m: int
    t: int


@dataclass(frozen=True)
class CompressionCheck:
    passed: bool
    reason: str
    log_margin: float
    lhs_log2: float
    rhs_log2: float
    exact_ok: bool


def check_compression(regime: CompressionRegime) -> CompressionCheck:
    """Evaluate the counting inequality 2^(t log(m/t)) > (2^(kt log(en/kt)+1))^D.

    The log margin uses the displayed upper-bound form; Pass additionally
    requires the exact big-integer comparison |B_reg(m,t)| > |B_le(n,kt)|^D
    (with kt clamped to n), so Pass always implies genuine compression.
    """
    k, n, m, t = regime.k, regime.n, regime.m, regime.t
    d = Fraction(regime.D)
    if t < 1 or t > m:
        return CompressionCheck(False, "degenerate-t", float("-inf"), 0.0, 0.0, False)
    if m ** 2 >= n ** k:
        return CompressionCheck(False, "sample-cap", float("-inf"), 0.0, 0.0, False)
    if m % t != 0:
        return CompressionCheck(False, "t-not-dividing-m", float("-inf"), 0.0, 0.0, False)
    if m == t:
        return CompressionCheck(False, "degenerate-t", 0.0, 0.0, 0.0, False)
    lhs_log2 = t * math.log2(m / t)
    rhs_log2 = float(d) * (k * t * (math.log2(n / (k * t)) + LOG2_E) + 1)
    margin = lhs_log2 - rhs_log2
    if margin <= 0:
        return CompressionCheck(False, "not-compressing", margin, lhs_log2, rhs_log2, False)
    # Exact cross-check with big integers.
    b_reg = (m // t) ** t
    b = ball_le(n, k * t)
    exact_ok = b_reg ** d.denominator > b ** d.numerator
    if not exact_ok:
        return CompressionCheck(False, "not-compressing-exact", margin, lhs_log2, rhs_log2, False)
    return CompressionCheck(True, "ok", margin, lhs_log2, rhs_log2, True)


ALPHA_GRID = [Fraction(i, 2) for i in range(1, 129)]  # 0.5, 1.0, ..., 64


def smallest_alpha(rho_code: Fraction, gamma: float) -> Fraction:
    """Smallest grid alpha with alpha^2/(alpha+1) > rho_code/gamma."""
    bound = float(rho_code) / gamma
    for a in ALPHA_GRID:
        if float(a * a / (a + 1)) > bound:
            return a
    raise ValueError(
        f"no alpha <= 64 satisfies alpha^2/(alpha+1) > {bound:.3f}; "
        "code rate/distance incompatible with this lossiness target"
    )


@dataclass(frozen=True)
class LtdfParams:
    """Everything the trapdoor-function construction needs, with provenance:

    - (k, D, delta, n, m, t): the compression regime; s = log2(m/t).
    - L = t*s: input/branch bit length.
    - Gamma: lossiness factor, D > Gamma; Dprime satisfies 1/D + 1/D' = 1/Gamma.
    - (rho_code, delta_code): rate and correctable-error fraction of the code.
    - gamma = min(delta_code, H^-1(rho_code / Dprime)): noise-ball exponent.
    - alpha: Chernoff slack, smallest grid value with alpha^2/(alpha+1) > rho_code/gamma.
    - ell = ceil(L / rho_code): code block length; eps = gamma/((alpha+1) t).
    """

    k: int
    D: Fraction
    delta: Fraction
    n: int
    m: int
    t: int
    s: int
    L: int
    Gamma: Fraction
    Dprime: Fraction
    rho_code: Fraction
    delta_code: Fraction
    gamma: float
    alpha: Fraction
    ell: int
    eps: float
    compression: CompressionCheck = field(repr=False, compare=False, default=None)

    def regime(self) -> CompressionRegime:
        return CompressionRegime(self.k, self.D, self.delta, self.n, self.m, self.t)

    def validate(self, strict: bool = True) -> None:
        """Re-verify every declared relation; strict additionally demands the
        asymptotic regime bounds (delta > delta_min, m >= m_min)."""
        assert self.Gamma > 1 and self.D > self.Gamma
        assert Fraction(1, 1) / self.D + Fraction(1, 1) / self.Dprime == Fraction(1, 1) / self.Gamma
        assert self.m == self.t * (1 << self.s) and self.s >= 1
        assert self.L == self.t * self.s
        assert self.ell == math.ceil(self.L / self.rho_code)
        h_bound = entropy_inv(float(self.rho_code / self.Dprime))
        assert abs(self.gamma - min(float(self.delta_code), h_bound)) <= 1e-9
        assert self.gamma <= float(self.delta_code) + 1e-12  # inversion feasibility
        assert float(self.alpha ** 2 / (self.alpha + 1)) > float(self.rho_code) / self.gamma
        assert abs(self.eps - self.gamma / (float(self.alpha + 1) * self.t)) <= 1e-15
        check = check_compression(self.regime())
        assert check.passed, f"compression check failed: {check.reason}"
        if strict:
            assert self.delta > min_delta(self.k, self.D)
            assert self.m >= min_m(self.n, self.k, self.D, self.delta)


def derive_ltdf(
    k: int,
    gamma_factor,
    delta_code,
    rho_code,
    n: int,
    D=None,
    t: Optional[int] = None,
    s: Optional[int] = None,
    strict: bool = True,
) -> LtdfParams:
    """Derive trapdoor-function parameters for lossiness factor Gamma at
    dimension n, given the code constants (delta_code, rho_code).

    D defaults to Gamma + 1.  With strict=True (the calculator contract) t
    and m are chosen just above the regime thresholds and every invariant
    including delta > delta_min and m >= m_min is asserted.  strict=False
    admits hand-picked (t, s) for runnable desk/tiny instances where the
    asymptotic bounds cannot hold; the counting check still must pass.
    """
    gamma_factor = Fraction(gamma_factor)
    rho_code = Fraction(rho_code)
    delta_code = Fraction(delta_code)
    if gamma_factor <= 1:
        raise ValueError("need Gamma > 1")
    d = Fraction(D) if D is not None else gamma_factor + 1
    if d <= gamma_factor:
        raise ValueError("need D > Gamma")
    if strict:
        if t is not None or s is not None:
            raise ValueError("strict derivation picks t and s itself")
        dmin = min_delta(k, d)
        # delta one eighth of the way into (delta_min, 1); t = ceil(n^delta).
        delta_target = dmin + (1 - dmin) / 8
        t = _ceil_pow(n, delta_target)
        delta_eff = _log_ratio(t, n)
        mmin = min_m(n, k, d, delta_eff)
        s = max(1, ((mmin + t - 1) // t - 1).bit_length())
        while t << s < mmin:
            s += 1
    else:
        if t is None or s is None:
            raise ValueError("non-strict derivation needs explicit t and s")
        delta_eff = _log_ratio(t, n)
    m = t << s
    if m * m >= n ** k:
        raise ValueError(f"m = {m} violates the sample cap m < n^(k/2)")
    dprime = gamma_factor * d / (d - gamma_factor)
    assert Fraction(1) / d + Fraction(1) / dprime == Fraction(1) / gamma_factor
    gamma = min(float(delta_code), entropy_inv(float(rho_code / dprime)))
    alpha = smallest_alpha(rho_code, gamma)
    ell_len = math.ceil(t * s / rho_code)
    eps = gamma / (float(alpha + 1) * t)
    params = LtdfParams(
        k=k, D=d, delta=delta_eff, n=n, m=m, t=t, s=s, L=t * s,
        Gamma=gamma_factor, Dprime=dprime, rho_code=rho_code,
        delta_code=delta_code, gamma=gamma, alpha=alpha, ell=ell_len, eps=eps,
        compression=check_compression(CompressionRegime(k, d, delta_eff, n, m, t)),
    )
    params.validate(strict=strict)
    return params


def _log_ratio(t: int, n: int) -> Fraction:
    """log_n(t) as a rational approximation (only recorded, never used in
    an exact comparison)."""
    return Fraction(math.log2(t)).limit_denominator(10 ** 6) / Fraction(
        math.log2(n)
    ).limit_denominator(10 ** 6)


@dataclass(frozen=True)
class CrhfParams:
    """Hash parameters: input t*s bits, output out_bits = ceil((1-rho) t s),
    rho = 1/2 - 1/D, noise rate eps = log2(n)/(8 t)."""

    k: int
    D: Fraction
    delta: Fraction
    n: int
    m: int
    t: int
    s: int
    ttilde: int
    rho: Fraction
    out_bits: int
    eps: float
    lam: int
    compression: CompressionCheck = field(repr=False, compare=False, default=None)

    def regime(self) -> CompressionRegime:
        return CompressionRegime(self.k, self.D, self.delta, self.n, self.m, self.t)

    def validate(self, strict: bool = True) -> None:
        assert self.D > 2
        assert self.rho == Fraction(1, 2) - 1 / self.D
        assert self.ttilde == self.t * self.s and self.m == self.t * (1 << self.s)
        assert self.out_bits == math.ceil((1 - self.rho) * self.ttilde)
        assert self.rho * self.ttilde > 2 * self.lam
        assert self.out_bits < self.ttilde - 2 * self.lam  # compression gap
        if strict:
            assert abs(self.eps - math.log2(self.n) / (8 * self.t)) < 1e-12
            check = check_compression(self.regime())
            assert check.passed, f"compression check failed: {check.reason}"
            assert self.delta > min_delta(self.k, self.D)
            assert self.m >= min_m(self.n, self.k, self.D, self.delta)


def derive_crhf(k: int, D, lam: int, n_cap: int = 1 << 26) -> CrhfParams:
    """Hash parameter chain: rho = 1/2 - 1/D, n >= (2 lam / rho)^(1/delta),
    t ~ n^delta, m = t 2^s past the regime threshold, eps = log2(n)/(8 t).

    The constant 8 in eps keeps 8*eps*t = log2(n), i.e. the linear-test bias
    floor 2^(-8 eps t - 1) equals 1/(2n).  Searches upward over (n, s) until
    the counting check passes under the sample cap.
    """
    d = Fraction(D)
    if d <= 2:
        raise ValueError("need D > 2")
    rho = Fraction(1, 2) - 1 / d
    dmin = min_delta(k, d)
    delta_target = dmin + (1 - dmin) / 2
    n = max(4, _ceil_pow(math.ceil(2 * lam / rho), 1 / delta_target))
    while n <= n_cap:
        t = _ceil_pow(n, delta_target)
        delta_eff = _log_ratio(t, n)
        mmin = min_m(n, k, d, delta_eff)
        s = max(1, ((mmin + t - 1) // t - 1).bit_length())
        while True:
            m = t << s
            if m * m >= n ** k:
                break
            regime = CompressionRegime(k, d, delta_eff, n, m, t)
            check = check_compression(regime)
            if check.passed and rho * t * s > 2 * lam:
                params = CrhfParams(
                    k=k, D=d, delta=delta_eff, n=n, m=m, t=t, s=s,
                    ttilde=t * s, rho=rho,
                    out_bits=math.ceil((1 - rho) * t * s),
                    eps=math.log2(n) / (8 * t), lam=lam,
                    compression=check,
                )
                params.validate(strict=True)
                return params
            s += 1
        n = n + max(1, n // 8)
    raise ValueError("no parameter point found below the n cap")


def make_crhf_concrete(k: int, D, n: int, t: int, s: int, lam: int, eps: Optional[float] = None) -> CrhfParams:
    """Hand-sized hash parameters for exhaustive tests: same invariants minus
    the asymptotic regime bounds."""
    d = Fraction(D)
    if d <= 2:
        raise ValueError("need D > 2")
    rho = Fraction(1, 2) - 1 / d
    params = CrhfParams(
        k=k, D=d, delta=_log_ratio(t, n), n=n, m=t << s, t=t, s=s,
        ttilde=t * s, rho=rho, out_bits=math.ceil((1 - rho) * t * s),
        eps=(math.log2(n) / (8 * t)) if eps is None else eps, lam=lam,
    )
    params.validate(strict=False)
    return params


def params_table(obj) -> List[Tuple[str, str]]:
    """(name, value) rows for reports; exact values rendered exactly."""
    rows = []
    for name in obj.__dataclass_fields__:
        if name == "compression":
            continue
        val = getattr(obj, name)
        if isinstance(val, Fraction):
            rows.append((name, f"{val.numerator}/{val.denominator}"))
        elif isinstance(val, float):
            rows.append((name, repr(val)))
        else:
            rows.append((name, str(val)))
    return rows

"""Exponential sums and additive machinery: incomplete sums with exact
rational phases, an explicit discrepancy check, Weyl differencing and its
majorant, and exact counts of symmetric power-sum systems."""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .ffield import FpPolynomial

ERDOS_TURAN_CONSTANT = 3.0
WEYL_LOOP_GUARD = 10 ** 9
VINOGRADOV_STATE_GUARD = 10 ** 8

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CheckResult:
    lhs: float
    rhs: float
    ok: bool


def _phase_mod_one(x) -> float:
    """Fractional part of a real or Fraction phase, in [0, 1)."""
    return float(x - math.floor(x))


def exp_sum(f, M: int) -> complex:
    """Sum of e(f(n)) for n = 1..M.

    Two phase forms: a pair (g, k) with g over F_p gives f(n) = k*g(n)/p,
    reduced exactly in integers before the exponential; otherwise f is a
    sequence of ascending real (or Fraction) coefficients evaluated by
    Horner.
    """
    if M < 1:
        raise ValueError("M >= 1 required")
    total = 0j
    if isinstance(f, tuple) and len(f) == 2 and isinstance(f[0], FpPolynomial):
        g, k = f
        p = g.modulus.p
        for n in range(1, M + 1):
            total += cmath.exp(1j * TWO_PI * ((k * g(n)) % p) / p)
        return total
    coeffs = list(f)
    for n in range(1, M + 1):
        x = 0
        for c in reversed(coeffs):
            x = x * n + c
        total += cmath.exp(1j * TWO_PI * _phase_mod_one(x))
    return total


def erdos_turan_check(seq: Sequence[float], alpha: float, beta: float,
                      K: int) -> CheckResult:
    """Discrepancy of seq against the interval [alpha, beta] versus the
    smoothed harmonic majorant with explicit constant 3.

    lhs = |#{n : gamma_n in [alpha, beta]} - M(beta - alpha)|,
    rhs = 3 (M/K + sum_(k<=K) (1/K + min(beta - alpha, 1/k)) |sum_n e(k gamma_n)|).
    """
    if not 0.0 <= alpha <= beta <= 1.0:
        raise ValueError(f"malformed interval [{alpha}, {beta}]")
    if K < 1:
        raise ValueError("K >= 1 required")
    gam = np.asarray(seq, dtype=np.float64)
    M = len(gam)
    hits = int(((gam >= alpha) & (gam <= beta)).sum())
    lhs = abs(hits - M * (beta - alpha))
    width = beta - alpha
    rhs = M / K
    for k in range(1, K + 1):
        s_k = abs(np.exp(2j * np.pi * k * gam).sum())
        rhs += (1.0 / K + min(width, 1.0 / k)) * s_k
    rhs *= ERDOS_TURAN_CONSTANT
    return CheckResult(lhs=lhs, rhs=rhs, ok=lhs <= rhs)


def _as_fraction(theta) -> Fraction:
    if isinstance(theta, Fraction):
        return theta
    if isinstance(theta, tuple) and len(theta) == 2:
        return Fraction(theta[0], theta[1])
    if isinstance(theta, int):
        return Fraction(theta)
    raise TypeError("theta must be a Fraction, an (a, q) pair or an integer")


def weyl_majorant(theta, m: int, M: int) -> float:
    """Right-hand side of the Weyl differencing estimate for a degree-m
    phase with leading coefficient theta (an exact rational):

        M^(1-m/2^(m-1)) * (sum min{M, ||theta m! l_1...l_(m-1)||^(-1)})^(2^(1-m))

    over all |l_i| < M.  Terms whose argument lands on an integer (in
    particular every l_i = 0 term) contribute the cap M.  All norm
    comparisons are exact integer arithmetic.
    """
    if m < 2:
        raise ValueError("m >= 2 required")
    if M < 1:
        raise ValueError("M >= 1 required")
    if M ** (m - 1) > WEYL_LOOP_GUARD:
        raise ValueError(f"loop guard exceeded: M^(m-1) = {M ** (m - 1)}")
    th = _as_fraction(theta)
    a, q = th.numerator, th.denominator
    fact = math.factorial(m)
    total = Fraction(0)
    ells = range(-(M - 1), M)
    for ls in itertools.product(ells, repeat=m - 1):
        prod = 1
        for l in ls:
            prod *= l
        r = (a * fact * prod) % q
        if r == 0:
            total += M
        else:
            rr = min(r, q - r)  # ||x|| = rr/q, so the reciprocal is q/rr
            total += min(Fraction(M), Fraction(q, rr))
    return M ** (1 - m / 2 ** (m - 1)) * float(total) ** (2 ** (1 - m))


def weyl_constant(m: int) -> float:
    """Comparison constant folded into majorant checks."""
    return 2.0 ** m


def weyl_square_identity(g: FpPolynomial, k: int, M: int) -> CheckResult:
    """One exact differencing step: |S|^2 equals the shifted double sum

        sum_(|h|<M) sum_(n, n+h in [1,M]) e(k (g(n+h) - g(n)) / p).

    Both sides evaluated numerically; agreement within 1e-6 M^2.
    """
    if M < 1:
        raise ValueError("M >= 1 required")
    p = g.modulus.p
    s = exp_sum((g, k), M)
    lhs = abs(s) ** 2
    rhs = 0j
    for h in range(-(M - 1), M):
        lo = max(1, 1 - h)
        hi = min(M, M - h)
        for n in range(lo, hi + 1):
            rhs += cmath.exp(1j * TWO_PI * ((k * (g(n + h) - g(n))) % p) / p)
    ok = abs(lhs - rhs) < 1e-6 * M * M
    return CheckResult(lhs=lhs, rhs=rhs.real, ok=ok)


@dataclass(frozen=True)
class VinogradovInstance:
    k: int
    m: int
    H: int

    def __post_init__(self):
        if self.k < 1 or self.m < 1 or self.H < 1:
            raise ValueError("k, m, H must all be >= 1")


@dataclass(frozen=True)
class PowerSumVector:
    s: tuple[int, ...]


def power_sum_vector(xs: Iterable[int], m: int) -> PowerSumVector:
    """(s_1, ..., s_m) with s_j the sum of j-th powers of xs."""
    xs = list(xs)
    return PowerSumVector(tuple(sum(x ** j for x in xs) for j in range(1, m + 1)))


def count_vinogradov(inst: VinogradovInstance) -> int:
    """Exact number of solutions of the k-versus-k system of the first m
    symmetric power equations with all variables in [1, H].

    Builds the distribution of (s_1, ..., s_m) over k-tuples by k sparse
    convolutions with the single-variable atom set, then sums the squared
    multiplicities.
    """
    k, m, H = inst.k, inst.m, inst.H
    if H ** m * k > VINOGRADOV_STATE_GUARD:
        raise ValueError("state-space guard exceeded")
    atoms = [tuple(x ** j for j in range(1, m + 1)) for x in range(1, H + 1)]
    dist = {(0,) * m: 1}
    for _ in range(k):
        nxt: dict = {}
        for s, cnt in dist.items():
            for a in atoms:
                key = tuple(si + ai for si, ai in zip(s, a))
                nxt[key] = nxt.get(key, 0) + cnt
        dist = nxt
        if len(dist) > VINOGRADOV_STATE_GUARD:
            raise ValueError("state-space guard exceeded")
    return sum(c * c for c in dist.values())


def kappa(m: int, table: dict | None = None) -> int:
    """Variables-per-side budget for the degree-m system: m^2 - 1, with an
    optional override table for tighter future values."""
    if m < 2:
        raise ValueError("m >= 2 required")
    if table and m in table:
        return table[m]
    return m * m - 1

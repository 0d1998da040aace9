"""Arithmetic over prime fields F_p: elements, polynomials, square roots,
discriminants.

Residues are stored in least nonnegative form, values in [0, p-1].  The
modulus is capped below 2**62 so that products of two residues stay inside
128 bits on any sane platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Union

MAX_MODULUS = 1 << 62

# Deterministic Miller-Rabin witnesses, valid for every n < 2**64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for n < 2**64."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """An odd prime p with 3 <= p < 2**62."""

    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int):
            raise TypeError(f"modulus must be an integer, got {type(p).__name__}")
        if p < 3 or p >= MAX_MODULUS:
            raise ValueError(f"modulus must satisfy 3 <= p < 2**62, got {p}")
        if p % 2 == 0 or not is_prime(p):
            raise ValueError(f"modulus must be an odd prime, got {p}")

    def element(self, value: int) -> "FpElement":
        return FpElement(value % self.p, self)

    def __int__(self) -> int:
        return self.p

    def __repr__(self) -> str:
        return f"PrimeModulus({self.p})"


@dataclass(frozen=True)
class FpElement:
    """A residue modulo a PrimeModulus, stored in [0, p-1]."""

    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus.p)

    def _coerce(self, other) -> "FpElement":
        if isinstance(other, FpElement):
            if other.modulus != self.modulus:
                raise ValueError(
                    f"mixed moduli: {self.modulus.p} vs {other.modulus.p}")
            return other
        if isinstance(other, int):
            return FpElement(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value + o.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value - o.value, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o.value - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value * o.value, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.value, self.modulus)

    def __pow__(self, e: int):
        return FpElement(pow(self.value, e, self.modulus.p), self.modulus)

    def inverse(self) -> "FpElement":
        if self.value == 0:
            raise ZeroDivisionError("inverse of 0 mod p")
        return FpElement(pow(self.value, -1, self.modulus.p), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self) -> int:
        return self.value

    def signed(self) -> int:
        """Least-absolute-value representative, in (-p/2, p/2)."""
        p = self.modulus.p
        return self.value if self.value <= p // 2 else self.value - p

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus.p})"


def signed_rep(x: int, p: int) -> int:
    """Least-absolute-value representative of x mod p, in (-p/2, p/2)."""
    r = x % p
    return r if r <= p // 2 else r - p


class QrStatus(Enum):
    ZERO = "zero"
    RESIDUE = "residue"
    NONRESIDUE = "nonresidue"


def _as_residue(a: Union[FpElement, int], modulus: PrimeModulus | None) -> tuple[int, PrimeModulus]:
    if isinstance(a, FpElement):
        if modulus is not None and a.modulus != modulus:
            raise ValueError("mixed moduli")
        return a.value, a.modulus
    if modulus is None:
        raise ValueError("plain integer needs an explicit modulus")
    return a % modulus.p, modulus


def is_qr(a: Union[FpElement, int], modulus: PrimeModulus | None = None) -> QrStatus:
    """Euler criterion, tri-state: zero / residue / nonresidue."""
    v, mod = _as_residue(a, modulus)
    p = mod.p
    if v == 0:
        return QrStatus.ZERO
    return QrStatus.RESIDUE if pow(v, (p - 1) // 2, p) == 1 else QrStatus.NONRESIDUE


def sqrt_mod_int(a: int, p: int) -> tuple[int, ...]:
    """Square roots of a modulo the odd prime p, as a tuple of residues.

    Returns () when a is a nonresidue, (0,) for a=0, else the two roots.
    Tonelli-Shanks with the usual fast paths for p % 4 == 3 and p % 8 == 5.
    """
    a %= p
    if a == 0:
        return (0,)
    if pow(a, (p - 1) // 2, p) != 1:
        return ()
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    elif p % 8 == 5:
        r = pow(a, (p + 3) // 8, p)
        if r * r % p != a:
            r = r * pow(2, (p - 1) // 4, p) % p
    else:
        # Tonelli-Shanks: write p-1 = q * 2^s with q odd.
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    assert r * r % p == a
    return tuple(sorted((r, p - r))) if r != p - r else (r,)


def sqrt_mod(a: Union[FpElement, int], modulus: PrimeModulus | None = None) -> set[FpElement]:
    """All square roots of a in F_p, as a set of FpElement (possibly empty)."""
    v, mod = _as_residue(a, modulus)
    return {FpElement(r, mod) for r in sqrt_mod_int(v, mod.p)}


# ---------------------------------------------------------------------------
# polynomials


def _normalize(coeffs: Iterable[int], p: int) -> tuple[int, ...]:
    cs = [c % p for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class FpPolynomial:
    """Polynomial over F_p, coefficients ascending, trailing zeros stripped.

    The zero polynomial has empty coeffs and degree -1 (sentinel).
    """

    coeffs: tuple[int, ...]
    modulus: PrimeModulus

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _normalize(self.coeffs, self.modulus.p))

    @classmethod
    def from_ints(cls, coeffs: Sequence[int], modulus: PrimeModulus) -> "FpPolynomial":
        return cls(tuple(coeffs), modulus)

    @classmethod
    def from_text(cls, text: str, modulus: PrimeModulus) -> "FpPolynomial":
        """Parse the CLI encoding: comma-separated coefficients, ascending.

        "1,0,0,1" over F_7 is X^3 + 1.
        """
        parts = [s.strip() for s in text.split(",")]
        try:
            coeffs = [int(s) for s in parts]
        except ValueError:
            raise ValueError(f"bad polynomial text {text!r}: "
                             "expected comma-separated integers") from None
        return cls(tuple(coeffs), modulus)

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        return ",".join(str(c) for c in self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> int:
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: int) -> int:
        """Horner evaluation at the integer x, returns a residue in [0, p-1]."""
        p = self.modulus.p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % p
        return acc

    def derivative(self) -> "FpPolynomial":
        p = self.modulus.p
        return FpPolynomial(tuple(i * c % p for i, c in enumerate(self.coeffs))[1:],
                            self.modulus)

    def shift(self, t: int) -> "FpPolynomial":
        """The polynomial f(X + t), by Horner in the polynomial ring."""
        p = self.modulus.p
        t %= p
        out: list[int] = []
        for c in reversed(self.coeffs):
            new = [0] * (len(out) + 1)
            for i, a in enumerate(out):
                new[i] = (new[i] + a * t) % p
                new[i + 1] = (new[i + 1] + a) % p
            new[0] = (new[0] + c) % p
            out = new
        return FpPolynomial(tuple(out), self.modulus)

    def __mul__(self, other: "FpPolynomial") -> "FpPolynomial":
        if self.modulus != other.modulus:
            raise ValueError("mixed moduli")
        p = self.modulus.p
        if self.is_zero() or other.is_zero():
            return FpPolynomial((), self.modulus)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = (out[i + j] + a * b) % p
        return FpPolynomial(tuple(out), self.modulus)

    def __repr__(self) -> str:
        return f"FpPolynomial({self.to_text()!r} mod {self.modulus.p})"


def poly_eval(f: FpPolynomial, x: Union[FpElement, int]) -> FpElement:
    """Evaluate f at x by Horner's rule."""
    if isinstance(x, FpElement):
        if x.modulus != f.modulus:
            raise ValueError(
                f"mixed moduli: polynomial mod {f.modulus.p}, point mod {x.modulus.p}")
        x = x.value
    return FpElement(f(x), f.modulus)


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by b, both ascending coefficient lists, b nonzero."""
    r = a[:]
    db = len(b) - 1
    inv_lead = pow(b[-1], -1, p)
    while len(r) - 1 >= db and r:
        dr = len(r) - 1
        factor = r[-1] * inv_lead % p
        shiftn = dr - db
        for i, c in enumerate(b):
            r[i + shiftn] = (r[i + shiftn] - factor * c) % p
        while r and r[-1] == 0:
            r.pop()
    return r


def poly_gcd(f: FpPolynomial, g: FpPolynomial) -> FpPolynomial:
    """Monic gcd of f and g."""
    if f.modulus != g.modulus:
        raise ValueError("mixed moduli")
    p = f.modulus.p
    a, b = list(f.coeffs), list(g.coeffs)
    while b:
        a, b = b, _poly_mod(a, b, p)
    if not a:
        return FpPolynomial((), f.modulus)
    inv = pow(a[-1], -1, p)
    return FpPolynomial(tuple(c * inv % p for c in a), f.modulus)


def resultant(f: FpPolynomial, g: FpPolynomial) -> int:
    """Res(f, g) mod p via the Euclidean scheme.

    Requires deg f >= 1 or deg g >= 1; a shared root (over the closure)
    gives 0.
    """
    if f.modulus != g.modulus:
        raise ValueError("mixed moduli")
    p = f.modulus.p
    a, b = list(f.coeffs), list(g.coeffs)
    if not a or not b:
        return 0
    res = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return res * pow(b[0], da, p) % p
        if da < db:
            if (da * db) % 2 == 1:
                res = (-res) % p
            a, b = b, a
            continue
        r = _poly_mod(a, b, p)
        if not r:
            return 0
        dr = len(r) - 1
        if (da * db) % 2 == 1:
            res = (-res) % p
        res = res * pow(b[-1], da - dr, p) % p
        a, b = b, r


def discriminant(f: FpPolynomial) -> FpElement:
    """disc(f) = (-1)^(m(m-1)/2) Res(f, f') / lc(f), m = deg f.

    Zero exactly when f has a repeated root over the algebraic closure.
    """
    m = f.degree
    if m < 1:
        raise ValueError("discriminant needs deg f >= 1")
    p = f.modulus.p
    res = resultant(f, f.derivative())
    sign = -1 if (m * (m - 1) // 2) % 2 == 1 else 1
    val = sign * res * pow(f.leading_coefficient, -1, p)
    return FpElement(val % p, f.modulus)


def monic_square_root(f: FpPolynomial) -> FpPolynomial | None:
    """The monic h with h**2 = f/lc(f), or None when no such h exists."""
    if f.is_zero():
        return FpPolynomial((), f.modulus)
    if f.degree % 2 == 1:
        return None
    p = f.modulus.p
    inv_lead = pow(f.leading_coefficient, -1, p)
    m = [c * inv_lead % p for c in f.coeffs]
    k = f.degree // 2
    h = [0] * k + [1]
    inv2 = pow(2, -1, p)
    for j in range(1, k + 1):
        # coefficient of X^(2k-j) in h^2, using entries of h above k-j
        acc = 0
        for i in range(k - j + 1, k + 1):
            l = 2 * k - j - i
            if 0 <= l <= k:
                acc += h[i] * h[l]
        h[k - j] = (m[2 * k - j] - acc) % p * inv2 % p
    hp = FpPolynomial(tuple(h), f.modulus)
    if (hp * hp).coeffs == tuple(m):
        return hp
    return None


def is_square_times_unit(f: FpPolynomial) -> bool:
    """True when f = c * h(X)**2 for a scalar c, i.e. f is a square over
    the algebraic closure (every root has even multiplicity)."""
    return monic_square_root(f) is not None

"""Integer lattices cut out by a single congruence mod p, exact successive
minima against box-shaped bodies, the double-factorial counting inequality,
the five-dimensional proof lattice for the concentration bound, the
determinant-congruence solution cap, and exact integer-point counts on the
auxiliary plane curves."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .ffield import FpPolynomial, PrimeModulus, is_prime, sqrt_mod_int

ENUM_GUARD = 10 ** 9
AUX_CURVE_GUARD = 10 ** 6
_VECTOR_CHUNK = 1 << 22


@dataclass(frozen=True)
class CongruenceLattice:
    """Gamma = {X in Z^n : sum c_i X_i = 0 (mod p)}, 2 <= n <= 6."""

    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        n = len(self.coeffs)
        if not 2 <= n <= 6:
            raise ValueError(f"dimension must be in [2, 6], got {n}")
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        object.__setattr__(self, "coeffs", tuple(c % self.p for c in self.coeffs))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def contains(self, v: Sequence[int]) -> bool:
        return sum(c * x for c, x in zip(self.coeffs, v)) % self.p == 0

    def determinant(self) -> int:
        """Index of Gamma in Z^n: p unless the congruence is vacuous."""
        return 1 if all(c == 0 for c in self.coeffs) else self.p


@dataclass(frozen=True)
class ConvexBox:
    """D = {x : |x_i| <= halfwidth_i}, a symmetric box body."""

    halfwidths: tuple

    def __post_init__(self):
        hw = tuple(Fraction(h) for h in self.halfwidths)
        if not hw or any(h <= 0 for h in hw):
            raise ValueError("halfwidths must be positive")
        object.__setattr__(self, "halfwidths", hw)

    @property
    def n(self) -> int:
        return len(self.halfwidths)

    def volume(self) -> Fraction:
        v = Fraction(1)
        for h in self.halfwidths:
            v *= 2 * h
        return v


@dataclass(frozen=True)
class PointCount:
    count: int
    points: tuple[tuple[int, ...], ...] | None


def _range_bounds(box: ConvexBox, scale: Fraction) -> list[int]:
    return [math.floor(scale * h) for h in box.halfwidths]


def lattice_points_in_box(lat: CongruenceLattice, box: ConvexBox,
                          scale=1, collect: bool = False) -> PointCount:
    """Exact count of Gamma intersected with scale*D.

    Enumerates the free coordinates and solves the congruence for a pivot
    coordinate whose coefficient is invertible mod p, counting the in-range
    representatives of its residue class.  The trailing free coordinates
    are swept as one vectorized block; leading coordinates are chunked on
    top of it, so memory stays bounded while counts merge by summation.
    """
    if lat.n != box.n:
        raise ValueError("dimension mismatch between lattice and box")
    scale = Fraction(scale)
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    vol = 1.0
    for h in box.halfwidths:
        vol *= 2 * float(scale * h) + 1
    if vol > ENUM_GUARD:
        raise ValueError(f"enumeration volume {vol:.3g} above guard {ENUM_GUARD}")
    p = lat.p
    pivot = next((j for j, c in enumerate(lat.coeffs) if c % p != 0), None)
    if pivot is None:
        raise ValueError("all coefficients divisible by p")
    bounds = _range_bounds(box, scale)
    inv = pow(lat.coeffs[pivot], -1, p)
    free = [j for j in range(lat.n) if j != pivot]
    b_piv = bounds[pivot]

    # split free dims: python loop over the head, numpy block over the tail
    sizes = [2 * bounds[j] + 1 for j in free]
    cut = len(free)
    block = 1
    while cut > 0 and block * sizes[cut - 1] <= _VECTOR_CHUNK:
        block *= sizes[cut - 1]
        cut -= 1
    head, tail = free[:cut], free[cut:]

    tail_vals = [np.arange(-bounds[j], bounds[j] + 1, dtype=np.int64) for j in tail]
    tail_shape = tuple(len(v) for v in tail_vals)
    tail_sum = np.zeros(1, dtype=np.int64)
    for j, vals in zip(tail, tail_vals):
        tail_sum = (tail_sum[:, None] + (lat.coeffs[j] * vals % p)[None, :]).reshape(-1) % p

    count = 0
    pts: list[tuple[int, ...]] = []
    for combo in itertools.product(*[range(-bounds[j], bounds[j] + 1) for j in head]):
        s0 = sum(lat.coeffs[j] * x for j, x in zip(head, combo)) % p
        root = (p - (s0 + tail_sum)) % p * inv % p
        # reps of each class in [-b, b]: (b - r)//p + (b + r)//p + 1
        reps = (b_piv - root) // p + (b_piv + root) // p + 1
        count += int(reps.sum())
        if collect:
            for idx in np.flatnonzero(reps > 0):
                t_combo = np.unravel_index(int(idx), tail_shape) if tail else ()
                v = [0] * lat.n
                for j, x in zip(head, combo):
                    v[j] = x
                for j, vals, ti in zip(tail, tail_vals, t_combo):
                    v[j] = int(vals[ti])
                r = int(root[idx])
                x = r - ((r + b_piv) // p) * p
                while x <= b_piv:
                    v[pivot] = x
                    pts.append(tuple(v))
                    x += p
    return PointCount(count=count, points=tuple(pts) if collect else None)


def _rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals, exact."""
    mat = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][c]
        mat[rank] = [v * inv for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][c] != 0:
                f = mat[r][c]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


@dataclass(frozen=True)
class MinimaReport:
    lambdas: tuple[Fraction, ...]
    witnesses: tuple[tuple[int, ...], ...]


def _shell_norm(v: Sequence[int], box: ConvexBox) -> Fraction:
    """Smallest lambda with v in lambda*D."""
    return max(Fraction(abs(x)) / h for x, h in zip(v, box.halfwidths))


def successive_minima(lat: CongruenceLattice, box: ConvexBox,
                      upto: int | None = None) -> MinimaReport:
    """Exact successive minima of D with respect to Gamma, with witnesses.

    Doubles the enumeration scale until the collected vectors span R^n,
    then scans them in order of their exact box norm, keeping each vector
    that grows the span; the i-th kept norm is lambda_i.  All arithmetic is
    rational, so the minima are attained values, not approximations.

    upto requests only the first few minima; bodies whose later minima sit
    beyond the enumeration guard can still report their early ones exactly.
    """
    if lat.n != box.n:
        raise ValueError("dimension mismatch between lattice and box")
    n = lat.n if upto is None else min(upto, lat.n)
    if n < 1:
        raise ValueError("upto must be >= 1")

    def enum_volume(s: Fraction) -> float:
        vol = 1.0
        for h in box.halfwidths:
            vol *= 2 * float(s * h) + 1
        return vol

    # start small enough that huge bodies (whose minima sit far below 1)
    # never trip the enumeration guard on the way up
    scale = Fraction(1)
    while enum_volume(scale) > 10 ** 6 and scale > Fraction(1, 2 ** 40):
        scale /= 2
    while True:
        pc = lattice_points_in_box(lat, box, scale=scale, collect=True)
        nonzero = [v for v in pc.points if any(v)]
        if len(nonzero) >= n and _rank(nonzero) >= n:
            break
        scale *= 2
    decorated = sorted((_shell_norm(v, box), v) for v in nonzero)
    lambdas: list[Fraction] = []
    witnesses: list[tuple[int, ...]] = []
    for norm, v in decorated:
        if _rank(witnesses + [v]) > len(witnesses):
            lambdas.append(norm)
            witnesses.append(v)
            if len(witnesses) == n:
                break
    report = MinimaReport(lambdas=tuple(lambdas), witnesses=tuple(witnesses))
    _validate_minima(lat, box, report, n)
    return report


def _validate_minima(lat: CongruenceLattice, box: ConvexBox,
                     rep: MinimaReport, n: int):
    lams, wits = rep.lambdas, rep.witnesses
    assert len(lams) == len(wits) == n
    assert all(a <= b for a, b in zip(lams, lams[1:]))
    for lam, w in zip(lams, wits):
        assert lat.contains(w)
        assert _shell_norm(w, box) <= lam
    assert _rank(wits) == n


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


@dataclass(frozen=True)
class Cor7Report:
    product: float
    bound: float
    ok: bool
    point_count: int
    minima: MinimaReport


def cor7_check(lat: CongruenceLattice, box: ConvexBox) -> Cor7Report:
    """Product of min{lambda_i, 1} against (2n+1)!! / #(D cap Gamma),
    compared exactly in rational arithmetic."""
    rep = successive_minima(lat, box)
    pc = lattice_points_in_box(lat, box)
    prod = Fraction(1)
    for lam in rep.lambdas:
        prod *= min(lam, Fraction(1))
    bound = Fraction(double_factorial(2 * lat.n + 1), pc.count)
    return Cor7Report(product=float(prod), bound=float(bound),
                      ok=prod <= bound, point_count=pc.count, minima=rep)


def minkowski_check(lat: CongruenceLattice, box: ConvexBox) -> Cor7Report:
    """First-minimum form of Minkowski's theorem: lambda_1^n vol(D) <= 2^n det."""
    rep = successive_minima(lat, box)
    lhs = rep.lambdas[0] ** lat.n * box.volume()
    rhs = Fraction(2 ** lat.n * lat.determinant())
    return Cor7Report(product=float(lhs), bound=float(rhs), ok=lhs <= rhs,
                      point_count=-1, minima=rep)


@dataclass(frozen=True)
class ProofLattice:
    lattice: CongruenceLattice
    box: ConvexBox
    proof_scale_ok: bool  # 8M^3 < p, the regime the argument actually runs in


def build_thm2_lattice(c: Sequence[int], M: int, p: int) -> ProofLattice:
    """Five-dimensional lattice and body used to bound concentration on
    shifted cubics: coordinates (X_2, X_3, X~_2, X_1, X~_1) subject to

        X_2 + c_3 X_3 + c_2 X~_2 + c_1 X_1 + c_0 X~_1 = 0 (mod p),

    with halfwidths (8M^2, 8M^3, 8M^2, 8M, 8M)."""
    if len(c) != 4:
        raise ValueError("need coefficients (c_0, c_1, c_2, c_3)")
    if M < 1:
        raise ValueError("M >= 1 required")
    c0, c1, c2, c3 = (x % p for x in c)
    lat = CongruenceLattice(coeffs=(1, c3, c2, c1, c0), p=p)
    box = ConvexBox(halfwidths=(8 * M ** 2, 8 * M ** 3, 8 * M ** 2, 8 * M, 8 * M))
    return ProofLattice(lattice=lat, box=box, proof_scale_ok=8 * M ** 3 < p)


def shifted_congruence_count(c: Sequence[int], M: int, p: int) -> int:
    """Solutions of y^2 - c_0 y = c_3 x^3 + c_2 x^2 + c_1 x (mod p) with
    |x|, |y| <= M, counted exactly by solving the quadratic in y per x."""
    if M < 0:
        raise ValueError("M >= 0 required")
    c0, c1, c2, c3 = (x % p for x in c)
    inv2 = pow(2, -1, p)
    count = 0
    for x in range(-M, M + 1):
        rhs = (c3 * x ** 3 + c2 * x * x + c1 * x) % p
        # y^2 - c0 y - rhs = 0: discriminant c0^2 + 4 rhs
        disc = (c0 * c0 + 4 * rhs) % p
        for r in sqrt_mod_int(disc, p):
            y0 = (c0 + r) * inv2 % p
            first = y0 - ((y0 + M) // p) * p
            y = first
            while y <= M:
                count += 1
                y += p
    return count


def lemma6_count(f: FpPolynomial, g: FpPolynomial,
                 xs: Sequence[int], ys: Sequence[int]) -> int:
    """Exact number of (x, y) in F_p^2 with f(x) = g(y) whose row
    (x^n, ..., x, y) is a rational dependency of the interpolation rows
    (x_i^n, ..., x_i, y_i).

    With the x_i distinct and nonzero the dependency forces y = h(x) for
    the unique degree-<=n polynomial h with zero constant term through the
    n data points, so the count reduces to a single-variable congruence of
    degree at most mn.  The mn cap is asserted.
    """
    p = f.modulus.p
    if g.modulus.p != p:
        raise ValueError("mixed moduli")
    n, m = f.degree, g.degree
    if n < 1 or m < 1:
        raise ValueError("f and g must be nonconstant")
    if n % m == 0:
        raise ValueError(f"degree hypothesis violated: {m} divides {n}")
    xs = [x % p for x in xs]
    ys = [y % p for y in ys]
    if len(xs) != n or len(ys) != n:
        raise ValueError(f"need exactly n = {n} interpolation points")
    if len(set(xs)) != n:
        raise ValueError("interpolation abscissas must be pairwise distinct mod p")
    if any(x == 0 for x in xs):
        raise ValueError("interpolation abscissas must be nonzero mod p")
    # solve for h(X) = a_n X^n + ... + a_1 X with h(x_i) = y_i
    mat = [[pow(x, e, p) for e in range(n, 0, -1)] + [y] for x, y in zip(xs, ys)]
    h = _solve_mod(mat, p)
    hpoly = FpPolynomial(tuple([0] + h[::-1]), f.modulus)
    count = sum(1 for x in range(p) if f(x) == g(hpoly(x)))
    if count > m * n:
        raise RuntimeError(f"count {count} exceeds cap {m * n}")
    if p <= 211:  # small enough to replay the determinant definition directly
        direct = sum(1 for x in range(p) for y in range(p)
                     if f(x) == g(y) and _dep_det(x, y, xs, ys, p) == 0)
        if direct != count:
            raise RuntimeError("interpolation shortcut disagrees with determinant scan")
    return count


def _solve_mod(aug: list[list[int]], p: int) -> list[int]:
    """Gaussian elimination on an augmented matrix mod p (unique solution)."""
    n = len(aug)
    mat = [row[:] for row in aug]
    for col in range(n):
        piv = next(r for r in range(col, n) if mat[r][col] % p != 0)
        mat[col], mat[piv] = mat[piv], mat[col]
        inv = pow(mat[col][col], -1, p)
        mat[col] = [v * inv % p for v in mat[col]]
        for r in range(n):
            if r != col and mat[r][col] % p != 0:
                fac = mat[r][col]
                mat[r] = [(a - fac * b) % p for a, b in zip(mat[r], mat[col])]
    return [mat[r][n] for r in range(n)]


def _dep_det(x: int, y: int, xs: Sequence[int], ys: Sequence[int], p: int) -> int:
    n = len(xs)
    rows = [[pow(x, e, p) for e in range(n, 0, -1)] + [y]]
    rows += [[pow(xi, e, p) for e in range(n, 0, -1)] + [yi]
             for xi, yi in zip(xs, ys)]
    return _det_mod(rows, p)


def _det_mod(rows: list[list[int]], p: int) -> int:
    n = len(rows)
    mat = [r[:] for r in rows]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if mat[r][col] % p != 0), None)
        if piv is None:
            return 0
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det = det * mat[col][col] % p
        inv = pow(mat[col][col], -1, p)
        for r in range(col + 1, n):
            if mat[r][col] % p != 0:
                fac = mat[r][col] * inv % p
                mat[r] = [(a - fac * b) % p for a, b in zip(mat[r], mat[col])]
    return det % p


def integer_points_on_aux_curve(delta: int, coeffs: Sequence[int], M: int,
                                p: int) -> dict[int, int]:
    """Group the integer points |x|, |y| <= M of

        c_1 x^h + ... + c_h x + c_(h+1) y - delta y^2 = p z

    by the integer z they land on; returns {z: count of (x, y)}.

    Only pairs whose left side is divisible by p lie on any of the curves.
    The quadratic in y is solved mod p per x, so the cost is O(M log p).
    """
    if delta == 0:
        raise ValueError("delta must be nonzero")
    if M > AUX_CURVE_GUARD:
        raise ValueError(f"M = {M} above guard {AUX_CURVE_GUARD}")
    if M < 0:
        raise ValueError("M >= 0 required")
    h = len(coeffs) - 1
    if h < 1:
        raise ValueError("need at least (c_1, c_2) coefficients")
    c_y = coeffs[-1]
    out: dict[int, int] = {}

    def visit(x: int, y: int, poly_part: int):
        lhs = poly_part + c_y * y - delta * y * y
        z, r = divmod(lhs, p)
        if r == 0:
            out[z] = out.get(z, 0) + 1

    dp, cy = delta % p, c_y % p
    for x in range(-M, M + 1):
        poly_part = sum(c * x ** (h - i) for i, c in enumerate(coeffs[:-1]))
        rhs = (-poly_part) % p  # c_y y - delta y^2 = rhs (mod p)
        if dp != 0:
            # delta y^2 - c_y y + rhs' with rhs' = -rhs: use the monic form
            disc = (cy * cy - 4 * dp * rhs) % p
            inv = pow(2 * dp, -1, p)
            roots = {(cy + r) * inv % p for r in sqrt_mod_int(disc, p)}
        elif cy != 0:
            roots = {rhs * pow(cy, -1, p) % p}
        elif rhs == 0:
            roots = {y % p for y in range(-M, M + 1)}  # every class with a rep works
        else:
            roots = set()
        for y0 in roots:
            first = y0 - ((y0 + M) // p) * p
            y = first
            while y <= M:
                visit(x, y, poly_part)
                y += p
    return out


def bombieri_pila_budget(H: int, d: int) -> float:
    """Count budget H^(1/d) exp(12 sqrt(d log H log log H)) for integer points
    of height H on a degree-d irreducible curve; diagnostic only."""
    if H < 3:
        raise ValueError("H >= 3 required for the log log term")
    if d < 2:
        raise ValueError("d >= 2 required")
    lg = math.log(H)
    return H ** (1 / d) * math.exp(12 * math.sqrt(d * lg * math.log(lg)))

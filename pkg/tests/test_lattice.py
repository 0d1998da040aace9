"""Congruence lattices: exact point enumeration, successive minima with
rational arithmetic, the counting and volume bounds, the cubic proof
lattice, and the interpolation-driven curve intersection count."""

import itertools
import random
from fractions import Fraction

import pytest

from smallbox.ffield import FpPolynomial, PrimeModulus
from smallbox.lattice import (
    CongruenceLattice,
    ConvexBox,
    bombieri_pila_budget,
    build_thm2_lattice,
    cor7_check,
    double_factorial,
    integer_points_on_aux_curve,
    lattice_points_in_box,
    lemma6_count,
    minkowski_check,
    shifted_congruence_count,
    successive_minima,
)


def naive_points(lat, box, scale=1):
    bounds = [int(scale * h) for h in box.halfwidths]
    pts = []
    for v in itertools.product(*(range(-b, b + 1) for b in bounds)):
        if sum(c * x for c, x in zip(lat.coeffs, v)) % lat.p == 0:
            pts.append(v)
    return pts


def test_lattice_validation():
    with pytest.raises(ValueError):
        CongruenceLattice(coeffs=(1,), p=101)
    with pytest.raises(ValueError):
        CongruenceLattice(coeffs=(1, 2), p=100)
    lat = CongruenceLattice(coeffs=(1, 3, 5), p=101)
    assert lat.contains((98, 1, 0))
    assert not lat.contains((1, 1, 0))
    assert lat.determinant() == 101
    # the all-zero congruence is the full integer lattice
    assert CongruenceLattice(coeffs=(101, 202), p=101).determinant() == 1


def test_convex_box_volume():
    box = ConvexBox(halfwidths=(2, Fraction(3, 2), 5))
    assert box.volume() == Fraction(4) * 3 * 10


def test_enumeration_matches_naive():
    rng = random.Random(51)
    for _ in range(40):
        p = rng.choice((101, 211))
        n = rng.randint(2, 4)
        lat = CongruenceLattice(
            coeffs=tuple(rng.randrange(p) for _ in range(n)), p=p)
        box = ConvexBox(halfwidths=tuple(rng.randint(1, 7) for _ in range(n)))
        expect = naive_points(lat, box)
        got = lattice_points_in_box(lat, box, collect=True)
        assert got.count == len(expect)
        assert sorted(got.points) == sorted(expect)


def test_enumeration_fractional_scale():
    lat = CongruenceLattice(coeffs=(1, 3, 5), p=101)
    box = ConvexBox(halfwidths=(4, 6, 9))
    for scale in (Fraction(1, 2), Fraction(3, 4), 2):
        expect = naive_points(lat, box, scale)
        assert lattice_points_in_box(lat, box, scale=scale).count == len(expect)


def test_enumeration_guard():
    lat = CongruenceLattice(coeffs=(1, 1), p=101)
    box = ConvexBox(halfwidths=(10 ** 6, 10 ** 6))
    with pytest.raises(ValueError):
        lattice_points_in_box(lat, box)


def naive_minima(lat, box, cap=24):
    """Sup-norm window reference: sort every lattice vector with entries in
    [-cap, cap] by box norm and greedily grow the span.  The produced
    lambda_i are exact only while lambda_i * max(h) <= cap, since beyond
    that vectors outside the window could compete; the prefix below that
    threshold is returned."""
    n = lat.n
    inside = []
    for v in itertools.product(range(-cap, cap + 1), repeat=n):
        if any(v) and sum(c * x for c, x in zip(lat.coeffs, v)) % lat.p == 0:
            inside.append((max(Fraction(abs(x), 1) / h
                               for x, h in zip(v, box.halfwidths)), v))
    inside.sort()
    found = []
    lambdas = []
    limit = Fraction(cap, max(box.halfwidths))
    for norm, v in inside:
        if norm > limit or len(found) == n:
            break
        if _rank_of(found + [v]) > len(found):
            found.append(v)
            lambdas.append(norm)
    return lambdas


def _rank_of(vecs):
    rows = [[Fraction(x) for x in v] for v in vecs]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def test_minima_frozen_example():
    lat = CongruenceLattice(coeffs=(1, 3, 5), p=101)
    box = ConvexBox(halfwidths=(4, 6, 9))
    rep = successive_minima(lat, box)
    assert rep.lambdas == (Fraction(1, 3), Fraction(1, 2), Fraction(14, 9))
    for lam, w in zip(rep.lambdas, rep.witnesses):
        assert lat.contains(w)
        assert max(Fraction(abs(x), 1) / h
                   for x, h in zip(w, box.halfwidths)) == lam


def test_minima_against_naive_oracle():
    rng = random.Random(52)
    for _ in range(25):
        p = rng.choice((101, 211))
        n = rng.randint(2, 3)
        lat = CongruenceLattice(
            coeffs=tuple(rng.randrange(1, p) for _ in range(n)), p=p)
        box = ConvexBox(halfwidths=tuple(rng.randint(1, 6) for _ in range(n)))
        rep = successive_minima(lat, box)
        oracle_prefix = naive_minima(lat, box)
        assert list(rep.lambdas)[:len(oracle_prefix)] == oracle_prefix


def test_minima_homogeneity():
    lat = CongruenceLattice(coeffs=(2, 9, 40), p=211)
    box = ConvexBox(halfwidths=(3, 4, 5))
    doubled = ConvexBox(halfwidths=(6, 8, 10))
    a = successive_minima(lat, box)
    b = successive_minima(lat, doubled)
    assert tuple(l / 2 for l in a.lambdas) == b.lambdas


def test_minima_partial_prefix():
    rng = random.Random(53)
    for _ in range(20):
        p = rng.choice((101, 211))
        n = rng.randint(2, 4)
        lat = CongruenceLattice(
            coeffs=tuple(rng.randrange(1, p) for _ in range(n)), p=p)
        box = ConvexBox(halfwidths=tuple(rng.randint(1, 6) for _ in range(n)))
        full = successive_minima(lat, box)
        for k in range(1, n + 1):
            part = successive_minima(lat, box, upto=k)
            assert part.lambdas == full.lambdas[:k]


def test_minima_partial_dodges_guard():
    # full minima of the M = 4 proof body overflow the enumeration guard
    # (the fifth direction needs an integer sum reaching p), the first
    # three are still reachable
    setup = build_thm2_lattice((1, 2, 3, 4), 4, 10007)
    rep = successive_minima(setup.lattice, setup.box, upto=3)
    assert rep.lambdas == (Fraction(1, 128), Fraction(1, 64), Fraction(1, 32))


def test_minima_propagate_enumeration_guard(monkeypatch):
    from smallbox import lattice as mod
    monkeypatch.setattr(mod, "ENUM_GUARD", 10 ** 5)
    lat = CongruenceLattice(coeffs=(1, 1), p=10 ** 6 + 3)
    box = ConvexBox(halfwidths=(1, 1))
    with pytest.raises(ValueError):
        successive_minima(lat, box)
    # the first minimum sits inside the shrunken guard
    part = successive_minima(lat, box, upto=1)
    assert part.lambdas == (Fraction(1),)
    assert part.witnesses[0] in ((1, -1), (-1, 1))


def test_double_factorial():
    assert [double_factorial(k) for k in (0, 1, 3, 5, 7, 9)] == \
        [1, 1, 3, 15, 105, 945]


def test_cor7_and_minkowski_hold_randomized():
    rng = random.Random(54)
    for _ in range(30):
        p = rng.choice((101, 211, 307))
        n = rng.randint(2, 5)
        lat = CongruenceLattice(
            coeffs=tuple(rng.randrange(1, p) for _ in range(n)), p=p)
        box = ConvexBox(halfwidths=tuple(rng.randint(1, 8) for _ in range(n)))
        c7 = cor7_check(lat, box)
        assert c7.ok
        assert c7.point_count == lattice_points_in_box(lat, box).count
        mink = minkowski_check(lat, box)
        assert mink.ok
        assert mink.point_count == -1


def test_thm2_lattice_shape():
    setup = build_thm2_lattice((5, 6, 7, 8), 3, 10007)
    assert setup.lattice.coeffs == (1, 8, 7, 6, 5)
    assert tuple(int(h) for h in setup.box.halfwidths) == (72, 216, 72, 24, 24)
    assert setup.proof_scale_ok  # 8*27 < 10007
    assert not build_thm2_lattice((5, 6, 7, 8), 11, 10007).proof_scale_ok
    with pytest.raises(ValueError):
        build_thm2_lattice((1, 2, 3), 3, 10007)


def test_shifted_congruence_count_matches_brute():
    rng = random.Random(55)
    for _ in range(30):
        p = rng.choice((101, 1009))
        c = tuple(rng.randrange(p) for _ in range(4))
        M = rng.randint(0, 20)
        brute = sum(1
                    for x in range(-M, M + 1)
                    for y in range(-M, M + 1)
                    if (y * y - c[0] * y) % p
                    == (c[3] * x ** 3 + c[2] * x * x + c[1] * x) % p)
        assert shifted_congruence_count(c, M, p) == brute


def test_lemma6_counts_planted_composition():
    # plant h with zero constant term, sample the interpolation data from
    # it, and compare against the direct composition count
    rng = random.Random(56)
    for _ in range(25):
        p = rng.choice((101, 211))
        mod = PrimeModulus(p)
        f = FpPolynomial.from_ints(
            [rng.randrange(p) for _ in range(3)] + [rng.randrange(1, p)], mod)
        g = FpPolynomial.from_ints(
            [rng.randrange(p) for _ in range(2)] + [rng.randrange(1, p)], mod)
        h_coeffs = [0] + [rng.randrange(p) for _ in range(3)]
        h = FpPolynomial.from_ints(h_coeffs, mod)
        xs = rng.sample(range(1, p), 3)
        ys = [h(x) for x in xs]
        count = lemma6_count(f, g, xs, ys)
        expect = sum(1 for x in range(p) if f(x) == g(h(x)))
        assert count == expect <= 3 * 2


def test_lemma6_input_validation():
    mod = PrimeModulus(101)
    f = FpPolynomial.from_text("1,0,0,1", mod)   # degree 3
    g2 = FpPolynomial.from_text("1,0,1", mod)    # degree 2
    g3 = FpPolynomial.from_text("1,0,0,2", mod)  # degree 3 divides 3
    with pytest.raises(ValueError):
        lemma6_count(f, g3, [1, 2, 3], [1, 2, 3])
    with pytest.raises(ValueError):
        lemma6_count(f, g2, [1, 2, 2], [1, 2, 3])
    with pytest.raises(ValueError):
        lemma6_count(f, g2, [0, 2, 3], [1, 2, 3])
    with pytest.raises(ValueError):
        lemma6_count(f, g2, [1, 2], [1, 2])


def test_aux_curves_match_brute_force():
    rng = random.Random(57)
    for _ in range(25):
        p = rng.choice((101, 211))
        h = rng.randint(1, 3)
        coeffs = [rng.randrange(p) for _ in range(h + 1)]
        delta = rng.randrange(1, 3 * p)
        M = rng.randint(0, 15)
        got = integer_points_on_aux_curve(delta, coeffs, M, p)
        brute: dict = {}
        for x in range(-M, M + 1):
            for y in range(-M, M + 1):
                poly = sum(c * x ** (h - i) for i, c in enumerate(coeffs[:-1]))
                lhs = poly + coeffs[-1] * y - delta * y * y
                z, r = divmod(lhs, p)
                if r == 0:
                    brute[z] = brute.get(z, 0) + 1
        assert got == brute


def test_aux_curves_degenerate_delta():
    # delta divisible by p exercises the linear and the everything-vanishes
    # branches
    p = 101
    got = integer_points_on_aux_curve(p, [3, 5], 10, p)
    brute: dict = {}
    for x in range(-10, 11):
        for y in range(-10, 11):
            lhs = 3 * x + 5 * y - p * y * y
            z, r = divmod(lhs, p)
            if r == 0:
                brute[z] = brute.get(z, 0) + 1
    assert got == brute
    # c_y also divisible by p: per-x either all y classes or none
    flat = integer_points_on_aux_curve(p, [p, p], 5, p)
    assert sum(flat.values()) == 11 * 11
    with pytest.raises(ValueError):
        integer_points_on_aux_curve(0, [3, 5], 10, p)


def test_bombieri_pila_budget_shape():
    import math
    H, d = 10 ** 4, 3
    expect = H ** (1 / d) * math.exp(
        12 * math.sqrt(d * math.log(H) * math.log(math.log(H))))
    assert bombieri_pila_budget(H, d) == pytest.approx(expect)
    assert bombieri_pila_budget(10 ** 6, 3) > bombieri_pila_budget(10 ** 4, 3)

"""Prime-field layer: primality, square roots, polynomial arithmetic, and
the resultant/discriminant helpers, checked against exhaustive scans on
small fields."""

import random

import pytest

from smallbox.ffield import (
    FpElement,
    FpPolynomial,
    PrimeModulus,
    QrStatus,
    discriminant,
    is_prime,
    is_qr,
    is_square_times_unit,
    monic_square_root,
    poly_gcd,
    resultant,
    signed_rep,
    sqrt_mod,
    sqrt_mod_int,
)

SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 101, 211)


def test_is_prime_small_exhaustive():
    def naive(n):
        if n < 2:
            return False
        return all(n % d for d in range(2, int(n ** 0.5) + 1))

    for n in range(2000):
        assert is_prime(n) == naive(n), n


def test_is_prime_pseudoprime_traps():
    # Carmichael numbers and strong pseudoprimes to small bases
    for n in (561, 1105, 1729, 2465, 3215031751, 3825123056546413051):
        assert not is_prime(n)
    for n in (2 ** 61 - 1, 1000003, 10 ** 9 + 7):
        assert is_prime(n)


def test_prime_modulus_rejects_bad_input():
    for bad in (0, 1, 2, 4, 9, 561, 2 ** 62 + 1):
        with pytest.raises(ValueError):
            PrimeModulus(bad)


def test_element_arithmetic_matches_integers():
    mod = PrimeModulus(101)
    rng = random.Random(1)
    for _ in range(300):
        a, b = rng.randrange(101), rng.randrange(101)
        x, y = FpElement(a, mod), FpElement(b, mod)
        assert int(x + y) == (a + b) % 101
        assert int(x - y) == (a - b) % 101
        assert int(x * y) == (a * b) % 101
        assert int(-x) == (-a) % 101
        if b:
            assert int(x * y.inverse()) == a * pow(b, -1, 101) % 101


def test_element_signed_representative():
    mod = PrimeModulus(11)
    assert [FpElement(v, mod).signed() for v in range(11)] == \
        [0, 1, 2, 3, 4, 5, -5, -4, -3, -2, -1]
    assert signed_rep(7, 11) == -4


@pytest.mark.parametrize("p", [31, 13, 17, 41, 101, 211])
def test_sqrt_mod_exhaustive(p):
    # p = 31 hits the p % 4 == 3 path, 13 the p % 8 == 5 path,
    # 17 and 41 the general Tonelli-Shanks path
    mod = PrimeModulus(p)
    squares = {}
    for y in range(p):
        squares.setdefault(y * y % p, set()).add(y)
    for a in range(p):
        got = {int(r) for r in sqrt_mod(a, mod)}
        assert got == squares.get(a, set()), (p, a)
        expected_status = (QrStatus.ZERO if a == 0 else
                           QrStatus.RESIDUE if a in squares else
                           QrStatus.NONRESIDUE)
        assert is_qr(a, mod) == expected_status


def test_sqrt_mod_int_sorted_tuple():
    assert sqrt_mod_int(0, 31) == (0,)
    assert sqrt_mod_int(3, 13) == (4, 9)
    assert sqrt_mod_int(5, 13) == ()
    roots = sqrt_mod_int(2, 10007)
    assert len(roots) == 2 and roots[0] < roots[1]
    assert all(r * r % 10007 == 2 for r in roots)


def test_polynomial_text_round_trip():
    mod = PrimeModulus(101)
    f = FpPolynomial.from_text("3,2,0,1", mod)
    assert f.coeffs == (3, 2, 0, 1)
    assert FpPolynomial.from_text(f.to_text(), mod) == f
    # leading zeros are trimmed, degree follows
    g = FpPolynomial.from_ints((5, 0, 0), mod)
    assert g.degree == 0 and g.coeffs == (5,)


def test_polynomial_eval_matches_power_sum():
    mod = PrimeModulus(211)
    rng = random.Random(2)
    for _ in range(100):
        coeffs = [rng.randrange(211) for _ in range(rng.randint(1, 7))]
        f = FpPolynomial.from_ints(coeffs, mod)
        x = rng.randrange(211)
        assert f(x) == sum(c * x ** i for i, c in enumerate(coeffs)) % 211


def test_polynomial_derivative_and_shift():
    mod = PrimeModulus(101)
    f = FpPolynomial.from_ints((3, 2, 0, 1), mod)  # x^3 + 2x + 3
    assert f.derivative().coeffs == (2, 0, 3)
    g = f.shift(5)
    for x in range(101):
        assert g(x) == f((x + 5) % 101)


def test_poly_gcd_tracks_common_roots():
    mod = PrimeModulus(31)

    def linear(a):
        return FpPolynomial.from_ints((-a % 31, 1), mod)

    f = linear(2) * linear(5) * linear(7)
    g = linear(5) * linear(11)
    d = poly_gcd(f, g)
    assert d.degree == 1 and d(5) == 0
    assert poly_gcd(f, linear(1)).degree == 0


def test_resultant_vanishes_iff_common_root():
    mod = PrimeModulus(31)
    rng = random.Random(3)
    for _ in range(200):
        f = FpPolynomial.from_ints(
            [rng.randrange(31) for _ in range(3)] + [1], mod)
        g = FpPolynomial.from_ints(
            [rng.randrange(31) for _ in range(2)] + [1], mod)
        r = resultant(f, g)
        assert (int(r) == 0) == (poly_gcd(f, g).degree >= 1)


def test_resultant_root_product():
    # res(f, g) = lc(g)^deg f * prod f(root) over the roots of g, when g splits
    mod = PrimeModulus(101)
    rng = random.Random(4)
    for _ in range(50):
        roots = [rng.randrange(101) for _ in range(3)]
        g = FpPolynomial.from_ints((1,), mod)
        for a in roots:
            g = g * FpPolynomial.from_ints((-a % 101, 1), mod)
        f = FpPolynomial.from_ints([rng.randrange(101) for _ in range(3)] + [1], mod)
        expect = 1
        for a in roots:
            expect = expect * f(a) % 101
        assert int(resultant(g, f)) == expect


def test_discriminant_cubic_closed_form():
    mod = PrimeModulus(211)
    rng = random.Random(5)
    for _ in range(100):
        a, b = rng.randrange(211), rng.randrange(211)
        f = FpPolynomial.from_ints((b, a, 0, 1), mod)
        assert int(discriminant(f)) == (-4 * a ** 3 - 27 * b * b) % 211


def test_monic_square_root_inverts_squaring():
    mod = PrimeModulus(101)
    rng = random.Random(6)
    for _ in range(100):
        h = FpPolynomial.from_ints(
            [rng.randrange(101) for _ in range(rng.randint(1, 3))] + [1], mod)
        assert monic_square_root(h * h) == h
    f = FpPolynomial.from_ints((1, 1, 0, 1), mod)
    assert monic_square_root(f) is None


def test_is_square_times_unit_detects_squares():
    mod = PrimeModulus(31)
    rng = random.Random(7)
    for _ in range(100):
        h = FpPolynomial.from_ints(
            [rng.randrange(31) for _ in range(2)] + [1], mod)
        c = rng.randrange(1, 31)
        sq = h * h * FpPolynomial.from_ints((c,), mod)
        assert is_square_times_unit(sq)
        # odd degree can never be a unit times a square
        assert not is_square_times_unit(sq * FpPolynomial.from_ints((0, 1), mod))

"""Acceptance suite: thirteen checks covering oracle equivalence of the
counters, the square-root error regime, the trivial and moment identities of
the class censuses, the residue witness construction, the power-sum system
table, the lattice counting inequality, the interpolation cap, cycle
detection agreement, the discrepancy and differencing inequalities, and the
isomorphism-relation algebra.

Each check returns a CriterionResult; run_all prints one PASS/FAIL line per
check.  Checks that a construction cannot attain at desk scale are still
asserted as stated and report their failure; nothing is weakened to force a
green run.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from . import analytic, boxcount, dynsys, hyperelliptic, lattice
from .ffield import FpPolynomial, PrimeModulus
from .harness import derived_rng

DEFAULT_SEED = 20260815

# calibrated once against a full census sweep and frozen; the shape bound
# min{p, M^2} is asymptotic, so the floor is a diagnostic constant
CLASS_COUNT_RATIO_FLOOR = 0.05
VINOGRADOV_SLOPE = 10.5


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    value: float
    bound: float
    detail: str
    runtime_ms: float = 0.0


def _random_poly(rng, p: int, deg: int, modulus) -> FpPolynomial:
    coeffs = [rng.randrange(p) for _ in range(deg)] + [rng.randrange(1, p)]
    return FpPolynomial.from_ints(coeffs, modulus)


def criterion_1(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Chunked root-scan counters agree exactly with the naive double loop."""
    trials = 40 if quick else 200
    agreements = 0
    for i in range(trials):
        rng = derived_rng(seed, "c1", i)
        p = rng.choice((31, 101, 211))
        pm = PrimeModulus(p)
        f = _random_poly(rng, p, rng.randint(3, 5), pm)
        M = rng.randint(1, min(25, p - 1))
        box = boxcount.Box2(rng.randrange(p - M), rng.randrange(p - M), M)
        curve_fast = boxcount.count_curve_points(f, box).count
        curve_naive = boxcount.count_curve_points(f, box, method="naive").count
        graph_fast = boxcount.count_graph_points(f, box).count
        graph_naive = boxcount.count_graph_points(f, box, method="naive").count
        if curve_fast == curve_naive and graph_fast == graph_naive:
            agreements += 1
    return CriterionResult(
        1, "counting oracle equivalence", agreements == trials,
        agreements, trials,
        f"{agreements}/{trials} instances agree (curve and graph)")


def criterion_2(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Counted box error stays within 10 sqrt(p) (ln p)^2 at p ~ 10^6."""
    p = 1000003
    M = 90000 if quick else 900000
    f = FpPolynomial.from_ints([3, 2, 0, 1], PrimeModulus(p))
    rep = boxcount.weil_error(f, boxcount.Box2(0, 0, M))
    budget = rep.constant * rep.weil_budget
    return CriterionResult(
        2, "square-root error regime", rep.within_budget,
        rep.deviation, budget,
        f"|count - M^2/p| = {rep.deviation:.1f} vs budget {budget:.1f} "
        f"(count {rep.count}, M={M})")


def criterion_3(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Every class meeting a cube of side M holds at most 2M vectors."""
    p = 31
    pm = PrimeModulus(p)
    per_cell = 13 if quick else 63
    boxes = 0
    worst = 0.0
    ok = True
    for g in (1, 2):
        for M in range(1, 9):
            for i in range(per_cell):
                rng = derived_rng(seed, f"c3-{g}-{M}", i)
                R = tuple(rng.randrange(p - M) for _ in range(2 * g))
                census = hyperelliptic.class_census(
                    pm, hyperelliptic.CubeBox(g, R, M))
                boxes += 1
                if census.max_class_size:
                    worst = max(worst, census.max_class_size / (2 * M))
                if census.max_class_size > 2 * M:
                    ok = False
    return CriterionResult(
        3, "trivial per-class bound", ok, worst, 1.0,
        f"{boxes} cubes over genus 1 and 2, worst N/(2M) = {worst:.3f}")


def criterion_4(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Census moments match independent oracles: sum of class sizes equals a
    direct discriminant scan, and the second moment equals a raw
    orbit-membership pair count."""
    p = 31
    pm = PrimeModulus(p)
    cubes = [((0, 0), 30)]
    n_small = 10 if quick else 50
    for i in range(n_small):
        rng = derived_rng(seed, "c4", i)
        M = rng.randint(2, 15)
        cubes.append((tuple(rng.randrange(p - M) for _ in range(2)), M))
    checked = 0
    for R, M in cubes:
        census = hyperelliptic.class_census(pm, hyperelliptic.CubeBox(1, R, M))
        vectors = [(a0, a1) for a0 in range(R[0] + 1, R[0] + M + 1)
                   for a1 in range(R[1] + 1, R[1] + M + 1)]
        # genus-1 discriminant in closed form, independent of the resultant path
        nonsingular = [(a0, a1) for a0, a1 in vectors
                       if (-4 * a1 ** 3 - 27 * a0 * a0) % p != 0]
        if census.total_nonsingular != len(nonsingular):
            return CriterionResult(4, "census moment identities", False,
                                   census.total_nonsingular, len(nonsingular),
                                   f"first moment mismatch on R={R}, M={M}")
        in_box = set(nonsingular)
        pair_count = 0
        for b0, b1 in nonsingular:
            images = {(pow(al, 6, p) * b0 % p, pow(al, 4, p) * b1 % p)
                      for al in range(1, p)}
            pair_count += len(images & in_box)
        if census.second_moment != pair_count:
            return CriterionResult(4, "census moment identities", False,
                                   census.second_moment, pair_count,
                                   f"second moment mismatch on R={R}, M={M}")
        checked += 1
    return CriterionResult(
        4, "census moment identities", True, checked, len(cubes),
        f"both moments exact on {checked} cubes (full cube and random)")


def criterion_5(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Class counts track min{p, M^2}: ratio floor holds with no monotone
    decay across the M sweep.  The sweep is never truncated: the decay check
    is about its tail."""
    sweep = (4, 8, 16, 32, 64)
    ok = True
    details = []
    worst = 1.0
    for p in (101, 1009):
        pm = PrimeModulus(p)
        ratios = []
        for M in sweep:
            census = hyperelliptic.class_census(
                pm, hyperelliptic.CubeBox(1, (0, 0), M))
            r = census.class_count / min(p, M * M)
            ratios.append(r)
            worst = min(worst, r)
            if r < CLASS_COUNT_RATIO_FLOOR:
                ok = False
        if all(b < a for a, b in zip(ratios, ratios[1:])):
            ok = False  # strictly decreasing across the whole sweep
        details.append(f"p={p}: " + ",".join(f"{r:.2f}" for r in ratios))
    return CriterionResult(
        5, "class-count shape ratio", ok, worst, CLASS_COUNT_RATIO_FLOOR,
        "; ".join(details) + f" (floor {CLASS_COUNT_RATIO_FLOOR})")


def criterion_6(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Residue witness construction: the box count must reach 2 #Q."""
    rep = hyperelliptic.sharpness_witness(PrimeModulus(1009), 64, 1)
    return CriterionResult(
        6, "witness construction attains its floor", rep.attained,
        rep.isomorphic_count, rep.witness_count,
        f"N = {rep.isomorphic_count} vs 2#Q = {rep.witness_count} "
        f"(#Q = {rep.residue_count}); the two roots of each residue scale "
        "onto the same vector, so N can fall below 2#Q")


def criterion_7(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Power-sum system table: exhaustive cross-check at H=2, the exact
    k=m=2 formula, and the desk-scale slope cap H^10.5."""
    top = 5 if quick else 8
    counts = {H: analytic.count_vinogradov(analytic.VinogradovInstance(8, 3, H))
              for H in range(2, top + 1)}
    sides = Counter(analytic.power_sum_vector(xs, 3).s
                    for xs in itertools.product((1, 2), repeat=8))
    exhaustive = sum(c * c for c in sides.values())
    ok = counts[2] == exhaustive
    formula_ok = all(
        analytic.count_vinogradov(analytic.VinogradovInstance(2, 2, H))
        == 2 * H * H - H for H in range(1, 51))
    ok = ok and formula_ok
    worst = 0.0
    for H in range(4, top + 1):
        cap = H ** VINOGRADOV_SLOPE
        worst = max(worst, counts[H] / cap)
        if counts[H] > cap:
            ok = False
    return CriterionResult(
        7, "power-sum system desk check", ok, worst, 1.0,
        f"J(8,3;2) = {counts[2]} (exhaustive {exhaustive}), k=2 formula "
        f"{'exact' if formula_ok else 'BROKEN'}, worst J/H^{VINOGRADOV_SLOPE} "
        f"= {worst:.1f}; the o(1) term dominates at these H")


def criterion_8(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Counting inequality: product of clipped minima never exceeds
    (2n+1)!! over the box point count."""
    trials = 50 if quick else 200
    passed = 0
    for i in range(trials):
        rng = derived_rng(seed, "c8", i)
        n = rng.randint(2, 5)
        p = rng.choice((101, 211, 307, 409))
        coeffs = tuple(rng.randrange(1, p) for _ in range(n))
        hw = tuple(rng.randint(1, 8) for _ in range(n))
        rep = lattice.cor7_check(lattice.CongruenceLattice(coeffs, p),
                                 lattice.ConvexBox(hw))
        if rep.ok:
            passed += 1
    return CriterionResult(
        8, "minima counting inequality", passed == trials, passed, trials,
        f"{passed}/{trials} random lattices satisfy the clipped-minima bound")


def criterion_9(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Interpolation-row congruence has at most mn solutions."""
    trials = 25 if quick else 100
    worst = 0
    passed = 0
    for i in range(trials):
        rng = derived_rng(seed, "c9", i)
        p = rng.choice((101, 211))
        pm = PrimeModulus(p)
        f = _random_poly(rng, p, 3, pm)
        g = _random_poly(rng, p, 2, pm)
        xs = rng.sample(range(1, p), 3)
        ys = [rng.randrange(p) for _ in range(3)]
        count = lattice.lemma6_count(f, g, xs, ys)
        worst = max(worst, count)
        if count <= 6:
            passed += 1
    return CriterionResult(
        9, "determinant congruence cap", passed == trials, worst, 6,
        f"{passed}/{trials} instances within the cap, max count {worst}")


def criterion_10(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Cycle detection agreement, diameter identity, and the edge-count
    duality with graph-point counting."""
    per_p = 200 if quick else 1000
    checked = 0
    for p in (101, 1009, 10007):
        pm = PrimeModulus(p)
        for i in range(per_p):
            rng = derived_rng(seed, f"c10-{p}", i)
            f = _random_poly(rng, p, rng.randint(2, 4), pm)
            u0 = rng.randrange(p)
            traj = dynsys.trajectory_length(f, u0)  # raises on method mismatch
            checked += 1
            if i < 20:
                N = rng.randint(1, traj.total_length)
                vals = dynsys.iterate(f, u0, N).values
                if dynsys.diameter(f, u0, N) != max(vals) - min(vals):
                    return CriterionResult(10, "iteration suite", False,
                                           checked, 3 * per_p,
                                           f"diameter identity broke at p={p}")
    duality_trials = 20 if quick else 100
    for i in range(duality_trials):
        rng = derived_rng(seed, "c10-dual", i)
        p = rng.choice((101, 1009))
        pm = PrimeModulus(p)
        f = _random_poly(rng, p, rng.randint(2, 4), pm)
        u0 = rng.randrange(p)
        T = dynsys.trajectory_length(f, u0).total_length
        N = rng.randint(1, T)
        M = rng.randint(1, p - 1)
        box = boxcount.Box2(rng.randrange(p - M), rng.randrange(p - M), M)
        edges = dynsys.pairs_in_box(f, u0, N, box)
        cap = boxcount.count_graph_points(f, box).count
        if edges > cap:
            return CriterionResult(10, "iteration suite", False, edges, cap,
                                   f"duality violated: {edges} > {cap}")
    return CriterionResult(
        10, "iteration suite", True, checked, checked,
        f"{checked} orbits cross-checked, diameter and duality hold")


def criterion_11(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Discrepancy bound with constant 3 holds on random and polynomial
    phase sequences."""
    trials = 200 if quick else 1000
    passed = 0
    for i in range(trials):
        rng = derived_rng(seed, "c11-rand", i)
        M = rng.randint(50, 400)
        seq = [rng.random() for _ in range(M)]
        a = rng.random()
        b = a + rng.random() * (1 - a)
        if analytic.erdos_turan_check(seq, a, b, rng.randint(1, 30)).ok:
            passed += 1
    for i in range(trials):
        rng = derived_rng(seed, "c11-poly", i)
        p = rng.choice((101, 1009, 10007))
        pm = PrimeModulus(p)
        f = _random_poly(rng, p, rng.randint(2, 4), pm)
        M = rng.randint(50, 400)
        seq = [f(n) / p for n in range(1, M + 1)]
        a = rng.random()
        b = a + rng.random() * (1 - a)
        if analytic.erdos_turan_check(seq, a, b, rng.randint(1, 30)).ok:
            passed += 1
    return CriterionResult(
        11, "discrepancy inequality", passed == 2 * trials, passed, 2 * trials,
        f"{passed}/{2 * trials} sequences within the harmonic majorant")


def criterion_12(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Differencing identity to 1e-6 and the majorant domination with
    constant 2^m on the same instances."""
    trials = 30 if quick else 100
    passed = 0
    worst = 0.0
    for i in range(trials):
        rng = derived_rng(seed, "c12", i)
        p = rng.choice((101, 1009))
        pm = PrimeModulus(p)
        deg = rng.randint(2, 3)
        f = _random_poly(rng, p, deg, pm)
        k = rng.randrange(1, p)
        M = rng.randint(1, 12)
        ident = analytic.weyl_square_identity(f, k, M)
        s = abs(analytic.exp_sum((f, k), M))
        theta = Fraction(k * f.coeffs[-1] % p, p)
        majorant = (analytic.weyl_majorant(theta, deg, M)
                    * analytic.weyl_constant(deg))
        worst = max(worst, s / majorant)
        if ident.ok and s <= majorant:
            passed += 1
    return CriterionResult(
        12, "differencing identity and majorant", passed == trials,
        passed, trials,
        f"{passed}/{trials} instances, worst |S|/majorant = {worst:.3f}")


def criterion_13(seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Isomorphism relation is an equivalence, canonical keys respect it,
    and the orbit-walk count equals a raw box scan."""
    trials = 200 if quick else 1000
    p = 101
    pm = PrimeModulus(p)
    for i in range(trials):
        rng = derived_rng(seed, "c13", i)
        g = rng.randint(1, 3)
        b = hyperelliptic.CurveVector(
            g, tuple(rng.randrange(p) for _ in range(2 * g)), pm)
        al = rng.randrange(1, p)
        be = rng.randrange(1, p)
        a = hyperelliptic.apply_scaling(b, al)
        c = hyperelliptic.apply_scaling(b, be)
        refl = pm.element(1) in hyperelliptic.isomorphism_scalars(b, b)
        fwd = hyperelliptic.isomorphism_scalars(a, b)
        back = hyperelliptic.isomorphism_scalars(b, a)
        sym = ({x.inverse() for x in fwd} == back)
        trans = bool(hyperelliptic.isomorphism_scalars(a, c))
        canon = (hyperelliptic.canonical_representative(a).a
                 == hyperelliptic.canonical_representative(c).a)
        if not (refl and fwd and sym and trans and canon):
            return CriterionResult(13, "isomorphism algebra", False, i, trials,
                                   f"algebra failed on trial {i} (g={g})")
    p31 = PrimeModulus(31)
    scans = 4 if quick else 12
    for i in range(scans):
        rng = derived_rng(seed, "c13-scan", i)
        M = rng.randint(2, 6)
        R = tuple(rng.randrange(31 - M) for _ in range(4))
        box = hyperelliptic.CubeBox(2, R, M)
        while True:
            b = hyperelliptic.CurveVector(
                2, tuple(rng.randrange(31) for _ in range(4)), p31)
            if b.is_nonsingular():
                break
        walk = hyperelliptic.count_isomorphic_in_box(b, box)
        exps = hyperelliptic.scaling_exponents(2)
        scan = 0
        for v in box.vectors():
            if any(all(pow(al, e, 31) * bc % 31 == vc
                       for e, bc, vc in zip(exps, b.a, v))
                   for al in range(1, 31)):
                scan += 1
        if walk != scan:
            return CriterionResult(13, "isomorphism algebra", False, walk, scan,
                                   f"orbit walk {walk} != box scan {scan}")
    return CriterionResult(
        13, "isomorphism algebra", True, trials, trials,
        f"{trials} triples pass equivalence + canonical checks, "
        f"{scans} box scans agree")


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
            criterion_11, criterion_12, criterion_13)


def run_all(quick: bool = False, seed: int = DEFAULT_SEED,
            printer=print) -> list[CriterionResult]:
    results = []
    for fn in CRITERIA:
        t0 = time.perf_counter()
        res = fn(seed=seed, quick=quick)
        res = CriterionResult(res.number, res.name, res.passed, res.value,
                              res.bound, res.detail,
                              (time.perf_counter() - t0) * 1000.0)
        results.append(res)
        printer(f"criterion {res.number:2d} "
                f"{'PASS' if res.passed else 'FAIL'} "
                f"[{res.runtime_ms:7.0f} ms] {res.name}: {res.detail}")
    return results

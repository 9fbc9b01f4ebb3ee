"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line that the terminal summary (see
``conftest.py``) prints after the run.  The module also runs standalone:
``python tests/test_acceptance.py``.

The exhaustive 3x3 Smith-form sweep (9^9 matrices, hours on one core) only
runs with ``KCONTACT_SNF_EXHAUSTIVE=1``; otherwise criterion 7 checks every
smaller shape exhaustively plus a seeded 3x3 sample and says so.
"""

from __future__ import annotations

import functools
import math
import os
import random
import sys
import time
from pathlib import Path

import mpmath
import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent))

from kcontact.cohomology import ASequence, from_a_sequence, parse_presentation
from kcontact.gysin import total_space_betti, total_space_cohomology
from kcontact.intlinalg import AbelianGroupInvariants as G
from kcontact.intlinalg import IntMatrix, rank
from kcontact.reeb import ReebParameter, check_reeb_parameter, closed_orbit_census, subtorus_same_fixed_set, \
    toric_projective_space
from kcontact.relations import integer_relations
from kcontact.sphere_flow import SpherePoint, WeightedFlow, closure_census, flow, orbit_closure, verify_invariance
from kcontact.verdicts import Conclusion, Hypotheses, sphere_verdict
from generators import duality_valid_sequences, random_presentation
from oracles import bareiss_rank, snf_sweep

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
RESULTS: dict[int, tuple[str, str, str]] = {}
HAM = Hypotheses(hamiltonian_circle_isolated_fixed_points=True)


def criterion(number: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            t0 = time.perf_counter()
            try:
                note = fn() or ""
            except BaseException as exc:
                RESULTS[number] = ("FAIL", title, f"{type(exc).__name__}: {exc}"[:300])
                raise
            elapsed = time.perf_counter() - t0
            status = "PARTIAL" if note.startswith("PARTIAL") else "PASS"
            RESULTS[number] = (status, title, f"{note} [{elapsed:.2f}s]".strip())
        return run
    return wrap


def groups_of(H) -> dict[int, G]:
    return dict(H.groups.groups)


@criterion(1, "two-step a-sequence table (1,1,3,6,18,18)")
def test_criterion_01_two_step_table():
    t0 = time.perf_counter()
    H = total_space_cohomology(from_a_sequence(ASequence(5, (1, 1, 3, 6, 18, 18))))
    elapsed = time.perf_counter() - t0
    assert groups_of(H) == {0: G(1), 4: G(0, (3,)), 6: G(0, (2,)), 8: G(0, (3,)), 11: G(1)}
    assert elapsed < 1.0


@criterion(2, "half-jump family, odd n in {3,5,7,9}")
def test_criterion_02_half_jump_family():
    t0 = time.perf_counter()
    for n in (3, 5, 7, 9):
        a = tuple(1 if k <= n // 2 else 2 for k in range(n + 1))
        H = total_space_cohomology(from_a_sequence(ASequence(n, a)))
        assert groups_of(H) == {0: G(1), n + 1: G(0, (2,)), 2 * n + 1: G(1)}, n
    assert time.perf_counter() - t0 < 1.0


@criterion(3, "single jumps a=(1,1,5,5) and (1,1,22,22)")
def test_criterion_03_single_jumps():
    for top in (5, 22):
        P = parse_presentation((FIXTURES / f"v{top}.ring").read_text())
        H = total_space_cohomology(P)
        assert groups_of(H) == {0: G(1), 4: G(0, (top,)), 7: G(1)}


@criterion(4, "CP^n rings n=1..6 give spheres")
def test_criterion_04_cpn_spheres():
    for n in range(1, 7):
        P = from_a_sequence(ASequence(n, (1,) * (n + 1)))
        assert groups_of(total_space_cohomology(P)) == {0: G(1), 2 * n + 1: G(1)}
        assert sphere_verdict(P, HAM).conclusion is Conclusion.HOMEOMORPHIC_TO_SPHERE


@criterion(5, "quadric rank profile Betti numbers")
def test_criterion_05_quadric_betti():
    P = parse_presentation((FIXTURES / "quadric4.ring").read_text())
    betti = total_space_betti(P)
    assert [k for k, b in enumerate(betti) if b] == [0, 4, 5, 9]
    assert all(b in (0, 1) for b in betti)


@criterion(6, "Gysin audits: a-sequence sweep + 500 random presentations")
def test_criterion_06_gysin_audits():
    violations = 0
    swept = 0
    for s in duality_valid_sequences(5, 24):
        swept += 1
        violations += _audit_violations(from_a_sequence(s))
    rng = random.Random(2024)
    for _ in range(500):
        violations += _audit_violations(random_presentation(rng, max_rank=3))
    assert violations == 0
    return f"{swept} sequences, 500 random"


def _audit_violations(P) -> int:
    H = total_space_cohomology(P)  # raises on an internal audit failure
    betti = total_space_betti(P)
    bad = 0
    if sum((-1) ** k * b for k, b in enumerate(betti)) != 0:
        bad += 1
    for k, b in enumerate(betti):
        c, kp = H.provenance[k]
        # exactness: coker + ker ranks add up to b_k, and ranks of the pieces match the base
        r_in = bareiss_rank(P.cup_map(k - 2).to_rows()) if P.cup_map(k - 2).rows and P.cup_map(k - 2).cols else 0
        r_out = bareiss_rank(P.cup_map(k - 1).to_rows()) if P.cup_map(k - 1).rows and P.cup_map(k - 1).cols else 0
        if c.free_rank != P.free_rank(k) - r_in or kp.free_rank != P.free_rank(k - 1) - r_out:
            bad += 1
        if b < 0 or c.free_rank + kp.free_rank != b:
            bad += 1
    return bad


@criterion(7, "Smith form vs gcd-of-minors oracle; rank vs Bareiss")
def test_criterion_07_snf_oracle():
    shapes = [(m, n) for m in range(1, 4) for n in range(1, 4)]
    checked = 0
    full = os.environ.get("KCONTACT_SNF_EXHAUSTIVE") == "1"
    for m, n in shapes:
        if (m, n) == (3, 3) and not full:
            continue
        c, bad = snf_sweep(m, n)
        checked += c
        assert not bad, bad[:3]
    note = ""
    if not full:
        # every 3x3 matrix with entries in [-1, 1], then a seeded sample of the [-4, 4] box
        c, bad = snf_sweep(3, 3, lo=-1, hi=1)
        assert not bad, bad[:3]
        rng = np.random.default_rng(7)
        starts = rng.integers(0, 9 ** 9 - 1000, size=100)
        sampled = 0
        for s in starts:
            c, bad = snf_sweep(3, 3, count=1000, start=int(s))
            sampled += c
            assert not bad, bad[:3]
        note = (f"PARTIAL: {checked} matrices exhaustive for shapes below 3x3, 3x3 exhaustive on [-1,1] "
                f"and {sampled} sampled on [-4,4]; full 3x3 sweep needs KCONTACT_SNF_EXHAUSTIVE=1")
    rng = random.Random(6)
    for _ in range(200):
        r = rng.randint(0, 6)
        L = [[rng.randint(-5, 5) for _ in range(r)] for _ in range(6)]
        R = [[rng.randint(-5, 5) for _ in range(6)] for _ in range(r)]
        rows = [[sum(L[i][k] * R[k][j] for k in range(r)) for j in range(6)] for i in range(6)]
        assert rank(IntMatrix.from_rows(rows)) == bareiss_rank(rows)
    return note or f"{checked} matrices exhaustive, all shapes up to 3x3"


def _census_parameter(n: int) -> ReebParameter:
    s = {p: mpmath.sqrt(p) for p in (2, 3, 5)}
    xi1 = {2: (s[2], 2 * s[2]),
           3: (s[2], s[3], s[2] + s[3]),
           4: (s[2], s[3], s[5], s[2] + s[3])}[n]
    return ReebParameter(xi1, 1)


@criterion(8, "Reeb census on CP^n toric data, n=2,3,4")
def test_criterion_08_reeb_census():
    with mpmath.workdps(60):
        for n in (2, 3, 4):
            d = toric_projective_space(n)
            xi = _census_parameter(n)
            check = check_reeb_parameter(d, xi, B=10**6)
            assert check.positive and check.weight_generic
            assert check.closure_rank == n
            orbits, _ = closed_orbit_census(d, xi, B=10**6)
            assert len(orbits) == n + 1
            xi_f = np.array([float(x) for x in xi.xi1])
            for o, p in zip(orbits, d.fixed_points):
                expected = float(np.dot([float(m) for m in p.moment], xi_f)) + float(xi.xi2)
                assert abs(float(o.speed) - expected) <= 1e-12
            scaled, _ = closed_orbit_census(d, xi.scaled(3), B=10**6)
            assert [o.fixed_point_name for o in scaled] == [o.fixed_point_name for o in orbits]
            for a, b in zip(orbits, scaled):
                # exact up to the last digits of the working precision
                assert abs(b.speed - 3 * a.speed) <= mpmath.mpf(10) ** -55 * b.speed


@criterion(9, "subtorus search k=1, B=5 on CP^2 and CP^3")
def test_criterion_09_subtorus():
    for n in (2, 3):
        d = toric_projective_space(n)
        (v,) = subtorus_same_fixed_set(d, 1, 5)
        assert max(map(abs, v)) <= 5
        for p in d.fixed_points:
            for w in p.weights:
                assert sum(a * b for a, b in zip(w, v)) != 0


@criterion(10, "weighted sphere flow closed-orbit census")
def test_criterion_10_sphere_flow():
    for lam in ((1, math.sqrt(2)), (1, math.sqrt(2), math.sqrt(3))):
        assert integer_relations(list(lam), 1000) == []
        r = closure_census(WeightedFlow(lam), random_count=100, seed=0, Q=1000)
        assert r["closed_count"] == len(lam)
        assert sorted(e["point"] for e in r["closed"]) == [f"e{j + 1}" for j in range(len(lam))]
    w = WeightedFlow((1, 2))
    p = SpherePoint.normalized([1, 1])
    c = orbit_closure(w, p)
    assert c.closed and abs(c.period - 2 * math.pi) <= 1e-12
    assert np.abs(flow(w, p, 2 * math.pi).z - p.z).max() <= 1e-8


@criterion(11, "invariance suite on 5 random weight vectors")
def test_criterion_11_invariance():
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    worst = {"max_reeb_deviation": 0.0, "max_pullback_deviation": 0.0,
             "max_lift_deviation": 0.0, "max_horizontal_deviation": 0.0}
    for i in range(5):
        n = int(rng.integers(1, 5))
        lam = tuple(float(x) for x in rng.uniform(0.1, 10, size=n + 1))
        r = verify_invariance(WeightedFlow(lam), sample_count=1000, seed=i)
        for k in worst:
            worst[k] = max(worst[k], r[k])
    assert worst["max_reeb_deviation"] <= 1e-12
    assert worst["max_pullback_deviation"] <= 1e-10
    assert worst["max_lift_deviation"] <= 1e-12
    assert worst["max_horizontal_deviation"] <= 1e-10
    assert time.perf_counter() - t0 < 30
    return ", ".join(f"{k}={v:.1e}" for k, v in worst.items())


def summary_lines() -> list[str]:
    lines = []
    for num in sorted(RESULTS):
        status, title, note = RESULTS[num]
        lines.append(f"criterion {num:2d} {status:7s} {title} {note}".rstrip())
    return lines


if __name__ == "__main__":
    failed = False
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except BaseException:
                failed = True
    print("\n".join(summary_lines()))
    sys.exit(1 if failed else 0)

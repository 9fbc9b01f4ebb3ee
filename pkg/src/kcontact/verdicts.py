"""Sphere criteria for the total space of a circle bundle.

Every verdict carries a justification chain.  Steps computed in this run
are marked ``checked``; facts imported from the literature (simple
connectivity of Hamiltonian manifolds, Chern class results, the
generalized Poincaré conjecture) enter only as ``assumed`` input flags.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .cohomology import CupPresentation, is_primitive
from .gysin import total_space_betti, total_space_cohomology
from .intlinalg import rational_rank

__all__ = [
    "Conclusion",
    "Hypotheses",
    "Step",
    "Verdict",
    "HypothesisError",
    "is_integral_cpn_ring",
    "is_real_cpn_ring",
    "pi1_total_space",
    "sphere_verdict",
    "chern_criterion",
]


class Conclusion(str, Enum):
    HOMEOMORPHIC_TO_SPHERE = "homeomorphic_to_sphere"
    INTEGRAL_COHOMOLOGY_SPHERE = "integral_cohomology_sphere"
    REAL_COHOMOLOGY_SPHERE_ONLY = "real_cohomology_sphere_only"
    NOT_COHOMOLOGY_SPHERE = "not_cohomology_sphere"
    INCONCLUSIVE = "inconclusive"


# strength order used by the monotonicity property; INCONCLUSIVE is unordered
STRENGTH = {
    Conclusion.NOT_COHOMOLOGY_SPHERE: 0,
    Conclusion.REAL_COHOMOLOGY_SPHERE_ONLY: 1,
    Conclusion.INTEGRAL_COHOMOLOGY_SPHERE: 2,
    Conclusion.HOMEOMORPHIC_TO_SPHERE: 3,
}


class HypothesisError(ValueError):
    """A required hypothesis is missing or contradicts known facts."""


@dataclass(frozen=True)
class Hypotheses:
    """Input flags; ``pi1_base_trivial`` is tri-state (True/False/None)."""

    pi1_base_trivial: Optional[bool] = None
    h2_base_is_Z: bool = False
    euler_primitive: bool = False
    hamiltonian_circle_isolated_fixed_points: bool = False
    fixed_point_count: Optional[int] = None
    c1_coefficient: Optional[int] = None
    base_is_kahler: bool = False

    def __post_init__(self):
        if self.fixed_point_count is not None and self.fixed_point_count < 1:
            raise HypothesisError("fixed_point_count must be at least 1")


@dataclass(frozen=True)
class Step:
    step: str
    status: str  # "checked" | "assumed"
    ref: str

    def to_json(self) -> dict:
        return {"step": self.step, "status": self.status, "ref": self.ref}


@dataclass(frozen=True)
class Verdict:
    conclusion: Conclusion
    justification: tuple[Step, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {"conclusion": self.conclusion.value,
                "justification": [s.to_json() for s in self.justification]}


def _checked(step, ref):
    return Step(step, "checked", ref)


def _assumed(step, ref):
    return Step(step, "assumed", ref)


def _odd_vanishing_even_rank_one(P: CupPresentation) -> bool:
    for k in range(P.dim_base + 1):
        g = P.group(k)
        if k % 2 and not g.is_zero:
            return False
        if k % 2 == 0 and g.free_rank != 1:
            return False
    return True


def is_integral_cpn_ring(P: CupPresentation) -> bool:
    """``H^*(N; Z) = Z[x]/x^{n+1}``: each cup map ``H^{2i} -> H^{2i+2}`` is ``±1``."""
    if not _odd_vanishing_even_rank_one(P) or P.groups.has_torsion():
        return False
    return all(abs(P.cup_map(2 * i)[0, 0]) == 1 for i in range(P.n))


def is_real_cpn_ring(P: CupPresentation) -> bool:
    """``H^*(N; R) = R[x]/x^{n+1}``: rank one in even degrees, x-multiplication nonzero."""
    for k in range(P.dim_base + 1):
        r = P.free_rank(k)
        if (k % 2 and r) or (k % 2 == 0 and r != 1):
            return False
    return all(rational_rank(P.cup_map(2 * i)) == 1 for i in range(P.n))


def pi1_total_space(h: Hypotheses) -> Optional[bool]:
    """``True`` when simple connectivity of M follows, else ``None`` (never ``False``)."""
    base_ok = h.pi1_base_trivial is True or h.hamiltonian_circle_isolated_fixed_points
    if base_ok and h.h2_base_is_Z and h.euler_primitive:
        return True
    return None


def _fixed_point_audit(n: int, h: Hypotheses) -> None:
    if h.fixed_point_count is not None and h.fixed_point_count < n + 1:
        raise HypothesisError(
            f"a Hamiltonian circle action on a {2 * n}-manifold has at least {n + 1} "
            f"fixed points, got fixed_point_count={h.fixed_point_count}")


def _pi1_steps(h: Hypotheses) -> list[Step]:
    steps = []
    if h.hamiltonian_circle_isolated_fixed_points:
        steps.append(_assumed("base carries a Hamiltonian circle action with isolated fixed points",
                              "hypothesis:hamiltonian-isolated"))
        steps.append(_assumed("pi_1(N) = pi_1(minimum of the moment map) = 1",
                              "lit:hamiltonian-min-simply-connected"))
    elif h.pi1_base_trivial is True:
        steps.append(_assumed("pi_1(N) = 1", "hypothesis:pi1-base"))
    return steps


def sphere_verdict(P: CupPresentation, h: Hypotheses) -> Verdict:
    _fixed_point_audit(P.n, h)
    steps: list[Step] = []
    primitive = any(P.euler_class_coords) and is_primitive(P.euler_class_coords)
    h2_is_z = P.group(2).free_rank == 1 and not P.group(2).torsion
    steps.append(_checked(f"euler class {list(P.euler_class_coords)} is "
                          + ("primitive" if primitive else "not primitive"), "check:primitive"))
    steps.append(_checked("H^2(N; Z) = Z" if h2_is_z else "H^2(N; Z) != Z", "check:h2"))

    H = total_space_cohomology(P)
    real = is_real_cpn_ring(P)
    integral = is_integral_cpn_ring(P)

    if not real:
        steps.append(_checked("H^*(N; R) is not R[x]/x^{n+1}", "gysin:real-cpn-iff-real-sphere"))
        betti = total_space_betti(P)
        extra = [k for k in range(1, P.dim_base + 1) if betti[k]]
        steps.append(_checked(f"b_k(M) != 0 for k in {extra}" if extra
                              else "Betti numbers of M differ from those of a sphere",
                              "gysin:betti"))
        return Verdict(Conclusion.NOT_COHOMOLOGY_SPHERE, tuple(steps))
    steps.append(_checked("H^*(N; R) = R[x]/x^{n+1}, so M has the real cohomology of S^{2n+1}",
                          "gysin:real-cpn-iff-real-sphere"))

    if not integral:
        witnesses = H.torsion_witnesses()
        steps.append(_checked("H^*(N; Z) is not Z[x]/x^{n+1}", "gysin:integral-cpn-iff-integral-sphere"))
        for k, g in witnesses:
            steps.append(_checked(f"H^{k}(M; Z) = {g}", "gysin:torsion-witness"))
        return Verdict(Conclusion.REAL_COHOMOLOGY_SPHERE_ONLY, tuple(steps))
    steps.append(_checked("H^*(N; Z) = Z[x]/x^{n+1}, so M has the integral cohomology of S^{2n+1}",
                          "gysin:integral-cpn-iff-integral-sphere"))

    full = Hypotheses(h.pi1_base_trivial, h2_is_z, bool(primitive),
                      h.hamiltonian_circle_isolated_fixed_points)
    if pi1_total_space(full) is not True:
        steps.append(_checked("pi_1(M) = 1 does not follow from the given hypotheses",
                              "pi1:circle-bundle-homotopy-sequence"))
        return Verdict(Conclusion.INTEGRAL_COHOMOLOGY_SPHERE, tuple(steps))
    steps += _pi1_steps(h)
    steps.append(_checked("pi_1(M) = 1 since x is primitive and H^2(N; Z) = Z",
                          "pi1:circle-bundle-homotopy-sequence"))
    steps.append(_assumed("a simply connected integral cohomology sphere of dimension >= 5 "
                          "is homeomorphic to the sphere (dimension 3 by Perelman, 1 trivially)",
                          "lit:generalized-poincare-conjecture"))
    return Verdict(Conclusion.HOMEOMORPHIC_TO_SPHERE, tuple(steps))


def chern_criterion(n: int, h: Hypotheses) -> Verdict:
    """First-Chern-class test for a Hamiltonian circle action with ``n + 1`` fixed points."""
    if h.c1_coefficient is None:
        raise HypothesisError("missing hypothesis: c1_coefficient")
    if not h.hamiltonian_circle_isolated_fixed_points:
        raise HypothesisError("missing hypothesis: hamiltonian_circle_isolated_fixed_points")
    if h.fixed_point_count is None:
        raise HypothesisError("missing hypothesis: fixed_point_count")
    _fixed_point_audit(n, h)
    if h.fixed_point_count != n + 1:
        raise HypothesisError(f"fixed_point_count must be n+1 = {n + 1}, got {h.fixed_point_count}")
    steps = [
        _assumed(f"Hamiltonian circle action with exactly {n + 1} isolated fixed points",
                 "hypothesis:hamiltonian-isolated"),
        _assumed("x = [omega] is a primitive integral class", "hypothesis:primitive"),
        _assumed(f"c_1(N) = {h.c1_coefficient} x", "hypothesis:c1"),
    ]
    if h.c1_coefficient != n + 1:
        steps.append(_checked(f"c_1 coefficient {h.c1_coefficient} != n+1 = {n + 1}; "
                              "the Chern criterion does not apply", "chern:c1-criterion"))
        return Verdict(Conclusion.INCONCLUSIVE, tuple(steps))
    steps += [
        _checked(f"c_1 coefficient equals n+1 = {n + 1}", "chern:c1-criterion"),
        _assumed("c_1(N) = (n+1)x forces H^*(N; Z) = Z[x]/x^{n+1} and c(N) = (1+x)^{n+1}",
                 "lit:largest-weight-equals-moment-length"),
        _assumed("pi_1(N) = 1", "lit:hamiltonian-min-simply-connected"),
        _checked("integral CP^n ring with pi_1(N) = 1 gives M homeomorphic to S^{2n+1}",
                 "gysin:integral-cpn-iff-integral-sphere"),
        _assumed("generalized Poincare conjecture", "lit:generalized-poincare-conjecture"),
    ]
    return Verdict(Conclusion.HOMEOMORPHIC_TO_SPHERE, tuple(steps))

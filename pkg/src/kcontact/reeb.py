"""Closed Reeb orbits of perturbed contact forms on a Boothby–Wang total space.

A Hamiltonian ``T^l``-action on the base lifts to ``M``; together with the
fiber circle this gives a ``T^l x S^1``-action preserving the connection
form ``alpha``.  For ``xi = (xi1, xi2)`` with positive contact moment, the
form ``alpha / alpha(xi_M)`` has Reeb field ``xi_M``.  When ``xi1`` avoids
every weight hyperplane and ``xi`` generates a torus of dimension >= 2, the
closed orbits are exactly the fibers over the ``T``-fixed points, and the
fiber over ``p`` is traversed at speed ``<phi(p), xi1> + xi2``.

Everything here works on moment data only: fixed points, their moment
values (lattice points) and isotropy weights.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .intlinalg import IntMatrix, rank
from .relations import DEFAULT_DPS, default_tolerance, integer_relations, to_mpf

__all__ = [
    "InvalidMomentData",
    "ParameterRejected",
    "SearchExhausted",
    "FixedPoint",
    "MomentData",
    "ReebParameter",
    "ParameterCheck",
    "ClosedOrbit",
    "parse_moment_data",
    "dump_moment_data",
    "toric_projective_space",
    "contact_moment",
    "check_reeb_parameter",
    "closed_orbit_census",
    "subtorus_same_fixed_set",
]


class InvalidMomentData(ValueError):
    pass


class ParameterRejected(ValueError):
    def __init__(self, failed: Sequence[str], check: "ParameterCheck"):
        self.failed = tuple(failed)
        self.check = check
        super().__init__("Reeb parameter rejected: " + ", ".join(self.failed))


class SearchExhausted(LookupError):
    pass


def _fraction(x) -> Fraction:
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise InvalidMomentData(f"moment value {x!r} is not a rational 'p/q'") from None
        except ZeroDivisionError:
            raise InvalidMomentData(f"moment value {x!r} has a zero denominator") from None
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise InvalidMomentData(f"moment value {x!r} must be an integer or a 'p/q' string")
    return Fraction(x)


@dataclass(frozen=True)
class FixedPoint:
    name: str
    moment: tuple[Fraction, ...]
    weights: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class MomentData:
    torus_rank: int
    base_dim: int
    fixed_points: tuple[FixedPoint, ...]

    def __post_init__(self):
        l, dim = self.torus_rank, self.base_dim
        if dim < 2 or dim % 2:
            raise InvalidMomentData(f"base_dim must be a positive even integer, got {dim}")
        n = dim // 2
        if not 1 <= l <= n:
            raise InvalidMomentData(f"torus rank must satisfy 1 <= l <= n = {n}, got {l}")
        if not self.fixed_points:
            raise InvalidMomentData("a Hamiltonian torus action has at least one fixed point")
        names = set()
        pts = []
        for p in self.fixed_points:
            if p.name in names:
                raise InvalidMomentData(f"duplicate fixed point name {p.name!r}")
            names.add(p.name)
            moment = tuple(_fraction(x) for x in p.moment)
            if len(moment) != l:
                raise InvalidMomentData(f"{p.name}: moment has {len(moment)} coordinates, expected {l}")
            weights = tuple(tuple(int(x) for x in w) for w in p.weights)
            for w in weights:
                if len(w) != l:
                    raise InvalidMomentData(f"{p.name}: weight {list(w)} has length {len(w)}, expected {l}")
                if not any(w):
                    raise InvalidMomentData(f"{p.name}: zero weight vector")
            if len(weights) > n:
                raise InvalidMomentData(f"{p.name}: {len(weights)} weights exceed complex dimension {n}")
            pts.append(FixedPoint(str(p.name), moment, weights))
        object.__setattr__(self, "fixed_points", tuple(pts))
        if self.isolated and len(pts) < n + 1:
            raise InvalidMomentData(
                f"a Hamiltonian action on a {dim}-manifold with isolated fixed points has at "
                f"least {n + 1} of them, got {len(pts)}")

    @property
    def n(self) -> int:
        return self.base_dim // 2

    @property
    def isolated(self) -> bool:
        """Every fixed point has a full set of ``n`` nonzero weights."""
        return all(len(p.weights) == self.n for p in self.fixed_points)

    def all_weights(self) -> list[tuple[int, ...]]:
        return [w for p in self.fixed_points for w in p.weights]


def parse_moment_data(source: str) -> MomentData:
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise InvalidMomentData(f"{exc.msg} (line {exc.lineno}, column {exc.colno})") from None
    if not isinstance(data, dict):
        raise InvalidMomentData("top level must be a JSON object")
    unknown = sorted(set(data) - {"torus_rank", "base_dim", "fixed_points"})
    if unknown:
        raise InvalidMomentData(f"unknown top-level field(s): {', '.join(unknown)}")
    try:
        pts = tuple(
            FixedPoint(fp["name"], tuple(fp["moment"]), tuple(tuple(w) for w in fp["weights"]))
            for fp in data["fixed_points"]
        )
        return MomentData(int(data["torus_rank"]), int(data["base_dim"]), pts)
    except (KeyError, TypeError) as exc:
        raise InvalidMomentData(f"malformed moment data: {exc}") from None


def dump_moment_data(d: MomentData) -> str:
    return json.dumps({
        "torus_rank": d.torus_rank,
        "base_dim": d.base_dim,
        "fixed_points": [
            {"name": p.name, "moment": [str(x) for x in p.moment], "weights": [list(w) for w in p.weights]}
            for p in d.fixed_points
        ],
    }, indent=2)


def toric_projective_space(n: int) -> MomentData:
    """Standard ``T^n`` on ``CP^n``: simplex vertices ``0, e_1..e_n``; weights are edge vectors."""
    verts = [tuple(0 for _ in range(n))] + [tuple(int(i == j) for j in range(n)) for i in range(n)]
    pts = []
    for i, v in enumerate(verts):
        weights = tuple(tuple(b - a for a, b in zip(v, u)) for j, u in enumerate(verts) if j != i)
        pts.append(FixedPoint(f"p{i}", tuple(Fraction(x) for x in v), weights))
    return MomentData(n, 2 * n, tuple(pts))


@dataclass(frozen=True)
class ReebParameter:
    """``xi = (xi1, xi2)`` in ``Lie(T) x Lie(S^1)``; entries are exact or mpmath reals."""

    xi1: tuple
    xi2: object

    def __post_init__(self):
        object.__setattr__(self, "xi1", tuple(self.xi1))
        if not any(x != 0 for x in self.xi1) and self.xi2 == 0:
            raise ValueError("the Reeb parameter must be nonzero")

    def as_vector(self) -> list:
        return list(self.xi1) + [self.xi2]

    def scaled(self, c) -> "ReebParameter":
        return ReebParameter(tuple(c * x for x in self.xi1), c * self.xi2)


def contact_moment(moment: Sequence[Fraction], xi: ReebParameter):
    """``psi^xi = <phi(p), xi1> + xi2`` on the fiber over a fixed point."""
    if len(moment) != len(xi.xi1):
        raise ValueError(f"xi1 has {len(xi.xi1)} entries, torus has rank {len(moment)}")
    terms = [m * x for m, x in zip(moment, xi.xi1)] + [xi.xi2]
    if all(isinstance(t, (int, Fraction)) for t in terms):
        return sum(terms, Fraction(0))
    return mpmath.fsum(to_mpf(t) for t in terms)


@dataclass(frozen=True)
class ParameterCheck:
    positive: bool
    weight_generic: bool
    closure_rank: int
    min_speed: object
    relations: tuple[tuple[int, ...], ...]
    bound: int
    tol: float
    offending_weights: tuple[tuple[str, tuple[int, ...]], ...] = field(default=())

    @property
    def accepted(self) -> bool:
        return self.positive and self.weight_generic and self.closure_rank >= 2

    def failures(self) -> list[str]:
        out = []
        if not self.positive:
            out.append(f"positivity (min speed {float(self.min_speed):.6g} <= 0)")
        if not self.weight_generic:
            out.append("weight genericity ("
                       + "; ".join(f"<{list(w)}, xi1> = 0 at {name}" for name, w in self.offending_weights)
                       + ")")
        if self.closure_rank < 2:
            out.append(f"closure rank {self.closure_rank} < 2 (relations {[list(r) for r in self.relations]})")
        return out

    def to_json(self) -> dict:
        return {
            "positive": self.positive,
            "weight_generic": self.weight_generic,
            "closure_rank": self.closure_rank,
            "min_speed": float(self.min_speed),
            "relations": [list(r) for r in self.relations],
            "bound": self.bound,
            "tol": self.tol,
        }


def check_reeb_parameter(d: MomentData, xi: ReebParameter, B: int = 10**6, tol: float | None = None,
                         dps: int = DEFAULT_DPS) -> ParameterCheck:
    """Positivity, weight genericity and closure rank of ``xi`` for moment data ``d``.

    Positivity is tested at the fixed points only: the moment image is the
    convex hull of their images and ``psi^xi`` is affine on it.  ``tol``
    defaults to the relation tolerance for the box ``[-B, B]^(l+1)``.
    """
    if tol is None:
        tol = default_tolerance(d.torus_rank + 1, B)
    if len(xi.xi1) != d.torus_rank:
        raise InvalidMomentData(f"xi1 has {len(xi.xi1)} entries, torus has rank {d.torus_rank}")
    with mpmath.workdps(dps):
        speeds = [contact_moment(p.moment, xi) for p in d.fixed_points]
        min_speed = min(speeds)
        bad = []
        for p in d.fixed_points:
            for w in p.weights:
                pairing = mpmath.fsum(wi * to_mpf(x) for wi, x in zip(w, xi.xi1))
                if abs(pairing) <= tol:
                    bad.append((p.name, w))
    rels = integer_relations(xi.as_vector(), B, tol, dps)
    return ParameterCheck(
        positive=min_speed > 0,
        weight_generic=not bad,
        closure_rank=d.torus_rank + 1 - len(rels),
        min_speed=min_speed,
        relations=tuple(rels),
        bound=B,
        tol=tol,
        offending_weights=tuple(bad),
    )


@dataclass(frozen=True)
class ClosedOrbit:
    """Fiber over a fixed point; period is ``1 / speed`` with fiber length 1."""

    fixed_point_name: str
    speed: object
    period: object

    def to_json(self) -> dict:
        return {"name": self.fixed_point_name, "speed": float(self.speed), "period": float(self.period)}


def closed_orbit_census(d: MomentData, xi: ReebParameter, B: int = 10**6, tol: float | None = None,
                        dps: int = DEFAULT_DPS) -> tuple[list[ClosedOrbit], ParameterCheck]:
    """One closed orbit per fixed point, after the parameter passes all checks."""
    check = check_reeb_parameter(d, xi, B, tol, dps)
    if not check.accepted:
        raise ParameterRejected(check.failures(), check)
    orbits = []
    with mpmath.workdps(dps):
        for p in d.fixed_points:
            s = contact_moment(p.moment, xi)
            orbits.append(ClosedOrbit(p.name, s, 1 / s))
    if d.isolated and len(orbits) < d.n + 1:
        raise AssertionError("fewer closed orbits than the minimal n+1")
    return orbits, check


def _avoids(v: Sequence[int], weights: Sequence[Sequence[int]]) -> bool:
    return all(sum(a * b for a, b in zip(v, w)) for w in weights)


def _box_order(l: int, B: int):
    """Positive orthant first, then the rest; each by max-norm, then lexicographic."""
    for r in range(1, B + 1):
        for v in itertools.product(range(1, r + 1), repeat=l):
            if max(v) == r:
                yield v
    for r in range(1, B + 1):
        for v in itertools.product(range(-r, r + 1), repeat=l):
            if max(map(abs, v)) == r and min(v) <= 0:
                yield v


def subtorus_same_fixed_set(d: MomentData, k: int, B: int) -> list[tuple[int, ...]]:
    """Rank-k integer vectors spanning a subtorus whose first circle has the full fixed set.

    ``v1`` pairs nonzero with every isotropy weight, so ``exp(t v1)`` fixes
    exactly the ``T``-fixed points; the remaining vectors are coordinate
    vectors (last first) that raise the rank.
    """
    l = d.torus_rank
    if not 1 <= k <= l:
        raise ValueError(f"subtorus rank must satisfy 1 <= k <= {l}, got {k}")
    weights = d.all_weights()
    v1 = next((v for v in _box_order(l, B) if _avoids(v, weights)), None)
    if v1 is None:
        raise SearchExhausted(f"no vector in [-{B}, {B}]^{l} avoids all weight hyperplanes; increase the bound")
    basis = [tuple(v1)]
    for i in reversed(range(l)):
        if len(basis) == k:
            break
        e = tuple(int(i == j) for j in range(l))
        if rank(IntMatrix.from_rows(basis + [e], l)) == len(basis) + 1:
            basis.append(e)
    return basis

"""Weighted Reeb flow on the unit sphere ``S^{2n+1}`` in ``C^{n+1}``.

The standard form is ``alpha = sum x_i dy_i - y_i dx_i``, which on a tangent
vector ``v`` at ``z`` reads ``sum Im(conj(z_i) v_i)``.  For positive weights
``lambda`` the field ``R_lambda(z) = i lambda z`` is the Reeb field of
``alpha' = alpha / sum lambda_i |z_i|^2`` and its flow is the diagonal phase
rotation ``z_j -> exp(i lambda_j t) z_j``, evaluated here in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "NORM_TOL",
    "SUPPORT_TOL",
    "NonTangentVector",
    "WeightedFlow",
    "SpherePoint",
    "flow",
    "unit_reeb_field",
    "reeb_field",
    "alpha_eval",
    "alpha_prime_eval",
    "Closure",
    "orbit_closure",
    "random_sphere_points",
    "closure_census",
    "verify_invariance",
]

NORM_TOL = 1e-12
SUPPORT_TOL = 1e-9


class NonTangentVector(ValueError):
    pass


@dataclass(frozen=True)
class WeightedFlow:
    lam: tuple[float, ...]

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lam)
        if not lam:
            raise ValueError("at least one weight is required")
        if not all(x > 0 and math.isfinite(x) for x in lam):
            raise ValueError(f"weights must be positive and finite, got {lam}")
        object.__setattr__(self, "lam", lam)

    @property
    def n(self) -> int:
        return len(self.lam) - 1

    def array(self) -> np.ndarray:
        return np.asarray(self.lam, dtype=float)


@dataclass(frozen=True, eq=False)
class SpherePoint:
    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex).reshape(-1)
        err = abs(float(np.vdot(z, z).real) - 1.0)
        if err > NORM_TOL:
            raise ValueError(f"point is off the unit sphere: | |z|^2 - 1 | = {err:.3g}")
        z.setflags(write=False)
        object.__setattr__(self, "z", z)

    @classmethod
    def normalized(cls, z: Sequence[complex]) -> "SpherePoint":
        z = np.asarray(z, dtype=complex)
        norm = np.linalg.norm(z)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(z / norm)

    @classmethod
    def coordinate(cls, n_plus_1: int, j: int) -> "SpherePoint":
        z = np.zeros(n_plus_1, dtype=complex)
        z[j] = 1
        return cls(z)

    def support(self, tol: float = SUPPORT_TOL) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(np.abs(self.z) > tol))


def _check_dims(w: WeightedFlow, p: SpherePoint) -> None:
    if len(p.z) != len(w.lam):
        raise ValueError(f"point lives in C^{len(p.z)} but the flow has {len(w.lam)} weights")


def flow(w: WeightedFlow, p: SpherePoint, t: float) -> SpherePoint:
    _check_dims(w, p)
    z = np.exp(1j * w.array() * t) * p.z
    # phase rotation keeps |z| up to rounding; renormalize only against drift
    return SpherePoint(z / np.linalg.norm(z))


def unit_reeb_field(p: SpherePoint) -> np.ndarray:
    return 1j * p.z


def reeb_field(w: WeightedFlow, p: SpherePoint) -> np.ndarray:
    _check_dims(w, p)
    return 1j * w.array() * p.z


def _tangent(p: SpherePoint, v: np.ndarray, tol: float) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape != p.z.shape:
        raise ValueError("tangent vector has the wrong dimension")
    normal = float(np.vdot(p.z, v).real)
    if abs(normal) > tol:
        raise NonTangentVector(f"vector is not tangent to the sphere: Re<z, v> = {normal:.3g}")
    return v


def _alpha(z: np.ndarray, v: np.ndarray) -> float:
    return float(np.sum((np.conj(z) * v).imag))


def alpha_eval(p: SpherePoint, v, tol: float = 1e-9) -> float:
    return _alpha(p.z, _tangent(p, v, tol))


def alpha_prime_eval(w: WeightedFlow, p: SpherePoint, v, tol: float = 1e-9) -> float:
    _check_dims(w, p)
    v = _tangent(p, v, tol)
    return _alpha(p.z, v) / float(np.sum(w.array() * np.abs(p.z) ** 2))


@dataclass(frozen=True)
class Closure:
    closed: bool
    period: Optional[float] = None
    support: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"closed": self.closed, "period": self.period, "support": list(self.support)}


def _rational_approx(r: float, Q: int, tol: float) -> Optional[Fraction]:
    """First continued-fraction convergent ``p/q`` with ``q <= Q`` and ``|q r - p| <= tol``.

    Convergents minimize ``|q r - p|`` among all smaller denominators, so the
    first hit has the least admissible ``q``.
    """
    x = Fraction(r)
    h0, h1, k0, k1 = 0, 1, 1, 0
    while True:
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > Q:
            return None
        if abs(k1 * r - h1) <= tol:
            return Fraction(h1, k1)
        frac = x - a
        if frac == 0:
            return None
        x = 1 / frac


def orbit_closure(w: WeightedFlow, p: SpherePoint, Q: int = 10**6, tol: float = 1e-9,
                  support_tol: float = SUPPORT_TOL) -> Closure:
    """Decide whether the orbit through ``p`` closes, from the weights on its support.

    Ratios ``lambda_j / lambda_ref`` (``ref`` the first support index) must
    all be rational with denominator at most ``Q`` up to ``tol``.  Writing
    them over a common denominator ``L`` as ``m_j / L``, the period is
    ``2 pi L / (gcd(m) lambda_ref)``.
    """
    _check_dims(w, p)
    supp = p.support(support_tol)
    lam = w.lam
    ref = lam[supp[0]]
    ratios = []
    for j in supp:
        f = _rational_approx(lam[j] / ref, Q, tol)
        if f is None:
            return Closure(False, None, supp)
        ratios.append(f)
    L = math.lcm(*(f.denominator for f in ratios))
    g = math.gcd(*(f.numerator * (L // f.denominator) for f in ratios))
    return Closure(True, 2 * math.pi * L / (g * ref), supp)


def random_sphere_points(n_plus_1: int, count: int, rng: np.random.Generator) -> list[SpherePoint]:
    raw = rng.standard_normal((count, n_plus_1)) + 1j * rng.standard_normal((count, n_plus_1))
    return [SpherePoint.normalized(z) for z in raw]


def closure_census(w: WeightedFlow, random_count: int = 100, seed: int = 0, Q: int = 10**3,
                   tol: float = 1e-9) -> dict:
    """Closure of the orbits through every coordinate point and random full-support points."""
    m = len(w.lam)
    rng = np.random.default_rng(seed)
    entries = []
    for j in range(m):
        c = orbit_closure(w, SpherePoint.coordinate(m, j), Q, tol)
        entries.append({"point": f"e{j + 1}", **c.to_json()})
    for i, p in enumerate(random_sphere_points(m, random_count, rng)):
        c = orbit_closure(w, p, Q, tol)
        entries.append({"point": f"random{i}", **c.to_json()})
    closed = [e for e in entries if e["closed"]]
    return {
        "lambda": list(w.lam),
        "denominator_bound": Q,
        "tol": tol,
        "seed": seed,
        "random_points": random_count,
        "closed_count": len(closed),
        "closed": [{"point": e["point"], "period": e["period"]} for e in closed],
    }


def _random_tangent(z: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(z.shape) + 1j * rng.standard_normal(z.shape)
    return v - np.vdot(z, v).real * z


def verify_invariance(w: WeightedFlow, sample_count: int = 1000, seed: int = 0,
                      tol: float = 1e-10, t_max: float = 100.0) -> dict:
    """Sampled deviations for ``alpha'(R_lambda) = 1``, flow invariance of ``alpha'``,
    the lift identity ``alpha(X_j) = |z_j|^2`` and horizontality of ``X_j - alpha(X_j) R``.
    """
    rng = np.random.default_rng(seed)
    m = len(w.lam)
    reeb_dev = pull_dev = lift_dev = horiz_dev = 0.0
    for p in random_sphere_points(m, sample_count, rng):
        reeb_dev = max(reeb_dev, abs(alpha_prime_eval(w, p, reeb_field(w, p)) - 1.0))

        v = _random_tangent(p.z, rng)
        t = float(rng.uniform(0, t_max))
        q = flow(w, p, t)
        pushed = np.exp(1j * w.array() * t) * v  # the flow is linear, so its differential is itself
        pull_dev = max(pull_dev, abs(alpha_prime_eval(w, q, pushed) - alpha_prime_eval(w, p, v)))

        R = unit_reeb_field(p)
        for j in range(m):
            X = np.zeros(m, dtype=complex)
            X[j] = 1j * p.z[j]
            a = alpha_eval(p, X)
            lift_dev = max(lift_dev, abs(a - float(abs(p.z[j])) ** 2))
            horiz_dev = max(horiz_dev, abs(alpha_eval(p, X - a * R)))
    report = {
        "lambda": list(w.lam),
        "samples": sample_count,
        "seed": seed,
        "tol": tol,
        "max_reeb_deviation": reeb_dev,
        "max_pullback_deviation": pull_dev,
        "max_lift_deviation": lift_dev,
        "max_horizontal_deviation": horiz_dev,
    }
    report["passed"] = max(reeb_dev, pull_dev, lift_dev, horiz_dev) <= tol
    return report

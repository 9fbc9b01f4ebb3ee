"""Bounded integer relation search.

An integer relation of a real vector ``v`` is a nonzero ``c`` with
``<c, v> = 0``.  On inexact data we accept ``|<c, v>| <= tol * |c| * |v|``.
Candidates come from LLL reduction of the lattice spanned by the rows
``(e_i, round(K * v_i))`` with ``K = 1 / (tol * |v|)``: relations give rows
whose last coordinate is at most ``|c|``, while every non-relation is
pushed out by a factor ``1 / tol``.
"""

from __future__ import annotations

from numbers import Rational
from typing import Sequence

import mpmath
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .intlinalg import IntMatrix, rank

__all__ = ["to_mpf", "integer_relations", "default_tolerance", "DEFAULT_DPS"]

DEFAULT_DPS = 60


def to_mpf(x) -> mpmath.mpf:
    """Convert ints, Fractions, floats or mpmath numbers at the current precision."""
    if isinstance(x, Rational):
        return mpmath.mpf(int(x.numerator)) / int(x.denominator)
    return mpmath.mpf(x)


def default_tolerance(m: int, B: int) -> float:
    """Tolerance that separates true relations from near-misses in ``[-B, B]^m``.

    By pigeonhole some nonzero ``c`` in the box has ``|<c, v>|`` about
    ``|v| B^(1-m)``, so the test ``tol |c| |v|`` must stay well below
    ``B^(-m)``.
    """
    return min(1e-30, 1e-10 * float(B) ** (-m))


def _working_dps(tol: float, dps: int) -> int:
    # the scaled lattice needs ~log10(1/tol) digits beyond what K*v resolves
    need = int(mpmath.ceil(-mpmath.log10(tol))) + 20 if tol > 0 else dps
    return max(dps, need)


def _canonical(c: Sequence[int]) -> tuple[int, ...]:
    for x in c:
        if x:
            return tuple(c) if x > 0 else tuple(-y for y in c)
    return tuple(c)


def integer_relations(v: Sequence, B: int, tol: float | None = None,
                      dps: int = DEFAULT_DPS) -> list[tuple[int, ...]]:
    """Independent integer relations of ``v`` with entries in ``[-B, B]``.

    Returns a maximal independent set found by the lattice search, each
    vector sign-normalized (first nonzero entry positive) and the list
    sorted by max-norm, then lexicographically.  ``v`` may hold ints,
    Fractions, floats or mpmath reals; for irrational entries pass them at
    a precision that comfortably exceeds ``tol``.  Without ``tol`` the
    :func:`default_tolerance` for the box is used.
    """
    if not len(v):
        raise ValueError("integer_relations needs a nonempty vector")
    if B < 1:
        raise ValueError("relation bound must be >= 1")
    m = len(v)
    if tol is None:
        tol = default_tolerance(m, B)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    with mpmath.workdps(_working_dps(tol, dps)):
        vals = [to_mpf(x) for x in v]
        norm = mpmath.sqrt(mpmath.fsum(x * x for x in vals))
        if norm == 0:
            return [tuple(int(i == j) for j in range(m)) for i in range(m)]
        K = 1 / (mpmath.mpf(tol) * norm)
        scaled = [int(mpmath.nint(K * x)) for x in vals]
        rows = [[ZZ(int(i == j)) for j in range(m)] + [ZZ(scaled[i])] for i in range(m)]
        reduced = DomainMatrix(rows, (m, m + 1), ZZ).lll().to_Matrix().tolist()

        found = []
        for row in reduced:
            c = [int(x) for x in row[:m]]
            if not any(c) or max(abs(x) for x in c) > B:
                continue
            residual = abs(mpmath.fsum(ci * vi for ci, vi in zip(c, vals)))
            cnorm = mpmath.sqrt(sum(ci * ci for ci in c))
            if residual <= tol * cnorm * norm:
                found.append(_canonical(c))

    found.sort(key=lambda c: (max(abs(x) for x in c), c))
    # reduced rows are independent already; keep the guard for degenerate inputs
    basis: list[tuple[int, ...]] = []
    for c in found:
        trial = basis + [c]
        if rank(IntMatrix.from_rows(trial, m)) == len(trial):
            basis = trial
    return basis


"""Exact linear algebra over the integers.

Matrices are small (desk scale) and entries are Python ints, so everything
here is exact.  The central routine is :func:`smith_normal_form`; kernels,
cokernels and ranks are read off from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "AbelianGroupInvariants",
    "smith_normal_form",
    "cokernel",
    "kernel",
    "rank",
    "rational_rank",
]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major.

    ``rows == 0`` or ``cols == 0`` is allowed; such a matrix is the map
    to or from the zero group.
    """

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )
        for e in self.entries:
            if isinstance(e, bool) or not isinstance(e, int):
                raise TypeError(f"matrix entries must be integers, got {e!r}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count is ambiguous for a matrix with no rows")
            cols = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != cols:
                raise ValueError(f"row {i} has {len(r)} entries, expected {cols}")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def column(cls, values: Iterable[int]) -> "IntMatrix":
        values = tuple(values)
        return cls(len(values), 1, values)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column_vectors(self) -> list[tuple[int, ...]]:
        return [tuple(self[i, j] for i in range(self.rows)) for j in range(self.cols)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        a, b = self.to_rows(), other.to_rows()
        out = []
        for i in range(self.rows):
            ai = a[i]
            for j in range(other.cols):
                out.append(sum(ai[k] * b[k][j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def det(self) -> int:
        """Determinant by Bareiss fraction-free elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        m = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == S`` with U, V unimodular and S in Smith form."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> list[int]:
        """Nonzero diagonal entries of S, in divisibility order."""
        return [d for d in self.S.diagonal() if d]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


@dataclass(frozen=True)
class AbelianGroupInvariants:
    """Finitely generated abelian group ``Z^free_rank + Z/t1 + Z/t2 + ...``.

    ``torsion`` is kept in invariant-factor form: every entry is at least 2
    and divides the next.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise ValueError(f"negative rank {self.free_rank}")
        for t in self.torsion:
            if t < 2:
                raise ValueError(f"torsion coefficients must be >= 2, got {t}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def from_cyclic_orders(cls, free_rank: int, orders: Iterable[int]) -> "AbelianGroupInvariants":
        """Normalize an arbitrary direct sum of cyclic groups ``Z/o``.

        Orders 1 are dropped; the rest are put in invariant-factor form.
        """
        orders = [abs(int(o)) for o in orders]
        if any(o == 0 for o in orders):
            raise ValueError("use free_rank for infinite cyclic summands")
        orders = [o for o in orders if o > 1]
        if not orders:
            return cls(free_rank, ())
        diag = IntMatrix(len(orders), len(orders),
                         tuple(orders[i] if i == j else 0
                               for i in range(len(orders)) for j in range(len(orders))))
        return cls(free_rank, tuple(d for d in smith_normal_form(diag).invariant_factors if d > 1))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def __add__(self, other: "AbelianGroupInvariants") -> "AbelianGroupInvariants":
        return AbelianGroupInvariants.from_cyclic_orders(
            self.free_rank + other.free_rank, self.torsion + other.torsion)

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj: dict) -> "AbelianGroupInvariants":
        return cls(int(obj.get("rank", 0)), tuple(obj.get("torsion", ())))

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z_{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms, ``U @ A @ V == S``.

    Pivots are chosen as the entry of least absolute value in the active
    block (first in row-major order on ties), which keeps intermediate
    entries small and makes U and V deterministic.
    """
    m, n = A.rows, A.cols
    D = A.to_rows()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row[dst] += q * row[src]
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    a = D[i][j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            # pivot row and column are clear; enforce divisibility on the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]

    return SmithDecomposition(
        IntMatrix(m, m, tuple(x for r in U for x in r)),
        IntMatrix(m, n, tuple(x for r in D for x in r)),
        IntMatrix(n, n, tuple(x for r in V for x in r)),
    )


def rank(A: IntMatrix) -> int:
    return smith_normal_form(A).rank


def cokernel(A: IntMatrix) -> AbelianGroupInvariants:
    """Invariants of ``Z^rows / image(A)``."""
    snf = smith_normal_form(A)
    factors = snf.invariant_factors
    return AbelianGroupInvariants(A.rows - len(factors), tuple(d for d in factors if d > 1))


def _normalize_sign(vec: list[int]) -> list[int]:
    for x in vec:
        if x:
            return vec if x > 0 else [-y for y in vec]
    return vec


def kernel(A: IntMatrix) -> tuple[int, IntMatrix]:
    """Rank and a basis (as columns) of ``ker(A)`` inside ``Z^cols``.

    The basis columns are the trailing columns of the unimodular V, so they
    span a direct summand of ``Z^cols``.  Each column is sign-normalized so
    its first nonzero entry is positive.
    """
    snf = smith_normal_form(A)
    r = snf.rank
    V = snf.V.to_rows()
    cols = [_normalize_sign([V[i][j] for i in range(A.cols)]) for j in range(r, A.cols)]
    k = len(cols)
    basis = IntMatrix(A.cols, k, tuple(cols[j][i] for i in range(A.cols) for j in range(k)))
    return k, basis


def rational_rank(A: IntMatrix) -> int:
    """Rank over Q by row reduction with exact fractions."""
    rows = [[Fraction(x) for x in r] for r in A.to_rows()]
    r = 0
    for c in range(A.cols):
        piv = next((i for i in range(r, A.rows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, A.rows):
            if rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def vector_gcd(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g

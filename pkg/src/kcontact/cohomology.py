"""Cohomology presentations of the base manifold.

A :class:`CupPresentation` records, for a closed ``2n``-manifold ``N``, the
groups ``H^k(N; Z)`` together with integer matrices for cup product with
the Euler class ``x`` on free parts.  Presentations are read from a small
JSON "ring file" or built from the divisor shorthand ``a_0, a_1, ..., a_n``
(``H^{2k}(N) = Z`` generated by ``x^k / a_k``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .intlinalg import AbelianGroupInvariants, IntMatrix, vector_gcd

__all__ = [
    "PresentationError",
    "RingSyntaxError",
    "DimensionMismatchError",
    "UnsupportedTorsionError",
    "NonDivisibleSequenceError",
    "GradedAbelianGroup",
    "CupPresentation",
    "ASequence",
    "parse_presentation",
    "dump_presentation",
    "from_a_sequence",
    "validate_duality",
    "is_primitive",
]

ZERO = AbelianGroupInvariants()


class PresentationError(ValueError):
    """Malformed or inconsistent cohomology presentation."""


class RingSyntaxError(PresentationError):
    def __init__(self, msg: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + where)


class DimensionMismatchError(PresentationError):
    def __init__(self, degree: int, msg: str):
        self.degree = degree
        super().__init__(f"degree {degree}: {msg}")


class UnsupportedTorsionError(PresentationError):
    """A degree with torsion meets a nonzero cup-by-x map."""

    def __init__(self, degrees: Sequence[int]):
        self.degrees = tuple(degrees)
        super().__init__(
            "unsupported torsion interaction: degrees "
            + ", ".join(map(str, self.degrees))
            + " carry torsion and a nonzero cup product with x"
        )


class NonDivisibleSequenceError(PresentationError):
    def __init__(self, k: int, a_k: int, a_next: int):
        self.k = k
        super().__init__(
            f"a_{k} = {a_k} does not divide a_{k + 1} = {a_next}; "
            "x * (x^k / a_k) is not an integral multiple of the next generator, "
            "supply explicit cup matrices instead"
        )


@dataclass(frozen=True)
class GradedAbelianGroup:
    """Groups in degrees ``0..top_degree``; a missing degree is the zero group."""

    top_degree: int
    groups: Mapping[int, AbelianGroupInvariants] = field(default_factory=dict)

    def __post_init__(self):
        if self.top_degree < 0:
            raise ValueError("top degree must be nonnegative")
        clean = {}
        for k, g in self.groups.items():
            if not 0 <= k <= self.top_degree:
                raise DimensionMismatchError(k, f"outside the range 0..{self.top_degree}")
            if not g.is_zero:
                clean[int(k)] = g
        object.__setattr__(self, "groups", dict(sorted(clean.items())))

    def __getitem__(self, k: int) -> AbelianGroupInvariants:
        return self.groups.get(k, ZERO)

    def free_rank(self, k: int) -> int:
        return self[k].free_rank

    def degrees(self) -> range:
        return range(self.top_degree + 1)

    def nonzero_degrees(self) -> list[int]:
        return list(self.groups)

    def has_torsion(self) -> bool:
        return any(g.torsion for g in self.groups.values())

    def to_json(self) -> dict:
        return {str(k): self[k].to_json() for k in self.degrees()}


@dataclass(frozen=True)
class CupPresentation:
    """Base cohomology with the cup-by-x maps on free parts.

    ``cup_x[k]`` is the matrix of ``x ∪ - : H^k(N) -> H^{k+2}(N)`` restricted
    to free parts, in the stored ordered bases (rows = rank of the target).
    Maps between zero free parts may be omitted.
    """

    dim_base: int
    groups: GradedAbelianGroup
    cup_x: Mapping[int, IntMatrix]
    euler_class_coords: tuple[int, ...]
    labels: Mapping[int, tuple[str, ...]] | None = None

    def __post_init__(self):
        if self.dim_base < 0 or self.dim_base % 2:
            raise PresentationError(f"base dimension must be a nonnegative even integer, got {self.dim_base}")
        if self.groups.top_degree != self.dim_base:
            raise PresentationError("group grading does not match the base dimension")
        object.__setattr__(self, "euler_class_coords", tuple(int(c) for c in self.euler_class_coords))
        cup = {}
        for k in range(self.dim_base + 1):
            rows, cols = self.free_rank(k + 2), self.free_rank(k)
            mat = self.cup_x.get(k)
            if mat is None:
                if rows and cols:
                    raise DimensionMismatchError(k, "missing cup_x matrix between nonzero free parts")
                mat = IntMatrix.zeros(rows, cols)
            elif mat.shape != (rows, cols):
                raise DimensionMismatchError(
                    k, f"cup_x matrix is {mat.rows}x{mat.cols}, expected {rows}x{cols} "
                       f"(rank H^{k + 2} x rank H^{k})")
            cup[k] = mat
        extra = [k for k in self.cup_x if k not in cup]
        if extra:
            raise DimensionMismatchError(extra[0], f"cup_x given outside degrees 0..{self.dim_base}")
        object.__setattr__(self, "cup_x", cup)
        if len(self.euler_class_coords) != self.free_rank(2):
            raise DimensionMismatchError(
                2, f"euler class has {len(self.euler_class_coords)} coordinates, "
                   f"H^2 has rank {self.free_rank(2)}")
        if self.free_rank(0) == 1 and self.free_rank(2):
            col = tuple(self.cup_x[0].entries)
            if col != self.euler_class_coords:
                raise DimensionMismatchError(
                    0, f"cup_x[0] sends 1 to {list(col)} but the euler class is "
                       f"{list(self.euler_class_coords)}")
        if self.labels is not None:
            labels = {}
            for k, names in self.labels.items():
                names = tuple(names)
                if len(names) != self.free_rank(k):
                    raise DimensionMismatchError(k, f"{len(names)} labels for a rank {self.free_rank(k)} group")
                labels[int(k)] = names
            object.__setattr__(self, "labels", dict(sorted(labels.items())))

    @property
    def n(self) -> int:
        return self.dim_base // 2

    def free_rank(self, k: int) -> int:
        if k < 0 or k > self.dim_base:
            return 0
        return self.groups.free_rank(k)

    def group(self, k: int) -> AbelianGroupInvariants:
        if k < 0 or k > self.dim_base:
            return ZERO
        return self.groups[k]

    def cup_map(self, k: int) -> IntMatrix:
        """``x ∪ -`` out of degree k; empty/zero outside ``0..dim_base``."""
        if 0 <= k <= self.dim_base:
            return self.cup_x[k]
        return IntMatrix.zeros(self.free_rank(k + 2), self.free_rank(k))

    def torsion_interactions(self) -> list[int]:
        """Degrees with torsion whose incoming or outgoing cup map is nonzero."""
        return [k for k in self.groups.degrees()
                if self.group(k).torsion
                and not (self.cup_map(k).is_zero() and self.cup_map(k - 2).is_zero())]

    def check_torsion(self) -> None:
        bad = self.torsion_interactions()
        if bad:
            raise UnsupportedTorsionError(bad)


@dataclass(frozen=True)
class ASequence:
    """Divisors ``a_0 = a_1 = 1, a_2, ..., a_n``: ``x^k / a_k`` generates ``H^{2k}``.

    Built from either ``n + 1`` values (``a_0..a_n``) or ``n`` values
    (``a_1..a_n``); stored as ``a_0..a_n``.
    """

    n: int
    a: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(v) for v in self.a)
        if self.n < 0:
            raise PresentationError("n must be nonnegative")
        if len(a) == self.n and self.n >= 1:
            a = (1,) + a
        if len(a) != self.n + 1:
            raise PresentationError(f"a-sequence for n={self.n} needs {self.n + 1} entries, got {len(a)}")
        if any(v < 1 for v in a):
            raise PresentationError("a-sequence entries must be positive")
        if a[0] != 1 or (self.n >= 1 and a[1] != 1):
            raise PresentationError("a-sequence must start with a_0 = a_1 = 1")
        object.__setattr__(self, "a", a)


def is_primitive(v: Sequence[int]) -> bool:
    """True iff the integral vector is not a proper multiple of another."""
    if not any(v):
        raise ValueError("the zero class is not primitive or imprimitive")
    return vector_gcd(v) == 1


def validate_duality(s: ASequence) -> bool:
    a, n = s.a, s.n
    return all(a[i] * a[n - i] == a[n] for i in range(1, n))


def from_a_sequence(s: ASequence) -> CupPresentation:
    n, a = s.n, s.a
    cup = {}
    for k in range(n):
        if a[k + 1] % a[k]:
            raise NonDivisibleSequenceError(k, a[k], a[k + 1])
        cup[2 * k] = IntMatrix(1, 1, (a[k + 1] // a[k],))
    cup[2 * n] = IntMatrix.zeros(0, 1)
    groups = GradedAbelianGroup(2 * n, {2 * k: AbelianGroupInvariants(1) for k in range(n + 1)})
    labels = {2 * k: (_monomial_label(k, a[k]),) for k in range(n + 1)}
    return CupPresentation(2 * n, groups, cup, (1,) if n >= 1 else (), labels)


def _monomial_label(k: int, a_k: int) -> str:
    mono = "1" if k == 0 else ("x" if k == 1 else f"x^{k}")
    return mono if a_k == 1 else f"{mono}/{a_k}"


# ---------------------------------------------------------------------------
# ring-file format

_TOP_FIELDS = {"dim", "groups", "cup_x", "euler_class", "a_sequence", "labels"}


def _degree_key(key: str, what: str) -> int:
    try:
        k = int(key)
    except (TypeError, ValueError):
        raise RingSyntaxError(f"{what} key {key!r} is not an integer degree") from None
    if str(k) != str(key).strip():
        raise RingSyntaxError(f"{what} key {key!r} is not a canonical degree")
    return k


def _int_list(obj, what: str) -> list[int]:
    if not isinstance(obj, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in obj):
        raise RingSyntaxError(f"{what} must be a list of integers")
    return obj


def parse_presentation(source: str) -> CupPresentation:
    """Parse a ring file (JSON text) into a validated presentation."""
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise RingSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise RingSyntaxError("top level must be a JSON object")
    unknown = sorted(set(data) - _TOP_FIELDS)
    if unknown:
        raise RingSyntaxError(f"unknown top-level field(s): {', '.join(unknown)}")
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise RingSyntaxError("'dim' must be an integer")
    if dim < 0 or dim % 2:
        raise PresentationError(f"'dim' must be a nonnegative even integer, got {dim}")

    if "a_sequence" in data:
        clash = [f for f in ("groups", "cup_x") if f in data]
        if clash:
            raise RingSyntaxError(f"'a_sequence' cannot be combined with {', '.join(clash)}")
        pres = from_a_sequence(ASequence(dim // 2, tuple(_int_list(data["a_sequence"], "'a_sequence'"))))
        if "euler_class" in data and tuple(_int_list(data["euler_class"], "'euler_class'")) != pres.euler_class_coords:
            raise DimensionMismatchError(2, "a-sequence presentations have euler class [1]")
        if "labels" in data:
            pres = CupPresentation(pres.dim_base, pres.groups, pres.cup_x, pres.euler_class_coords,
                                   _parse_labels(data["labels"]))
        return pres

    for f in ("groups", "cup_x", "euler_class"):
        if f not in data:
            raise RingSyntaxError(f"missing field {f!r}")
    if not isinstance(data["groups"], dict):
        raise RingSyntaxError("'groups' must be an object")
    groups = {}
    for key, g in data["groups"].items():
        k = _degree_key(key, "groups")
        if not isinstance(g, dict) or set(g) - {"rank", "torsion"}:
            raise RingSyntaxError(f"group in degree {k} must be {{'rank': n, 'torsion': [...]}}")
        r = g.get("rank", 0)
        if not isinstance(r, int) or isinstance(r, bool):
            raise RingSyntaxError(f"rank in degree {k} must be an integer")
        if r < 0:
            raise PresentationError(f"degree {k}: negative rank {r}")
        tors = _int_list(g.get("torsion", []), f"torsion in degree {k}")
        if any(t < 2 for t in tors):
            raise PresentationError(f"degree {k}: torsion orders must be >= 2")
        groups[k] = AbelianGroupInvariants.from_cyclic_orders(r, tors)
    graded = GradedAbelianGroup(dim, groups)

    if not isinstance(data["cup_x"], dict):
        raise RingSyntaxError("'cup_x' must be an object")
    cup = {}
    for key, rows in data["cup_x"].items():
        k = _degree_key(key, "cup_x")
        if not isinstance(rows, list):
            raise RingSyntaxError(f"cup_x[{k}] must be a list of rows")
        rows = [_int_list(r, f"row of cup_x[{k}]") for r in rows]
        # zero-row matrices carry their column count from the source group
        ncols = len(rows[0]) if rows else graded.free_rank(k) if 0 <= k <= dim else 0
        try:
            cup[k] = IntMatrix.from_rows(rows, ncols)
        except ValueError as exc:
            raise DimensionMismatchError(k, str(exc)) from None
    euler = tuple(_int_list(data["euler_class"], "'euler_class'"))
    labels = _parse_labels(data["labels"]) if "labels" in data else None
    return CupPresentation(dim, graded, cup, euler, labels)


def _parse_labels(obj) -> dict[int, tuple[str, ...]]:
    if not isinstance(obj, dict):
        raise RingSyntaxError("'labels' must be an object")
    out = {}
    for key, names in obj.items():
        if not isinstance(names, list) or not all(isinstance(s, str) for s in names):
            raise RingSyntaxError(f"labels[{key}] must be a list of strings")
        out[_degree_key(key, "labels")] = tuple(names)
    return out


def dump_presentation(p: CupPresentation) -> str:
    """Serialize to the explicit (groups + cup_x) ring-file form."""
    data = {
        "dim": p.dim_base,
        "groups": {str(k): g.to_json() for k, g in p.groups.groups.items()},
        "cup_x": {str(k): m.to_rows() for k, m in p.cup_x.items() if m.rows and m.cols},
        "euler_class": list(p.euler_class_coords),
    }
    if p.labels:
        data["labels"] = {str(k): list(v) for k, v in p.labels.items()}
    return json.dumps(data, indent=2)

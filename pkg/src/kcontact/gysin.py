"""Integral cohomology of a circle bundle from its Gysin sequence.

For ``pi: M -> N`` with Euler class ``x`` and ``dim N = 2n`` every degree
``k`` of ``M`` sits in

    0 -> coker(x: H^{k-2}(N) -> H^k(N)) -> H^k(M) -> ker(x: H^{k-1}(N) -> H^{k+1}(N)) -> 0.

The cokernel comes from the Smith form of the cup matrix; the kernel is
free unless the base has torsion in degree ``k - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .cohomology import CupPresentation, GradedAbelianGroup
from .intlinalg import AbelianGroupInvariants, cokernel, kernel, rational_rank

__all__ = [
    "Extension",
    "AmbiguousExtensionError",
    "GysinAuditError",
    "TotalSpaceCohomology",
    "total_space_cohomology",
    "total_space_betti",
]


class Extension(str, Enum):
    SPLIT_FORCED = "split-forced"
    ZERO_KERNEL = "zero-kernel"
    AMBIGUOUS = "ambiguous"


class AmbiguousExtensionError(LookupError):
    pass


class GysinAuditError(AssertionError):
    """Internal consistency check of the Gysin computation failed."""


@dataclass(frozen=True)
class TotalSpaceCohomology:
    groups: GradedAbelianGroup
    extension: dict[int, Extension]
    provenance: dict[int, tuple[AbelianGroupInvariants, AbelianGroupInvariants]]

    @property
    def top_degree(self) -> int:
        return self.groups.top_degree

    def group(self, k: int) -> AbelianGroupInvariants:
        if self.extension.get(k) is Extension.AMBIGUOUS:
            c, kp = self.provenance[k]
            raise AmbiguousExtensionError(
                f"H^{k}(M) is an unresolved extension of {kp} by {c}")
        return self.groups[k]

    @property
    def ambiguous_degrees(self) -> list[int]:
        return [k for k, f in self.extension.items() if f is Extension.AMBIGUOUS]

    def torsion_witnesses(self) -> list[tuple[int, AbelianGroupInvariants]]:
        return [(k, g) for k, g in self.groups.groups.items() if g.torsion]

    def to_json(self) -> dict:
        degrees = {}
        for k in range(self.top_degree + 1):
            degrees[str(k)] = (None if self.extension[k] is Extension.AMBIGUOUS
                               else self.groups[k].to_json())
        return {
            "dim": self.top_degree,
            "groups": degrees,
            "extension": {str(k): self.extension[k].value for k in range(self.top_degree + 1)},
            "provenance": {
                str(k): {"cokernel": c.to_json(), "kernel": kp.to_json()}
                for k, (c, kp) in sorted(self.provenance.items())
            },
        }


def _torsion_part(g: AbelianGroupInvariants) -> AbelianGroupInvariants:
    return AbelianGroupInvariants(0, g.torsion)


def total_space_betti(P: CupPresentation) -> list[int]:
    """Rational Betti numbers ``b_0..b_{2n+1}`` of the total space."""
    top = P.dim_base + 1
    ranks = {k: rational_rank(P.cup_map(k)) for k in range(-2, P.dim_base + 1)}
    return [
        P.free_rank(k) - ranks[k - 2] + P.free_rank(k - 1) - ranks.get(k - 1, 0)
        for k in range(top + 1)
    ]


def total_space_cohomology(P: CupPresentation) -> TotalSpaceCohomology:
    P.check_torsion()
    top = P.dim_base + 1
    groups, flags, prov = {}, {}, {}
    for k in range(top + 1):
        # torsion in H^k(N) only survives untouched: incoming maps into it are zero
        coker = cokernel(P.cup_map(k - 2)) + _torsion_part(P.group(k))
        nullity, _ = kernel(P.cup_map(k - 1))
        ker = AbelianGroupInvariants(nullity) + _torsion_part(P.group(k - 1))
        prov[k] = (coker, ker)
        if ker.is_zero:
            flags[k] = Extension.ZERO_KERNEL
            groups[k] = coker
        elif ker.is_free or coker.is_zero:
            flags[k] = Extension.SPLIT_FORCED
            groups[k] = coker + ker
        else:
            flags[k] = Extension.AMBIGUOUS
    result = TotalSpaceCohomology(GradedAbelianGroup(top, groups), flags, prov)
    _audit(P, result)
    return result


def _audit(P: CupPresentation, H: TotalSpaceCohomology) -> None:
    betti = total_space_betti(P)
    for k, b in enumerate(betti):
        if b < 0:
            raise GysinAuditError(f"negative Betti number in degree {k}")
        c, kp = H.provenance[k]
        if c.free_rank + kp.free_rank != b:
            raise GysinAuditError(
                f"degree {k}: integral ranks {c.free_rank}+{kp.free_rank} disagree with b_{k} = {b}")
    if sum((-1) ** k * b for k, b in enumerate(betti)) != 0:
        raise GysinAuditError("Euler characteristic of the total space is nonzero")

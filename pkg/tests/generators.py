"""Random presentations for sweeps and property tests."""

from __future__ import annotations

import itertools
import random

from kcontact.cohomology import ASequence, CupPresentation, GradedAbelianGroup, validate_duality
from kcontact.intlinalg import AbelianGroupInvariants, IntMatrix


def random_presentation(rng: random.Random, n: int | None = None, max_rank: int = 3,
                        entry: int = 3) -> CupPresentation:
    """Free groups of rank <= max_rank in every degree (odd ones included), random cup maps."""
    n = rng.randint(1, 4) if n is None else n
    dim = 2 * n
    ranks = [rng.randint(0, max_rank) for _ in range(dim + 1)]
    groups = GradedAbelianGroup(dim, {k: AbelianGroupInvariants(r) for k, r in enumerate(ranks)})
    cup = {}
    for k in range(dim + 1):
        rows = ranks[k + 2] if k + 2 <= dim else 0
        cols = ranks[k]
        cup[k] = IntMatrix(rows, cols, tuple(rng.randint(-entry, entry) for _ in range(rows * cols)))
    if ranks[0] == 1 and ranks[2]:
        euler = cup[0].entries
    else:
        euler = tuple(rng.randint(-entry, entry) for _ in range(ranks[2]))
    return CupPresentation(dim, groups, cup, euler)


def duality_valid_sequences(max_n: int = 5, max_top: int = 24):
    """Every a-sequence with n <= max_n, a_n <= max_top, a_i a_{n-i} = a_n and a_k | a_{k+1}."""
    for n in range(1, max_n + 1):
        for top in range(1, max_top + 1):
            if n == 1:
                if top == 1:
                    yield ASequence(1, (1, 1))
                continue
            divs = [d for d in range(1, top + 1) if top % d == 0]
            for middle in itertools.product(divs, repeat=n - 2):
                a = (1, 1) + middle + (top,)
                if any(a[k + 1] % a[k] for k in range(n)):
                    continue
                s = ASequence(n, a)
                if validate_duality(s):
                    yield s

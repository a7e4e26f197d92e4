"""Occupation-number encoding of symmetric tensor multi-indices.

An ordered multi-index (j_1, ..., j_k) over a basis of dimension d is,
up to permutation, fully described by how many times each basis index
occurs.  We store that count vector a = (a_1, ..., a_d) with sum(a) = k.
The number of ordered tuples collapsing to a given occupation is the
multinomial coefficient k! / (a_1! ... a_d!); it is the weight that
turns sums over ordered tuples into sums over occupations.

Basis indices are 0-based throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence


def multiplicity(occ: Sequence[int]) -> int:
    """Number of ordered index tuples with occupation vector ``occ``."""
    m = math.factorial(sum(occ))
    for a in occ:
        m //= math.factorial(a)
    return m


def num_occupations(dim: int, order: int) -> int:
    """Number of occupation vectors of the given order (stars and bars)."""
    return math.comb(dim + order - 1, order)


def occupations(dim: int, order: int) -> Iterator[tuple[int, ...]]:
    """Yield all occupation vectors in ascending lexicographic order."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if dim == 1:
        yield (order,)
        return
    for first in range(order + 1):
        for rest in occupations(dim - 1, order - first):
            yield (first,) + rest


def sub_occupations(occ: Sequence[int], order: int) -> Iterator[tuple[int, ...]]:
    """Yield all occupation vectors a <= occ componentwise with sum(a) = order."""
    d = len(occ)
    # suffix[i] = occ[i] + ... + occ[d-1], used to prune infeasible branches
    suffix = [0] * (d + 1)
    for i in range(d - 1, -1, -1):
        suffix[i] = suffix[i + 1] + occ[i]
    if not 0 <= order <= suffix[0]:
        return

    def rec(i: int, remaining: int) -> Iterator[tuple[int, ...]]:
        if i == d:
            yield ()
            return
        lo = max(0, remaining - suffix[i + 1])
        hi = min(occ[i], remaining)
        for a in range(lo, hi + 1):
            for rest in rec(i + 1, remaining - a):
                yield (a,) + rest

    yield from rec(0, order)


def occupation_of(indices: Sequence[int], dim: int) -> tuple[int, ...]:
    """Occupation vector of an ordered tuple of 0-based basis indices."""
    occ = [0] * dim
    for j in indices:
        if not 0 <= j < dim:
            raise ValueError(f"basis index {j} out of range for dim {dim}")
        occ[j] += 1
    return tuple(occ)


@dataclass(frozen=True)
class MultiIndex:
    """A canonical multi-index in occupation form."""

    occupations: tuple[int, ...]

    def __post_init__(self) -> None:
        occ = tuple(int(a) for a in self.occupations)
        if len(occ) < 1:
            raise ValueError("occupation vector must have dim >= 1")
        if any(a < 0 for a in occ):
            raise ValueError(f"occupations must be non-negative, got {occ}")
        object.__setattr__(self, "occupations", occ)

    @property
    def dim(self) -> int:
        return len(self.occupations)

    @property
    def order(self) -> int:
        return sum(self.occupations)

    def multiplicity(self) -> int:
        return multiplicity(self.occupations)

    @classmethod
    def from_indices(cls, indices: Sequence[int], dim: int) -> "MultiIndex":
        return cls(occupation_of(indices, dim))

    def indices(self) -> tuple[int, ...]:
        """Sorted ordered tuple expanding this occupation."""
        out: list[int] = []
        for i, a in enumerate(self.occupations):
            out.extend([i] * a)
        return tuple(out)

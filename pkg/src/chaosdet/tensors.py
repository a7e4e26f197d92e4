"""Symmetric and block-symmetric tensors in canonical sparse storage.

A fully symmetric element of H^(x)k over a d-dimensional orthonormal
basis is stored once per canonical multi-index: ``coeffs`` maps an
occupation vector to the common value of the coefficient on every
ordered tuple with that occupation.  Inner products and contractions
then carry explicit multinomial weights instead of enumerating ordered
tuples, which keeps storage and work polynomial in d.

Contractions pair the first r slots of one symmetric tensor against the
first r slots of another.  The result is symmetric within its left
block (the surviving slots of the first factor) and within its right
block, but not across blocks; :class:`BiSymTensor` stores exactly that
structure, and :func:`symmetrize` averages it over all slot
permutations when a fully symmetric result is needed.  The two are kept
separate on purpose: block norms and symmetrized norms differ, and both
enter the determinant identities implemented in :mod:`chaosdet.malliavin`.

Coefficient values may be ``float`` (default), or ``int``/``Fraction``
for an exact arithmetic mode: every operation here uses integer
combinatorial weights and exact rational division, so tensors with
rational coefficients propagate exactly.  The exact mode backs the
tolerance-free cross-checks in the test suite.
"""
from __future__ import annotations

import json
import math
import os
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence, Union

import numpy as np

from .multiindex import (
    MultiIndex,
    multiplicity,
    occupations,
    sub_occupations,
)

Number = Union[int, float, Fraction]
OccKey = Union[tuple[int, ...], MultiIndex]


def _as_occ(key: OccKey, dim: int, order: int) -> tuple[int, ...]:
    occ = key.occupations if isinstance(key, MultiIndex) else tuple(int(a) for a in key)
    if len(occ) != dim:
        raise ValueError(f"occupation {occ} has dim {len(occ)}, expected {dim}")
    if any(a < 0 for a in occ):
        raise ValueError(f"occupation {occ} has negative entries")
    if sum(occ) != order:
        raise ValueError(f"occupation {occ} has order {sum(occ)}, expected {order}")
    return occ


class SymTensor:
    """Fully symmetric tensor of a fixed order over a d-dimensional basis."""

    __slots__ = ("dim", "order", "_coeffs")

    def __init__(self, dim: int, order: int, coeffs: Mapping[OccKey, Number] | None = None):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        if order < 0:
            raise ValueError(f"order must be >= 0, got {order}")
        self.dim = int(dim)
        self.order = int(order)
        data: dict[tuple[int, ...], Number] = {}
        if coeffs:
            for key, value in coeffs.items():
                occ = _as_occ(key, self.dim, self.order)
                if value != 0:
                    data[occ] = value
        self._coeffs = data

    @property
    def coeffs(self) -> Mapping[tuple[int, ...], Number]:
        return MappingProxyType(self._coeffs)

    def get(self, key: OccKey) -> Number:
        occ = key.occupations if isinstance(key, MultiIndex) else tuple(key)
        return self._coeffs.get(occ, 0)

    def __getitem__(self, key: OccKey) -> Number:
        return self.get(key)

    def items(self):
        return self._coeffs.items()

    def __len__(self) -> int:
        return len(self._coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymTensor)
            and self.dim == other.dim
            and self.order == other.order
            and self._coeffs == other._coeffs
        )

    def __repr__(self) -> str:
        return f"SymTensor(dim={self.dim}, order={self.order}, nnz={len(self._coeffs)})"

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zeros(cls, dim: int, order: int) -> "SymTensor":
        return cls(dim, order)

    @classmethod
    def constant(cls, dim: int, value: Number) -> "SymTensor":
        """Order-0 tensor holding a single scalar."""
        return cls(dim, 0, {(0,) * dim: value})

    @classmethod
    def basis(cls, dim: int, i: int) -> "SymTensor":
        """The basis vector e_i (0-based) as an order-1 tensor."""
        occ = [0] * dim
        occ[i] = 1
        return cls(dim, 1, {tuple(occ): 1})

    @classmethod
    def basis_power(cls, dim: int, i: int, order: int) -> "SymTensor":
        """The elementary tensor e_i^(x)order."""
        occ = [0] * dim
        occ[i] = order
        return cls(dim, order, {tuple(occ): 1})

    @classmethod
    def sym_elementary(cls, dim: int, indices: Sequence[int]) -> "SymTensor":
        """Symmetrization of e_{j_1} (x) ... (x) e_{j_k} for 0-based indices."""
        mi = MultiIndex.from_indices(indices, dim)
        return cls(dim, mi.order, {mi.occupations: Fraction(1, mi.multiplicity())})

    @classmethod
    def vector_power(cls, h: Sequence[Number], order: int) -> "SymTensor":
        """The tensor power h^(x)order of a coordinate vector h."""
        dim = len(h)
        data: dict[tuple[int, ...], Number] = {}
        for occ in occupations(dim, order):
            v: Number = 1
            for hi, a in zip(h, occ):
                v = v * hi**a
            data[occ] = v
        return cls(dim, order, data)

    # ------------------------------------------------------------------
    # linear-space operations

    def _check_compatible(self, other: "SymTensor") -> None:
        if not isinstance(other, SymTensor):
            raise TypeError(f"expected SymTensor, got {type(other).__name__}")
        if self.dim != other.dim or self.order != other.order:
            raise ValueError(
                f"shape mismatch: (dim={self.dim}, order={self.order}) vs "
                f"(dim={other.dim}, order={other.order})"
            )

    def __add__(self, other: "SymTensor") -> "SymTensor":
        self._check_compatible(other)
        data = dict(self._coeffs)
        for occ, v in other._coeffs.items():
            data[occ] = data.get(occ, 0) + v
        return SymTensor(self.dim, self.order, data)

    def __sub__(self, other: "SymTensor") -> "SymTensor":
        return self + (-other)

    def __neg__(self) -> "SymTensor":
        return self.scale(-1)

    def scale(self, c: Number) -> "SymTensor":
        return SymTensor(self.dim, self.order, {occ: c * v for occ, v in self._coeffs.items()})

    def __mul__(self, c: Number) -> "SymTensor":
        return self.scale(c)

    __rmul__ = __mul__

    # ------------------------------------------------------------------
    # metric and slices

    def norm_sq(self) -> Number:
        """Squared H^(x)k norm, exact for rational coefficients."""
        total: Number = 0
        for occ, v in self._coeffs.items():
            total += multiplicity(occ) * v * v
        return total

    def norm(self) -> float:
        return math.sqrt(float(self.norm_sq()))

    def slice(self, i: int) -> "SymTensor":
        """Order-lowering coordinate slice.

        Returns the order-(k-1) tensor whose coefficient at J is
        k * (coefficient of self at J with the count of basis index i
        incremented); slices reassemble as sum_i e_i (x) slice(i) =
        k * self.
        """
        if self.order < 1:
            raise ValueError("slice requires order >= 1")
        if not 0 <= i < self.dim:
            raise ValueError(f"basis index {i} out of range for dim {self.dim}")
        data: dict[tuple[int, ...], Number] = {}
        for occ, v in self._coeffs.items():
            if occ[i] >= 1:
                low = occ[:i] + (occ[i] - 1,) + occ[i + 1 :]
                data[low] = self.order * v
        return SymTensor(self.dim, self.order - 1, data)


class BiSymTensor:
    """Tensor symmetric separately in a left and a right block of slots.

    This is the shape produced by contracting two symmetric tensors:
    symmetric in its first ``left_order`` slots and in its last
    ``right_order`` slots, with no symmetry across the split.  Keys are
    pairs (left occupation, right occupation).
    """

    __slots__ = ("dim", "left_order", "right_order", "_coeffs")

    def __init__(
        self,
        dim: int,
        left_order: int,
        right_order: int,
        coeffs: Mapping[tuple[tuple[int, ...], tuple[int, ...]], Number] | None = None,
    ):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        if left_order < 0 or right_order < 0:
            raise ValueError("block orders must be >= 0")
        self.dim = int(dim)
        self.left_order = int(left_order)
        self.right_order = int(right_order)
        data: dict[tuple[tuple[int, ...], tuple[int, ...]], Number] = {}
        if coeffs:
            for (left, right), value in coeffs.items():
                lo = _as_occ(left, self.dim, self.left_order)
                ro = _as_occ(right, self.dim, self.right_order)
                if value != 0:
                    data[lo, ro] = value
        self._coeffs = data

    @property
    def coeffs(self):
        return MappingProxyType(self._coeffs)

    def get(self, left: OccKey, right: OccKey) -> Number:
        lo = left.occupations if isinstance(left, MultiIndex) else tuple(left)
        ro = right.occupations if isinstance(right, MultiIndex) else tuple(right)
        return self._coeffs.get((lo, ro), 0)

    def items(self):
        return self._coeffs.items()

    def __len__(self) -> int:
        return len(self._coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BiSymTensor)
            and self.dim == other.dim
            and self.left_order == other.left_order
            and self.right_order == other.right_order
            and self._coeffs == other._coeffs
        )

    def __repr__(self) -> str:
        return (
            f"BiSymTensor(dim={self.dim}, blocks=({self.left_order}, "
            f"{self.right_order}), nnz={len(self._coeffs)})"
        )

    def __add__(self, other: "BiSymTensor") -> "BiSymTensor":
        self._check_compatible(other)
        data = dict(self._coeffs)
        for key, v in other._coeffs.items():
            data[key] = data.get(key, 0) + v
        return BiSymTensor(self.dim, self.left_order, self.right_order, data)

    def __sub__(self, other: "BiSymTensor") -> "BiSymTensor":
        return self + other.scale(-1)

    def scale(self, c: Number) -> "BiSymTensor":
        return BiSymTensor(
            self.dim,
            self.left_order,
            self.right_order,
            {key: c * v for key, v in self._coeffs.items()},
        )

    def _check_compatible(self, other: "BiSymTensor") -> None:
        if not isinstance(other, BiSymTensor):
            raise TypeError(f"expected BiSymTensor, got {type(other).__name__}")
        if (
            self.dim != other.dim
            or self.left_order != other.left_order
            or self.right_order != other.right_order
        ):
            raise ValueError("block tensor shape mismatch")

    def norm_sq(self) -> Number:
        total: Number = 0
        for (a, b), v in self._coeffs.items():
            total += multiplicity(a) * multiplicity(b) * v * v
        return total

    def norm(self) -> float:
        return math.sqrt(float(self.norm_sq()))

    def as_sym(self) -> SymTensor:
        """Lossless embedding when one block has order 0."""
        if self.left_order and self.right_order:
            raise ValueError("only a tensor with an empty block embeds as SymTensor")
        data = {
            (a if self.right_order == 0 else b): v for (a, b), v in self._coeffs.items()
        }
        return SymTensor(self.dim, self.left_order + self.right_order, data)

    def as_scalar(self) -> Number:
        """Value of a fully contracted (0, 0) result."""
        if self.left_order or self.right_order:
            raise ValueError("as_scalar requires both blocks of order 0")
        zero = (0,) * self.dim
        return self._coeffs.get((zero, zero), 0)


# ----------------------------------------------------------------------
# bilinear operations


def inner(a, b) -> Number:
    """Scalar product in H^(x)k, summing over ordered tuples.

    Accepts a pair of SymTensor or a pair of BiSymTensor with matching
    shapes; the multinomial weights account for the ordered-tuple
    expansion of the canonical storage.
    """
    if isinstance(a, SymTensor) and isinstance(b, SymTensor):
        a._check_compatible(b)
        small, big = (a, b) if len(a) <= len(b) else (b, a)
        total: Number = 0
        for occ, v in small.items():
            w = big.get(occ)
            if w:
                total += multiplicity(occ) * v * w
        return total
    if isinstance(a, BiSymTensor) and isinstance(b, BiSymTensor):
        a._check_compatible(b)
        small, big = (a, b) if len(a) <= len(b) else (b, a)
        total = 0
        for (lo, ro), v in small.items():
            w = big.get(lo, ro)
            if w:
                total += multiplicity(lo) * multiplicity(ro) * v * w
        return total
    raise TypeError("inner expects two SymTensor or two BiSymTensor")


def contract(f: SymTensor, g: SymTensor, r: int) -> BiSymTensor:
    """Contraction of order r: pair the first r slots of f and of g.

    The coefficient of the result at (J, K) is the sum over ordered
    r-tuples i of f[i, J] * g[i, K], computed over canonical
    r-occupations with multinomial weights.  r = 0 is the outer
    product; r = min(order_f, order_g) with equal orders is the full
    contraction, whose single value is inner(f, g).
    """
    if not isinstance(f, SymTensor) or not isinstance(g, SymTensor):
        raise TypeError("contract expects SymTensor arguments")
    if f.dim != g.dim:
        raise ValueError(f"dim mismatch: {f.dim} vs {g.dim}")
    if not 0 <= r <= min(f.order, g.order):
        raise ValueError(f"contraction order {r} out of range 0..{min(f.order, g.order)}")

    def grouped(t: SymTensor) -> dict:
        groups: dict[tuple[int, ...], list] = {}
        for occ, v in t.items():
            for a in sub_occupations(occ, r):
                rest = tuple(x - y for x, y in zip(occ, a))
                groups.setdefault(a, []).append((rest, v))
        return groups

    fg = grouped(f)
    gg = grouped(g)
    data: dict[tuple[tuple[int, ...], tuple[int, ...]], Number] = {}
    for a, fitems in fg.items():
        gitems = gg.get(a)
        if not gitems:
            continue
        w = multiplicity(a)
        for left, fv in fitems:
            wf = w * fv
            for right, gv in gitems:
                key = (left, right)
                data[key] = data.get(key, 0) + wf * gv
    return BiSymTensor(f.dim, f.order - r, g.order - r, data)


def symmetrize(t: BiSymTensor) -> SymTensor:
    """Average of a block tensor over all slot permutations.

    Computed combinatorially: a block entry at (a, b) contributes to the
    symmetric occupation a + b with the hypergeometric weight
    prod_i C(a_i + b_i, a_i) / C(p + q, p), the fraction of slot
    permutations that route the left block onto that particular split.
    No permutation enumeration is performed.
    """
    if not isinstance(t, BiSymTensor):
        raise TypeError("symmetrize expects a BiSymTensor")
    p, q = t.left_order, t.right_order
    total_splits = math.comb(p + q, p)
    data: dict[tuple[int, ...], Number] = {}
    for (a, b), v in t.items():
        occ = tuple(x + y for x, y in zip(a, b))
        w = 1
        for x, y in zip(a, b):
            w *= math.comb(x + y, x)
        if isinstance(v, float):
            contrib = v * w / total_splits
        else:
            contrib = v * Fraction(w, total_splits)
        data[occ] = data.get(occ, 0) + contrib
    return SymTensor(t.dim, p + q, data)


def max_coeff_diff(a, b) -> float:
    """Largest absolute coefficient difference between two like tensors."""
    if isinstance(a, SymTensor) and isinstance(b, SymTensor):
        a._check_compatible(b)
        keys = set(a._coeffs) | set(b._coeffs)
        return max((abs(float(a.get(k) - b.get(k))) for k in keys), default=0.0)
    if isinstance(a, BiSymTensor) and isinstance(b, BiSymTensor):
        a._check_compatible(b)
        keys = set(a._coeffs) | set(b._coeffs)
        return max((abs(float(a.get(*k) - b.get(*k))) for k in keys), default=0.0)
    raise TypeError("max_coeff_diff expects two SymTensor or two BiSymTensor")


# ----------------------------------------------------------------------
# random generation

DISTRIBUTIONS = ("normal", "int")


def random_sym_tensor(seed: int, dim: int, order: int, dist: str = "normal") -> SymTensor:
    """Random tensor with i.i.d. canonical coefficients, reproducible from seed.

    ``dist="normal"`` draws standard normals (floats); ``dist="int"``
    draws uniform integers in [-9, 9] for the exact arithmetic mode.
    Coefficients are drawn in ascending lexicographic occupation order.
    """
    if dist not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {dist!r}, expected one of {DISTRIBUTIONS}")
    rng = np.random.default_rng(seed)
    data: dict[tuple[int, ...], Number] = {}
    for occ in occupations(dim, order):
        if dist == "normal":
            data[occ] = float(rng.standard_normal())
        else:
            data[occ] = int(rng.integers(-9, 10))
    return SymTensor(dim, order, data)


def random_unit_tensor(seed: int, dim: int, order: int) -> SymTensor:
    """Random Gaussian tensor scaled to unit H^(x)k norm."""
    t = random_sym_tensor(seed, dim, order, dist="normal")
    return t.scale(1.0 / t.norm())


# ----------------------------------------------------------------------
# file format

FORMAT_KEYS = ("dim", "order", "entries")


def tensor_to_dict(t: SymTensor) -> dict:
    entries = [
        {"occupation": list(occ), "coeff": float(v)}
        for occ, v in sorted(t.items())
    ]
    return {"dim": t.dim, "order": t.order, "entries": entries}


def tensor_from_dict(obj: dict) -> SymTensor:
    missing = [k for k in FORMAT_KEYS if k not in obj]
    if missing:
        raise ValueError(f"tensor record is missing keys {missing}")
    dim = int(obj["dim"])
    order = int(obj["order"])
    data: dict[tuple[int, ...], Number] = {}
    seen: set[tuple[int, ...]] = set()
    for entry in obj["entries"]:
        occ = tuple(int(a) for a in entry["occupation"])
        if occ in seen:
            raise ValueError(f"duplicate canonical entry for occupation {occ}")
        seen.add(occ)
        _as_occ(occ, dim, order)
        data[occ] = float(entry["coeff"])
    return SymTensor(dim, order, data)


def save_tensor(t: SymTensor, path: str | os.PathLike) -> None:
    """Write a tensor in the structured text format (JSON, sorted entries)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tensor_to_dict(t), fh, indent=2)
        fh.write("\n")


def load_tensor(path: str | os.PathLike) -> SymTensor:
    """Load and validate a tensor file; rejects duplicates and bad orders."""
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return tensor_from_dict(obj)

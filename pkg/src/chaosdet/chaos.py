"""Multiple Wiener-Ito integrals over a truncated Gaussian basis.

With the isonormal process truncated to d orthonormal basis vectors, a
Gaussian state is just the coordinate vector xi = (W(e_1), ..., W(e_d))
of i.i.d. standard normals, and the integral of an elementary symmetric
tensor evaluates to a product of probabilists' Hermite polynomials:
the tensor with occupation a realizes as prod_i H_{a_i}(xi_i).  Linear
extension over canonical coefficients (with multinomial weights) gives
pointwise evaluation of any I_k(f).

:class:`ChaosExpansion` holds a finite sum of integrals of different
orders.  Products expand eagerly through the multiplication formula

    I_n(f) I_m(g) = sum_r r! C(n,r) C(m,r) I_{n+m-2r}(sym(f (x)_r g))

and expectations read off the order-0 term, since all higher orders are
centered and mutually orthogonal.

Sampling uses the counter-based Philox generator keyed by
(seed, stream index), so a sample is determined by its coordinates
alone, independent of threading or call interleaving.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterator, Mapping

import numpy as np

from . import _kernels
from .multiindex import multiplicity
from .tensors import (
    Number,
    SymTensor,
    contract,
    symmetrize,
    tensor_from_dict,
    tensor_to_dict,
)

DEFAULT_CHUNK_SIZE = 4096


def hermite(n: int, x: Number) -> Number:
    """Probabilists' Hermite polynomial H_n(x).

    Three-term recurrence H_0 = 1, H_1 = x, H_{k+1} = x H_k - k H_{k-1};
    exact for int/Fraction arguments.
    """
    if n < 0:
        raise ValueError(f"Hermite degree must be >= 0, got {n}")
    if n == 0:
        return 1
    prev: Number = 1
    cur: Number = x
    for k in range(1, n):
        prev, cur = cur, x * cur - k * prev
    return cur


@dataclass(frozen=True)
class GaussianSample:
    """One realization of the truncated Gaussian coordinate vector.

    Coordinates are floats in normal use; int/Fraction coordinates are
    kept as given so pointwise identities can be checked exactly.
    """

    xi: tuple[Number, ...]

    def __post_init__(self) -> None:
        vals = tuple(
            x if isinstance(x, (int, Fraction)) else float(x) for x in self.xi
        )
        if len(vals) < 1:
            raise ValueError("sample must have dim >= 1")
        if not all(math.isfinite(float(x)) for x in vals):
            raise ValueError("sample coordinates must be finite")
        object.__setattr__(self, "xi", vals)

    @property
    def dim(self) -> int:
        return len(self.xi)


def _philox(seed: int, stream: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError(f"seed must be >= 0, got {seed}")
    key = np.array([seed, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample(seed: int, dim: int) -> GaussianSample:
    """Draw one standard normal coordinate vector, reproducible from seed."""
    return GaussianSample(tuple(_philox(seed, 0).standard_normal(dim)))


def sample_chunks(
    seed: int, n_samples: int, dim: int, chunk_size: int = DEFAULT_CHUNK_SIZE
) -> Iterator[np.ndarray]:
    """Yield sample blocks of shape (<=chunk_size, dim).

    Chunk c is drawn from the Philox stream keyed by (seed, c), so the
    decomposition is reproducible and chunks are independent substreams.
    """
    if chunk_size < 1:
        raise ValueError("chunk_size must be >= 1")
    produced = 0
    chunk_index = 0
    while produced < n_samples:
        take = min(chunk_size, n_samples - produced)
        yield _philox(seed, chunk_index).standard_normal((take, dim))
        produced += take
        chunk_index += 1


def eval_integral(f: SymTensor, s: GaussianSample) -> Number:
    """Realization of the multiple integral of f at one Gaussian sample."""
    if s.dim != f.dim:
        raise ValueError(f"sample dim {s.dim} does not match tensor dim {f.dim}")
    total: Number = 0
    for occ, v in f.items():
        term = multiplicity(occ) * v
        for x, a in zip(s.xi, occ):
            if a:
                term = term * hermite(a, x)
        total += term
    return total


def eval_arrays(f: SymTensor) -> tuple[np.ndarray, np.ndarray]:
    """Kernel-ready (occupations, multiplicity-scaled weights) arrays."""
    n = len(f)
    occ = np.zeros((n, f.dim), dtype=np.int64)
    weights = np.zeros(n, dtype=np.float64)
    for j, (o, v) in enumerate(f.items()):
        occ[j] = o
        weights[j] = float(multiplicity(o)) * float(v)
    return occ, weights


def eval_integral_many(f: SymTensor, samples: np.ndarray) -> np.ndarray:
    """Vectorized evaluation over a (n_samples, dim) array of coordinates."""
    samples = np.ascontiguousarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[1] != f.dim:
        raise ValueError(f"samples must have shape (n, {f.dim})")
    occ, weights = eval_arrays(f)
    return _kernels.eval_many(occ, weights, samples)


class ChaosExpansion:
    """Finite linear combination of multiple integrals of distinct orders."""

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: Mapping[int, SymTensor] | None = None):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        self.dim = int(dim)
        data: dict[int, SymTensor] = {}
        if terms:
            for order, tensor in terms.items():
                if tensor.dim != self.dim:
                    raise ValueError(
                        f"term dim {tensor.dim} does not match expansion dim {self.dim}"
                    )
                if tensor.order != order:
                    raise ValueError(
                        f"tensor of order {tensor.order} stored under key {order}"
                    )
                if len(tensor):
                    data[int(order)] = tensor
        self._terms = data

    @classmethod
    def of(cls, f: SymTensor) -> "ChaosExpansion":
        """The single multiple integral of f (order = f.order)."""
        return cls(f.dim, {f.order: f})

    @classmethod
    def constant(cls, dim: int, value: Number) -> "ChaosExpansion":
        return cls(dim, {0: SymTensor.constant(dim, value)})

    @property
    def terms(self) -> Mapping[int, SymTensor]:
        return MappingProxyType(self._terms)

    def orders(self) -> list[int]:
        return sorted(self._terms)

    def term(self, order: int) -> SymTensor:
        return self._terms.get(order, SymTensor.zeros(self.dim, order))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ChaosExpansion)
            and self.dim == other.dim
            and self._terms == other._terms
        )

    def __repr__(self) -> str:
        return f"ChaosExpansion(dim={self.dim}, orders={self.orders()})"

    def __add__(self, other: "ChaosExpansion") -> "ChaosExpansion":
        if not isinstance(other, ChaosExpansion):
            return NotImplemented
        if self.dim != other.dim:
            raise ValueError(f"dim mismatch: {self.dim} vs {other.dim}")
        data = dict(self._terms)
        for order, tensor in other._terms.items():
            data[order] = data[order] + tensor if order in data else tensor
        return ChaosExpansion(self.dim, data)

    def __sub__(self, other: "ChaosExpansion") -> "ChaosExpansion":
        return self + other.scale(-1)

    def scale(self, c: Number) -> "ChaosExpansion":
        return ChaosExpansion(
            self.dim, {order: tensor.scale(c) for order, tensor in self._terms.items()}
        )

    def eval(self, s: GaussianSample) -> Number:
        if s.dim != self.dim:
            raise ValueError(f"sample dim {s.dim} does not match expansion dim {self.dim}")
        total: Number = 0
        for tensor in self._terms.values():
            total += eval_integral(tensor, s)
        return total

    def expectation(self) -> Number:
        """Expected value: the order-0 coefficient (higher orders are centered)."""
        t0 = self._terms.get(0)
        return t0.get((0,) * self.dim) if t0 is not None else 0


def product(x: ChaosExpansion, y: ChaosExpansion) -> ChaosExpansion:
    """Pointwise product, expanded through the multiplication formula."""
    if not isinstance(x, ChaosExpansion) or not isinstance(y, ChaosExpansion):
        raise TypeError("product expects ChaosExpansion arguments")
    if x.dim != y.dim:
        raise ValueError(f"dim mismatch: {x.dim} vs {y.dim}")
    acc: dict[int, SymTensor] = {}
    for n, f in x.terms.items():
        for m, g in y.terms.items():
            for r in range(min(n, m) + 1):
                coeff = math.factorial(r) * math.comb(m, r) * math.comb(n, r)
                piece = symmetrize(contract(f, g, r)).scale(coeff)
                order = n + m - 2 * r
                acc[order] = acc[order] + piece if order in acc else piece
    return ChaosExpansion(x.dim, acc)


def expectation(x: ChaosExpansion) -> Number:
    return x.expectation()


def moment_mc(
    x: ChaosExpansion,
    n_samples: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> float:
    """Empirical mean of the expansion over seeded Gaussian samples."""
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    rows = [eval_arrays(t) for t in x.terms.values()]
    if rows:
        occ = np.concatenate([o for o, _ in rows], axis=0)
        weights = np.concatenate([w for _, w in rows], axis=0)
    else:
        occ = np.zeros((0, x.dim), dtype=np.int64)
        weights = np.zeros(0, dtype=np.float64)
    total = 0.0
    for block in sample_chunks(seed, n_samples, x.dim, chunk_size):
        total += float(_kernels.eval_many(occ, weights, block).sum())
    return total / n_samples


# ----------------------------------------------------------------------
# serialization: the tensor file format with an added order key per block


def expansion_to_dict(x: ChaosExpansion) -> dict:
    blocks = []
    for order in x.orders():
        block = tensor_to_dict(x.term(order))
        del block["dim"]
        blocks.append(block)
    return {"dim": x.dim, "terms": blocks}


def expansion_from_dict(obj: dict) -> ChaosExpansion:
    if "dim" not in obj or "terms" not in obj:
        raise ValueError("expansion record needs 'dim' and 'terms' keys")
    dim = int(obj["dim"])
    terms: dict[int, SymTensor] = {}
    for block in obj["terms"]:
        order = int(block["order"])
        if order in terms:
            raise ValueError(f"duplicate chaos order {order}")
        terms[order] = tensor_from_dict({"dim": dim, **block})
    return ChaosExpansion(dim, terms)


def save_expansion(x: ChaosExpansion, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(expansion_to_dict(x), fh, indent=2)
        fh.write("\n")


def load_expansion(path: str | os.PathLike) -> ChaosExpansion:
    with open(path, "r", encoding="utf-8") as fh:
        return expansion_from_dict(json.load(fh))

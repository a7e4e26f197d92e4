"""Determinants of the Malliavin and covariance matrices of a chaos pair.

For F = I_n(f) and G = I_m(g) the Malliavin derivative coordinates are
slice integrals: DF = sum_i I_{n-1}(f.slice(i)) e_i.  The 2x2 Malliavin
matrix has determinant

    det L = |DF|^2 |DG|^2 - <DF, DG>^2
          = 1/2 sum_{i,l} (S_i,f S_l,g - S_l,f S_i,g)^2,

a pointwise sum of squared 2x2 minors.  Expanding each minor through
the multiplication formula and taking expectations order by order gives
the closed form

    E det L = sum_k T_k,
    T_k = 1/2 k!^2 C(n-1,k)^2 C(m-1,k)^2 (n+m-2-2k)!
          * sum_{i,l} | sym(s_i,f (x)_k s_l,g) - sym(s_l,f (x)_k s_i,g) |^2,

every term non-negative.  T_0 also has a contraction-norm form

    T_0 = sum_r n m n! m! C(n-1,r) C(m-1,r) (|f (x)_r g|^2 - |f (x)_{r+1} g|^2),

and for equal orders the total regroups around the covariance
determinant:

    E det L = m^2 det C
            + (m m!)^2 sum_{r=1..(m-1)//2} (C(m-1,r)^2 - C(m-1,r-1)^2)
              (|f (x)_r g|^2 - |f (x)_{m-r} g|^2)
            + sum_{k>=1} T_k.

The last term T_{m-1} collapses to
m^2 m!^2 (|f (x)_{m-1} g|^2 - <f (x)_1 g, g (x)_1 f>), which is
non-negative by Cauchy-Schwarz and zero exactly when f and g are
proportional; for equal orders m <= 4 that yields the dichotomy: the
pair admits a joint density if and only if det C > 0.

All functions preserve exact arithmetic for int/Fraction coefficients.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .chaos import GaussianSample, eval_integral
from .tensors import Number, SymTensor, contract, inner, symmetrize


class ChaosPair:
    """An ordered pair of symmetric tensors over the same basis."""

    __slots__ = ("f", "g", "dim", "n", "m", "_slices_f", "_slices_g")

    def __init__(self, f: SymTensor, g: SymTensor):
        if f.dim != g.dim:
            raise ValueError(f"dim mismatch: {f.dim} vs {g.dim}")
        if f.order < 1 or g.order < 1:
            raise ValueError("both tensors must have order >= 1")
        self.f = f
        self.g = g
        self.dim = f.dim
        self.n = f.order
        self.m = g.order
        self._slices_f: Optional[list[SymTensor]] = None
        self._slices_g: Optional[list[SymTensor]] = None

    @property
    def slices_f(self) -> list[SymTensor]:
        if self._slices_f is None:
            self._slices_f = malliavin_slices(self.f)
        return self._slices_f

    @property
    def slices_g(self) -> list[SymTensor]:
        if self._slices_g is None:
            self._slices_g = malliavin_slices(self.g)
        return self._slices_g

    def __repr__(self) -> str:
        return f"ChaosPair(dim={self.dim}, orders=({self.n}, {self.m}))"


def malliavin_slices(f: SymTensor) -> list[SymTensor]:
    """Derivative coordinates of I_k(f): DF = sum_i I_{k-1}(slices[i]) e_i."""
    if f.order < 1:
        raise ValueError("Malliavin derivative requires order >= 1")
    return [f.slice(i) for i in range(f.dim)]


class DetLambdaRoutes(NamedTuple):
    gram: float
    sos: float


def det_lambda_at(pair: ChaosPair, s: GaussianSample) -> DetLambdaRoutes:
    """det of the Malliavin matrix at one sample, by two independent routes.

    ``gram`` is |DF|^2 |DG|^2 - <DF, DG>^2 from the evaluated derivative
    coordinates; ``sos`` is the half-sum of squared 2x2 minors.  The two
    agree identically in exact arithmetic.
    """
    sf = [eval_integral(t, s) for t in pair.slices_f]
    sg = [eval_integral(t, s) for t in pair.slices_g]
    a = sum(v * v for v in sf)
    b = sum(v * v for v in sg)
    q = sum(u * v for u, v in zip(sf, sg))
    gram = a * b - q * q
    sos: Number = 0
    for i in range(pair.dim):
        for l in range(pair.dim):
            minor = sf[i] * sg[l] - sf[l] * sg[i]
            sos += minor * minor
    return DetLambdaRoutes(gram, _half(sos))


def _half(x: Number) -> Number:
    return x / 2 if isinstance(x, float) else x * Fraction(1, 2)


def term_T_k(pair: ChaosPair, k: int) -> Number:
    """The order-(n+m-2-2k) contribution to E det L; always >= 0."""
    n, m, d = pair.n, pair.m, pair.dim
    kmax = min(n, m) - 1
    if not 0 <= k <= kmax:
        raise ValueError(f"k={k} out of range 0..{kmax}")
    sf, sg = pair.slices_f, pair.slices_g
    # The (i, l) summand is symmetric and vanishes on the diagonal, so the
    # half-sum over ordered pairs equals the plain sum over i < l.
    total: Number = 0
    for i in range(d):
        for l in range(i + 1, d):
            s1 = symmetrize(contract(sf[i], sg[l], k))
            s2 = symmetrize(contract(sf[l], sg[i], k))
            total += (s1 - s2).norm_sq()
    prefactor = (
        math.factorial(k) ** 2
        * math.comb(m - 1, k) ** 2
        * math.comb(n - 1, k) ** 2
        * math.factorial(m + n - 2 - 2 * k)
    )
    return prefactor * total


def t_terms(pair: ChaosPair) -> list[Number]:
    return [term_T_k(pair, k) for k in range(min(pair.n, pair.m))]


def edet_closed(pair: ChaosPair) -> Number:
    """E det L as the sum of all T_k."""
    total: Number = 0
    for value in t_terms(pair):
        total += value
    return total


def r_term(pair: ChaosPair) -> Number:
    """Remainder sum_{k>=1} T_k; empty (0) when n = 1 or m = 1."""
    total: Number = 0
    for k in range(1, min(pair.n, pair.m)):
        total += term_T_k(pair, k)
    return total


def contraction_norms_sq(pair: ChaosPair) -> list[Number]:
    """Squared block norms |f (x)_r g|^2 for r = 0..min(n, m)."""
    return [
        contract(pair.f, pair.g, r).norm_sq() for r in range(min(pair.n, pair.m) + 1)
    ]


def t0_contraction(pair: ChaosPair) -> Number:
    """Contraction-norm form of T_0, an independent route to the k=0 term."""
    n, m = pair.n, pair.m
    norms = contraction_norms_sq(pair)
    scale = m * n * math.factorial(m) * math.factorial(n)
    total: Number = 0
    for r in range(min(n - 1, m - 1) + 1):
        weight = scale * math.comb(n - 1, r) * math.comb(m - 1, r)
        total += weight * (norms[r] - norms[r + 1])
    return total


def contraction_inequality_sum(pair: ChaosPair) -> Number:
    """sum_r C(n-1,r) C(m-1,r) (|f (x)_r g|^2 - |f (x)_{r+1} g|^2); >= 0."""
    n, m = pair.n, pair.m
    norms = contraction_norms_sq(pair)
    total: Number = 0
    for r in range(min(n - 1, m - 1) + 1):
        total += math.comb(n - 1, r) * math.comb(m - 1, r) * (norms[r] - norms[r + 1])
    return total


def edet_theorem(pair: ChaosPair) -> Number:
    """E det L as contraction-form T_0 plus the remainder sum."""
    return t0_contraction(pair) + r_term(pair)


class SameChaosParts(NamedTuple):
    """Equal-order decomposition of E det L around the covariance determinant."""

    m2_det_c: Number
    correction: Number
    remainder: Number

    @property
    def total(self) -> Number:
        return self.m2_det_c + self.correction + self.remainder


def edet_same_chaos(pair: ChaosPair) -> SameChaosParts:
    """Decompose E det L as m^2 det C + correction + remainder (n = m only)."""
    if pair.n != pair.m:
        raise ValueError("equal-order decomposition requires n = m")
    m = pair.m
    _, det_c = covariance(pair)
    norms = contraction_norms_sq(pair)
    scale = (m * math.factorial(m)) ** 2
    correction: Number = 0
    for r in range(1, (m - 1) // 2 + 1):
        weight = scale * (math.comb(m - 1, r) ** 2 - math.comb(m - 1, r - 1) ** 2)
        correction += weight * (norms[r] - norms[m - r])
    return SameChaosParts(m * m * det_c, correction, r_term(pair))


def t_last_closed(pair: ChaosPair) -> Number:
    """Closed form of the last term T_{m-1} for equal orders.

    m^2 m!^2 (|f (x)_{m-1} g|^2 - <f (x)_1 g, g (x)_1 f>); non-negative by
    Cauchy-Schwarz, and zero exactly on proportional pairs.
    """
    if pair.n != pair.m:
        raise ValueError("last-term closed form requires n = m")
    m = pair.m
    c_last = contract(pair.f, pair.g, m - 1)
    cross = inner(contract(pair.f, pair.g, 1), contract(pair.g, pair.f, 1))
    return m * m * math.factorial(m) ** 2 * (c_last.norm_sq() - cross)


def covariance(pair: ChaosPair):
    """Covariance matrix of (F, G) and its determinant.

    Distinct chaos orders are orthogonal, so the off-diagonal entry is
    n! <f, g> when n = m and 0 otherwise; det C >= 0 by Cauchy-Schwarz.
    """
    n, m = pair.n, pair.m
    var_f = math.factorial(n) * pair.f.norm_sq()
    var_g = math.factorial(m) * pair.g.norm_sq()
    cov: Number = math.factorial(n) * inner(pair.f, pair.g) if n == m else 0
    matrix = [[var_f, cov], [cov, var_g]]
    return matrix, var_f * var_g - cov * cov


class DensityVerdict(enum.Enum):
    NO_DENSITY_PROPORTIONAL = "NoDensity_Proportional"
    HAS_DENSITY = "HasDensity"
    UNDECIDED = "Undecided"


def density_verdict(pair: ChaosPair, tol: float = 1e-10) -> DensityVerdict:
    """Joint-density dichotomy for equal orders m <= 4.

    det C and E det L vanish together in this range; both indicators are
    tested at a scale-invariant relative threshold and the verdict is
    Undecided if they disagree.
    """
    if pair.n != pair.m:
        raise ValueError("density verdict requires equal chaos orders")
    if pair.m > 4:
        raise ValueError("density verdict is only decided for orders <= 4")
    n, m = pair.n, pair.m
    scale = float(
        math.factorial(n) * math.factorial(m) * pair.f.norm_sq() * pair.g.norm_sq()
    )
    _, det_c = covariance(pair)
    det_c_zero = float(det_c) <= tol * scale
    edet = float(edet_closed(pair))
    edet_zero = edet <= tol * (n * m * scale)
    if det_c_zero and edet_zero:
        return DensityVerdict.NO_DENSITY_PROPORTIONAL
    if not det_c_zero and not edet_zero:
        return DensityVerdict.HAS_DENSITY
    return DensityVerdict.UNDECIDED


def order_one_criterion(pair: ChaosPair) -> Number:
    """E det L for (I_n(f), I_1(g)): the single surviving term.

    Equals n n! (|f (x) g|^2 - |f (x)_1 g|^2); the pair admits a joint
    density under this criterion exactly when the value is positive.
    """
    if pair.m != 1:
        raise ValueError("criterion applies to pairs with m = 1")
    return t0_contraction(pair)


# ----------------------------------------------------------------------
# aggregated report


@dataclass
class MalliavinReport:
    """All determinant quantities for one tensor pair."""

    dim: int
    n: int
    m: int
    det_c: float
    t_terms: Optional[list[float]] = None
    r_term: Optional[float] = None
    t0_contraction: Optional[float] = None
    edet_closed: Optional[float] = None
    edet_theorem: Optional[float] = None
    edet_oracle: Optional[float] = None
    edet_mc: Optional[object] = None  # montecarlo.McEstimate
    same_chaos: Optional[tuple[float, float, float]] = None
    verdict: Optional[DensityVerdict] = None
    warnings: list[str] = field(default_factory=list)

    def quantities(self) -> dict:
        """Flat mapping with the stable output key names."""
        out: dict = {"detC": self.det_c}
        if self.t_terms is not None:
            out["T"] = list(self.t_terms)
            out["R"] = self.r_term
            out["t0_contraction"] = self.t0_contraction
            out["edet_closed"] = self.edet_closed
            out["edet_theorem"] = self.edet_theorem
        if self.edet_oracle is not None:
            out["edet_oracle"] = self.edet_oracle
        if self.edet_mc is not None:
            out["edet_mc_mean"] = self.edet_mc.mean
            out["edet_mc_stderr"] = self.edet_mc.stderr
            out["edet_mc_ci95"] = list(self.edet_mc.ci95)
        if self.same_chaos is not None:
            out["same_chaos_m2_detC"] = self.same_chaos[0]
            out["same_chaos_correction"] = self.same_chaos[1]
            out["same_chaos_R"] = self.same_chaos[2]
        if self.verdict is not None:
            out["verdict"] = self.verdict.value
        return out

    def to_text(self) -> str:
        lines = [f"dim: {self.dim}", f"n: {self.n}", f"m: {self.m}"]
        for key, value in self.quantities().items():
            lines.append(f"{key}: {value}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines) + "\n"


def build_report(
    pair: ChaosPair,
    trials: int = 0,
    seed: int = 0,
    tol: float = 1e-10,
    workers: int = 1,
    chunk_size: int = 4096,
    unsafe: bool = False,
) -> MalliavinReport:
    """Compute every route that fits the exact-computation guard.

    Outside the guard (and without ``unsafe``) the report degrades to
    the covariance determinant plus, when ``trials > 0``, the Monte
    Carlo estimate, with a warning record.
    """
    # local imports: verify/montecarlo build on this module
    from .montecarlo import estimate_edet
    from .verify import GUARD_MAX_DIM, GUARD_MAX_ORDER, oracle_edet

    _, det_c = covariance(pair)
    report = MalliavinReport(pair.dim, pair.n, pair.m, det_c=float(det_c))
    within_guard = (
        pair.dim <= GUARD_MAX_DIM
        and pair.n <= GUARD_MAX_ORDER
        and pair.m <= GUARD_MAX_ORDER
    )
    if within_guard or unsafe:
        terms = [float(v) for v in t_terms(pair)]
        report.t_terms = terms
        report.r_term = float(sum(terms[1:]))
        report.t0_contraction = float(t0_contraction(pair))
        report.edet_closed = float(sum(terms))
        report.edet_theorem = float(edet_theorem(pair))
        report.edet_oracle = float(oracle_edet(pair, unsafe=unsafe))
        if pair.n == pair.m:
            parts = edet_same_chaos(pair)
            report.same_chaos = (
                float(parts.m2_det_c),
                float(parts.correction),
                float(parts.remainder),
            )
            if pair.m <= 4:
                report.verdict = density_verdict(pair, tol=tol)
    else:
        report.warnings.append(
            f"exact routes skipped: dim <= {GUARD_MAX_DIM} and orders <= "
            f"{GUARD_MAX_ORDER} required (pass unsafe to override)"
        )
    if trials > 0:
        report.edet_mc = estimate_edet(
            pair, trials, seed, workers=workers, chunk_size=chunk_size
        )
    return report

"""Fourier analysis of arithmetic weights on polynomial spaces mod d.

Conventions
-----------
The space V_n(Z/dZ) of polynomials of degree <= n is identified with
(Z/dZ)^(n+1) through the coefficient vector (a_0, ..., a_n); its monic
degree-n slice is identified with (Z/dZ)^n through (a_0, ..., a_{n-1}).
The pairing is coefficient-wise, <f, u> = sum a_i u_i, and the transform of
a weight psi is

    psi_hat(u) = d^(-dim) * sum_f psi(f) * exp(2*pi*i*<f, u>/d),

with dim = n+1 in general mode and dim = n in monic mode.  This matches
numpy's inverse FFT (positive exponent, 1/size normalization), so full
tables are transformed with `np.fft.ifftn`; a direct-summation evaluator is
kept alongside as the independent oracle.  For squarefree d the transform
factors over the primes dividing d after twisting each coordinate by the
inverse of the complementary CRT cofactor.

The continuous convention used by the Poisson identity is
phi_hat(xi) = integral phi(x) exp(-2*pi*i*<x, xi>) dx; see
docs/fourier-conventions.md for the derivation that ties the two together.

Weight rules
------------
``mobius-half``            (1 + (-1)^(n+1) * mu_{p,n}(f)) / 2, values {0, 1/2, 1}
``squarefree-complement``  1 on non-squarefree monic f, else 0 (monic only)
``custom``                 any caller-supplied table
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from ._ints import is_squarefree, prime_factors
from .errors import BudgetExceededError
from .fppoly import FpPoly, _is_squarefree, _mobius, _trim

GENERAL = "general"
MONIC = "monic"
RULE_MOBIUS_HALF = "mobius-half"
RULE_SQUAREFREE = "squarefree-complement"
RULE_ODD_INDICATOR = "odd-indicator"
_RULE_ALIASES = {"squarefree": RULE_SQUAREFREE}

DEFAULT_OPS_BUDGET = 1_000_000_000
_TABLE_SIZE_CAP = 50_000_000


def _check_mode(mode: str) -> str:
    if mode not in (GENERAL, MONIC):
        raise ValueError(f"mode must be '{GENERAL}' or '{MONIC}', got {mode!r}")
    return mode


def _canon_rule(rule: str) -> str:
    return _RULE_ALIASES.get(rule, rule)


@dataclass(frozen=True)
class Phase:
    """Dual vector mod d: length n+1 in general mode, n in monic mode."""

    d: int
    components: tuple[int, ...]

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("modulus must be positive")
        if any(not 0 <= c < self.d for c in self.components):
            raise ValueError("phase components must be reduced mod d")

    @classmethod
    def of(cls, d: int, components: Sequence[int]) -> "Phase":
        return cls(d, tuple(int(c) % d for c in components))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.components)


class WeightTable:
    """A complex-valued weight on V_n(F_p) (or its monic slice) with a
    lazily cached full transform."""

    def __init__(self, p: int, n: int, mode: str, rule: str, values: np.ndarray):
        self.p = p
        self.n = n
        self.mode = _check_mode(mode)
        self.rule = rule
        expected = (p,) * self.dim
        if values.shape != expected:
            raise ValueError(f"values must have shape {expected}")
        self.values = values
        self._dft: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.n + 1 if self.mode == GENERAL else self.n

    @property
    def size(self) -> int:
        return self.p ** self.dim

    def dft(self) -> np.ndarray:
        if self._dft is None:
            self._dft = np.fft.ifftn(self.values)
        return self._dft

    def zero_phase(self) -> complex:
        return complex(self.values.mean())


def _monic_table(p: int, n: int, rule: str) -> np.ndarray:
    vals = np.empty((p,) * n, dtype=np.float64)
    sign = 1 if n % 2 == 1 else -1
    flat = vals.ravel()
    for i, idx in enumerate(np.ndindex(*vals.shape)):
        coeffs = idx + (1,)
        if rule == RULE_MOBIUS_HALF:
            flat[i] = (1 + sign * _mobius(coeffs, p)) / 2
        else:
            flat[i] = 0.0 if _is_squarefree(coeffs, p) else 1.0
    return vals


def mobius_half_weight(p: int, n: int, mode: str = GENERAL) -> WeightTable:
    """The weight (1 + (-1)^(n+1) mu_{p,n}(f))/2 on V_n(F_p) or its monic
    slice.  Takes the value 1/2 wherever the degree-gated Mobius value is 0,
    in particular on the whole degree < n part of the general space."""
    return weight_table(p, n, mode, RULE_MOBIUS_HALF)


def squarefree_complement_weight(p: int, n: int) -> WeightTable:
    """Indicator of non-squarefree monic degree-n polynomials over F_p."""
    return weight_table(p, n, MONIC, RULE_SQUAREFREE)


def custom_weight(p: int, n: int, mode: str, values: np.ndarray) -> WeightTable:
    return WeightTable(p, n, mode, "custom", np.asarray(values))


@lru_cache(maxsize=None)
def weight_table(p: int, n: int, mode: str, rule: str) -> WeightTable:
    mode = _check_mode(mode)
    rule = _canon_rule(rule)
    if rule == RULE_MOBIUS_HALF:
        if n < 3:
            warnings.warn(f"mobius-half weight is intended for n >= 3 (got n={n})",
                          stacklevel=2)
        mon = _monic_table(p, n, rule)
        if mode == MONIC:
            return WeightTable(p, n, mode, rule, mon)
        vals = np.full((p,) * (n + 1), 0.5)
        base = np.arange(p)
        for c in range(1, p):
            inv = pow(c, -1, p)
            s = (inv * base) % p
            vals[..., c] = mon[np.ix_(*([s] * n))]
        return WeightTable(p, n, mode, rule, vals)
    if rule == RULE_SQUAREFREE:
        if mode != MONIC:
            raise ValueError("the squarefree-complement rule is monic-only")
        if n < 2:
            raise ValueError("squarefree-complement weight needs n >= 2")
        return WeightTable(p, n, mode, rule, _monic_table(p, n, rule))
    if rule == RULE_ODD_INDICATOR:
        # sharp indicator of odd reductions: exactly where the half weight is 1
        half = weight_table(p, n, mode, RULE_MOBIUS_HALF)
        return WeightTable(p, n, mode, rule, (half.values == 1.0).astype(np.float64))
    raise ValueError(f"unknown weight rule {rule!r}")


def decay_alpha(rule: str, n: int) -> float:
    """Reference decay exponent for nonzero-phase transform values."""
    rule = _canon_rule(rule)
    if rule == RULE_MOBIUS_HALF:
        return (n - 1) / 4
    if rule == RULE_SQUAREFREE:
        return 2.0
    raise ValueError(f"no reference decay exponent for rule {rule!r}")


# ---------------------------------------------------------------------------
# pairing and transforms
# ---------------------------------------------------------------------------

def pair(f, u: Phase | Sequence[int], d: int | None = None) -> int:
    """Coefficient pairing <f, u> mod d.

    A polynomial of degree len(u) whose leading coefficient is 1 is paired
    in monic mode (the leading 1 is dropped); anything of degree < len(u)
    is zero-padded and paired in general mode.
    """
    if isinstance(u, Phase):
        comps, d = u.components, u.d
    else:
        if d is None:
            raise ValueError("a bare component sequence needs an explicit modulus")
        comps = tuple(int(c) % d for c in u)
    coeffs = f.coeffs if isinstance(f, FpPoly) else _trim(tuple(int(c) for c in f))
    L = len(comps)
    if len(coeffs) == L + 1:
        if coeffs[-1] != 1:
            raise ValueError("length mismatch: degree-L input must be monic for a length-L phase")
        coeffs = coeffs[:L]
    elif len(coeffs) > L:
        raise ValueError("length mismatch between polynomial and phase")
    return sum(c * v for c, v in zip(coeffs, comps)) % d


def dft_full(w: WeightTable, budget: int | None = DEFAULT_OPS_BUDGET) -> np.ndarray:
    """Full transform table over all phases mod p.  The budget models the
    cost of the naive quadratic scan (table size times phase count)."""
    if budget is not None and w.size ** 2 > budget:
        raise BudgetExceededError(
            f"full transform scan cost {w.size ** 2} exceeds budget {budget}; use dft_point")
    return w.dft()


def _crt_factors(d: int, n: int, mode: str, rule: str):
    out = []
    for p in prime_factors(d):
        alpha = pow(d // p, -1, p) if d != p else 1
        out.append((p, alpha, weight_table(p, n, mode, rule)))
    return out


def dft_point(d: int, n: int, mode: str, rule: str, u: Phase | Sequence[int]) -> complex:
    """Transform of the product weight at one phase, assembled across the
    primes dividing squarefree d by the CRT twist."""
    if d < 1 or not is_squarefree(d):
        raise ValueError("modulus must be a squarefree positive integer")
    comps = u.components if isinstance(u, Phase) else tuple(int(c) % d for c in u)
    dim = n + 1 if _check_mode(mode) == GENERAL else n
    if len(comps) != dim:
        raise ValueError("phase length does not match the mode")
    val = complex(1.0)
    for p, alpha, tbl in _crt_factors(d, n, mode, rule):
        idx = tuple((alpha * c) % p for c in comps)
        val *= tbl.dft()[idx]
    return val


def product_weight_values(d: int, n: int, mode: str, rule: str) -> np.ndarray:
    """The product weight on V_n(Z/dZ) as a dense array (small d only)."""
    dim = n + 1 if _check_mode(mode) == GENERAL else n
    if d ** dim > _TABLE_SIZE_CAP:
        raise BudgetExceededError("product table too large")
    base = np.arange(d)
    vals = np.ones((d,) * dim)
    for p in prime_factors(d):
        tbl = weight_table(p, n, mode, rule)
        idx = base % p
        vals = vals * tbl.values[np.ix_(*([idx] * dim))]
    return vals


def dft_point_direct(d: int, n: int, mode: str, rule: str,
                     u: Phase | Sequence[int]) -> complex:
    """Independent oracle: direct summation over all of V_n(Z/dZ)."""
    comps = u.components if isinstance(u, Phase) else tuple(int(c) % d for c in u)
    dim = n + 1 if _check_mode(mode) == GENERAL else n
    if len(comps) != dim:
        raise ValueError("phase length does not match the mode")
    vals = product_weight_values(d, n, mode, rule)
    base = np.arange(d)
    phase = np.zeros((d,) * dim)
    for axis, c in enumerate(comps):
        shape = [1] * dim
        shape[axis] = d
        phase = phase + (c * base).reshape(shape)
    kernel = np.exp(2j * np.pi * phase / d)
    return complex((vals * kernel).sum() / d ** dim)


# ---------------------------------------------------------------------------
# phase scans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseScan:
    max_abs: float
    argmax: tuple[int, ...]
    kind: str  # "exhaustive" | "sampled"
    samples: int


def max_nonzero_phase(w: WeightTable, budget: int | None = DEFAULT_OPS_BUDGET,
                      seed: int = 0, min_samples: int = 10_000) -> PhaseScan:
    """Largest |psi_hat(u)| over u != 0.

    When the naive scan cost (table size times phase count) fits the budget
    the scan is exhaustive over the cached transform, with ties broken by
    the lexicographically smallest phase.  Otherwise at least `min_samples`
    distinct random phases are evaluated by direct summation and the result
    is labeled "sampled".
    """
    size = w.size
    if budget is None or size * size <= budget:
        mags = np.abs(w.dft()).ravel().copy()
        mags[0] = -1.0
        idx = int(np.argmax(mags))
        arg = tuple(int(x) for x in np.unravel_index(idx, w.values.shape))
        return PhaseScan(float(mags[idx]), arg, "exhaustive", size - 1)
    rng = np.random.default_rng(seed)
    count = min(min_samples, size - 1)
    lin = np.sort(rng.choice(size - 1, size=count, replace=False) + 1)
    coords = np.stack([ax.ravel() for ax in np.indices(w.values.shape)], axis=1)
    flat_vals = w.values.ravel()
    best = -1.0
    best_arg: tuple[int, ...] = ()
    for l in lin.tolist():
        u = np.unravel_index(l, w.values.shape)
        ph = coords @ np.asarray(u, dtype=np.int64)
        val = (flat_vals * np.exp(2j * np.pi * (ph % w.p) / w.p)).sum() / size
        mag = abs(val)
        if mag > best:
            best = mag
            best_arg = tuple(int(x) for x in u)
    return PhaseScan(float(best), best_arg, "sampled", count)


@dataclass(frozen=True)
class BoxPhaseSum:
    total: complex
    bound: float
    ratio: float


def box_phase_sum(d: int, n: int, mode: str, rule: str, X: int, alpha: float,
                  budget: int | None = DEFAULT_OPS_BUDGET) -> BoxPhaseSum:
    """Sum of psi_hat_d(u) over nonzero integer phases with |u_i| <= X,
    reported against the envelope X^dim * d^(-alpha)."""
    dim = n + 1 if _check_mode(mode) == GENERAL else n
    if X < 1:
        return BoxPhaseSum(0j, 0.0, 0.0)
    terms = (2 * X + 1) ** dim - 1
    if budget is not None and terms > budget:
        raise BudgetExceededError(f"{terms} phase evaluations exceed budget")
    factors = _crt_factors(d, n, mode, rule)
    total = 0j
    for u in product(range(-X, X + 1), repeat=dim):
        if all(c == 0 for c in u):
            continue
        val = complex(1.0)
        for p, alpha_p, tbl in factors:
            idx = tuple((alpha_p * c) % p for c in u)
            val *= tbl.dft()[idx]
        total += val
    bound = X ** dim * d ** (-alpha)
    ratio = abs(total) / bound if bound > 0 else 0.0
    return BoxPhaseSum(total, bound, ratio)


# ---------------------------------------------------------------------------
# smooth weights and Poisson verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmoothWeight:
    """Centered product Gaussian amplitude * exp(-pi |x|^2 / sigma^2), whose
    continuous transform is amplitude * sigma^dim * exp(-pi sigma^2 |xi|^2)
    under the e^(-2 pi i <x, xi>) convention."""

    sigma: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.sigma <= 0 or self.amplitude <= 0:
            raise ValueError("sigma and amplitude must be positive")

    @classmethod
    def box_calibrated(cls, dim: int, sigma: float = 1.0) -> "SmoothWeight":
        """Scaled so the minimum over [-1, 1]^dim (at the corners) is 1."""
        return cls(sigma, math.exp(math.pi * dim / sigma ** 2))

    def value(self, xs: Sequence[float]) -> float:
        s = sum(float(x) ** 2 for x in xs)
        return self.amplitude * math.exp(-math.pi * s / self.sigma ** 2)

    def fourier(self, xis: Sequence[float]) -> float:
        s = sum(float(x) ** 2 for x in xis)
        return (self.amplitude * self.sigma ** len(xis)
                * math.exp(-math.pi * self.sigma ** 2 * s))

    def fourier_zero(self, dim: int) -> float:
        return self.amplitude * self.sigma ** dim

    def coord_profile(self, arr: np.ndarray) -> np.ndarray:
        # per-coordinate factor, amplitude excluded (apply it once per point)
        return np.exp(-math.pi * np.asarray(arr, dtype=np.float64) ** 2 / self.sigma ** 2)

    def lattice_radius(self, scale: float, rel_tol: float = 1e-16) -> int:
        return math.ceil(self.sigma * scale * math.sqrt(math.log(1 / rel_tol) / math.pi)) + 1


def lattice_weight_sum(d: int, n: int, mode: str, rule: str,
                       phi: SmoothWeight, H: float) -> float:
    """Exact full-lattice sum  sum_{f in Z^dim} phi(f/H) psi_d(f)  with the
    Gaussian folded into wrapped per-residue weights, so no truncation
    enters beyond machine precision."""
    dim = n + 1 if _check_mode(mode) == GENERAL else n
    R = phi.lattice_radius(H, 1e-18)
    span = np.arange(-R - d, R + d + 1)
    profile = phi.coord_profile(span / H)
    theta = np.zeros(d)
    np.add.at(theta, span % d, profile)
    if d == 1:
        return phi.amplitude * float(theta[0]) ** dim
    base = np.arange(d)
    tables = [(weight_table(p, n, mode, rule).values, base % p)
              for p in prime_factors(d)]
    if dim == 1:
        acc = np.ones(d)
        for vals, idx in tables:
            acc = acc * vals[idx]
        return phi.amplitude * float(np.dot(acc, theta))
    total = 0.0
    for r0 in range(d):
        slab = np.ones((d,) * (dim - 1))
        for vals, idx in tables:
            slab = slab * vals[int(idx[r0])][np.ix_(*([idx] * (dim - 1)))]
        for _ in range(dim - 1):
            slab = np.tensordot(slab, theta, axes=([-1], [0]))
        total += float(theta[r0]) * float(slab)
    return phi.amplitude * total


@dataclass(frozen=True)
class PoissonReport:
    lhs: float
    rhs: float
    abs_diff: float

    @property
    def rel_diff(self) -> float:
        scale = max(abs(self.lhs), abs(self.rhs), 1e-300)
        return self.abs_diff / scale


def poisson_check(n: int, mode: str, d: int, H: float, rule: str,
                  phi: SmoothWeight | None = None,
                  budget: int | None = DEFAULT_OPS_BUDGET) -> PoissonReport:
    """Compare the lattice sum sum_f phi(f/H) psi_d(f) against its dual form
    H^dim * sum_u phi_hat(u H / d) psi_hat_d(u), both truncated only where
    Gaussian tails fall below machine precision."""
    if d < 1 or not is_squarefree(d):
        raise ValueError("modulus must be a squarefree positive integer")
    dim = n + 1 if _check_mode(mode) == GENERAL else n
    phi = phi if phi is not None else SmoothWeight()
    lhs = lattice_weight_sum(d, n, mode, rule, phi, H)

    U = max(1, math.ceil((d / (phi.sigma * H)) * math.sqrt(math.log(1e18) / math.pi)) + 1)
    terms = (2 * U + 1) ** dim
    if budget is not None and terms > budget:
        raise BudgetExceededError(
            f"poisson dual sum needs {terms} terms, over budget {budget}")
    factors = _crt_factors(d, n, mode, rule) if d > 1 else []
    total = 0j
    for u in product(range(-U, U + 1), repeat=dim):
        fh = phi.fourier(tuple(c * H / d for c in u))
        if d == 1:
            total += fh
            continue
        val = complex(1.0)
        for p, alpha_p, tbl in factors:
            idx = tuple((alpha_p * c) % p for c in u)
            val *= tbl.dft()[idx]
        total += fh * val
    rhs = (H ** dim) * total
    return PoissonReport(float(lhs), float(rhs.real), float(abs(lhs - rhs.real)))

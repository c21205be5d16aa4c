"""Almost-prime discriminant statistics for monic polynomial boxes.

The weighted sequence a_m collects Gaussian-smoothed masses of lattice
polynomials by absolute discriminant; its divisor sums realize the linear
sieve density g(d) = 1/d with main term H^n phi_hat(0) / d.  Admissibility
of a prime-factor budget r is governed by
Delta_r = r + log((3/4)(1 + 3^-r)) / log 3, and counting polynomials whose
discriminant has at most r distinct prime factors is done by direct
enumeration with batch factoring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _ints
from .charsum import SmoothWeight
from .errors import BudgetExceededError
from .zpoly import ZPoly, discriminant, disc_values_monic3

DEFAULT_BOX_BUDGET = 100_000_000


# ---------------------------------------------------------------------------
# the discriminant histogram
# ---------------------------------------------------------------------------

@dataclass
class DiscSequence:
    """Histogram m -> a_m of |Disc| over the smoothed monic lattice, stored
    as parallel sorted arrays; the Disc = 0 mass is kept separately."""

    n: int
    H: float
    phi: SmoothWeight
    radius: int
    ms: np.ndarray        # int64, sorted unique |Disc| > 0
    masses: np.ndarray    # float64, same length
    zero_mass: float

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    @property
    def max_m(self) -> int:
        return int(self.ms[-1]) if self.ms.size else 0

    def mass_of(self, m: int) -> float:
        idx = np.searchsorted(self.ms, m)
        if idx < self.ms.size and self.ms[idx] == m:
            return float(self.masses[idx])
        return 0.0

    def divisible_mass(self, d: int) -> float:
        if d == 1:
            return self.total_mass
        return float(self.masses[self.ms % d == 0].sum())

    def items(self):
        return zip(self.ms.tolist(), self.masses.tolist())


def _monic_disc_slabs(n: int, R: int):
    """Yield (coeff_block, disc_block) over the height-R monic box; the
    cubic case is vectorized per (b-slab), other degrees run pointwise."""
    span = np.arange(-R, R + 1, dtype=np.int64)
    if n == 3:
        c_grid, d_grid = np.meshgrid(span, span, indexing="ij")
        for b in span.tolist():
            disc = disc_values_monic3(np.int64(b), c_grid, d_grid)
            coeffs = np.stack([d_grid.ravel(), c_grid.ravel(),
                               np.full(disc.size, b, dtype=np.int64)], axis=1)
            yield coeffs, disc.ravel()
    else:
        from itertools import product

        rows = []
        discs = []
        for vec in product(span.tolist(), repeat=n):
            f = ZPoly(tuple(vec[::-1]) + (1,), n, True)
            rows.append(vec[::-1])
            discs.append(discriminant(f))
            if len(rows) >= 4096:
                yield np.array(rows, dtype=np.int64), np.array(discs, dtype=np.int64)
                rows, discs = [], []
        if rows:
            yield np.array(rows, dtype=np.int64), np.array(discs, dtype=np.int64)


def build_disc_sequence(n: int, H: float, phi: SmoothWeight | None = None,
                        radius: int | None = None,
                        budget: int | None = DEFAULT_BOX_BUDGET) -> DiscSequence:
    """Exact-discriminant histogram with smooth weights phi(f/H) over the
    monic lattice, truncated where the Gaussian falls below machine
    precision (override with an explicit radius for hard boxes)."""
    if n < 2:
        raise ValueError("need degree n >= 2")
    phi = phi if phi is not None else SmoothWeight()
    R = radius if radius is not None else phi.lattice_radius(H, 1e-16)
    count = (2 * R + 1) ** n
    if budget is not None and count > budget:
        raise BudgetExceededError(f"box of {count} lattice points exceeds budget {budget}")
    vals_acc: list[np.ndarray] = []
    mass_acc: list[np.ndarray] = []
    acc_len = 0
    merge_at = 8_000_000  # doubled after each merge to keep the cost amortized
    zero_mass = 0.0

    def consolidate():
        nonlocal vals_acc, mass_acc, acc_len, merge_at
        allv = np.concatenate(vals_acc)
        allm = np.concatenate(mass_acc)
        uniq, inv = np.unique(allv, return_inverse=True)
        vals_acc = [uniq]
        mass_acc = [np.bincount(inv, weights=allm, minlength=uniq.size)]
        acc_len = uniq.size
        merge_at = max(merge_at, 2 * acc_len)

    for coeffs, discs in _monic_disc_slabs(n, R):
        w = phi.amplitude * phi.coord_profile(coeffs / H).prod(axis=1)
        zmask = discs == 0
        if zmask.any():
            zero_mass += float(w[zmask].sum())
        live = ~zmask
        if not live.any():
            continue
        uniq, inv = np.unique(np.abs(discs[live]), return_inverse=True)
        vals_acc.append(uniq)
        mass_acc.append(np.bincount(inv, weights=w[live], minlength=uniq.size))
        acc_len += uniq.size
        if acc_len > merge_at:
            consolidate()
    if not vals_acc:
        return DiscSequence(n, H, phi, R, np.zeros(0, dtype=np.int64),
                            np.zeros(0), zero_mass)
    consolidate()
    return DiscSequence(n, H, phi, R, vals_acc[0], mass_acc[0], zero_mass)


@dataclass(frozen=True)
class DensityRemainder:
    d: int
    divisor_mass: float
    main: float
    remainder: float


def density_remainder(seq: DiscSequence, d: int) -> DensityRemainder:
    """Divisor mass sum_{d | m} a_m against its linear-sieve main term
    H^n phi_hat(0) / d."""
    if d < 1 or not _ints.is_squarefree(d):
        raise ValueError("d must be a squarefree positive integer")
    mass = seq.divisible_mass(d)
    main = seq.H ** seq.n * seq.phi.fourier_zero(seq.n) / d
    return DensityRemainder(d, mass, main, mass - main)


# ---------------------------------------------------------------------------
# admissibility arithmetic
# ---------------------------------------------------------------------------

def delta_r(r: int) -> float:
    """Level exponent r + log((3/4)(1 + 3^-r)) / log 3 of the weighted
    almost-prime sieve."""
    if r < 1:
        raise ValueError("need r >= 1")
    return r + math.log(0.75 * (1 + 3.0 ** (-r))) / math.log(3)


@dataclass(frozen=True)
class SieveAdmissibility:
    n: int
    r: int
    delta: float
    density_exponent: Fraction  # n / (2 (n-1)^2)
    admissible: bool


def admissibility(n: int, r: int) -> SieveAdmissibility:
    expo = Fraction(n, 2 * (n - 1) ** 2)
    d = delta_r(r)
    return SieveAdmissibility(n, r, d, expo, 1 / d < expo)


def min_admissible_r(n: int) -> int:
    """Smallest r with 1/Delta_r < n / (2(n-1)^2); equals 2n - 3 throughout
    the tested range n in [3, 12]."""
    if n < 3:
        raise ValueError("need n >= 3")
    threshold = n / (2 * (n - 1) ** 2)
    r = 1
    while 1 / delta_r(r) >= threshold:
        r += 1
    return r


# ---------------------------------------------------------------------------
# counting and exponents
# ---------------------------------------------------------------------------

def count_almost_prime(n: int, H: int, r: int, squarefree_only: bool = False,
                       budget: int | None = DEFAULT_BOX_BUDGET) -> int:
    """Number of monic height-H degree-n polynomials with nonzero
    discriminant having at most r distinct prime factors (optionally also
    requiring the discriminant to be squarefree)."""
    if n < 2 or H < 1 or r < 0:
        raise ValueError("need n >= 2, H >= 1, r >= 0")
    count = (2 * H + 1) ** n
    if budget is not None and count > budget:
        raise BudgetExceededError(f"box of {count} lattice points exceeds budget {budget}")
    total = 0
    for _coeffs, discs in _monic_disc_slabs(n, H):
        live = discs != 0
        if not live.any():
            continue
        vals = np.abs(discs[live])
        om, sqfree = _ints.omega_batch(vals, track_squarefree=True)
        ok = om <= r
        if squarefree_only:
            ok &= sqfree
        total += int(np.count_nonzero(ok))
    return total


def field_exponent(n: int, c_n) -> tuple[Fraction, Fraction]:
    """Exponent pair from a polynomial-count lower bound combined with a
    field-count upper bound X^(c_n): the field count grows at least like
    X^(1/2 + 1/(2 c_n n (n-1) - 2)), using an auxiliary discriminant cutoff
    Y of exponent n (n-1)^2 / (c_n n (n-1) - 1)."""
    if n < 3:
        raise ValueError("need n >= 3")
    cn = Fraction(c_n)
    base = cn * n * (n - 1)
    if base <= 1:
        raise ValueError("need c_n * n * (n-1) > 1")
    count_exp = Fraction(1, 2) + Fraction(1, 1) / (2 * base - 2)
    cutoff_exp = Fraction(n * (n - 1) ** 2, 1) / (base - 1)
    return count_exp, cutoff_exp


def multiplicity_bound(n: int, H: float, disc: int) -> float:
    """Normalized bound H (log H)^(n-1) |disc|^(-1/(n^2-n)) on how many
    height-H polynomials can cut out one field of that discriminant
    (implied constant taken as 1)."""
    if disc == 0:
        raise ValueError("need a nonzero discriminant")
    if H < 2:
        raise ValueError("need H >= 2")
    return H * math.log(H) ** (n - 1) * abs(disc) ** (-1 / (n * n - n))


def mertens_product(z: float) -> tuple[float, float]:
    """The Euler product prod_{p < z} (1 - 1/p) next to its Mertens
    approximation e^(-gamma) / log z."""
    prod = 1.0
    for p in _ints.primes_up_to(int(math.ceil(z)) - 1):
        if p < z:
            prod *= 1 - 1 / p
    return prod, math.exp(-0.5772156649015329) / math.log(z)

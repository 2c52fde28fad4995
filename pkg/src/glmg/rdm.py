"""Exact block reduced-density-matrix spectrum of a Dicke state.

For a totally symmetric N-site state with fixed magnon numbers
(N_1, ..., N_{m+1}), the reduced density matrix of an L-site block is
diagonal in the block Dicke basis.  Its eigenvalues

    lambda(L_1, ..., L_m) = C(N_1, L_1) ... C(N_{m+1}, L_{m+1}) / C(N, L)

with L_{m+1} = L - sum(L_a) form a multivariate hypergeometric
distribution over the block magnon numbers.  Everything here is computed
in log space and exponentiated once, so binomials far beyond the float
overflow point (N ~ 1030) remain usable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import ResourceCapError, ValidationError
from .sums import compensated_sum

SUPPORT_CAP = 10 ** 8

# largest n for which spectrum construction uses exact integer log tables;
# above this it falls back to log-gamma (adds ~1e-12 relative error per
# eigenvalue around n ~ 2000, entirely from the magnitude of ln n!)
_EXACT_TABLE_MAX = 5000


@dataclass(frozen=True)
class BlockSpec:
    """An L-site block of an N-site Dicke state with fixed magnon numbers."""

    N: int
    L: int
    magnon_numbers: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "magnon_numbers",
                           tuple(int(v) for v in self.magnon_numbers))
        if self.N < 1:
            raise ValidationError("N must be positive")
        if not 0 <= self.L <= self.N:
            raise ValidationError("block size must satisfy 0 <= L <= N")
        if len(self.magnon_numbers) < 2:
            raise ValidationError("need at least two magnon species")
        if any(v < 0 for v in self.magnon_numbers):
            raise ValidationError("magnon numbers must be nonnegative")
        if sum(self.magnon_numbers) != self.N:
            raise ValidationError(
                f"magnon numbers sum to {sum(self.magnon_numbers)}, expected N={self.N}")

    @property
    def m(self) -> int:
        return len(self.magnon_numbers) - 1

    def complement(self) -> "BlockSpec":
        """The N-L block of the same state (identical spectrum)."""
        return BlockSpec(self.N, self.N - self.L, self.magnon_numbers)

    def densities(self) -> np.ndarray:
        return np.asarray(self.magnon_numbers, dtype=float) / self.N


def log_binomial(n: int, k) -> float | np.ndarray:
    """Natural log of C(n, k) via log-gamma; -inf when k is out of range."""
    if n < 0:
        raise ValidationError("n must be nonnegative")
    karr = np.asarray(k)
    out = np.where(
        (karr < 0) | (karr > n), -np.inf,
        gammaln(n + 1.0) - gammaln(karr + 1.0) - gammaln(n - karr + 1.0))
    return float(out) if np.isscalar(k) else out


@lru_cache(maxsize=512)
def _exact_log_binomial_table(n: int) -> np.ndarray:
    """ln C(n, k) for k = 0..n from exact integers (error ~1 ulp of ln C)."""
    out = np.empty(n + 1)
    c = 1
    for k in range(n + 1):
        out[k] = math.log(c) if c > 1 else 0.0
        c = c * (n - k) // (k + 1)
    return out


def _log_binomial_at(n: int, k: np.ndarray) -> np.ndarray:
    """ln C(n, k) for in-range integer arrays k, table-backed when small."""
    if n <= _EXACT_TABLE_MAX:
        return _exact_log_binomial_table(n)[k]
    karr = k.astype(float)
    return gammaln(n + 1.0) - gammaln(karr + 1.0) - gammaln(n - karr + 1.0)


def _log_choose(n: int, k: int) -> float:
    if n <= _EXACT_TABLE_MAX:
        return float(_exact_log_binomial_table(n)[k])
    return float(log_binomial(n, k))


def in_support(block: BlockSpec, index) -> bool:
    """True when (L_1, ..., L_m) is a support point of the spectrum."""
    idx = np.asarray(index, dtype=np.int64)
    if idx.shape != (block.m,):
        raise ValidationError(f"index must have {block.m} components")
    last = block.L - int(idx.sum())
    na = block.magnon_numbers
    return (np.all(idx >= 0) and all(idx[a] <= na[a] for a in range(block.m))
            and 0 <= last <= na[block.m])


def rdm_eigenvalue(block: BlockSpec, index) -> float:
    """Single eigenvalue lambda(L_1, ..., L_m); zero off the support."""
    if not in_support(block, index):
        return 0.0
    idx = np.asarray(index, dtype=np.int64)
    last = block.L - int(idx.sum())
    logv = -_log_choose(block.N, block.L)
    for a in range(block.m):
        logv += _log_choose(block.magnon_numbers[a], int(idx[a]))
    logv += _log_choose(block.magnon_numbers[block.m], last)
    return float(math.exp(logv))


_SIZE_DP_MAX_L = 1 << 23


def support_size(block: BlockSpec) -> int:
    """Number of support lattice points, without enumerating them.

    Closed form for a single free coordinate; otherwise a dynamic program
    over the partial sum s = L_1 + ... + L_a with windowed cumulative sums
    (counts in float64, ample for comparing against any practical cap).
    Blocks too large even for the O(L) count fall back to the product of
    the marginal coordinate ranges, an upper bound, so oversized spectra
    are still refused cheaply.
    """
    na = block.magnon_numbers
    m, L, N = block.m, block.L, block.N
    if m == 1:
        return min(na[0], L) - max(0, L - na[1]) + 1
    if L > _SIZE_DP_MAX_L:
        bound = 1.0
        for a in range(m):
            bound *= min(na[a], L) - max(0, L - (N - na[a])) + 1
        return int(min(bound, 2.0 ** 62))
    last = na[m]
    tails = [sum(na[b] for b in range(a + 1, m)) for a in range(m)]
    counts = np.zeros(L + 1)
    counts[0] = 1.0
    s = np.arange(L + 1)
    for a in range(m):
        cum = np.concatenate(([0.0], np.cumsum(counts)))
        counts = cum[s + 1] - cum[np.maximum(0, s - na[a])]
        cutoff = L - tails[a] - last
        if cutoff > 0:
            counts[:cutoff] = 0.0
    return int(round(counts.sum()))


def enumerate_support(block: BlockSpec) -> np.ndarray:
    """All support points (L_1, ..., L_m) in lexicographic order.

    Each coordinate is expanded over exactly the window allowed by the
    partial-sum constraints, so no point is generated and discarded.
    """
    na = block.magnon_numbers
    m, L = block.m, block.L
    last = na[m]
    tails = [sum(na[b] for b in range(a + 1, m)) for a in range(m)]
    cols: list[np.ndarray] = []
    sums = np.zeros(1, dtype=np.int64)
    for a in range(m):
        hi = np.minimum(na[a], L - sums)
        lo = np.maximum(0, L - sums - tails[a] - last)
        reps = hi - lo + 1
        total = int(reps.sum())
        offsets = np.repeat(np.cumsum(reps) - reps, reps)
        new = np.arange(total, dtype=np.int64) - offsets + np.repeat(lo, reps)
        cols = [np.repeat(col, reps) for col in cols]
        cols.append(new)
        sums = np.repeat(sums, reps) + new
    return np.stack(cols, axis=1)


@dataclass(eq=False)
class RdmSpectrum:
    """Enumerated eigenvalue distribution of a block RDM.

    indices holds the support points (rows, lexicographic order) and
    log_values / values the eigenvalues; every value is positive and the
    total is 1 up to roundoff.
    """

    block: BlockSpec
    indices: np.ndarray
    log_values: np.ndarray
    values: np.ndarray

    def __len__(self) -> int:
        return self.values.size

    def entries(self) -> dict[tuple[int, ...], float]:
        """Support as a {multi-index: eigenvalue} map (small spectra)."""
        return {tuple(int(v) for v in row): float(val)
                for row, val in zip(self.indices, self.values)}

    def total(self) -> float:
        return compensated_sum(self.values)

    def power_sum(self, q: float) -> float:
        """tr(rho_L^q) = sum of lambda^q over the support."""
        if q <= 0:
            raise ValidationError("q must be positive")
        return compensated_sum(np.exp(q * self.log_values))


def rdm_spectrum(block: BlockSpec, max_points: int = SUPPORT_CAP) -> RdmSpectrum:
    """Enumerate the full spectrum of the block RDM.

    Refuses with a size diagnostic when the support exceeds max_points.
    """
    size = support_size(block)
    if size > max_points:
        raise ResourceCapError(
            f"spectrum support has {size} points, exceeding the cap of "
            f"{max_points}; raise max_points or reduce the block")
    idx = enumerate_support(block)
    na = block.magnon_numbers
    logv = np.full(idx.shape[0], -_log_choose(block.N, block.L))
    for a in range(block.m):
        logv += _log_binomial_at(na[a], idx[:, a])
    last = block.L - idx.sum(axis=1)
    logv += _log_binomial_at(na[block.m], last)
    values = np.exp(logv)
    spec = RdmSpectrum(block, idx, logv, values)
    total = spec.total()
    if abs(total - 1.0) > 1e-9:
        raise RuntimeError(f"spectrum normalization off: sum = {total!r}")
    return spec


def schmidt_coefficients(block: BlockSpec,
                         max_points: int = SUPPORT_CAP) -> dict[tuple[int, ...], float]:
    """Schmidt coefficients of the block bipartition: sqrt of each eigenvalue."""
    spec = rdm_spectrum(block, max_points=max_points)
    half = np.exp(0.5 * spec.log_values)
    return {tuple(int(v) for v in row): float(b)
            for row, b in zip(spec.indices, half)}


@dataclass(frozen=True)
class Moments:
    """First and second moments of the block magnon numbers (first m)."""

    means: np.ndarray
    covariance: np.ndarray


def moments_closed_form(block: BlockSpec) -> Moments:
    """Mean and covariance of (L_1, ..., L_m) in closed form.

    <L_i> = L N_i / N,  <x_i x_j> = L n_i (delta_ij - n_j) (N-L)/(N-1).
    """
    if block.N < 2:
        raise ValidationError("moments need N >= 2")
    n = block.densities()[:block.m]
    L, N = block.L, block.N
    means = L * n
    factor = L * (N - L) / (N - 1)
    cov = factor * (np.diag(n) - np.outer(n, n))
    return Moments(means, cov)


def moments_brute_force(spectrum: RdmSpectrum) -> Moments:
    """Moments by direct weighted sums over the enumerated support."""
    idx = spectrum.indices.astype(float)
    w = spectrum.values
    means = idx.T @ w
    centered = idx - means
    cov = (centered * w[:, None]).T @ centered
    cov = 0.5 * (cov + cov.T)
    return Moments(means, cov)


def write_spectrum_csv(spectrum: RdmSpectrum, fh) -> None:
    """Spectrum rows as 'L1,...,Lm,lambda' with 17 significant digits."""
    m = spectrum.block.m
    fh.write(",".join(f"L{a+1}" for a in range(m)) + ",lambda\n")
    for row, val in zip(spectrum.indices, spectrum.values):
        fh.write(",".join(str(int(v)) for v in row) + f",{val:.17g}\n")

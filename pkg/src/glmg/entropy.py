"""Entanglement entropies: exact sums and thermodynamic-limit formulas.

Exact von Neumann, Renyi and Tsallis entropies are reductions over an
enumerated RDM spectrum.  The asymptotic forms follow from the Gaussian
limit of the eigenvalue distribution:

    tr(rho_L^q) ~ q^(-m/2) [2 pi L (1-alpha) G]^(m(1-q)/2),
    S ~ (m/2) ln(2 pi e L (1-alpha) G),  G = prod(n_a)^(1/m),

where m counts the independent nonvanishing magnon directions and the
product runs over the m+1 nonvanishing densities.  All logs are natural.
The asymptotic entropies go negative close to the simplex faces; they are
returned as-is with a flag, never clamped, and the zero-crossing distance
has its own closed-form estimate here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .rdm import RdmSpectrum, log_binomial
from .sums import compensated_sum

# |q - 1| below this switches the q-family formulas to their q -> 1 limit;
# keeps the (ln q)/(q-1) evaluation within ~1e-9 of the limit
Q_ONE_TOL = 1e-8

FLAG_OK = "ok"
FLAG_NEGATIVE = "negative_asymptotic"


@dataclass(frozen=True)
class AsymptoticInput:
    """Parameters of the thermodynamic-limit formulas.

    m_eff counts the independent nonvanishing magnon directions, densities
    the m_eff + 1 nonvanishing densities (unit sum), L the block size and
    alpha the block fraction L/N.
    """

    m_eff: int
    densities: tuple[float, ...]
    L: float
    alpha: float = 0.0

    def __post_init__(self):
        if self.m_eff < 1:
            raise ValidationError("m_eff must be at least 1")
        n = np.asarray(self.densities, dtype=float)
        object.__setattr__(self, "densities", tuple(float(v) for v in n))
        if n.size != self.m_eff + 1:
            raise ValidationError(
                f"need {self.m_eff + 1} nonvanishing densities, got {n.size}")
        if np.any(n <= 0.0) or np.any(n >= 1.0):
            raise ValidationError("densities must lie strictly in (0, 1)")
        if abs(n.sum() - 1.0) > 1e-12:
            raise ValidationError("densities must sum to 1")
        if not 0.0 <= self.alpha < 1.0:
            raise ValidationError("alpha must lie in [0, 1)")
        if self.L * (1.0 - self.alpha) <= 0.0:
            raise ValidationError("effective block size L(1-alpha) must be positive")

    @property
    def geometric_factor(self) -> float:
        """prod(n_a)^(1/m_eff) over the m_eff + 1 densities."""
        return float(np.exp(np.log(self.densities).sum() / self.m_eff))


@dataclass(frozen=True)
class EntropyValue:
    """An asymptotic entropy with a validity flag.

    flag is "negative_asymptotic" exactly when the formula returned a
    negative value, signalling proximity to a simplex face.
    """

    value: float
    flag: str = FLAG_OK

    def __float__(self) -> float:
        return self.value


def _flagged(value: float) -> EntropyValue:
    return EntropyValue(value, FLAG_NEGATIVE if value < 0 else FLAG_OK)


def entropy_exact(spectrum: RdmSpectrum) -> float:
    """Von Neumann entropy -sum(lambda ln lambda) of an enumerated spectrum."""
    terms = -spectrum.values * spectrum.log_values
    return compensated_sum(terms)


def renyi_exact(spectrum: RdmSpectrum, q: float) -> float:
    """Renyi entropy ln(tr rho^q) / (1-q); hands q ~ 1 to entropy_exact."""
    if q <= 0:
        raise ValidationError("Renyi order q must be positive")
    if abs(q - 1.0) < Q_ONE_TOL:
        return entropy_exact(spectrum)
    return math.log(spectrum.power_sum(q)) / (1.0 - q)


def tsallis_exact(spectrum: RdmSpectrum, q: float) -> float:
    """Tsallis entropy (tr rho^q - 1) / (1-q); hands q ~ 1 to entropy_exact."""
    if q <= 0:
        raise ValidationError("Tsallis order q must be positive")
    if abs(q - 1.0) < Q_ONE_TOL:
        return entropy_exact(spectrum)
    return (spectrum.power_sum(q) - 1.0) / (1.0 - q)


def trace_power_asymptotic(inp: AsymptoticInput, q: float) -> float:
    """Thermodynamic-limit tr(rho_L^q)."""
    if q <= 0:
        raise ValidationError("q must be positive")
    m = inp.m_eff
    base = 2.0 * math.pi * (1.0 - inp.alpha) * inp.L * inp.geometric_factor
    return q ** (-0.5 * m) * base ** (0.5 * m * (1.0 - q))


def vn_asymptotic(inp: AsymptoticInput) -> EntropyValue:
    """Thermodynamic-limit von Neumann entropy (m_eff/2) ln(2 pi e L(1-a) G)."""
    m = inp.m_eff
    val = 0.5 * m * (1.0 + math.log(
        2.0 * math.pi * inp.L * (1.0 - inp.alpha) * inp.geometric_factor))
    return _flagged(val)


def renyi_asymptotic(inp: AsymptoticInput, q: float) -> EntropyValue:
    """Thermodynamic-limit Renyi entropy.

    Evaluated as S + (m_eff/2)((ln q)/(q-1) - 1) so the constant-offset
    relation to the von Neumann value holds exactly in the algebra.
    """
    if q <= 0:
        raise ValidationError("Renyi order q must be positive")
    s = vn_asymptotic(inp).value
    if abs(q - 1.0) < Q_ONE_TOL:
        return _flagged(s)
    val = s + 0.5 * inp.m_eff * (math.log(q) / (q - 1.0) - 1.0)
    return _flagged(val)


def tsallis_asymptotic(inp: AsymptoticInput, q: float) -> EntropyValue:
    """Thermodynamic-limit Tsallis entropy (tr rho^q - 1)/(1-q)."""
    if q <= 0:
        raise ValidationError("Tsallis order q must be positive")
    if abs(q - 1.0) < Q_ONE_TOL:
        return vn_asymptotic(inp)
    val = (trace_power_asymptotic(inp, q) - 1.0) / (1.0 - q)
    return _flagged(val)


def tsallis_extensive_limit(inp: AsymptoticInput) -> float:
    """Tsallis entropy per site at the extensive order q = 1 - 2/m_eff.

    Only m_eff >= 3 admits a positive extensive order; below that the
    Tsallis entropy is not extensive for any q.
    """
    m = inp.m_eff
    if m <= 2:
        raise ValidationError(
            f"Tsallis not extensive for any q when m_eff = {m} (need m_eff >= 3)")
    return (math.pi * m * (1.0 - inp.alpha) * inp.geometric_factor
            / (1.0 - 2.0 / m) ** (0.5 * m))


def entropy_upper_bound(L: int, m: int) -> float:
    """ln C(L+m, m): log-dimension of the symmetric L-site subspace."""
    if L < 0 or m < 1:
        raise ValidationError("need L >= 0 and m >= 1")
    return log_binomial(L + m, m)


def zero_entropy_distance(vanishing_index: int, interior_densities, L: float,
                          alpha: float = 0.0, q: float | None = None) -> float:
    """Distance from an (m-1)-face point to the zero-entropy surface.

    The face is where density vanishing_index (1-based) vanishes;
    interior_densities are the m remaining densities at the face point,
    all strictly inside (0, 1).  With q given the Renyi-q surface is used
    instead of the von Neumann one (extra factor q^(m/(1-q)) e^m).
    """
    n0 = np.asarray(interior_densities, dtype=float)
    m = n0.size
    if m < 1:
        raise ValidationError("need at least one interior density")
    if not 1 <= vanishing_index <= m + 1:
        raise ValidationError(f"vanishing index must be in 1..{m + 1}")
    if np.any(n0 <= 1e-10):
        raise ValidationError(
            "face point lies on a lower-dimensional face; the L^(-m/k) "
            "scaling there has no closed-form constant")
    if np.any(n0 > 1.0):
        raise ValidationError("interior densities must lie in (0, 1]")
    if abs(n0.sum() - 1.0) > 1e-12:
        raise ValidationError("interior densities must sum to 1")
    eff = 2.0 * math.pi * math.e * L * (1.0 - alpha)
    if eff <= 1.0:
        raise ValidationError("need L(1-alpha) >> 1")
    base = eff ** (-m) / np.prod(n0)
    if vanishing_index <= m:
        coef = (m + 1) / math.sqrt(m * m + m - 1)
    else:
        coef = (m + 1) / math.sqrt(m)
    r0 = coef * base
    if q is not None:
        if q <= 0:
            raise ValidationError("Renyi order q must be positive")
        if abs(q - 1.0) >= Q_ONE_TOL:
            r0 *= q ** (m / (1.0 - q)) * math.exp(m)
    return float(r0)

"""Gaussian limits of the RDM eigenvalue distribution.

Two levels: the univariate Laplace-de Moivre limit of a hypergeometric
distribution, and the multivariate normal approximation of the eigenvalue
distribution itself, whose coefficient matrix

    a_ij = [L(1-alpha)]^-1 (delta_ij / n_i + 1 / n_{m+1})

inverts in closed form to the covariance L(1-alpha) n_i (delta_ij - n_j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import ValidationError
from .model import check_densities


@dataclass(eq=False)
class GaussianModel:
    """Multivariate normal model of the eigenvalue distribution.

    means are L n_i, coefficient_matrix the quadratic-form coefficients
    a_ij, covariance its inverse, normalizer the density prefactor
    sqrt(det A) / (2 pi)^(m/2).
    """

    means: np.ndarray
    coefficient_matrix: np.ndarray
    covariance: np.ndarray
    normalizer: float


def _validated(densities, L, alpha):
    n = check_densities(densities)
    if np.any(n <= 0.0) or np.any(n >= 1.0):
        raise ValidationError(
            "densities must lie strictly in (0, 1); drop vanishing "
            "components and use the reduced m_eff instead")
    if not 0.0 <= alpha < 1.0:
        raise ValidationError("alpha must lie in [0, 1)")
    if L <= 0:
        raise ValidationError("L must be positive")
    return n


def covariance_matrix(densities, L: float, alpha: float = 0.0) -> GaussianModel:
    """Build the Gaussian model and verify its closed-form inverse.

    The coefficient matrix is SPD by construction, so it is inverted with
    a Cholesky factorization; the result must match the closed-form
    covariance to 1e-10 (scaled), which is re-checked here.
    """
    n = _validated(densities, L, alpha)
    m = n.size - 1
    eff = L * (1.0 - alpha)
    coeff = (np.eye(m) / n[:m] + 1.0 / n[m]) / eff
    target = eff * (np.diag(n[:m]) - np.outer(n[:m], n[:m]))
    cho = cho_factor(coeff)
    cov = cho_solve(cho, np.eye(m))
    cov = 0.5 * (cov + cov.T)
    scale = max(1.0, float(np.abs(target).max()))
    if np.abs(cov - target).max() > 1e-10 * scale:
        raise RuntimeError("coefficient matrix inverse drifted from the "
                           "closed-form covariance")
    # det A via the Cholesky factor
    logdet = 2.0 * float(np.log(np.diag(cho[0])).sum())
    normalizer = math.exp(0.5 * logdet - 0.5 * m * math.log(2.0 * math.pi))
    return GaussianModel(L * n[:m], coeff, cov, normalizer)


def gaussian_eigenvalue_approx(densities, L: float, alpha: float, index) -> float | np.ndarray:
    """Thermodynamic-limit eigenvalue at a support point (vectorized).

    index holds (L_1, ..., L_m) in the trailing axis; the value is the
    normal density with the closed-form covariance, evaluated at the
    centered deviations x_b = L_b - L n_b.
    """
    n = _validated(densities, L, alpha)
    m = n.size - 1
    idx = np.asarray(index, dtype=float)
    scalar = idx.ndim == 1
    idx = np.atleast_2d(idx)
    if idx.shape[-1] != m:
        raise ValidationError(f"index must have {m} components")
    x = idx - L * n[:m]
    eff = L * (1.0 - alpha)
    quad = (x * x / n[:m]).sum(axis=-1) + x.sum(axis=-1) ** 2 / n[m]
    pref = (2.0 * math.pi * eff) ** (-0.5 * m) / math.sqrt(np.prod(n))
    out = pref * np.exp(-quad / (2.0 * eff))
    return float(out[0]) if scalar else out


def hypergeometric_gaussian_approx(N_t: int, L_t: int, n: int, l) -> float | np.ndarray:
    """Laplace-de Moivre limit of the hypergeometric weight p_l.

    Normal density with mu = N a v and sigma^2 = N a (1-a) v (1-v), where
    a = L_t/N_t and v = n/N_t; degenerate ratios (0 or 1) are rejected.
    """
    if N_t < 1 or not (0 <= L_t <= N_t) or not (0 <= n <= N_t):
        raise ValidationError("need 0 <= n, L_t <= N_t")
    a = L_t / N_t
    v = n / N_t
    if a in (0.0, 1.0) or v in (0.0, 1.0):
        raise ValidationError("degenerate ratio gives zero variance")
    mu = N_t * a * v
    sigma2 = N_t * a * (1.0 - a) * v * (1.0 - v)
    larr = np.asarray(l, dtype=float)
    out = np.exp(-((larr - mu) ** 2) / (2.0 * sigma2)) / math.sqrt(2.0 * math.pi * sigma2)
    return float(out) if np.isscalar(l) else out

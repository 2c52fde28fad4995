"""Shared fixtures and independent oracles for the test suite."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from glmg import BlockSpec


def small_block_grid():
    """Deterministic grid of small blocks: exhaustive positive compositions
    for N up to 10, plus balanced / skewed / mixed compositions at larger N
    up to 40, for m = 1..3."""
    blocks = []
    for m in (1, 2, 3):
        parts = m + 1
        for n_sites in range(parts, 11):
            for comp in _positive_compositions(n_sites, parts):
                for block_size in _block_sizes(n_sites):
                    blocks.append(BlockSpec(n_sites, block_size, comp))
        for n_sites in (16, 24, 40):
            for comp in _selected_compositions(n_sites, parts):
                for block_size in _block_sizes(n_sites):
                    blocks.append(BlockSpec(n_sites, block_size, comp))
    return blocks


def _positive_compositions(total, parts):
    for cut in itertools.combinations(range(1, total), parts - 1):
        yield tuple(b - a for a, b in zip((0,) + cut, cut + (total,)))


def _selected_compositions(total, parts):
    base = total // parts
    rem = total - base * parts
    balanced = tuple(base + (1 if i < rem else 0) for i in range(parts))
    skewed = (total - (parts - 1),) + (1,) * (parts - 1)
    mixed = (total // 2,) + _nearly_even(total - total // 2, parts - 1)
    return {balanced, skewed, mixed}


def _nearly_even(total, parts):
    base = total // parts
    rem = total - base * parts
    return tuple(base + (1 if i < rem else 0) for i in range(parts))


def _block_sizes(n_sites):
    return sorted({0, 1, n_sites // 3, n_sites // 2, n_sites - 1, n_sites})


@pytest.fixture(scope="session")
def block_grid():
    return small_block_grid()


def exact_rational_spectrum(block: BlockSpec) -> dict:
    """Eigenvalues as exact fractions via big-integer binomials (N <= 60)."""
    assert block.N <= 60
    total = math.comb(block.N, block.L)
    na = block.magnon_numbers
    m = block.m
    out = {}
    ranges = [range(0, na[a] + 1) for a in range(m)]
    for idx in itertools.product(*ranges):
        last = block.L - sum(idx)
        if not 0 <= last <= na[m]:
            continue
        num = math.prod(math.comb(na[a], idx[a]) for a in range(m))
        num *= math.comb(na[m], last)
        out[idx] = Fraction(num, total)
    return out


def pauli_lmg_dense(n_sites, h):
    """Isotropic collective XX Hamiltonian from explicit Pauli products."""
    sx = np.array([[0, 1], [1, 0]], dtype=float)
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.array([[1, 0], [0, -1]], dtype=float)
    eye = np.eye(2)

    def site_op(op, i):
        mats = [eye] * n_sites
        mats[i] = op
        out = mats[0]
        for mat in mats[1:]:
            out = np.kron(out, mat)
        return out

    dim = 2 ** n_sites
    ham = np.zeros((dim, dim), dtype=complex)
    for i in range(n_sites):
        for j in range(i + 1, n_sites):
            ham -= (site_op(sx, i) @ site_op(sx, j)
                    + site_op(sy, i) @ site_op(sy, j)) / n_sites
    for i in range(n_sites):
        ham -= h * site_op(sz, i)
    assert np.abs(ham.imag).max() < 1e-12
    return ham.real


def brute_force_projection(m, c, h, resolution=None):
    """Independent minimizer of the weighted energy over the density simplex.

    Full-simplex grid pass at the stated resolution, one local box
    refinement, then an SLSQP polish of the incumbent (the energy is a
    convex quadratic, so local is global).  Returns (densities, distance).
    Never touches the projection code.
    """
    from scipy.optimize import minimize

    c = np.asarray(c, dtype=float)
    h = np.asarray(h, dtype=float)
    if resolution is None:
        resolution = {1: 1e-3, 2: 1e-3, 3: 1e-2}[m]

    def energy(free):
        last = 1.0 - free.sum(axis=-1)
        x = free - last[..., None]
        return ((x - h) ** 2 * c).sum(axis=-1)

    axes = [np.arange(0.0, 1.0 + resolution / 2, resolution)] * m
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, m)
    pts = pts[pts.sum(axis=1) <= 1.0 + 1e-12]
    best = pts[np.argmin(energy(pts))]

    width = 2.0 * resolution
    axes = [np.linspace(max(0.0, b - width), min(1.0, b + width), 41) for b in best]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, m)
    pts = pts[pts.sum(axis=1) <= 1.0 + 1e-15]
    best = pts[np.argmin(energy(pts))]

    res = minimize(lambda v: float(energy(v[None, :])[0]), best, method="SLSQP",
                   bounds=[(0.0, 1.0)] * m,
                   constraints=[{"type": "ineq", "fun": lambda v: 1.0 - v.sum()}],
                   options={"ftol": 1e-16, "maxiter": 500})
    best = np.clip(res.x, 0.0, 1.0)
    densities = np.append(best, max(0.0, 1.0 - best.sum()))
    return densities, math.sqrt(float(energy(best[None, :])[0]))

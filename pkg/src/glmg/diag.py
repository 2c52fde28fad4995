"""Small-N exact diagonalization: first-principles ground-state checks.

Builds the full Hamiltonian

    H = sum_{i<j} h_ij (1 - S_ij) + sum_a c_a (J^a - N h_a)^2

on the canonical product basis (site-major digits, internal state minor)
and verifies that the ground state is the predicted Dicke state.  Because
every Cartan total J^a commutes with H, the spectrum also decomposes over
magnon-number sectors: the permutation part is diagonalized per sector and
the Cartan part enters as a constant shift, which is the cheap route to
the full spectrum.  Permutation operators act by explicit index
relabeling, never by matrix products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ResourceCapError, ValidationError
from .model import (EXTERIOR, ModelSpec, densities_from_field, finite_magnon_numbers,
                    locate_field)
from .phase import project_to_simplex

DENSE_DIM_CAP = 4096
SECTOR_DIM_CAP = 20000

DEGENERACY_TOL = 1e-10


def _basis_digits(m: int, n_sites: int) -> np.ndarray:
    """Internal state of each site for every basis index (dim x N)."""
    dim = (m + 1) ** n_sites
    idx = np.arange(dim)
    digits = np.empty((dim, n_sites), dtype=np.int64)
    for site in range(n_sites - 1, -1, -1):
        digits[:, site] = idx % (m + 1)
        idx = idx // (m + 1)
    return digits


def _site_weights(m: int, n_sites: int) -> np.ndarray:
    return (m + 1) ** np.arange(n_sites - 1, -1, -1, dtype=np.int64)


def _cartan_shift(spec: ModelSpec, n_sites: int, counts: np.ndarray) -> np.ndarray:
    """sum_a c_a (N_a - N_{m+1} - N h_a)^2 for count rows (vectorized)."""
    m = spec.m
    shift = np.zeros(counts.shape[0] if counts.ndim == 2 else ())
    for a in range(m):
        j = counts[..., a] - counts[..., m]
        shift = shift + spec.cartan_couplings[a] * (j - n_sites * spec.field[a]) ** 2
    return shift


def build_hamiltonian(spec: ModelSpec, n_sites: int) -> np.ndarray:
    """Dense Hamiltonian on the full product basis.

    Capped at dimension 4096; larger systems should go through
    sector_spectrum instead.
    """
    m = spec.m
    dim = (m + 1) ** n_sites
    if dim > DENSE_DIM_CAP:
        raise ResourceCapError(
            f"dense dimension {dim} exceeds {DENSE_DIM_CAP}; "
            "use sector_spectrum for the spectrum")
    hmat = spec.coupling_matrix(n_sites)
    digits = _basis_digits(m, n_sites)
    weights = _site_weights(m, n_sites)
    rows = np.arange(dim)

    ham = np.zeros((dim, dim))
    for i, j in combinations(range(n_sites), 2):
        hij = hmat[i, j]
        if hij == 0.0:
            continue
        # swapping sites i and j permutes basis indices by a digit exchange
        swapped = rows + (digits[:, j] - digits[:, i]) * (weights[i] - weights[j])
        ham[rows, rows] += hij
        ham[rows, swapped] -= hij

    counts = np.stack([(digits == s).sum(axis=1) for s in range(m + 1)], axis=1)
    ham[rows, rows] += _cartan_shift(spec, n_sites, counts)
    return ham


def _sector_compositions(m: int, n_sites: int):
    """All magnon-number tuples (N_1, ..., N_{m+1}) summing to N, sorted."""
    def rec(remaining, parts_left):
        if parts_left == 1:
            yield (remaining,)
            return
        for first in range(remaining + 1):
            for rest in rec(remaining - first, parts_left - 1):
                yield (first,) + rest
    return sorted(rec(n_sites, m + 1))


def _multinomial(counts) -> int:
    total = sum(counts)
    out = 1
    for c in counts:
        out *= math.comb(total, c)
        total -= c
    return out


@dataclass(eq=False)
class SectorSpectrum:
    """Energies per magnon sector plus the global ground-state data."""

    sectors: dict[tuple[int, ...], np.ndarray]
    ground_energy: float
    ground_degeneracy: int
    ground_sector: tuple[int, ...]

    def all_energies(self) -> np.ndarray:
        return np.sort(np.concatenate(list(self.sectors.values())))


def sector_spectrum(spec: ModelSpec, n_sites: int) -> SectorSpectrum:
    """Full spectrum by per-sector diagonalization of the permutation part."""
    m = spec.m
    comps = _sector_compositions(m, n_sites)
    worst = max(_multinomial(c) for c in comps)
    if worst > SECTOR_DIM_CAP:
        raise ResourceCapError(
            f"largest sector has dimension {worst}, exceeding {SECTOR_DIM_CAP}")
    hmat = spec.coupling_matrix(n_sites)
    digits = _basis_digits(m, n_sites)
    weights = _site_weights(m, n_sites)
    counts = np.stack([(digits == s).sum(axis=1) for s in range(m + 1)], axis=1)
    codes = (digits * weights).sum(axis=1)

    sectors: dict[tuple[int, ...], np.ndarray] = {}
    for comp in comps:
        mask = np.all(counts == np.asarray(comp), axis=1)
        members = np.flatnonzero(mask)
        sec_digits = digits[members]
        sec_codes = codes[members]  # ascending: members come out sorted
        dim = members.size
        h0 = np.zeros((dim, dim))
        local = np.arange(dim)
        for i, j in combinations(range(n_sites), 2):
            hij = hmat[i, j]
            if hij == 0.0:
                continue
            swapped = sec_codes + (sec_digits[:, j] - sec_digits[:, i]) * (weights[i] - weights[j])
            cols = np.searchsorted(sec_codes, swapped)
            h0[local, local] += hij
            h0[local, cols] -= hij
        energies = np.linalg.eigvalsh(h0)
        energies = energies + float(_cartan_shift(spec, n_sites,
                                                  np.asarray(comp, dtype=float)[None, :])[0])
        energies.sort()
        sectors[comp] = energies

    ground_energy = min(float(e[0]) for e in sectors.values())
    ground_sector = next(c for c in comps
                         if sectors[c][0] < ground_energy + DEGENERACY_TOL)
    degeneracy = sum(int(np.count_nonzero(e < ground_energy + DEGENERACY_TOL))
                     for e in sectors.values())
    return SectorSpectrum(sectors, ground_energy, degeneracy, ground_sector)


@dataclass(frozen=True)
class GroundStateReport:
    """Outcome of the Dicke-ground-state verification."""

    is_dicke: bool
    overlap: float
    gap: float
    predicted_magnons: tuple[int, ...]
    degeneracy: int


def predicted_magnon_numbers(spec: ModelSpec, n_sites: int) -> tuple[int, ...]:
    """Magnon numbers of the predicted ground state at this size.

    Interior and boundary fields use the affine density map; exterior
    fields take the projected densities.
    """
    loc = locate_field(spec.m, spec.field)
    if loc.kind == EXTERIOR:
        densities = project_to_simplex(spec.m, spec.cartan_couplings, spec.field).densities
    else:
        densities = densities_from_field(spec.m, spec.field)
    return finite_magnon_numbers(densities, n_sites)


def ground_state_verify(spec: ModelSpec, n_sites: int) -> GroundStateReport:
    """Diagonalize densely and compare with the predicted Dicke state.

    A degenerate ground level (gap below 1e-10) reports is_dicke=False with
    the degeneracy rather than raising.
    """
    ham = build_hamiltonian(spec, n_sites)
    evals, evecs = np.linalg.eigh(ham)
    gap = float(evals[1] - evals[0])
    degeneracy = int(np.count_nonzero(evals < evals[0] + DEGENERACY_TOL))

    magnons = predicted_magnon_numbers(spec, n_sites)
    digits = _basis_digits(spec.m, n_sites)
    counts = np.stack([(digits == s).sum(axis=1) for s in range(spec.m + 1)], axis=1)
    members = np.flatnonzero(np.all(counts == np.asarray(magnons), axis=1))
    dicke = np.zeros(ham.shape[0])
    dicke[members] = 1.0 / math.sqrt(members.size)
    overlap = float(abs(dicke @ evecs[:, 0]))

    is_dicke = degeneracy == 1 and overlap >= 1.0 - 1e-9
    return GroundStateReport(is_dicke, overlap, gap, magnons, degeneracy)


def lmg_su2_energy(n_sites: int, h: float, S, M) -> float:
    """Closed-form isotropic su(2) level E(S, M) at unit coupling scale.

    E = -(2/N)(S(S+1) - M^2 - N/2) - 2 h M, with S running from N/2 down
    to its parity floor in integer steps and M in -S..S.
    """
    two_s = int(round(2 * S))
    two_m = int(round(2 * M))
    if not math.isclose(two_s, 2 * S, abs_tol=1e-12) or not math.isclose(two_m, 2 * M, abs_tol=1e-12):
        raise ValidationError("S and M must be integers or half-integers")
    if two_s < n_sites % 2 or two_s > n_sites or (two_s - n_sites) % 2 != 0:
        raise ValidationError(f"S out of range for N={n_sites}")
    if abs(two_m) > two_s or (two_s - two_m) % 2 != 0:
        raise ValidationError("M must run over -S, -S+1, ..., S")
    s = two_s / 2.0
    mm = two_m / 2.0
    return -(2.0 / n_sites) * (s * (s + 1.0) - mm * mm - n_sites / 2.0) - 2.0 * h * mm


def su2_multiplicity(n_sites: int, S) -> int:
    """Degeneracy of a total-spin-S multiplet of N spin-1/2 sites."""
    two_s = int(round(2 * S))
    if (two_s - n_sites) % 2 != 0 or two_s < 0 or two_s > n_sites:
        raise ValidationError(f"S out of range for N={n_sites}")
    k = (n_sites + two_s) // 2
    return math.comb(n_sites, k) - (math.comb(n_sites, k + 1) if k + 1 <= n_sites else 0)

"""su(m+1) collective spin models with a Dicke ground state.

The Hamiltonian combines a permutation two-body term, weighted by
nonnegative couplings h_ij, with quadratic Cartan terms c_a (J^a - N h_a)^2.
For magnetic fields h inside the weight simplex of the fundamental
representation the ground state is a Dicke state whose magnon densities are
a simple affine function of the field.  This module holds the model
definition, the weight-vector geometry, and the field <-> density maps.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ValidationError

# a density closer than this to 0 or 1 puts the field on the simplex boundary
BOUNDARY_TOL = 1e-10

INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"

_SCHEMES = ("constant", "nearest_neighbor", "haldane_shastry", "explicit")


class RoundingTieWarning(UserWarning):
    """Largest-remainder rounding hit an exact tie; the lowest index won."""


def _check_coupling_matrix(mat: np.ndarray) -> None:
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise ValidationError("coupling matrix must be square")
    if not np.all(np.isfinite(mat)):
        raise ValidationError("coupling matrix must be finite")
    if np.any(mat < 0):
        raise ValidationError("two-body couplings must be nonnegative")
    if not np.allclose(mat, mat.T, atol=0.0, rtol=0.0):
        raise ValidationError("coupling matrix must be symmetric")
    if np.any(np.diag(mat) != 0):
        raise ValidationError("coupling matrix must have zero diagonal")
    # positive couplings weight transpositions; they single out the symmetric
    # ground state only if they generate the full symmetric group, i.e. the
    # graph of positive bonds is connected
    graph = csr_matrix(mat > 0)
    ncomp, _ = connected_components(graph, directed=False)
    if ncomp != 1:
        raise ValidationError(
            "positive couplings must connect all sites "
            f"(graph has {ncomp} components)")


@dataclass(frozen=True)
class Coupling:
    """Two-body coupling scheme h_ij of the permutation term.

    Schemes: constant(value) for uniform all-to-all bonds,
    nearest_neighbor(values) for an open (len N-1) or periodic (len N)
    chain, haldane_shastry for (pi/N)^2 / sin^2(pi (i-j)/N), and
    explicit(matrix) for an arbitrary symmetric bond matrix.
    """

    scheme: str
    value: float | None = None
    values: tuple[float, ...] | None = None
    matrix: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        if self.scheme not in _SCHEMES:
            raise ValidationError(f"unknown coupling scheme {self.scheme!r}")
        if self.scheme == "constant":
            if self.value is None or not math.isfinite(self.value):
                raise ValidationError("constant coupling needs a finite value")
            if self.value <= 0:
                raise ValidationError(
                    "constant coupling must be positive (zero bonds disconnect the chain)")
        elif self.scheme == "nearest_neighbor":
            if not self.values:
                raise ValidationError("nearest-neighbor coupling needs bond values")
            vals = np.asarray(self.values, dtype=float)
            if not np.all(np.isfinite(vals)) or np.any(vals < 0):
                raise ValidationError("bond values must be finite and nonnegative")
        elif self.scheme == "explicit":
            if self.matrix is None:
                raise ValidationError("explicit coupling needs a matrix")
            _check_coupling_matrix(np.asarray(self.matrix, dtype=float))

    @classmethod
    def constant(cls, value: float) -> "Coupling":
        return cls("constant", value=float(value))

    @classmethod
    def nearest_neighbor(cls, values) -> "Coupling":
        return cls("nearest_neighbor", values=tuple(float(v) for v in values))

    @classmethod
    def haldane_shastry(cls) -> "Coupling":
        return cls("haldane_shastry")

    @classmethod
    def explicit(cls, matrix) -> "Coupling":
        mat = np.asarray(matrix, dtype=float)
        return cls("explicit", matrix=tuple(tuple(row) for row in mat))

    def matrix_for(self, n_sites: int) -> np.ndarray:
        """Full symmetric bond matrix for a chain of n_sites sites."""
        n = int(n_sites)
        if n < 1:
            raise ValidationError("need at least one site")
        if self.scheme == "constant":
            mat = np.full((n, n), self.value, dtype=float)
            np.fill_diagonal(mat, 0.0)
        elif self.scheme == "nearest_neighbor":
            vals = np.asarray(self.values, dtype=float)
            if vals.size not in (n - 1, n):
                raise ValidationError(
                    f"nearest-neighbor coupling needs {n-1} (open) or {n} "
                    f"(periodic) bond values, got {vals.size}")
            mat = np.zeros((n, n))
            for i in range(n - 1):
                mat[i, i + 1] = mat[i + 1, i] = vals[i]
            if vals.size == n:
                mat[0, n - 1] = mat[n - 1, 0] = vals[n - 1]
        elif self.scheme == "haldane_shastry":
            i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
            mat = np.zeros((n, n))
            off = i != j
            mat[off] = (np.pi / n) ** 2 / np.sin(np.pi * (i[off] - j[off]) / n) ** 2
        else:
            mat = np.asarray(self.matrix, dtype=float)
            if mat.shape != (n, n):
                raise ValidationError(
                    f"explicit coupling matrix is {mat.shape[0]}x{mat.shape[1]}, "
                    f"model has {n} sites")
        _check_coupling_matrix(mat)
        return mat


@dataclass(frozen=True)
class ModelSpec:
    """Full model definition.

    m is the number of Cartan directions (internal dimension m+1),
    cartan_couplings the m positive weights c_a, field the m magnetic field
    components h_a, coupling the two-body scheme, n_sites the optional
    chain length N.
    """

    m: int
    cartan_couplings: tuple[float, ...]
    field: tuple[float, ...]
    coupling: Coupling
    n_sites: int | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValidationError("internal dimension must be at least 2 (m >= 1)")
        object.__setattr__(self, "cartan_couplings",
                           tuple(float(c) for c in self.cartan_couplings))
        object.__setattr__(self, "field", tuple(float(h) for h in self.field))
        if len(self.cartan_couplings) != self.m:
            raise ValidationError(f"need {self.m} Cartan couplings")
        if len(self.field) != self.m:
            raise ValidationError(f"need {self.m} field components")
        if any(not math.isfinite(c) or c <= 0 for c in self.cartan_couplings):
            raise ValidationError("Cartan couplings must be positive and finite")
        if any(not math.isfinite(h) for h in self.field):
            raise ValidationError("field components must be finite")
        if self.n_sites is not None and self.n_sites < 1:
            raise ValidationError("n_sites must be positive")
        if self.coupling.scheme == "haldane_shastry" and self.n_sites is None:
            raise ValidationError("haldane_shastry coupling requires n_sites")
        # schemes that pin the chain length must agree with n_sites
        if self.n_sites is not None:
            self.coupling.matrix_for(self.n_sites)

    def coupling_matrix(self, n_sites: int | None = None) -> np.ndarray:
        n = n_sites if n_sites is not None else self.n_sites
        if n is None:
            raise ValidationError("chain length unknown: pass n_sites")
        if self.n_sites is not None and n != self.n_sites:
            raise ValidationError(
                f"requested {n} sites but the model fixes n_sites={self.n_sites}")
        return self.coupling.matrix_for(n)

    @classmethod
    def from_json(cls, text: str) -> "ModelSpec":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_file(cls, path) -> "ModelSpec":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        import jsonschema

        schema = json.loads(
            resources.files("glmg.schemas").joinpath("model.schema.json").read_text())
        try:
            jsonschema.validate(data, schema)
        except jsonschema.ValidationError as exc:
            raise ValidationError(f"model config: {exc.message}") from exc
        coup = data.get("coupling", {"scheme": "constant", "params": {"value": 1.0}})
        params = coup.get("params", {})
        scheme = coup["scheme"]
        if scheme == "constant":
            coupling = Coupling.constant(params["value"])
        elif scheme == "nearest_neighbor":
            coupling = Coupling.nearest_neighbor(params["values"])
        elif scheme == "haldane_shastry":
            coupling = Coupling.haldane_shastry()
        elif scheme == "explicit":
            coupling = Coupling.explicit(params["matrix"])
        else:
            raise ValidationError(f"unknown coupling scheme {scheme!r}")
        return cls(m=data["m"], cartan_couplings=tuple(data["c"]),
                   field=tuple(data["h"]), coupling=coupling,
                   n_sites=data.get("N"))


@dataclass(frozen=True)
class FieldLocation:
    """Where a field sits relative to the closed weight simplex.

    kind is one of "interior", "boundary", "exterior"; face is the set of
    density indices (1-based) that vanish on the boundary, empty otherwise.
    """

    kind: str
    face: frozenset[int] = frozenset()


def weight_vectors(m: int) -> np.ndarray:
    """The m+1 weight vectors of the fundamental representation, as rows.

    The first m are the canonical basis of R^m and the last is minus their
    sum, so the full set sums to zero.
    """
    if m < 1:
        raise ValidationError("degenerate internal space: m must be >= 1")
    return np.vstack([np.eye(m), -np.ones((1, m))])


def _raw_densities(m: int, h: np.ndarray) -> np.ndarray:
    base = (1.0 - h.sum()) / (m + 1)
    return np.append(h + base, base)


def _as_field(m: int, h) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(h, dtype=float))
    if arr.shape != (m,):
        raise ValidationError(f"field must have {m} components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("field components must be finite")
    return arr


def locate_field(m: int, h) -> FieldLocation:
    """Classify a field as interior / boundary / exterior to the simplex."""
    arr = _as_field(m, h)
    n = _raw_densities(m, arr)
    if np.any(n < -BOUNDARY_TOL) or np.any(n > 1.0 + BOUNDARY_TOL):
        return FieldLocation(EXTERIOR)
    near_edge = (n <= BOUNDARY_TOL) | (n >= 1.0 - BOUNDARY_TOL)
    if np.any(near_edge):
        face = frozenset(int(a) + 1 for a in np.flatnonzero(n <= BOUNDARY_TOL))
        return FieldLocation(BOUNDARY, face)
    return FieldLocation(INTERIOR)


def densities_from_field(m: int, h) -> np.ndarray:
    """Ground-state magnon densities for a field in the closed simplex.

    n_a = h_a + (1 - sum(h)) / (m+1) for a <= m and the last density is the
    common offset; together they satisfy n_a - n_{m+1} = h_a and sum to 1.
    Exterior fields are rejected: their densities come from the phase
    module's simplex projection instead.
    """
    arr = _as_field(m, h)
    loc = locate_field(m, arr)
    if loc.kind == EXTERIOR:
        raise ValidationError(
            "field lies outside the closed weight simplex; "
            "use phase.project_to_simplex")
    n = _raw_densities(m, arr)
    # boundary fields can land a hair outside [0, 1] in floating point
    np.clip(n, 0.0, 1.0, out=n)
    return n


def field_from_densities(densities) -> np.ndarray:
    """Inverse map: the field whose weight-space image is the given densities."""
    n = check_densities(densities)
    return n[:-1] - n[-1]


def check_densities(densities) -> np.ndarray:
    """Validate a magnon density vector: entries in [0, 1], unit sum."""
    n = np.atleast_1d(np.asarray(densities, dtype=float))
    if n.ndim != 1 or n.size < 2:
        raise ValidationError("need at least two density components")
    if np.any(n < -1e-12) or np.any(n > 1 + 1e-12):
        raise ValidationError("densities must lie in [0, 1]")
    if abs(n.sum() - 1.0) > 1e-12:
        raise ValidationError(f"densities must sum to 1, got {n.sum()!r}")
    return n


def finite_magnon_numbers(densities, n_sites: int) -> tuple[int, ...]:
    """Integer magnon numbers closest to n_a * N, summing exactly to N.

    Largest-remainder rounding: floor everything, then hand the missing
    units to the largest fractional parts, lowest index first on ties.
    Exact ties at the cutoff are reported with a RoundingTieWarning.
    """
    n = check_densities(densities)
    if n_sites < 1:
        raise ValidationError("n_sites must be positive")
    target = n * n_sites
    base = np.floor(target).astype(np.int64)
    remainder = target - base
    missing = int(n_sites - base.sum())
    if missing:
        order = np.argsort(-remainder, kind="stable")
        if missing < n.size and remainder[order[missing - 1]] - remainder[order[missing]] < 1e-12:
            warnings.warn(
                f"rounding tie at N={n_sites} for densities {n.tolist()}; "
                "lowest index wins", RoundingTieWarning, stacklevel=2)
        base[order[:missing]] += 1
    return tuple(int(v) for v in base)

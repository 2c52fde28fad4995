"""Ground-state phase solver over the weight simplex.

The ground-state magnon densities minimize the weighted quadratic

    eps(n) = sum_a c_a (x_a(n) - h_a)^2,   x(n) = sum_s n_s mu_s,

over the density simplex, i.e. they are the weighted projection of the
field h onto the convex hull of the weight vectors.  The projection is
solved exactly by enumerating all faces of the hull (2^(m+1) - 1 weighted
least-squares subproblems), which is cheap for any practical m.  The
symmetric su(3) case additionally gets the closed-form region classifier
(triangle / half-strips / wedges) and the piecewise entropy formula.
"""

from __future__ import annotations

import itertools
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .entropy import (AsymptoticInput, EntropyValue, FLAG_NEGATIVE, FLAG_OK,
                      vn_asymptotic)
from .errors import ValidationError
from .model import weight_vectors

# barycentric coordinates may undershoot zero by this much and still count
# as feasible; ties between nested faces resolve to the smaller face
FEAS_TOL = 1e-12

# proximity to a region boundary worth flagging
BOUNDARY_PROX = 1e-8

_MAX_M = 20  # face enumeration is 2^(m+1)-1 subproblems


class BoundaryProximityWarning(UserWarning):
    """The field sits within tolerance of a phase boundary."""


@dataclass(eq=False)
class PhaseResult:
    """Projection outcome: densities on the minimizing face.

    vanishing and active_face are 1-based index sets, k = |vanishing|,
    distance the weighted distance from h to the simplex (zero iff h lies
    inside it).
    """

    densities: np.ndarray
    vanishing: frozenset[int]
    k: int
    active_face: frozenset[int]
    distance: float


def _weighted_face_minimizer(mu, face, weights, h):
    """Least-squares minimizer of the weighted distance on a face's affine hull.

    Returns (barycentric coords over face vertices, squared distance).
    """
    verts = mu[list(face)]
    base = verts[0]
    if len(face) == 1:
        diff = base - h
        return np.ones(1), float((weights * diff * diff).sum())
    d = (verts[1:] - base).T                       # m x (r-1)
    wd = weights[:, None] * d
    rhs = d.T @ (weights * (h - base))
    t = np.linalg.solve(d.T @ wd, rhs)
    bary = np.concatenate(([1.0 - t.sum()], t))
    diff = base + d @ t - h
    return bary, float((weights * diff * diff).sum())


def _verify_kkt(mu, face, weights, h, x):
    """Stationarity and outward-pointing checks on the selected face."""
    residual = weights * (h - x)
    scale = max(1.0, float(np.abs(residual).max()))
    base = mu[face[0]]
    for s in face[1:]:
        if abs((mu[s] - base) @ residual) > 1e-8 * scale:
            raise RuntimeError("projection residual not orthogonal to the active face")
    for v in range(mu.shape[0]):
        if v in face:
            continue
        if (mu[v] - x) @ residual > 1e-8 * scale:
            raise RuntimeError("projection residual points into a dropped vertex")


def project_to_simplex(m: int, c, h) -> PhaseResult:
    """Weighted projection of the field onto the weight simplex.

    Enumerates every face in order of increasing dimension, keeps the
    feasible candidates and returns the closest one; equal distances
    resolve to the lower-dimensional face, matching the closed-face
    convention for boundary points.
    """
    if m < 1:
        raise ValidationError("m must be at least 1")
    if m > _MAX_M:
        raise ValidationError(f"face enumeration capped at m = {_MAX_M}")
    weights = np.asarray(c, dtype=float)
    if weights.shape != (m,) or np.any(weights <= 0) or not np.all(np.isfinite(weights)):
        raise ValidationError(f"need {m} positive finite couplings")
    hvec = np.asarray(h, dtype=float)
    if hvec.shape != (m,) or not np.all(np.isfinite(hvec)):
        raise ValidationError(f"need {m} finite field components")

    mu = weight_vectors(m)
    best = None  # (dist2, face, bary)
    for size in range(1, m + 2):
        for face in itertools.combinations(range(m + 1), size):
            bary, dist2 = _weighted_face_minimizer(mu, face, weights, hvec)
            if np.any(bary < -FEAS_TOL):
                continue
            if best is None or dist2 < best[0] - FEAS_TOL * max(1.0, best[0]):
                best = (dist2, face, bary)
    dist2, face, bary = best

    bary = np.maximum(bary, 0.0)
    keep = bary > 0.0
    face = tuple(v for v, k in zip(face, keep) if k)
    bary = bary[keep]
    bary /= bary.sum()

    densities = np.zeros(m + 1)
    densities[list(face)] = bary
    x = bary @ mu[list(face)]
    _verify_kkt(mu, face, weights, hvec, x)

    active = frozenset(v + 1 for v in face)
    vanishing = frozenset(range(1, m + 2)) - active
    return PhaseResult(densities, vanishing, len(vanishing), active,
                       math.sqrt(max(dist2, 0.0)))


@dataclass(frozen=True)
class Su3Region:
    """Region of the su(3) field plane: the triangle interior, a
    half-strip R_bc off edge (b, c), a wedge W_a at vertex a, or a
    boundary between them (detail says which)."""

    label: str
    detail: str | None = None

    @property
    def implied_k(self) -> int | None:
        if self.label == "interior":
            return 0
        if self.label.startswith("R"):
            return 1
        if self.label.startswith("W"):
            return 2
        return None


def _require_symmetric_su3(c) -> None:
    arr = np.asarray(c, dtype=float)
    if arr.shape != (2,) or np.any(arr <= 0):
        raise ValidationError("su(3) case needs two positive couplings")
    if abs(arr[0] - arr[1]) > 1e-12 * max(arr):
        raise ValidationError(
            "closed-form su(3) geometry assumes c1 = c2; "
            "use project_to_simplex for asymmetric couplings")


def su3_region(h, c=(1.0, 1.0)) -> Su3Region:
    """Closed-form region classifier for the symmetric su(3) model.

    Works purely from the triangle geometry (no projection call), so it
    serves as an independent cross-check of the face solver.
    """
    _require_symmetric_su3(c)
    hvec = np.asarray(h, dtype=float)
    if hvec.shape != (2,) or not np.all(np.isfinite(hvec)):
        raise ValidationError("need a finite 2-component field")
    mu = weight_vectors(2)

    # densities of the affine parametrization; nonnegative inside the triangle
    n1 = (1.0 + 2.0 * hvec[0] - hvec[1]) / 3.0
    n2 = (1.0 + 2.0 * hvec[1] - hvec[0]) / 3.0
    n3 = (1.0 - hvec[0] - hvec[1]) / 3.0
    dens = np.array([n1, n2, n3])
    if np.all(dens >= BOUNDARY_PROX):
        return Su3Region("interior")
    if np.all(dens >= -BOUNDARY_PROX):
        low = [a + 1 for a in range(3) if dens[a] < BOUNDARY_PROX]
        if len(low) >= 2:
            vertex = ({1, 2, 3} - set(low)).pop()
            return Su3Region("boundary", f"vertex mu{vertex}")
        edge = "".join(str(b) for b in sorted({1, 2, 3} - set(low)))
        return Su3Region("boundary", f"edge L{edge}")

    # exterior: wedge test first (both adjacent edge directions point away)
    for a in range(3):
        b, cc = [v for v in range(3) if v != a]
        da = hvec - mu[a]
        pb = da @ (mu[b] - mu[a])
        pc = da @ (mu[cc] - mu[a])
        eb = np.linalg.norm(mu[b] - mu[a])
        ec = np.linalg.norm(mu[cc] - mu[a])
        if pb <= BOUNDARY_PROX * eb and pc <= BOUNDARY_PROX * ec:
            if pb > -BOUNDARY_PROX * eb or pc > -BOUNDARY_PROX * ec:
                other = b + 1 if pb > -BOUNDARY_PROX * eb else cc + 1
                edge = "".join(str(v) for v in sorted((a + 1, other)))
                return Su3Region("boundary", f"W{a + 1}|R{edge}")
            return Su3Region(f"W{a + 1}")

    # otherwise exactly one half-strip: foot of the perpendicular lands
    # strictly inside the edge on the outward side
    for b, cc in ((0, 1), (0, 2), (1, 2)):
        a = ({0, 1, 2} - {b, cc}).pop()
        e = mu[b] - mu[cc]
        t = (hvec - mu[cc]) @ e / (e @ e)
        foot = mu[cc] + t * e
        if 0.0 < t < 1.0 and (hvec - foot) @ (foot - mu[a]) > 0.0:
            edge = "".join(str(v) for v in sorted((b + 1, cc + 1)))
            margin = min(t, 1.0 - t) * np.linalg.norm(e)
            if margin < BOUNDARY_PROX:
                side = b + 1 if 1.0 - t < t else cc + 1
                return Su3Region("boundary", f"W{side}|R{edge}")
            return Su3Region(f"R{edge}")
    raise RuntimeError(f"unclassifiable field {hvec}")  # pragma: no cover


def su3_entropy_piecewise(h, L: float, alpha: float = 0.0, c=(1.0, 1.0)):
    """Closed-form von Neumann entropy of the symmetric su(3) model.

    Five branches: the interior formula, one per half-strip, and zero on
    the wedges, with S0 = ln(2 pi e L (1-alpha)).  On a region boundary the
    value of the face the projection selects is reported and a proximity
    warning is raised.
    """
    _require_symmetric_su3(c)
    hvec = np.asarray(h, dtype=float)
    region = su3_region(hvec, c)
    label = region.label
    if label == "boundary":
        warnings.warn(f"field {hvec.tolist()} is within {BOUNDARY_PROX} of a "
                      f"phase boundary ({region.detail})", BoundaryProximityWarning,
                      stacklevel=2)
        res = project_to_simplex(2, c, hvec)
        label = {0: "interior", 1: "R", 2: "W"}[res.k]
        if label == "R":
            label = "R" + "".join(str(v) for v in sorted(res.active_face))
        elif label == "W":
            label = "W" + str(next(iter(res.active_face)))

    s0 = math.log(2.0 * math.pi * math.e * L * (1.0 - alpha))
    h1, h2 = float(hvec[0]), float(hvec[1])
    if label == "interior":
        val = (s0 - 1.5 * math.log(3.0)
               + 0.5 * (math.log(1.0 + 2.0 * h1 - h2)
                        + math.log(1.0 - h1 + 2.0 * h2)
                        + math.log(1.0 - h1 - h2)))
    elif label == "R12":
        val = 0.5 * (s0 + math.log(1.0 - (h1 - h2) ** 2) - 2.0 * math.log(2.0))
    elif label == "R13":
        val = 0.5 * (s0 - 2.0 * math.log(5.0)
                     + math.log(3.0 + 2.0 * h1 + h2) + math.log(2.0 - 2.0 * h1 - h2))
    elif label == "R23":
        val = 0.5 * (s0 - 2.0 * math.log(5.0)
                     + math.log(3.0 + h1 + 2.0 * h2) + math.log(2.0 - h1 - 2.0 * h2))
    else:  # wedges: a single magnon species, no entanglement
        val = 0.0
    return EntropyValue(val, FLAG_NEGATIVE if val < 0 else FLAG_OK)


def entropy_at_field(m: int, c, h, L: float, alpha: float = 0.0):
    """Projection + asymptotic entropy for one field point.

    Returns (PhaseResult, entropy value).  A fully polarized phase
    (k = m) carries zero entropy.
    """
    res = project_to_simplex(m, c, h)
    if res.k == m:
        return res, 0.0
    nz = res.densities[res.densities > 0.0]
    inp = AsymptoticInput(m - res.k, tuple(nz), L, alpha)
    return res, vn_asymptotic(inp).value


def grid_axis(lo: float, hi: float, step: float) -> np.ndarray:
    """Inclusive axis lo, lo+step, ..., hi (endpoint kept within roundoff)."""
    if step <= 0 or hi < lo:
        raise ValidationError("need step > 0 and hi >= lo")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def default_threads() -> int:
    env = os.environ.get("GLMG_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"GLMG_THREADS must be an integer, got {env!r}")
    return 1


def phase_scan(axes, L: float, alpha: float, c, threads: int | None = None) -> np.ndarray:
    """Phase and entropy table over a rectangular field grid.

    axes is one (lo, hi, step) triple applied to every field component or a
    sequence of per-axis 1-D arrays.  Rows are emitted in row-major order
    (first axis slowest); columns are h_1..h_m, k, n_1..n_{m+1}, S.
    Row blocks may be evaluated on a thread pool (GLMG_THREADS); assembly
    order is deterministic either way.
    """
    cvec = np.asarray(c, dtype=float)
    m = cvec.size
    if isinstance(axes, tuple) and len(axes) == 3 and np.isscalar(axes[0]):
        axes = [grid_axis(*axes)] * m
    axes = [np.asarray(ax, dtype=float) for ax in axes]
    if len(axes) != m:
        raise ValidationError(f"need {m} grid axes for {m} field components")
    points = np.array(list(itertools.product(*axes)))

    def rows_for(chunk):
        out = np.empty((chunk.shape[0], 2 * m + 3))
        for i, hv in enumerate(chunk):
            res, s = entropy_at_field(m, cvec, hv, L, alpha)
            out[i, :m] = hv
            out[i, m] = res.k
            out[i, m + 1:2 * m + 2] = res.densities
            out[i, 2 * m + 2] = s
        return out

    nthreads = threads if threads is not None else default_threads()
    if nthreads <= 1 or points.shape[0] < 2 * nthreads:
        return rows_for(points)
    chunks = np.array_split(points, nthreads)
    with ThreadPoolExecutor(max_workers=nthreads) as pool:
        parts = list(pool.map(rows_for, chunks))
    return np.vstack(parts)


def write_scan_csv(rows: np.ndarray, m: int, fh) -> None:
    """Scan rows as 'h1,...,hm,k,n1,...,n{m+1},S' with 12 significant digits."""
    header = ([f"h{a+1}" for a in range(m)] + ["k"]
              + [f"n{a+1}" for a in range(m + 1)] + ["S"])
    fh.write(",".join(header) + "\n")
    for row in rows:
        cells = [f"{v:.12g}" for v in row[:m]]
        cells.append(str(int(row[m])))
        cells.extend(f"{v:.12g}" for v in row[m + 1:])
        fh.write(",".join(cells) + "\n")

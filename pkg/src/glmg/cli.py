"""Command-line front end.

Subcommands: entropy, spectrum, phase, scan, diag, fig-relerr, fig-surface.
All outputs are deterministic: fixed row order and fixed float formatting,
so identical configurations produce byte-identical files.  Exit codes:
0 success, 2 validation failure, 3 resource cap.  The fig-* commands write
a rendered figure next to the delimited output unless --no-plot is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import entropy as ent
from . import phase, rdm
from .diag import ground_state_verify, sector_spectrum, DENSE_DIM_CAP
from .errors import ResourceCapError, ValidationError
from .model import (Coupling, EXTERIOR, ModelSpec, densities_from_field,
                    finite_magnon_numbers, locate_field)


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok != "")
    except ValueError:
        raise ValidationError(f"expected a comma-separated number list, got {text!r}")


def _grid(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"grid spec must be min:max:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise ValidationError(f"grid spec must be numeric, got {text!r}")
    return lo, hi, step


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", metavar="FILE", help="JSON model configuration")
    common.add_argument("--m", type=int, help="number of Cartan directions")
    common.add_argument("--c", type=_floats, help="Cartan couplings, comma list")
    common.add_argument("--h", type=_floats, help="magnetic field, comma list")
    common.add_argument("--N", type=int, help="number of sites")
    common.add_argument("--L", type=float, help="block size")
    common.add_argument("--alpha", type=float, help="block fraction L/N")
    common.add_argument("--q", type=_floats, default=(2.0,),
                        help="Renyi/Tsallis orders, comma list (default 2)")
    common.add_argument("--grid", type=_grid, metavar="MIN:MAX:STEP",
                        help="field grid specification")
    common.add_argument("--out", metavar="FILE", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(prog="glmg",
                                     description="Dicke-state entanglement entropies and "
                                                 "phases of generalized su(m+1) LMG models")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("entropy", parents=[common],
                   help="exact and/or asymptotic entropies of one block")
    sub.add_parser("spectrum", parents=[common], help="RDM eigenvalue table")
    sub.add_parser("phase", parents=[common], help="phase of one field point")
    sub.add_parser("scan", parents=[common], help="phase + entropy over a field grid")
    sub.add_parser("diag", parents=[common],
                   help="exact diagonalization: sector spectrum and ground-state check")
    for name, desc in (("fig-relerr", "asymptotic-vs-exact entropy error sweep"),
                       ("fig-surface", "su(3) entropy surface data")):
        p = sub.add_parser(name, parents=[common], help=desc)
        p.add_argument("--no-plot", action="store_true",
                       help="write only the delimited output")
    return parser


def _load_model(args, default_m=None, default_h=None, default_c=None) -> ModelSpec:
    if args.model:
        spec = ModelSpec.from_file(args.model)
        if args.N is not None and spec.n_sites not in (None, args.N):
            raise ValidationError("--N conflicts with the model file's N")
        return spec
    m = args.m if args.m is not None else default_m
    if m is None:
        raise ValidationError("give --model FILE or --m")
    h = args.h if args.h is not None else (default_h if default_h is not None else (0.0,) * m)
    c = args.c if args.c is not None else (default_c if default_c is not None else (1.0,) * m)
    return ModelSpec(m=m, cartan_couplings=tuple(c), field=tuple(h),
                     coupling=Coupling.constant(1.0), n_sites=args.N)


def _ground_densities(spec: ModelSpec) -> np.ndarray:
    if locate_field(spec.m, spec.field).kind == EXTERIOR:
        return phase.project_to_simplex(spec.m, spec.cartan_couplings, spec.field).densities
    return densities_from_field(spec.m, spec.field)


@contextmanager
def _open_out(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _write_json(payload, fh) -> None:
    json.dump(payload, fh, indent=1, sort_keys=True)
    fh.write("\n")


def _block_for(spec: ModelSpec, n_sites: int, block_size: int) -> rdm.BlockSpec:
    densities = _ground_densities(spec)
    magnons = finite_magnon_numbers(densities, n_sites)
    return rdm.BlockSpec(n_sites, block_size, magnons)


def cmd_entropy(args) -> int:
    spec = _load_model(args)
    if args.L is None:
        raise ValidationError("entropy needs --L")
    if any(q <= 0 for q in args.q):
        raise ValidationError("entropy orders must be positive")
    n_sites = args.N if args.N is not None else spec.n_sites
    if n_sites is None and args.alpha is None:
        raise ValidationError("give --N for exact values and/or --alpha for asymptotics")

    rows = []
    if n_sites is not None:
        block = _block_for(spec, n_sites, int(args.L))
        spectrum = rdm.rdm_spectrum(block)
        rows.append(("von_neumann", "exact", 1.0, ent.entropy_exact(spectrum), "ok"))
        for q in args.q:
            rows.append(("renyi", "exact", q, ent.renyi_exact(spectrum, q), "ok"))
            rows.append(("tsallis", "exact", q, ent.tsallis_exact(spectrum, q), "ok"))
    if args.alpha is not None:
        densities = _ground_densities(spec)
        nz = densities[densities > 0.0]
        k = spec.m + 1 - nz.size
        if k == spec.m:
            rows.append(("von_neumann", "asymptotic", 1.0, 0.0, "ok"))
        else:
            inp = ent.AsymptoticInput(spec.m - k, tuple(nz), args.L, args.alpha)
            s = ent.vn_asymptotic(inp)
            rows.append(("von_neumann", "asymptotic", 1.0, s.value, s.flag))
            for q in args.q:
                r = ent.renyi_asymptotic(inp, q)
                t = ent.tsallis_asymptotic(inp, q)
                rows.append(("renyi", "asymptotic", q, r.value, r.flag))
                rows.append(("tsallis", "asymptotic", q, t.value, t.flag))

    with _open_out(args.out) as fh:
        if args.format == "json":
            payload = {"command": "entropy",
                       "context": {"m": spec.m, "L": args.L, "N": n_sites,
                                   "alpha": args.alpha,
                                   "densities": [float(v) for v in _ground_densities(spec)]},
                       "rows": [{"quantity": qty, "mode": mode, "q": q,
                                 "value": val, "flag": flag}
                                for qty, mode, q, val, flag in rows]}
            _write_json(payload, fh)
        else:
            fh.write("quantity,mode,q,value,flag\n")
            for qty, mode, q, val, flag in rows:
                fh.write(f"{qty},{mode},{q!r},{val!r},{flag}\n")
    return 0


def cmd_spectrum(args) -> int:
    spec = _load_model(args)
    n_sites = args.N if args.N is not None else spec.n_sites
    if n_sites is None or args.L is None:
        raise ValidationError("spectrum needs --N and --L")
    block = _block_for(spec, n_sites, int(args.L))
    spectrum = rdm.rdm_spectrum(block)
    with _open_out(args.out) as fh:
        if args.format == "json":
            payload = {"command": "spectrum",
                       "block": {"N": block.N, "L": block.L,
                                 "magnon_numbers": list(block.magnon_numbers)},
                       "entries": [{"index": [int(v) for v in row], "lambda": float(val)}
                                   for row, val in zip(spectrum.indices, spectrum.values)]}
            _write_json(payload, fh)
        else:
            rdm.write_spectrum_csv(spectrum, fh)
    return 0


def cmd_phase(args) -> int:
    spec = _load_model(args)
    res = phase.project_to_simplex(spec.m, spec.cartan_couplings, spec.field)
    with _open_out(args.out) as fh:
        if args.format == "json":
            payload = {"command": "phase",
                       "field": list(spec.field),
                       "k": res.k,
                       "densities": [float(v) for v in res.densities],
                       "vanishing": sorted(res.vanishing),
                       "active_face": sorted(res.active_face),
                       "distance": res.distance}
            _write_json(payload, fh)
        else:
            m = spec.m
            head = [f"h{a+1}" for a in range(m)] + ["k"] \
                + [f"n{a+1}" for a in range(m + 1)] + ["distance"]
            fh.write(",".join(head) + "\n")
            cells = [f"{v:.12g}" for v in spec.field] + [str(res.k)] \
                + [f"{v:.12g}" for v in res.densities] + [f"{res.distance:.12g}"]
            fh.write(",".join(cells) + "\n")
    return 0


def _scan_rows(args, spec) -> np.ndarray:
    if args.L is None:
        raise ValidationError("scan needs --L")
    alpha = args.alpha if args.alpha is not None else 0.0
    grid = args.grid if args.grid is not None else (-2.0, 2.0, 0.05)
    return phase.phase_scan(grid, args.L, alpha, spec.cartan_couplings)


def _emit_table(args, command, columns, rows, fmt_csv) -> None:
    with _open_out(args.out) as fh:
        if args.format == "json":
            payload = {"command": command, "columns": columns,
                       "rows": [[float(v) for v in row] for row in rows]}
            _write_json(payload, fh)
        else:
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(fmt_csv(row) + "\n")


def cmd_scan(args) -> int:
    spec = _load_model(args)
    rows = _scan_rows(args, spec)
    m = spec.m
    columns = ([f"h{a+1}" for a in range(m)] + ["k"]
               + [f"n{a+1}" for a in range(m + 1)] + ["S"])

    def fmt(row):
        cells = [f"{v:.12g}" for v in row[:m]] + [str(int(row[m]))]
        cells += [f"{v:.12g}" for v in row[m + 1:]]
        return ",".join(cells)

    _emit_table(args, "scan", columns, rows, fmt)
    return 0


def cmd_diag(args) -> int:
    spec = _load_model(args)
    n_sites = args.N if args.N is not None else spec.n_sites
    if n_sites is None:
        raise ValidationError("diag needs --N")
    if args.format == "csv" and args.out is not None and args.out.endswith(".csv"):
        raise ValidationError("diag emits JSON; use --format json")
    sectors = sector_spectrum(spec, n_sites)
    payload = {"command": "diag",
               "sectors": [{"magnons": list(comp), "energies": [float(e) for e in energies]}
                           for comp, energies in sorted(sectors.sectors.items())],
               "ground_energy": sectors.ground_energy,
               "ground_sector": list(sectors.ground_sector),
               "ground_degeneracy": sectors.ground_degeneracy}
    if (spec.m + 1) ** n_sites <= DENSE_DIM_CAP:
        report = ground_state_verify(spec, n_sites)
        payload["ground_state"] = {"is_dicke": report.is_dicke,
                                   "overlap": report.overlap,
                                   "gap": report.gap,
                                   "predicted_magnons": list(report.predicted_magnons),
                                   "degeneracy": report.degeneracy}
    with _open_out(args.out) as fh:
        _write_json(payload, fh)
    return 0


def cmd_fig_relerr(args) -> int:
    spec = _load_model(args, default_m=2, default_h=(0.2, 0.2))
    alpha = args.alpha if args.alpha is not None else 0.5
    if not 0.0 < alpha < 1.0:
        raise ValidationError("fig-relerr needs 0 < alpha < 1 to size the chain")
    if args.L is not None:
        block_sizes = [int(args.L)]
    else:
        lo, hi, step = args.grid if args.grid is not None else (50.0, 1000.0, 10.0)
        block_sizes = [int(v) for v in phase.grid_axis(lo, hi, step)]

    densities = _ground_densities(spec)
    nz = densities[densities > 0.0]
    m_eff = nz.size - 1
    if m_eff < 1:
        raise ValidationError("field gives a fully polarized state; no entropy to compare")
    rows = []
    for L in block_sizes:
        n_sites = int(round(L / alpha))
        magnons = finite_magnon_numbers(densities, n_sites)
        spectrum = rdm.rdm_spectrum(rdm.BlockSpec(n_sites, L, magnons))
        s_exact = ent.entropy_exact(spectrum)
        s_asym = ent.vn_asymptotic(ent.AsymptoticInput(m_eff, tuple(nz), L, alpha)).value
        rows.append((L, s_exact, s_asym, abs(s_asym - s_exact) / s_exact))

    columns = ["L", "S_exact", "S_asym", "rel_error"]
    _emit_table(args, "fig-relerr", columns, rows,
                lambda row: f"{int(row[0])},{row[1]!r},{row[2]!r},{row[3]!r}")
    if args.out and not args.no_plot:
        from .figures import save_relerr_figure
        arr = np.asarray(rows)
        save_relerr_figure(arr[:, 0], arr[:, 3], Path(args.out).with_suffix(".png"))
    return 0


def cmd_fig_surface(args) -> int:
    spec = _load_model(args, default_m=2, default_c=(1.0, 1.0))
    if spec.m != 2:
        raise ValidationError("the entropy surface is a two-field report")
    if args.L is None:
        args = argparse.Namespace(**{**vars(args), "L": 1000.0})
    rows = _scan_rows(args, spec)
    m = spec.m
    columns = ([f"h{a+1}" for a in range(m)] + ["k"]
               + [f"n{a+1}" for a in range(m + 1)] + ["S"])

    def fmt(row):
        cells = [f"{v:.12g}" for v in row[:m]] + [str(int(row[m]))]
        cells += [f"{v:.12g}" for v in row[m + 1:]]
        return ",".join(cells)

    _emit_table(args, "fig-surface", columns, rows, fmt)
    if args.out and not args.no_plot:
        from .figures import save_surface_figure
        save_surface_figure(rows, m, Path(args.out).with_suffix(".png"))
    return 0


_COMMANDS = {
    "entropy": cmd_entropy,
    "spectrum": cmd_spectrum,
    "phase": cmd_phase,
    "scan": cmd_scan,
    "diag": cmd_diag,
    "fig-relerr": cmd_fig_relerr,
    "fig-surface": cmd_fig_surface,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValidationError, ValueError) as exc:
        print(f"glmg: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"glmg: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

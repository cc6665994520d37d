"""Command-line entry point: ``qrm-spectra {spectrum,crossings,figure}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import scan
from .params import Method, ModelParams


def _methods(text: str) -> list[Method]:
    try:
        return [Method.parse(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _pairs(text: str) -> list[int]:
    if "-" in text:
        lo, hi = text.split("-", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qrm-spectra",
        description="Quantum Rabi model spectra: exact diagonalization, AA/GAA/GRWA approximations, Juddian points.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--omega", type=float, default=1.0, help="oscillator frequency")
        sp.add_argument("--out", default="-", help="output file, '-' for stdout")
        sp.add_argument("--json", action="store_true", help="write JSON instead of CSV")

    s = sub.add_parser("spectrum", help="scan the spectrum over g or delta",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    common(s)
    s.add_argument("--axis", choices=("g", "delta"), default="g", help="scanned parameter")
    s.add_argument("--range", dest="grid", default="0:2:201", help="grid as a:b:points (or a single value)")
    s.add_argument("--delta", type=float, default=1.0, help="qubit splitting (ignored when --axis delta)")
    s.add_argument("--g", type=float, default=0.0, help="coupling (ignored when --axis g)")
    s.add_argument("--levels", type=int, default=12, help="number of lowest levels per method")
    s.add_argument("--pair", type=int, default=None, help="report only this level pair")
    s.add_argument("--methods", type=_methods, default=_methods("EXACT,AA,GAA_K"),
                   help="comma list from AA,GAA_K,GAA_L,GRWA,GRWA_GAA,EXACT")
    s.add_argument("--jobs", type=int, default=1, help="worker processes (QRM_JOBS overrides)")
    s.add_argument("--metrics", action="store_true", help="print error metrics vs EXACT to stderr")

    c = sub.add_parser("crossings", help="Juddian points of one or more level pairs",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    common(c)
    c.add_argument("--n", type=_pairs, default=[2], help="pair index or inclusive range like 0-5")
    c.add_argument("--delta", type=float, default=1.2, help="qubit splitting")
    c.add_argument("--refine-exact", action="store_true", help="attach exact-diagonalization gap at each root")

    f = sub.add_parser("figure", help="emit figure datasets",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    f.add_argument("figure_id", choices=(*scan.FIGURE_IDS, "all"))
    f.add_argument("--out", required=True, help="output CSV (a directory when figure_id is 'all')")
    f.add_argument("--levels", type=int, default=None,
                   help="override the level count (defaults: 12, or 30 for 3c; figure 4 is pair n=5)")
    f.add_argument("--jobs", type=int, default=1, help="worker processes (QRM_JOBS overrides)")
    return p


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _cmd_spectrum(args) -> None:
    fixed = ModelParams(delta=args.delta, omega=args.omega, g=args.g)
    req = scan.ScanRequest(args.axis, scan.parse_range(args.grid), fixed, args.methods, args.levels, args.pair)
    result = scan.run_scan(req, args.jobs)
    fh, close = _open_out(args.out)
    try:
        if args.json:
            scan.write_json(result, fh)
        else:
            scan.write_csv(result, fh)
    finally:
        if close:
            fh.close()
    if args.metrics:
        for m, v in result.metrics.items():
            print(f"{m.value}: max_abs={v['max_abs']:.3e} rms={v['rms']:.3e}", file=sys.stderr)


def _cmd_crossings(args) -> None:
    rows = scan.report_crossings(args.n, args.delta, args.omega, args.refine_exact)
    fh, close = _open_out(args.out)
    try:
        if args.json:
            json.dump([r.__dict__ for r in rows], fh, indent=1)
            fh.write("\n")
        else:
            scan.write_crossings_csv(rows, fh)
    finally:
        if close:
            fh.close()


def _cmd_figure(args) -> None:
    if args.figure_id == "all":
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for fid in scan.FIGURE_IDS:
            scan.emit_figure_data(fid, out / f"fig{fid}.csv", args.levels, args.jobs)
    else:
        scan.emit_figure_data(args.figure_id, args.out, args.levels, args.jobs)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"spectrum": _cmd_spectrum, "crossings": _cmd_crossings, "figure": _cmd_figure}
    try:
        handlers[args.command](args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"qrm-spectra: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Parameter scans over g or delta, error metrics, crossing reports and figure data."""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .approx import approx_levels, pair_spectrum, PAIR_METHODS
from .crossings import find_crossings
from .exact import ConvergenceError, Parity, exact_spectrum, opposite_parity_gap
from .params import Method, ModelParams

MAX_LEVELS = 40
EXACT_TOL = 1e-10
CSV_HEADER = ("axis_value", "method", "level_index", "energy", "label")


class ScanError(RuntimeError):
    """A grid point could not be evaluated."""


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def parse_range(text: str) -> np.ndarray:
    """Parse ``a:b:points`` into ``points`` evenly spaced values from a to b.

    A single number gives a one-point grid.
    """
    parts = text.split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) != 3:
        raise ValueError(f"range must look like a:b:points, got {text!r}")
    a, b, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 1:
        raise ValueError(f"number of points must be >= 1, got {steps}")
    if steps == 1:
        return np.array([a])
    return np.linspace(a, b, steps)


def resolve_jobs(jobs: int | None = None) -> int:
    """Worker count: QRM_JOBS wins over ``jobs``; default 1."""
    env = os.environ.get("QRM_JOBS")
    if env:
        jobs = int(env)
    jobs = 1 if jobs is None else int(jobs)
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    return jobs


@dataclass(frozen=True)
class ScanRequest:
    """What to scan.

    ``fixed`` supplies the parameters not on the scan axis. When ``pair`` is
    set, only that level pair is reported (EXACT contributes its levels
    ``2*pair`` and ``2*pair+1``).
    """

    axis: str
    grid: Sequence[float]
    fixed: ModelParams
    methods: Sequence[Method]
    levels: int = 12
    pair: int | None = None

    def __post_init__(self):
        if self.axis not in ("g", "delta"):
            raise ValueError(f"axis must be 'g' or 'delta', got {self.axis!r}")
        grid = np.asarray(self.grid, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("grid must be a non-empty 1-d sequence")
        if grid.size > 1 and np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        methods = tuple(dict.fromkeys(Method.parse(m) for m in self.methods))
        if not methods:
            raise ValueError("at least one method is required")
        object.__setattr__(self, "methods", methods)
        if self.pair is not None:
            if self.pair < 0:
                raise ValueError("pair must be non-negative")
            bad = [m for m in methods if m not in PAIR_METHODS and m is not Method.EXACT]
            if bad:
                raise ValueError(f"pair-resolved scans support AA/GAA_K/GAA_L/EXACT only, got {bad}")
            object.__setattr__(self, "levels", 2)
        if not 1 <= self.levels <= MAX_LEVELS:
            raise ValueError(f"levels must be in 1..{MAX_LEVELS}, got {self.levels}")

    def params_at(self, value: float) -> ModelParams:
        return self.fixed.with_(**{self.axis: float(value)})

    @property
    def first_level(self) -> int:
        return 0 if self.pair is None else 2 * self.pair


@dataclass
class SpectrumScan:
    request: ScanRequest
    table: dict[Method, np.ndarray]
    labels: dict[Method, list[list[str]]]
    metrics: dict[Method, dict[str, float]] = field(default_factory=dict)

    @property
    def grid(self) -> np.ndarray:
        return self.request.grid

    def to_dict(self) -> dict:
        req = self.request
        return {
            "axis": req.axis,
            "grid": [float(v) for v in req.grid],
            "fixed": {"delta": req.fixed.delta, "omega": req.fixed.omega, "g": req.fixed.g},
            "methods": [m.value for m in req.methods],
            "levels": req.levels,
            "pair": req.pair,
            "first_level_index": req.first_level,
            "table": {m.value: self.table[m].tolist() for m in req.methods},
            "labels": {m.value: self.labels[m] for m in req.methods},
            "metrics": {m.value: v for m, v in self.metrics.items()},
        }


def _evaluate_point(args):
    req, value = args
    params = req.params_at(value)
    row = {}
    for method in req.methods:
        if method is Method.EXACT:
            top = req.first_level + req.levels
            spec = exact_spectrum(params, top, EXACT_TOL)
            sl = slice(req.first_level, top)
            energies = spec.energies[sl]
            labels = [Parity.from_sign(p).value for p in spec.parities[sl]]
        elif req.pair is not None:
            ps = pair_spectrum(method, req.pair, params)
            energies = np.array([ps.e_minus, ps.e_plus])
            labels = [f"{req.pair}-", f"{req.pair}+"]
        else:
            lv = approx_levels(method, params, req.levels)
            energies = np.array([x.energy for x in lv])
            labels = [x.label for x in lv]
        row[method] = (np.asarray(energies, dtype=float), labels)
    return row


def compute_metrics(table: dict[Method, np.ndarray]) -> dict[Method, dict[str, float]]:
    """Max-abs and RMS error of every method against EXACT."""
    if Method.EXACT not in table:
        return {}
    ref = table[Method.EXACT]
    out = {}
    for method, values in table.items():
        err = values - ref
        out[method] = {
            "max_abs": float(np.max(np.abs(err))),
            "rms": float(np.sqrt(np.mean(np.square(err)))),
        }
    return out


def run_scan(request: ScanRequest, jobs: int | None = None) -> SpectrumScan:
    """Evaluate every method at every grid point, in grid order."""
    jobs = resolve_jobs(jobs)
    items = [(request, v) for v in request.grid]
    try:
        if jobs == 1 or len(items) == 1:
            rows = [_evaluate_point(it) for it in items]
        else:
            chunk = max(1, len(items) // (4 * jobs))
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_evaluate_point, items, chunksize=chunk))
    except ConvergenceError as exc:
        # locate the offending point deterministically
        for it in items:
            try:
                _evaluate_point(it)
            except ConvergenceError:
                raise ScanError(f"exact solver failed at {request.axis}={fmt(it[1])}: {exc}") from exc
        raise
    table = {m: np.vstack([r[m][0] for r in rows]) for m in request.methods}
    labels = {m: [r[m][1] for r in rows] for m in request.methods}
    return SpectrumScan(request, table, labels, compute_metrics(table))


# -- CSV / JSON ---------------------------------------------------------------


def scan_rows(scan: SpectrumScan) -> Iterable[tuple[str, ...]]:
    first = scan.request.first_level
    for i, value in enumerate(scan.grid):
        for method in scan.request.methods:
            energies = scan.table[method][i]
            labels = scan.labels[method][i]
            for j, (e, lab) in enumerate(zip(energies, labels)):
                yield fmt(value), method.value, str(first + j), fmt(e), lab


def write_csv(scans: SpectrumScan | Sequence[tuple[str, SpectrumScan]], out, panel_name: str | None = None) -> None:
    """Write long-format CSV to a path or text stream.

    Pass a single scan, or ``[(panel_value, scan), ...]`` together with
    ``panel_name`` to prepend a panel column.
    """
    if isinstance(scans, SpectrumScan):
        panels = [(None, scans)]
    else:
        panels = list(scans)
    header = CSV_HEADER if panel_name is None else (panel_name, *CSV_HEADER)

    def _write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for panel, scan in panels:
            prefix = () if panel_name is None else (panel,)
            for row in scan_rows(scan):
                w.writerow((*prefix, *row))

    if hasattr(out, "write"):
        _write(out)
        return
    path = Path(out)
    try:
        with open(path, "w", newline="") as fh:
            _write(fh)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_csv(source) -> dict[str, dict[str, dict[float, dict[int, float]]]]:
    """Parse a CSV written by :func:`write_csv`.

    Returns ``{panel: {method: {axis_value: {level_index: energy}}}}``; the
    panel key is ``""`` for single-panel files.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()
    reader = csv.DictReader(io.StringIO(text))
    panel_col = reader.fieldnames[0] if reader.fieldnames[0] != "axis_value" else None
    out: dict = {}
    for rec in reader:
        panel = rec[panel_col] if panel_col else ""
        by_method = out.setdefault(panel, {}).setdefault(rec["method"], {})
        by_method.setdefault(float(rec["axis_value"]), {})[int(rec["level_index"])] = float(rec["energy"])
    return out


def write_json(scan: SpectrumScan, out) -> None:
    text = json.dumps(scan.to_dict(), indent=1, sort_keys=True) + "\n"
    if hasattr(out, "write"):
        out.write(text)
    else:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write {out}: {exc.strerror or exc}") from exc


# -- crossing reports -----------------------------------------------------------


@dataclass(frozen=True)
class CrossingRow:
    n: int
    g_star: float
    energy: float
    residual: float
    exact_gap: float | None = None


CROSSING_HEADER = ("n", "g_star", "energy", "residual", "exact_gap")


def report_crossings(n: int | Iterable[int], delta: float, omega: float = 1.0, refine_exact: bool = False) -> list[CrossingRow]:
    """One row per Juddian point of pair ``n`` (or of each pair in ``n``).

    With ``refine_exact`` the opposite-parity gap of the exact spectrum at
    ``g_star`` is attached.
    """
    pairs = [int(n)] if np.ndim(n) == 0 else [int(k) for k in n]
    if any(k > 10 for k in pairs):
        raise ValueError("pair index must be <= 10")
    rows = []
    for k in pairs:
        for pt in find_crossings(k, delta, omega):
            gap = None
            if refine_exact:
                spec = exact_spectrum(ModelParams(delta, omega, pt.g_star), 2 * k + 4, EXACT_TOL)
                gap, _ = opposite_parity_gap(spec, pt.energy)
            rows.append(CrossingRow(k, pt.g_star, pt.energy, pt.residual, gap))
    return rows


def write_crossings_csv(rows: Sequence[CrossingRow], out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CROSSING_HEADER)
    for r in rows:
        w.writerow((r.n, fmt(r.g_star), fmt(r.energy), fmt(r.residual), "" if r.exact_gap is None else fmt(r.exact_gap)))


# -- figures ------------------------------------------------------------------

FIGURE_IDS = ("2a", "2b", "2c", "3a", "3b", "3c", "4")
FIG4_DELTAS = (0.7, 1.2, 2.0, 3.0)
_LOW = (Method.EXACT, Method.AA, Method.GAA_K)


def figure_panels(figure_id: str, levels: int | None = None) -> tuple[str | None, list[tuple[str, ScanRequest]]]:
    """Scan requests behind one figure: ``(panel_column, [(panel, request)])``."""
    g_grid = parse_range("0:3:301")
    if figure_id in ("2a", "2b", "2c"):
        delta = {"2a": 0.7, "2b": 1.2, "2c": 2.0}[figure_id]
        req = ScanRequest("g", g_grid, ModelParams(delta=delta), _LOW, levels or 12)
        return None, [("", req)]
    if figure_id == "3a":
        req = ScanRequest("delta", parse_range("0:6:241"), ModelParams(g=0.0), _LOW, levels or 12)
        return None, [("", req)]
    if figure_id == "3b":
        req = ScanRequest("delta", parse_range("0:6:241"), ModelParams(g=0.5), _LOW, levels or 12)
        return None, [("", req)]
    if figure_id == "3c":
        req = ScanRequest("delta", parse_range("0:10:401"), ModelParams(g=0.5), _LOW, levels or 30)
        return None, [("", req)]
    if figure_id == "4":
        methods = (Method.EXACT, Method.AA, Method.GAA_K, Method.GAA_L)
        panels = [
            (fmt(d), ScanRequest("g", parse_range("0:2:201"), ModelParams(delta=d), methods, pair=5))
            for d in FIG4_DELTAS
        ]
        return "delta", panels
    raise ValueError(f"unknown figure id {figure_id!r}; expected one of {', '.join(FIGURE_IDS)}")


def emit_figure_data(figure_id: str, out_path, levels: int | None = None, jobs: int | None = None) -> Path:
    """Compute and write the CSV dataset for one figure; returns the path."""
    panel_name, panels = figure_panels(figure_id, levels)
    scans = [(label, run_scan(req, jobs)) for label, req in panels]
    if panel_name is None:
        write_csv(scans[0][1], out_path)
    else:
        write_csv(scans, out_path, panel_name)
    return Path(out_path)

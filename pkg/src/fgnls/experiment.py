"""Experiment orchestration: evaluate methods on a common grid, compare, export."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .closed_forms import appearance_estimate, pair_delay, recurrence_params
from .config import ExperimentConfig, dump_config
from .riemann_core import partition, riemann_matrix
from .spectral_data import derive_modes
from .ssfm import FieldGrid, SolverConfig, evolve, extract_peaks
from .theta_engine import FiniteGapField

METHODS = ("ssfm", "fg_full", "fg_reduced")


def methods_for(mode: str):
    return METHODS if mode == "compare" else (mode,)


@dataclass
class ComparisonReport:
    methods: tuple
    sup_norm_diff: dict
    l2_diff: dict
    peak_table: list
    partition_echo: dict
    per_interval_diff: list
    metrics: dict = field(default_factory=dict)


def field_diff(a: np.ndarray, b: np.ndarray):
    """(sup norm, root-mean-square) of a - b over the grid."""
    d = np.abs(np.asarray(a) - np.asarray(b))
    return float(d.max()), float(np.sqrt(np.mean(d**2)))


def _pairs(methods):
    return [(a, b) for i, a in enumerate(methods) for b in methods[i + 1:]]


def _analytic(cfg: ExperimentConfig):
    data = cfg.cauchy
    modes = derive_modes(data)
    rd = riemann_matrix(modes, data.epsilon)
    part = partition(rd, data.T0, data.p)
    return data, modes, rd, part


def evaluate(cfg: ExperimentConfig):
    """All requested fields on the output grid: (x, t, {method: u[t, x]})."""
    data, modes, rd, part = _analytic(cfg)
    methods = methods_for(cfg.mode)
    L, s, g = data.L, cfg.solver, cfg.grid
    stride = s.n_x // g.n_x_out
    lo, hi = cfg.t_range
    t_req = np.linspace(lo, hi, g.n_t_out)
    fields = {}
    x = -L / 2 + L * np.arange(s.n_x) / s.n_x
    if "ssfm" in methods:
        grid = evolve(data, SolverConfig(n_x=s.n_x, dt=s.dt, scheme=s.scheme, t_samples=tuple(t_req)))
        t = grid.t
        fields["ssfm"] = grid.u[:, ::stride]
    else:
        t = t_req
    x = x[::stride]
    fg = FiniteGapField(data, modes, rd) if any(m.startswith("fg") for m in methods) else None
    if "fg_full" in methods:
        fields["fg_full"] = fg.grid(x, t, "full")
    if "fg_reduced" in methods:
        fields["fg_reduced"] = fg.grid(x, t, "reduced")
    for m in methods:
        if not np.all(np.isfinite(fields[m])):
            from .errors import NonfiniteField
            raise NonfiniteField(f"{m} produced non-finite values")
    return x, t, fields, part


def compare(x, t, fields, part, L: float, threshold: float) -> ComparisonReport:
    methods = tuple(m for m in METHODS if m in fields)
    sup, l2 = {}, {}
    for a, b in _pairs(methods):
        sup[f"{a}|{b}"], l2[f"{a}|{b}"] = field_diff(fields[a], fields[b])
    peaks = []
    for m in methods:
        grid = FieldGrid(x=x, t=t, u=fields[m], L=L)
        peaks += [(m, px, pt, pa) for px, pt, pa in extract_peaks(grid, threshold)]
    peaks.sort(key=lambda r: (r[2], METHODS.index(r[0]), r[1]))
    per_iv = []
    for iv in part.intervals:
        sel = (t >= iv.t_start) & (t <= iv.t_end)
        if not sel.any():
            continue
        row = {"t_start": iv.t_start, "t_end": iv.t_end, "visible": sorted(iv.visible)}
        for a, b in _pairs(methods):
            row[f"{a}|{b}"] = field_diff(fields[a][sel], fields[b][sel])[0]
        per_iv.append(row)
    metrics = {}
    for key in sup:
        a, b = key.split("|")
        metrics[f"sup_{a}_{b}"] = sup[key]
        metrics[f"l2_{a}_{b}"] = l2[key]
    for m in methods:
        metrics[f"max_abs_{m}"] = float(np.abs(fields[m]).max())
        own = [p for p in peaks if p[0] == m]
        metrics[f"n_peaks_{m}"] = len(own)
        if own:
            top = max(own, key=lambda p: p[3])
            metrics[f"peak_x_{m}"], metrics[f"peak_t_{m}"], metrics[f"peak_abs_{m}"] = top[1], top[2], top[3]
    return ComparisonReport(methods=methods, sup_norm_diff=sup, l2_diff=l2, peak_table=peaks,
                            partition_echo=part.to_dict(), per_interval_diff=per_iv, metrics=metrics)


def predict_report(cfg: ExperimentConfig) -> dict:
    """Elementary-function predictions: per-mode lattice data, pairwise delays,
    isolated-appearance schedule and the partition."""
    data, modes, rd, part = _analytic(cfg)
    N = modes.N
    per_mode = []
    metrics = {}
    for j in range(1, N + 1):
        if abs(modes.alpha[j - 1] * modes.beta[j - 1]) == 0:
            continue
        rp = recurrence_params(data, modes, j)
        per_mode.append({"mode": j, "phi": rp.phi, "sigma": float(modes.sigma[j - 1]),
                         "X1": rp.X1, "T1": rp.T1, "dX": rp.dX, "dT": rp.dT,
                         "peak_height": rp.peak_height, "w0": float(rd.w0[j - 1]),
                         "w1": float(rd.w1[j - 1])})
        metrics[f"T1_mode{j}"] = rp.T1
        metrics[f"dT_mode{j}"] = rp.dT
        metrics[f"dX_mode{j}"] = rp.dX
    delays = [[None if j == k else pair_delay(modes, j, k) for k in range(1, N + 1)]
              for j in range(1, N + 1)]
    schedule, count = [], {}
    for iv in part.intervals:
        if iv.n_visible != 1:
            continue
        (j,) = tuple(iv.visible)
        est = appearance_estimate(data, modes, rd, j, t=0.5 * (iv.t_start + iv.t_end))
        count[j] = count.get(j, 0) + 1
        schedule.append({"mode": j, "T_max": est.T_max, "X_max": est.X_max, "M": list(est.M),
                         "t_start": iv.t_start, "t_end": iv.t_end,
                         "inside": bool(iv.t_start <= est.T_max <= iv.t_end)})
        metrics[f"isolated_T_max_mode{j}_n{count[j]}"] = est.T_max
        metrics[f"isolated_X_max_mode{j}_n{count[j]}"] = est.X_max
    metrics["partition_labels"] = " ".join(part.labels())
    metrics["n_boundaries"] = len(part.boundaries)
    return {"modes": per_mode, "pair_delays": delays, "schedule": schedule,
            "partition": part.to_dict(), "metrics": metrics}


class _Artifacts:
    """Tracks written files so a failed run leaves nothing half-written."""

    def __init__(self, directory):
        self.dir = Path(directory)
        self.created_dir = not self.dir.exists()
        self.files = []

    def path(self, name):
        self.dir.mkdir(parents=True, exist_ok=True)
        p = self.dir / name
        self.files.append(p)
        return p

    def rollback(self):
        for p in self.files:
            p.unlink(missing_ok=True)
        if self.created_dir and self.dir.exists() and not any(self.dir.iterdir()):
            self.dir.rmdir()


def _json_dump(obj, path):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_csv(path, x, t, fields):
    methods = [m for m in METHODS if m in fields]
    cols = ["t", "x"] + [f"{m}_{c}" for m in methods for c in ("re", "im", "abs")]
    T, X = np.meshgrid(t, x, indexing="ij")
    parts = [T.ravel(), X.ravel()]
    for m in methods:
        u = fields[m].ravel()
        parts += [u.real, u.imag, np.abs(u)]
    np.savetxt(path, np.column_stack(parts), fmt="%.17g", delimiter=",",
               header=",".join(cols), comments="")


def write_gnuplot(path, x, t, u):
    """gnuplot 'nonuniform matrix' text: first row n_x then x; each row t then |u|."""
    A = np.abs(u)
    with open(path, "w") as fh:
        fh.write(" ".join(["%.17g" % len(x)] + ["%.17g" % v for v in x]) + "\n")
        for ti, row in zip(t, A):
            fh.write(" ".join(["%.17g" % ti] + ["%.17g" % v for v in row]) + "\n")


def write_partition(art: _Artifacts, part_dict: dict):
    _json_dump(part_dict, art.path("partition.json"))
    lines = ["0 0"] + [f"{b['label']} {b['time']:.17g}" for b in part_dict["boundaries"]]
    art.path("partition.txt").write_text("\n".join(lines) + "\n")


def run(cfg: ExperimentConfig, out_dir=None) -> ComparisonReport:
    art = _Artifacts(out_dir if out_dir is not None else cfg.outputs.directory)
    try:
        x, t, fields, part = evaluate(cfg)
        report = compare(x, t, fields, part, cfg.cauchy.L, cfg.grid.peak_threshold)
        fmts = cfg.outputs.formats
        if "csv" in fmts:
            write_csv(art.path("field.csv"), x, t, fields)
        if "json" in fmts:
            _json_dump({"config": dump_config(cfg), "report": asdict(report)}, art.path("report.json"))
        if "partition" in fmts:
            write_partition(art, report.partition_echo)
        if cfg.outputs.gnuplot:
            for m, u in fields.items():
                write_gnuplot(art.path(f"abs_{m}.dat"), x, t, u)
    except BaseException:
        art.rollback()
        raise
    return report


def predict(cfg: ExperimentConfig, out_dir=None) -> dict:
    art = _Artifacts(out_dir if out_dir is not None else cfg.outputs.directory)
    try:
        rep = predict_report(cfg)
        if "json" in cfg.outputs.formats:
            _json_dump({"config": dump_config(cfg), "prediction": rep}, art.path("prediction.json"))
        if "partition" in cfg.outputs.formats:
            write_partition(art, rep["partition"])
    except BaseException:
        art.rollback()
        raise
    return rep


@dataclass(frozen=True)
class CheckResult:
    source: str
    metric: str
    value: object
    expected: str
    passed: bool

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        v = f"{self.value:.9g}" if isinstance(self.value, float) else str(self.value)
        return f"[{tag}] {self.source}: {self.metric} = {v} (expected {self.expected})"


def _judge(value, bound: str) -> bool:
    parts = [p.strip() for p in bound.split(",")]
    if value is None:
        return False
    if len(parts) == 2:
        try:
            lo, hi = float(parts[0]), float(parts[1])
        except ValueError:
            return str(value) == bound.strip()
        return isinstance(value, (int, float)) and lo <= value <= hi
    return str(value) == bound.strip()


def check(cfg: ExperimentConfig, out_dir=None):
    """Evaluate every [check] entry of a config; bounds are 'lo,hi' or an exact string."""
    metrics = dict(predict_report(cfg)["metrics"])
    if any(k not in metrics for k in cfg.checks):
        metrics.update(run(cfg, out_dir).metrics)
    src = cfg.source or "<config>"
    return [CheckResult(src, k, metrics.get(k), v, _judge(metrics.get(k), v))
            for k, v in cfg.checks.items()]

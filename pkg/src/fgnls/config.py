"""Experiment configuration: flat INI-style sections, parsed into dataclasses.

Example::

    [cauchy]
    L = 14
    epsilon = 1e-6
    T0 = 30
    p = 0.5

    [coefficients]
    1 = 0.5,0
    -1 = 0.3,0.3

    [solver]
    n_x = 1024
    dt = 1e-4
    scheme = strang

    [grid]
    n_x_out = 256
    n_t_out = 301
    t_start = 0
    t_end = 30

    [run]
    mode = compare

    [outputs]
    directory = out
    formats = csv,json,partition
    gnuplot = false

    [check]
    sup_ssfm_fg_full = 0,5e-3
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError
from .spectral_data import CauchyData

MODES = ("fg_full", "fg_reduced", "ssfm", "compare")
FORMATS = ("csv", "json", "partition")


@dataclass(frozen=True)
class SolverSettings:
    n_x: int = 1024
    dt: float = 1e-4
    scheme: str = "strang"


@dataclass(frozen=True)
class GridSpec:
    n_x_out: int = 256
    n_t_out: int = 301
    t_start: float = 0.0
    t_end: float | None = None
    peak_threshold: float = 1.5


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "out"
    formats: tuple = FORMATS
    gnuplot: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    cauchy: CauchyData
    solver: SolverSettings = SolverSettings()
    grid: GridSpec = GridSpec()
    mode: str = "compare"
    outputs: OutputSpec = OutputSpec()
    checks: dict = field(default_factory=dict)
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        bad = [f for f in self.outputs.formats if f not in FORMATS]
        if bad:
            raise ConfigError(f"unknown output formats {bad}")
        g, s = self.grid, self.solver
        if g.n_x_out < 2 or g.n_t_out < 1:
            raise ConfigError("output grid needs n_x_out >= 2 and n_t_out >= 1")
        if g.n_x_out > s.n_x or s.n_x % g.n_x_out:
            raise ConfigError(f"n_x_out = {g.n_x_out} must divide solver n_x = {s.n_x}")
        lo, hi = self.t_range
        if not 0 <= lo <= hi <= self.cauchy.T0:
            raise ConfigError(f"t_range [{lo}, {hi}] not inside [0, T0 = {self.cauchy.T0}]")

    @property
    def t_range(self):
        hi = self.cauchy.T0 if self.grid.t_end is None else self.grid.t_end
        return self.grid.t_start, hi

    def with_overrides(self, mode=None, p=None, grid=None, out=None, gnuplot=None):
        cfg = self
        if mode is not None:
            cfg = replace(cfg, mode=mode)
        if p is not None:
            c = cfg.cauchy
            cfg = replace(cfg, cauchy=CauchyData(c.L, c.epsilon, c.coeffs, c.T0, p))
        if grid is not None:
            cfg = replace(cfg, grid=replace(cfg.grid, n_x_out=int(grid[0]), n_t_out=int(grid[1])))
        if out is not None or gnuplot:
            o = cfg.outputs
            cfg = replace(cfg, outputs=replace(o, directory=out if out is not None else o.directory,
                                               gnuplot=bool(gnuplot) or o.gnuplot))
        return cfg


def _num(sec, key, conv, default=None):
    key = key.lower()
    if key not in sec:
        if default is None:
            raise ConfigError(f"[{sec.name}] missing required key {key!r}")
        return default
    try:
        return conv(sec[key])
    except ValueError as exc:
        raise ConfigError(f"[{sec.name}] {key} = {sec[key]!r}: {exc}") from None


def _complex(text: str) -> complex:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) != 2:
        raise ValueError("expected 're,im'")
    return complex(float(parts[0]), float(parts[1]))


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def parse_config(text: str, source: str | None = None) -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # metric names in [check] are case-sensitive
    try:
        cp.read_string(text, source=source or "<string>")
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    for name in ("cauchy", "coefficients"):
        if not cp.has_section(name):
            raise ConfigError(f"missing section [{name}]")
    c = _section(cp, "cauchy")
    coeffs = {}
    for key, val in cp["coefficients"].items():
        try:
            coeffs[int(key)] = _complex(val)
        except ValueError as exc:
            raise ConfigError(f"[coefficients] {key} = {val!r}: {exc}") from None
    try:
        cauchy = CauchyData(L=_num(c, "L", float), epsilon=_num(c, "epsilon", float), coeffs=coeffs,
                            T0=_num(c, "T0", float, 30.0), p=_num(c, "p", float, 0.5))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    sec = _section(cp, "solver")
    d = SolverSettings()
    solver = SolverSettings(
        n_x=_num(sec, "n_x", int, d.n_x),
        dt=_num(sec, "dt", float, d.dt),
        scheme=sec.get("scheme", d.scheme).strip(),
    )
    g = _section(cp, "grid")
    dg = GridSpec()
    t_end = g.get("t_end")
    grid = GridSpec(
        n_x_out=_num(g, "n_x_out", int, dg.n_x_out),
        n_t_out=_num(g, "n_t_out", int, dg.n_t_out),
        t_start=_num(g, "t_start", float, dg.t_start),
        t_end=None if t_end is None else _num(g, "t_end", float),
        peak_threshold=_num(g, "peak_threshold", float, dg.peak_threshold),
    )
    r = _section(cp, "run")
    o = _section(cp, "outputs")
    fmts = o.get("formats")
    outputs = OutputSpec(
        directory=o.get("directory", OutputSpec.directory).strip(),
        formats=FORMATS if fmts is None else tuple(f.strip() for f in fmts.split(",") if f.strip()),
        gnuplot=_num(o, "gnuplot", _bool, False),
    )
    checks = dict(cp["check"].items()) if cp.has_section("check") else {}
    return ExperimentConfig(cauchy=cauchy, solver=solver, grid=grid,
                            mode=r.get("mode", "compare").strip(), outputs=outputs,
                            checks=checks, source=source)


class _Sec(dict):
    """Lower-cased key mapping with a section name, so error messages can cite it."""

    def __init__(self, name, items):
        super().__init__((k.lower(), v) for k, v in items)
        self.name = name


def _section(cp, name) -> _Sec:
    return _Sec(name, cp[name].items() if cp.has_section(name) else ())


def load_config(path) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"{p}: {exc.strerror}") from None
    try:
        return parse_config(text, source=str(p))
    except ConfigError as exc:
        raise ConfigError(f"{p}: {exc}") from None


def _fmt(x: float) -> str:
    return repr(float(x))


def dump_config(cfg: ExperimentConfig) -> str:
    c, s, g, o = cfg.cauchy, cfg.solver, cfg.grid, cfg.outputs
    lines = ["[cauchy]", f"L = {_fmt(c.L)}", f"epsilon = {_fmt(c.epsilon)}",
             f"T0 = {_fmt(c.T0)}", f"p = {_fmt(c.p)}", "", "[coefficients]"]
    for j in sorted(c.coeffs, key=lambda j: (abs(j), -j)):
        z = c.coeffs[j]
        lines.append(f"{j} = {_fmt(z.real)},{_fmt(z.imag)}")
    lines += ["", "[solver]", f"n_x = {s.n_x}", f"dt = {_fmt(s.dt)}", f"scheme = {s.scheme}",
              "", "[grid]", f"n_x_out = {g.n_x_out}", f"n_t_out = {g.n_t_out}",
              f"t_start = {_fmt(g.t_start)}"]
    if g.t_end is not None:
        lines.append(f"t_end = {_fmt(g.t_end)}")
    lines += [f"peak_threshold = {_fmt(g.peak_threshold)}", "", "[run]", f"mode = {cfg.mode}",
              "", "[outputs]", f"directory = {o.directory}", f"formats = {','.join(o.formats)}",
              f"gnuplot = {'true' if o.gnuplot else 'false'}"]
    if cfg.checks:
        lines += ["", "[check]"] + [f"{k} = {v}" for k, v in cfg.checks.items()]
    return "\n".join(lines) + "\n"

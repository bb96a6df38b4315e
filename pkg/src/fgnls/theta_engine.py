"""Hypercube theta sums and the leading-order finite-gap field.

Theta normalisation: theta(z|B) = sum_n exp(n.B.n/2 + n.z), so theta is
2*pi*i periodic in every z_j. All sums are evaluated in log-sum-exp form:
the largest real exponent is factored out before exponentiating, and the
real part of every exponent is independent of x, so one scale per time
serves a whole row of x values.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ThetaUnderflow, TooManyModes
from .riemann_core import Partition, RiemannData, status_from_winding, winding
from .spectral_data import CauchyData, ModeSet

N_MAX = 12
UNDERFLOW = 1e-300


@dataclass(frozen=True)
class ThetaArgs:
    x: np.ndarray
    t: float
    z_minus: np.ndarray
    z_plus: np.ndarray
    w: np.ndarray
    floor_w: np.ndarray
    z_tilde_minus: np.ndarray
    z_tilde_plus: np.ndarray
    z_hat_minus: np.ndarray
    z_hat_plus: np.ndarray
    phase: float

    def pick(self, which: str, kind: str = "hat") -> np.ndarray:
        prefix = {"raw": "z_", "tilde": "z_tilde_", "hat": "z_hat_"}[kind]
        return getattr(self, prefix + {"plus": "plus", "minus": "minus"}[which])


def z_minus(modes: ModeSet, x, t: float) -> np.ndarray:
    """(2N, *x.shape) array of the linearised Jacobian coordinates."""
    x = np.asarray(x, dtype=float)
    hp = modes.hat_phi.reshape((-1,) + (1,) * x.ndim)
    const = 1j * np.pi / 2 - np.log(modes.hat_alpha / modes.sqrt_ab)
    const = const.reshape(hp.shape)
    return const + 2j * np.cos(hp) * x - 2 * np.sin(2 * hp) * t


def theta_args(modes: ModeSet, rd: RiemannData, x, t: float) -> ThetaArgs:
    x = np.asarray(x, dtype=float)
    t = float(t)
    zm = z_minus(modes, x, t)
    shift = (np.pi + 2 * modes.hat_phi).reshape((-1,) + (1,) * x.ndim)
    zp = zm - 1j * shift
    w = winding(rd, t)
    f = np.floor(w)
    cell = (rd.B @ f).reshape(shift.shape)
    half = 0.5 * rd.B.sum(axis=1).reshape(shift.shape)
    ztm, ztp = zm - cell, zp - cell
    phase = float(np.sum((np.pi / 2 + modes.hat_phi) * f))
    return ThetaArgs(x=x, t=t, z_minus=zm, z_plus=zp, w=w, floor_w=f.astype(int),
                     z_tilde_minus=ztm, z_tilde_plus=ztp,
                     z_hat_minus=ztm - half, z_hat_plus=ztp - half, phase=phase)


def sign_vertices(m: int) -> np.ndarray:
    """All 2**m vectors in {-1, 1}**m, shape (2**m, m)."""
    if m == 0:
        return np.zeros((1, 0))
    return np.array(list(itertools.product((1.0, -1.0), repeat=m)))


def _log_sum(verts: np.ndarray, quad: np.ndarray, z: np.ndarray):
    """log sum_v exp(quad_v + v.z) for every column of z; returns (scale, mantissa)."""
    shape = z.shape[1:]
    zz = z.reshape(z.shape[0], int(np.prod(shape)))
    expo = quad[:, None] + verts @ zz
    scale = expo.real.max(axis=0)
    mant = np.exp(expo - scale).sum(axis=0)
    return scale.reshape(shape), mant.reshape(shape)


def _check_size(N: int):
    if N > N_MAX:
        raise TooManyModes(f"N = {N} exceeds N_max = {N_MAX} (4**N terms)")


def log_theta_full(args: ThetaArgs, rd: RiemannData, which: str, form: str = "centered"):
    """Complex log of the full-hypercube theta sum.

    ``form='raw'``: integer vertices n_j in {-floor(w_j+1), -floor(w_j)} on the
    unshifted arguments. ``form='shifted'``: n_j in {-1, 0} on the cell-shifted
    arguments. ``form='centered'``: hat-n_j in {-1, 1} on the half-shifted
    arguments, with the off-diagonal quadratic form only.
    """
    _check_size(rd.N)
    m = 2 * rd.N
    signs = sign_vertices(m)
    B = rd.B
    if form == "raw":
        verts = (signs - 1) / 2 - args.floor_w
        quad = 0.5 * np.einsum("vi,ij,vj->v", verts, B, verts)
        scale, mant = _log_sum(verts, quad, args.pick(which, "raw"))
    elif form == "shifted":
        verts = (signs - 1) / 2
        quad = 0.5 * np.einsum("vi,ij,vj->v", verts, B, verts)
        scale, mant = _log_sum(verts, quad, args.pick(which, "tilde"))
    elif form == "centered":
        off = B - np.diag(np.diag(B))
        quad = 0.125 * np.einsum("vi,ij,vj->v", signs, off, signs)
        zh = args.pick(which, "hat")
        scale, mant = _log_sum(signs, quad, 0.5 * zh)
        return scale + np.log(mant) - 0.5 * zh.sum(axis=0)
    else:
        raise ValueError(f"unknown form {form!r}")
    return scale + np.log(mant)


def theta_full(args: ThetaArgs, rd: RiemannData, which: str, form: str = "centered"):
    return np.exp(log_theta_full(args, rd, which, form))


def half_offsets(w_half: np.ndarray, visible: Iterable[int]) -> np.ndarray:
    """g = floor(w) + st/2 on the first N components: nearest integer for
    invisible modes, floor + 1/2 for visible ones."""
    g = np.rint(w_half)
    for j in visible:
        g[j - 1] = np.floor(w_half[j - 1]) + 0.5
    return g


def visible_components(N: int, visible: Iterable[int]) -> np.ndarray:
    s = sorted(int(j) for j in visible)
    return np.array([j - 1 for j in s] + [j - 1 + N for j in s], dtype=int)


def reduced_phase(rd: RiemannData, w_half: np.ndarray, visible: Iterable[int]) -> float:
    """Phi(I) = sum_k (2 floor(w_k) + st_k) phi_k over the first N components."""
    st = np.where(np.rint(w_half) > np.floor(w_half), 2, 0)
    for j in visible:
        st[j - 1] = 1
    return float(np.sum((2 * np.floor(w_half) + st) * rd.hat_phi[: rd.N]))


def reduced_arguments(args: ThetaArgs, rd: RiemannData, visible, which: str) -> np.ndarray:
    N = rd.N
    g = half_offsets(args.w[:N], visible)
    g2 = np.concatenate([g, -g])
    z = args.pick(which, "raw")
    return z - (rd.B @ g2).reshape((-1,) + (1,) * (z.ndim - 1))


def log_theta_reduced(args: ThetaArgs, rd: RiemannData, visible, which: str):
    """Sum over the 4**n_visible vertices that survive the vertex rule."""
    idx = visible_components(rd.N, visible)
    zr = reduced_arguments(args, rd, visible, which)[idx]
    signs = sign_vertices(len(idx))
    Bv = rd.B[np.ix_(idx, idx)]
    off = Bv - np.diag(np.diag(Bv))
    quad = 0.125 * np.einsum("vi,ij,vj->v", signs, off, signs)
    scale, mant = _log_sum(signs, quad, 0.5 * zr)
    return scale + np.log(mant)


def theta_reduced(args: ThetaArgs, rd: RiemannData, visible, which: str):
    return np.exp(log_theta_reduced(args, rd, visible, which))


def solve_fg(data: CauchyData, modes: ModeSet, rd: RiemannData, part: Partition | None,
             x, t: float, mode: str = "full"):
    """Leading-order finite-gap field u(x, t) from the theta-function ratio."""
    if part is not None and not (0 <= t <= part.T0):
        raise ValueError(f"t = {t} outside [0, {part.T0}]")
    args = theta_args(modes, rd, x, t)
    if mode == "full":
        lp = log_theta_full(args, rd, "plus")
        lm = log_theta_full(args, rd, "minus")
        phase = args.phase
    elif mode == "reduced":
        vis = _visible_at(rd, args.w, data.p)
        lp = log_theta_reduced(args, rd, vis, "plus")
        lm = log_theta_reduced(args, rd, vis, "minus")
        phase = reduced_phase(rd, args.w[: rd.N], vis)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    _guard(lm)
    return np.exp(2j * t + 2j * phase + lp - lm)


def _visible_at(rd: RiemannData, w: np.ndarray, p: float):
    st = status_from_winding(w[: rd.N], p)
    return [int(j) + 1 for j in np.flatnonzero(st == 1)]


def _guard(log_theta_minus):
    # theta_- is a sum containing at least one unit-modulus term after
    # rescaling; a vanishing value means the arguments were mis-shifted
    re = np.asarray(log_theta_minus).real
    if not np.all(np.isfinite(re)) or np.any(re < np.log(UNDERFLOW)):
        raise ThetaUnderflow("|theta_-| below 1e-300")


class FiniteGapField:
    """Vectorised evaluation of the finite-gap field on space-time grids.

    Each z_j is affine in x with slope i*2*pi*j'/L (j' the mode index), so a
    vertex sum collapses to a short Fourier series in x whose coefficients
    are accumulated once per time level.
    """

    def __init__(self, data: CauchyData, modes: ModeSet, rd: RiemannData):
        self.data, self.modes, self.rd = data, modes, rd
        N = rd.N
        _check_size(N)
        self.mode_index = np.concatenate([np.arange(1, N + 1)] * 2)
        self.signs = sign_vertices(2 * N)
        B = rd.B
        off = B - np.diag(np.diag(B))
        self.quad_full = 0.125 * np.einsum("vi,ij,vj->v", self.signs, off, self.signs)
        self.freq_full = (self.signs @ self.mode_index).round().astype(int)
        self._reduced_cache = {}

    def _series(self, quad, signs, z0, freq, x, extra0=0j, extra_freq=0):
        expo = quad + signs @ (0.5 * z0)
        scale = expo.real.max()
        terms = np.exp(expo - scale)
        lo = freq.min()
        coef = np.bincount(freq - lo, weights=terms.real) + 1j * np.bincount(freq - lo, weights=terms.imag)
        m = np.arange(lo, lo + coef.size) + extra_freq
        kap = np.pi / self.data.L
        vals = np.exp(1j * kap * np.outer(x, m)) @ coef
        return scale + np.log(vals) + extra0

    def full(self, x, t: float):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        args = theta_args(self.modes, self.rd, 0.0, t)
        out = []
        for which in ("plus", "minus"):
            zh0 = args.pick(which, "hat")
            # -sum(z_hat)/2 has x-slope -i*(pi/L)*sum(j') over all 2N components
            lt = self._series(self.quad_full, self.signs, zh0, self.freq_full, x,
                              extra0=-0.5 * zh0.sum(), extra_freq=-int(self.mode_index.sum()))
            out.append(lt)
        _guard(out[1])
        return np.exp(2j * t + 2j * args.phase + out[0] - out[1])

    def _reduced_tables(self, vis):
        key = tuple(vis)
        if key not in self._reduced_cache:
            idx = visible_components(self.rd.N, vis)
            signs = sign_vertices(len(idx))
            Bv = self.rd.B[np.ix_(idx, idx)]
            off = Bv - np.diag(np.diag(Bv))
            quad = 0.125 * np.einsum("vi,ij,vj->v", signs, off, signs)
            freq = (signs @ self.mode_index[idx]).round().astype(int) if len(idx) else np.zeros(1, int)
            self._reduced_cache[key] = (idx, signs, quad, freq)
        return self._reduced_cache[key]

    def reduced(self, x, t: float, visible=None):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        args = theta_args(self.modes, self.rd, 0.0, t)
        vis = _visible_at(self.rd, args.w, self.data.p) if visible is None else sorted(visible)
        idx, signs, quad, freq = self._reduced_tables(vis)
        out = []
        for which in ("plus", "minus"):
            zr0 = reduced_arguments(args, self.rd, vis, which)[idx]
            out.append(self._series(quad, signs, zr0, freq, x))
        _guard(out[1])
        phase = reduced_phase(self.rd, args.w[: self.rd.N], vis)
        return np.exp(2j * t + 2j * phase + out[0] - out[1])

    def grid(self, x, times, mode: str = "full"):
        f = self.full if mode == "full" else self.reduced
        return np.array([f(x, t) for t in np.atleast_1d(times)])

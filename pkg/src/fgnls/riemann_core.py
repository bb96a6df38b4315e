"""Leading-order Riemann matrix, winding trajectory and the visibility partition."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CoincidentBoundaries, NonrecurrentMode, SingularReducedMatrix
from .spectral_data import ModeSet

COND_LIMIT = 1e12
COINCIDENCE_TOL = 1e-10


def offdiag_log(phi_a, phi_b):
    """2 log|sin((a-b)/2) / cos((a+b)/2)|, the eps-independent off-diagonal entry."""
    return 2 * np.log(np.abs(np.sin((phi_a - phi_b) / 2) / np.cos((phi_a + phi_b) / 2)))


@dataclass(frozen=True)
class RiemannData:
    """Leading-order period data.

    ``B`` is the full 2N x 2N matrix: complex on the diagonal (the phase of
    sqrt(alpha beta) lives there), real off the diagonal. ``metric`` is Re B,
    the only part entering the winding vector and vertex selection.
    """

    N: int
    B: np.ndarray
    calB: np.ndarray
    tau: np.ndarray
    sigma: np.ndarray
    chi: np.ndarray
    w0: np.ndarray
    w1: np.ndarray
    hat_phi: np.ndarray

    @property
    def metric(self) -> np.ndarray:
        return self.B.real

    def period(self, j: int) -> float:
        """Recurrence period 1/w1_j of mode j (1-based)."""
        return 1.0 / self.w1[j - 1]


def riemann_matrix(modes: ModeSet, epsilon: float) -> RiemannData:
    N = modes.N
    hp = modes.hat_phi
    n2 = 2 * N
    B = np.empty((n2, n2), dtype=complex)
    for a in range(n2):
        for b in range(n2):
            if a != b:
                B[a, b] = offdiag_log(hp[a], hp[b])
    scale = np.abs(4 * np.sin(2 * hp) * np.cos(hp))
    B[np.diag_indices(n2)] = 2 * np.log(epsilon * modes.sqrt_ab / scale)

    sig = modes.sigma
    ab = np.abs(modes.alpha * modes.beta)
    tau = 2 / sig * np.log(sig**2 / (2 * epsilon * np.sqrt(ab)))
    phi = modes.phi
    calB = 2 * np.log(np.abs(np.sin(phi[:, None] - phi[None, :]) / np.sin(phi[:, None] + phi[None, :])),
                      where=~np.eye(N, dtype=bool), out=np.zeros((N, N)))
    calB[np.diag_indices(N)] = -sig * tau
    chi = 0.5 * np.log(np.abs(modes.alpha / modes.beta))

    cond = np.linalg.cond(calB)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularReducedMatrix(f"reduced matrix condition number {cond:.3g}")
    # LAPACK gesv: LU with partial pivoting
    sol = np.linalg.solve(calB, -np.column_stack([sig, chi]))
    w1, w0 = sol[:, 0].copy(), sol[:, 1].copy()
    for j in range(N):
        if not w1[j] > 0:
            raise NonrecurrentMode(j + 1, float(w1[j]))
    return RiemannData(N=N, B=B, calB=calB, tau=tau, sigma=sig.copy(), chi=chi,
                       w0=w0, w1=w1, hat_phi=hp.copy())


def winding(rd: RiemannData, t):
    """2N-vector (w(t), -w(t)) with w(t) = w1 t + w0; vectorised over t (last axis)."""
    t = np.asarray(t, dtype=float)
    w = rd.w1.reshape((-1,) + (1,) * t.ndim) * t + rd.w0.reshape((-1,) + (1,) * t.ndim)
    return np.concatenate([w, -w], axis=0)


def status_from_winding(w_half, p: float):
    """Status of the first N components from w_j; the mirror half is 2 - st."""
    frac = w_half - np.floor(w_half)
    st = np.ones(np.shape(w_half), dtype=int)
    st = np.where(frac < (1 - p) / 2, 0, st)
    st = np.where(frac > (1 + p) / 2, 2, st)
    return st


def status(rd: RiemannData, t, p: float):
    w = winding(rd, t)[: rd.N]
    st = status_from_winding(w, p)
    return np.concatenate([st, 2 - st], axis=0)


@dataclass(frozen=True)
class Boundary:
    time: float
    mode: int
    k: int

    @property
    def label(self) -> str:
        return f"t^({self.mode})_{self.k}"


@dataclass(frozen=True)
class Interval:
    t_start: float
    t_end: float
    visible: frozenset
    statuses: tuple

    @property
    def n_visible(self) -> int:
        return len(self.visible)

    def trimmed(self, frac: float):
        h = frac * (self.t_end - self.t_start)
        return self.t_start + h, self.t_end - h


@dataclass(frozen=True)
class Partition:
    T0: float
    p: float
    boundaries: tuple
    intervals: tuple
    merged: tuple = field(default=())

    def labels(self):
        return ["0"] + [b.label for b in self.boundaries]

    def interval_at(self, t: float) -> Interval:
        for iv in self.intervals:
            if iv.t_start <= t <= iv.t_end:
                return iv
        raise ValueError(f"t = {t} outside [0, {self.T0}]")

    def to_dict(self):
        return {
            "T0": self.T0,
            "p": self.p,
            "boundaries": [{"time": b.time, "mode": b.mode, "k": b.k, "label": b.label}
                           for b in self.boundaries],
            "intervals": [{"t_start": iv.t_start, "t_end": iv.t_end,
                           "visible": sorted(iv.visible), "statuses": list(iv.statuses)}
                          for iv in self.intervals],
            "merged": [list(m) for m in self.merged],
        }


def transition_times(rd: RiemannData, j: int, T0: float, p: float):
    """All t^(j)_k in (0, T0] as (k, time) pairs, j 1-based."""
    a, b = rd.w1[j - 1], rd.w0[j - 1]
    out = []
    # n ranges over every n >= 1 whose odd or even time can land in (0, T0]
    n_hi = int(np.ceil(a * T0 + b + 1)) + 1
    for n in range(1, n_hi + 1):
        for k, off in ((2 * n - 1, (1 - p) / 2), (2 * n, (1 + p) / 2)):
            t = (off + n - 1 - b) / a
            if 0 < t <= T0:
                out.append((k, t))
    return out


def partition(rd: RiemannData, T0: float, p: float) -> Partition:
    if not T0 > 0:
        raise ValueError("T0 must be positive")
    raw = sorted(
        (Boundary(t, j, k) for j in range(1, rd.N + 1) for k, t in transition_times(rd, j, T0, p)),
        key=lambda b: (b.time, b.mode),
    )
    tol = COINCIDENCE_TOL * T0
    kept, merged = [], []
    for b in raw:
        if kept and b.time - kept[-1].time <= tol and b.mode != kept[-1].mode:
            merged.append((kept[-1].label, b.label))
            continue
        kept.append(b)
    if merged:
        warnings.warn(f"coincident transition times merged: {merged}", CoincidentBoundaries)

    edges = [0.0] + [b.time for b in kept]
    if edges[-1] < T0:
        edges.append(T0)
    intervals = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        st = status(rd, 0.5 * (lo + hi), p)
        vis = frozenset(int(j) + 1 for j in np.flatnonzero(st[: rd.N] == 1))
        intervals.append(Interval(lo, hi, vis, tuple(int(s) for s in st)))
    return Partition(T0=T0, p=p, boundaries=tuple(kept), intervals=tuple(intervals),
                     merged=tuple(merged))

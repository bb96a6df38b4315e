"""Elementary closed forms: Akhmediev breather, one-mode recurrence lattice,
multi-mode appearance estimates and the Fourier-energy laws at a peak."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGap, ModeCollision
from .riemann_core import RiemannData, winding
from .spectral_data import DEGENERATE_FLOOR, CauchyData, ModeSet


def wrap_centered(x, L: float):
    """Representative of x mod L in (-L/2, L/2]."""
    r = np.mod(np.asarray(x, dtype=float) + L / 2, L) - L / 2
    return np.where(r <= -L / 2, r + L, r)


@dataclass(frozen=True)
class BreatherParams:
    theta: float
    X: float = 0.0
    T: float = 0.0

    def __post_init__(self):
        if not 0 < self.theta < np.pi / 2:
            raise ValueError(f"theta must lie in (0, pi/2), got {self.theta}")

    @property
    def k(self) -> float:
        return 2 * np.cos(self.theta)

    @property
    def sigma(self) -> float:
        return 2 * np.sin(2 * self.theta)

    @property
    def peak(self) -> float:
        return 1 + 2 * np.sin(self.theta)


def akhmediev(params: BreatherParams, x, t):
    """F(x, t; theta, X, T), an exact solution of the focusing NLS."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    th = params.theta
    s = params.sigma * (t - params.T)
    c = np.sin(th) * np.cos(params.k * (x - params.X))
    return np.exp(2j * t) * (np.cosh(s + 2j * th) + c) / (np.cosh(s) - c)


@dataclass(frozen=True)
class RecurrenceParams:
    n: int
    phi: float
    X1: float
    T1: float
    dX: float
    dT: float
    phase_step: float
    xn: float
    xtilde_n: float

    def X(self, m: int) -> float:
        return self.X1 + (m - 1) * self.dX

    def T(self, m: int) -> float:
        return self.T1 + (m - 1) * self.dT

    def Phi(self, m: int) -> float:
        return 2 * self.phi + (m - 1) * self.phase_step

    @property
    def peak_height(self) -> float:
        return 1 + 2 * np.sin(self.phi)

    def breather(self, m: int) -> BreatherParams:
        return BreatherParams(self.phi, self.X(m), self.T(m))

    def lattice(self, T0: float):
        """(m, X^(m), T^(m)) for every appearance with T^(m) <= T0."""
        out, m = [], 1
        while self.T(m) <= T0:
            out.append((m, self.X(m), self.T(m)))
            m += 1
        return out

    def sequence(self, x, t: float):
        """Breather-sequence approximant: the appearance nearest to t."""
        m = max(1, int(np.floor((t - self.T1) / self.dT + 0.5)) + 1)
        return np.exp(1j * self.Phi(m)) * akhmediev(self.breather(m), x, t)


def recurrence_params(data: CauchyData, modes: ModeSet, n: int,
                      floor: float = DEGENERATE_FLOOR) -> RecurrenceParams:
    if not 1 <= n <= modes.N:
        raise ValueError(f"mode index {n} outside 1..{modes.N}")
    i = n - 1
    a, b = modes.alpha[i], modes.beta[i]
    if not abs(a * b) > floor:
        raise DegenerateGap(n, float(abs(a * b)))
    eps, k, sig, phi = data.epsilon, modes.k[i], modes.sigma[i], modes.phi[i]
    T1 = np.log(sig**2 / (2 * eps * abs(a))) / sig
    dT = 2 / sig * np.log(sig**2 / (2 * eps * np.sqrt(abs(a * b))))
    X1 = (np.angle(a) + np.pi / 2) / k
    dX = float(wrap_centered(np.angle(a * b) / k, data.L))
    return RecurrenceParams(n=n, phi=float(phi), X1=float(X1), T1=float(T1), dX=dX,
                            dT=float(dT), phase_step=float(4 * phi),
                            xn=float(modes.x_alpha[i]), xtilde_n=float(modes.x_beta[i]))


def pair_delay(modes: ModeSet, j: int, k: int) -> float:
    """Delta_T(j, k) = (2/sigma_j) log|sin(phi_j+phi_k)/sin(phi_j-phi_k)|."""
    pj, pk = modes.phi[j - 1], modes.phi[k - 1]
    d = np.sin(pj - pk)
    if j == k or abs(d) < 1e-14:
        raise ModeCollision(f"angles of modes {j} and {k} coincide")
    return float(2 / modes.sigma[j - 1] * np.log(abs(np.sin(pj + pk) / d)))


def appearance_counts(rd: RiemannData, j: int, t: float) -> np.ndarray:
    """M_k: nearest integer to w_k(t) (ties to even) for k != j, floor(w_j) for k = j."""
    w = winding(rd, t)[: rd.N]
    M = np.rint(w).astype(int)
    M[j - 1] = int(np.floor(w[j - 1]))
    return M


@dataclass(frozen=True)
class AppearanceEstimate:
    j: int
    T_max: float
    X_max: float
    M: tuple = field(default=())


def appearance_estimate(data: CauchyData, modes: ModeSet, rd: RiemannData, j: int,
                        M=None, t: float | None = None) -> AppearanceEstimate:
    """Peak coordinates of an isolated mode j.

    Pass the appearance counts ``M`` directly, or a time ``t`` inside the
    interval where mode j is the only visible one to read them off the winding.
    """
    if M is None:
        if t is None:
            raise ValueError("need either M or a time t inside the isolated interval")
        M = appearance_counts(rd, j, t)
    M = np.asarray(M, dtype=int)
    for a in range(modes.N):
        for b in range(a + 1, modes.N):
            if abs(modes.phi[a] - modes.phi[b]) < 1e-14:
                raise ModeCollision(f"angles of modes {a + 1} and {b + 1} coincide")
    rp = recurrence_params(data, modes, j)
    T = rp.T1 + M[j - 1] * rp.dT
    T += sum(M[k - 1] * pair_delay(modes, j, k) for k in range(1, modes.N + 1) if k != j)
    X = float(wrap_centered(rp.X1 + M[j - 1] * rp.dX, data.L))
    return AppearanceEstimate(j=j, T_max=float(T), X_max=X, M=tuple(int(m) for m in M))


@dataclass(frozen=True)
class FourierEnergyLaw:
    background_at_peak: float
    mode_law: dict
    recurrence_values: dict


def fourier_energy_laws(modes: ModeSet, n: int = 1, data: CauchyData | None = None,
                        m_max: int = 8) -> FourierEnergyLaw:
    """Harmonic energies |u_m|^2 (harmonics of k_n) at the first peak and at
    the recurrence time."""
    phi = modes.phi[n - 1]
    bg = (2 * np.cos(phi) - 1) ** 2
    law = {m: 4 * np.cos(phi) ** 2 * np.tan(phi / 2) ** (2 * abs(m))
           for m in range(-m_max, m_max + 1) if m != 0}
    rec = {0: 1.0}
    if data is not None:
        for s in (1, -1):
            rec[s] = data.epsilon**2 * abs(data.coefficient(s * n)) ** 2
    return FourierEnergyLaw(background_at_peak=float(bg), mode_law=law, recurrence_values=rec)

"""Cauchy data and the elementary spectral quantities derived from it.

The problem is the periodic focusing NLS ``i u_t + u_xx + 2|u|^2 u = 0`` with
``u(x, 0) = 1 + eps * v(x)``, ``v(x) = sum_j c_j exp(i k_j x)``, ``k_j = 2 pi j / L``.
Everything here is a closed-form function of ``(L, eps, c_j)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DegenerateGap, GenericityViolation

GENERICITY_TOL = 1e-12
DEGENERATE_FLOOR = 1e-30


def principal_sqrt(z):
    """Square root with Re >= 0; ties on the imaginary axis go to Im >= 0."""
    s = np.sqrt(np.asarray(z, dtype=complex))
    flip = (s.real < 0) | ((s.real == 0) & (s.imag < 0))
    return np.where(flip, -s, s)


@dataclass(frozen=True)
class CauchyData:
    L: float
    epsilon: float
    coeffs: Mapping[int, complex]
    T0: float = 30.0
    p: float = 0.5

    def __post_init__(self):
        coeffs = {int(j): complex(c) for j, c in dict(self.coeffs).items()}
        object.__setattr__(self, "coeffs", coeffs)
        if not self.L > 0:
            raise ValueError(f"period L must be positive, got {self.L}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not self.T0 > 0:
            raise ValueError(f"T0 must be positive, got {self.T0}")
        if not 0 < self.p <= 1:
            raise ValueError(f"accuracy exponent p must lie in (0, 1], got {self.p}")
        if 0 in coeffs:
            raise ValueError("c_0 must be absent: the perturbation has zero average")
        r = self.L / np.pi
        if abs(r - round(r)) < GENERICITY_TOL:
            raise GenericityViolation(f"L/pi = {r!r} is an integer (resonant period)")
        n = self.n_unstable
        if not any(c != 0 for j, c in coeffs.items() if 1 <= abs(j) <= n):
            raise ValueError("no unstable mode (1 <= |j| <= floor(L/pi)) is excited")

    @property
    def n_unstable(self) -> int:
        return int(np.floor(self.L / np.pi))

    def coefficient(self, j: int) -> complex:
        return self.coeffs.get(int(j), 0j)

    def wavenumber(self, j):
        return 2 * np.pi * np.asarray(j) / self.L

    def perturbation(self, x):
        """v(x), evaluated on any array of positions."""
        x = np.asarray(x, dtype=float)
        v = np.zeros(x.shape, dtype=complex)
        for j, c in sorted(self.coeffs.items()):
            v += c * np.exp(1j * self.wavenumber(j) * x)
        return v

    def initial_field(self, x):
        return 1.0 + self.epsilon * self.perturbation(x)

    def with_epsilon(self, epsilon: float) -> "CauchyData":
        return CauchyData(self.L, epsilon, self.coeffs, self.T0, self.p)


@dataclass(frozen=True)
class ModeSet:
    """Unstable-mode data; arrays of length N, hatted arrays of length 2N."""

    N: int
    k: np.ndarray
    sigma: np.ndarray
    phi: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    hat_phi: np.ndarray
    hat_alpha: np.ndarray
    hat_beta: np.ndarray
    sqrt_ab: np.ndarray
    x_alpha: np.ndarray = field(repr=False)
    x_beta: np.ndarray = field(repr=False)


def derive_modes(data: CauchyData, floor: float = DEGENERATE_FLOOR) -> ModeSet:
    N = data.n_unstable
    j = np.arange(1, N + 1)
    phi = np.arccos(np.pi * j / data.L)
    k = 2 * np.cos(phi)
    sigma = 2 * np.sin(2 * phi)
    cp = np.array([data.coefficient(i) for i in j], dtype=complex)
    cm = np.array([data.coefficient(-i) for i in j], dtype=complex)
    alpha = np.exp(-1j * phi) * np.conj(cp) - np.exp(1j * phi) * cm
    beta = np.exp(1j * phi) * np.conj(cm) - np.exp(-1j * phi) * cp
    ab = np.abs(alpha * beta)
    for i in range(N):
        if not ab[i] > floor:
            raise DegenerateGap(i + 1, float(ab[i]))
    s = principal_sqrt(alpha * beta)
    x_alpha = (np.angle(alpha) + np.pi / 2) / k
    x_beta = (-np.angle(beta) + np.pi / 2) / k
    return ModeSet(
        N=N,
        k=k,
        sigma=sigma,
        phi=phi,
        alpha=alpha,
        beta=beta,
        hat_phi=np.concatenate([phi, -phi]),
        hat_alpha=np.concatenate([alpha, np.conj(beta)]),
        hat_beta=np.concatenate([beta, np.conj(alpha)]),
        sqrt_ab=np.concatenate([s, np.conj(s)]),
        x_alpha=x_alpha,
        x_beta=x_beta,
    )


@dataclass(frozen=True)
class SpectralDiagnostics:
    """Leading-order branch points and divisor of the perturbed Dirac operator.

    ``branch_points[n-1] = (E_{2n-1}, E_{2n})`` near ``lambda_n = i sin(phi_n)``;
    ``tilde_branch_points`` are the partners near ``-lambda_n``.
    """

    lam: np.ndarray
    mu: np.ndarray
    branch_points: np.ndarray
    tilde_branch_points: np.ndarray
    alpha_tilde: np.ndarray
    beta_tilde: np.ndarray
    divisor_lambda_plus: np.ndarray
    divisor_p_plus: np.ndarray
    divisor_lambda_minus: np.ndarray
    divisor_p_minus: np.ndarray


def perturbed_spectrum(data: CauchyData, modes: ModeSet) -> SpectralDiagnostics:
    eps = data.epsilon
    phi = modes.phi
    # resonant points of the background: mu_n = cos(phi_n) = pi n / L and
    # lambda_n^2 = mu_n^2 - 1, so mu_n +- lambda_n = exp(+-i phi_n)
    lam = 1j * np.sin(phi)
    mu = np.cos(phi)
    j = np.arange(1, modes.N + 1)
    cp = np.array([data.coefficient(i) for i in j], dtype=complex)
    cm = np.array([data.coefficient(-i) for i in j], dtype=complex)
    alpha_t = (mu + lam) * np.conj(cp) - (mu - lam) * cm
    beta_t = (mu - lam) * np.conj(cm) - (mu + lam) * cp
    s = modes.sqrt_ab[: modes.N]
    st = principal_sqrt(alpha_t * beta_t)
    half = eps / (2 * lam)
    E = np.stack([lam - half * s, lam + half * s], axis=1)
    Et = np.stack([-lam + half * st, -lam - half * st], axis=1)
    a, b = modes.alpha, modes.beta
    lam_plus = lam + eps / (4 * lam) * ((mu + lam) * a + (mu - lam) * b)
    p_plus = eps / (4 * mu) * ((mu + lam) * a - (mu - lam) * b)
    lam_minus = -lam - eps / (4 * lam) * ((mu - lam) * alpha_t + (mu + lam) * beta_t)
    p_minus = eps / (4 * mu) * ((mu - lam) * alpha_t - (mu + lam) * beta_t)
    return SpectralDiagnostics(
        lam=lam,
        mu=mu,
        branch_points=E,
        tilde_branch_points=Et,
        alpha_tilde=alpha_t,
        beta_tilde=beta_t,
        divisor_lambda_plus=lam_plus,
        divisor_p_plus=p_plus,
        divisor_lambda_minus=lam_minus,
        divisor_p_minus=p_minus,
    )


def linear_stage(data: CauchyData, modes: ModeSet, x, t):
    """O(eps)-accurate linearised modulation-instability field for t = O(1).

    Stable-mode oscillations are dropped; only the N unstable pairs enter.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    eps = data.epsilon
    acc = np.ones(np.broadcast(x, t).shape, dtype=complex)
    for i in range(modes.N):
        s2 = np.sin(2 * modes.phi[i])
        grow = eps * abs(modes.alpha[i]) / s2 * np.exp(modes.sigma[i] * t + 1j * modes.phi[i])
        decay = eps * abs(modes.beta[i]) / s2 * np.exp(-modes.sigma[i] * t - 1j * modes.phi[i])
        acc = acc + grow * np.cos(modes.k[i] * (x - modes.x_alpha[i]))
        acc = acc + decay * np.cos(modes.k[i] * (x - modes.x_beta[i]))
    return np.exp(2j * t) * acc

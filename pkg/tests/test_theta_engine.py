import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgnls import CauchyData, FiniteGapField, derive_modes, riemann_matrix, solve_fg, theta_args
from fgnls.errors import ThetaUnderflow, TooManyModes
from fgnls.theta_engine import _guard, log_theta_full

from test_spectral_data import periods, random_data


def _identity_gap(args, rd, which):
    """log(raw) - log(centred) minus the exact constant relating them; ~0."""
    f = args.floor_w
    B = rd.B
    z = args.pick(which, "raw")
    const = 0.5 * f @ B @ f - np.tensordot(f, z, axes=1) + (np.trace(B) - B.sum()) / 8
    raw = log_theta_full(args, rd, which, "raw")
    cen = log_theta_full(args, rd, which, "centered")
    return np.abs(np.exp(raw - cen - const) - 1)


@pytest.mark.parametrize("fixture", ["three", "four"])
def test_raw_shifted_centered_agree(fixture, request, rng):
    s = request.getfixturevalue(fixture)
    x = rng.uniform(-s.data.L, s.data.L, 16)
    for t in rng.uniform(0, s.data.T0, 12):
        a = theta_args(s.modes, s.rd, x, t)
        for which in ("plus", "minus"):
            assert _identity_gap(a, s.rd, which).max() < 1e-10
            sh = log_theta_full(a, s.rd, which, "shifted")
            cen = log_theta_full(a, s.rd, which, "centered")
            c = (np.trace(s.rd.B) - s.rd.B.sum()) / 8
            assert np.abs(np.exp(sh - cen - c) - 1).max() < 1e-10


@settings(max_examples=25, deadline=None)
@given(L=periods.filter(lambda L: L < 16), seed=st.integers(0, 2**31 - 1),
       t=st.floats(0, 40), x=st.floats(-10, 10))
def test_raw_vs_centered_random_data(L, seed, t, x):
    d = random_data(L, seed)
    m = derive_modes(d)
    try:
        rd = riemann_matrix(m, d.epsilon)
    except ArithmeticError:
        return
    a = theta_args(m, rd, np.array([x]), t)
    for which in ("plus", "minus"):
        assert _identity_gap(a, rd, which).max() < 1e-10


def test_box_lattice_oracle(three):
    """Direct sum over a 5**6 box of integer vectors around the active cell."""
    m, rd = three.modes, three.rd
    offs = np.array(list(itertools.product(range(-2, 3), repeat=6)), dtype=float)
    x = np.linspace(-5, 5, 21)
    for t in (3.0, 8.0, 15.0, 25.0, 40.0, 55.0):
        a = theta_args(m, rd, x, t)
        n = offs - a.floor_w
        quad = 0.5 * np.einsum("vi,ij,vj->v", n, rd.B, n)
        logs = []
        for z in (a.z_plus, a.z_minus):
            e = quad[:, None] + n @ z
            s = e.real.max(0)
            logs.append(s + np.log(np.exp(e - s).sum(0)))
        box = np.exp(2j * t + logs[0] - logs[1])
        assert np.abs(box - solve_fg(three.data, m, rd, None, x, t)).max() < 1e-4


@pytest.mark.parametrize("fixture", ["three", "four", "six"])
def test_fourier_collapse_matches_direct_sum(fixture, request, rng):
    s = request.getfixturevalue(fixture)
    F = FiniteGapField(s.data, s.modes, s.rd)
    x = rng.uniform(-s.data.L / 2, s.data.L / 2, 33)
    for t in rng.uniform(0, s.data.T0, 6):
        for mode in ("full", "reduced"):
            direct = solve_fg(s.data, s.modes, s.rd, None, x, t, mode=mode)
            fast = F.full(x, t) if mode == "full" else F.reduced(x, t)
            assert np.abs(direct - fast).max() < 1e-11


@pytest.mark.parametrize("fixture", ["three", "four"])
def test_x_periodicity(fixture, request, rng):
    s = request.getfixturevalue(fixture)
    x = rng.uniform(-s.data.L / 2, s.data.L / 2, 25)
    for t in rng.uniform(0, s.data.T0, 5):
        u0 = solve_fg(s.data, s.modes, s.rd, None, x, t)
        u1 = solve_fg(s.data, s.modes, s.rd, None, x + s.data.L, t)
        assert np.max(np.abs(u1 - u0) / np.abs(u0)) < 1e-10


def test_background_interval_gives_unit_modulus(three):
    empty = [iv for iv in three.part.intervals if iv.n_visible == 0]
    assert empty, "expected a background interval"
    iv = empty[0]
    F = FiniteGapField(three.data, three.modes, three.rd)
    x = np.linspace(-5, 5, 64)
    for t in np.linspace(*iv.trimmed(0.1), 5):
        np.testing.assert_allclose(np.abs(F.reduced(x, t)), 1.0, atol=1e-14)


def test_initial_field_is_reproduced(four):
    x = np.linspace(-7, 7, 101)
    u = solve_fg(four.data, four.modes, four.rd, None, x, 0.0)
    assert np.abs(u - four.data.initial_field(x)).max() < 10 * four.data.epsilon


def test_reduced_close_to_full_inside_intervals(four):
    F = FiniteGapField(four.data, four.modes, four.rd)
    x = np.linspace(-7, 7, 65)
    for iv in four.part.intervals:
        lo, hi = iv.trimmed(0.1)
        for t in np.linspace(lo, hi, 4):
            assert np.abs(F.full(x, t) - F.reduced(x, t)).max() < 5e-2


def test_too_many_modes():
    L = 13 * np.pi + 0.5
    d = CauchyData(L, 1e-8, {j: 0.3 for j in range(1, 14)} | {-j: 0.2j for j in range(1, 14)})
    m = derive_modes(d)
    rd = riemann_matrix(m, d.epsilon)
    with pytest.raises(TooManyModes):
        FiniteGapField(d, m, rd)
    with pytest.raises(TooManyModes):
        solve_fg(d, m, rd, None, 0.0, 1.0)


def test_underflow_guard():
    with pytest.raises(ThetaUnderflow):
        _guard(np.array([0.0, -800.0 + 0j]))
    _guard(np.array([-600.0 + 1j]))


def test_time_outside_partition(three):
    with pytest.raises(ValueError):
        solve_fg(three.data, three.modes, three.rd, three.part, 0.0, three.data.T0 + 1)

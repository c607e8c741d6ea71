import math

import numpy as np
import pytest

from photonam import fields as flds
from photonam.errors import BandLimitViolation, ChannelMismatch, OffLatticeMode
from photonam.modes import WaveVector, polarization_frame

LENGTH = 2.0 * math.pi
K1 = (0.0, 0.0, 1.0)


def make_state(amps, grid_n=9, length=LENGTH):
    return flds.ClassicalFieldState(length, grid_n, tuple(amps))


def test_state_validation():
    with pytest.raises(OffLatticeMode):
        make_state([((0.5, 0.0, 0.0), 1, 1.0)])
    with pytest.raises(BandLimitViolation):
        make_state([((0.0, 0.0, 3.0), 1, 1.0)], grid_n=5)
    with pytest.raises(ChannelMismatch):
        make_state([(K1, 7, 1.0)])


def test_zero_state_gives_zero_fields():
    state = make_state([(K1, 1, 0.0)])
    maps = flds.eval_fields(state)
    for arr in (maps.e, maps.b, maps.a, maps.pi, maps.a0, maps.pi0):
        assert np.max(np.abs(arr)) == 0.0
    assert np.max(np.abs(flds.spatial_spin_integral(state))) == 0.0


def test_single_mode_b_field_direction_and_amplitude():
    state = make_state([(K1, 1, 1.0)])
    maps = flds.eval_fields(state)
    frame = polarization_frame(WaveVector(K1))
    # B is parallel to eps(k, 2) everywhere, with the sqrt(omega/2V) envelope
    along = maps.b @ frame.spatial(2)
    residual = maps.b - along[:, None] * frame.spatial(2)[None, :]
    assert np.max(np.abs(residual)) <= 1e-14
    volume = LENGTH ** 3
    pos = flds.grid_positions(state)
    expected = -2.0 * math.sqrt(1.0 / (2.0 * volume)) * np.sin(pos @ np.array(K1))
    np.testing.assert_allclose(along, expected, atol=1e-13)


def test_longitudinal_e_cancellation_when_amplitudes_match():
    state = make_state([(K1, 3, 0.4 + 0.1j), (K1, 0, 0.4 + 0.1j)])
    maps = flds.eval_fields(state)
    assert np.max(np.abs(maps.e)) <= 1e-15
    assert np.max(np.abs(maps.a)) > 0.0


def test_transverse_split_state_level():
    state = make_state([(K1, 1, 1.0), (K1, 3, 0.5), (K1, 0, 0.25)])
    trans, longi = flds.transverse_split(state)
    assert {lam for (_, lam, _) in trans.amplitudes} == {1}
    assert {lam for (_, lam, _) in longi.amplitudes} == {0, 3}
    a_t = flds.eval_fields(trans).a
    a_l = flds.eval_fields(longi).a
    np.testing.assert_allclose(a_t + a_l, flds.eval_fields(state).a, atol=1e-14)

    only_longitudinal = make_state([(K1, 3, 1.0)])
    t_only, _ = flds.transverse_split(only_longitudinal)
    assert np.max(np.abs(flds.eval_fields(t_only).a)) == 0.0


def test_transverse_split_grid_level():
    rng = np.random.default_rng(12)
    amps = []
    for n_int in [(0, 0, 1), (1, 0, 0), (0, 1, 1)]:
        k = tuple((2 * math.pi / LENGTH) * np.array(n_int, dtype=float))
        for lam in (1, 2, 3):
            amps.append((k, lam, rng.normal() + 1j * rng.normal()))
    state = make_state(amps)
    n = state.grid_n
    field = flds.eval_fields(state).a.reshape(n, n, n, 3)
    trans, longi = flds.transverse_split(field)
    np.testing.assert_allclose(trans + longi, field, atol=1e-13)
    trans2, _ = flds.transverse_split(trans)
    np.testing.assert_allclose(trans2, trans, atol=1e-12)
    assert abs(float(np.sum(trans * longi))) <= 1e-12
    hat = np.fft.fftn(trans, axes=(0, 1, 2))
    freq = np.fft.fftfreq(n, d=1.0 / n)
    kx, ky, kz = np.meshgrid(freq, freq, freq, indexing="ij")
    div = kx * hat[..., 0] + ky * hat[..., 1] + kz * hat[..., 2]
    assert np.max(np.abs(div)) <= 1e-11


def test_spin_integral_circular_pair_closed_form():
    for sign, expected in ((1.0, 2.0), (-1.0, -2.0)):
        state = make_state([(K1, 1, 1.0), (K1, 2, sign * 1.0j)])
        integral = flds.spatial_spin_integral(state)
        formula = flds.mode_spin_formula(state)
        np.testing.assert_allclose(integral, formula, atol=1e-12)
        np.testing.assert_allclose(integral, [0.0, 0.0, expected], atol=1e-12)


def test_spin_integral_linear_polarization_vanishes():
    state = make_state([(K1, 1, 0.8)])
    assert np.max(np.abs(flds.spatial_spin_integral(state))) <= 1e-14


def test_spin_duality_random_states():
    rng = np.random.default_rng(21)
    lattice = [(0, 0, 1), (1, 0, 0), (0, 1, 1), (0, 0, -1), (-1, 0, 0), (0, -1, -1)]
    for _ in range(20):
        amps = []
        for n_int in lattice:
            k = tuple((2 * math.pi / LENGTH) * np.array(n_int, dtype=float))
            for lam in (1, 2):
                amps.append((k, lam, rng.normal() + 1j * rng.normal()))
        state = make_state(amps)
        integral = flds.spatial_spin_integral(state)
        formula = flds.mode_spin_formula(state)
        assert np.max(np.abs(integral - formula)) <= 1e-9


def test_parseval_energy_transverse():
    rng = np.random.default_rng(22)
    amps = []
    for n_int in [(0, 0, 1), (1, 1, 0)]:
        k = tuple((2 * math.pi / LENGTH) * np.array(n_int, dtype=float))
        for lam in (1, 2):
            amps.append((k, lam, rng.normal() + 1j * rng.normal()))
    state = make_state(amps)
    maps = flds.eval_fields(state)
    grid_energy = 0.5 * (np.sum(maps.e ** 2) + np.sum(maps.b ** 2)) * flds.cell_volume(state)
    assert abs(grid_energy - flds.transverse_energy(state)) <= 1e-9


def test_density_map_uniform_for_single_circular_wave():
    state = make_state([(K1, 1, 1.0), (K1, 2, 1.0j)])
    density = flds.spin_density_map(state)
    spread = np.max(np.abs(density - density.mean(axis=0)), axis=0)
    assert np.max(spread) <= 1e-13
    total = np.sum(density, axis=0) * flds.cell_volume(state)
    np.testing.assert_allclose(total, flds.spatial_spin_integral(state), atol=1e-13)


def test_density_map_counterpropagating_varies_but_integrates():
    k2 = (0.0, 0.0, -1.0)
    state = make_state([(K1, 1, 1.0), (K1, 2, 1.0j), (k2, 1, 0.5), (k2, 2, -0.5j)])
    density = flds.spin_density_map(state)
    spread = np.max(np.abs(density - density.mean(axis=0)))
    assert spread > 1e-3
    total = np.sum(density, axis=0) * flds.cell_volume(state)
    np.testing.assert_allclose(total, flds.mode_spin_formula(state), atol=1e-12)


def test_oam_integral_paired_recipe():
    # negation-paired amplitudes with alpha(-k) = conj(alpha(k)); a single
    # circular pair along z carries no net orbital angular momentum
    k2 = (0.0, 0.0, -1.0)
    alpha = 0.6 + 0.3j
    state = make_state(
        [(K1, 1, alpha), (k2, 1, np.conj(alpha)), (K1, 2, 1.0j * alpha), (k2, 2, np.conj(1.0j * alpha))]
    )
    oam = flds.spatial_oam_integral(state)
    assert np.max(np.abs(oam)) <= 1e-10
    assert np.max(np.abs(flds.spatial_oam_integral(make_state([(K1, 1, 0.0)])))) == 0.0


def test_state_csv_round_trip():
    text = "0.0 0.0 1.0 1 0.5 -0.5\n0.0,0.0,1.0,2,0.0,1.0\n"
    state = flds.state_from_csv(text, LENGTH, 9)
    assert len(state.amplitudes) == 2
    assert state.amplitudes[0][2] == complex(0.5, -0.5)
    with pytest.raises(ChannelMismatch):
        flds.state_from_csv("1 2 3 4 5\n", LENGTH, 9)


def test_density_csv_layout():
    state = make_state([(K1, 1, 1.0), (K1, 2, 1.0j)], grid_n=3)
    density = flds.spin_density_map(state)
    text = flds.density_csv(state, density).decode()
    lines = text.strip().splitlines()
    assert lines[0] == "x,y,z,sx,sy,sz"
    assert len(lines) == 1 + 27
    first = [float(v) for v in lines[1].split(",")]
    np.testing.assert_allclose(first[:3], flds.grid_positions(state)[0], atol=1e-15)

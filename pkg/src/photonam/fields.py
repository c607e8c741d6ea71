"""Classical-amplitude field evaluation on periodic boxes.

A ClassicalFieldState assigns a complex amplitude to each (k, lam) mode of a
cubic box of side L; wave vectors must sit on the reciprocal lattice
2 pi n / L and the sampling grid must satisfy N >= 2 max|n| + 1 so that
Riemann sums of quadratic field products are exact trigonometric quadratures.

Grid coordinates are centered, x_j = -L/2 + j L / N, which makes the
position-weighted orbital integrand unbiased for negation-paired amplitude
sets.  All fields are real; the electric field carries the (alpha_3 -
alpha_0) longitudinal weight, and the magnetic field is purely transverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BandLimitViolation, ChannelMismatch, OffLatticeMode
from .modes import WaveVector, polarization_frame

_LATTICE_TOL = 1e-9


@dataclass(frozen=True)
class ClassicalFieldState:
    """Amplitudes alpha(k, lam) on the reciprocal lattice of a periodic box."""

    box_length: float
    grid_n: int
    amplitudes: tuple  # ((kx, ky, kz), lam, alpha) entries

    def __post_init__(self) -> None:
        if self.box_length <= 0:
            raise ChannelMismatch("box length must be positive")
        if self.grid_n < 1:
            raise ChannelMismatch("grid resolution must be at least 1")
        entries = []
        max_index = 0
        for k, lam, alpha in self.amplitudes:
            if lam not in (0, 1, 2, 3):
                raise ChannelMismatch(f"unknown polarization label {lam!r}")
            kv = WaveVector(tuple(float(c) for c in k))
            lattice = kv.as_array() * self.box_length / (2.0 * math.pi)
            rounded = np.round(lattice)
            if np.max(np.abs(lattice - rounded)) > _LATTICE_TOL:
                raise OffLatticeMode(f"mode {kv.components} off the box lattice")
            max_index = max(max_index, int(np.max(np.abs(rounded))))
            entries.append((kv.components, int(lam), complex(alpha)))
        if self.grid_n < 2 * max_index + 1:
            raise BandLimitViolation(
                f"grid N = {self.grid_n} below band limit {2 * max_index + 1}"
            )
        object.__setattr__(self, "amplitudes", tuple(entries))

    def grouped(self) -> dict:
        """Amplitudes per wave vector as length-4 complex arrays."""
        out: dict = {}
        for k, lam, alpha in self.amplitudes:
            out.setdefault(k, np.zeros(4, dtype=complex))[lam] += alpha
        return out


def grid_positions(state: ClassicalFieldState) -> np.ndarray:
    """Centered sample positions, shape (N^3, 3)."""
    n, length = state.grid_n, state.box_length
    axis = -length / 2.0 + np.arange(n) * (length / n)
    xs, ys, zs = np.meshgrid(axis, axis, axis, indexing="ij")
    return np.stack([xs.ravel(), ys.ravel(), zs.ravel()], axis=1)


def cell_volume(state: ClassicalFieldState) -> float:
    return (state.box_length / state.grid_n) ** 3


@dataclass(frozen=True, eq=False)
class FieldMaps:
    """Real field samples on the box grid, flattened to (N^3, ...)."""

    e: np.ndarray
    b: np.ndarray
    a: np.ndarray
    pi: np.ndarray
    a0: np.ndarray
    pi0: np.ndarray


def eval_fields(state: ClassicalFieldState) -> FieldMaps:
    """Evaluate E, B, A, pi (vectors) and A0, pi0 (scalars) on the grid."""
    pos = grid_positions(state)
    volume = state.box_length ** 3
    m = pos.shape[0]
    e = np.zeros((m, 3))
    b = np.zeros((m, 3))
    a = np.zeros((m, 3))
    pi = np.zeros((m, 3))
    a0 = np.zeros(m)
    pi0 = np.zeros(m)
    for k, amps in state.grouped().items():
        kv = WaveVector(k)
        omega = kv.omega
        frame = polarization_frame(kv)
        phase = np.exp(1j * (pos @ kv.as_array()))
        low = 1.0 / math.sqrt(2.0 * omega * volume)
        high = math.sqrt(omega / (2.0 * volume))
        spatial = sum(amps[lam] * frame.spatial(lam) for lam in (1, 2, 3))
        a += 2.0 * low * np.real(phase[:, None] * spatial[None, :])
        pi += -2.0 * high * np.imag(phase[:, None] * spatial[None, :])
        a0 += 2.0 * low * np.real(amps[0] * phase)
        pi0 += -2.0 * high * np.imag(amps[0] * phase)
        e_vec = (
            amps[1] * frame.spatial(1)
            + amps[2] * frame.spatial(2)
            + (amps[3] - amps[0]) * frame.spatial(3)
        )
        e += -2.0 * high * np.imag(phase[:, None] * e_vec[None, :])
        b_vec = amps[1] * frame.spatial(2) - amps[2] * frame.spatial(1)
        b += -2.0 * high * np.imag(phase[:, None] * b_vec[None, :])
    return FieldMaps(e=e, b=b, a=a, pi=pi, a0=a0, pi0=pi0)


def transverse_split(obj, box_length: float | None = None):
    """Split a state or a gridded vector field into transverse and
    longitudinal parts; the two parts sum back to the input exactly.

    For states the split acts on polarization labels (lam = 1, 2 transverse;
    lam = 3 and the scalar channel ride with the longitudinal part).  For a
    gridded field of shape (N, N, N, 3) the split projects each Fourier mode
    on and off its propagation direction; the k = 0 component stays with the
    transverse part.
    """
    if isinstance(obj, ClassicalFieldState):
        trans = tuple(e for e in obj.amplitudes if e[1] in (1, 2))
        longi = tuple(e for e in obj.amplitudes if e[1] in (0, 3))
        mk = lambda amps: ClassicalFieldState(obj.box_length, obj.grid_n, amps)
        return mk(trans), mk(longi)
    field = np.asarray(obj, dtype=float)
    if field.ndim != 4 or field.shape[3] != 3:
        raise ChannelMismatch("gridded fields must have shape (N, N, N, 3)")
    n = field.shape[0]
    hat = np.fft.fftn(field, axes=(0, 1, 2))
    freq = np.fft.fftfreq(n, d=1.0 / n)
    kx, ky, kz = np.meshgrid(freq, freq, freq, indexing="ij")
    kvec = np.stack([kx, ky, kz], axis=3)
    k2 = np.sum(kvec ** 2, axis=3)
    k2safe = np.where(k2 == 0, 1.0, k2)
    proj = np.sum(kvec * hat, axis=3) / k2safe
    longi_hat = kvec * proj[..., None]
    longi_hat[k2 == 0] = 0.0
    longi = np.real(np.fft.ifftn(longi_hat, axes=(0, 1, 2)))
    return field - longi, longi


def spatial_spin_integral(state: ClassicalFieldState) -> np.ndarray:
    """Riemann sum of E_T x A_T over the box; equals the per-mode helicity
    formula for band-limited states."""
    tstate, _ = transverse_split(state)
    maps = eval_fields(tstate)
    density = np.cross(maps.e, maps.a)
    return np.sum(density, axis=0) * cell_volume(state)


def spin_density_map(state: ClassicalFieldState) -> np.ndarray:
    """Pointwise E_T x A_T on the grid, shape (N^3, 3)."""
    tstate, _ = transverse_split(state)
    maps = eval_fields(tstate)
    return np.cross(maps.e, maps.a)


def mode_spin_formula(state: ClassicalFieldState) -> np.ndarray:
    """Per-mode transverse spin sum i (conj(a2) a1 - conj(a1) a2) eps3."""
    total = np.zeros(3)
    for k, amps in state.grouped().items():
        kv = WaveVector(k)
        weight = 1j * (np.conj(amps[2]) * amps[1] - np.conj(amps[1]) * amps[2])
        total = total + np.real(weight) * polarization_frame(kv).spatial(3)
    return total


def transverse_energy(state: ClassicalFieldState) -> float:
    """Mode-sum energy of the transverse amplitudes, sum omega |alpha|^2."""
    total = 0.0
    for k, amps in state.grouped().items():
        omega = WaveVector(k).omega
        total += omega * (abs(amps[1]) ** 2 + abs(amps[2]) ** 2)
    return total


def spatial_oam_integral(state: ClassicalFieldState) -> np.ndarray:
    """Riemann sum of E_T^j (x cross grad) A_T^j with centered coordinates.

    The position weight is not box-periodic, so this equals the mode-space
    orbital value only for amplitude sets arranged to cancel the boundary
    terms (negation-paired amplitudes with alpha(-k) = conj(alpha(k)));
    otherwise treat the result as a diagnostic.
    """
    tstate, _ = transverse_split(state)
    pos = grid_positions(state)
    volume = state.box_length ** 3
    maps = eval_fields(tstate)
    grad_a = np.zeros((pos.shape[0], 3, 3))  # (point, derivative axis, component)
    for k, amps in tstate.grouped().items():
        kv = WaveVector(k)
        frame = polarization_frame(kv)
        phase = np.exp(1j * (pos @ kv.as_array()))
        low = 1.0 / math.sqrt(2.0 * kv.omega * volume)
        spatial = amps[1] * frame.spatial(1) + amps[2] * frame.spatial(2)
        deriv = 1j * kv.as_array()[None, :, None] * spatial[None, None, :]
        grad_a += 2.0 * low * np.real(phase[:, None, None] * deriv)
    x_cross_grad = np.cross(pos[:, :, None], grad_a, axis=1)
    integrand = np.einsum("pj,pij->pi", maps.e, np.swapaxes(x_cross_grad, 1, 2))
    return np.sum(integrand, axis=0) * cell_volume(state)


def state_from_csv(text: str, box_length: float, grid_n: int) -> ClassicalFieldState:
    """Parse `kx ky kz lambda re im` lines (comma or whitespace separated)."""
    amps = []
    for ln in text.strip().splitlines():
        parts = ln.replace(",", " ").split()
        if not parts or parts[0].startswith("#"):
            continue
        if len(parts) != 6:
            raise ChannelMismatch("state rows must be kx ky kz lambda re im")
        kx, ky, kz, lam, re, im = (float(p) for p in parts)
        amps.append(((kx, ky, kz), int(lam), complex(re, im)))
    return ClassicalFieldState(box_length, grid_n, tuple(amps))


def density_csv(state: ClassicalFieldState, density: np.ndarray) -> bytes:
    """Density map as `x,y,z,sx,sy,sz` rows in grid order, with header."""
    pos = grid_positions(state)
    if density.shape != pos.shape:
        raise ChannelMismatch("density map shape does not match the grid")
    lines = ["x,y,z,sx,sy,sz"]
    for p, s in zip(pos, density):
        lines.append(",".join(repr(float(v)) for v in (*p, *s)))
    return ("\n".join(lines) + "\n").encode()

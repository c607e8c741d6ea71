"""Minimal fermionic companion: spinor matrices and truncated fermion spaces.

Fermionic channels are ordered tuples; ladder operators follow the
Jordan-Wigner convention with channel 0 leftmost in the tensor product, so a
creator on channel j carries the parity string of channels 0..j-1.  This
fixes every matrix uniquely and keeps anticommutators exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse

from .errors import DimensionCapExceeded, DimensionMismatch, UnknownChannel
from .modes import orbital_matrices, shell_channels

_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


@dataclass(frozen=True, eq=False)
class SpinorBasis:
    """The 4x4 beta, alpha_i, gamma^mu and Sigma_i matrices in block form."""

    beta: np.ndarray
    alpha: tuple[np.ndarray, np.ndarray, np.ndarray]
    gamma: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    sigma: tuple[np.ndarray, np.ndarray, np.ndarray]


def spinor_matrices() -> SpinorBasis:
    eye2 = np.eye(2, dtype=complex)
    zero2 = np.zeros((2, 2), dtype=complex)
    beta = np.block([[eye2, zero2], [zero2, -eye2]])
    alpha = tuple(
        np.block([[zero2, _PAULI[ax]], [_PAULI[ax], zero2]]) for ax in "xyz"
    )
    gamma = (beta,) + tuple(beta @ a for a in alpha)
    sigma = tuple(
        np.block([[_PAULI[ax], zero2], [zero2, _PAULI[ax]]]) for ax in "xyz"
    )
    return SpinorBasis(beta=beta, alpha=alpha, gamma=gamma, sigma=sigma)


@dataclass(frozen=True)
class FermionFockSpace:
    """Occupation-number space over fermionic channels, dim = 2^#channels."""

    channels: tuple
    dim: int

    def index_of(self, channel) -> int:
        try:
            return self.channels.index(channel)
        except ValueError:
            raise UnknownChannel(f"channel {channel!r} not in space") from None

    def vacuum(self) -> np.ndarray:
        psi = np.zeros(self.dim, dtype=complex)
        psi[0] = 1.0
        return psi


def build_fermion_fock(channels, dim_cap: int = 1 << 20) -> FermionFockSpace:
    channels = tuple(tuple(ch) if isinstance(ch, list) else ch for ch in channels)
    if len(set(channels)) != len(channels):
        raise DimensionMismatch("channel labels must be unique")
    dim = 2 ** len(channels)
    if dim > dim_cap:
        raise DimensionCapExceeded(f"2^{len(channels)} = {dim} exceeds cap {dim_cap}")
    return FermionFockSpace(channels=channels, dim=dim)


@lru_cache(maxsize=None)
def _jw_lowering(ffs: FermionFockSpace, position: int) -> sparse.csr_matrix:
    z = sparse.csr_matrix(np.diag([1.0, -1.0]).astype(complex))
    lower = sparse.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    eye = sparse.identity(2, dtype=complex, format="csr")
    op = sparse.identity(1, dtype=complex, format="csr")
    for j in range(len(ffs.channels)):
        factor = z if j < position else lower if j == position else eye
        op = sparse.kron(op, factor, format="csr")
    return op


def fermion_ladder(ffs: FermionFockSpace, channel):
    """(annihilator, creator) with exact anticommutation relations."""
    c = _jw_lowering(ffs, ffs.index_of(channel))
    return c, c.conj().T.tocsr()


def fermionic_lift(ffs: FermionFockSpace, matrix: np.ndarray) -> sparse.csr_matrix:
    """sum_{ab} c_a^dag M[a, b] c_b; commutators lift without metric factors."""
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (len(ffs.channels), len(ffs.channels)):
        raise DimensionMismatch("matrix size does not match channel count")
    total = sparse.csr_matrix((ffs.dim, ffs.dim), dtype=complex)
    for b in range(len(ffs.channels)):
        rows = np.nonzero(m[:, b])[0]
        if rows.size == 0:
            continue
        left = sparse.csr_matrix((ffs.dim, ffs.dim), dtype=complex)
        for a in rows:
            left = left + m[a, b] * _jw_lowering(ffs, a).conj().T
        total = total + left @ _jw_lowering(ffs, b)
    return total.tocsr()


def spinor_orbital_channels(l_max: int) -> tuple:
    """Channels (orbital (l, m), spinor index s), ordered orbital-major."""
    return tuple((c, s) for c in shell_channels(l_max) for s in range(4))


def _channel_matrix(ffs: FermionFockSpace, entry) -> np.ndarray:
    n = len(ffs.channels)
    m = np.zeros((n, n), dtype=complex)
    for (ca, cb), val in entry.items():
        m[ffs.index_of(ca), ffs.index_of(cb)] = val
    return m


def dirac_sam(ffs: FermionFockSpace) -> tuple[sparse.csr_matrix, ...]:
    """Half the spinor rotation generators lifted over (orbital, spinor)
    channels."""
    basis = spinor_matrices()
    out = []
    for sig in basis.sigma:
        entry = {}
        for (c, s) in ffs.channels:
            for s2 in range(4):
                if sig[s, s2] != 0:
                    entry[((c, s), (c, s2))] = 0.5 * sig[s, s2]
        out.append(fermionic_lift(ffs, _channel_matrix(ffs, entry)))
    return tuple(out)


def dirac_oam(ffs: FermionFockSpace, l_max: int) -> tuple[sparse.csr_matrix, ...]:
    """Orbital generators lifted with the identity on the spinor index."""
    gens = orbital_matrices(l_max)
    chans = shell_channels(l_max)
    cidx = {c: i for i, c in enumerate(chans)}
    out = []
    for gen in gens:
        entry = {}
        for (c, s) in ffs.channels:
            for d in chans:
                val = gen[cidx[c], cidx[d]]
                if val != 0 and (d, s) in ffs.channels:
                    entry[((c, s), (d, s))] = val
        out.append(fermionic_lift(ffs, _channel_matrix(ffs, entry)))
    return tuple(out)

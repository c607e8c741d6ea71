"""Truncated Fock spaces with per-channel metric signs and bilinear lifts.

Basis order
-----------
A space over channels (c_0, ..., c_{C-1}) with per-channel cap n_max uses the
product occupation basis of dimension (n_max + 1)^C, enumerated channel-major:
basis index i encodes occupations n_j(i) = (i // (n_max+1)^(C-1-j)) % (n_max+1),
so channel 0 is the most significant digit and index 0 is the vacuum.  The
order is fixed so reports are byte-stable across runs.

Metric realization
------------------
Channels are labeled (mode_label, lam).  The annihilator of every channel is
the standard lowering matrix on that channel's factor.  The creator is the
metric adjoint of the annihilator: the plain conjugate transpose on sign +1
channels (lam = 1, 2, 3) and the NEGATIVE of the conjugate transpose on the
sign -1 scalar channel (lam = 0).  With eta = (-1)^(total scalar occupation)
this equals eta a^H eta for every channel, and the single-channel commutator
is [a, creator] = channel_sign * identity away from the truncation edge.

Truncation policy
-----------------
Commutator identities for normal-ordered bilinears are exact on the subspace
of total occupation <= n_max - 1 (in fact <= n_max); the residual outside it
is reported by the suites, never asserted.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse

from .errors import (
    DimensionCapExceeded,
    DimensionMismatch,
    UnknownChannel,
    ZeroNormState,
)
from .modes import channel_sign

DEFAULT_DIM_CAP = 1 << 20


@dataclass(frozen=True)
class FockSpace:
    """Product occupation basis over labeled channels with metric signs."""

    channels: tuple
    n_max: int
    signs: tuple
    dim: int

    def index_of(self, channel) -> int:
        try:
            return self.channels.index(channel)
        except ValueError:
            raise UnknownChannel(f"channel {channel!r} not in space") from None

    def weight(self, position: int) -> int:
        return (self.n_max + 1) ** (len(self.channels) - 1 - position)

    def occupations(self, position: int) -> np.ndarray:
        """Occupation of channel `position` for every basis index."""
        idx = np.arange(self.dim)
        return (idx // self.weight(position)) % (self.n_max + 1)

    def total_occupation(self) -> np.ndarray:
        tot = np.zeros(self.dim, dtype=int)
        for j in range(len(self.channels)):
            tot += self.occupations(j)
        return tot

    def bounded_indices(self, max_total: int) -> np.ndarray:
        return np.nonzero(self.total_occupation() <= max_total)[0]

    def vacuum(self) -> np.ndarray:
        psi = np.zeros(self.dim, dtype=complex)
        psi[0] = 1.0
        return psi

    def basis_state(self, occupations: dict) -> np.ndarray:
        """Unit vector with the given channel -> occupation assignment."""
        idx = 0
        for ch, n in occupations.items():
            if not 0 <= n <= self.n_max:
                raise DimensionMismatch(f"occupation {n} outside 0..{self.n_max}")
            idx += n * self.weight(self.index_of(ch))
        psi = np.zeros(self.dim, dtype=complex)
        psi[idx] = 1.0
        return psi


def build_fock(channels, n_max: int, dim_cap: int = DEFAULT_DIM_CAP) -> FockSpace:
    """Build a space over (mode_label, lam) channels.

    Signs derive from the lam part of each channel label.  Raises
    DimensionCapExceeded when (n_max+1)^#channels > dim_cap.
    """
    channels = tuple(tuple(ch) if isinstance(ch, list) else ch for ch in channels)
    if len(channels) < 1:
        raise DimensionMismatch("need at least one channel")
    if len(set(channels)) != len(channels):
        raise DimensionMismatch("channel labels must be unique")
    if n_max < 1:
        raise DimensionMismatch("n_max must be >= 1")
    dim = (n_max + 1) ** len(channels)
    if dim > dim_cap:
        raise DimensionCapExceeded(
            f"dim {(n_max + 1)}^{len(channels)} = {dim} exceeds cap {dim_cap}"
        )
    signs = tuple(channel_sign(ch[1]) for ch in channels)
    return FockSpace(channels=channels, n_max=n_max, signs=signs, dim=dim)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Sparse operator bound to its Fock space (for metric-adjoint bookkeeping)."""

    space: FockSpace
    mat: sparse.csr_matrix

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check(other)
        return OperatorMatrix(self.space, (self.mat + other.mat).tocsr())

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check(other)
        return OperatorMatrix(self.space, (self.mat - other.mat).tocsr())

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, (-self.mat).tocsr())

    def __mul__(self, scalar) -> "OperatorMatrix":
        return OperatorMatrix(self.space, (self.mat * scalar).tocsr())

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            self._check(other)
            return OperatorMatrix(self.space, (self.mat @ other.mat).tocsr())
        return self.mat @ other

    def _check(self, other: "OperatorMatrix") -> None:
        if self.space is not other.space and self.space != other.space:
            raise DimensionMismatch("operators live on different spaces")

    def metric_adjoint(self) -> "OperatorMatrix":
        eta = metric_diagonal(self.space)
        adj = self.mat.conj().T.tocsr()
        scaled = sparse.diags(eta) @ adj @ sparse.diags(eta)
        return OperatorMatrix(self.space, scaled.tocsr())

    def norm_max(self) -> float:
        return max_abs(self)

    def to_dense(self) -> np.ndarray:
        return self.mat.toarray()


def zero_operator(fs: FockSpace) -> OperatorMatrix:
    return OperatorMatrix(fs, sparse.csr_matrix((fs.dim, fs.dim), dtype=complex))


def identity_operator(fs: FockSpace) -> OperatorMatrix:
    return OperatorMatrix(fs, sparse.identity(fs.dim, dtype=complex, format="csr"))


@lru_cache(maxsize=None)
def _lowering(fs: FockSpace, position: int) -> sparse.csr_matrix:
    base = fs.n_max + 1
    w = fs.weight(position)
    idx = np.arange(fs.dim)
    n = (idx // w) % base
    src = idx[n > 0]
    data = np.sqrt(n[n > 0].astype(float)).astype(complex)
    rows = src - w
    return sparse.csr_matrix((data, (rows, src)), shape=(fs.dim, fs.dim))


def annihilator(fs: FockSpace, channel) -> OperatorMatrix:
    """Standard lowering matrix on the channel's factor."""
    return OperatorMatrix(fs, _lowering(fs, fs.index_of(channel)))


def creator(fs: FockSpace, channel) -> OperatorMatrix:
    """Metric-adjoint creation operator (sign-flipped on the scalar channel)."""
    j = fs.index_of(channel)
    raised = _lowering(fs, j).conj().T.tocsr()
    return OperatorMatrix(fs, (fs.signs[j] * raised).tocsr())


@lru_cache(maxsize=None)
def metric_diagonal(fs: FockSpace) -> np.ndarray:
    """Diagonal of eta = (-1)^(total occupation of sign -1 channels)."""
    parity = np.zeros(fs.dim, dtype=int)
    for j, s in enumerate(fs.signs):
        if s < 0:
            parity += fs.occupations(j)
    eta = np.where(parity % 2 == 0, 1.0, -1.0)
    eta.setflags(write=False)
    return eta


def metric_operator(fs: FockSpace) -> OperatorMatrix:
    return OperatorMatrix(fs, sparse.diags(metric_diagonal(fs)).tocsr())


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """Single-particle matrix over channels plus the channel-sign diagonal."""

    matrix: np.ndarray
    signs: tuple

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch("quadratic form matrix must be square")
        if m.shape[0] != len(self.signs):
            raise DimensionMismatch("form size does not match sign vector")
        object.__setattr__(self, "matrix", m)

    @property
    def g(self) -> np.ndarray:
        return np.diag(np.array(self.signs, dtype=float))

    def bracket(self, other: "QuadraticForm") -> "QuadraticForm":
        """Form-level commutator image M G N - N G M."""
        if self.signs != other.signs:
            raise DimensionMismatch("forms carry different channel signs")
        g = self.g
        m = self.matrix @ g @ other.matrix - other.matrix @ g @ self.matrix
        return QuadraticForm(m, self.signs)


def lift_bilinear(fs: FockSpace, form) -> OperatorMatrix:
    """Normal-ordered lift sum_{ab} creator_a M[a,b] annihilator_b."""
    m = form.matrix if isinstance(form, QuadraticForm) else np.asarray(form, dtype=complex)
    if m.shape != (len(fs.channels), len(fs.channels)):
        raise DimensionMismatch(
            f"form is {m.shape}, space has {len(fs.channels)} channels"
        )
    if isinstance(form, QuadraticForm) and form.signs != fs.signs:
        raise DimensionMismatch("form channel signs disagree with the space")
    total = sparse.csr_matrix((fs.dim, fs.dim), dtype=complex)
    for b in range(len(fs.channels)):
        col = m[:, b]
        rows = np.nonzero(col)[0]
        if rows.size == 0:
            continue
        left = sparse.csr_matrix((fs.dim, fs.dim), dtype=complex)
        for a in rows:
            left = left + col[a] * (fs.signs[a] * _lowering(fs, a).conj().T)
        total = total + (left @ _lowering(fs, b)).tocsr()
    return OperatorMatrix(fs, total.tocsr())


def indefinite_inner(fs: FockSpace, phi: np.ndarray, psi: np.ndarray) -> complex:
    """phi^dag eta psi."""
    if phi.shape != (fs.dim,) or psi.shape != (fs.dim,):
        raise DimensionMismatch("state vectors must match the space dimension")
    return complex(np.vdot(phi, metric_diagonal(fs) * psi))


def expectation(fs: FockSpace, op: OperatorMatrix, psi: np.ndarray) -> complex:
    """(psi^dag eta O psi) / (psi^dag eta psi); ZeroNormState if the norm vanishes."""
    denom = indefinite_inner(fs, psi, psi)
    scale = float(np.vdot(psi, psi).real)
    if scale == 0.0 or abs(denom) <= 1e-12 * scale:
        raise ZeroNormState("indefinite norm vanishes (pure gauge excitation)")
    return indefinite_inner(fs, psi, op @ psi) / denom


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    return a @ b - b @ a


def max_abs(op: OperatorMatrix | sparse.spmatrix | np.ndarray) -> float:
    """Largest absolute entry; the residual norm used throughout the suites."""
    if isinstance(op, OperatorMatrix):
        op = op.mat
    if sparse.issparse(op):
        data = op.tocsr().data
        return float(np.max(np.abs(data))) if data.size else 0.0
    arr = np.asarray(op)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def compress(op: OperatorMatrix, indices: np.ndarray) -> np.ndarray:
    """Dense restriction of the operator to the given basis indices."""
    sub = op.mat[indices][:, indices]
    return np.asarray(sub.todense())


def bounded_residual(a: OperatorMatrix, b: OperatorMatrix, max_total: int) -> float:
    """max-abs difference of two operators on the total-occupation-bounded block."""
    idx = a.space.bounded_indices(max_total)
    return max_abs(compress(a, idx) - compress(b, idx))

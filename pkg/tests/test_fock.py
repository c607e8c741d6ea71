import numpy as np
import pytest

from photonam.errors import (
    DimensionCapExceeded,
    DimensionMismatch,
    UnknownChannel,
    ZeroNormState,
)
from photonam.fock import (
    FockSpace,
    OperatorMatrix,
    QuadraticForm,
    annihilator,
    build_fock,
    commutator,
    compress,
    creator,
    expectation,
    identity_operator,
    indefinite_inner,
    lift_bilinear,
    max_abs,
    metric_diagonal,
    metric_operator,
)


def dense_ladders(n_channels, n_max, signs):
    """Independent construction: explicit numpy kron chains."""
    local_dim = n_max + 1
    low = np.diag(np.sqrt(np.arange(1, local_dim)), 1).astype(complex)
    eye = np.eye(local_dim, dtype=complex)
    lowers, raisers = [], []
    for j in range(n_channels):
        mat = np.ones((1, 1), dtype=complex)
        for pos in range(n_channels):
            mat = np.kron(mat, low if pos == j else eye)
        lowers.append(mat)
        raisers.append(signs[j] * mat.conj().T)
    return lowers, raisers


def test_dimensions_and_cap():
    assert build_fock([(i, 1) for i in range(8)], 1).dim == 256
    assert build_fock([(i, 1) for i in range(8)], 2).dim == 6561
    with pytest.raises(DimensionCapExceeded):
        build_fock([(i, 1) for i in range(30)], 2)


def test_build_fock_validates_inputs():
    with pytest.raises(DimensionMismatch):
        build_fock([], 2)
    with pytest.raises(DimensionMismatch):
        build_fock([("k", 1)], 0)
    with pytest.raises(DimensionMismatch):
        build_fock([("k", 1), ("k", 1)], 1)


def test_basis_order_is_channel_major():
    fs = build_fock([("a", 1), ("b", 1)], 2)
    psi = fs.basis_state({("a", 1): 1, ("b", 1): 2})
    assert np.argmax(np.abs(psi)) == 1 * 3 + 2
    np.testing.assert_array_equal(fs.occupations(0), np.repeat([0, 1, 2], 3))
    np.testing.assert_array_equal(fs.occupations(1), np.tile([0, 1, 2], 3))


def test_ladders_match_dense_kron_reference():
    fs = build_fock([("k", 1), ("k", 0), ("q", 2)], 2)
    lowers, raisers = dense_ladders(3, 2, fs.signs)
    for j, ch in enumerate(fs.channels):
        np.testing.assert_allclose(annihilator(fs, ch).to_dense(), lowers[j], atol=0)
        np.testing.assert_allclose(creator(fs, ch).to_dense(), raisers[j], atol=0)


def test_single_channel_scalar_creator_literal():
    fs = build_fock([("k", 0)], 1)
    np.testing.assert_array_equal(
        creator(fs, ("k", 0)).to_dense(), np.array([[0, 0], [-1, 0]], dtype=complex)
    )


def test_unknown_channel():
    fs = build_fock([("k", 1)], 1)
    with pytest.raises(UnknownChannel):
        annihilator(fs, ("missing", 1))


def test_commutator_sign_per_channel_on_safe_sectors():
    fs = build_fock([("k", 1), ("k", 0)], 2)
    idx = fs.bounded_indices(1)
    ident = np.eye(len(idx))
    comm_t = commutator(annihilator(fs, ("k", 1)), creator(fs, ("k", 1)))
    np.testing.assert_allclose(compress(comm_t, idx), ident, atol=1e-15)
    comm_s = commutator(annihilator(fs, ("k", 0)), creator(fs, ("k", 0)))
    np.testing.assert_allclose(compress(comm_s, idx), -ident, atol=1e-15)
    cross = commutator(annihilator(fs, ("k", 1)), creator(fs, ("k", 0)))
    assert max_abs(cross) == 0.0


def test_scalar_norm_and_pairing():
    fs = build_fock([("k", 0)], 1)
    vac = fs.vacuum()
    one = creator(fs, ("k", 0)) @ vac
    assert indefinite_inner(fs, vac, vac) == pytest.approx(1.0)
    assert indefinite_inner(fs, one, one) == pytest.approx(-1.0)
    pairing = indefinite_inner(fs, vac, (annihilator(fs, ("k", 0)) @ creator(fs, ("k", 0))).mat @ vac)
    assert pairing == pytest.approx(-1.0)


def test_metric_operator_properties():
    fs = build_fock([("k", 1), ("k", 0), ("q", 0), ("q", 2)], 1)
    eta = metric_operator(fs)
    assert max_abs(eta @ eta - identity_operator(fs)) == 0.0
    diag = metric_diagonal(fs)
    n0 = fs.occupations(1) + fs.occupations(2)
    np.testing.assert_array_equal(diag, np.where(n0 % 2 == 0, 1.0, -1.0))
    for ch in fs.channels:
        via = eta @ OperatorMatrix(fs, annihilator(fs, ch).mat.conj().T.tocsr()) @ eta
        assert max_abs(creator(fs, ch) - via) == 0.0


def test_pure_transverse_metric_is_identity():
    fs = build_fock([("k", 1), ("k", 2)], 2)
    np.testing.assert_array_equal(metric_diagonal(fs), np.ones(fs.dim))


def test_zero_norm_state_raises():
    fs = build_fock([("k", 3), ("k", 0)], 1)
    gauge = (creator(fs, ("k", 3)) - creator(fs, ("k", 0))) @ fs.vacuum()
    assert abs(indefinite_inner(fs, gauge, gauge)) <= 1e-15
    with pytest.raises(ZeroNormState):
        expectation(fs, identity_operator(fs), gauge)


def test_lift_matches_dense_reference():
    fs = build_fock([("k", 1), ("k", 0)], 2)
    rng = np.random.default_rng(5)
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    lifted = lift_bilinear(fs, QuadraticForm(m, fs.signs)).to_dense()
    lowers, raisers = dense_ladders(2, 2, fs.signs)
    expected = sum(
        m[a, b] * raisers[a] @ lowers[b] for a in range(2) for b in range(2)
    )
    np.testing.assert_allclose(lifted, expected, atol=1e-14)


def test_lift_number_operator_eigenvalues():
    fs = build_fock([("k", 1), ("k", 2)], 2)
    number = lift_bilinear(fs, QuadraticForm(np.eye(2), fs.signs))
    expected = fs.occupations(0) + fs.occupations(1)
    np.testing.assert_allclose(
        np.sort(np.linalg.eigvalsh(number.to_dense())), np.sort(expected), atol=1e-13
    )


def test_lift_commutator_homomorphism_random_pairs():
    rng = np.random.default_rng(42)
    for _ in range(20):
        n_ch = int(rng.integers(2, 5))
        chans = [(f"m{j}", int(rng.integers(0, 4))) for j in range(n_ch)]
        n_max = int(rng.integers(2, 4))
        fs = build_fock(chans, n_max)
        idx = fs.bounded_indices(n_max - 1)
        m = rng.normal(size=(n_ch, n_ch)) + 1j * rng.normal(size=(n_ch, n_ch))
        n = rng.normal(size=(n_ch, n_ch)) + 1j * rng.normal(size=(n_ch, n_ch))
        qm, qn = QuadraticForm(m, fs.signs), QuadraticForm(n, fs.signs)
        lhs = commutator(lift_bilinear(fs, qm), lift_bilinear(fs, qn))
        rhs = lift_bilinear(fs, qm.bracket(qn))
        assert max_abs(compress(lhs - rhs, idx)) <= 1e-12


def test_lift_disjoint_channels_commute():
    fs = build_fock([("a", 1), ("a", 0), ("b", 2), ("b", 3)], 2)
    rng = np.random.default_rng(7)
    m = np.zeros((4, 4), dtype=complex)
    m[:2, :2] = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    n = np.zeros((4, 4), dtype=complex)
    n[2:, 2:] = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    lhs = commutator(
        lift_bilinear(fs, QuadraticForm(m, fs.signs)),
        lift_bilinear(fs, QuadraticForm(n, fs.signs)),
    )
    assert max_abs(lhs) <= 1e-13


def test_truncation_edge_reported_not_clean():
    # the transverse ladder commutator deviates from identity only at the cap
    fs = build_fock([("k", 1)], 2)
    comm = commutator(annihilator(fs, ("k", 1)), creator(fs, ("k", 1)))
    full = comm.to_dense()
    assert full[2, 2] == pytest.approx(-2.0)
    idx = fs.bounded_indices(1)
    np.testing.assert_allclose(compress(comm, idx), np.eye(2), atol=1e-15)


def test_commutator_antisymmetry_random_sparse():
    fs = build_fock([("k", 1), ("q", 0)], 2)
    rng = np.random.default_rng(3)
    a = lift_bilinear(fs, QuadraticForm(rng.normal(size=(2, 2)), fs.signs))
    b = lift_bilinear(fs, QuadraticForm(rng.normal(size=(2, 2)), fs.signs))
    assert max_abs(commutator(a, b) + commutator(b, a)) <= 1e-13
    assert max_abs(commutator(identity_operator(fs), b)) == 0.0


def test_operator_space_mismatch():
    fs1 = build_fock([("k", 1)], 1)
    fs2 = build_fock([("k", 1)], 2)
    with pytest.raises(DimensionMismatch):
        commutator(identity_operator(fs1), identity_operator(fs2))


def test_quadratic_form_validation():
    with pytest.raises(DimensionMismatch):
        QuadraticForm(np.zeros((2, 3)), (1, 1))
    with pytest.raises(DimensionMismatch):
        QuadraticForm(np.zeros((2, 2)), (1, 1, 1))
    fs = build_fock([("k", 1)], 1)
    with pytest.raises(DimensionMismatch):
        lift_bilinear(fs, QuadraticForm(np.zeros((2, 2)), (1, 1)))

"""Kraus sets, channel action, Choi matrices, serialization."""

import numpy as np
import pytest

from gcec.channels import (
    ChoiMatrix,
    DensityMatrix,
    KrausSet,
    apply,
    choi,
    choi_rank,
    conjugate,
    kraus_from_dict,
    kraus_to_dict,
    matrix_from_json,
)
from gcec.errors import DimMismatch, NotUnitary, SchemaError

from fixtures import (
    a4_qutrit_triple,
    depolarizing_kraus,
    identity_kraus,
    random_full_rank_channel,
    s3_qutrit_family,
    su2_flip_family,
)
from oracles import gram_choi_rank, random_density, random_unitary


def test_kraus_set_accessors():
    ks = KrausSet.from_matrices(s3_qutrit_family(0.5**0.5, 0.5**0.5, 0.5))
    assert ks.K == 2 and ks.d == 3
    assert ks.tp_residual() <= 1e-12
    with pytest.raises(DimMismatch):
        KrausSet.from_matrices([])
    with pytest.raises(DimMismatch):
        KrausSet.from_matrices([np.eye(2), np.eye(3)])


def test_apply_identity_channel_is_identity_map():
    rng = np.random.default_rng(21)
    ks = KrausSet.from_matrices(identity_kraus(3))
    rho = random_density(rng, 3)
    out = apply(ks, DensityMatrix(rho))
    assert np.linalg.norm(out.matrix - rho) <= 1e-14


def test_apply_dephasing_kills_off_diagonals():
    rng = np.random.default_rng(22)
    ks = KrausSet.from_matrices([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    rho = random_density(rng, 2)
    out = apply(ks, DensityMatrix(rho))
    assert np.linalg.norm(out.matrix - np.diag(np.diag(rho))) <= 1e-14


def test_apply_preserves_density_matrix_properties():
    rng = np.random.default_rng(23)
    for mats in [s3_qutrit_family(0.4j, 0.5**0.5, 0.42**0.5), a4_qutrit_triple()]:
        ks = KrausSet.from_matrices(mats)
        rho = random_density(rng, 3)
        out = apply(ks, DensityMatrix(rho))
        assert abs(np.trace(out.matrix) - 1.0) <= 1e-12
        assert np.linalg.norm(out.matrix - out.matrix.conj().T) <= 1e-12
        assert np.linalg.eigvalsh(out.matrix)[0] >= -1e-12
        out.check(tol=1e-10)


def test_apply_dim_mismatch():
    ks = KrausSet.from_matrices(identity_kraus(3))
    with pytest.raises(DimMismatch):
        apply(ks, DensityMatrix(np.eye(2) / 2))


def test_choi_identity_channel_rank_one():
    c = choi(KrausSet.from_matrices(identity_kraus(2)))
    v = np.eye(2).reshape(-1)
    assert np.linalg.norm(c.matrix - np.outer(v, v) / 2) <= 1e-14
    evals = np.linalg.eigvalsh(c.matrix)
    assert abs(evals[-1] - 1.0) <= 1e-12
    assert np.linalg.norm(evals[:-1]) <= 1e-12


def test_choi_depolarizing_is_maximally_mixed():
    d = 3
    c = choi(KrausSet.from_matrices(depolarizing_kraus(d)))
    assert np.linalg.norm(c.matrix - np.eye(d * d) / (d * d)) <= 1e-14


def test_choi_properties_on_tp_sets():
    rng = np.random.default_rng(24)
    sets = [
        s3_qutrit_family(0.6, 0.5**0.5, 1j * 0.32**0.5),
        a4_qutrit_triple(),
        su2_flip_family(4),
        random_full_rank_channel(rng, 2),
    ]
    for mats in sets:
        ks = KrausSet.from_matrices(mats)
        c = choi(ks).matrix
        assert isinstance(choi(ks), ChoiMatrix)
        assert np.linalg.norm(c - c.conj().T) <= 1e-13
        assert np.linalg.eigvalsh(c)[0] >= -1e-12
        assert abs(np.trace(c) - 1.0) <= 1e-12
        d = ks.d
        # tracing out the row index must leave the maximally mixed state
        reduced = np.einsum("ijik->jk", c.reshape(d, d, d, d))
        assert np.linalg.norm(reduced - np.eye(d) / d) <= 1e-12


def test_choi_rank_examples():
    rng = np.random.default_rng(25)
    assert choi_rank(KrausSet.from_matrices(identity_kraus(3))) == 1
    assert choi_rank(KrausSet.from_matrices(s3_qutrit_family(0.6, 0.5**0.5, 0.4))) == 2
    assert choi_rank(KrausSet.from_matrices(a4_qutrit_triple())) == 3
    assert choi_rank(KrausSet.from_matrices(depolarizing_kraus(2))) == 4
    assert choi_rank(KrausSet.from_matrices(random_full_rank_channel(rng, 2))) == 4
    # a redundant presentation of the identity still has Choi rank 1
    padded = [np.eye(2) * 0.6, np.eye(2) * 0.8]
    assert choi_rank(KrausSet.from_matrices(padded)) == 1


def test_choi_rank_agrees_with_gram_oracle():
    rng = np.random.default_rng(26)
    sets = [
        identity_kraus(3),
        s3_qutrit_family(0.3 + 0.2j, 0.7, -0.4),
        a4_qutrit_triple(),
        su2_flip_family(3),
        depolarizing_kraus(2),
        random_full_rank_channel(rng, 3),
    ]
    for mats in sets:
        ks = KrausSet.from_matrices(mats)
        assert choi_rank(ks) == gram_choi_rank(mats)


def test_conjugate_preserves_tp_and_choi_spectrum():
    rng = np.random.default_rng(27)
    ks = KrausSet.from_matrices(a4_qutrit_triple())
    u, v = random_unitary(rng, 3), random_unitary(rng, 3)
    moved = conjugate(ks, u, v)
    assert moved.tp_residual() <= 1e-12
    before = np.linalg.eigvalsh(choi(ks).matrix)
    after = np.linalg.eigvalsh(choi(moved).matrix)
    assert np.linalg.norm(before - after) <= 1e-12


def test_conjugate_rejects_bad_transports():
    ks = KrausSet.from_matrices(identity_kraus(3))
    with pytest.raises(NotUnitary):
        conjugate(ks, np.diag([1.0, 1.0, 2.0]), np.eye(3))
    with pytest.raises(DimMismatch):
        conjugate(ks, np.eye(2), np.eye(3))


def test_json_round_trip_is_bit_exact():
    rng = np.random.default_rng(28)
    mats = random_full_rank_channel(rng, 3)
    ks = KrausSet.from_matrices(mats)
    back = kraus_from_dict(kraus_to_dict(ks))
    assert back.K == ks.K and back.d == ks.d
    for a, b in zip(ks.matrices, back.matrices):
        assert np.array_equal(a, b)


def test_schema_errors():
    good = kraus_to_dict(KrausSet.from_matrices(identity_kraus(2)))
    with pytest.raises(SchemaError):
        kraus_from_dict([good])
    for key in ("d", "K", "kraus"):
        broken = dict(good)
        del broken[key]
        with pytest.raises(SchemaError):
            kraus_from_dict(broken)
    with pytest.raises(SchemaError):
        kraus_from_dict({**good, "d": "two"})
    with pytest.raises(SchemaError):
        kraus_from_dict({**good, "K": 3})
    with pytest.raises(SchemaError):
        kraus_from_dict({**good, "d": 3})
    with pytest.raises(SchemaError):
        matrix_from_json([[1.0, 2.0]])


def test_density_matrix_check():
    DensityMatrix(np.eye(2) / 2).check()
    with pytest.raises(DimMismatch):
        DensityMatrix(np.array([[0.5, 0.1j], [0.1j, 0.5]])).check()
    with pytest.raises(DimMismatch):
        DensityMatrix(np.eye(2)).check()
    with pytest.raises(DimMismatch):
        DensityMatrix(np.diag([1.5, -0.5])).check()

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import normalized_kets, phases
from pbrcheck.pbr import build_xi_basis, product_preparations
from pbrcheck.qlinalg import (
    MINUS,
    ONE,
    PLUS,
    TOL_NORM,
    ZERO,
    DimensionError,
    Effect,
    Ket,
    MeasurementBasis,
    NormalizationError,
    basis_ket,
    born_probability,
    computational_basis,
    dumps,
    effect_probability,
    gram_residual,
    inner,
    is_entangled,
    is_orthonormal_basis,
    loads,
    product_basis,
    tensor,
)

R = 1 / np.sqrt(2)


def test_index_convention_is_row_major():
    # first factor is the high-order index
    assert np.array_equal(tensor(ZERO, ONE).amplitudes, [0, 1, 0, 0])
    assert np.array_equal(tensor(ONE, ZERO).amplitudes, [0, 0, 1, 0])
    a, b = Ket([1, 2j]), Ket([3, 5, 7])
    t = tensor(a, b)
    for i in range(2):
        for j in range(3):
            assert t[i * 3 + j] == a[i] * b[j]


def test_tensor_examples():
    assert np.allclose(tensor(PLUS, PLUS).amplitudes, [0.5] * 4, atol=1e-15)
    assert tensor(ZERO, PLUS).dim == 4


def test_inner_examples():
    assert inner(ZERO, ZERO) == 1
    assert inner(ZERO, PLUS) == pytest.approx(R, abs=1e-15)
    xi1 = build_xi_basis()[0]
    assert abs(inner(xi1, tensor(ZERO, ZERO))) < 1e-15


def test_inner_is_conjugate_linear_in_first_argument():
    a = Ket([1j, 0])
    assert inner(a, ZERO) == -1j
    assert inner(ZERO, a) == 1j


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionError):
        inner(ZERO, tensor(ZERO, ZERO))


def test_born_examples():
    xi = build_xi_basis()
    assert born_probability(xi[0], tensor(ZERO, ONE)) == pytest.approx(0.5, abs=1e-15)
    assert born_probability(xi[1], tensor(ZERO, PLUS)) < 1e-30
    assert born_probability(tensor(ZERO, ZERO), tensor(ZERO, ZERO)) == 1


def test_born_rejects_unnormalized():
    with pytest.raises(NormalizationError):
        born_probability(Ket([1, 1]), ZERO)
    with pytest.raises(DimensionError):
        born_probability(ZERO, tensor(ZERO, ZERO))


def test_effect_probability_examples():
    basis = computational_basis(4)
    anti = Effect(4, {1, 2})
    assert effect_probability(basis, anti, tensor(ZERO, ONE)) == 1
    assert effect_probability(basis, anti, tensor(ZERO, ZERO)) == 0
    everything = Effect(4, range(4))
    assert effect_probability(basis, everything, tensor(PLUS, MINUS)) == pytest.approx(1, abs=1e-15)


def test_effect_validation():
    with pytest.raises(IndexError):
        Effect(4, {4})
    with pytest.raises(ValueError):
        Effect(4, set())
    with pytest.raises(DimensionError):
        effect_probability(computational_basis(2), Effect(4, {0}), ZERO)


def test_orthonormality_examples():
    assert is_orthonormal_basis(build_xi_basis())
    assert not is_orthonormal_basis(MeasurementBasis([ZERO, ZERO]))
    assert is_orthonormal_basis(computational_basis(4))
    assert gram_residual(computational_basis(4)) == 0


def test_basis_shape_checks():
    with pytest.raises(DimensionError):
        MeasurementBasis([ZERO])
    with pytest.raises(DimensionError):
        MeasurementBasis([ZERO, tensor(ZERO, ZERO)])
    with pytest.raises(ValueError):
        MeasurementBasis([ZERO, ONE], ["a", "a"])


def test_entanglement_examples():
    xi = build_xi_basis()
    assert is_entangled(xi[0])
    assert is_entangled(xi[3])
    assert not is_entangled(tensor(ZERO, PLUS))
    with pytest.raises(DimensionError):
        is_entangled(ZERO)


def test_kets_are_immutable():
    k = Ket([1, 0])
    with pytest.raises(ValueError):
        k.amplitudes[0] = 5
    with pytest.raises(AttributeError):
        k.amplitudes = np.zeros(2)


def test_json_round_trip():
    xi = build_xi_basis()
    doc = json.loads(dumps(xi))
    assert doc["dim"] == 4 and doc["labels"] == ["xi1", "xi2", "xi3", "xi4"]
    back = loads(dumps(xi))
    assert all(u.allclose(v, atol=0) for u, v in zip(xi, back))
    k = loads(dumps(PLUS))
    assert json.loads(dumps(PLUS)) == {"dim": 2, "amplitudes": [[R, 0.0], [R, 0.0]]}
    assert k.allclose(PLUS, atol=0)


def test_product_basis_labels():
    b = product_basis(MeasurementBasis([PLUS, MINUS], "+-"), MeasurementBasis([ZERO, ONE], "01"))
    assert b.labels == (("+", "0"), ("+", "1"), ("-", "0"), ("-", "1"))
    assert b[3].allclose(tensor(MINUS, ONE))


@given(normalized_kets(4), st.sampled_from(["xi", "comp"]))
def test_born_probabilities_sum_to_one(state, which):
    basis = build_xi_basis() if which == "xi" else computational_basis(4)
    total = sum(born_probability(v, state) for v in basis)
    assert abs(total - 1) <= 4 * TOL_NORM


@given(normalized_kets(3), normalized_kets(3))
def test_inner_hermitian(a, b):
    assert inner(a, b) == pytest.approx(np.conj(inner(b, a)), abs=1e-15)


@given(normalized_kets(2), normalized_kets(2), st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_tensor_bilinear(a, b, alpha):
    lhs = tensor(a.scaled(alpha), b).amplitudes
    rhs = alpha * tensor(a, b).amplitudes
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-12)
    lhs = tensor(a, b.scaled(alpha)).amplitudes
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-12)


@given(normalized_kets(2), normalized_kets(2))
def test_product_states_not_entangled(a, b):
    assert not is_entangled(tensor(a, b))


@given(normalized_kets(4), normalized_kets(4), phases, phases)
def test_born_phase_invariance(phi, psi, t1, t2):
    p = born_probability(phi, psi)
    q = born_probability(phi.scaled(np.exp(1j * t1)), psi.scaled(np.exp(1j * t2)))
    assert q == pytest.approx(p, abs=1e-14)


def test_basis_ket():
    assert np.array_equal(basis_ket(4, 2).amplitudes, [0, 0, 1, 0])
    assert len(product_preparations()) == 4

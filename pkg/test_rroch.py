"""
Tests for monomial bases, dimensions and the split/merge decomposition
"""

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from algebra.field import FieldSpec, field_of_order
from geometry.rroch import (
    FunctionRepr, basis_for, dimension, exponent_vector, function_to_message, genus, level_lambdas,
    merge_by_y, message_to_function, monomial_layout, split_by_y, zero_function,
)
from geometry.tower import ExtensionDescriptor, artin_schreier_step, kummer_step, rational_descriptor
from utils.config import SMOOTH_BOUND_ENV
from utils.exceptions import LengthMismatch, NotSmooth, UnsupportedBase, ValidationError
from utils.prng import SplitMix64


def _unit(desc, lam, x_exponent, y_digits):
    basis = basis_for(desc, lam)
    coeffs = [0] * len(basis)
    coeffs[basis.index_of(x_exponent, y_digits)] = 1
    return FunctionRepr(basis, coeffs)


def test_constant_basis(hermitian):
    desc, _ = hermitian
    basis = basis_for(desc, 0)
    assert len(basis) == 1
    assert basis[0].key == (0, (0, 0))
    assert basis[0].pole_order == 0


def test_hermitian_basis(hermitian):
    desc, _ = hermitian
    basis = basis_for(desc, 60)
    assert len(basis) == 55
    poles = [mono.pole_order for mono in basis]
    assert poles == sorted(poles)
    assert len(set(poles)) == 55
    assert dimension(desc, 10) == 6
    assert [m.pole_order for m in basis_for(desc, 10)] == [0, 4, 5, 8, 9, 10]
    with pytest.raises(ValidationError):
        basis_for(desc, -1)
    with pytest.raises(ValidationError):
        basis_for(desc, 10, level=3)


def test_exponent_vectors(hermitian):
    desc, _ = hermitian
    basis = basis_for(desc, 60)
    for mono in basis:
        e, j = exponent_vector(desc, mono)
        assert mono.pole_order == 4 * e + 5 * j
        assert j < 4


def test_genus_values(hermitian, hermitian_k, norm_trace_curves, tower):
    assert genus(hermitian[0]) == 6
    assert genus(hermitian_k[0]) == 6
    assert [genus(desc) for desc, _ in norm_trace_curves] == [9, 9]
    assert genus(tower[0]) == 504
    assert genus(rational_descriptor(FieldSpec.for_order(16))) == 0


def test_dimension_above_canonical_degree(hermitian, hermitian_k):
    for desc, pts in (hermitian, hermitian_k):
        for lam in range(11, pts.N):
            assert dimension(desc, lam) == lam - 5


def test_norm_trace_dimensions(norm_trace_curves):
    for desc, pts in norm_trace_curves:
        g = genus(desc)
        for lam in range(2 * g - 1, pts.N):
            assert dimension(desc, lam) == lam + 1 - g


@pytest.mark.parametrize("lam,k", [(1007, 504), (1500, 997), (2551, 2048)])
def test_tower_dimensions(tower, lam, k):
    assert dimension(tower[0], lam) == k


def test_nested_custom_descriptor_skips_genus():
    gf = field_of_order(16)
    desc = ExtensionDescriptor(FieldSpec.for_order(16),
                               (kummer_step([0, 1], 3), artin_schreier_step(gf, [0, 1], [1])))
    with pytest.raises(UnsupportedBase):
        genus(desc)
    assert dimension(desc, 12) == len(basis_for(desc, 12))


def test_filtration_is_monotone(hermitian):
    desc, _ = hermitian
    previous = []
    for lam in range(0, 64):
        keys = [mono.key for mono in basis_for(desc, lam)]
        assert keys[:len(previous)] == previous
        previous = keys


def test_level_lambdas(hermitian, tower):
    assert level_lambdas(hermitian[0], 60) == [60, 30, 15]
    assert level_lambdas(tower[0], 2551)[-1] == 2551 // 64


def test_message_roundtrip(hermitian):
    desc, _ = hermitian
    message = SplitMix64(7).field_elements(16, 55)
    f = message_to_function(desc, 60, message)
    assert function_to_message(f) == message
    with pytest.raises(LengthMismatch):
        message_to_function(desc, 60, message[:-1])
    with pytest.raises(ValidationError):
        message_to_function(desc, 60, [16] + message[1:])
    with pytest.raises(LengthMismatch):
        FunctionRepr(basis_for(desc, 60), [0])


def test_zero_function(hermitian):
    f = zero_function(hermitian[0], 60)
    assert f.is_zero()
    assert f.coefficient(0, (0, 0)) == 0
    assert f.coefficient(100, (0, 0)) == 0


def test_split_constant(hermitian):
    desc, _ = hermitian
    parts = split_by_y(_unit(desc, 60, 0, (0, 0)))
    assert len(parts) == 2
    assert parts[0].lam == 30 and parts[0].level == 1
    assert parts[0].coefficient(0, (0,)) == 1
    assert parts[1].is_zero()


def test_split_y_on_artin_schreier(hermitian):
    desc, _ = hermitian
    parts = split_by_y(_unit(desc, 60, 0, (1, 0)))
    assert parts[0].is_zero()
    assert parts[1].coefficient(0, (0,)) == 1
    assert sum(parts[1].coeffs) == 1


def test_split_y_on_kummer(hermitian_k):
    desc, _ = hermitian_k
    parts = split_by_y(_unit(desc, 55, 0, (1,)))
    assert len(parts) == 5
    assert parts[1].coefficient(0, ()) == 1
    assert all(parts[k].is_zero() for k in (0, 2, 3, 4))
    assert parts[0].lam == 11


def test_split_respects_child_pole_bound(hermitian):
    desc, _ = hermitian
    f = message_to_function(desc, 60, SplitMix64(3).field_elements(16, 55))
    for part in split_by_y(f):
        assert all(mono.pole_order <= 30 for mono in part.basis)
        for grandchild in split_by_y(part):
            assert grandchild.level == 2
            assert grandchild.lam == 15
    with pytest.raises(ValidationError):
        split_by_y(split_by_y(split_by_y(f)[0])[0])


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 32), lam=st.integers(0, 63))
def test_merge_inverts_split(seed, lam):
    from geometry.curves import hermitian_as
    desc = hermitian_as(4)
    k = len(basis_for(desc, lam))
    f = message_to_function(desc, lam, SplitMix64(seed).field_elements(16, k))
    assert merge_by_y(split_by_y(f), f.basis) == f


def test_layout_follows_smoothness_bound(hermitian_k, monkeypatch):
    desc, _ = hermitian_k
    k = len(basis_for(desc, 10))
    monkeypatch.setenv(SMOOTH_BOUND_ENV, "3")
    with pytest.raises(NotSmooth):
        monomial_layout(desc)
    with pytest.raises(NotSmooth):
        basis_for(desc, 10)
    monkeypatch.delenv(SMOOTH_BOUND_ENV)
    assert len(basis_for(desc, 10)) == k

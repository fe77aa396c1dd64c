"""
Tests for the brute-force references
"""

import pytest

from algebra.field import FieldSpec, OpCounter, field_of_order
from algebra.poly import newton_interpolate
from coding.oracle import (
    NaiveEvaluator, galois_field, lagrange_interpolate, naive_encode, naive_encode_many,
    naive_generator_matrix, numerical_semigroup_gaps, semigroup_gaps,
)
from geometry.rroch import FunctionRepr, basis_for, message_to_function, zero_function
from geometry.tower import build_levels, build_point_set, rational_descriptor
from utils.config import get_config
from utils.exceptions import NotCoprime, PlanMismatch, RankDefect, ValidationError
from utils.prng import SplitMix64


def _unit(desc, lam, x_exponent, y_digits):
    basis = basis_for(desc, lam)
    coeffs = [0] * len(basis)
    coeffs[basis.index_of(x_exponent, y_digits)] = 1
    return FunctionRepr(basis, coeffs)


@pytest.mark.parametrize("m,d,gaps", [(2, 3, 1), (4, 5, 6), (1, 7, 0), (4, 7, 9), (7, 4, 9)])
def test_semigroup_gaps(m, d, gaps):
    assert semigroup_gaps(m, d) == gaps
    assert semigroup_gaps(d, m) == gaps


def test_semigroup_gap_errors():
    with pytest.raises(NotCoprime):
        semigroup_gaps(4, 6)
    with pytest.raises(ValidationError):
        semigroup_gaps(0, 3)
    with pytest.raises(NotCoprime):
        numerical_semigroup_gaps([4, 6, 8])


def test_numerical_semigroup_gaps():
    assert numerical_semigroup_gaps([4, 5]) == 6
    assert numerical_semigroup_gaps([64, 72, 81]) == 504
    assert numerical_semigroup_gaps([1]) == 0


def test_constant_generator_row(hermitian):
    desc, pts = hermitian
    G = naive_generator_matrix(desc, 0, pts)
    assert G.shape == (1, 64)
    assert G.tolist() == [[1] * 64]


def test_hermitian_generator_matrix_has_full_rank(hermitian):
    desc, pts = hermitian
    G = naive_generator_matrix(desc, 60, pts)
    assert G.shape == (55, 64)


def test_rank_defect_is_reported():
    desc = rational_descriptor(FieldSpec.for_order(16))
    pts = build_point_set(desc, [1, 2, 3, 4])
    with pytest.raises(RankDefect):
        naive_generator_matrix(desc, 7, pts)
    assert naive_generator_matrix(desc, 7, pts, check_rank=False).shape == (8, 4)


def test_y_monomial_gives_coordinates(hermitian, hermitian_k):
    desc, pts = hermitian
    assert naive_encode(desc, 60, pts, _unit(desc, 60, 0, (1, 0))).values == [pt.y for pt in pts.points]
    assert naive_encode(desc, 60, pts, _unit(desc, 60, 1, (0, 0))).values == [pt.coords[0] for pt in pts.points]
    desc_k, pts_k = hermitian_k
    assert naive_encode(desc_k, 55, pts_k, _unit(desc_k, 55, 0, (1,))).values == [pt.y for pt in pts_k.points]


def test_tower_coordinates(tower):
    desc, pts = tower
    x3 = _unit(desc, 81, 0, (1, 0, 0, 0, 0, 0))
    x2 = _unit(desc, 81, 0, (0, 0, 0, 1, 0, 0))
    x3_values, x2_values = naive_encode_many(desc, 81, pts, [x3, x2])
    assert x3_values.values == [pt.coords[2] for pt in pts.points]
    assert x2_values.values == [pt.coords[1] for pt in pts.points]


def test_hermitian_monomial_products(hermitian):
    desc, pts = hermitian
    gf = desc.field
    ops = gf.ops()
    top = build_levels(desc)[0]
    # digits (1, 1): x^2 * y * (y^2 - c y)
    values = naive_encode(desc, 60, pts, _unit(desc, 60, 2, (1, 1))).values
    expected = [gf.mul(gf.pow(pt.coords[0], 2), gf.mul(pt.y, top.apply(ops, pt.y))) for pt in pts.points]
    assert values == expected


def test_naive_encode_is_linear(hermitian_k):
    desc, pts = hermitian_k
    gf = desc.field
    rng = SplitMix64(3)
    a = message_to_function(desc, 55, rng.field_elements(16, 55))
    b = message_to_function(desc, 55, rng.field_elements(16, 55))
    summed = message_to_function(desc, 55, [gf.add(x, y) for x, y in zip(a.coeffs, b.coeffs)])
    ca, cb, cs = naive_encode_many(desc, 55, pts, [a, b, summed])
    assert cs.values == [gf.add(x, y) for x, y in zip(ca.values, cb.values)]
    assert naive_encode(desc, 55, pts, zero_function(desc, 55)).values == [0] * 60


def test_naive_counts(hermitian):
    desc, pts = hermitian
    counter = OpCounter()
    naive_encode(desc, 60, pts, zero_function(desc, 60), counter)
    evaluator = NaiveEvaluator(desc, 60, pts)
    assert counter.mul == evaluator.evaluation_cost() + 55 * 64
    assert counter.add == 54 * 64
    assert naive_encode_many(desc, 60, pts, []) == []


def test_oracle_rejects_mismatched_inputs(hermitian, hermitian_k, monkeypatch):
    desc, pts = hermitian
    with pytest.raises(PlanMismatch):
        naive_encode(desc, 60, pts, zero_function(desc, 59))
    with pytest.raises(PlanMismatch):
        NaiveEvaluator(desc, 60, hermitian_k[1])
    monkeypatch.setitem(get_config().config_data["oracle"], "max_length", 32)
    with pytest.raises(ValidationError):
        NaiveEvaluator(desc, 60, pts)


def test_lagrange_matches_newton():
    gf = field_of_order(81)
    ops = gf.ops()
    points = [0, 5, 17, 33, 80, 41]
    values = SplitMix64(8).field_elements(81, 6)
    assert lagrange_interpolate(gf, points, values) == newton_interpolate(ops, points, values)


@pytest.mark.parametrize("q", [16, 64, 81])
def test_reference_field_uses_the_same_codec(q):
    gf = field_of_order(q)
    GF = galois_field(gf.spec)
    rng = SplitMix64(q)
    a = rng.field_elements(q, 50)
    b = rng.field_elements(q, 50)
    assert [int(v) for v in GF(a) * GF(b)] == [gf.mul(x, y) for x, y in zip(a, b)]
    assert [int(v) for v in GF(a) + GF(b)] == [gf.add(x, y) for x, y in zip(a, b)]

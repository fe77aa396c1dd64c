"""
Tests for extension descriptors, level decomposition and point sets
"""

import pytest

from algebra.field import FieldSpec, field_of_order
from geometry.curves import descriptor_from_json, hermitian_as, hermitian_kummer, hermitian_tower, norm_trace_y
from geometry.tower import (
    LINEARIZED, POWER, ExtensionDescriptor, FiberSolver, artin_schreier_step, build_levels,
    build_point_set, enumerate_splitting, kummer_step, level_y_values, point_set_from_json,
    pole_orders, rational_descriptor, verify_p4,
)
from utils.exceptions import BadTowerHeight, EmptyPointSet, ValidationError

GF16 = FieldSpec.for_order(16)


def _descriptor(*steps):
    return ExtensionDescriptor(GF16, tuple(steps))


def test_pole_orders(hermitian, tower):
    assert pole_orders(hermitian[0]) == [4, 5]
    assert pole_orders(tower[0]) == [64, 72, 81]
    assert pole_orders(rational_descriptor(GF16)) == [1]


def test_hermitian_levels(hermitian):
    levels = build_levels(hermitian[0])
    assert [lv.prime for lv in levels] == [2, 2]
    assert [lv.degree_below for lv in levels] == [2, 4]
    assert [lv.local_index for lv in levels] == [0, 1]
    assert [lv.pole_weight for lv in levels] == [5, 10]
    assert all(lv.generator_kind == LINEARIZED for lv in levels)
    assert all(lv.coordinate == 1 for lv in levels)


def test_tower_levels_run_top_step_first(tower):
    levels = build_levels(tower[0])
    assert [lv.prime for lv in levels] == [2] * 6
    assert [lv.step_index for lv in levels] == [1, 1, 1, 0, 0, 0]
    assert levels[-1].degree_below == 64


def test_kummer_levels_split_by_prime():
    desc = _descriptor(kummer_step([0, 1], 15))
    levels = build_levels(desc)
    assert [lv.prime for lv in levels] == [3, 5]
    assert [lv.degree_below for lv in levels] == [3, 15]
    assert all(lv.generator_kind == POWER for lv in levels)
    pts = build_point_set(desc)
    assert pts.base_places == (1,)
    assert pts.N == 15
    assert len({pt.y for pt in pts.points}) == 15


@pytest.mark.parametrize("step,code", [
    (kummer_step([1, 1], 7), "MDividesQMinus1"),
    (kummer_step([0, 0, 1], 3), "SquareFree"),
    (kummer_step([1, 0, 0, 1], 3), "Coprime"),
    (kummer_step([5], 3), "ConstantU"),
])
def test_p4_kummer_failures(step, code):
    report = verify_p4(_descriptor(step))
    assert not report.passed
    assert report.failures == [code]
    assert report.details


def test_p4_artin_schreier_failures(gf16):
    report = verify_p4(_descriptor(artin_schreier_step(gf16, [0, 0, 0, 1], [1, 1])))
    assert report.failures == ["LinearIndependence"]
    report = verify_p4(_descriptor(artin_schreier_step(gf16, [0, 0, 1], [1])))
    assert report.failures == ["Coprime"]


def test_p4_passes_for_presets(hermitian, hermitian_k, tower):
    for desc, _ in (hermitian, hermitian_k, tower):
        report = verify_p4(desc)
        assert report.passed
        assert report.to_json()["failures"] == []


def test_hermitian_points_lie_on_curve(hermitian):
    desc, pts = hermitian
    gf = desc.field
    assert pts.N == 64
    assert pts.s == 16
    assert len(set(pts.points)) == 64
    for pt in pts.points:
        x, y = pt.coords
        assert gf.add(gf.pow(y, 4), y) == gf.pow(x, 5)


def test_hermitian_kummer_excludes_trace_zero_places(hermitian_k):
    desc, pts = hermitian_k
    gf = desc.field
    assert pts.N == 60
    assert pts.s == 12
    excluded = set(range(16)) - set(pts.base_places)
    assert len(excluded) == 4
    for alpha in excluded:
        assert gf.add(gf.pow(alpha, 4), alpha) == 0
    assert enumerate_splitting(desc) == list(pts.base_places)


def test_fibers_are_contiguous(hermitian):
    desc, pts = hermitian
    solver = FiberSolver(desc)
    for i, alpha in enumerate(pts.base_places):
        fiber = [pt.coords for pt in pts.points[i * pts.m:(i + 1) * pts.m]]
        assert fiber == solver.full_fiber(alpha)
        assert all(c[0] == alpha for c in fiber)


def test_level_views_and_y_tables(hermitian):
    desc, pts = hermitian
    assert [len(pts.level_view(j)) for j in range(3)] == [64, 32, 16]
    assert pts.level_view(2)[1] is pts.points[4]
    with pytest.raises(IndexError):
        pts.level_view(2)[16]

    levels = build_levels(desc)
    ops = desc.field.ops()
    tables = level_y_values(pts, levels, ops)
    assert [len(t) for t in tables] == [64, 32]
    # the level generator is constant on each level fiber
    for k, level in enumerate(levels):
        table = tables[k]
        for start in range(0, len(table), level.prime):
            fiber = table[start:start + level.prime]
            assert len(set(fiber)) == level.prime
            assert len({level.apply(ops, y) for y in fiber}) == 1
    assert tables[1] == [levels[0].apply(ops, y) for y in tables[0][::2]]


def test_characteristic_two_kummer_tower_is_empty():
    with pytest.raises(EmptyPointSet):
        build_point_set(hermitian_tower(8, 3, "kummer"))


def test_rational_descriptor():
    desc = rational_descriptor(GF16)
    pts = build_point_set(desc)
    assert pts.N == 16
    assert build_levels(desc) == []
    assert [pt.y for pt in pts.points] == list(range(16))


def test_point_set_json_roundtrip(hermitian_k):
    desc, pts = hermitian_k
    restored = point_set_from_json(desc, pts.to_json())
    assert restored.points == pts.points
    with pytest.raises(ValidationError):
        point_set_from_json(hermitian_as(4), pts.to_json())


def test_bad_base_places(hermitian_k):
    desc, _ = hermitian_k
    with pytest.raises(ValidationError):
        build_point_set(desc, [0])
    with pytest.raises(ValidationError):
        build_point_set(desc, [16])
    subset = build_point_set(desc, [2, 3])
    assert subset.N == 10
    assert subset.base_places == (2, 3)


def test_descriptor_json_roundtrip():
    desc = _descriptor(kummer_step([0, 1], 15))
    data = desc.to_json()
    assert data["kind"] == "kummer"
    assert data["params"]["m"] == 15
    assert descriptor_from_json(data) == desc
    gf = field_of_order(16)
    nested = _descriptor(kummer_step([0, 1], 3), artin_schreier_step(gf, [0, 1], [1]))
    assert descriptor_from_json(nested.to_json()) == nested


def test_fingerprints_identify_equal_curves():
    assert hermitian_tower(4, 2).fingerprint == hermitian_as(4).fingerprint
    assert norm_trace_y(4, 2).steps == hermitian_kummer(4).steps
    assert norm_trace_y(4, 2).fingerprint == hermitian_kummer(4).fingerprint
    assert hermitian_as(4).fingerprint != hermitian_kummer(4).fingerprint


def test_tower_height_bounds():
    with pytest.raises(BadTowerHeight):
        hermitian_tower(4, 3)
    with pytest.raises(BadTowerHeight):
        hermitian_tower(8, 1)


def test_tower_point_set(tower):
    desc, pts = tower
    assert desc.m == 64
    assert pts.N == 4096
    assert pts.s == 64
    gf = desc.field
    for pt in pts.points[:256]:
        x1, x2, x3 = pt.coords
        assert gf.add(gf.pow(x2, 8), x2) == gf.pow(x1, 9)
        assert gf.add(gf.pow(x3, 8), x3) == gf.pow(x2, 9)

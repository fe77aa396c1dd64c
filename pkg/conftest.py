"""
Shared pytest setup: src/ on sys.path and session-wide curves
"""

import os
import sys

import pytest

current_dir = os.path.dirname(os.path.abspath(__file__))
src_path = os.path.join(current_dir, 'src')
if src_path not in sys.path:
    sys.path.insert(0, src_path)

from algebra.field import field_of_order  # noqa: E402
from geometry.curves import (  # noqa: E402
    hermitian_as, hermitian_kummer, hermitian_tower, norm_trace_x, norm_trace_y,
)
from geometry.tower import build_point_set  # noqa: E402


@pytest.fixture(scope="session")
def gf16():
    return field_of_order(16)


@pytest.fixture(scope="session")
def gf9():
    return field_of_order(9)


@pytest.fixture(scope="session")
def hermitian():
    desc = hermitian_as(4)
    return desc, build_point_set(desc)


@pytest.fixture(scope="session")
def hermitian_k():
    desc = hermitian_kummer(4)
    return desc, build_point_set(desc)


@pytest.fixture(scope="session")
def norm_trace_curves():
    curves = []
    for desc in (norm_trace_x(2, 3), norm_trace_y(2, 3, 7)):
        curves.append((desc, build_point_set(desc)))
    return curves


@pytest.fixture(scope="session")
def tower():
    desc = hermitian_tower(8, 3)
    return desc, build_point_set(desc)

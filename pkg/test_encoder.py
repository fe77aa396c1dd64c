"""
Tests for the fast encoder against the naive oracle
"""

from concurrent.futures import ThreadPoolExecutor
from math import log2

import pytest

from algebra.base_mpe import ADDITIVE, MULTIPLICATIVE
from algebra.field import FieldSpec
from coding.encoder import (
    decode_message, encode_message, fmpe_encode, fmpe_unencode, metrics, plan, select_base_domain,
)
from coding.formats import Codeword
from coding.oracle import NaiveEvaluator, naive_encode_many, naive_generator_matrix, naive_poly_eval
from geometry.curves import default_lambda, hermitian_as, hermitian_tower
from geometry.rroch import message_to_function, zero_function
from geometry.tower import build_point_set, rational_descriptor
from utils.exceptions import LengthMismatch, NotInCode, PlanMismatch, ValidationError
from utils.prng import SplitMix64

TRIALS = 100


def _curves(hermitian, hermitian_k, norm_trace_curves):
    return [hermitian, hermitian_k] + list(norm_trace_curves)


def _messages(p, count, seed=1):
    rng = SplitMix64(seed)
    return [rng.field_elements(p.field.q, p.k) for _ in range(count)]


def test_hermitian_plan_structure(hermitian):
    desc, pts = hermitian
    p = plan(desc, 60, pts)
    assert p.k == 55
    assert p.N == 64
    assert p.primes == [2, 2]
    assert p.lambdas == [60, 30, 15]
    assert [len(t) for t in p.y_tables] == [64, 32]
    assert [len(inv) for inv in p.fiber_inverses] == [32, 16]
    assert p.base_domain.kind == ADDITIVE
    assert p.base_domain.covers_all
    assert metrics(p)["plan"]["mul"] > 0


def test_kummer_plan_uses_multiplicative_base(hermitian_k):
    desc, pts = hermitian_k
    p = plan(desc, 55, pts)
    assert p.k == 55
    assert p.base_domain.kind == MULTIPLICATIVE
    assert p.base_domain.size == 15
    assert list(p.base_domain.targets) == list(pts.base_places)


def test_select_base_domain_falls_back_to_additive(gf16):
    assert select_base_domain(gf16, [1, 2, 3]).kind == MULTIPLICATIVE
    assert select_base_domain(gf16, [0, 1, 2]).kind == ADDITIVE
    assert select_base_domain(gf16, [1, 2, 3], bound=2).kind == ADDITIVE


def test_plan_fingerprint_tracks_lambda(hermitian):
    desc, pts = hermitian
    assert plan(desc, 60, pts).fingerprint != plan(desc, 59, pts).fingerprint
    assert plan(desc, 60, pts).fingerprint == plan(desc, 60, pts).fingerprint


def test_plan_rejects_bad_inputs(hermitian, hermitian_k):
    desc, pts = hermitian
    with pytest.raises(ValidationError):
        plan(desc, 64, pts)
    with pytest.raises(ValidationError):
        plan(desc, -1, pts)
    with pytest.raises(PlanMismatch):
        plan(desc, 60, hermitian_k[1])


def test_zero_and_constant_functions(hermitian):
    desc, pts = hermitian
    p = plan(desc, 60, pts)
    assert fmpe_encode(p, zero_function(desc, 60)).values == [0] * 64
    message = [0] * p.k
    message[0] = 9
    assert encode_message(p, message).values == [9] * 64
    assert fmpe_unencode(p, Codeword([0] * 64)).is_zero()


def test_function_must_match_plan(hermitian):
    desc, pts = hermitian
    p = plan(desc, 60, pts)
    with pytest.raises(PlanMismatch):
        fmpe_encode(p, zero_function(desc, 59))
    with pytest.raises(LengthMismatch):
        encode_message(p, [0] * 54)
    with pytest.raises(LengthMismatch):
        fmpe_unencode(p, Codeword([0] * 63))


def test_codeword_metadata_must_match_plan(hermitian, hermitian_k):
    desc, pts = hermitian
    p = plan(desc, 60, pts)
    codeword = encode_message(p, _messages(p, 1)[0])
    with pytest.raises(PlanMismatch):
        fmpe_unencode(p, Codeword(codeword.values, hermitian_k[0].fingerprint, 60))
    with pytest.raises(PlanMismatch):
        fmpe_unencode(p, Codeword(codeword.values, desc.fingerprint, 59))
    assert fmpe_unencode(p, codeword, verify=True) == fmpe_unencode(p, Codeword(codeword.values))


def test_oracle_equivalence(hermitian, hermitian_k, norm_trace_curves):
    for desc, pts in _curves(hermitian, hermitian_k, norm_trace_curves):
        p = plan(desc, desc.default_lambda, pts)
        functions = [message_to_function(desc, p.lam, m) for m in _messages(p, TRIALS)]
        expected = naive_encode_many(desc, p.lam, pts, functions)
        for f, want in zip(functions, expected):
            assert fmpe_encode(p, f).values == want.values, desc.name


def test_roundtrip(hermitian, hermitian_k, norm_trace_curves):
    for desc, pts in _curves(hermitian, hermitian_k, norm_trace_curves):
        p = plan(desc, desc.default_lambda, pts)
        for message in _messages(p, TRIALS, seed=2):
            assert decode_message(p, encode_message(p, message), verify=True) == message


def test_roundtrip_at_every_lambda(hermitian):
    desc, pts = hermitian
    for lam in range(0, 64, 7):
        p = plan(desc, lam, pts)
        for message in _messages(p, 5, seed=lam):
            assert decode_message(p, encode_message(p, message)) == message


def test_tower_matches_oracle(tower):
    desc, pts = tower
    p = plan(desc, 2551, pts)
    assert p.k == 2048
    assert p.base_domain.kind == ADDITIVE
    functions = [message_to_function(desc, p.lam, m) for m in _messages(p, 5)]
    expected = naive_encode_many(desc, p.lam, pts, functions)
    for f, want in zip(functions, expected):
        codeword = fmpe_encode(p, f)
        assert codeword.values == want.values
        assert fmpe_unencode(p, codeword) == f


def test_corrupted_codeword_is_not_in_code(hermitian):
    desc, pts = hermitian
    p = plan(desc, 60, pts)
    codeword = encode_message(p, _messages(p, 1)[0])
    corrupted = list(codeword.values)
    corrupted[17] ^= 1
    with pytest.raises(NotInCode):
        fmpe_unencode(p, Codeword(corrupted), verify=True)
    fmpe_unencode(p, Codeword(corrupted))


def test_linearity(hermitian_k):
    desc, pts = hermitian_k
    gf = desc.field
    p = plan(desc, 55, pts)
    a, b = _messages(p, 2, seed=5)
    summed = [gf.add(x, y) for x, y in zip(a, b)]
    scaled = [gf.mul(7, x) for x in a]
    ca, cb = encode_message(p, a).values, encode_message(p, b).values
    assert encode_message(p, summed).values == [gf.add(x, y) for x, y in zip(ca, cb)]
    assert encode_message(p, scaled).values == [gf.mul(7, x) for x in ca]


def test_weight_bound(hermitian, hermitian_k, norm_trace_curves):
    for desc, pts in _curves(hermitian, hermitian_k, norm_trace_curves):
        p = plan(desc, desc.default_lambda, pts)
        rng = SplitMix64(11)
        for _ in range(1000):
            codeword = encode_message(p, rng.nonzero_vector(p.field.q, p.k))
            assert codeword.weight() >= pts.N - p.lam


def test_unit_messages_give_generator_rows(hermitian):
    desc, pts = hermitian
    p = plan(desc, 60, pts)
    G = naive_generator_matrix(desc, 60, pts)
    for i in range(p.k):
        unit = [0] * p.k
        unit[i] = 1
        assert encode_message(p, unit).values == [int(v) for v in G[i]]


def test_metrics_are_deterministic(hermitian):
    desc, pts = hermitian
    p = plan(desc, 60, pts)
    f = message_to_function(desc, 60, _messages(p, 1)[0])
    plan_ops = metrics(p)["plan"]
    fmpe_encode(p, f)
    first = metrics(p)
    p.reset_metrics()
    fmpe_encode(p, f)
    second = metrics(p)
    assert first == second
    assert second["plan"] == plan_ops
    total = second["encode"]["mul"]
    assert total == second["encode.base"]["mul"] + second["encode.recombine"]["mul"]
    assert total > 0


def test_scaling_is_quasilinear():
    normalized, speedups = [], []
    for kappa in (4, 8, 16):
        desc = hermitian_as(kappa)
        pts = build_point_set(desc)
        p = plan(desc, desc.default_lambda, pts)
        f = message_to_function(desc, p.lam, _messages(p, 1)[0])
        fmpe_encode(p, f)
        muls = metrics(p)["encode"]["mul"]
        n = pts.N
        normalized.append(muls / (n * log2(n)))
        naive = NaiveEvaluator(desc, p.lam, pts)
        speedups.append((naive.evaluation_cost() + naive.k * n) / muls)
    assert max(normalized) / min(normalized) <= 2.5
    assert speedups == sorted(speedups)
    assert speedups[0] > 1


def test_reed_solomon_plan():
    spec = FieldSpec.for_order(16)
    desc = rational_descriptor(spec)
    pts = build_point_set(desc)
    p = plan(desc, 7, pts)
    assert p.primes == []
    assert p.k == 8
    coeffs = [3, 0, 1, 4, 1, 5, 9, 2]
    assert encode_message(p, coeffs).values == naive_poly_eval(desc.field, coeffs, range(16))
    assert decode_message(p, encode_message(p, coeffs)) == coeffs


def test_reed_solomon_on_multiplicative_subset():
    desc = rational_descriptor(FieldSpec.for_order(16))
    places = list(range(15, 0, -1))
    pts = build_point_set(desc, places)
    p = plan(desc, 9, pts)
    assert p.base_domain.kind == MULTIPLICATIVE
    coeffs = SplitMix64(4).field_elements(16, 10)
    codeword = encode_message(p, coeffs)
    assert codeword.values == naive_poly_eval(desc.field, coeffs, places)
    assert decode_message(p, codeword, verify=True) == coeffs


def test_concurrent_encodes_match_sequential(hermitian):
    desc, pts = hermitian
    p = plan(desc, 60, pts)
    messages = _messages(p, 16, seed=9)
    sequential = [encode_message(p, m).values for m in messages]
    with ThreadPoolExecutor(max_workers=4) as pool:
        threaded = list(pool.map(lambda m: encode_message(p, m).values, messages))
    assert threaded == sequential


def test_kummer_tower_matches_oracle():
    desc = hermitian_tower(9, 3, "kummer")
    pts = build_point_set(desc)
    assert pts.s == 36
    assert pts.N == 3600
    p = plan(desc, 1800, pts)
    assert p.k == 1081
    functions = [message_to_function(desc, p.lam, m) for m in _messages(p, 3)]
    expected = naive_encode_many(desc, p.lam, pts, functions)
    for f, want in zip(functions, expected):
        codeword = fmpe_encode(p, f)
        assert codeword.values == want.values
        assert fmpe_unencode(p, codeword, verify=True) == f


def test_small_kummer_tower_roundtrip():
    desc = hermitian_tower(4, 2, "kummer")
    pts = build_point_set(desc)
    assert pts.N == 60
    p = plan(desc, default_lambda(desc, pts.N), pts)
    assert p.k == 30
    for message in _messages(p, 20, seed=6):
        assert decode_message(p, encode_message(p, message), verify=True) == message

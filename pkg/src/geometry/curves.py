"""
Named curve presets: Hermitian (both forms), norm-trace (both forms) and the
Hermitian tower, plus rational point census and the Hasse-Weil check
"""

from dataclasses import dataclass
from math import isqrt
from typing import Any, Dict, List, Optional, Sequence

from sympy.ntheory import factorint

from algebra.field import (
    MAX_ORDER, FieldSpec, GaloisField, LinearizedPolynomial, factor_smooth, get_field, is_mth_power,
    kernel_basis, solve_linearized, subspace_polynomial, trace_to,
)
from algebra.poly import evaluate
from geometry.rroch import genus, hermitian_tower_genus
from geometry.tower import (
    ARTIN_SCHREIER, KUMMER, ExtensionDescriptor, ExtensionStep, FiberSolver, artin_schreier_step,
    build_point_set, kummer_step, rational_descriptor, verify_p4,
)
from utils.config import get_config
from utils.exceptions import BadKappa, BadTowerHeight, DescriptorError, ValidationError
from utils.logger import get_logger

logger = get_logger(__name__)

PRESETS = ("hermitian_as", "hermitian_kummer", "norm_trace_x", "norm_trace_y", "hermitian_tower")


def _kappa_field(kappa: int, degree: int, spec: Optional[FieldSpec]) -> FieldSpec:
    """GF(kappa^degree), validating kappa as a prime power"""
    if kappa < 2 or len(factorint(kappa)) != 1:
        raise BadKappa(f"kappa = {kappa} is not a prime power")
    q = kappa ** degree
    if q > MAX_ORDER:
        raise BadKappa(f"kappa = {kappa} gives a field of order {q}, above 2^32")
    if spec is None:
        return FieldSpec.for_order(q)
    if spec.q != q:
        raise BadKappa(f"field GF({spec.q}) does not match kappa^{degree} = {q}")
    return spec


def _monomial(e: int) -> List[int]:
    return [0] * e + [1]


def _trace_poly(kappa: int, r: int) -> List[int]:
    """T + T^kappa + ... + T^(kappa^(r-1)) as a dense polynomial"""
    coeffs = [0] * (kappa ** (r - 1) + 1)
    for j in range(r):
        coeffs[kappa ** j] = 1
    return coeffs


def _trace_linearized(gf: GaloisField, kappa: int, r: int) -> LinearizedPolynomial:
    a = gf.m // r
    coeffs = [0] * (a * (r - 1) + 1)
    for j in range(r):
        coeffs[a * j] = 1
    return LinearizedPolynomial(gf.p, tuple(coeffs))


def _checked(desc: ExtensionDescriptor) -> ExtensionDescriptor:
    report = verify_p4(desc)
    if not report.passed:
        raise DescriptorError(f"{desc.name} fails structural checks: {'; '.join(report.details)}")
    return desc


def _half_length_lambda(g: int, n: int) -> int:
    return g + n // 2 - 1


def hermitian_as(kappa: int, spec: Optional[FieldSpec] = None) -> ExtensionDescriptor:
    """y^kappa + y = x^(kappa+1) over F_q(x), q = kappa^2"""
    spec = _kappa_field(kappa, 2, spec)
    gf = get_field(spec)
    w_basis = kernel_basis(gf, _trace_linearized(gf, kappa, 2))
    step = artin_schreier_step(gf, _monomial(kappa + 1), w_basis)
    return _checked(ExtensionDescriptor(
        spec, (step,), name="hermitian_as", params={"kappa": kappa},
        default_lambda=kappa ** 3 - kappa,
        closed_form_genus=kappa * (kappa - 1) // 2,
        expected_length=kappa ** 3,
    ))


def hermitian_kummer(kappa: int, spec: Optional[FieldSpec] = None) -> ExtensionDescriptor:
    """x^(kappa+1) = y^kappa + y over F_q(y)"""
    spec = _kappa_field(kappa, 2, spec)
    factor_smooth(spec.q - 1, get_config().get_smooth_bound())
    step = kummer_step(_trace_poly(kappa, 2), kappa + 1)
    return _checked(ExtensionDescriptor(
        spec, (step,), name="hermitian_kummer", params={"kappa": kappa},
        default_lambda=kappa ** 3 - 2 * kappa - 1,
        closed_form_genus=kappa * (kappa - 1) // 2,
        expected_length=kappa ** 3 - kappa,
    ))


def norm_trace_x(kappa: int, r: int, v_basis: Optional[Sequence[int]] = None,
                 spec: Optional[FieldSpec] = None) -> ExtensionDescriptor:
    """prod_(a in V) (y - a) = x^((kappa^r - 1)/(kappa - 1)), V inside ker Tr"""
    if r < 2:
        raise DescriptorError(f"norm-trace curves need r >= 2, got {r}")
    spec = _kappa_field(kappa, r, spec)
    gf = get_field(spec)
    sub_degree = gf.m // r
    if v_basis is None:
        v_basis = kernel_basis(gf, _trace_linearized(gf, kappa, r))
    v_basis = list(v_basis)
    off_kernel = [v for v in v_basis if trace_to(gf, sub_degree, v) != 0]
    if off_kernel:
        raise DescriptorError(f"V basis elements {off_kernel} have nonzero trace")
    e = (kappa ** r - 1) // (kappa - 1)
    step = artin_schreier_step(gf, _monomial(e), v_basis)
    size = gf.p ** len(v_basis)
    g = sum(kappa ** j for j in range(1, r)) * (size - 1) // 2
    return _checked(ExtensionDescriptor(
        spec, (step,), name="norm_trace_x",
        params={"kappa": kappa, "r": r, "V_basis": v_basis},
        default_lambda=_half_length_lambda(g, spec.q * size),
        closed_form_genus=g,
        expected_length=spec.q * size,
    ))


def norm_trace_y(kappa: int, r: int, e: Optional[int] = None,
                 spec: Optional[FieldSpec] = None) -> ExtensionDescriptor:
    """x^e = y + y^kappa + ... + y^(kappa^(r-1)) over F_q(y)"""
    if r < 2:
        raise DescriptorError(f"norm-trace curves need r >= 2, got {r}")
    spec = _kappa_field(kappa, r, spec)
    full = (kappa ** r - 1) // (kappa - 1)
    if e is None:
        e = full
    if e < 2 or full % e:
        raise DescriptorError(f"e = {e} must divide (kappa^r - 1)/(kappa - 1) = {full}")
    step = kummer_step(_trace_poly(kappa, r), e)
    length = (spec.q - kappa ** (r - 1)) * e
    g = (kappa ** (r - 1) - 1) * (e - 1) // 2
    return _checked(ExtensionDescriptor(
        spec, (step,), name="norm_trace_y", params={"kappa": kappa, "r": r, "e": e},
        default_lambda=_half_length_lambda(g, length),
        closed_form_genus=g,
        expected_length=length,
    ))


def hermitian_tower(kappa: int, n: int, form: str = "as",
                    spec: Optional[FieldSpec] = None) -> ExtensionDescriptor:
    """x_(i+1)^kappa + x_(i+1) = x_i^(kappa+1), or y_(i+1)^(kappa+1) = y_i^kappa + y_i"""
    spec = _kappa_field(kappa, 2, spec)
    if not 2 <= n <= kappa // 2:
        raise BadTowerHeight(f"tower height n = {n} outside 2..{kappa // 2}")
    gf = get_field(spec)
    if form == "as":
        w_basis = kernel_basis(gf, _trace_linearized(gf, kappa, 2))
        steps = tuple(artin_schreier_step(gf, _monomial(kappa + 1), w_basis) for _ in range(n - 1))
        length = kappa ** (n + 1)
    elif form == "kummer":
        factor_smooth(spec.q - 1, get_config().get_smooth_bound())
        steps = tuple(kummer_step(_trace_poly(kappa, 2), kappa + 1) for _ in range(n - 1))
        length = None
    else:
        raise DescriptorError(f"unknown tower form {form!r}")
    g = hermitian_tower_genus(kappa, n)
    return _checked(ExtensionDescriptor(
        spec, steps, name="hermitian_tower", params={"kappa": kappa, "n": n, "form": form},
        default_lambda=_half_length_lambda(g, length) if length is not None else None,
        closed_form_genus=g,
        expected_length=length,
    ))


def default_lambda(desc: ExtensionDescriptor, n_points: Optional[int] = None) -> int:
    """Preset value, else g + floor(N/2) - 1"""
    if desc.default_lambda is not None:
        return desc.default_lambda
    if n_points is None:
        n_points = build_point_set(desc).N
    return _half_length_lambda(genus(desc), n_points)


def descriptor_from_json(data: Dict[str, Any]) -> ExtensionDescriptor:
    """Inverse of ExtensionDescriptor.to_json for presets and raw descriptors"""
    try:
        kind = data["kind"]
        params = data.get("params", {})
        spec = FieldSpec.from_json(data["field"]) if "field" in data else None
        if kind in ("hermitian_as", "hermitian_kummer"):
            factory = hermitian_as if kind == "hermitian_as" else hermitian_kummer
            return factory(int(params["kappa"]), spec=spec)
        if kind == "norm_trace_x":
            return norm_trace_x(int(params["kappa"]), int(params["r"]), params.get("V_basis"), spec=spec)
        if kind == "norm_trace_y":
            return norm_trace_y(int(params["kappa"]), int(params["r"]), params.get("e"), spec=spec)
        if kind == "hermitian_tower":
            return hermitian_tower(int(params["kappa"]), int(params["n"]), params.get("form", "as"), spec=spec)
        if spec is None:
            raise DescriptorError("raw descriptors need an explicit field")
        if kind == "rational":
            return rational_descriptor(spec)
        if kind in (KUMMER, ARTIN_SCHREIER):
            step_data = dict(params, kind=kind)
            steps = (_step_from_json(get_field(spec), step_data),)
        elif kind == "tower":
            steps = tuple(_step_from_json(get_field(spec), s) for s in data["steps"])
        else:
            raise DescriptorError(f"unknown descriptor kind {kind!r}")
        return ExtensionDescriptor(spec, steps)
    except (KeyError, TypeError, ValueError) as e:
        raise DescriptorError(f"malformed descriptor: {e!r}")


def _step_from_json(gf: GaloisField, data: Dict[str, Any]) -> ExtensionStep:
    u = [int(c) for c in data["u_coeffs"]]
    if data["kind"] == KUMMER:
        return kummer_step(u, int(data["m"]))
    if data["kind"] == ARTIN_SCHREIER:
        return artin_schreier_step(gf, u, [int(w) for w in data["W_basis"]])
    raise DescriptorError(f"unknown step kind {data['kind']!r}")


@dataclass(frozen=True)
class PointCensus:
    """Rational places: completely split fibers, other affine points, places at infinity"""
    split: int
    other: int
    at_infinity: int = 1

    @property
    def total(self) -> int:
        return self.split + self.other + self.at_infinity

    def to_json(self) -> Dict[str, int]:
        return {"split": self.split, "other": self.other,
                "at_infinity": self.at_infinity, "total": self.total}


def _step_solutions(solver: FiberSolver, linearized: Dict[int, LinearizedPolynomial],
                    step_index: int, prev: int) -> List[int]:
    """Every value of the step coordinate over ``prev``, ramified points included"""
    gf = solver.gf
    step = solver.desc.steps[step_index]
    rhs = evaluate(solver.ops, step.u, prev)
    if step.kind == KUMMER:
        if rhs == 0:
            return [0]
        if not is_mth_power(gf, rhs, step.m):
            return []
        return list(solver.fiber(step_index, prev))
    return solve_linearized(gf, linearized[step_index], rhs)


def census(desc: ExtensionDescriptor) -> PointCensus:
    """Count affine rational points by walking every step; P_inf is totally ramified"""
    solver = FiberSolver(desc)
    linearized = {i: subspace_polynomial(solver.gf, s.w_basis)
                  for i, s in enumerate(desc.steps) if s.kind == ARTIN_SCHREIER}
    total_affine = 0
    split = 0
    for alpha in range(desc.field.q):
        frontier = [alpha]
        for step_index in range(len(desc.steps)):
            frontier = [v for prev in frontier for v in _step_solutions(solver, linearized, step_index, prev)]
        total_affine += len(frontier)
        if solver.full_fiber(alpha) is not None:
            split += desc.m
    return PointCensus(split=split, other=total_affine - split)


@dataclass(frozen=True)
class HasseWeilCheck:
    q: int
    genus: int
    points: int
    holds: bool
    attains: bool

    def to_json(self) -> Dict[str, Any]:
        return {"q": self.q, "genus": self.genus, "points": self.points,
                "holds": self.holds, "maximal": self.attains}


def hasse_weil(q: int, g: int, points: int) -> HasseWeilCheck:
    """points <= q + 1 + 2g sqrt(q), in exact integer arithmetic"""
    if q < 2 or g < 0:
        raise ValidationError(f"invalid Hasse-Weil input q = {q}, g = {g}")
    excess = points - q - 1
    holds = excess <= 0 or excess * excess <= 4 * g * g * q
    attains = excess >= 0 and excess * excess == 4 * g * g * q
    return HasseWeilCheck(q, g, points, holds, attains)


def hasse_weil_upper(q: int, g: int) -> int:
    """floor(q + 1 + 2g sqrt(q))"""
    return q + 1 + isqrt(4 * g * g * q)

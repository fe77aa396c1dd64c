"""
Galois extension towers over F_q(x_1)

A descriptor is a chain of Kummer (y^m = u(x)) and Artin-Schreier
(L_W(y) = u(x)) steps, each over the previous coordinate. Every step is
split into prime-degree levels; levels are numbered from the top step down,
so level 1 always peels the newest coordinate.
"""

import hashlib
import json
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

from algebra.field import (
    FieldOps, FieldSpec, GaloisField, LinearizedPolynomial, factor_smooth, get_field,
    is_mth_power, mth_root, root_of_unity, solve_linearized, subspace_polynomial,
)
from algebra.linalg import rref_mod_p
from algebra.poly import degree, evaluate, is_square_free, trim
from utils.config import get_config
from utils.exceptions import (
    AgfftError, DescriptorError, EmptyPointSet, FiberDefect, KernelDefect, ValidationError,
)
from utils.logger import get_logger

logger = get_logger(__name__)

KUMMER = "kummer"
ARTIN_SCHREIER = "artin_schreier"

POWER = "power"
LINEARIZED = "linearized"


@dataclass(frozen=True)
class ExtensionStep:
    """One Galois step: y^m = u(prev) or L_W(y) = u(prev)"""
    kind: str
    u: Tuple[int, ...]
    m: int
    w_basis: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(trim(self.u)))
        object.__setattr__(self, "w_basis", tuple(self.w_basis))
        if self.kind not in (KUMMER, ARTIN_SCHREIER):
            raise DescriptorError(f"unknown extension kind {self.kind!r}")

    @property
    def d(self) -> int:
        """deg u"""
        return degree(self.u)

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind, "u_coeffs": list(self.u)}
        if self.kind == KUMMER:
            data["m"] = self.m
        else:
            data["W_basis"] = list(self.w_basis)
        return data


def kummer_step(u: Sequence[int], m: int) -> ExtensionStep:
    return ExtensionStep(KUMMER, tuple(u), m)


def artin_schreier_step(field: GaloisField, u: Sequence[int], w_basis: Sequence[int]) -> ExtensionStep:
    return ExtensionStep(ARTIN_SCHREIER, tuple(u), field.p ** len(w_basis), tuple(w_basis))


@dataclass(frozen=True)
class ExtensionDescriptor:
    """Curve given as a chain of steps over F_q(x_1), bottom step first"""
    field_spec: FieldSpec
    steps: Tuple[ExtensionStep, ...]
    name: str = "custom"
    params: Dict[str, Any] = dataclass_field(default_factory=dict, compare=False, hash=False)
    default_lambda: Optional[int] = None
    closed_form_genus: Optional[int] = None
    expected_length: Optional[int] = None

    @property
    def field(self) -> GaloisField:
        return get_field(self.field_spec)

    @property
    def m(self) -> int:
        """Degree over the rational base"""
        total = 1
        for step in self.steps:
            total *= step.m
        return total

    @property
    def d(self) -> int:
        """Pole order of the newest coordinate"""
        return pole_orders(self)[-1]

    @property
    def is_plane(self) -> bool:
        return len(self.steps) <= 1

    @property
    def n_coords(self) -> int:
        return len(self.steps) + 1

    def to_json(self) -> Dict[str, Any]:
        kind = self.name
        if self.name == "custom":
            kind = self.steps[0].kind if len(self.steps) == 1 else "tower"
        data = {"field": self.field_spec.to_json(), "kind": kind, "params": dict(self.params)}
        if self.name == "custom":
            data["steps"] = [step.to_json() for step in self.steps]
            if len(self.steps) == 1:
                data["params"].update(self.steps[0].to_json())
                del data["params"]["kind"]
        return data

    @property
    def fingerprint(self) -> str:
        canonical = {"field": self.field_spec.to_json(), "steps": [s.to_json() for s in self.steps]}
        digest = hashlib.sha256(json.dumps(canonical, sort_keys=True).encode()).hexdigest()
        return digest[:16]


def rational_descriptor(spec: FieldSpec) -> ExtensionDescriptor:
    """F_q(x) itself; the code is Reed-Solomon"""
    return ExtensionDescriptor(spec, (), name="rational")


def pole_orders(desc: ExtensionDescriptor) -> List[int]:
    """Pole orders at infinity of x_1..x_n in the top field"""
    poles = [1]
    for step in desc.steps:
        newest = step.d * poles[-1]
        poles = [pole * step.m for pole in poles] + [newest]
    return poles


@dataclass
class P4Report:
    """Outcome of the structural checks; never raises"""
    passed: bool
    failures: List[str]
    details: List[str]
    propositions: List[str]

    def to_json(self) -> Dict[str, Any]:
        return {"passed": self.passed, "failures": self.failures,
                "details": self.details, "propositions": self.propositions}


def _check_step(gf: GaloisField, step: ExtensionStep, prev_pole: int, bound: int,
                failures: List[str], details: List[str], label: str):
    ops = gf.ops()
    if step.d < 1:
        failures.append("ConstantU")
        details.append(f"{label}: u must be non-constant")
        return
    if any(not 0 <= c < gf.q for c in step.u):
        failures.append("BadCoefficients")
        details.append(f"{label}: coefficients of u must lie in [0, {gf.q})")
        return
    pole = step.d * prev_pole
    if step.kind == KUMMER:
        if step.m < 1 or (gf.q - 1) % step.m:
            failures.append("MDividesQMinus1")
            details.append(f"{label}: m = {step.m} does not divide q - 1 = {gf.q - 1}")
        else:
            try:
                factor_smooth(step.m, bound)
            except AgfftError as e:
                failures.append("SmoothDegree")
                details.append(f"{label}: {e}")
        if not is_square_free(ops, step.u):
            failures.append("SquareFree")
            details.append(f"{label}: u is not square-free")
        if gcd(step.m, pole) != 1:
            failures.append("Coprime")
            details.append(f"{label}: gcd(m = {step.m}, pole order {pole}) != 1")
    else:
        basis = list(step.w_basis)
        if not basis or any(not 0 < w < gf.q for w in basis):
            failures.append("LinearIndependence")
            details.append(f"{label}: W basis must be nonempty nonzero field elements")
        else:
            _, pivots = rref_mod_p([gf.coords(w) for w in basis], gf.p)
            if len(pivots) != len(basis):
                failures.append("LinearIndependence")
                details.append(f"{label}: W basis is GF({gf.p})-dependent")
        if step.m != gf.p ** len(basis):
            failures.append("Degree")
            details.append(f"{label}: degree {step.m} differs from |W| = {gf.p ** len(basis)}")
        if gf.p > bound:
            failures.append("SmoothDegree")
            details.append(f"{label}: characteristic {gf.p} exceeds smoothness bound {bound}")
        if gcd(pole, gf.p) != 1:
            failures.append("Coprime")
            details.append(f"{label}: pole order {pole} divisible by p = {gf.p}")


def verify_p4(desc: ExtensionDescriptor, bound: Optional[int] = None) -> P4Report:
    """Abelian smooth degree, square-free / independent data, coprime pole orders, roots of unity"""
    if bound is None:
        bound = get_config().get_smooth_bound()
    failures: List[str] = []
    details: List[str] = []
    propositions: List[str] = []
    try:
        gf = desc.field
        prev_pole = 1
        for index, step in enumerate(desc.steps):
            label = f"step {index + 1} ({step.kind})"
            _check_step(gf, step, prev_pole, bound, failures, details, label)
            propositions.append("kummer" if step.kind == KUMMER else "artin_schreier")
            if step.d >= 1:
                prev_pole = step.d * prev_pole
    except AgfftError as e:
        failures.append("Descriptor")
        details.append(str(e))
    passed = not failures
    if not passed:
        logger.warning(f"structural checks failed for {desc.name}: {failures}")
    return P4Report(passed, failures, details, propositions)


@dataclass(frozen=True)
class LevelData:
    """One prime-degree level of the tower

    generator_map sends y_(k-1) to y_k: Power{p_k} or LinearizedStep{c_k}.
    fiber_labels act on y_(k-1); coordinate_labels act on the step coordinate.
    """
    index: int
    prime: int
    degree_below: int
    step_index: int
    local_index: int
    generator_kind: str
    constant: int
    fiber_labels: Tuple[int, ...]
    coordinate_labels: Tuple[int, ...]
    pole_weight: int
    local_below: int = 1

    @property
    def coordinate(self) -> int:
        """Position of the split coordinate in (x_1, ..., x_n)"""
        return self.step_index + 1

    def apply(self, ops: FieldOps, value: int) -> int:
        """y_(k-1) -> y_k"""
        if self.generator_kind == POWER:
            return ops.pow(value, self.prime)
        return ops.sub(ops.pow(value, self.prime), ops.mul(self.constant, value))


def _step_levels(gf: GaloisField, step: ExtensionStep, bound: int) -> List[Dict[str, Any]]:
    """Level records local to one step, smallest prime first"""
    records = []
    if step.kind == KUMMER:
        primes = factor_smooth(step.m, bound)
        zeta = root_of_unity(gf, step.m)
        below = 1
        for prime in primes:
            below_next = below * prime
            coordinate_step = gf.pow(zeta, step.m // below_next)
            label_root = gf.pow(coordinate_step, below)
            records.append({
                "prime": prime, "kind": POWER, "constant": 0,
                "fiber_labels": tuple(gf.pow(label_root, a) for a in range(prime)),
                "coordinate_labels": tuple(gf.pow(coordinate_step, a) for a in range(prime)),
                "local_below": below,
            })
            below = below_next
    else:
        current = LinearizedPolynomial(gf.p, (1,))
        for i, w in enumerate(step.w_basis):
            image = current.evaluate(gf, w)
            if image == 0:
                raise KernelDefect(f"W basis element {w} is dependent on its predecessors")
            records.append({
                "prime": gf.p, "kind": LINEARIZED, "constant": gf.pow(image, gf.p - 1),
                "fiber_labels": tuple(gf.scalar_mul(a, image) for a in range(gf.p)),
                "coordinate_labels": tuple(gf.scalar_mul(a, w) for a in range(gf.p)),
                "local_below": gf.p ** i,
            })
            current = subspace_polynomial(gf, step.w_basis[:i + 1])
    return records


@lru_cache(maxsize=64)
def _build_levels_cached(desc: ExtensionDescriptor, bound: int) -> Tuple[LevelData, ...]:
    gf = desc.field
    poles = pole_orders(desc)
    levels: List[LevelData] = []
    below = 1
    for step_index in range(len(desc.steps) - 1, -1, -1):
        step = desc.steps[step_index]
        coordinate_pole = poles[step_index + 1]
        for local_index, record in enumerate(_step_levels(gf, step, bound)):
            below *= record["prime"]
            levels.append(LevelData(
                index=len(levels) + 1,
                prime=record["prime"],
                degree_below=below,
                step_index=step_index,
                local_index=local_index,
                generator_kind=record["kind"],
                constant=record["constant"],
                fiber_labels=record["fiber_labels"],
                coordinate_labels=record["coordinate_labels"],
                pole_weight=coordinate_pole * record["local_below"],
                local_below=record["local_below"],
            ))
    return tuple(levels)


def build_levels(desc: ExtensionDescriptor, bound: Optional[int] = None) -> List[LevelData]:
    """Prime-degree levels, top step first"""
    if bound is None:
        bound = get_config().get_smooth_bound()
    return list(_build_levels_cached(desc, bound))


class FiberSolver:
    """Canonical fibers of each step over a value of the previous coordinate"""

    def __init__(self, desc: ExtensionDescriptor, bound: Optional[int] = None):
        self.desc = desc
        self.gf = desc.field
        self.ops = self.gf.ops()
        self.levels = build_levels(desc, bound)
        self.logger = get_logger(__name__)
        self._cache: Dict[Tuple[int, int], Optional[Tuple[int, ...]]] = {}
        self._linearized = {}
        for index, step in enumerate(desc.steps):
            if step.kind == ARTIN_SCHREIER:
                self._linearized[index] = subspace_polynomial(self.gf, step.w_basis)

    def _step_levels(self, step_index: int) -> List[LevelData]:
        return [lv for lv in self.levels if lv.step_index == step_index]

    def _root(self, step_index: int, value: int) -> Optional[int]:
        step = self.desc.steps[step_index]
        if step.kind == KUMMER:
            if value == 0 or not is_mth_power(self.gf, value, step.m):
                return None
            return mth_root(self.gf, value, step.m)
        solutions = solve_linearized(self.gf, self._linearized[step_index], value)
        return solutions[0] if solutions else None

    def on_curve(self, step_index: int, prev: int, y: int) -> bool:
        step = self.desc.steps[step_index]
        rhs = evaluate(self.ops, step.u, prev)
        if step.kind == KUMMER:
            return self.gf.pow(y, step.m) == rhs
        return self._linearized[step_index].evaluate(self.gf, y) == rhs

    def fiber(self, step_index: int, prev: int) -> Optional[Tuple[int, ...]]:
        """All m values of the step coordinate over ``prev``, or None if it does not split"""
        key = (step_index, prev)
        if key in self._cache:
            return self._cache[key]
        step = self.desc.steps[step_index]
        beta = self._root(step_index, evaluate(self.ops, step.u, prev))
        values = None
        if beta is not None:
            values = [beta]
            # mixed radix, first level fastest
            for level in self._step_levels(step_index):
                if step.kind == KUMMER:
                    values = [self.gf.mul(v, label) for label in level.coordinate_labels for v in values]
                else:
                    values = [self.gf.add(v, label) for label in level.coordinate_labels for v in values]
            for y in values:
                if not self.on_curve(step_index, prev, y):
                    raise FiberDefect(f"point ({prev}, {y}) misses step {step_index + 1}")
            if len(set(values)) != step.m:
                raise FiberDefect(f"fiber over {prev} has repeated points")
            values = tuple(values)
        self._cache[key] = values
        return values

    def full_fiber(self, base: int) -> Optional[List[Tuple[int, ...]]]:
        """Coordinate tuples over a base place, newest coordinate fastest"""
        tuples = [(base,)]
        for step_index in range(len(self.desc.steps)):
            extended = []
            for coords in tuples:
                values = self.fiber(step_index, coords[-1])
                if values is None:
                    return None
                extended.extend(coords + (v,) for v in values)
            tuples = extended
        return tuples


def enumerate_splitting(desc: ExtensionDescriptor, bound: Optional[int] = None) -> List[int]:
    """Base places whose whole fiber splits, sorted by codec value"""
    solver = FiberSolver(desc, bound)
    return [alpha for alpha in range(desc.field.q) if solver.full_fiber(alpha) is not None]


@dataclass(frozen=True)
class CurvePoint:
    coords: Tuple[int, ...]

    @property
    def x_coords(self) -> Tuple[int, ...]:
        return self.coords[:-1] if len(self.coords) > 1 else self.coords

    @property
    def y(self) -> int:
        return self.coords[-1]


class LevelView:
    """Stride view of the points: one representative per level-j orbit"""

    def __init__(self, points: Sequence[CurvePoint], stride: int):
        self._points = points
        self.stride = stride

    def __len__(self):
        return len(self._points) // self.stride

    def __getitem__(self, i: int) -> CurvePoint:
        if not 0 <= i < len(self):
            raise IndexError(i)
        return self._points[i * self.stride]

    def __iter__(self):
        for i in range(len(self)):
            yield self._points[i * self.stride]


class PointSet:
    """Evaluation points as s contiguous fibers of m points"""

    def __init__(self, desc: ExtensionDescriptor, base_places: Sequence[int],
                 points: Sequence[CurvePoint], levels: Sequence[LevelData]):
        self.desc = desc
        self.base_places = tuple(base_places)
        self.points: Tuple[CurvePoint, ...] = tuple(points)
        self.levels = list(levels)
        self.m = desc.m
        self.s = len(self.base_places)

    @property
    def N(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def level_view(self, j: int) -> LevelView:
        stride = 1 if j == 0 else self.levels[j - 1].degree_below
        return LevelView(self.points, stride)

    def to_json(self) -> Dict[str, Any]:
        """Base places only; fibers are regenerated on load"""
        return {"descriptor": self.desc.fingerprint, "base_places": list(self.base_places)}


def build_point_set(desc: ExtensionDescriptor, base_places: Optional[Sequence[int]] = None,
                    bound: Optional[int] = None) -> PointSet:
    """Fibers over the chosen base places, in base-place order"""
    solver = FiberSolver(desc, bound)
    if base_places is None:
        base_places = [a for a in range(desc.field.q) if solver.full_fiber(a) is not None]
    points: List[CurvePoint] = []
    for alpha in base_places:
        if not 0 <= alpha < desc.field.q:
            raise ValidationError(f"base place {alpha} is not an element of GF({desc.field.q})")
        fiber = solver.full_fiber(alpha)
        if fiber is None:
            raise ValidationError(f"base place {alpha} does not split completely")
        points.extend(CurvePoint(coords) for coords in fiber)
    if not points:
        raise EmptyPointSet(f"no base place of {desc.name} splits completely")
    logger.debug(f"{desc.name}: {len(base_places)} base places, N = {len(points)}")
    return PointSet(desc, base_places, points, solver.levels)


def point_set_from_json(desc: ExtensionDescriptor, data: Dict[str, Any]) -> PointSet:
    if data.get("descriptor") != desc.fingerprint:
        raise ValidationError("point set belongs to a different descriptor")
    return build_point_set(desc, [int(a) for a in data["base_places"]])


def level_y_values(pts: PointSet, levels: Sequence[LevelData],
                   ops: Optional[FieldOps] = None) -> List[List[int]]:
    """tables[k-1][i] = y_(k-1)(P) for the i-th point of level_view(k-1)"""
    if ops is None:
        ops = pts.desc.field.ops()
    tables: List[List[int]] = []
    for k, level in enumerate(levels, start=1):
        stride = level.degree_below // level.prime
        size = pts.N // stride
        if level.local_index == 0:
            coordinate = level.coordinate
            table = [pts.points[i * stride].coords[coordinate] for i in range(size)]
        else:
            previous = levels[k - 2]
            prev_table = tables[-1]
            table = [previous.apply(ops, prev_table[i * previous.prime]) for i in range(size)]
        tables.append(table)
    return tables

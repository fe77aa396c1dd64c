"""
Canonical monomial bases of L(lambda * P_inf) along the level chain

A level-t monomial is x_1^e times a product of y_(k-1)^(e_k) over the levels
k > t, with digits e_k < p_k. Its pole order in level-t units is
(e * pole(x_1) + sum e_k * pole(y_(k-1))) / |G_t|.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from geometry.tower import ExtensionDescriptor, LevelData, build_levels, pole_orders
from utils.config import get_config
from utils.exceptions import (
    DimensionMismatch, LengthMismatch, NotCoprime, UnsupportedBase, ValidationError,
)
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class Monomial:
    x_exponent: int
    y_digits: Tuple[int, ...]
    pole_order: int

    @property
    def key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.x_exponent, self.y_digits)


@dataclass(frozen=True)
class MonomialLayout:
    """Pole weights of x_1 and of every level generator, in top-field units"""
    x_weight: int
    primes: Tuple[int, ...]
    weights: Tuple[int, ...]
    group_orders: Tuple[int, ...]
    levels: Tuple[LevelData, ...]

    @property
    def depth(self) -> int:
        return len(self.primes)


def _bound(bound: Optional[int]) -> int:
    return get_config().get_smooth_bound() if bound is None else bound


def monomial_layout(desc: ExtensionDescriptor, bound: Optional[int] = None) -> MonomialLayout:
    return _monomial_layout(desc, _bound(bound))


@lru_cache(maxsize=64)
def _monomial_layout(desc: ExtensionDescriptor, bound: int) -> MonomialLayout:
    levels = tuple(build_levels(desc, bound))
    orders = [1]
    for level in levels:
        orders.append(level.degree_below)
    return MonomialLayout(
        x_weight=pole_orders(desc)[0],
        primes=tuple(level.prime for level in levels),
        weights=tuple(level.pole_weight for level in levels),
        group_orders=tuple(orders),
        levels=levels,
    )


def exponent_vector(desc: ExtensionDescriptor, mono: Monomial, level: int = 0,
                    bound: Optional[int] = None) -> Tuple[int, ...]:
    """(j_1, ..., j_n): per-coordinate exponents, digits recombined by local level index"""
    layout = monomial_layout(desc, bound)
    vector = [0] * desc.n_coords
    vector[0] = mono.x_exponent
    for digit, lv in zip(mono.y_digits, layout.levels[level:]):
        vector[lv.coordinate] += digit * lv.local_below
    return tuple(vector)


class RiemannRochBasis:
    """Ordered basis of L(lam * P_inf) at one level of the chain"""

    def __init__(self, desc: ExtensionDescriptor, lam: int, level: int, monomials: Sequence[Monomial]):
        self.desc = desc
        self.lam = lam
        self.level = level
        self.monomials: Tuple[Monomial, ...] = tuple(monomials)
        self._index: Dict[Tuple[int, Tuple[int, ...]], int] = {
            mono.key: i for i, mono in enumerate(self.monomials)
        }

    def __len__(self):
        return len(self.monomials)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.monomials)

    def __getitem__(self, i: int) -> Monomial:
        return self.monomials[i]

    def index_of(self, x_exponent: int, y_digits: Tuple[int, ...]) -> int:
        return self._index[(x_exponent, tuple(y_digits))]

    def __contains__(self, key) -> bool:
        return key in self._index

    def __repr__(self):
        return f"RiemannRochBasis(lambda={self.lam}, level={self.level}, k={len(self)})"


def basis_for(desc: ExtensionDescriptor, lam: int, level: int = 0,
              bound: Optional[int] = None) -> RiemannRochBasis:
    """Monomials of pole order <= lam at ``level``, ascending pole, ties by (j_n, ..., j_1)"""
    return _basis_for(desc, lam, level, _bound(bound))


@lru_cache(maxsize=512)
def _basis_for(desc: ExtensionDescriptor, lam: int, level: int, bound: int) -> RiemannRochBasis:
    if lam < 0:
        raise ValidationError(f"pole bound must be non-negative, got {lam}")
    layout = monomial_layout(desc, bound)
    if not 0 <= level <= layout.depth:
        raise ValidationError(f"level {level} outside 0..{layout.depth}")
    unit = layout.group_orders[level]
    x_step = layout.x_weight // unit
    monomials = []
    for digits in product(*(range(p) for p in layout.primes[level:])):
        y_pole = sum(d * w for d, w in zip(digits, layout.weights[level:])) // unit
        if y_pole > lam:
            continue
        for e in range((lam - y_pole) // x_step + 1):
            monomials.append(Monomial(e, tuple(digits), e * x_step + y_pole))
    monomials.sort(key=lambda mono: (mono.pole_order,
                                     tuple(reversed(exponent_vector(desc, mono, level, bound)))))
    return RiemannRochBasis(desc, lam, level, monomials)


def level_lambdas(desc: ExtensionDescriptor, lam: int) -> List[int]:
    """lambda_0 = lam, lambda_t = floor(lambda_(t-1) / p_t)"""
    out = [lam]
    for p in monomial_layout(desc).primes:
        out.append(out[-1] // p)
    return out


def _semigroup_gap_count(generators: Sequence[int]) -> int:
    generators = sorted(set(g for g in generators if g > 0))
    if not generators or generators[0] == 1:
        return 0
    common = 0
    for g in generators:
        common = gcd(common, g)
    if common != 1:
        raise NotCoprime(f"semigroup generators {generators} share the factor {common}")
    smallest = generators[0]
    representable = [True]
    gaps, run, n = 0, 1, 0
    # stop once `smallest` consecutive integers are representable
    while run < smallest:
        n += 1
        ok = any(n >= g and representable[n - g] for g in generators)
        representable.append(ok)
        if ok:
            run += 1
        else:
            gaps += 1
            run = 0
    return gaps


def hermitian_tower_genus(kappa: int, n: int) -> int:
    """Closed form for x_(i+1)^kappa + x_(i+1) = x_i^(kappa+1), n coordinates"""
    total = sum(kappa ** (n - i + 1) * (kappa + 1) ** (i - 1) for i in range(1, n))
    return (total - (kappa + 1) ** (n - 1) + 1) // 2


def genus(desc: ExtensionDescriptor) -> int:
    if not desc.steps:
        return 0
    if desc.name == "hermitian_tower":
        return hermitian_tower_genus(desc.params["kappa"], desc.params["n"])
    if len(desc.steps) == 1:
        step = desc.steps[0]
        if step.m == 1:
            return 0
        return _semigroup_gap_count([step.m, step.d])
    raise UnsupportedBase(f"no genus formula for the nested descriptor {desc.name}")


def dimension(desc: ExtensionDescriptor, lam: int) -> int:
    """|basis_for(lam)|, checked against lam + 1 - g above 2g - 2"""
    k = len(basis_for(desc, lam))
    try:
        g = genus(desc)
    except UnsupportedBase:
        logger.debug(f"dimension of {desc.name} left unchecked: genus unknown")
        return k
    if lam >= 2 * g - 1 and k != lam + 1 - g:
        raise DimensionMismatch(f"{desc.name}: |basis({lam})| = {k}, expected {lam + 1 - g} (g = {g})")
    return k


@dataclass
class FunctionRepr:
    """Element of L(lam * P_inf) as coefficients over a fixed basis"""
    basis: RiemannRochBasis
    coeffs: List[int]

    def __post_init__(self):
        if len(self.coeffs) != len(self.basis):
            raise LengthMismatch(f"{len(self.coeffs)} coefficients for a basis of size {len(self.basis)}")

    @property
    def lam(self) -> int:
        return self.basis.lam

    @property
    def level(self) -> int:
        return self.basis.level

    def coefficient(self, x_exponent: int, y_digits: Tuple[int, ...] = ()) -> int:
        key = (x_exponent, tuple(y_digits))
        return self.coeffs[self.basis.index_of(*key)] if key in self.basis else 0

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, FunctionRepr):
            return NotImplemented
        return (self.basis.desc == other.basis.desc and self.lam == other.lam
                and self.level == other.level and list(self.coeffs) == list(other.coeffs))


def zero_function(desc: ExtensionDescriptor, lam: int, level: int = 0) -> FunctionRepr:
    basis = basis_for(desc, lam, level)
    return FunctionRepr(basis, [0] * len(basis))


def message_to_function(desc: ExtensionDescriptor, lam: int, message: Sequence[int]) -> FunctionRepr:
    basis = basis_for(desc, lam)
    if len(message) != len(basis):
        raise LengthMismatch(f"message of length {len(message)}, dimension is {len(basis)}")
    q = desc.field.q
    values = [int(v) for v in message]
    bad = [v for v in values if not 0 <= v < q]
    if bad:
        raise ValidationError(f"message entries {bad[:5]} are not elements of GF({q})")
    return FunctionRepr(basis, values)


def function_to_message(f: FunctionRepr) -> List[int]:
    if f.level != 0:
        raise ValidationError("only top-level functions carry messages")
    return list(f.coeffs)


def split_by_y(f: FunctionRepr) -> List[FunctionRepr]:
    """f = sum_k f_k * y_t^k; parts indexed over the next level with bound floor(lam / p)"""
    desc = f.basis.desc
    layout = monomial_layout(desc)
    t = f.level
    if t >= layout.depth:
        raise ValidationError("cannot split a base-level function")
    p = layout.primes[t]
    child = basis_for(desc, f.lam // p, t + 1)
    parts = [[0] * len(child) for _ in range(p)]
    for mono, c in zip(f.basis.monomials, f.coeffs):
        if c:
            parts[mono.y_digits[0]][child.index_of(mono.x_exponent, mono.y_digits[1:])] = c
    return [FunctionRepr(child, coeffs) for coeffs in parts]


def merge_by_y(parts: Sequence[FunctionRepr], parent: RiemannRochBasis) -> FunctionRepr:
    """Inverse of split_by_y, truncated to the parent basis"""
    coeffs = [0] * len(parent)
    for i, mono in enumerate(parent.monomials):
        k = mono.y_digits[0]
        coeffs[i] = parts[k].coefficient(mono.x_exponent, mono.y_digits[1:])
    return FunctionRepr(parent, coeffs)

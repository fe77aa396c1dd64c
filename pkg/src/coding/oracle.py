"""
Brute-force references for the fast encoder

Each basis monomial is evaluated at each point from the stored coordinates:
Kummer generators by direct powering, Artin-Schreier generators as products
of (t - w) over the relevant span. All arithmetic runs in galois arrays built
from the same modulus, so the oracle shares no field code with the encoder.
"""

from functools import lru_cache
from math import gcd
from typing import List, Optional, Sequence

import galois
import numpy as np

from algebra.field import FieldSpec, GaloisField, OpCounter
from coding.formats import Codeword
from geometry.rroch import FunctionRepr, basis_for, monomial_layout
from geometry.tower import KUMMER, ExtensionDescriptor, PointSet
from utils.config import get_config
from utils.exceptions import LengthMismatch, NotCoprime, PlanMismatch, RankDefect, ValidationError
from utils.logger import get_logger

logger = get_logger(__name__)

ROW_BLOCK = 256


@lru_cache(maxsize=16)
def galois_field(spec: FieldSpec):
    """galois field class over the same modulus, so integer codecs agree"""
    if spec.m == 1:
        return galois.GF(spec.p)
    irreducible = sum(c * spec.p ** i for i, c in enumerate(spec.modulus))
    return galois.GF(spec.p ** spec.m, irreducible_poly=irreducible)


def naive_poly_eval(gf: GaloisField, coeffs: Sequence[int], points: Sequence[int],
                    counter: Optional[OpCounter] = None) -> List[int]:
    """f(x) at every point; counted as Horner"""
    GF = galois_field(gf.spec)
    points = list(points)
    poly = galois.Poly(list(coeffs) or [0], field=GF, order="asc")
    if counter is not None:
        counter.mul += len(coeffs) * len(points)
        counter.add += len(coeffs) * len(points)
    if not points:
        return []
    return [int(v) for v in poly(GF(points))]


def lagrange_interpolate(gf: GaloisField, points: Sequence[int], values: Sequence[int]) -> List[int]:
    """Coefficients (constant first) of the polynomial of degree < n through the points"""
    n = len(points)
    if n != len(values):
        raise LengthMismatch(f"{n} points but {len(values)} values")
    GF = galois_field(gf.spec)
    poly = galois.lagrange_poly(GF(list(points)), GF(list(values)))
    result = [0] * n
    for i, c in enumerate(reversed(poly.coeffs)):
        result[i] = int(c)
    return result


def _span(GF, basis: Sequence[int]) -> List[int]:
    """All GF(p)-combinations of the basis"""
    elements = [0]
    for w in basis:
        w = GF(w)
        elements = [int(GF(e) + GF(a) * w) for a in range(GF.characteristic) for e in elements]
    return elements


def _factor_values(GF, desc: ExtensionDescriptor, pts: PointSet) -> list:
    """Row 0: x_1 at every point; row k: the level-k generator at every point"""
    layout = monomial_layout(desc)
    coords = GF(np.array([pt.coords for pt in pts.points], dtype=np.int64))
    rows = [coords[:, 0]]
    for lv in layout.levels:
        step = desc.steps[lv.step_index]
        column = coords[:, lv.coordinate]
        if step.kind == KUMMER:
            rows.append(column ** lv.local_below)
            continue
        acc = GF.Ones(pts.N)
        for w in _span(GF, step.w_basis[:lv.local_index]):
            acc = acc * (column - GF(w))
        rows.append(acc)
    return rows


def _power_table(GF, values, top: int):
    """table[e] = values ** e for e = 0..top"""
    table = GF.Ones((top + 1, len(values)))
    for e in range(1, top + 1):
        table[e] = table[e - 1] * values
    return table


def _exponent_matrix(desc: ExtensionDescriptor, lam: int) -> np.ndarray:
    basis = basis_for(desc, lam)
    layout = monomial_layout(desc)
    E = np.zeros((len(basis), 1 + layout.depth), dtype=np.int64)
    for i, mono in enumerate(basis):
        E[i, 0] = mono.x_exponent
        E[i, 1:] = mono.y_digits
    return E


class NaiveEvaluator:
    """Generator-matrix rows ev_P(monomial), produced in blocks"""

    def __init__(self, desc: ExtensionDescriptor, lam: int, pts: PointSet):
        if pts.desc != desc:
            raise PlanMismatch("point set belongs to another descriptor")
        limit = get_config().get_oracle_max_length()
        if pts.N > limit:
            raise ValidationError(f"naive oracle is capped at N <= {limit}, got {pts.N}")
        self.desc = desc
        self.lam = lam
        self.pts = pts
        self.GF = galois_field(desc.field_spec)
        self.logger = get_logger(__name__)
        self.E = _exponent_matrix(desc, lam)
        factors = _factor_values(self.GF, desc, pts)
        tops = self.E.max(axis=0) if self.E.size else np.zeros(len(factors), dtype=np.int64)
        self.powers = [_power_table(self.GF, f, int(top)) for f, top in zip(factors, tops)]
        # per row: one product per factor used, plus the bits of each power
        bits = np.vectorize(lambda e: int(e).bit_length())(self.E) if self.E.size else self.E
        self.row_muls = bits.sum(axis=1) + np.maximum((self.E > 0).sum(axis=1) - 1, 0)
        self.logger.debug(f"naive evaluator: k={self.k}, N={pts.N}")

    @property
    def k(self) -> int:
        return self.E.shape[0]

    def rows(self, start: int, stop: int):
        E = self.E[start:stop]
        block = self.GF.Ones((E.shape[0], self.pts.N))
        for j, table in enumerate(self.powers):
            block = block * table[E[:, j]]
        return block

    def matrix(self):
        return self.rows(0, self.k)

    def evaluation_cost(self) -> int:
        return int(self.row_muls.sum()) * self.pts.N


def naive_generator_matrix(desc: ExtensionDescriptor, lam: int, pts: PointSet,
                           check_rank: bool = True) -> np.ndarray:
    """k x N matrix whose rows are the basis monomials evaluated at the points"""
    evaluator = NaiveEvaluator(desc, lam, pts)
    G = evaluator.matrix()
    if check_rank:
        limit = get_config().get_rank_check_limit()
        k, n = G.shape
        if k * k * n > limit:
            logger.debug(f"rank check skipped for {k}x{n} matrix (limit {limit})")
        else:
            rank = int(np.linalg.matrix_rank(G))
            if rank != k:
                raise RankDefect(f"generator matrix has rank {rank}, expected {k}")
    return G.view(np.ndarray)


def naive_encode_many(desc: ExtensionDescriptor, lam: int, pts: PointSet,
                      functions: Sequence[FunctionRepr],
                      counter: Optional[OpCounter] = None) -> List[Codeword]:
    """Several functions against one pass over the generator matrix"""
    evaluator = NaiveEvaluator(desc, lam, pts)
    GF = evaluator.GF
    for f in functions:
        if f.basis.desc != desc or f.lam != lam or f.level != 0:
            raise PlanMismatch(f"function over lambda={f.lam} does not match the oracle at lambda={lam}")
    if not functions:
        return []
    F = GF(np.array([f.coeffs for f in functions], dtype=np.int64).reshape(len(functions), evaluator.k))
    out = GF.Zeros((len(functions), pts.N))
    for start in range(0, evaluator.k, ROW_BLOCK):
        stop = min(start + ROW_BLOCK, evaluator.k)
        out = out + F[:, start:stop] @ evaluator.rows(start, stop)
    if counter is not None:
        k, n = evaluator.k, pts.N
        counter.mul += len(functions) * (evaluator.evaluation_cost() + k * n)
        counter.add += len(functions) * max(k - 1, 0) * n
    return [Codeword([int(v) for v in row], desc.fingerprint, lam) for row in out]


def naive_encode(desc: ExtensionDescriptor, lam: int, pts: PointSet, f: FunctionRepr,
                 counter: Optional[OpCounter] = None) -> Codeword:
    return naive_encode_many(desc, lam, pts, [f], counter)[0]




def semigroup_gaps(m: int, d: int) -> int:
    """Integers below m*d that are not a*m + b*d with a, b >= 0"""
    if m < 1 or d < 1:
        raise ValidationError(f"semigroup generators must be positive, got ({m}, {d})")
    if gcd(m, d) != 1:
        raise NotCoprime(f"gcd({m}, {d}) = {gcd(m, d)}")
    bound = m * d
    reachable = bytearray(bound)
    for a in range(0, bound, m):
        for value in range(a, bound, d):
            reachable[value] = 1
    return bound - sum(reachable)


def numerical_semigroup_gaps(generators: Sequence[int]) -> int:
    """Gap count of the semigroup spanned by several generators (sieve with a growing bound)"""
    generators = sorted(set(int(g) for g in generators))
    if not generators or generators[0] < 1:
        raise ValidationError(f"semigroup generators must be positive, got {generators}")
    common = 0
    for g in generators:
        common = gcd(common, g)
    if common != 1:
        raise NotCoprime(f"generators {generators} share the factor {common}")
    smallest = generators[0]
    bound = smallest * generators[-1]
    while True:
        reachable = bytearray(bound)
        reachable[0] = 1
        for n in range(1, bound):
            reachable[n] = any(n >= g and reachable[n - g] for g in generators)
        if all(reachable[bound - smallest:]):
            return bound - sum(reachable)
        bound *= 2

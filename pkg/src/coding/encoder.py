"""
Fast multipoint evaluation of L(lambda * P_inf) along the level chain

Encoding splits f by the level generators down to the rational base,
evaluates the base polynomials with one FFT each, then climbs back with a
Horner recombination per point. Unencoding runs the same walk in reverse
with the per-fiber inverse Vandermonde matrices.
"""

import hashlib
import threading
from math import gcd
from typing import Dict, List, Optional, Sequence

from algebra.base_mpe import EvalDomain, base_interp, base_mpe, full_field_domain, multiplicative_domain
from algebra.field import GaloisField, OpCounter, factor_smooth, multiplicative_order
from algebra.linalg import invert_matrix
from coding.formats import Codeword
from geometry.rroch import (
    FunctionRepr, RiemannRochBasis, basis_for, dimension, function_to_message, level_lambdas,
    merge_by_y, message_to_function, split_by_y,
)
from geometry.tower import ExtensionDescriptor, LevelData, PointSet, build_levels, level_y_values
from utils.config import get_config
from utils.exceptions import LengthMismatch, NotInCode, NotSmooth, PlanMismatch, SingularFiber, ValidationError
from utils.logger import get_logger

logger = get_logger(__name__)

PHASES = ("plan", "encode.base", "encode.recombine", "unencode.fiber", "unencode.base")


def select_base_domain(gf: GaloisField, base_places: Sequence[int],
                       bound: Optional[int] = None) -> EvalDomain:
    """Smallest multiplicative subgroup holding the places, else the whole field"""
    if bound is None:
        bound = get_config().get_smooth_bound()
    if base_places and all(base_places) and gf.q > 2:
        try:
            factor_smooth(gf.q - 1, bound)
            order = 1
            for alpha in base_places:
                o = multiplicative_order(gf, alpha)
                order = order * o // gcd(order, o)
            return multiplicative_domain(gf, order, bound).restrict(base_places)
        except NotSmooth:
            logger.debug(f"GF({gf.q}): q - 1 not {bound}-smooth, using the additive domain")
    return full_field_domain(gf).restrict(base_places)


class EncodePlan:
    """Tables for one (descriptor, lambda, point set) triple"""

    def __init__(self, desc: ExtensionDescriptor, lam: int, pts: PointSet):
        self.logger = get_logger(__name__)
        if pts.desc != desc:
            raise PlanMismatch("point set belongs to another descriptor")
        if lam < 0 or lam >= pts.N:
            raise ValidationError(f"lambda must lie in [0, N) = [0, {pts.N}), got {lam}")
        self.desc = desc
        self.lam = lam
        self.pts = pts
        self.field = desc.field
        self.k = dimension(desc, lam)
        if self.k > pts.N:
            raise ValidationError(f"dimension {self.k} exceeds length {pts.N}")

        self._lock = threading.Lock()
        self._ledger: Dict[str, OpCounter] = {phase: OpCounter() for phase in PHASES}
        counter = OpCounter()
        ops = self.field.ops(counter)

        self.levels: List[LevelData] = build_levels(desc)
        self.primes = [level.prime for level in self.levels]
        self.lambdas = level_lambdas(desc, lam)
        self.bases: List[RiemannRochBasis] = [basis_for(desc, lt, t) for t, lt in enumerate(self.lambdas)]
        self.y_tables = level_y_values(pts, self.levels, ops)
        self.fiber_inverses = [self._fiber_inverses(ops, t) for t in range(len(self.levels))]
        self.base_domain = select_base_domain(self.field, pts.base_places)
        self.fingerprint = self._fingerprint()
        self._record("plan", counter)
        self.logger.debug(f"plan {self.fingerprint}: N={pts.N}, k={self.k}, levels={self.primes}, "
                          f"base={self.base_domain.kind}({self.base_domain.size})")

    def _fiber_inverses(self, ops, t: int) -> List[List[List[int]]]:
        """V[a][k] = y^k over each fiber of level t+1, inverted"""
        p = self.primes[t]
        table = self.y_tables[t]
        inverses = []
        for start in range(0, len(table), p):
            ys = table[start:start + p]
            vandermonde = [[ops.pow(y, k) for k in range(p)] for y in ys]
            inverse = invert_matrix(ops, vandermonde)
            if inverse is None:
                raise SingularFiber(f"level {t + 1}: fiber at {start // p} has repeated y-values")
            inverses.append(inverse)
        return inverses

    def _fingerprint(self) -> str:
        places = ",".join(str(a) for a in self.pts.base_places)
        text = f"{self.desc.fingerprint}:{self.lam}:{places}"
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    @property
    def N(self) -> int:
        return self.pts.N

    def _record(self, phase: str, counter: OpCounter):
        with self._lock:
            self._ledger[phase].merge(counter)

    def metrics(self) -> Dict[str, Dict[str, int]]:
        with self._lock:
            report = {phase: c.as_dict() for phase, c in self._ledger.items()}
        encode = OpCounter()
        for phase in ("encode.base", "encode.recombine"):
            encode.merge(self._ledger[phase])
        report["encode"] = encode.as_dict()
        return report

    def reset_metrics(self):
        with self._lock:
            for phase in PHASES:
                if phase != "plan":
                    self._ledger[phase].reset()


def plan(desc: ExtensionDescriptor, lam: int, pts: PointSet) -> EncodePlan:
    return EncodePlan(desc, lam, pts)


def metrics(p: EncodePlan) -> Dict[str, Dict[str, int]]:
    return p.metrics()


def _base_coeffs(g: FunctionRepr) -> List[int]:
    """Level-R function as a polynomial in x_1"""
    coeffs = [0] * (g.lam + 1)
    for mono, c in zip(g.basis.monomials, g.coeffs):
        coeffs[mono.x_exponent] = c
    return coeffs


def _check_function(p: EncodePlan, f: FunctionRepr):
    if f.basis is not p.bases[0]:
        if f.basis.desc != p.desc or f.lam != p.lam or f.level != 0:
            raise PlanMismatch(f"function over lambda={f.lam} does not match plan lambda={p.lam}")


def fmpe_encode(p: EncodePlan, f: FunctionRepr) -> Codeword:
    """Codeword[t] = f(P_t) for every point of the plan"""
    _check_function(p, f)
    base_counter, recombine_counter = OpCounter(), OpCounter()
    base_ops = p.field.ops(base_counter)
    ops = p.field.ops(recombine_counter)

    # split down to the rational base, breadth first
    functions = [f]
    for prime in p.primes:
        siblings = len(functions)
        children: List[Optional[FunctionRepr]] = [None] * (siblings * prime)
        for h, g in enumerate(functions):
            for k, part in enumerate(split_by_y(g)):
                children[h + siblings * k] = part
        functions = children

    values = [base_mpe(base_ops, _base_coeffs(g), p.base_domain) for g in functions]

    # f(P) = sum_k f_k(P) y(P)^k, Horner in y
    for t in range(len(p.primes) - 1, -1, -1):
        prime = p.primes[t]
        table = p.y_tables[t]
        siblings = len(values) // prime
        climbed = []
        for h in range(siblings):
            parts = [values[h + siblings * k] for k in range(prime)]
            out = [0] * len(table)
            for i, y in enumerate(table):
                fiber = i // prime
                acc = parts[-1][fiber]
                for k in range(prime - 2, -1, -1):
                    acc = ops.add(ops.mul(acc, y), parts[k][fiber])
                out[i] = acc
            climbed.append(out)
        values = climbed

    p._record("encode.base", base_counter)
    p._record("encode.recombine", recombine_counter)
    return Codeword(values[0], p.desc.fingerprint, p.lam)


def fmpe_unencode(p: EncodePlan, c: Codeword, verify: bool = False) -> FunctionRepr:
    """The unique f in L(lambda * P_inf) with the given evaluations"""
    if len(c.values) != p.N:
        raise LengthMismatch(f"codeword of length {len(c.values)}, plan has N = {p.N}")
    if c.fingerprint and c.fingerprint != p.desc.fingerprint:
        raise PlanMismatch(f"codeword written for descriptor {c.fingerprint}, plan has {p.desc.fingerprint}")
    if c.lam >= 0 and c.lam != p.lam:
        raise PlanMismatch(f"codeword written for lambda={c.lam}, plan has lambda={p.lam}")
    fiber_counter, base_counter = OpCounter(), OpCounter()
    ops = p.field.ops(fiber_counter)
    base_ops = p.field.ops(base_counter)

    values = [list(c.values)]
    for t, prime in enumerate(p.primes):
        siblings = len(values)
        children: List[Optional[List[int]]] = [None] * (siblings * prime)
        inverses = p.fiber_inverses[t]
        for h, vals in enumerate(values):
            parts = [[0] * (len(vals) // prime) for _ in range(prime)]
            for fiber, M in enumerate(inverses):
                local = vals[fiber * prime:(fiber + 1) * prime]
                for k in range(prime):
                    acc = 0
                    for a in range(prime):
                        acc = ops.add(acc, ops.mul(M[k][a], local[a]))
                    parts[k][fiber] = acc
            for k, part in enumerate(parts):
                children[h + siblings * k] = part
        values = children

    base_basis = p.bases[-1]
    functions = []
    for vals in values:
        poly = base_interp(base_ops, vals, p.base_domain)
        coeffs = [poly[mono.x_exponent] if mono.x_exponent < len(poly) else 0 for mono in base_basis]
        functions.append(FunctionRepr(base_basis, coeffs))

    for t in range(len(p.primes) - 1, -1, -1):
        prime = p.primes[t]
        siblings = len(functions) // prime
        functions = [merge_by_y([functions[h + siblings * k] for k in range(prime)], p.bases[t])
                     for h in range(siblings)]

    p._record("unencode.fiber", fiber_counter)
    p._record("unencode.base", base_counter)
    f = functions[0]
    if verify and fmpe_encode(p, f).values != list(c.values):
        raise NotInCode("word is not a codeword of C(P, lambda * P_inf)")
    return f


def encode_message(p: EncodePlan, message: Sequence[int]) -> Codeword:
    return fmpe_encode(p, message_to_function(p.desc, p.lam, message))


def decode_message(p: EncodePlan, c: Codeword, verify: bool = False) -> List[int]:
    return function_to_message(fmpe_unencode(p, c, verify))

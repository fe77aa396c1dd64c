"""
Univariate multipoint evaluation and interpolation on FFT-friendly domains

Multiplicative domains are subgroups <w> of smooth order n, split by the
smallest prime r first: f(x) = sum_k x^k f_k(x^r).
Additive domains are affine GF(p)-subspaces shift + span(w_1..w_t), split by
the last basis vector: f(x) = sum_k x^k f_k(x^p - c x) with c = w_t^(p-1).
"""

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

from algebra.field import FieldOps, GaloisField, factor_smooth, root_of_unity
from algebra.linalg import rref_mod_p
from algebra.poly import newton_interpolate, trim
from utils.config import get_config
from utils.exceptions import DegreeTooLarge, KernelDefect, ValidationError
from utils.logger import get_logger

logger = get_logger(__name__)

MULTIPLICATIVE = "multiplicative"
ADDITIVE = "additive"


@dataclass(frozen=True)
class EvalDomain:
    """FFT domain with an optional restriction to a subset of its points

    restriction_mask lists domain indices in output order; None keeps every point.
    """
    kind: str
    points: Tuple[int, ...]
    generator: int = 1
    radices: Tuple[int, ...] = ()
    basis: Tuple[int, ...] = ()
    shift: int = 0
    restriction_mask: Optional[Tuple[int, ...]] = None

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def targets(self) -> Tuple[int, ...]:
        """Points actually reported by base_mpe"""
        if self.restriction_mask is None:
            return self.points
        return tuple(self.points[i] for i in self.restriction_mask)

    @property
    def covers_all(self) -> bool:
        """Mask (if any) is a permutation of the whole domain"""
        mask = self.restriction_mask
        return mask is None or (len(mask) == self.size and set(mask) == set(range(self.size)))

    def restrict(self, elements: Sequence[int]) -> "EvalDomain":
        """Same domain reporting only ``elements``, in the given order"""
        index = {pt: i for i, pt in enumerate(self.points)}
        missing = [e for e in elements if e not in index]
        if missing:
            raise ValidationError(f"elements {missing[:5]} lie outside the {self.kind} domain")
        return replace(self, restriction_mask=tuple(index[e] for e in elements))


def multiplicative_domain(field: GaloisField, n: int, bound: Optional[int] = None) -> EvalDomain:
    """Subgroup of order n in GF(q)^*, points w^0, w^1, ..."""
    if bound is None:
        bound = get_config().get_smooth_bound()
    radices = tuple(factor_smooth(n, bound))
    omega = root_of_unity(field, n)
    points, value = [], 1
    for _ in range(n):
        points.append(value)
        value = field.mul(value, omega)
    return EvalDomain(MULTIPLICATIVE, tuple(points), generator=omega, radices=radices)


def _subspace_points(field: GaloisField, basis: Sequence[int], shift: int) -> List[int]:
    """shift + sum j_i w_(i+1) at index sum j_i p^i"""
    points = [shift]
    for w in basis:
        points = [field.add(x, field.scalar_mul(d, w)) for d in range(field.p) for x in points]
    return points


def additive_domain(field: GaloisField, basis: Sequence[int], shift: int = 0) -> EvalDomain:
    """Affine subspace shift + span(basis)"""
    basis = tuple(basis)
    if basis:
        _, pivots = rref_mod_p([field.coords(w) for w in basis], field.p)
        if len(pivots) != len(basis):
            raise KernelDefect(f"additive basis {list(basis)} is GF({field.p})-dependent")
    return EvalDomain(ADDITIVE, tuple(_subspace_points(field, basis, shift)), basis=basis, shift=shift)


def full_field_domain(field: GaloisField) -> EvalDomain:
    """GF(q) itself as an additive domain; point j has codec value j"""
    return additive_domain(field, [field.p ** i for i in range(field.m)])


def _padded(coeffs: Sequence[int], n: int) -> List[int]:
    coeffs = trim(coeffs)
    if len(coeffs) > n:
        raise DegreeTooLarge(f"degree {len(coeffs) - 1} does not fit a domain of size {n}")
    return coeffs + [0] * (n - len(coeffs))


# multiplicative

def _mult_eval(ops: FieldOps, coeffs: List[int], omega: int, radices: Sequence[int]) -> List[int]:
    n = len(coeffs)
    if n == 1:
        return [coeffs[0]]
    r = radices[0]
    n1 = n // r
    omega_r = ops.pow(omega, r)
    subs = [_mult_eval(ops, coeffs[k::r], omega_r, radices[1:]) for k in range(r)]
    out = [0] * n
    w = 1
    for j in range(n):
        jj = j % n1
        acc = subs[r - 1][jj]
        for k in range(r - 2, -1, -1):
            acc = ops.add(ops.mul(acc, w), subs[k][jj])
        out[j] = acc
        w = ops.mul(w, omega)
    return out


def _mult_interp(ops: FieldOps, values: List[int], omega: int, radices: Sequence[int]) -> List[int]:
    n = len(values)
    if n == 1:
        return [values[0]]
    r = radices[0]
    n1 = n // r
    zeta_inv = ops.inv(ops.pow(omega, n1))
    omega_inv = ops.inv(omega)
    r_inv = ops.inv(r % ops.field.p)
    zeta_pows = [ops.pow(zeta_inv, e) for e in range(r)]

    parts = [[0] * n1 for _ in range(r)]
    w_inv = 1
    for jj in range(n1):
        fiber = [values[jj + n1 * h] for h in range(r)]
        scale = r_inv
        for k in range(r):
            acc = 0
            for h in range(r):
                acc = ops.add(acc, ops.mul(zeta_pows[(h * k) % r], fiber[h]))
            parts[k][jj] = ops.mul(acc, scale)
            scale = ops.mul(scale, w_inv)
        w_inv = ops.mul(w_inv, omega_inv)

    omega_r = ops.pow(omega, r)
    coeffs = [0] * n
    for k in range(r):
        coeffs[k::r] = _mult_interp(ops, parts[k], omega_r, radices[1:])
    return coeffs


def mult_fft_eval(ops: FieldOps, coeffs: Sequence[int], domain: EvalDomain) -> List[int]:
    """f(w^j) for j = 0..n-1"""
    if domain.kind != MULTIPLICATIVE:
        raise ValidationError("mult_fft_eval needs a multiplicative domain")
    return _mult_eval(ops, _padded(coeffs, domain.size), domain.generator, domain.radices)


def mult_fft_interp(ops: FieldOps, values: Sequence[int], domain: EvalDomain) -> List[int]:
    """Coefficients (length n) of the polynomial taking ``values`` on the domain"""
    if domain.kind != MULTIPLICATIVE:
        raise ValidationError("mult_fft_interp needs a multiplicative domain")
    if len(values) != domain.size:
        raise ValidationError(f"expected {domain.size} values, got {len(values)}")
    return _mult_interp(ops, list(values), domain.generator, domain.radices)


# additive

def _divide_sparse(ops: FieldOps, f: List[int], big: int, small: int, c: int) -> Tuple[List[int], List[int]]:
    """Divide by x^big - c x^small"""
    f = list(f)
    quotient = [0] * max(len(f) - big, 0)
    for deg in range(len(f) - 1, big - 1, -1):
        a = f[deg]
        if a:
            quotient[deg - big] = a
            f[deg] = 0
            idx = deg - big + small
            f[idx] = ops.add(f[idx], ops.mul(c, a))
    return quotient, f[:big] + [0] * max(big - len(f), 0)


def _multiply_sparse(ops: FieldOps, f: List[int], big: int, small: int, c: int) -> List[int]:
    """Multiply by x^big - c x^small"""
    out = [0] * (len(f) + big)
    for i, a in enumerate(f):
        if a:
            out[i + big] = ops.add(out[i + big], a)
            out[i + small] = ops.sub(out[i + small], ops.mul(c, a))
    return out


def _taylor(ops: FieldOps, f: List[int], t: int, c: int) -> List[List[int]]:
    """g_i (each of length p) with f = sum_i g_i(x) phi(x)^i, phi = x^p - c x"""
    p = ops.field.p
    if t == 1:
        return [list(f)]
    big, small = p ** (t - 1), p ** (t - 2)
    c_small = ops.pow(c, small)
    digits, rest = [], list(f)
    for _ in range(p - 1):
        rest, remainder = _divide_sparse(ops, rest, big, small, c_small)
        digits.append(remainder)
    digits.append(rest + [0] * (big - len(rest)))
    out: List[List[int]] = []
    for digit in digits:
        out.extend(_taylor(ops, digit, t - 1, c))
    return out


def _untaylor(ops: FieldOps, gs: List[List[int]], t: int, c: int) -> List[int]:
    p = ops.field.p
    if t == 1:
        return list(gs[0])
    big, small = p ** (t - 1), p ** (t - 2)
    c_small = ops.pow(c, small)
    chunk = p ** (t - 2)
    digits = [_untaylor(ops, gs[h * chunk:(h + 1) * chunk], t - 1, c) for h in range(p)]
    f = digits[p - 1]
    for h in range(p - 2, -1, -1):
        f = _multiply_sparse(ops, f, big, small, c_small)
        for i, b in enumerate(digits[h]):
            if b:
                f[i] = ops.add(f[i], b)
    return (f + [0] * (p ** t))[:p ** t]


def _phi(ops: FieldOps, v: int, c: int) -> int:
    return ops.sub(ops.pow(v, ops.field.p), ops.mul(c, v))


def _add_eval(ops: FieldOps, coeffs: List[int], basis: Sequence[int], shift: int) -> List[int]:
    t = len(basis)
    if t == 0:
        return [coeffs[0]]
    p = ops.field.p
    n1 = p ** (t - 1)
    c = ops.pow(basis[-1], p - 1)
    gs = _taylor(ops, coeffs, t, c)
    sub_basis = [_phi(ops, w, c) for w in basis[:-1]]
    sub_shift = _phi(ops, shift, c)
    subs = [_add_eval(ops, [g[k] for g in gs], sub_basis, sub_shift) for k in range(p)]
    points = _subspace_points(ops.field, basis, shift)
    out = [0] * (n1 * p)
    for j, point in enumerate(points):
        jj = j % n1
        acc = subs[p - 1][jj]
        for k in range(p - 2, -1, -1):
            acc = ops.add(ops.mul(acc, point), subs[k][jj])
        out[j] = acc
    return out


def _add_interp(ops: FieldOps, values: List[int], basis: Sequence[int], shift: int) -> List[int]:
    t = len(basis)
    if t == 0:
        return [values[0]]
    p = ops.field.p
    n1 = p ** (t - 1)
    c = ops.pow(basis[-1], p - 1)
    points = _subspace_points(ops.field, basis, shift)
    parts = [[0] * n1 for _ in range(p)]
    for jj in range(n1):
        nodes = [points[jj + n1 * h] for h in range(p)]
        fiber = [values[jj + n1 * h] for h in range(p)]
        for k, coefficient in enumerate(newton_interpolate(ops, nodes, fiber)):
            parts[k][jj] = coefficient
    sub_basis = [_phi(ops, w, c) for w in basis[:-1]]
    sub_shift = _phi(ops, shift, c)
    subs = [_add_interp(ops, parts[k], sub_basis, sub_shift) for k in range(p)]
    gs = [[subs[k][i] for k in range(p)] for i in range(n1)]
    return _untaylor(ops, gs, t, c)


def add_fft_eval(ops: FieldOps, coeffs: Sequence[int], domain: EvalDomain) -> List[int]:
    """f at every point of the affine subspace, canonical mixed-radix order"""
    if domain.kind != ADDITIVE:
        raise ValidationError("add_fft_eval needs an additive domain")
    return _add_eval(ops, _padded(coeffs, domain.size), domain.basis, domain.shift)


def add_fft_interp(ops: FieldOps, values: Sequence[int], domain: EvalDomain) -> List[int]:
    if domain.kind != ADDITIVE:
        raise ValidationError("add_fft_interp needs an additive domain")
    if len(values) != domain.size:
        raise ValidationError(f"expected {domain.size} values, got {len(values)}")
    return _add_interp(ops, list(values), domain.basis, domain.shift)


def fft_eval(ops: FieldOps, coeffs: Sequence[int], domain: EvalDomain) -> List[int]:
    if domain.kind == MULTIPLICATIVE:
        return mult_fft_eval(ops, coeffs, domain)
    return add_fft_eval(ops, coeffs, domain)


def fft_interp(ops: FieldOps, values: Sequence[int], domain: EvalDomain) -> List[int]:
    if domain.kind == MULTIPLICATIVE:
        return mult_fft_interp(ops, values, domain)
    return add_fft_interp(ops, values, domain)


def base_mpe(ops: FieldOps, coeffs: Sequence[int], domain: EvalDomain) -> List[int]:
    """Evaluate on the full domain, then keep the masked positions"""
    full = fft_eval(ops, coeffs, domain)
    if domain.restriction_mask is None:
        return full
    return [full[i] for i in domain.restriction_mask]


def base_interp(ops: FieldOps, values: Sequence[int], domain: EvalDomain) -> List[int]:
    """Inverse of base_mpe for polynomials of degree below the number of targets

    Masks covering the whole domain go through the inverse FFT; proper
    subsets use Newton interpolation on the kept points.
    """
    mask = domain.restriction_mask
    if len(values) != len(domain.targets):
        raise ValidationError(f"expected {len(domain.targets)} values, got {len(values)}")
    if mask is None:
        return fft_interp(ops, values, domain)
    if domain.covers_all:
        full = [0] * domain.size
        for value, i in zip(values, mask):
            full[i] = value
        return fft_interp(ops, full, domain)
    if not values:
        return []
    return newton_interpolate(ops, list(domain.targets), list(values))

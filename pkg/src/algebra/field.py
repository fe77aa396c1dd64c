"""
Exact arithmetic in GF(p^m) over a polynomial basis
Elements are carried as their integer codec value sum(coords[i] * p**i)
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Poly, isprime, symbols
from sympy.ntheory import factorint
from sympy.ntheory.modular import crt

from algebra.linalg import nullspace_mod_p, solve_mod_p
from utils.config import get_config
from utils.exceptions import (
    DivisionByZero, InvalidModulus, InvalidSubfield, KernelDefect, NoSuchRoot,
    NotAnMthPower, NotSmooth, ValidationError, ZeroInput,
)
from utils.logger import get_logger

logger = get_logger(__name__)

MAX_ORDER = 1 << 32
_X = symbols("x")


def is_irreducible(p: int, modulus: Sequence[int]) -> bool:
    """Irreducibility of a polynomial over GF(p), constant term first"""
    if len(modulus) < 2:
        return False
    return Poly(list(reversed(list(modulus))), _X, modulus=p).is_irreducible


def find_irreducible(p: int, m: int) -> List[int]:
    """Smallest monic irreducible of degree m, ordered by the codec of its tail"""
    for tail in range(p ** m):
        coeffs = [(tail // p ** i) % p for i in range(m)] + [1]
        if coeffs[0] != 0 and is_irreducible(p, coeffs):
            return coeffs
    raise InvalidModulus(f"no irreducible polynomial of degree {m} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^m) given by a monic irreducible modulus"""
    p: int
    m: int
    modulus: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "modulus", tuple(int(c) for c in self.modulus))
        if not isprime(self.p):
            raise InvalidModulus(f"characteristic {self.p} is not prime")
        if self.m < 1:
            raise InvalidModulus(f"extension degree must be positive, got {self.m}")
        if self.p ** self.m > MAX_ORDER:
            raise InvalidModulus(f"field order {self.p}^{self.m} exceeds 2^32")
        if len(self.modulus) != self.m + 1 or self.modulus[-1] != 1:
            raise InvalidModulus(f"modulus must be monic of degree {self.m}: {list(self.modulus)}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise InvalidModulus(f"modulus coefficients must lie in [0, {self.p})")
        if self.m > 1 and not is_irreducible(self.p, self.modulus):
            raise InvalidModulus(f"modulus {list(self.modulus)} is reducible over GF({self.p})")

    @property
    def q(self) -> int:
        return self.p ** self.m

    @classmethod
    def for_order(cls, q: int) -> "FieldSpec":
        """Shipped (or smallest irreducible) modulus for GF(q)"""
        factors = factorint(q) if q > 1 else {}
        if len(factors) != 1:
            raise InvalidModulus(f"{q} is not a prime power")
        (p, m), = factors.items()
        modulus = get_config().get_default_modulus(q)
        if modulus is None:
            modulus = [0, 1] if m == 1 else find_irreducible(p, m)
        return cls(int(p), int(m), tuple(modulus))

    def to_json(self) -> Dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: Dict) -> "FieldSpec":
        try:
            return cls(int(data["p"]), int(data["m"]), tuple(data["modulus"]))
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"malformed field spec {data!r}: {e}")


@dataclass
class OpCounter:
    """Field operation accumulator; subtraction and negation count as additions"""
    mul: int = 0
    add: int = 0
    inv: int = 0

    def reset(self):
        self.mul = self.add = self.inv = 0

    def merge(self, other: "OpCounter"):
        self.mul += other.mul
        self.add += other.add
        self.inv += other.inv

    def as_dict(self) -> Dict[str, int]:
        return {"mul": self.mul, "add": self.add, "inv": self.inv}


class GaloisField:
    """GF(p^m) with log/exp tables for orders up to the configured table limit"""

    def __init__(self, spec: FieldSpec, table_limit: Optional[int] = None):
        self.spec = spec
        self.p = spec.p
        self.m = spec.m
        self.q = spec.q
        self.logger = get_logger(__name__)
        self._modulus_int = sum(c << i for i, c in enumerate(spec.modulus)) if self.p == 2 else None
        self._exp: Optional[List[int]] = None
        self._log: Optional[List[int]] = None
        self._add_table: Optional[List[List[int]]] = None
        self.generator = self._find_generator()

        if table_limit is None:
            table_limit = get_config().get_table_limit()
        if self.q <= table_limit:
            self._build_tables()
        if self.p != 2 and self.q <= 256:
            self._add_table = [[self._add_digits(a, b) for b in range(self.q)] for a in range(self.q)]
        self.logger.debug(f"GF({self.p}^{self.m}) ready, generator {self.generator}, "
                          f"tables={'yes' if self._exp else 'no'}")

    # representation

    def coords(self, a: int) -> List[int]:
        """Polynomial-basis coordinates, constant term first"""
        out = []
        for _ in range(self.m):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_coords(self, coords: Sequence[int]) -> int:
        value = 0
        for c in reversed(coords):
            value = value * self.p + (c % self.p)
        return value

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def ops(self, counter: Optional[OpCounter] = None) -> "FieldOps":
        """Arithmetic context that counts into ``counter``"""
        return FieldOps(self, counter)

    @property
    def has_tables(self) -> bool:
        return self._exp is not None

    # raw (uncounted) arithmetic

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        result, place = 0, 1
        while a or b:
            result += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return result

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p = self.p
        result, place = 0, 1
        while a:
            result += ((p - a % p) % p) * place
            a //= p
            place *= p
        return result

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self.add(a, self.neg(b))

    def _mulmod(self, a: int, b: int) -> int:
        """Schoolbook product reduced by the modulus"""
        if self.p == 2:
            result = 0
            top = 1 << self.m
            while b:
                if b & 1:
                    result ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= self._modulus_int
            return result
        p, m = self.p, self.m
        x, y = self.coords(a), self.coords(b)
        prod = [0] * (2 * m - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] = (prod[i + j] + xi * yj) % p
        modulus = self.spec.modulus
        for d in range(2 * m - 2, m - 1, -1):
            c = prod[d]
            if c:
                for i in range(m + 1):
                    prod[d - m + i] = (prod[d - m + i] - c * modulus[i]) % p
        return self.from_coords(prod[:m])

    def _pow_raw(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mulmod(result, a)
            a = self._mulmod(a, a)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        order = self.q - 1
        primes = list(factorint(order))
        for candidate in range(2, self.q):
            if all(self._pow_raw(candidate, order // ell) != 1 for ell in primes):
                return candidate
        raise InvalidModulus(f"no generator found for GF({self.q})")

    def _build_tables(self):
        n = self.q - 1
        exp = [0] * (2 * n)
        log = [0] * self.q
        value = 1
        for i in range(n):
            exp[i] = value
            log[value] = i
            value = self._mulmod(value, self.generator)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp, self._log = exp, log

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mulmod(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inversion of zero")
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._pow_raw(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._pow_raw(a, e % (self.q - 1))

    def scalar_mul(self, k: int, a: int) -> int:
        """Multiply by the integer k read in the prime field"""
        return self.mul(k % self.p, a)

    def log(self, a: int) -> int:
        """Discrete log to the primitive generator"""
        if self._log is not None:
            if a == 0:
                raise ZeroInput("log of zero")
            return self._log[a]
        return discrete_log(self, a)

    def __repr__(self):
        return f"GaloisField(p={self.p}, m={self.m}, modulus={list(self.spec.modulus)})"


class FieldOps:
    """Counting arithmetic context over one field"""

    __slots__ = ("field", "counter")

    def __init__(self, field: GaloisField, counter: Optional[OpCounter] = None):
        self.field = field
        self.counter = counter if counter is not None else OpCounter()

    def add(self, a: int, b: int) -> int:
        self.counter.add += 1
        return self.field.add(a, b)

    def sub(self, a: int, b: int) -> int:
        self.counter.add += 1
        return self.field.sub(a, b)

    def neg(self, a: int) -> int:
        self.counter.add += 1
        return self.field.neg(a)

    def mul(self, a: int, b: int) -> int:
        self.counter.mul += 1
        return self.field.mul(a, b)

    def scalar_mul(self, k: int, a: int) -> int:
        self.counter.mul += 1
        return self.field.scalar_mul(k, a)

    def inv(self, a: int) -> int:
        self.counter.inv += 1
        return self.field.inv(a)

    def pow(self, a: int, e: int) -> int:
        # one multiplication per exponent bit
        self.counter.mul += max(abs(e).bit_length(), 1)
        return self.field.pow(a, e)


class FieldElement:
    """Element of GF(p^m) with operator overloads (uncounted)"""

    __slots__ = ("gf", "value")

    def __init__(self, gf: GaloisField, value: int):
        if isinstance(value, FieldElement):
            value = value.value
        if not 0 <= value < gf.q:
            raise ValidationError(f"{value} is not an element of GF({gf.q})")
        self.gf = gf
        self.value = value

    def _wrap(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.gf.spec != self.gf.spec:
                raise ValidationError("elements of different fields")
            return other.value
        return int(other)

    @property
    def coords(self) -> List[int]:
        return self.gf.coords(self.value)

    def __add__(self, other):
        return FieldElement(self.gf, self.gf.add(self.value, self._wrap(other)))

    def __sub__(self, other):
        return FieldElement(self.gf, self.gf.sub(self.value, self._wrap(other)))

    def __neg__(self):
        return FieldElement(self.gf, self.gf.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.gf, self.gf.mul(self.value, self._wrap(other)))

    def __truediv__(self, other):
        return FieldElement(self.gf, self.gf.mul(self.value, self.gf.inv(self._wrap(other))))

    def __pow__(self, e: int):
        return FieldElement(self.gf, self.gf.pow(self.value, e))

    def inv(self) -> "FieldElement":
        return FieldElement(self.gf, self.gf.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.gf.spec == other.gf.spec and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.gf.spec, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF({self.gf.q})[{self.value}]"


FieldLike = Union[FieldSpec, GaloisField]


@lru_cache(maxsize=None)
def get_field(spec: FieldSpec) -> GaloisField:
    """Shared field instance per spec"""
    return GaloisField(spec)


def field_of_order(q: int) -> GaloisField:
    return get_field(FieldSpec.for_order(q))


def _as_field(field: FieldLike) -> GaloisField:
    return get_field(field) if isinstance(field, FieldSpec) else field


def primitive_generator(field: FieldLike) -> int:
    """Element of multiplicative order q - 1"""
    return _as_field(field).generator


def root_of_unity(field: FieldLike, n: int) -> int:
    """Element of multiplicative order exactly n"""
    gf = _as_field(field)
    if n < 1 or (gf.q - 1) % n:
        raise NoSuchRoot(f"{n} does not divide {gf.q - 1}")
    return gf.pow(gf.generator, (gf.q - 1) // n)


def multiplicative_order(field: FieldLike, a: int) -> int:
    gf = _as_field(field)
    if a == 0:
        raise ZeroInput("zero has no multiplicative order")
    order = gf.q - 1
    for ell, e in factorint(order).items():
        for _ in range(e):
            if gf.pow(a, order // ell) == 1:
                order //= ell
            else:
                break
    return order


def trace_to(field: FieldLike, sub_degree: int, a: int) -> int:
    """Trace from GF(p^m) down to GF(p^sub_degree)"""
    gf = _as_field(field)
    if sub_degree < 1 or gf.m % sub_degree:
        raise InvalidSubfield(f"GF({gf.p}^{sub_degree}) is not a subfield of GF({gf.q})")
    kappa = gf.p ** sub_degree
    total, term = 0, a
    for _ in range(gf.m // sub_degree):
        total = gf.add(total, term)
        term = gf.pow(term, kappa)
    return total


def _bsgs(gf: GaloisField, g: int, h: int, n: int) -> Optional[int]:
    """x in [0, n) with g^x = h"""
    if h == 1:
        return 0
    step = isqrt(n)
    if step * step < n:
        step += 1
    table = {}
    value = 1
    for j in range(step):
        table.setdefault(value, j)
        value = gf.mul(value, g)
    giant = gf.inv(gf.pow(g, step))
    gamma = h
    for i in range(step + 1):
        if gamma in table:
            return (i * step + table[gamma]) % n
        gamma = gf.mul(gamma, giant)
    return None


def _dlog_prime_power(gf: GaloisField, g: int, h: int, ell: int, e: int) -> int:
    """Solve g^x = h where g has order ell^e"""
    pe = ell ** e
    gamma = gf.pow(g, pe // ell)
    g_inv = gf.inv(g)
    x = 0
    for k in range(e):
        h_k = gf.pow(gf.mul(gf.pow(g_inv, x), h), pe // ell ** (k + 1))
        d_k = 0 if h_k == 1 else _bsgs(gf, gamma, h_k, ell)
        if d_k is None:
            raise NotAnMthPower("element outside the generated subgroup")
        x += d_k * ell ** k
    return x % pe


def discrete_log(field: FieldLike, h: int) -> int:
    """Pohlig-Hellman discrete log to the primitive generator"""
    gf = _as_field(field)
    if h == 0:
        raise ZeroInput("discrete log of zero")
    n = gf.q - 1
    if n == 1:
        return 0
    residues, moduli = [], []
    for ell, e in sorted(factorint(n).items()):
        pe = ell ** e
        g_i = gf.pow(gf.generator, n // pe)
        h_i = gf.pow(h, n // pe)
        residues.append(_dlog_prime_power(gf, g_i, h_i, ell, e))
        moduli.append(pe)
    x, _ = crt(moduli, residues)
    return int(x) % n


def is_mth_power(field: FieldLike, a: int, m: int) -> bool:
    gf = _as_field(field)
    if m < 1 or (gf.q - 1) % m:
        raise NoSuchRoot(f"{m} does not divide {gf.q - 1}")
    if a == 0:
        raise ZeroInput("m-th power test of zero")
    return gf.pow(a, (gf.q - 1) // m) == 1


def mth_root(field: FieldLike, a: int, m: int) -> int:
    """The m-th root of a with the smallest discrete log"""
    gf = _as_field(field)
    if m < 1 or (gf.q - 1) % m:
        raise NoSuchRoot(f"{m} does not divide {gf.q - 1}")
    if a == 0:
        raise ZeroInput("m-th root of zero")
    x = discrete_log(gf, a)
    if x % m:
        raise NotAnMthPower(f"{a} is not a {m}-th power in GF({gf.q})")
    return gf.pow(gf.generator, (x // m) % ((gf.q - 1) // m))


@dataclass(frozen=True)
class LinearizedPolynomial:
    """L(T) = sum coeffs[i] * T^(p^i)"""
    p: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = list(self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @property
    def log_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return self.p ** self.log_degree

    def evaluate(self, field: FieldLike, t: int) -> int:
        gf = _as_field(field)
        total, term = 0, t
        for c in self.coeffs:
            if c:
                total = gf.add(total, gf.mul(c, term))
            term = gf.pow(term, gf.p)
        return total

    def dense(self) -> List[int]:
        """Ordinary coefficient list"""
        out = [0] * (self.degree + 1)
        for i, c in enumerate(self.coeffs):
            out[self.p ** i] = c
        return out


def subspace_polynomial(field: FieldLike, basis: Sequence[int]) -> LinearizedPolynomial:
    """Monic annihilator prod_{w in span(basis)} (T - w)"""
    gf = _as_field(field)
    current = LinearizedPolynomial(gf.p, (1,))
    for w in basis:
        value = current.evaluate(gf, w)
        if value == 0:
            raise KernelDefect(f"basis element {w} is dependent on its predecessors")
        c = gf.pow(value, gf.p - 1)
        coeffs = [0] * (len(current.coeffs) + 1)
        for i, a in enumerate(current.coeffs):
            coeffs[i + 1] = gf.add(coeffs[i + 1], gf.pow(a, gf.p))
            coeffs[i] = gf.sub(coeffs[i], gf.mul(c, a))
        current = LinearizedPolynomial(gf.p, tuple(coeffs))
    return current


def _linear_map_matrix(gf: GaloisField, L: LinearizedPolynomial) -> np.ndarray:
    """Matrix of L acting on GF(p)-coordinates; column j is L(x^j)"""
    columns = [gf.coords(L.evaluate(gf, gf.p ** j)) for j in range(gf.m)]
    return np.array(columns, dtype=np.int64).T


def kernel_basis(field: FieldLike, L: LinearizedPolynomial) -> List[int]:
    gf = _as_field(field)
    vectors = nullspace_mod_p(_linear_map_matrix(gf, L), gf.p)
    return [gf.from_coords(v) for v in vectors]


def span(field: FieldLike, basis: Sequence[int]) -> List[int]:
    """All GF(p)-combinations, mixed-radix order with basis[0] fastest"""
    gf = _as_field(field)
    elements = []
    for digits in product(range(gf.p), repeat=len(basis)):
        value = 0
        for d, w in zip(reversed(digits), basis):
            if d:
                value = gf.add(value, gf.scalar_mul(d, w))
        elements.append(value)
    return elements


def solve_linearized(field: FieldLike, L: LinearizedPolynomial, c: int) -> List[int]:
    """All T in GF(q) with L(T) = c, sorted by codec value"""
    gf = _as_field(field)
    matrix = _linear_map_matrix(gf, L)
    kernel = nullspace_mod_p(matrix, gf.p)
    if len(kernel) != L.log_degree:
        raise KernelDefect(f"kernel dimension {len(kernel)} differs from log_p deg L = {L.log_degree}")
    particular = solve_mod_p(matrix, gf.coords(c), gf.p)
    if particular is None:
        return []
    base = gf.from_coords(particular)
    return sorted(gf.add(base, k) for k in span(gf, [gf.from_coords(v) for v in kernel]))


def factor_smooth(n: int, bound: int) -> List[int]:
    """Ascending prime factorization with multiplicity, every factor at most bound"""
    if n < 1:
        raise ValidationError(f"factor_smooth needs n >= 1, got {n}")
    primes: List[int] = []
    for ell, e in sorted(factorint(n).items()):
        primes.extend([int(ell)] * e)
    offending = [ell for ell in primes if ell > bound]
    if offending:
        raise NotSmooth(offending[0], n, bound)
    return primes

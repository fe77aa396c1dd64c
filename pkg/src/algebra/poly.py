"""
Dense univariate polynomials over GF(q), coefficient lists with constant term first
"""

from typing import List, Sequence, Tuple


def trim(coeffs: Sequence[int]) -> List[int]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(coeffs: Sequence[int]) -> int:
    """Degree, -1 for the zero polynomial"""
    return len(trim(coeffs)) - 1


def evaluate(ops, coeffs: Sequence[int], x: int) -> int:
    """Horner evaluation"""
    acc = 0
    for c in reversed(coeffs):
        acc = ops.add(ops.mul(acc, x), c)
    return acc


def derivative(ops, coeffs: Sequence[int]) -> List[int]:
    return trim(ops.scalar_mul(i, c) for i, c in enumerate(coeffs) if i > 0)


def divmod_poly(ops, a: Sequence[int], b: Sequence[int]) -> Tuple[List[int], List[int]]:
    a = trim(a)
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = ops.inv(b[-1])
    quotient = [0] * max(len(a) - len(b) + 1, 0)
    remainder = list(a)
    for shift in range(len(a) - len(b), -1, -1):
        c = ops.mul(remainder[shift + len(b) - 1], lead_inv)
        quotient[shift] = c
        if c:
            for i, bc in enumerate(b):
                remainder[shift + i] = ops.sub(remainder[shift + i], ops.mul(c, bc))
    return trim(quotient), trim(remainder)


def gcd(ops, a: Sequence[int], b: Sequence[int]) -> List[int]:
    """Monic gcd"""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(ops, a, b)[1]
    if not a:
        return []
    lead_inv = ops.inv(a[-1])
    return [ops.mul(c, lead_inv) for c in a]


def is_square_free(ops, coeffs: Sequence[int]) -> bool:
    """gcd(u, u') is constant"""
    u = trim(coeffs)
    if len(u) <= 1:
        return True
    du = derivative(ops, u)
    if not du:
        # u' = 0 means u is a p-th power
        return False
    return degree(gcd(ops, u, du)) == 0


def newton_interpolate(ops, nodes: Sequence[int], values: Sequence[int]) -> List[int]:
    """Coefficients of the unique polynomial of degree < len(nodes) through the points"""
    n = len(nodes)
    table = list(values)
    # divided differences in place
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            num = ops.sub(table[i], table[i - 1])
            den = ops.sub(nodes[i], nodes[i - level])
            table[i] = ops.mul(num, ops.inv(den))
    coeffs = [0] * n
    # expand the Newton form from the innermost term
    for i in range(n - 1, -1, -1):
        shifted = [0] + coeffs[:-1]
        coeffs = [ops.sub(s, ops.mul(nodes[i], c)) for s, c in zip(shifted, coeffs)]
        coeffs[0] = ops.add(coeffs[0], table[i])
    return coeffs

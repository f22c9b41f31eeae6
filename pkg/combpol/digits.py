"""
Base-p digit arithmetic: p-adic digits, p-weights and Lucas binomials.

p may be a prime or math.inf ("characteristic infinity"); with p = inf a
non-negative integer t is its own single digit.
"""
import math
from itertools import zip_longest
from typing import List, Union

from sympy.ntheory import digits as _sympy_digits

from .errors import CombpolError

Characteristic = Union[int, float]


def p_digits(t: int, p: Characteristic) -> List[int]:
    """Digits of t in base p, least significant first ([0] for t = 0)"""
    if t < 0:
        raise CombpolError(f"p-adic digits need t >= 0, got {t}")
    if math.isinf(p):
        return [t]
    return _sympy_digits(t, int(p))[1:][::-1]


def p_weight(t: int, p: Characteristic) -> int:
    """omega_p(t): the sum of the base-p digits of t; omega_inf(t) = t"""
    return sum(p_digits(t, p))


def lucas_binom(a: int, b: int, p: Characteristic) -> int:
    """binom(a, b) mod p as the product of digitwise binomials.

    For p = inf this is the exact binomial coefficient.
    """
    if a < 0 or b < 0:
        raise CombpolError(f"binomial needs non-negative arguments, got ({a}, {b})")
    if b > a:
        return 0
    if math.isinf(p):
        return math.comb(a, b)
    p = int(p)
    result = 1
    for ai, bi in zip_longest(p_digits(a, p), p_digits(b, p), fillvalue=0):
        if bi > ai:
            return 0
        result = result * math.comb(ai, bi) % p
    return result


def digits_dominate(a: int, b: int, p: Characteristic) -> bool:
    """True when every base-p digit of b is at most the matching digit of a"""
    if b > a:
        return False
    if math.isinf(p):
        return True
    return all(bi <= ai for ai, bi in zip_longest(p_digits(a, p), p_digits(b, p), fillvalue=0))

"""
Exact rational arithmetic helpers.

Rationals are ``fractions.Fraction`` values throughout the package; this module
adds the number theory the colorings need: prime decompositions, p-adic
valuations v_p, unit residues w_p, and a multiplicative-dependence test.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import factorint, isprime, multiplicity

RATIONAL_PATTERN = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")

type RationalLike = Fraction | int | str


class RatcoreError(ValueError):
    """Base exception for rational arithmetic errors"""

    pass


class InvalidRational(RatcoreError):
    """Raised for zero denominators and unparsable rational strings"""

    pass


class UndefinedValuation(RatcoreError):
    """Raised when a valuation or factorization of zero is requested"""

    pass


class InvalidPrime(RatcoreError):
    """Raised when a modulus that should be prime is not"""

    pass


class InvalidArgument(RatcoreError):
    """Raised when an argument lies outside an operation's domain"""

    pass


class PreconditionViolation(RatcoreError):
    """Raised when an input does not satisfy a stated precondition"""

    pass


@dataclass(frozen=True)
class PrimeDecomposition:
    """sign * prod(p**e) with only nonzero exponents stored"""

    sign: int
    exponents: dict[int, int] = field(default_factory=dict)

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.exponents))

    def vector(self, primes: tuple[int, ...] | list[int]) -> tuple[int, ...]:
        """Exponents over an ordered prime list (absent primes give 0)"""
        return tuple(self.exponents.get(p, 0) for p in primes)


# Parsing and formatting
##############################################################################


def normalize(n: int, d: int) -> Fraction:
    """Reduced form of n/d with a positive denominator"""
    if d == 0:
        raise InvalidRational(f"Zero denominator in {n}/{d}")
    return Fraction(n, d)


def parse_rational(value: RationalLike) -> Fraction:
    """
    Parse an "n/d" string (or pass through an int/Fraction).

    Decimal points and exponents are rejected so that no float ever enters
    the arithmetic.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidRational(f"Not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise InvalidRational(f"Not a rational: {value!r}")
    match = RATIONAL_PATTERN.match(value)
    if not match:
        raise InvalidRational(f"Could not parse rational '{value}' (expected 'n' or 'n/d')")
    numerator, denominator = match.groups()
    return normalize(int(numerator), int(denominator) if denominator is not None else 1)


def format_rational(q: Fraction | int) -> str:
    """Serialize as "n/d", with "/1" omitted"""
    return str(Fraction(q))


# Primes and factorization
##############################################################################


def require_prime(p: int) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or not isprime(p):
        raise InvalidPrime(f"{p!r} is not a prime")
    return p


def _require_nonzero(q: Fraction | int) -> Fraction:
    q = Fraction(q)
    if q == 0:
        raise UndefinedValuation("Valuation of zero is undefined")
    return q


def factor(q: Fraction | int) -> PrimeDecomposition:
    """Exact prime decomposition of a nonzero rational"""
    q = _require_nonzero(q)
    exponents: dict[int, int] = {}
    for p, e in factorint(abs(q.numerator)).items():
        exponents[int(p)] = int(e)
    for p, e in factorint(q.denominator).items():
        exponents[int(p)] = exponents.get(int(p), 0) - int(e)
    return PrimeDecomposition(
        sign=1 if q > 0 else -1,
        exponents={p: e for p, e in sorted(exponents.items()) if e != 0},
    )


def reconstruct(decomposition: PrimeDecomposition) -> Fraction:
    value = Fraction(decomposition.sign)
    for p, e in decomposition.exponents.items():
        value *= Fraction(p) ** e
    return value


def v_p(q: Fraction | int, p: int) -> int:
    """The p-adic valuation: the exponent of p in q"""
    q = _require_nonzero(q)
    require_prime(p)
    num = abs(q.numerator)
    den = q.denominator
    return int(multiplicity(p, num)) - int(multiplicity(p, den))


def w_p(q: Fraction | int, p: int) -> int:
    """
    Unit residue of q at p: writing q = p**v * a/b with p dividing neither
    a nor b, returns a * b**-1 mod p in {1, ..., p-1}. The sign of q is
    carried by a.
    """
    q = _require_nonzero(q)
    v = v_p(q, p)
    unit = q / Fraction(p) ** v
    return unit.numerator * pow(unit.denominator, -1, p) % p


# Multiplicative structure
##############################################################################


def _primitive(exponents: dict[int, int]) -> tuple[int, dict[int, int]]:
    g = 0
    for e in exponents.values():
        g = gcd(g, e)
    return g, {p: e // g for p, e in exponents.items()}


def multiplicative_dependence(a: Fraction | int, b: Fraction | int) -> tuple[int, int] | None:
    """
    Smallest (m, n) with m > 0 and a**m == b**n, or None when the exponent
    vectors of a and b are not proportional (log_a b is then irrational).
    """
    a, b = Fraction(a), Fraction(b)
    for value in (a, b):
        if value <= 0 or value == 1:
            raise InvalidArgument(f"Expected a positive rational other than 1, got {value}")

    ga, ua = _primitive(factor(a).exponents)
    gb, ub = _primitive(factor(b).exponents)
    if ua == ub:
        direction = 1
    elif ua == {p: -e for p, e in ub.items()}:
        direction = -1
    else:
        return None

    g = gcd(ga, gb)
    m, n = gb // g, direction * ga // g
    return m, n


def validate_zero_sum_valuations(terms: list[Fraction], p: int) -> bool:
    """
    For nonzero terms summing to zero, the two smallest p-adic valuations
    coincide. Returns whether that holds (it always should).
    """
    require_prime(p)
    values = [Fraction(t) for t in terms]
    if not values or any(t == 0 for t in values):
        raise PreconditionViolation("Terms must be a nonempty list of nonzero rationals")
    if sum(values, Fraction(0)) != 0:
        raise PreconditionViolation(f"Terms do not sum to zero: {[format_rational(t) for t in values]}")
    valuations = sorted(v_p(t, p) for t in values)
    return valuations[0] == valuations[1]

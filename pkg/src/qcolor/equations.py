"""
Linear homogeneous equations sum(a_i * x_i) = 0 over the nonzero rationals.
"""

import logging
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import lcm

from qcolor.ratcore import RationalLike, factor, format_rational, parse_rational

E_PATTERN = re.compile(r"^\s*E\s*\(\s*([^,()]+?)\s*,\s*(\d+)\s*\)\s*$", re.IGNORECASE)


class EquationError(ValueError):
    """Base exception for equation errors"""

    pass


class DegenerateEquation(EquationError):
    """Raised for zero coefficients and for E(q,n) with q in {-1, 0, 1}"""

    pass


class InvalidArity(EquationError):
    """Raised for equations with fewer than two variables"""

    pass


@dataclass(frozen=True)
class LinearEquation:
    """Coefficients a_1..a_n of sum(a_i * x_i) = 0"""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) < 2:
            raise InvalidArity(f"An equation needs at least two variables, got {len(self.coefficients)}")
        if any(a == 0 for a in self.coefficients):
            raise DegenerateEquation("All coefficients must be nonzero")

    @classmethod
    def of(cls, coefficients: Iterable[RationalLike]) -> "LinearEquation":
        return cls(tuple(parse_rational(a) for a in coefficients))

    @property
    def arity(self) -> int:
        return len(self.coefficients)

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        """Exact left-hand side at the given values"""
        if len(values) != self.arity:
            raise InvalidArity(f"Expected {self.arity} values, got {len(values)}")
        return sum((a * Fraction(x) for a, x in zip(self.coefficients, values, strict=True)), Fraction(0))

    def is_solution(self, values: Sequence[Fraction]) -> bool:
        return len(values) == self.arity and all(x != 0 for x in values) and self.evaluate(values) == 0

    def to_list(self) -> list[str]:
        return [format_rational(a) for a in self.coefficients]

    def support_primes(self) -> set[int]:
        primes: set[int] = set()
        for a in self.coefficients:
            primes.update(factor(a).exponents)
        return primes

    def __str__(self) -> str:
        return "[" + ", ".join(self.to_list()) + "]"


@dataclass(frozen=True)
class ForbiddenRatio:
    """
    A ratio r such that x and r*x sharing a color always yields a
    monochromatic solution. ``witness`` is a solution over {1, r}.
    """

    ratio: Fraction
    witness: tuple[Fraction, ...]

    @property
    def inverse(self) -> Fraction:
        return 1 / self.ratio

    def two_value_solution(self, x: Fraction = Fraction(1)) -> tuple[Fraction, ...]:
        return tuple(x * w for w in self.witness)

    def to_dict(self) -> dict[str, object]:
        return {
            "ratio": format_rational(self.ratio),
            "witness": [format_rational(w) for w in self.witness],
        }


# Constructors
##############################################################################


def _require_nondegenerate(q: Fraction) -> Fraction:
    if q in (-1, 0, 1):
        raise DegenerateEquation(f"E(q,n) is degenerate for q = {format_rational(q)}")
    return q


def make_equation_E(q: RationalLike, n: int) -> LinearEquation:  # noqa: N802
    """E(q,n): x_0 + q x_1 + ... + q^(n-2) x_(n-2) - q^(n-1) x_(n-1) = 0"""
    q = _require_nondegenerate(parse_rational(q))
    if n < 2:
        raise InvalidArity(f"E(q,n) needs n >= 2, got {n}")
    coefficients = [q**i for i in range(n - 1)]
    coefficients.append(-(q ** (n - 1)))
    return LinearEquation(tuple(coefficients))


def parse_equation(text: str) -> LinearEquation:
    """Accepts "E(3/2,3)" or a comma separated coefficient list such as "1,1,1,-4"."""
    match = E_PATTERN.match(text)
    if match:
        return make_equation_E(parse_rational(match.group(1)), int(match.group(2)))
    parts = [part for part in re.split(r"[,\s]+", text.strip().strip("[]")) if part]
    return LinearEquation.of(parts)


def lemma_fr_generators(q: RationalLike) -> tuple[Fraction, Fraction]:
    """
    The pair (a, b) = ((q+1)/q^2, q(q-1)). Any 3-coloring free of
    monochromatic solutions to E(q,3) has c(x) = c(a^m b^n x) exactly when
    3 divides m + n.
    """
    q = _require_nondegenerate(parse_rational(q))
    return (q + 1) / q**2, q * (q - 1)


# Analysis
##############################################################################


def rado_single_equation_regular(eq: LinearEquation) -> bool:
    """True iff some nonempty subset of the coefficients sums to zero"""
    coefficients = eq.coefficients
    return any(
        sum(subset, Fraction(0)) == 0
        for size in range(1, len(coefficients) + 1)
        for subset in combinations(coefficients, size)
    )


def _canonical_ratio(r: Fraction) -> Fraction:
    if r > 0:
        return r if r > 1 else 1 / r
    return r if r <= -1 else 1 / r


def forbidden_ratios(eq: LinearEquation) -> list[ForbiddenRatio]:
    """
    Ratios forced apart by two-value solutions, one per {r, 1/r} class.

    Every split of the coefficient positions into nonempty parts A and B with
    sum(B) != 0 gives r = -sum(A)/sum(B); the solution puts 1 on A and r on B.
    Positive ratios come first, each group by decreasing magnitude.
    """
    coefficients = eq.coefficients
    n = len(coefficients)
    found: dict[Fraction, ForbiddenRatio] = {}
    for mask in range(1, (1 << n) - 1):
        sum_a = sum((a for i, a in enumerate(coefficients) if mask >> i & 1), Fraction(0))
        sum_b = sum((a for i, a in enumerate(coefficients) if not mask >> i & 1), Fraction(0))
        if sum_b == 0:
            continue
        r = -sum_a / sum_b
        if r in (0, 1):
            continue
        canonical = _canonical_ratio(r)
        if canonical in found:
            continue
        if canonical == r:
            witness = tuple(Fraction(1) if mask >> i & 1 else r for i in range(n))
        else:
            witness = tuple(canonical if mask >> i & 1 else Fraction(1) for i in range(n))
        found[canonical] = ForbiddenRatio(ratio=canonical, witness=witness)

    return sorted(found.values(), key=lambda fr: (fr.ratio < 0, -abs(fr.ratio)))


def ratio_set(eq: LinearEquation) -> frozenset[Fraction]:
    """All forbidden ratios together with their inverses"""
    ratios: set[Fraction] = set()
    for fr in forbidden_ratios(eq):
        ratios.add(fr.ratio)
        ratios.add(fr.inverse)
    return frozenset(ratios)


# Solutions
##############################################################################


def canonical_key(q: Fraction) -> tuple[int, Fraction]:
    return (1 if q > 0 else -1, q)


def canonical_order(values: Iterable[RationalLike]) -> list[Fraction]:
    """Deduplicated values in the deterministic (sign, value) order"""
    return sorted({parse_rational(v) for v in values}, key=canonical_key)


def scaled_terms(eq: LinearEquation, values: Sequence[Fraction]) -> list[list[int]]:
    """
    Integer matrix terms[i][j] proportional to a_i * values[j], with one
    common positive scale, so sums can be compared as plain ints.
    """
    scale = lcm(*(a.denominator for a in eq.coefficients)) * lcm(1, *(v.denominator for v in values))
    return [[int(a * v * scale) for v in values] for a in eq.coefficients]


def solution_indices(
    eq: LinearEquation,
    values: Sequence[Fraction],
    terms: list[list[int]] | None = None,
) -> list[tuple[int, ...]]:
    """
    Index tuples t with sum(a_i * values[t_i]) = 0, unordered.

    Split-sum join: sums over the first half of the positions are hashed,
    then each assignment of the second half looks up its negated sum.
    """
    if not values:
        return []
    if terms is None:
        terms = scaled_terms(eq, values)
    n = eq.arity
    k = n // 2
    m = len(values)
    left_terms, right_terms = terms[:k], terms[k:]

    left: dict[int, list[tuple[int, ...]]] = {}
    for combo in product(range(m), repeat=k):
        total = 0
        for row, j in zip(left_terms, combo, strict=True):
            total += row[j]
        left.setdefault(total, []).append(combo)

    found: list[tuple[int, ...]] = []
    for combo in product(range(m), repeat=n - k):
        total = 0
        for row, j in zip(right_terms, combo, strict=True):
            total += row[j]
        matches = left.get(-total)
        if matches:
            found.extend(prefix + combo for prefix in matches)
    return found


def enumerate_solutions(eq: LinearEquation, values: Iterable[RationalLike]) -> list[tuple[Fraction, ...]]:
    """
    Every tuple over ``values`` solving ``eq``, ordered lexicographically by
    the canonical order of ``values``.
    """
    ordered = canonical_order(values)
    if any(v == 0 for v in ordered):
        raise EquationError("Solution sets exclude zero")
    indices = sorted(solution_indices(eq, ordered))
    logging.debug(f"Found {len(indices)} solutions of {eq} over {len(ordered)} values")
    return [tuple(ordered[j] for j in t) for t in indices]

"""
Finite node universes for the prover.

A node sign * prod(p_i ** e_i) stands for that multiple of a symbolic base x.
Equations are homogeneous, so the base cancels and nodes can be handled as
the rationals they denote at x = 1.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import lcm, prod
from typing import TYPE_CHECKING, Any

from qcolor.equations import LinearEquation, ratio_set
from qcolor.ratcore import RationalLike, factor, format_rational, parse_rational, require_prime

if TYPE_CHECKING:
    from qcolor.config import UniverseConfig


class UniverseError(Exception):
    """Base exception for universe construction errors"""

    pass


class UnsupportedPrime(UniverseError):
    """Raised when a value or coefficient uses a prime outside the declared support"""

    pass


@dataclass(frozen=True, order=True)
class Node:
    """sign * prod(p_i ** exponents_i) over the universe's prime list"""

    sign: int
    exponents: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(abs(e) for e in self.exponents)

    def value(self, primes: Sequence[int]) -> Fraction:
        powers = (Fraction(p) ** e for p, e in zip(primes, self.exponents, strict=True))
        return self.sign * prod(powers, start=Fraction(1))

    def times(self, other: "Node") -> "Node":
        return Node(self.sign * other.sign, tuple(a + b for a, b in zip(self.exponents, other.exponents, strict=True)))


def node_of(q: RationalLike, primes: Sequence[int]) -> Node:
    """Node for q over ``primes``; raises UnsupportedPrime if q needs another prime"""
    decomposition = factor(parse_rational(q))
    extra = set(decomposition.exponents) - set(primes)
    if extra:
        shown = format_rational(parse_rational(q))
        raise UnsupportedPrime(f"{shown} uses primes {sorted(extra)} outside {list(primes)}")
    return Node(decomposition.sign, decomposition.vector(primes))


@dataclass(frozen=True)
class NodeUniverse:
    primes: tuple[int, ...]
    bounds: tuple[tuple[int, int], ...]
    include_negatives: bool
    nodes: tuple[Node, ...]
    values: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)
    _index: dict[Fraction, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        values = tuple(node.value(self.primes) for node in self.nodes)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(values)})

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, q: object) -> bool:
        return isinstance(q, (int, Fraction)) and Fraction(q) in self._index

    def index_of(self, q: RationalLike) -> int | None:
        return self._index.get(parse_rational(q))

    def in_bounds(self, node: Node) -> bool:
        if node.sign < 0 and not self.include_negatives:
            return False
        return all(lo <= e <= hi for e, (lo, hi) in zip(node.exponents, self.bounds, strict=True))

    def to_dict(self) -> dict[str, Any]:
        return {
            "primes": list(self.primes),
            "bounds": {str(p): list(b) for p, b in zip(self.primes, self.bounds, strict=True)},
            "negatives": self.include_negatives,
            "values": [format_rational(v) for v in self.values],
        }


def _normalize_bounds(primes: Sequence[int], bounds: Mapping[int, Sequence[int]]) -> tuple[tuple[int, int], ...]:
    result = []
    for p in primes:
        lo, hi = bounds.get(p, (0, 0))
        if lo > hi:
            raise UniverseError(f"Empty exponent range [{lo}, {hi}] for prime {p}")
        result.append((int(lo), int(hi)))
    return tuple(result)


def _check_primes(primes: Sequence[int]) -> tuple[int, ...]:
    if len(set(primes)) != len(primes):
        raise UniverseError(f"Primes must be distinct: {list(primes)}")
    for p in primes:
        require_prime(p)
    return tuple(primes)


def make_universe(
    primes: Sequence[int],
    bounds: Mapping[int, Sequence[int]],
    include_negatives: bool,
    nodes: Iterable[Node],
) -> NodeUniverse:
    """Deduplicated, canonically sorted universe that always holds the identity"""
    primes = _check_primes(primes)
    identity = Node(1, (0,) * len(primes))
    universe = NodeUniverse(
        primes=primes,
        bounds=_normalize_bounds(primes, bounds),
        include_negatives=include_negatives,
        nodes=tuple(sorted({identity, *nodes})),
    )
    outside = [n for n in universe.nodes if not universe.in_bounds(n)]
    if outside:
        raise UniverseError(f"{len(outside)} nodes fall outside the declared bounds")
    return universe


def _box(primes: Sequence[int], bounds: tuple[tuple[int, int], ...], include_negatives: bool) -> list[Node]:
    ranges = [range(lo, hi + 1) for lo, hi in bounds]
    signs = (-1, 1) if include_negatives else (1,)
    return [Node(sign, exps) for sign in signs for exps in product(*ranges)]


def generate_universe(
    primes: Sequence[int],
    bounds: Mapping[int, Sequence[int]],
    include_negatives: bool,
) -> NodeUniverse:
    """Every sign/exponent combination within the bounds"""
    primes = _check_primes(primes)
    normalized = _normalize_bounds(primes, bounds)
    return make_universe(primes, bounds, include_negatives, _box(primes, normalized, include_negatives))


def universe_from_values(values: Iterable[RationalLike], primes: Sequence[int] | None = None) -> NodeUniverse:
    """Universe holding exactly the given values (plus 1); bounds are their exponent hull"""
    parsed = sorted({parse_rational(v) for v in values})
    if any(v == 0 for v in parsed):
        raise UniverseError("A universe cannot contain zero")
    if primes is None:
        support: set[int] = set()
        for v in parsed:
            support.update(factor(v).exponents)
        primes = sorted(support)
    nodes = [node_of(v, primes) for v in parsed]
    bounds = {
        p: (min([0, *(n.exponents[i] for n in nodes)]), max([0, *(n.exponents[i] for n in nodes)]))
        for i, p in enumerate(primes)
    }
    return make_universe(primes, bounds, any(v < 0 for v in parsed), nodes)


def integer_universe(n: int) -> NodeUniverse:
    """The positive integers 1..n"""
    if n < 1:
        raise UniverseError(f"Integer universe needs n >= 1, got {n}")
    return universe_from_values(range(1, n + 1))


# Closure growth
##############################################################################


def _within(node: Node, bounds: tuple[tuple[int, int], ...], include_negatives: bool) -> bool:
    if node.sign < 0 and not include_negatives:
        return False
    return all(lo <= e <= hi for e, (lo, hi) in zip(node.exponents, bounds, strict=True))


def _bounded_node(
    q: Fraction,
    primes: Sequence[int],
    bounds: tuple[tuple[int, int], ...],
    include_negatives: bool,
) -> Node | None:
    """The node for q when q is smooth over ``primes`` and inside the bounds, else None"""
    if q < 0 and not include_negatives:
        return None
    num, den = abs(q.numerator), q.denominator
    exponents = []
    for p, (lo, hi) in zip(primes, bounds, strict=True):
        e = 0
        while num % p == 0:
            num //= p
            e += 1
        while den % p == 0:
            den //= p
            e -= 1
        if not lo <= e <= hi:
            return None
        exponents.append(e)
    if num != 1 or den != 1:
        return None
    return Node(1 if q > 0 else -1, tuple(exponents))


def _shapes(eq: LinearEquation) -> list[tuple[Fraction, list[tuple[Fraction, int]]]]:
    """
    Ways a new value y can enter a solution: y fills a nonempty set P of
    positions with sum_P(a) != 0 and the other positions keep their
    coefficients, grouped as (coefficient, count). Each shape is listed once.
    """
    coeffs = eq.coefficients
    n = len(coeffs)
    shapes: dict[tuple[Fraction, tuple[Fraction, ...]], list[tuple[Fraction, int]]] = {}
    for size in range(1, n):
        for positions in combinations(range(n), size):
            a_p = sum((coeffs[i] for i in positions), Fraction(0))
            rest = tuple(sorted(coeffs[i] for i in range(n) if i not in positions))
            if a_p != 0 and (a_p, rest) not in shapes:
                shapes[(a_p, rest)] = sorted(Counter(rest).items())
    return [(a_p, groups) for (a_p, _), groups in shapes.items()]


def _completions(
    eq: LinearEquation,
    present: Sequence[Node],
    primes: Sequence[int],
    bounds: tuple[tuple[int, int], ...],
    include_negatives: bool,
) -> set[Node]:
    """
    Nodes inside the bounds that complete a solution of eq whose other
    entries are all present. Each new entry is solved for from sums over the
    present values; the exponent box itself is never listed.
    """
    values = [node.value(primes) for node in present]
    denominator = lcm(*(a.denominator for a in eq.coefficients))
    scale = lcm(*(v.denominator for v in values))
    scaled = [int(v * scale) for v in values]
    found: set[Node] = set()

    for a_p, groups in _shapes(eq):
        # integer sums a * (v_1 + ... + v_k) per group of equal coefficients
        partial = [
            {int(a * denominator) * sum(chunk) for chunk in combinations_with_replacement(scaled, k)}
            for a, k in groups
        ]
        divisor = a_p * denominator * scale
        for total in {sum(terms) for terms in product(*partial)}:
            if total == 0:
                continue
            node = _bounded_node(-total / divisor, primes, bounds, include_negatives)
            if node is not None:
                found.add(node)
    return found.difference(present)


def closure_universe(
    eq: LinearEquation,
    primes: Sequence[int],
    bounds: Mapping[int, Sequence[int]],
    include_negatives: bool = True,
    rounds: int = 3,
    core: Iterable[RationalLike] = (1,),
    max_nodes: int = 600,
) -> NodeUniverse:
    """
    Grow a universe from ``core`` inside the exponent bounds.

    Each round admits the nodes related to the current universe by a
    forbidden ratio and the nodes that complete a solution whose other
    entries are already present. When a round would pass ``max_nodes`` the
    simplest new nodes (smallest total exponent, then canonical order) fill
    the remaining room and growth stops. ``rounds = 0`` returns the full box.
    """
    primes = _check_primes(primes)
    if not eq.support_primes() <= set(primes):
        raise UnsupportedPrime(f"Coefficients of {eq} use primes outside {list(primes)}")
    if rounds <= 0:
        return generate_universe(primes, bounds, include_negatives)

    normalized = _normalize_bounds(primes, bounds)
    present: set[Node] = {Node(1, (0,) * len(primes))}
    for q in core:
        node = node_of(q, primes)
        if not _within(node, normalized, include_negatives):
            raise UniverseError(f"Core value {format_rational(parse_rational(q))} is outside the box")
        present.add(node)

    ratio_nodes = []
    for r in ratio_set(eq):
        try:
            ratio_nodes.append(node_of(r, primes))
        except UnsupportedPrime:
            logging.debug(f"Ratio {format_rational(r)} cannot connect nodes over {list(primes)}")

    for round_number in range(1, rounds + 1):
        new: set[Node] = set()
        for node in present:
            for ratio in ratio_nodes:
                neighbour = node.times(ratio)
                if neighbour not in present and _within(neighbour, normalized, include_negatives):
                    new.add(neighbour)
        new |= _completions(eq, sorted(present), primes, normalized, include_negatives)

        logging.debug(f"Closure round {round_number}: {len(present)} nodes present, {len(new)} new")
        if not new:
            break
        room = max_nodes - len(present)
        if len(new) > room:
            present.update(sorted(new, key=lambda n: (n.height, n))[: max(room, 0)])
            logging.info(f"Closure stopped at {len(present)} nodes (maxNodes) in round {round_number}")
            break
        present.update(new)

    return make_universe(primes, bounds, include_negatives, present)


def universe_from_config(
    config: "UniverseConfig",
    eq: LinearEquation | None = None,
    extra_core: Iterable[RationalLike] = (),
) -> NodeUniverse:
    """Build the universe a UniverseConfig describes"""
    if config.values is not None:
        return universe_from_values(config.values, config.primes or None)
    if config.integers is not None:
        return integer_universe(config.integers)
    bounds = {int(p): tuple(b) for p, b in config.bounds.items()}
    if eq is None or config.closure_rounds <= 0:
        return generate_universe(config.primes, bounds, config.negatives)
    return closure_universe(
        eq,
        config.primes,
        bounds,
        include_negatives=config.negatives,
        rounds=config.closure_rounds,
        core=[*config.core, *extra_core],
        max_nodes=config.max_nodes,
    )

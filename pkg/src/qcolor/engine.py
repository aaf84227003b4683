"""
The prover.

Constraints are derived from an equation over a finite node universe:
forbidden ratios give disequalities between pairs of nodes and solutions
give not-all-equal constraints on their distinct nodes. A ColorState keeps
per-node candidate colors as bitmasks and the first reason each color was
dropped, so every search step can be written out as a proof row.
"""

import logging
import re
import time
from collections import deque
from collections.abc import Iterable, Iterator, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, NoReturn

from qcolor.colorings import Explicit, canonicalize, find_monochromatic, lemma_fr_violations
from qcolor.config import Budget
from qcolor.equations import LinearEquation, enumerate_solutions, ratio_set, solution_indices
from qcolor.proof import Claim, ClaimKind, Fact, Justification, ProofTree, Row
from qcolor.ratcore import RatcoreError, RationalLike, format_rational, parse_rational
from qcolor.universe import NodeUniverse, UnsupportedPrime, generate_universe

__all__ = [
    "BudgetExceeded",
    "ColorState",
    "ConstraintSet",
    "Contradiction",
    "EngineError",
    "Enumeration",
    "Forced",
    "InvalidSeed",
    "Sat",
    "SearchStats",
    "Seed",
    "UnsupportedPrime",
    "Unsat",
    "brute_force_colorings",
    "derive_constraints",
    "enumerate_colorings",
    "generate_universe",
    "is_consistent",
    "lemma_fr_consistent",
    "parse_seed",
    "propagate",
    "resolve_seeds",
    "search",
]

SEED_TERM = re.compile(r"^\s*c\s*\(\s*([^()]+?)\s*\)\s*$")


class EngineError(Exception):
    """Base exception for prover errors"""

    pass


class InvalidSeed(EngineError):
    """Raised for unparsable, conflicting or out-of-universe seeds"""

    pass


@dataclass
class SearchStats:
    branches: int = 0
    decisions: int = 0
    propagations: int = 0
    rows: int = 0
    elapsed: float = 0.0

    def add(self, other: "SearchStats") -> None:
        self.branches += other.branches
        self.decisions += other.decisions
        self.propagations += other.propagations

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["elapsed"] = round(self.elapsed, 3)
        return data


class BudgetExceeded(EngineError):
    """Raised when a search or enumeration runs past its Budget"""

    def __init__(self, message: str, stats: SearchStats) -> None:
        super().__init__(message)
        self.stats = stats


# Constraints
##############################################################################


@dataclass(frozen=True)
class Disequality:
    """values[right] = values[left] * ratio, for a forbidden ratio"""

    left: int
    right: int
    ratio: Fraction


@dataclass(frozen=True)
class TupleConstraint:
    """Distinct nodes of a solution may not all share one color; ``witness`` is the solution itself"""

    nodes: tuple[int, ...]
    witness: tuple[int, ...]


@dataclass
class ConstraintSet:
    equation: LinearEquation
    values: tuple[Fraction, ...]
    ratios: frozenset[Fraction]
    disequalities: list[Disequality]
    tuples: list[TupleConstraint]
    contradictions: list[TupleConstraint]
    neighbours: list[list[tuple[int, Fraction]]] = field(repr=False)
    tuples_of: list[list[int]] = field(repr=False)

    def __len__(self) -> int:
        return len(self.values)

    def witness_values(self, constraint: TupleConstraint) -> tuple[Fraction, ...]:
        return tuple(self.values[i] for i in constraint.witness)


def derive_constraints(eq: LinearEquation, universe: NodeUniverse) -> ConstraintSet:
    """
    Disequalities for every pair of nodes related by a forbidden ratio and
    not-all-equal constraints for every solution inside the universe.

    Solutions with a single distinct node are universal contradictions.
    Solutions with two distinct nodes are already covered by a disequality.
    """
    if not eq.support_primes() <= set(universe.primes):
        raise UnsupportedPrime(f"Coefficients of {eq} use primes outside {list(universe.primes)}")

    values = universe.values
    index = {v: i for i, v in enumerate(values)}
    ratios = ratio_set(eq)

    neighbours: list[list[tuple[int, Fraction]]] = [[] for _ in values]
    disequalities = []
    for i, v in enumerate(values):
        for r in sorted(ratios):
            j = index.get(v * r)
            if j is None:
                continue
            neighbours[i].append((j, r))
            if i < j:
                disequalities.append(Disequality(i, j, r))
    for adjacent in neighbours:
        adjacent.sort()

    witnesses: dict[tuple[int, ...], tuple[int, ...]] = {}
    for t in solution_indices(eq, values):
        nodes = tuple(sorted(set(t)))
        if len(nodes) == 2 and values[nodes[1]] / values[nodes[0]] in ratios:
            continue
        known = witnesses.get(nodes)
        if known is None or t < known:
            witnesses[nodes] = t

    tuples: list[TupleConstraint] = []
    contradictions: list[TupleConstraint] = []
    for nodes in sorted(witnesses):
        constraint = TupleConstraint(nodes, witnesses[nodes])
        (contradictions if len(nodes) == 1 else tuples).append(constraint)

    tuples_of: list[list[int]] = [[] for _ in values]
    for tid, constraint in enumerate(tuples):
        for i in constraint.nodes:
            tuples_of[i].append(tid)

    logging.debug(
        f"Constraints over {len(values)} nodes: {len(disequalities)} disequalities, {len(tuples)} tuples, "
        f"{len(contradictions)} universal contradictions"
    )
    return ConstraintSet(
        equation=eq,
        values=values,
        ratios=ratios,
        disequalities=disequalities,
        tuples=tuples,
        contradictions=contradictions,
        neighbours=neighbours,
        tuples_of=tuples_of,
    )


# Color state
##############################################################################


@dataclass(frozen=True)
class Forced:
    node: int
    color: int


@dataclass(frozen=True)
class Contradiction:
    node: int


class ColorState:
    """
    Candidate colors per node, the decisions taken so far (the trail) and
    the first reason each excluded color was dropped.

    Deciding a node removes its color from ratio neighbours and from the
    last open node of any tuple whose other nodes all carry that color.
    Nodes left with one candidate wait in ``pending`` until decided; nodes
    left with none are conflicts.
    """

    def __init__(self, constraints: ConstraintSet, r: int) -> None:
        if r < 1:
            raise EngineError(f"At least one color is needed, got {r}")
        self.constraints = constraints
        self.r = r
        size = len(constraints)
        self.candidates: list[int] = [(1 << r) - 1] * size
        self.color: list[int] = [-1] * size
        self.reasons: dict[tuple[int, int], Justification] = {}
        self.pending: deque[int] = deque()
        self.conflicts: list[int] = []
        self.trail: list[tuple[int, int]] = []
        self.open_count: list[int] = [len(t.nodes) for t in constraints.tuples]
        self.used = 0
        self.propagations = 0

        for constraint in constraints.contradictions:
            reason = Justification.by_tuple(constraints.witness_values(constraint))
            for c in range(r):
                self._exclude(constraint.nodes[0], c, reason)

    @classmethod
    def replay(cls, constraints: ConstraintSet, r: int, trail: Iterable[tuple[int, int]]) -> "ColorState":
        """Rebuild a state by deciding the trail's entries in order"""
        state = cls(constraints, r)
        for node, color in trail:
            state.decide(node, color)
        return state

    def snapshot(self) -> "ColorState":
        other = object.__new__(ColorState)
        other.constraints = self.constraints
        other.r = self.r
        other.candidates = self.candidates.copy()
        other.color = self.color.copy()
        other.reasons = self.reasons.copy()
        other.pending = deque(self.pending)
        other.conflicts = self.conflicts.copy()
        other.trail = self.trail.copy()
        other.open_count = self.open_count.copy()
        other.used = self.used
        other.propagations = self.propagations
        return other

    def candidate_colors(self, node: int) -> list[int]:
        mask = self.candidates[node]
        return [c for c in range(self.r) if mask >> c & 1]

    @property
    def live(self) -> bool:
        return not self.conflicts

    def _open(self, node: int, color: int) -> bool:
        return self.color[node] < 0 and bool(self.candidates[node] >> color & 1)

    def _exclude(self, node: int, color: int, reason: Justification) -> None:
        if not self._open(node, color):
            return
        remaining = self.candidates[node] & ~(1 << color)
        self.candidates[node] = remaining
        self.reasons[(node, color)] = reason
        self.propagations += 1
        if remaining == 0:
            self.conflicts.append(node)
        elif remaining & (remaining - 1) == 0:
            self.pending.append(node)

    def decide(self, node: int, color: int) -> None:
        if self.color[node] >= 0:
            raise EngineError(f"Node {format_rational(self.constraints.values[node])} is already decided")
        if not self.candidates[node] >> color & 1:
            raise EngineError(f"Color {color} is not a candidate of {format_rational(self.constraints.values[node])}")
        self.color[node] = color
        self.candidates[node] = 1 << color
        self.used |= 1 << color
        self.trail.append((node, color))

        values = self.constraints.values
        for other, ratio in self.constraints.neighbours[node]:
            if self._open(other, color):
                self._exclude(other, color, Justification.by_ratio(values[node], ratio))

        # a tuple can only force its last open node, when its open count drops to one
        tuples = self.constraints.tuples
        open_count = self.open_count
        for tid in self.constraints.tuples_of[node]:
            open_count[tid] -= 1
            if open_count[tid] != 1:
                continue
            constraint = tuples[tid]
            open_node = -1
            for j in constraint.nodes:
                cj = self.color[j]
                if cj < 0:
                    open_node = j
                elif cj != color:
                    break
            else:
                if open_node >= 0 and self._open(open_node, color):
                    self._exclude(open_node, color, Justification.by_tuple(self.constraints.witness_values(constraint)))

    def step(self) -> Forced | Contradiction | None:
        """The next conflict or forced node, or None at a fixpoint"""
        if self.conflicts:
            return Contradiction(self.conflicts[0])
        while self.pending:
            node = self.pending.popleft()
            if self.color[node] < 0:
                return Forced(node, self.candidates[node].bit_length() - 1)
        return None

    def branch_node(self) -> int | None:
        """Undecided node with the fewest candidates, lowest index first"""
        best, best_count = None, self.r + 1
        for node, mask in enumerate(self.candidates):
            if self.color[node] >= 0:
                continue
            count = mask.bit_count()
            if count < best_count:
                best, best_count = node, count
        return best

    def options(self, node: int) -> tuple[list[int], list[int]]:
        """
        Colors to branch on and colors dropped by symmetry: unused colors
        are interchangeable, so only the smallest unused one is tried.
        """
        colors = self.candidate_colors(node)
        used = [c for c in colors if self.used >> c & 1]
        fresh = [c for c in colors if not self.used >> c & 1]
        return sorted(used + fresh[:1]), fresh[1:]

    def assignment(self) -> dict[Fraction, int]:
        return dict(zip(self.constraints.values, self.color, strict=True))


def propagate(state: ColorState) -> Contradiction | None:
    """Decide forced nodes until a fixpoint or a contradiction"""
    while True:
        event = state.step()
        if event is None or isinstance(event, Contradiction):
            return event
        state.decide(event.node, event.color)


# Seeds
##############################################################################


@dataclass(frozen=True)
class Seed:
    """c(a) = c(b) = ... [= color]; without a color the group takes the smallest unused one"""

    nodes: tuple[Fraction, ...]
    color: int | None = None

    def __str__(self) -> str:
        text = "=".join(f"c({format_rational(node)})" for node in self.nodes)
        return text if self.color is None else f"{text}={self.color}"


def parse_seed(text: str) -> Seed:
    """Parse "c(1)=c(3)", "c(2)=1" or "c(1)=c(3)=0" """
    parts = text.split("=")
    nodes: list[Fraction] = []
    color = None
    for position, part in enumerate(parts):
        match = SEED_TERM.match(part)
        if match:
            try:
                nodes.append(parse_rational(match.group(1)))
            except RatcoreError as e:
                raise InvalidSeed(f"Invalid seed '{text}': {e}") from e
        elif position == len(parts) - 1 and part.strip().isdigit():
            color = int(part)
        else:
            raise InvalidSeed(f"Invalid seed '{text}': cannot read '{part.strip()}'")
    if not nodes:
        raise InvalidSeed(f"Invalid seed '{text}': no node given")
    if any(node == 0 for node in nodes):
        raise InvalidSeed(f"Invalid seed '{text}': zero is not colored")
    return Seed(tuple(nodes), color)


def resolve_seeds(seeds: Iterable[Seed | str], r: int) -> list[Fact]:
    facts: list[Fact] = []
    assigned: dict[Fraction, int] = {}
    for seed in seeds:
        if isinstance(seed, str):
            seed = parse_seed(seed)
        color = seed.color
        if color is None:
            color = next((c for c in range(r) if c not in assigned.values()), None)
            if color is None:
                raise InvalidSeed(f"No unused color left for seed {seed}")
        if not 0 <= color < r:
            raise InvalidSeed(f"Seed color {color} is outside 0..{r - 1}")
        for node in seed.nodes:
            if node in assigned:
                if assigned[node] != color:
                    raise InvalidSeed(f"c({format_rational(node)}) is seeded with both {assigned[node]} and {color}")
                continue
            assigned[node] = color
            facts.append(Fact(node, color))
    return facts


def _apply_seeds(state: ColorState, universe: NodeUniverse, facts: Sequence[Fact]) -> None:
    for fact in facts:
        node = universe.index_of(fact.node)
        if node is None:
            raise InvalidSeed(f"Seed node {format_rational(fact.node)} is not in the universe")
        if not state._open(node, fact.color):
            raise InvalidSeed(f"Seeds already exclude c({format_rational(fact.node)}) = {fact.color}")
        state.decide(node, fact.color)


# Search
##############################################################################


@dataclass
class Sat:
    assignment: dict[Fraction, int]
    stats: SearchStats

    def to_dict(self) -> dict[str, Any]:
        return {
            "result": "sat",
            "assignment": {format_rational(v): c for v, c in self.assignment.items()},
            "stats": self.stats.to_dict(),
        }


@dataclass
class Unsat:
    tree: ProofTree
    stats: SearchStats

    def to_dict(self) -> dict[str, Any]:
        return {"result": "unsat", "proof": self.tree.to_dict(), "stats": self.stats.to_dict()}


class _Search:
    """Depth-first search that writes one proof row per claim, in pre-order"""

    def __init__(self, r: int, budget: Budget, started: float, max_branches: int | None = None) -> None:
        self.r = r
        self.budget = budget
        self.started = started
        self.max_branches = budget.max_branches if max_branches is None else max_branches
        self.stats = SearchStats()
        self.rows: list[Row] = []
        self.executor: ProcessPoolExecutor | None = None
        self.sequential_equivalent = False

    def _check_budget(self) -> None:
        if self.stats.branches > self.max_branches:
            raise BudgetExceeded(f"Branch budget of {self.max_branches} exceeded", self.stats)
        seconds = self.budget.max_seconds
        if seconds is not None and time.monotonic() - self.started > seconds:
            raise BudgetExceeded(f"Time budget of {seconds}s exceeded", self.stats)

    def _decide(self, state: ColorState, node: int, color: int) -> None:
        before = state.propagations
        state.decide(node, color)
        self.stats.decisions += 1
        self.stats.propagations += state.propagations - before

    def _row(
        self,
        state: ColorState,
        depth: int,
        assumption: tuple[Fact, ...],
        node: int,
        kind: ClaimKind,
        options: Sequence[int] = (),
        symmetric: Sequence[int] = (),
    ) -> None:
        reasons = {}
        for color in range(self.r):
            if color in options:
                continue
            if color in symmetric:
                reasons[color] = Justification.by_symmetry()
            else:
                reasons[color] = state.reasons[(node, color)]
        claim = Claim(state.constraints.values[node], kind, tuple(options))
        self.rows.append(Row(depth, assumption, claim, reasons))

    def explore(self, state: ColorState, depth: int, assumption: tuple[Fact, ...]) -> dict[Fraction, int] | None:
        values = state.constraints.values
        while True:
            self._check_budget()
            event = state.step()
            if isinstance(event, Contradiction):
                self._row(state, depth, assumption, event.node, "contradiction")
                return None
            if isinstance(event, Forced):
                node, options, symmetric = event.node, [event.color], []
            else:
                branch = state.branch_node()
                if branch is None:
                    return state.assignment()
                node = branch
                options, symmetric = state.options(node)

            if len(options) == 1:
                self._row(state, depth, assumption, node, "forcedColor", options, symmetric)
                self._decide(state, node, options[0])
                depth += 1
                assumption = (Fact(values[node], options[0]),)
                continue

            self.stats.branches += 1
            self._row(state, depth, assumption, node, "forcedSet", options, symmetric)
            if self.executor is not None:
                executor, self.executor = self.executor, None
                return self._explore_parallel(executor, state, depth + 1, node, options)
            for color in options:
                child = state.snapshot()
                self._decide(child, node, color)
                found = self.explore(child, depth + 1, (Fact(values[node], color),))
                if found is not None:
                    return found
            return None

    def _explore_parallel(
        self,
        executor: ProcessPoolExecutor,
        state: ColorState,
        depth: int,
        node: int,
        options: Sequence[int],
    ) -> dict[Fraction, int] | None:
        remaining = self.max_branches - self.stats.branches
        budget = remaining if self.sequential_equivalent else self.max_branches
        futures = []
        for color in options:
            child = state.snapshot()
            self._decide(child, node, color)
            futures.append(executor.submit(_explore_option, child, self.r, depth, node, color, self.budget, budget))
        shown = format_rational(state.constraints.values[node])
        logging.debug(f"Exploring {len(futures)} branches of c({shown}) in parallel")

        for future in futures:
            found, rows, stats, exceeded = future.result()
            self.stats.add(stats)
            if exceeded:
                raise BudgetExceeded("Budget exceeded in a parallel branch", self.stats)
            self._check_budget()
            if found is not None:
                return found
            self.rows.extend(rows)
        return None


def _explore_option(
    state: ColorState,
    r: int,
    depth: int,
    node: int,
    color: int,
    budget: Budget,
    max_branches: int,
) -> tuple[dict[Fraction, int] | None, list[Row], SearchStats, bool]:
    worker = _Search(r, budget, time.monotonic(), max_branches)
    fact = Fact(state.constraints.values[node], color)
    try:
        found = worker.explore(state, depth, (fact,))
    except BudgetExceeded:
        return None, [], worker.stats, True
    return found, worker.rows, worker.stats, False


def search(
    eq: LinearEquation,
    r: int,
    universe: NodeUniverse,
    seeds: Iterable[Seed | str] = (),
    budget: Budget | None = None,
    parallel: int = 1,
    sequential_equivalent: bool = False,
) -> Sat | Unsat:
    """
    Complete backtracking over the universe. Sat carries a full assignment
    with no monochromatic solution inside the universe; Unsat carries a
    proof tree whose first row assumes the seeds.
    """
    budget = budget or Budget()
    started = time.monotonic()
    constraints = derive_constraints(eq, universe)
    state = ColorState(constraints, r)
    facts = resolve_seeds(seeds, r)
    _apply_seeds(state, universe, facts)

    engine = _Search(r, budget, started)
    engine.stats.propagations = state.propagations
    try:
        if parallel > 1:
            with ProcessPoolExecutor(max_workers=parallel) as executor:
                engine.executor = executor
                engine.sequential_equivalent = sequential_equivalent
                found = engine.explore(state, 0, tuple(facts))
        else:
            found = engine.explore(state, 0, tuple(facts))
    except BudgetExceeded as e:
        e.stats.elapsed = time.monotonic() - started
        e.stats.rows = len(engine.rows)
        raise

    stats = engine.stats
    stats.elapsed = time.monotonic() - started
    stats.rows = len(engine.rows)
    if found is not None:
        logging.info(f"Sat over {len(universe)} nodes after {stats.branches} branches")
        return Sat(found, stats)
    logging.info(f"Unsat over {len(universe)} nodes: {stats.rows} proof rows, {stats.branches} branches")
    tree = ProofTree(eq, r, engine.rows, nondeterministic_tree=parallel > 1 and not sequential_equivalent)
    return Unsat(tree, stats)


# Enumeration
##############################################################################


@dataclass
class Enumeration:
    values: tuple[Fraction, ...]
    classes: list[tuple[int, ...]]
    stats: SearchStats

    @property
    def count(self) -> int:
        return len(self.classes)

    def to_dict(self) -> dict[str, Any]:
        return {
            "values": [format_rational(v) for v in self.values],
            "count": self.count,
            "classes": [list(colors) for colors in self.classes],
            "stats": self.stats.to_dict(),
        }


def enumerate_colorings(
    eq: LinearEquation,
    r: int,
    universe: NodeUniverse,
    budget: Budget | None = None,
) -> Enumeration:
    """
    Every coloring of the universe with at most r colors and no
    monochromatic solution inside it, one per relabeling class.

    The walk propagates forced colors, branches on a node with the fewest
    candidates and opens at most one new color per branch, so no two leaves
    are relabelings of each other. Leaves are stored as canonical strings.
    """
    budget = budget or Budget()
    started = time.monotonic()
    stats = SearchStats()
    found: set[tuple[int, ...]] = set()

    def stop(message: str) -> NoReturn:
        stats.elapsed = time.monotonic() - started
        raise BudgetExceeded(message, stats)

    stack = [ColorState(derive_constraints(eq, universe), r)]
    while stack:
        state = stack.pop()
        if budget.max_seconds is not None and time.monotonic() - started > budget.max_seconds:
            stop(f"Time budget of {budget.max_seconds}s exceeded")
        before = state.propagations
        event = propagate(state)
        stats.propagations += state.propagations - before
        if event is not None:
            continue

        node = state.branch_node()
        if node is None:
            found.add(tuple(canonicalize(state.color)))
            if len(found) > budget.max_solutions:
                stop(f"More than {budget.max_solutions} colorings")
            continue

        options, _ = state.options(node)
        if len(options) > 1:
            stats.branches += 1
            if stats.branches > budget.max_branches:
                stop(f"Branch budget of {budget.max_branches} exceeded")
        for color in reversed(options):
            child = state.snapshot()
            child.decide(node, color)
            stats.decisions += 1
            stats.propagations += child.propagations - state.propagations
            stack.append(child)

    classes = sorted(found)
    stats.elapsed = time.monotonic() - started
    logging.info(f"{len(classes)} coloring classes over {len(universe)} nodes")
    return Enumeration(universe.values, classes, stats)


def _restricted_growth(size: int, r: int) -> Iterator[tuple[int, ...]]:
    prefix: list[int] = []

    def extend(top: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == size:
            yield tuple(prefix)
            return
        for color in range(min(r, top + 2)):
            prefix.append(color)
            yield from extend(max(top, color))
            prefix.pop()

    yield from extend(-1)


def brute_force_colorings(eq: LinearEquation, r: int, values: Sequence[RationalLike]) -> list[tuple[int, ...]]:
    """
    Reference enumeration: every canonical color string over ``values`` (in
    the given order) checked against the full solution list.
    """
    ordered = [parse_rational(v) for v in values]
    index = {v: i for i, v in enumerate(ordered)}
    groups = {frozenset(index[v] for v in solution) for solution in enumerate_solutions(eq, ordered)}
    return [
        colors
        for colors in _restricted_growth(len(ordered), r)
        if all(len({colors[i] for i in group}) > 1 for group in groups)
    ]


def is_consistent(eq: LinearEquation, assignment: Mapping[Fraction, int]) -> bool:
    """True when no solution inside the assignment's domain is monochromatic"""
    values = tuple(assignment)
    spec = Explicit(values, tuple(assignment[v] for v in values))
    return find_monochromatic(spec, eq, values, limit=1).free


def lemma_fr_consistent(assignment: Mapping[Fraction, int], q: RationalLike, radius: int = 2) -> bool:
    """
    For 3-colorings free for E(q,3): c(x) = c(a^m b^n x) exactly when
    3 | m + n, checked on translates that stay inside the domain.
    """
    return not lemma_fr_violations(assignment.__getitem__, assignment.keys(), q, radius)

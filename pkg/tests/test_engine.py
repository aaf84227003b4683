"""
Tests for qcolor.engine module
"""

import random
from fractions import Fraction
from itertools import permutations

import pytest

from qcolor.colorings import C4pi, Constant, Cpn, c23_prime, canonicalize, restrict
from qcolor.config import Budget, UniverseConfig
from qcolor.engine import (
    BudgetExceeded,
    ColorState,
    Contradiction,
    EngineError,
    Forced,
    InvalidSeed,
    Sat,
    SearchStats,
    Seed,
    Unsat,
    brute_force_colorings,
    derive_constraints,
    enumerate_colorings,
    is_consistent,
    lemma_fr_consistent,
    parse_seed,
    propagate,
    resolve_seeds,
    search,
)
from qcolor.equations import LinearEquation, make_equation_E, parse_equation
from qcolor.proof import Fact, Justification, check_proof_table
from qcolor.universe import (
    NodeUniverse,
    generate_universe,
    UnsupportedPrime,
    closure_universe,
    integer_universe,
    universe_from_config,
    universe_from_values,
)
from tests.util import fractions


def _state_after(eq: LinearEquation, universe: NodeUniverse, r: int, facts: list[tuple[str | int, int]]) -> ColorState:
    trail = [(universe.index_of(node), color) for node, color in facts]
    return ColorState.replay(derive_constraints(eq, universe), r, trail)


def _assert_agrees_with_brute_force(eq: LinearEquation, r: int, universe: NodeUniverse) -> None:
    oracle = brute_force_colorings(eq, r, universe.values)
    assert enumerate_colorings(eq, r, universe).classes == oracle

    outcome = search(eq, r, universe)
    if isinstance(outcome, Sat):
        assert oracle
        colors = canonicalize(outcome.assignment[v] for v in universe.values)
        assert tuple(colors) in oracle
    else:
        assert oracle == []
        assert check_proof_table(outcome.tree).ok


class TestDeriveConstraints:
    """Test disequalities and tuple constraints"""

    def test_ratio_pairs(self, e23):
        """Test that only forbidden ratios become disequalities"""
        constraints = derive_constraints(e23, universe_from_values([1, 2, 4]))
        assert constraints.values == tuple(fractions(1, 2, 4))
        assert [(d.left, d.right, d.ratio) for d in constraints.disequalities] == [(0, 1, 2), (1, 2, 2)]
        assert constraints.tuples == []
        assert constraints.contradictions == []
        assert constraints.neighbours[1] == [(0, Fraction(1, 2)), (2, Fraction(2))]

    def test_three_node_tuple(self, schur4):
        """Test a solution on three distinct nodes"""
        constraints = derive_constraints(schur4, universe_from_values([1, 3, 8]))
        assert len(constraints.tuples) == 1
        constraint = constraints.tuples[0]
        assert constraint.nodes == (0, 1, 2)
        assert constraints.witness_values(constraint) == tuple(fractions(1, 3, 8, 3))
        assert constraints.tuples_of == [[0], [0], [0]]

    def test_single_node_solutions(self):
        """Test that x + y = 2z makes every node a contradiction"""
        eq = LinearEquation.of([1, 1, -2])
        constraints = derive_constraints(eq, universe_from_values([1, 2]))
        assert [c.nodes for c in constraints.contradictions] == [(0,), (1,)]
        assert constraints.ratios == frozenset()

    def test_unsupported_prime(self, box_23):
        """Test coefficients with primes outside the universe"""
        with pytest.raises(UnsupportedPrime):
            derive_constraints(parse_equation("1,1,-7"), box_23)


class TestColorState:
    """Test candidate sets and propagation"""

    def test_table1_first_claims(self, schur4, table1_universe):
        """Test the first two claims of the four-color proof"""
        state = _state_after(schur4, table1_universe, 4, [(1, 0), (3, 0), (2, 1), (4, 2)])
        six = table1_universe.index_of(6)
        assert state.candidate_colors(six) == [1, 3]
        assert state.reasons[(six, 0)] == Justification.by_ratio(Fraction(3), Fraction(2))
        assert state.reasons[(six, 2)] == Justification.by_ratio(Fraction(4), Fraction(3, 2))

        state.decide(six, 1)
        eight = table1_universe.index_of(8)
        assert state.candidate_colors(eight) == [3]
        assert state.reasons[(eight, 1)] == Justification.by_ratio(Fraction(6), Fraction(4, 3))
        assert state.reasons[(eight, 2)] == Justification.by_ratio(Fraction(4), Fraction(2))
        reason = state.reasons[(eight, 0)]
        assert reason.kind == "tuple"
        assert set(reason.values) == set(fractions(1, 3, 8))

    def test_propagate_to_fixpoint(self, e23):
        """Test a forced chain along ratio 2"""
        universe = universe_from_values([1, 2, 4])
        state = ColorState(derive_constraints(e23, universe), 2)
        state.decide(0, 0)
        assert propagate(state) is None
        assert state.color == [0, 1, 0]
        assert state.assignment() == dict(zip(fractions(1, 2, 4), [0, 1, 0], strict=True))

    def test_propagate_to_contradiction(self, e23):
        """Test that 1, 2, 3, 4 cannot be 2-colored"""
        universe = universe_from_values([1, 2, 3, 4])
        state = ColorState(derive_constraints(e23, universe), 2)
        state.decide(universe.index_of(1), 0)
        event = propagate(state)
        assert isinstance(event, Contradiction)
        assert universe.values[event.node] == 4
        assert not state.live

    def test_step_reports_forced_nodes(self, e23):
        universe = universe_from_values([1, 2])
        state = ColorState(derive_constraints(e23, universe), 2)
        state.decide(0, 1)
        assert state.step() == Forced(1, 0)

    def test_options_break_symmetry(self, e23):
        """Test that only one unused color is branched on"""
        state = ColorState(derive_constraints(e23, universe_from_values([1, 2, 4])), 4)
        assert state.options(0) == ([0], [1, 2, 3])
        state.decide(0, 0)
        assert state.options(1) == ([1], [2, 3])
        state.decide(1, 1)
        assert state.options(2) == ([0, 2], [3])

    def test_decide_checks_candidates(self, e23):
        state = ColorState(derive_constraints(e23, universe_from_values([1, 2])), 2)
        state.decide(0, 0)
        with pytest.raises(EngineError):
            state.decide(0, 1)
        with pytest.raises(EngineError):
            state.decide(1, 0)

    def test_snapshot_is_independent(self, e23):
        state = ColorState(derive_constraints(e23, universe_from_values([1, 2, 4])), 2)
        child = state.snapshot()
        child.decide(0, 0)
        assert state.color == [-1, -1, -1]
        assert state.candidate_colors(1) == [0, 1]

    def test_needs_a_color(self, e23):
        with pytest.raises(EngineError):
            ColorState(derive_constraints(e23, universe_from_values([1])), 0)

    def test_replay_reproduces_state(self, schur4, table1_universe):
        """Test that deciding the trail again rebuilds colors, candidates and reasons"""
        constraints = derive_constraints(schur4, table1_universe)
        state = ColorState(constraints, 4)
        for node, color in [(1, 0), (3, 0), (2, 1), (4, 2), (6, 1)]:
            index = table1_universe.index_of(node)
            if state.color[index] < 0:
                state.decide(index, color)
            assert propagate(state) is None

        replayed = ColorState.replay(constraints, 4, state.trail)
        assert len(state.trail) >= 6
        assert replayed.color == state.color
        assert replayed.candidates == state.candidates
        assert replayed.reasons == state.reasons
        assert replayed.open_count == state.open_count
        assert replayed.used == state.used


class TestSeeds:
    """Test seed parsing and resolution"""

    @pytest.mark.parametrize(
        ("text", "seed"),
        [
            ("c(1)=c(3)", Seed(tuple(fractions(1, 3)))),
            ("c(2)=1", Seed(tuple(fractions(2)), 1)),
            ("c(1) = c(3) = 0", Seed(tuple(fractions(1, 3)), 0)),
            ("c(-1/2)", Seed(tuple(fractions("-1/2")))),
        ],
    )
    def test_parse_seed(self, text, seed):
        assert parse_seed(text) == seed

    @pytest.mark.parametrize("text", ["", "x=1", "c(1)=c", "c(0)=1", "c(1)=2=3", "=1", "c(1.5)"])
    def test_parse_seed_invalid(self, text):
        with pytest.raises(InvalidSeed):
            parse_seed(text)

    def test_str(self):
        assert str(parse_seed("c(1)=c(3)=0")) == "c(1)=c(3)=0"
        assert str(parse_seed("c(1)=c(3)")) == "c(1)=c(3)"

    def test_resolve_seeds(self):
        """Test that uncolored seeds take the smallest color not seeded before"""
        facts = resolve_seeds(["c(1)=c(3)", "c(2)=1", "c(4)"], 4)
        assert facts == [Fact(Fraction(1), 0), Fact(Fraction(3), 0), Fact(Fraction(2), 1), Fact(Fraction(4), 2)]

    @pytest.mark.parametrize(
        ("seeds", "r"), [(["c(1)=0", "c(1)=1"], 2), (["c(1)=5"], 2), (["c(1)", "c(2)"], 1)]
    )
    def test_resolve_seeds_invalid(self, seeds, r):
        with pytest.raises(InvalidSeed):
            resolve_seeds(seeds, r)

    def test_seed_outside_universe(self, e23):
        with pytest.raises(InvalidSeed) as exc_info:
            search(e23, 2, universe_from_values([1, 2]), seeds=["c(3)=0"])
        assert "not in the universe" in str(exc_info.value)

    def test_seeds_against_constraints(self, e23):
        """Test seeds that a forbidden ratio already separates"""
        with pytest.raises(InvalidSeed):
            search(e23, 2, universe_from_values([1, 2]), seeds=["c(1)=c(2)"])


class TestSearch:
    """Test the prover"""

    def test_e23_two_colors(self, e23):
        """Test that E(2,3) is 2-regular over the default closure universe"""
        universe = universe_from_config(UniverseConfig(), e23)
        outcome = search(e23, 2, universe)
        assert isinstance(outcome, Unsat)
        assert outcome.tree.rows[0].assumption == ()
        assert outcome.tree.rows[0].depth == 0
        report = check_proof_table(outcome.tree)
        assert report.ok, report.to_dict()
        assert not outcome.tree.nondeterministic_tree

    def test_e23_three_colors(self, e23, box_23):
        """Test that a 3-coloring of a box exists"""
        outcome = search(e23, 3, box_23)
        assert isinstance(outcome, Sat)
        assert len(outcome.assignment) == len(box_23)
        assert set(outcome.assignment.values()) <= {0, 1, 2}
        assert is_consistent(e23, outcome.assignment)

    def test_e23_three_colors_is_cpn(self, e23):
        """Test that the 3-coloring found for E(2,3) is c_{2,3} up to relabeling"""
        universe = universe_from_config(UniverseConfig(), e23)
        outcome = search(e23, 3, universe)
        assert isinstance(outcome, Sat)
        found = canonicalize(outcome.assignment[v] for v in universe.values)
        assert found == canonicalize(restrict(Cpn(2, 3), universe.values))

    def test_universal_contradiction(self):
        """Test a proof made of a single contradiction row"""
        eq = LinearEquation.of([1, 1, -2])
        outcome = search(eq, 3, universe_from_values([1, 2]))
        assert isinstance(outcome, Unsat)
        assert [row.claim.kind for row in outcome.tree.rows] == ["contradiction"]
        assert check_proof_table(outcome.tree).ok

    def test_table1_seed(self, schur4, table1_universe):
        """Test that c(1) = c(3) cannot extend to a 4-coloring"""
        outcome = search(schur4, 4, table1_universe, seeds=["c(1)=c(3)"], budget=Budget(max_branches=10**6))
        assert isinstance(outcome, Unsat)
        assert outcome.tree.rows[0].assumption == (Fact(Fraction(1), 0), Fact(Fraction(3), 0))
        report = check_proof_table(outcome.tree)
        assert report.ok, report.to_dict()

    def test_deterministic(self, schur4, table1_universe):
        """Test that repeated runs produce the same tree"""
        first = search(schur4, 4, table1_universe, seeds=["c(1)=c(3)"])
        second = search(schur4, 4, table1_universe, seeds=["c(1)=c(3)"])
        assert isinstance(first, Unsat)
        assert isinstance(second, Unsat)
        assert first.tree.to_dict() == second.tree.to_dict()

    def test_time_budget(self, e23):
        """Test that an exhausted budget raises with statistics"""
        universe = universe_from_config(UniverseConfig(), e23)
        with pytest.raises(BudgetExceeded) as exc_info:
            search(e23, 2, universe, budget=Budget(max_seconds=0))
        assert isinstance(exc_info.value.stats, SearchStats)
        assert "Time budget" in str(exc_info.value)

    def test_to_dict(self, e23):
        universe = universe_from_values([1, 2, 4])
        sat = search(e23, 2, universe)
        assert isinstance(sat, Sat)
        data = sat.to_dict()
        assert data["result"] == "sat"
        assert set(data["assignment"]) == {"1", "2", "4"}
        assert set(data["stats"]) == {"branches", "decisions", "propagations", "rows", "elapsed"}

        unsat = search(e23, 2, universe_from_values([1, 2, 3, 4]))
        assert isinstance(unsat, Unsat)
        assert unsat.to_dict()["proof"]["colors"] == 2

    @pytest.mark.slow
    def test_schur4_three_colors(self, schur4):
        """Test that x1 + x2 + x3 = 4x4 is 3-regular over the default closure universe"""
        universe = universe_from_config(UniverseConfig(), schur4)
        outcome = search(schur4, 3, universe)
        assert isinstance(outcome, Unsat)
        assert check_proof_table(outcome.tree).ok

    @pytest.mark.slow
    def test_parallel_matches_sequential(self, schur4, table1_universe):
        """Test that merged worker trees equal the sequential tree"""
        sequential = search(schur4, 4, table1_universe, seeds=["c(1)=c(3)"])
        merged = search(schur4, 4, table1_universe, seeds=["c(1)=c(3)"], parallel=2, sequential_equivalent=True)
        loose = search(schur4, 4, table1_universe, seeds=["c(1)=c(3)"], parallel=2)
        assert isinstance(sequential, Unsat)
        assert isinstance(merged, Unsat)
        assert isinstance(loose, Unsat)
        assert merged.tree.to_dict() == sequential.tree.to_dict()
        assert loose.tree.nondeterministic_tree
        assert loose.tree.rows == sequential.tree.rows
        assert check_proof_table(loose.tree).ok


class TestFourColorConsequences:
    """Consequences every solution-free 4-coloring of x1 + x2 + x3 = 4x4 must have"""

    def test_builtin_universe(self, four_color_universe, table1_universe):
        """Test that the packaged closure holds every value the shipped proof uses"""
        assert set(table1_universe.values) <= set(four_color_universe.values)
        assert len(four_color_universe) == 177
        assert all(v > 0 for v in four_color_universe.values)

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "seeds",
        [["c(1)=c(3)"], ["c(1)=c(4)"], ["c(1)=0", "c(6)=1"]],
        ids=["x-3x", "x-4x", "x-6x"],
    )
    def test_seeded_claims_are_unsat(self, schur4, four_color_universe, seeds):
        """Test c(x) != c(3x), c(x) != c(4x) and c(x) = c(6x) on the packaged universe"""
        outcome = search(schur4, 4, four_color_universe, seeds=seeds, budget=Budget(max_branches=10**6))
        assert isinstance(outcome, Unsat)
        assert outcome.stats.branches <= 10**6
        report = check_proof_table(outcome.tree)
        assert report.ok, report.to_dict()

    @pytest.mark.parametrize("fives", list(permutations(range(4))))
    def test_negation_matches_four_times(self, schur4, fives):
        """Test that c(-x) is forced to c(4x) once the positive classes are known"""
        known = {1: 0, 6: 0, 2: 1, "3/4": 1, 3: 2, 8: 2, 18: 2, "27/4": 2, 4: 3}
        known.update(zip([5, 10, 15, 20], fives, strict=True))
        universe = universe_from_values([*known, -1])
        state = _state_after(schur4, universe, 4, list(known.items()))
        assert state.candidate_colors(universe.index_of(-1)) == [3]

    @pytest.mark.parametrize("fives", list(permutations(range(4))))
    def test_seven_matches_two(self, schur4, fives):
        """Test that c(7x) is forced to c(2x), as 7 = 2 mod 5"""
        known = {1: 0, -4: 0, 2: 1, 3: 2, -2: 2, 4: 3, "3/2": 3, -16: 3, -6: 3, "-9/4": 3, "-8/3": 3}
        known.update(zip([5, 10, 15, 20], fives, strict=True))
        known.update({"5/3": known[10], "5/4": known[20]})
        universe = universe_from_values([*known, 7])
        state = _state_after(schur4, universe, 4, list(known.items()))
        assert state.candidate_colors(universe.index_of(7)) == [1]


class TestEnumerate:
    """Test enumeration of colorings up to relabeling"""

    def test_alternating(self):
        """Test x = 2y on 1, 2, 4"""
        eq = LinearEquation.of([1, -2])
        universe = universe_from_values([1, 2, 4])
        assert enumerate_colorings(eq, 2, universe).classes == [(0, 1, 0)]
        assert enumerate_colorings(eq, 1, universe).classes == []
        assert brute_force_colorings(eq, 2, universe.values) == [(0, 1, 0)]

    def test_integers_match_brute_force(self, e23):
        """Test E(2,3) on 1..12 against the oracle, with both integer colorings present"""
        universe = integer_universe(12)
        enumeration = enumerate_colorings(e23, 3, universe)
        assert enumeration.classes == brute_force_colorings(e23, 3, universe.values)
        assert tuple(restrict(Cpn(2, 3), universe.values)) in enumeration.classes
        assert tuple(restrict(c23_prime(), universe.values)) in enumeration.classes

    def test_classes_are_canonical(self, e23, small_values):
        enumeration = enumerate_colorings(e23, 3, small_values)
        assert enumeration.count == len(enumeration.classes) > 0
        for colors in enumeration.classes:
            assert list(colors) == canonicalize(colors)
            assignment = dict(zip(small_values.values, colors, strict=True))
            assert is_consistent(e23, assignment)

    def test_c4pi_restrictions(self):
        """Test that the six C4pi colorings give six classes for x + 4y = 16z"""
        eq = make_equation_E(4, 3)
        universe = generate_universe([2], {2: (-2, 5)}, include_negatives=False)
        enumeration = enumerate_colorings(eq, 3, universe)
        assert enumeration.classes == brute_force_colorings(eq, 3, universe.values)
        restrictions = {tuple(restrict(C4pi(pi), universe.values)) for pi in permutations(range(3))}
        assert len(restrictions) == 6
        assert restrictions <= set(enumeration.classes)
        assert enumeration.count >= 6

    def test_to_dict(self, e23):
        enumeration = enumerate_colorings(e23, 2, universe_from_values([1, 2, 4]))
        data = enumeration.to_dict()
        assert data["values"] == ["1", "2", "4"]
        assert data["count"] == 1
        assert data["classes"] == [[0, 1, 0]]

    def test_solution_budget(self, e23):
        with pytest.raises(BudgetExceeded):
            enumerate_colorings(e23, 2, universe_from_values([1, 2, 4]), Budget(max_solutions=0))

    def test_branch_budget(self, e23):
        with pytest.raises(BudgetExceeded) as exc_info:
            enumerate_colorings(e23, 3, integer_universe(12), Budget(max_branches=1))
        assert exc_info.value.stats.branches == 2

    @pytest.mark.slow
    def test_oracle_equivalence(self):
        """Test search and enumeration against brute force on random small universes"""
        rng = random.Random(424242)
        pool = [
            Fraction(sign * 2**a * 3**b)
            for sign in (1, -1)
            for a in range(-2, 3)
            for b in range(-2, 3)
        ]
        equations = [
            make_equation_E(2, 3),
            make_equation_E("3/2", 3),
            parse_equation("1,1,1,-4"),
            parse_equation("1,2,-3"),
            parse_equation("1,-2"),
            parse_equation("1,1,-2"),
        ]
        for _ in range(100):
            eq = rng.choice(equations)
            r = rng.randint(1, 3)
            universe = universe_from_values(rng.sample(pool, rng.randint(2, 11)), [2, 3])
            _assert_agrees_with_brute_force(eq, r, universe)

    @pytest.mark.slow
    def test_e32_closure_contains_valuation_colorings(self):
        """Test E(3/2,3) with three colors on the closure over 2, 3 and 5 with exponents up to 3"""
        eq = make_equation_E("3/2", 3)
        bounds = {2: (-3, 3), 3: (-3, 3), 5: (-3, 3)}
        universe = closure_universe(eq, [2, 3, 5], bounds, include_negatives=False, rounds=3)
        assert len(universe) > 12
        enumeration = enumerate_colorings(eq, 3, universe)
        assert enumeration.stats.propagations > 0
        assert tuple(restrict(Cpn(2, 3), universe.values)) in enumeration.classes
        assert tuple(restrict(Cpn(3, 3), universe.values)) in enumeration.classes

        sub = universe_from_values(universe.values[:12], universe.primes)
        _assert_agrees_with_brute_force(eq, 3, sub)

    @pytest.mark.slow
    def test_positive_integers(self, e23):
        """Test that both integer colorings survive on 1..40"""
        universe = integer_universe(40)
        enumeration = enumerate_colorings(e23, 3, universe)
        assert tuple(restrict(Cpn(2, 3), universe.values)) in enumeration.classes
        assert tuple(restrict(c23_prime(), universe.values)) in enumeration.classes


class TestConsistency:
    """Test the assignment checks"""

    def test_is_consistent(self):
        eq = LinearEquation.of([1, -2])
        assert not is_consistent(eq, dict(zip(fractions(1, 2, 4), [0, 0, 1], strict=True)))
        assert is_consistent(eq, dict(zip(fractions(1, 2, 4), [0, 1, 0], strict=True)))

    def test_lemma_fr_consistent(self, box_23):
        """Test the period-three rule on assignments"""
        assert lemma_fr_consistent({q: Cpn(2, 3).color(q) for q in box_23.values}, 2)
        assert not lemma_fr_consistent({q: Constant(0).color(q) for q in box_23.values}, 2)

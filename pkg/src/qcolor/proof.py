"""
Proof trees in the Assumptions / Claim / Why-not-k layout, their checker
and their JSON and LaTeX renderings.

A tree is a pre-order list of rows. Row depth d > 0 hangs below the nearest
earlier row at depth d - 1, and its assumption is one of the colors that
parent claims for its node. The facts in force at a row are the assumptions
along its path from the root.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Literal

from qcolor.config import BUILTIN_PROOFS, ConfigError, resolve_builtin, validate_document
from qcolor.equations import EquationError, LinearEquation, ratio_set
from qcolor.ratcore import RatcoreError, format_rational, parse_rational

ClaimKind = Literal["forcedSet", "forcedColor", "contradiction"]
ReasonKind = Literal["ratio", "tuple", "seed"]
ExportFormat = Literal["json", "latex"]


class ProofError(Exception):
    """Base exception for proof documents"""

    pass


class MalformedProof(ProofError):
    """Raised when a proof document cannot be parsed into a tree"""

    pass


class RefusedExport(ProofError):
    """Raised when exporting a tree that does not pass the checker"""

    def __init__(self, message: str, report: "ValidationReport") -> None:
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Fact:
    node: Fraction
    color: int

    def to_dict(self) -> dict[str, Any]:
        return {"node": format_rational(self.node), "color": self.color}


@dataclass(frozen=True)
class Justification:
    """
    Why a color is excluded from a claim's node x.

    ratio: c(node) equals that color and node * ratio = x.
    tuple: ``values`` solve the equation, contain x, and every other value
    carries that color.
    seed: the color is unused so far and a smaller unused color is tried.
    """

    kind: ReasonKind
    node: Fraction | None = None
    ratio: Fraction | None = None
    values: tuple[Fraction, ...] = ()

    @classmethod
    def by_ratio(cls, node: Fraction, ratio: Fraction) -> "Justification":
        return cls("ratio", node=node, ratio=ratio)

    @classmethod
    def by_tuple(cls, values: tuple[Fraction, ...]) -> "Justification":
        return cls("tuple", values=values)

    @classmethod
    def by_symmetry(cls) -> "Justification":
        return cls("seed")

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "ratio" and self.node is not None and self.ratio is not None:
            return {"kind": "ratio", "node": format_rational(self.node), "ratio": format_rational(self.ratio)}
        if self.kind == "tuple":
            return {"kind": "tuple", "values": [format_rational(v) for v in self.values]}
        return {"kind": "seed"}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Justification":
        kind = data["kind"]
        if kind == "ratio":
            return cls.by_ratio(parse_rational(data["node"]), parse_rational(data["ratio"]))
        if kind == "tuple":
            return cls.by_tuple(tuple(parse_rational(v) for v in data["values"]))
        return cls.by_symmetry()


@dataclass(frozen=True)
class Claim:
    node: Fraction
    kind: ClaimKind
    colors: tuple[int, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {"node": format_rational(self.node), "kind": self.kind, "colors": list(self.colors)}


@dataclass
class Row:
    depth: int
    assumption: tuple[Fact, ...]
    claim: Claim
    reasons: dict[int, Justification] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "depth": self.depth,
            "assumption": [fact.to_dict() for fact in self.assumption],
            "claim": self.claim.to_dict(),
            "reasons": {str(color): self.reasons[color].to_dict() for color in sorted(self.reasons)},
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Row":
        claim = data["claim"]
        return cls(
            depth=int(data["depth"]),
            assumption=tuple(Fact(parse_rational(f["node"]), int(f["color"])) for f in data["assumption"]),
            claim=Claim(parse_rational(claim["node"]), claim["kind"], tuple(int(c) for c in claim["colors"])),
            reasons={int(k): Justification.from_dict(v) for k, v in data["reasons"].items()},
        )


@dataclass
class ProofTree:
    equation: LinearEquation
    colors: int
    rows: list[Row] = field(default_factory=list)
    nondeterministic_tree: bool = False

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "equation": self.equation.to_list(),
            "colors": self.colors,
            "rows": [row.to_dict() for row in self.rows],
        }
        if self.nondeterministic_tree:
            data["nondeterministicTree"] = True
        return data

    @classmethod
    def from_dict(cls, data: Any, source: str = "<proof>") -> "ProofTree":
        try:
            validate_document(data, "proofTree", source)
        except ConfigError as e:
            raise MalformedProof(str(e)) from e
        try:
            return cls(
                equation=LinearEquation.of(data["equation"]),
                colors=int(data["colors"]),
                rows=[Row.from_dict(row) for row in data["rows"]],
                nondeterministic_tree=bool(data.get("nondeterministicTree", False)),
            )
        except (RatcoreError, EquationError) as e:
            raise MalformedProof(f"Invalid proof document '{source}': {e}") from e

    @classmethod
    def load(cls, path: str | Path) -> "ProofTree":
        path = resolve_builtin(path, BUILTIN_PROOFS)
        try:
            with Path(path).open(encoding="utf-8") as f:
                data = json.load(f)
        except OSError as e:
            raise MalformedProof(f"Could not read proof file '{path}': {e}") from e
        except ValueError as e:
            raise MalformedProof(f"Invalid JSON in proof file '{path}': {e}") from e
        return cls.from_dict(data, str(path))


def load_table1() -> ProofTree:
    """The shipped transcription of the four-color proof that c(x) != c(3x) for [1,1,1,-4]"""
    return ProofTree.load(BUILTIN_PROOFS["table1"])


# Checking
##############################################################################

ViolationCode = Literal["structure", "arithmetic", "premise", "ratio", "exhaustiveness", "coverage", "symmetry"]


@dataclass(frozen=True)
class Violation:
    row: int
    code: ViolationCode
    message: str

    def to_dict(self) -> dict[str, Any]:
        return {"row": self.row, "code": self.code, "message": self.message}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    rows: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "rows": self.rows, "violations": [v.to_dict() for v in self.violations]}


class _Checker:
    def __init__(self, tree: ProofTree, eq: LinearEquation, r: int) -> None:
        self.tree = tree
        self.eq = eq
        self.r = r
        self.ratios = ratio_set(eq)
        self.violations: list[Violation] = []

    def flag(self, row: int, code: ViolationCode, message: str) -> None:
        self.violations.append(Violation(row, code, message))

    def run(self) -> list[Violation]:
        rows = self.tree.rows
        if self.tree.colors != self.r:
            self.flag(-1, "structure", f"Tree is for {self.tree.colors} colors, checked against {self.r}")
        if self.tree.equation != self.eq:
            self.flag(-1, "structure", f"Tree is for {self.tree.equation}, checked against {self.eq}")

        path: list[int] = []
        path_facts: list[dict[Fraction, int]] = []
        children: dict[int, list[int]] = {}
        usable: set[int] = set()

        for index, row in enumerate(rows):
            if row.depth == 0 and index > 0:
                self.flag(index, "structure", "Only the first row may sit at depth 0")
                continue
            if row.depth > len(path) or (index == 0 and row.depth != 0):
                self.flag(index, "structure", f"Row at depth {row.depth} has no parent")
                continue
            del path[row.depth :]
            del path_facts[row.depth :]

            facts = dict(path_facts[-1]) if path_facts else {}
            if row.depth > 0:
                parent_index = path[-1]
                if not self._check_child(index, row, rows[parent_index]):
                    continue
                children.setdefault(parent_index, []).append(index)
            if not self._add_facts(index, row, facts):
                continue

            self._check_claim(index, row, facts)
            path.append(index)
            path_facts.append(facts)
            usable.add(index)

        for index in sorted(usable):
            self._check_exhaustive(index, rows[index], [rows[c] for c in children.get(index, [])])
        return self.violations

    def _check_child(self, index: int, row: Row, parent: Row) -> bool:
        if parent.claim.kind == "contradiction":
            self.flag(index, "structure", "A contradiction row cannot have children")
            return False
        if len(row.assumption) != 1:
            self.flag(index, "structure", "A child row must assume exactly one fact")
            return False
        fact = row.assumption[0]
        if fact.node != parent.claim.node or fact.color not in parent.claim.colors:
            self.flag(
                index,
                "structure",
                f"Assumption c({format_rational(fact.node)}) = {fact.color} is not an option of its parent's claim",
            )
            return False
        return True

    def _add_facts(self, index: int, row: Row, facts: dict[Fraction, int]) -> bool:
        for fact in row.assumption:
            if not 0 <= fact.color < self.r:
                self.flag(index, "structure", f"Color {fact.color} is out of range")
                return False
            known = facts.setdefault(fact.node, fact.color)
            if known != fact.color:
                self.flag(index, "premise", f"c({format_rational(fact.node)}) is assumed both {known} and {fact.color}")
                return False
        return True

    def _check_claim(self, index: int, row: Row, facts: dict[Fraction, int]) -> None:
        claim = row.claim
        options = set(claim.colors)
        if len(options) != len(claim.colors) or not options <= set(range(self.r)):
            self.flag(index, "structure", f"Claim colors {list(claim.colors)} are repeated or out of range")
            return
        expected = {"contradiction": (0, 0), "forcedColor": (1, 1), "forcedSet": (1, self.r)}[claim.kind]
        if not expected[0] <= len(options) <= expected[1]:
            self.flag(index, "structure", f"A {claim.kind} claim cannot list {len(options)} colors")
            return

        for color in range(self.r):
            reason = row.reasons.get(color)
            if color in options:
                if reason is not None:
                    self.flag(index, "coverage", f"Color {color} is both claimed and excluded")
                continue
            if reason is None:
                self.flag(index, "coverage", f"No reason excludes color {color}")
                continue
            self._check_reason(index, claim, color, reason, facts)

        for color in row.reasons:
            if not 0 <= color < self.r:
                self.flag(index, "coverage", f"Reason given for color {color} outside 0..{self.r - 1}")

    def _check_reason(
        self,
        index: int,
        claim: Claim,
        color: int,
        reason: Justification,
        facts: dict[Fraction, int],
    ) -> None:
        x = claim.node
        if reason.kind == "ratio":
            if reason.node is None or reason.ratio is None:
                self.flag(index, "structure", "A ratio reason needs a node and a ratio")
                return
            y, ratio = reason.node, reason.ratio
            if ratio not in self.ratios:
                self.flag(index, "ratio", f"{format_rational(ratio)} is not a forbidden ratio")
            if y * ratio != x:
                self.flag(
                    index,
                    "arithmetic",
                    f"{format_rational(y)} * {format_rational(ratio)} != {format_rational(x)}",
                )
            if facts.get(y) != color:
                self.flag(index, "premise", f"c({format_rational(y)}) = {color} is not among the facts")
            return

        if reason.kind == "tuple":
            values = reason.values
            shown = "(" + ",".join(format_rational(v) for v in values) + ")"
            if len(values) != self.eq.arity or any(v == 0 for v in values):
                self.flag(index, "arithmetic", f"{shown} is not a tuple of {self.eq.arity} nonzero values")
                return
            if self.eq.evaluate(values) != 0:
                self.flag(index, "arithmetic", f"{shown} does not solve {self.eq}")
            if x not in values:
                self.flag(index, "premise", f"{shown} does not contain {format_rational(x)}")
            for v in set(values) - {x}:
                if facts.get(v) != color:
                    self.flag(index, "premise", f"c({format_rational(v)}) = {color} is not among the facts")
            return

        used = set(facts.values())
        if claim.kind == "contradiction":
            self.flag(index, "symmetry", "Symmetry cannot exclude a color in a contradiction")
        elif color in used:
            self.flag(index, "symmetry", f"Color {color} is already in use")
        elif not any(k < color and k not in used for k in claim.colors):
            self.flag(index, "symmetry", f"No smaller unused color is tried in place of {color}")

    def _check_exhaustive(self, index: int, row: Row, children: list[Row]) -> None:
        if row.claim.kind == "contradiction":
            return
        covered = [child.assumption[0].color for child in children]
        if len(covered) != len(set(covered)):
            self.flag(index, "exhaustiveness", "A color is explored by more than one branch")
        missing = sorted(set(row.claim.colors) - set(covered))
        if missing:
            self.flag(index, "exhaustiveness", f"No branch for colors {missing}")


def check_proof_table(tree: ProofTree, eq: LinearEquation | None = None, r: int | None = None) -> ValidationReport:
    """
    Check every row of ``tree`` against ``eq`` with ``r`` colors (the tree's
    own equation and color count by default). Problems come back as
    violations; nothing is raised for malformed trees.
    """
    eq = eq or tree.equation
    r = tree.colors if r is None else r
    violations = _Checker(tree, eq, r).run()
    logging.debug(f"Checked {len(tree.rows)} rows: {len(violations)} violations")
    return ValidationReport(violations=violations, rows=len(tree.rows))


# Export
##############################################################################


def _latex_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    sign = "-" if q < 0 else ""
    return f"{sign}\\myfrac{{{abs(q.numerator)}}}{{{q.denominator}}}"


def _latex_reason(x: Fraction, reason: Justification) -> str:
    if reason.kind == "ratio" and reason.node is not None and reason.ratio is not None:
        return f"${_latex_rational(reason.node)}\\cdot{_latex_rational(reason.ratio)} = {_latex_rational(x)}$"
    if reason.kind == "tuple":
        return "$(" + ",".join(_latex_rational(v) for v in reason.values) + ")$"
    return "sym."


def _latex_assumption(facts: tuple[Fact, ...]) -> str:
    groups: dict[int, list[Fraction]] = {}
    for fact in facts:
        groups.setdefault(fact.color, []).append(fact.node)
    parts = []
    for color, nodes in groups.items():
        chain = "=".join(f"c({_latex_rational(node)})" for node in nodes)
        parts.append(f"{chain}={color}" if len(nodes) > 1 else f"{chain} = {color}")
    return "$" + ", ".join(parts) + "$" if parts else ""


def _latex_row(row: Row, r: int) -> str:
    claim = row.claim
    indent = "\\hspace{1em}" * max(row.depth - 1, 0)
    assumption = _latex_assumption(row.assumption)
    if indent:
        assumption = f"{indent} {assumption}"
    node = f"$c({_latex_rational(claim.node)})$"
    if claim.kind == "contradiction":
        relation, colors = "!?", "$ $"
    elif claim.kind == "forcedColor":
        relation, colors = "${}={}$", f"${claim.colors[0]}$"
    else:
        relation, colors = "${}\\in{}$", "$\\{" + ",".join(str(c) for c in claim.colors) + "\\}$"
    cells = [assumption, node, relation, colors]
    cells.extend(_latex_reason(claim.node, row.reasons[k]) if k in row.reasons else "" for k in range(r))
    return "      " + " & ".join(cells) + r" \\ \hline"


def to_latex(tree: ProofTree) -> str:
    if not tree.rows:
        return ""
    r = tree.colors
    header = ["Assumptions", r"\multicolumn{3}{|l|}{Claim}", *(f"Why not {k}" for k in range(r))]
    lines = [
        r"\providecommand{\myfrac}[2]{\ensuremath{\frac{#1}{#2}}}",
        r"\begin{tabular}{|l|r@{}c@{}l|" + "l|" * r + r"} \hline",
        "      " + " & ".join(header) + r" \\ \hline",
        *(_latex_row(row, r) for row in tree.rows),
        r"\end{tabular}",
    ]
    return "\n".join(lines) + "\n"


def export_proof(tree: ProofTree, fmt: ExportFormat = "json") -> str:
    """
    Render a checked tree as JSON (lossless) or as a LaTeX tabular.
    An empty tree renders as an empty document.
    """
    report = check_proof_table(tree)
    if not report.ok:
        raise RefusedExport(f"Refusing to export a proof with {len(report.violations)} violations", report)
    if fmt == "latex":
        return to_latex(tree)
    if fmt != "json":
        raise ProofError(f"Unknown export format '{fmt}'")
    return json.dumps(tree.to_dict(), indent=4, ensure_ascii=False) + "\n"


def parse_proof(document: str, source: str = "<proof>") -> ProofTree:
    """Inverse of the JSON export"""
    try:
        data = json.loads(document)
    except ValueError as e:
        raise MalformedProof(f"Invalid JSON in '{source}': {e}") from e
    return ProofTree.from_dict(data, source)

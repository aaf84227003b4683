"""
Catalog of colorings of the nonzero rationals.

Every variant is a frozen dataclass with a ``color(q)`` method and a JSON
form tagged by ``variant``. Scans for monochromatic solutions always report
the finite set they covered; nothing here claims freeness over all of Q.
"""

import logging
import random
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, ClassVar

from qcolor.equations import LinearEquation, canonical_order, lemma_fr_generators, solution_indices
from qcolor.ratcore import (
    RatcoreError,
    RationalLike,
    format_rational,
    parse_rational,
    require_prime,
    v_p,
    w_p,
)


class ColoringError(ValueError):
    """Base exception for coloring errors"""

    pass


class UndefinedColor(ColoringError):
    """Raised when a coloring is evaluated outside its domain (zero included)"""

    pass


class InvalidColoringSpec(ColoringError):
    """Raised for malformed coloring parameters"""

    pass


def _nonzero(q: RationalLike) -> Fraction:
    value = parse_rational(q)
    if value == 0:
        raise UndefinedColor("Colorings are defined on the nonzero rationals only")
    return value


def _check_prime(p: int, odd: bool = False) -> None:
    try:
        require_prime(p)
    except RatcoreError as e:
        raise InvalidColoringSpec(str(e)) from e
    if odd and p == 2:
        raise InvalidColoringSpec("An odd prime is required")


def _check_permutation(perm: Sequence[int], symbols: range, what: str) -> tuple[int, ...]:
    perm = tuple(int(x) for x in perm)
    if sorted(perm) != list(symbols):
        raise InvalidColoringSpec(f"{what} is not a permutation of {symbols.start}..{symbols.stop - 1}: {list(perm)}")
    return perm


class ColoringSpec:
    """Base class of the coloring catalog"""

    variant: ClassVar[str] = ""
    summary: ClassVar[str] = ""
    parameters: ClassVar[tuple[str, ...]] = ()

    def color(self, q: Fraction) -> int:
        raise NotImplementedError

    @property
    def num_colors(self) -> int:
        raise NotImplementedError

    def _params(self) -> dict[str, Any]:
        raise NotImplementedError

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant, **self._params()}

    @classmethod
    def _from_params(cls, data: Mapping[str, Any]) -> "ColoringSpec":
        raise NotImplementedError


@dataclass(frozen=True)
class Cpn(ColoringSpec):
    p: int
    n: int

    variant: ClassVar[str] = "Cpn"
    summary: ClassVar[str] = "v_p(q) mod n"
    parameters: ClassVar[tuple[str, ...]] = ("p", "n")

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if self.n < 2:
            raise InvalidColoringSpec(f"Cpn needs at least two colors, got {self.n}")

    def color(self, q: Fraction) -> int:
        return v_p(_nonzero(q), self.p) % self.n

    @property
    def num_colors(self) -> int:
        return self.n

    def _params(self) -> dict[str, Any]:
        return {"p": self.p, "n": self.n}

    @classmethod
    def _from_params(cls, data: Mapping[str, Any]) -> "Cpn":
        return cls(int(data["p"]), int(data["n"]))


@dataclass(frozen=True)
class Cpvn(ColoringSpec):
    p: int
    v: int
    n: int

    variant: ClassVar[str] = "Cpvn"
    summary: ClassVar[str] = "floor(v_p(q) / v) mod n, floor toward -infinity"
    parameters: ClassVar[tuple[str, ...]] = ("p", "v", "n")

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if self.v == 0:
            raise InvalidColoringSpec("Cpvn needs a nonzero block length v")
        if self.n < 2:
            raise InvalidColoringSpec(f"Cpvn needs at least two colors, got {self.n}")

    def color(self, q: Fraction) -> int:
        return (v_p(_nonzero(q), self.p) // self.v) % self.n

    @property
    def num_colors(self) -> int:
        return self.n

    def _params(self) -> dict[str, Any]:
        return {"p": self.p, "v": self.v, "n": self.n}

    @classmethod
    def _from_params(cls, data: Mapping[str, Any]) -> "Cpvn":
        return cls(int(data["p"]), int(data["v"]), int(data["n"]))


@dataclass(frozen=True)
class CapCp(ColoringSpec):
    p: int

    variant: ClassVar[str] = "CapCp"
    summary: ClassVar[str] = "w_p(q), colors 1..p-1"
    parameters: ClassVar[tuple[str, ...]] = ("p",)

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if self.p == 2:
            raise InvalidColoringSpec("CapCp with p = 2 has a single color")

    def color(self, q: Fraction) -> int:
        return w_p(_nonzero(q), self.p)

    @property
    def num_colors(self) -> int:
        return self.p - 1

    def _params(self) -> dict[str, Any]:
        return {"p": self.p}

    @classmethod
    def _from_params(cls, data: Mapping[str, Any]) -> "CapCp":
        return cls(int(data["p"]))


@dataclass(frozen=True)
class CPi(ColoringSpec):
    """pi_level(w_p(q)) with level = v_p(q); levels outside the window use the identity"""

    p: int
    window: dict[int, tuple[int, ...]] = field(default_factory=dict)

    variant: ClassVar[str] = "CPi"
    summary: ClassVar[str] = "pi_{v_p(q)}(w_p(q)) for a window of permutations of 1..p-1"
    parameters: ClassVar[tuple[str, ...]] = ("p", "window")

    def __post_init__(self) -> None:
        _check_prime(self.p, odd=True)
        symbols = range(1, self.p)
        window = {}
        for level, perm in self.window.items():
            checked = _check_permutation(perm, symbols, f"CPi level {level}")
            if level == 0 and checked != tuple(symbols):
                raise InvalidColoringSpec("CPi must use the identity permutation at level 0")
            window[int(level)] = checked
        object.__setattr__(self, "window", window)

    def color(self, q: Fraction) -> int:
        q = _nonzero(q)
        w = w_p(q, self.p)
        perm = self.window.get(v_p(q, self.p))
        return perm[w - 1] if perm else w

    @property
    def num_colors(self) -> int:
        return self.p - 1

    def _params(self) -> dict[str, Any]:
        return {"p": self.p, "window": {str(k): list(v) for k, v in sorted(self.window.items())}}

    @classmethod
    def _from_params(cls, data: Mapping[str, Any]) -> "CPi":
        window = {int(k): tuple(v) for k, v in (data.get("window") or {}).items()}
        return cls(int(data["p"]), window)


@dataclass(frozen=True)
class C4pi(ColoringSpec):
    """
    Three colors from v_2: even valuations v get color i with v = 2i (mod 6),
    odd valuations get pi applied to the color of 2q.
    """

    pi: tuple[int, int, int] = (0, 1, 2)

    variant: ClassVar[str] = "C4pi"
    summary: ClassVar[str] = "(v_2 mod 6)/2 on even v_2, pi(c(2q)) on odd v_2"
    parameters: ClassVar[tuple[str, ...]] = ("pi",)

    def __post_init__(self) -> None:
        object.__setattr__(self, "pi", _check_permutation(self.pi, range(3), "C4pi permutation"))

    def color(self, q: Fraction) -> int:
        v = v_p(_nonzero(q), 2)
        if v % 2 == 0:
            return (v % 6) // 2
        return self.pi[((v + 1) % 6) // 2]

    @property
    def num_colors(self) -> int:
        return 3

    def _params(self) -> dict[str, Any]:
        return {"pi": list(self.pi)}

    @classmethod
    def _from_params(cls, data: Mapping[str, Any]) -> "C4pi":
        return cls(tuple(data["pi"]))  # type: ignore[arg-type]


@dataclass(frozen=True)
class OddPrimeFamily(ColoringSpec):
    """
    sigma_k(v_p(q) mod n) where k = min(w, p - w) for w = w_p(q).

    The class k = 1 is pinned to the identity; every other residue-pair class
    carries its own permutation of 0..n-1.
    """

    p: int
    n: int
    pair_class_permutations: dict[int, tuple[int, ...]] = field(default_factory=dict)

    variant: ClassVar[str] = "OddPrimeFamily"
    summary: ClassVar[str] = "sigma_{+-w_p(q)}(v_p(q) mod n), one permutation per residue pair"
    parameters: ClassVar[tuple[str, ...]] = ("p", "n", "pairClassPermutations")

    def __post_init__(self) -> None:
        _check_prime(self.p, odd=True)
        if self.n < 2:
            raise InvalidColoringSpec(f"OddPrimeFamily needs at least two colors, got {self.n}")
        symbols = range(self.n)
        perms = {}
        for k, perm in self.pair_class_permutations.items():
            k = int(k)
            if not 1 <= k <= (self.p - 1) // 2:
                raise InvalidColoringSpec(f"Residue pair class {k} is out of range for p = {self.p}")
            checked = _check_permutation(perm, symbols, f"Class {k} permutation")
            if k == 1 and checked != tuple(symbols):
                raise InvalidColoringSpec("The residue class of 1 must use the identity permutation")
            perms[k] = checked
        object.__setattr__(self, "pair_class_permutations", perms)

    def color(self, q: Fraction) -> int:
        q = _nonzero(q)
        w = w_p(q, self.p)
        level = v_p(q, self.p) % self.n
        perm = self.pair_class_permutations.get(min(w, self.p - w))
        return perm[level] if perm else level

    @property
    def num_colors(self) -> int:
        return self.n

    def _params(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "n": self.n,
            "pairClassPermutations": {str(k): list(v) for k, v in sorted(self.pair_class_permutations.items())},
        }

    @classmethod
    def _from_params(cls, data: Mapping[str, Any]) -> "OddPrimeFamily":
        perms = {int(k): tuple(v) for k, v in (data.get("pairClassPermutations") or {}).items()}
        return cls(int(data["p"]), int(data["n"]), perms)


@dataclass(frozen=True)
class Explicit(ColoringSpec):
    domain: tuple[Fraction, ...]
    colors: tuple[int, ...]

    variant: ClassVar[str] = "Explicit"
    summary: ClassVar[str] = "a finite table of values and colors"
    parameters: ClassVar[tuple[str, ...]] = ("domain", "colors")

    def __post_init__(self) -> None:
        if len(self.domain) != len(self.colors):
            raise InvalidColoringSpec("Explicit coloring needs one color per domain value")
        if len(set(self.domain)) != len(self.domain):
            raise InvalidColoringSpec("Explicit coloring has repeated domain values")
        if any(c < 0 for c in self.colors):
            raise InvalidColoringSpec("Colors are nonnegative integers")

    def color(self, q: Fraction) -> int:
        q = _nonzero(q)
        try:
            return self.colors[self.domain.index(q)]
        except ValueError as e:
            raise UndefinedColor(f"{format_rational(q)} is outside the explicit domain") from e

    @property
    def num_colors(self) -> int:
        return max(self.colors, default=-1) + 1

    def _params(self) -> dict[str, Any]:
        return {"domain": [format_rational(q) for q in self.domain], "colors": list(self.colors)}

    @classmethod
    def _from_params(cls, data: Mapping[str, Any]) -> "Explicit":
        return cls(tuple(parse_rational(q) for q in data["domain"]), tuple(int(c) for c in data["colors"]))


@dataclass(frozen=True)
class Constant(ColoringSpec):
    value: int = 0

    variant: ClassVar[str] = "Constant"
    summary: ClassVar[str] = "every value gets the same color"
    parameters: ClassVar[tuple[str, ...]] = ("color",)

    def color(self, q: Fraction) -> int:
        _nonzero(q)
        return self.value

    @property
    def num_colors(self) -> int:
        return self.value + 1

    def _params(self) -> dict[str, Any]:
        return {"color": self.value}

    @classmethod
    def _from_params(cls, data: Mapping[str, Any]) -> "Constant":
        return cls(int(data.get("color", 0)))


@dataclass(frozen=True)
class Override(ColoringSpec):
    """A base coloring with finitely many values recolored"""

    base: ColoringSpec
    overrides: dict[Fraction, int] = field(default_factory=dict)

    variant: ClassVar[str] = "Override"
    summary: ClassVar[str] = "a base coloring with finitely many values recolored"
    parameters: ClassVar[tuple[str, ...]] = ("base", "overrides")

    def color(self, q: Fraction) -> int:
        q = _nonzero(q)
        if q in self.overrides:
            return self.overrides[q]
        return self.base.color(q)

    @property
    def num_colors(self) -> int:
        return max(self.base.num_colors, max(self.overrides.values(), default=-1) + 1)

    def _params(self) -> dict[str, Any]:
        return {
            "base": self.base.to_dict(),
            "overrides": {format_rational(q): c for q, c in sorted(self.overrides.items())},
        }

    @classmethod
    def _from_params(cls, data: Mapping[str, Any]) -> "Override":
        overrides = {parse_rational(k): int(v) for k, v in (data.get("overrides") or {}).items()}
        return cls(coloring_from_dict(data["base"]), overrides)


VARIANTS: dict[str, type[ColoringSpec]] = {
    cls.variant: cls for cls in (Cpn, Cpvn, CapCp, CPi, C4pi, OddPrimeFamily, Explicit, Constant, Override)
}


def c23_prime() -> Override:
    """c_{2,3} on the positive integers with the color of 1 changed to 2"""
    return Override(Cpn(2, 3), {Fraction(1): 2})


# Construction
##############################################################################


def coloring_from_dict(data: Mapping[str, Any]) -> ColoringSpec:
    variant = data.get("variant")
    cls = VARIANTS.get(str(variant))
    if cls is None:
        raise InvalidColoringSpec(f"Unknown coloring variant: {variant!r}")
    try:
        return cls._from_params(data)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ColoringError):
            raise
        raise InvalidColoringSpec(f"Invalid parameters for {variant}: {e}") from e


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def parse_coloring(text: str) -> ColoringSpec:
    """
    Parse CLI shorthand: ``cpn:2:3``, ``cpvn:2:2:3``, ``capcp:5``, ``cpi:5``
    (identity window), ``c4pi:1,0,2``, ``odd:5:3``, ``const:0`` and ``c23prime``.
    """
    name, *args = text.strip().split(":")
    name = name.lower()
    try:
        match name:
            case "cpn":
                return Cpn(int(args[0]), int(args[1]))
            case "cpvn":
                return Cpvn(int(args[0]), int(args[1]), int(args[2]))
            case "capcp":
                return CapCp(int(args[0]))
            case "cpi":
                return CPi(int(args[0]))
            case "c4pi":
                return C4pi(tuple(_ints(args[0])) if args else (0, 1, 2))  # type: ignore[arg-type]
            case "odd":
                return OddPrimeFamily(int(args[0]), int(args[1]))
            case "const" | "constant":
                return Constant(int(args[0]) if args else 0)
            case "c23prime":
                return c23_prime()
    except (IndexError, ValueError) as e:
        if isinstance(e, ColoringError):
            raise
        raise InvalidColoringSpec(f"Malformed coloring shorthand '{text}': {e}") from e
    raise InvalidColoringSpec(f"Unknown coloring shorthand '{text}'")


def random_cpi_window(p: int, levels: Iterable[int], rng: random.Random) -> CPi:
    """A CPi with random permutations on the given levels and the identity at 0"""
    symbols = list(range(1, p))
    window = {level: tuple(rng.sample(symbols, len(symbols))) for level in levels if level != 0}
    window[0] = tuple(symbols)
    return CPi(p, window)


def catalog() -> list[dict[str, Any]]:
    return [
        {"variant": name, "parameters": list(cls.parameters), "summary": cls.summary} for name, cls in VARIANTS.items()
    ]


# Operations
##############################################################################


def evaluate(spec: ColoringSpec, q: RationalLike) -> int:
    """Color of q under spec"""
    return spec.color(_nonzero(q))


def canonicalize(colors: Iterable[int]) -> list[int]:
    """Relabel colors by first occurrence: [2, 2, 0, 1] -> [0, 0, 1, 2]"""
    relabel: dict[int, int] = {}
    return [relabel.setdefault(c, len(relabel)) for c in colors]


def restrict(spec: ColoringSpec, values: Iterable[RationalLike]) -> list[int]:
    """Canonical color string of spec on an ordered list of values"""
    return canonicalize(spec.color(_nonzero(v)) for v in values)


@dataclass
class ColoringReport:
    """
    Result of scanning a finite set. ``checked_count`` is the number of
    same-colored candidate tuples covered by the scan.
    """

    monochromatic: list[tuple[tuple[Fraction, ...], int]]
    checked_count: int
    exhausted_set: tuple[Fraction, ...]

    @property
    def free(self) -> bool:
        return not self.monochromatic

    def to_dict(self) -> dict[str, Any]:
        return {
            "monochromatic": [
                {"values": [format_rational(v) for v in values], "color": color}
                for values, color in self.monochromatic
            ],
            "checkedCount": self.checked_count,
            "exhaustedSet": [format_rational(v) for v in self.exhausted_set],
        }


def find_monochromatic(
    spec: ColoringSpec,
    eq: LinearEquation,
    values: Iterable[RationalLike],
    limit: int | None = None,
) -> ColoringReport:
    """
    Monochromatic solutions of eq over a finite set, at most ``limit`` of them.

    Every monochromatic solution lies inside one color class, so each class
    is scanned on its own.
    """
    ordered = canonical_order(values)
    if any(v == 0 for v in ordered):
        raise UndefinedColor("Scanned sets must exclude zero")

    classes: dict[int, list[int]] = {}
    for index, value in enumerate(ordered):
        classes.setdefault(spec.color(value), []).append(index)

    found: list[tuple[tuple[int, ...], int]] = []
    checked = 0
    for color in sorted(classes):
        members = classes[color]
        checked += len(members) ** eq.arity
        for local in solution_indices(eq, [ordered[i] for i in members]):
            found.append((tuple(members[i] for i in local), color))

    found.sort()
    if limit is not None:
        found = found[:limit]
    logging.debug(f"Scanned {len(ordered)} values in {len(classes)} color classes: {len(found)} monochromatic")
    return ColoringReport(
        monochromatic=[(tuple(ordered[i] for i in t), color) for t, color in found],
        checked_count=checked,
        exhausted_set=tuple(ordered),
    )


def strongly_free_check(
    spec: ColoringSpec,
    coefficients: Sequence[RationalLike],
    values: Iterable[RationalLike],
    limit: int | None = None,
) -> dict[tuple[Fraction, ...], ColoringReport]:
    """
    find_monochromatic for sum(a x) = 0 over every nonempty sub-multiset of
    ``coefficients``. Singletons have no nonzero solution and report empty.
    """
    coeffs = [parse_rational(a) for a in coefficients]
    if not coeffs:
        raise ColoringError("The coefficient multiset must be nonempty")
    ordered = tuple(canonical_order(values))

    reports: dict[tuple[Fraction, ...], ColoringReport] = {}
    for size in range(1, len(coeffs) + 1):
        for positions in combinations(range(len(coeffs)), size):
            sub = tuple(coeffs[i] for i in positions)
            if sub in reports:
                continue
            if size == 1:
                reports[sub] = ColoringReport([], 0, ordered)
                continue
            reports[sub] = find_monochromatic(spec, LinearEquation(sub), ordered, limit)
    return reports


def lemma_fr_violations(
    color_of: Callable[[Fraction], int],
    values: Iterable[RationalLike],
    q: RationalLike,
    radius: int = 2,
) -> list[tuple[Fraction, int, int]]:
    """
    Pairs (x, m, n) with x and a^m b^n x both in ``values`` where equality of
    colors disagrees with 3 | (m + n), for (a, b) from lemma_fr_generators.
    """
    a, b = lemma_fr_generators(q)
    domain = set(canonical_order(values))
    violations = []
    for x in sorted(domain):
        for m in range(-radius, radius + 1):
            for n in range(-radius, radius + 1):
                if m == 0 and n == 0:
                    continue
                y = a**m * b**n * x
                if y not in domain:
                    continue
                same = color_of(x) == color_of(y)
                if same != ((m + n) % 3 == 0):
                    violations.append((x, m, n))
    return violations

"""Linear information expressions over joint-entropy coordinates.

An :class:`InfoExpression` is a rational-coefficient linear functional on the
entropy coordinates H(S), S a nonempty subset of n variables.  Conditional
entropies and (conditional) mutual informations expand into these coordinates:

    H(S|T)     =  H(S,T) - H(T)
    I(S;T)     =  H(S) + H(T) - H(S,T)
    I(S;T|U)   =  H(S,U) + H(T,U) - H(S,T,U) - H(U)

The text DSL (whitespace-insensitive) is::

    expr     :=  ['+'|'-'] term (('+'|'-') term)*
    term     :=  '0'  |  [rational ['*']] atom
    atom     :=  'H' '(' set ['|' set] ')'  |  'I' '(' set ';' set ['|' set] ')'
    set      :=  name (',' name)*
    rational :=  int ['/' int]

A bare ``0`` denotes the empty expression so printing and parsing round-trip.
Coefficients are exact rationals; nothing here rounds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Mapping, Sequence

from .distribution import EntropyVector, MaskError, neumaier_sum
from .subsets import lex_masks, mask_label, mask_of_names


class ExpressionSyntaxError(ValueError):
    """Raised on malformed DSL input; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ArityMismatch(ValueError):
    """Expression and vector arities differ."""


@dataclass(frozen=True)
class InfoExpression:
    """Sparse linear functional over nonempty-subset entropy coordinates."""

    n: int
    items: tuple[tuple[int, Fraction], ...]  # (mask, coefficient), mask-sorted

    def __post_init__(self):
        top = (1 << self.n) - 1
        last = 0
        for mask, coef in self.items:
            if not 1 <= mask <= top:
                raise MaskError(f"mask {mask} out of range for n={self.n}")
            if mask <= last:
                raise ValueError("items must be strictly mask-sorted")
            if coef == 0:
                raise ValueError("zero coefficients must not be stored")
            last = mask

    @classmethod
    def from_coeffs(cls, n: int, coeffs: Mapping[int, Fraction]) -> "InfoExpression":
        items = tuple(
            (m, Fraction(coeffs[m])) for m in sorted(coeffs) if coeffs[m] != 0
        )
        return cls(n, items)

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self.items)

    def is_zero(self) -> bool:
        return not self.items

    def __add__(self, other: "InfoExpression") -> "InfoExpression":
        if self.n != other.n:
            raise ArityMismatch(f"arity {self.n} vs {other.n}")
        acc = self.coeffs
        for mask, coef in other.items:
            acc[mask] = acc.get(mask, Fraction(0)) + coef
        return InfoExpression.from_coeffs(self.n, acc)

    def __neg__(self) -> "InfoExpression":
        return InfoExpression(self.n, tuple((m, -c) for m, c in self.items))

    def __sub__(self, other: "InfoExpression") -> "InfoExpression":
        return self + (-other)

    def __mul__(self, scalar) -> "InfoExpression":
        scalar = Fraction(scalar)
        if scalar == 0:
            return InfoExpression(self.n, ())
        return InfoExpression(self.n, tuple((m, c * scalar) for m, c in self.items))

    __rmul__ = __mul__

    def evaluate(self, v: EntropyVector) -> float:
        """Dot product against float coordinates, compensated summation."""
        if v.n != self.n:
            raise ArityMismatch(f"expression arity {self.n}, vector arity {v.n}")
        return neumaier_sum(float(c) * v.coords[m - 1] for m, c in self.items)

    def evaluate_exact(self, coords: Sequence[Fraction]) -> Fraction:
        """Exact dot product against rational coordinates (index = mask - 1)."""
        if len(coords) != (1 << self.n) - 1:
            raise ArityMismatch("coordinate count does not match arity")
        return sum((c * coords[m - 1] for m, c in self.items), Fraction(0))

    def evaluate_decimal(self, coords: Mapping[int, Decimal], digits: int) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits
            acc = Decimal(0)
            for m, c in self.items:
                acc += (Decimal(c.numerator) / Decimal(c.denominator)) * coords[m]
            return acc


# ---------------------------------------------------------------------------
# Constructors for the standard quantities.
# ---------------------------------------------------------------------------


def entropy(n: int, s: int, given: int = 0) -> InfoExpression:
    """H(s | given) as an InfoExpression (given may be empty)."""
    if s == 0:
        raise MaskError("entropy of the empty set")
    coeffs: dict[int, Fraction] = {}

    def add(mask: int, c: int) -> None:
        if mask:
            coeffs[mask] = coeffs.get(mask, Fraction(0)) + c

    add(s | given, +1)
    add(given, -1)
    return InfoExpression.from_coeffs(n, coeffs)


def mutual_information(n: int, a: int, b: int, given: int = 0) -> InfoExpression:
    """I(a ; b | given) as an InfoExpression (given may be empty)."""
    if a == 0 or b == 0:
        raise MaskError("mutual information needs nonempty arguments")
    coeffs: dict[int, Fraction] = {}

    def add(mask: int, c: int) -> None:
        if mask:
            coeffs[mask] = coeffs.get(mask, Fraction(0)) + c

    add(a | given, +1)
    add(b | given, +1)
    add(a | b | given, -1)
    add(given, -1)
    return InfoExpression.from_coeffs(n, coeffs)


def box_expression(n: int, a: int, b: int, c: int, d: int) -> InfoExpression:
    """The Ingleton-style functional I(c;d|a) + I(c;d|b) + I(a;b) - I(c;d)."""
    for mask in (a, b, c, d):
        if mask == 0:
            raise MaskError("box arguments must be nonempty")
    seen = 0
    for mask in (a, b, c, d):
        if mask & seen:
            raise MaskError("box arguments must be pairwise disjoint")
        seen |= mask
    return (
        mutual_information(n, c, d, a)
        + mutual_information(n, c, d, b)
        + mutual_information(n, a, b)
        - mutual_information(n, c, d)
    )


# ---------------------------------------------------------------------------
# AST and parser.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TermAst:
    coef: Fraction
    kind: str  # "H" or "I"
    first: tuple[str, ...]
    second: tuple[str, ...] | None  # I-terms only
    condition: tuple[str, ...]


@dataclass(frozen=True)
class ExpressionAst:
    var_names: tuple[str, ...]
    terms: tuple[TermAst, ...]
    comparison: bool = False  # True when a trailing ">= 0" was present


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(>=)|([()+\-*/,;|]))")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        m = _TOKEN.match(self.text, self.pos)
        if m is None:
            rest = self.text[self.pos:]
            stripped = rest.lstrip()
            if not stripped:
                return ("end", "", len(self.text))
            raise ExpressionSyntaxError(
                f"unexpected character {stripped[0]!r}",
                self.pos + (len(rest) - len(stripped)),
            )
        if m.group(1) is not None:
            return ("int", m.group(1), m.end())
        if m.group(2) is not None:
            return ("name", m.group(2), m.end())
        if m.group(3) is not None:
            return ("op", ">=", m.end())
        return ("op", m.group(4), m.end())

    def next(self) -> tuple[str, str]:
        kind, value, end = self.peek()
        self.pos = end
        return kind, value

    def expect(self, value: str) -> None:
        kind, got = self.next()
        if got != value:
            raise ExpressionSyntaxError(f"expected {value!r}, got {got!r}", self.pos)


def parse_expression(text: str, var_names: Sequence[str]) -> ExpressionAst:
    """Parse the DSL into an AST; unknown variable names are rejected."""
    var_names = tuple(var_names)
    known = set(var_names)
    toks = _Tokens(text)
    terms: list[TermAst] = []

    def parse_set() -> tuple[str, ...]:
        names = []
        while True:
            kind, value = toks.next()
            if kind != "name":
                raise ExpressionSyntaxError(f"expected variable name, got {value!r}", toks.pos)
            if value not in known:
                raise ExpressionSyntaxError(f"unknown variable {value!r}", toks.pos)
            names.append(value)
            kind, value, end = toks.peek()
            if value == ",":
                toks.pos = end
                continue
            return tuple(names)

    def parse_term(sign: Fraction) -> None:
        coef = sign
        kind, value, end = toks.peek()
        if kind == "int":
            toks.pos = end
            num = int(value)
            kind, value, end = toks.peek()
            if value == "/":
                toks.pos = end
                kind, value = toks.next()
                if kind != "int":
                    raise ExpressionSyntaxError("expected denominator", toks.pos)
                coef *= Fraction(num, int(value))
            else:
                coef *= num
            kind, value, end = toks.peek()
            if value == "*":
                toks.pos = end
            kind, value, end = toks.peek()
            if kind != "name" and coef == 0:
                # bare "0": contributes nothing
                return
        kind, value = toks.next()
        if kind != "name" or value not in ("H", "I"):
            raise ExpressionSyntaxError(f"expected H(...) or I(...), got {value!r}", toks.pos)
        head = value
        toks.expect("(")
        first = parse_set()
        second = None
        condition: tuple[str, ...] = ()
        if head == "I":
            toks.expect(";")
            second = parse_set()
        kind, value, end = toks.peek()
        if value == "|":
            toks.pos = end
            condition = parse_set()
        toks.expect(")")
        terms.append(TermAst(coef, head, first, second, condition))

    comparison = False
    kind, value, end = toks.peek()
    sign = Fraction(1)
    if value in ("+", "-"):
        toks.pos = end
        sign = Fraction(-1) if value == "-" else Fraction(1)
    parse_term(sign)
    while True:
        kind, value, end = toks.peek()
        if kind == "end":
            break
        if value == ">=":
            toks.pos = end
            kind, value = toks.next()
            if value != "0":
                raise ExpressionSyntaxError("comparison tail must be '>= 0'", toks.pos)
            comparison = True
            kind, value, end = toks.peek()
            if kind != "end":
                raise ExpressionSyntaxError("trailing input after '>= 0'", toks.pos)
            break
        if value not in ("+", "-"):
            raise ExpressionSyntaxError(f"expected '+' or '-', got {value!r}", toks.pos)
        toks.pos = end
        parse_term(Fraction(-1) if value == "-" else Fraction(1))
    return ExpressionAst(var_names, tuple(terms), comparison)


def canonicalize(ast: ExpressionAst) -> InfoExpression:
    """Expand every H/I term into joint-entropy coordinates, combining exactly."""
    n = len(ast.var_names)
    acc = InfoExpression(n, ())
    for term in ast.terms:
        first = mask_of_names(term.first, ast.var_names)
        cond = mask_of_names(term.condition, ast.var_names)
        if term.kind == "H":
            piece = entropy(n, first, cond)
        else:
            assert term.second is not None
            piece = mutual_information(
                n, first, mask_of_names(term.second, ast.var_names), cond
            )
        acc = acc + term.coef * piece
    return acc


def parse(text: str, var_names: Sequence[str]) -> InfoExpression:
    """parse_expression + canonicalize in one step."""
    return canonicalize(parse_expression(text, var_names))


def format_expression(e: InfoExpression, var_names: Sequence[str] | None = None) -> str:
    """Deterministic printing in joint-entropy coordinates.

    ``parse(format_expression(e))`` canonicalizes back to ``e`` exactly.
    """
    if var_names is None:
        from .subsets import default_names

        var_names = default_names(e.n)
    if len(var_names) != e.n:
        raise ArityMismatch("var_names length does not match arity")
    if e.is_zero():
        return "0"
    coeffs = e.coeffs
    parts: list[str] = []
    for mask in lex_masks(e.n):
        if mask not in coeffs:
            continue
        coef = coeffs[mask]
        label = f"H({mask_label(mask, var_names)})"
        magnitude = abs(coef)
        body = label if magnitude == 1 else f"{magnitude} {label}"
        if not parts:
            parts.append(body if coef > 0 else f"- {body}")
        else:
            parts.append(("+ " if coef > 0 else "- ") + body)
    return " ".join(parts)

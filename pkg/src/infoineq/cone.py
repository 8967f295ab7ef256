"""The Shannon (polymatroid) cone and exact membership certificates.

The elemental inequalities for n variables are the n monotonicity forms
H(all) - H(all minus i) >= 0 and the C(n,2) * 2^(n-2) conditional mutual
information forms I(X_i ; X_j | X_K) >= 0.  Nonnegative combinations of them
are the Shannon-type inequalities; membership of a candidate functional is
decided by an exact rational LP (see :mod:`infoineq.simplex`), so every
answer comes with a checkable proof object:

* :class:`Certificate` -- nonnegative coefficients over the cone generators
  (plus free-sign coefficients over constraint functionals, when present)
  reconstructing the target coefficient-by-coefficient;
* :class:`SeparatingPoint` -- a rational vector satisfying every generator
  but evaluating the target strictly negative.

Exactly one of the two exists (Farkas); both verify themselves on creation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from . import simplex
from .distribution import EntropyVector, format_real
from .expressions import (
    ArityMismatch,
    InfoExpression,
    box_expression,
    format_expression,
    mutual_information,
)
from .subsets import full_mask, iter_nonempty, lex_masks, mask_label

MAX_ARITY = 6  # 246 generators / 63 coordinates keeps the exact LP tractable


class ArityOutOfRange(ValueError):
    pass


def _insert_zero_bit(pool: int, bit_index: int) -> int:
    """Insert a zero bit at the given position (subset enumeration helper)."""
    bit = 1 << bit_index
    left = (pool & ~(bit - 1)) << 1
    right = pool & (bit - 1)
    return left | right


def elemental_count(n: int) -> int:
    return n + comb(n, 2) * (1 << max(n - 2, 0))


def elemental_inequalities(n: int) -> list[InfoExpression]:
    """All elemental forms for arity n, each asserted >= 0 on the cone.

    Order: monotonicity forms for i = 0..n-1, then I(X_i;X_j|X_K) with
    i < j and K running over subsets of the remaining variables.
    """
    if not 1 <= n <= MAX_ARITY:
        raise ArityOutOfRange(f"arity must be within 1..{MAX_ARITY}, got {n}")
    everything = full_mask(n)
    out: list[InfoExpression] = []
    for i in range(n):
        rest = everything ^ (1 << i)
        coeffs = {everything: Fraction(1)}
        if rest:
            coeffs[rest] = Fraction(-1)
        out.append(InfoExpression.from_coeffs(n, coeffs))
    for i in range(n - 1):
        for j in range(i + 1, n):
            for pool in range(1 << max(n - 2, 0)):
                k = _insert_zero_bit(_insert_zero_bit(pool, i), j)
                out.append(mutual_information(n, 1 << i, 1 << j, k))
    return out


@dataclass(frozen=True)
class ConeDescription:
    """A polyhedral cone given by generator functionals, each >= 0 on it."""

    n: int
    generators: tuple[InfoExpression, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a cone needs at least one generator")
        for g in self.generators:
            if g.n != self.n:
                raise ArityMismatch("all generators must share the cone arity")

    @classmethod
    def from_generators(cls, n: int, gens: Sequence[InfoExpression]) -> "ConeDescription":
        seen: dict[tuple, InfoExpression] = {}
        for g in gens:
            seen.setdefault(g.items, g)  # canonicalized, duplicates collapse
        return cls(n, tuple(seen.values()))

    @classmethod
    def shannon(cls, n: int) -> "ConeDescription":
        return cls.from_generators(n, elemental_inequalities(n))


@dataclass(frozen=True)
class Certificate:
    """Exact reconstruction target = sum kappa_j * gen_j + sum lambda_i * f_i."""

    target: InfoExpression
    generators: tuple[InfoExpression, ...]
    kappas: tuple[Fraction, ...]
    constraints: tuple[InfoExpression, ...] = ()
    lambdas: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if len(self.kappas) != len(self.generators):
            raise ValueError("one kappa per generator required")
        if len(self.lambdas) != len(self.constraints):
            raise ValueError("one lambda per constraint required")
        if any(k < 0 for k in self.kappas):
            raise ValueError("kappa coefficients must be nonnegative")
        if not self.verify():
            raise ValueError("certificate does not reconstruct the target")

    def verify(self) -> bool:
        acc = InfoExpression(self.target.n, ())
        for k, g in zip(self.kappas, self.generators):
            if k:
                acc = acc + k * g
        for l, f in zip(self.lambdas, self.constraints):
            if l:
                acc = acc + l * f
        return acc == self.target

    def serialize(self, var_names: Sequence[str] | None = None) -> str:
        lines = []
        for k, g in zip(self.kappas, self.generators):
            if k:
                lines.append(f"kappa {k} * {format_expression(g, var_names)}")
        for l, f in zip(self.lambdas, self.constraints):
            if l:
                lines.append(f"lambda {l} * {format_expression(f, var_names)}")
        lines.append(f"==> {format_expression(self.target, var_names)}")
        return "\n".join(lines)


@dataclass(frozen=True)
class SeparatingPoint:
    """Rational point with every generator >= 0 but the target < 0."""

    n: int
    coords: tuple[Fraction, ...]  # index = mask - 1
    provenance: str = "LP dual"

    def __post_init__(self):
        if len(self.coords) != (1 << self.n) - 1:
            raise ValueError("coordinate count does not match arity")

    def check(self, generators: Sequence[InfoExpression], target: InfoExpression) -> bool:
        if any(g.evaluate_exact(self.coords) < 0 for g in generators):
            return False
        return target.evaluate_exact(self.coords) < 0

    def serialize(self, var_names: Sequence[str] | None = None) -> str:
        from .subsets import default_names

        names = tuple(var_names) if var_names is not None else default_names(self.n)
        lines = [f"separating point ({self.provenance})"]
        for mask in lex_masks(self.n):
            lines.append(f"H({mask_label(mask, names)}) = {self.coords[mask - 1]}")
        return "\n".join(lines)


def _column(e: InfoExpression, n: int) -> tuple[Fraction, ...]:
    coeffs = e.coeffs
    return tuple(coeffs.get(m, Fraction(0)) for m in iter_nonempty(n))


def _decide(
    cone: ConeDescription,
    constraints: Sequence[InfoExpression],
    target: InfoExpression,
) -> Certificate | SeparatingPoint:
    """Exact LP core shared by the membership and implication questions."""
    n = target.n
    if cone.n != n or any(f.n != n for f in constraints):
        raise ArityMismatch("cone, constraints and target must share arity")
    columns = [_column(g, n) for g in cone.generators]
    for f in constraints:
        col = _column(f, n)
        columns.append(col)
        columns.append(tuple(-v for v in col))
    rhs = _column(target, n)
    outcome = simplex.solve_nonneg_combination(columns, rhs)
    if isinstance(outcome, simplex.Feasible):
        g = len(cone.generators)
        kappas = outcome.x[:g]
        lambdas = tuple(
            outcome.x[g + 2 * i] - outcome.x[g + 2 * i + 1]
            for i in range(len(constraints))
        )
        return Certificate(target, cone.generators, kappas, tuple(constraints), lambdas)
    point = SeparatingPoint(n, tuple(-v for v in outcome.y))
    if not point.check(cone.generators, target):
        raise RuntimeError("separating point failed exact verification; this is a bug")
    for f in constraints:
        if f.evaluate_exact(point.coords) != 0:
            raise RuntimeError("separating point violates a constraint; this is a bug")
    return point


def is_shannon_type(target: InfoExpression) -> Certificate | SeparatingPoint:
    """Decide membership of ``target >= 0`` in the Shannon cone.

    Total decision procedure: a verified Certificate on membership, otherwise
    a verified SeparatingPoint extracted from LP duality.
    """
    return _decide(ConeDescription.shannon(target.n), [], target)


def conditional_implied_by(
    cone: ConeDescription,
    constraints: Sequence[InfoExpression],
    target: InfoExpression,
) -> Certificate | None:
    """Decide target = sum kappa_j gen_j + sum lambda_i f_i, kappa >= 0.

    This is exactly the question whether the conditional inequality
    ``(f_i = 0 for all i) => target >= 0`` can be read off the polyhedral
    cone description; for polyhedral cones the two are equivalent, so None
    means the implication does not follow from these generators.
    """
    result = _decide(cone, constraints, target)
    return result if isinstance(result, Certificate) else None


@dataclass(frozen=True)
class PolymatroidCheck:
    ok: bool
    worst_slack: float
    worst_form: InfoExpression | None = field(default=None, compare=False)

    def __str__(self) -> str:
        status = "polymatroid" if self.ok else "NOT a polymatroid"
        return f"{status} (worst slack {format_real(self.worst_slack)})"


POLYMATROID_TOLERANCE = 1e-9


def is_polymatroid(v: EntropyVector) -> PolymatroidCheck:
    """Minimum elemental slack of ``v``; true iff >= -1e-9."""
    worst = None
    worst_form = None
    for gen in elemental_inequalities(v.n):
        slack = gen.evaluate(v)
        if worst is None or slack < worst:
            worst = slack
            worst_form = gen
    return PolymatroidCheck(worst >= -POLYMATROID_TOLERANCE, worst, worst_form)


# ---------------------------------------------------------------------------
# Known unconditional non-Shannon-type inequalities (5 variables A..E, and
# the classic 4-variable specialization at E := A).
# ---------------------------------------------------------------------------

_A, _B, _C, _D, _E = 1, 2, 4, 8, 16


def _box5() -> InfoExpression:
    return box_expression(5, _A, _B, _C, _D)


def five_variable_nonshannon() -> InfoExpression:
    """I(C;D) <= I(C;D|A)+I(C;D|B)+I(A;B) + I(E;C|D)+I(E;D|C)+I(C;D|E).

    Valid for every 5-variable distribution, with no constraints.
    """
    n = 5
    return (
        _box5()
        + mutual_information(n, _E, _C, _D)
        + mutual_information(n, _E, _D, _C)
        + mutual_information(n, _C, _D, _E)
    )


def four_variable_nonshannon() -> InfoExpression:
    """The E := A restriction: I(C;D) <= 2I(C;D|A)+I(C;D|B)+I(A;B)+I(A;C|D)+I(A;D|C)."""
    n = 4
    return (
        box_expression(n, _A, _B, _C, _D)
        + mutual_information(n, _A, _C, _D)
        + mutual_information(n, _A, _D, _C)
        + mutual_information(n, _C, _D, _A)
    )


def series_inequality(kind: str, k: int) -> InfoExpression:
    """Member k of the unconditional 5-variable series (i), (ii), (iii).

    (i)   box + I(A;C|E)+I(A;E|C) + (1/k) I(C;E|A) + (k-1)/2 (I(A;D|C)+I(A;C|D))
    (ii)  box + I(B;C|E)+I(C;E|B) + (1/k) I(B;E|C) + (k-1)/2 (I(B;C|D)+I(C;D|B))
    (iii) box + I(C;D|E)+I(C;E|D) + (1/k) I(D;E|C) + (k-1)/2 (I(B;C|D)+I(C;D|B))

    Each is >= 0 for every 5-variable distribution and every integer k >= 1.
    """
    if k < 1:
        raise ValueError(f"series index must be >= 1, got {k}")
    n = 5
    half = Fraction(k - 1, 2)
    inv = Fraction(1, k)
    if kind == "i":
        extra = (
            mutual_information(n, _A, _C, _E)
            + mutual_information(n, _A, _E, _C)
            + inv * mutual_information(n, _C, _E, _A)
            + half * (mutual_information(n, _A, _D, _C) + mutual_information(n, _A, _C, _D))
        )
    elif kind == "ii":
        extra = (
            mutual_information(n, _B, _C, _E)
            + mutual_information(n, _C, _E, _B)
            + inv * mutual_information(n, _B, _E, _C)
            + half * (mutual_information(n, _B, _C, _D) + mutual_information(n, _C, _D, _B))
        )
    elif kind == "iii":
        extra = (
            mutual_information(n, _C, _D, _E)
            + mutual_information(n, _C, _E, _D)
            + inv * mutual_information(n, _D, _E, _C)
            + half * (mutual_information(n, _B, _C, _D) + mutual_information(n, _C, _D, _B))
        )
    else:
        raise ValueError(f"unknown series kind {kind!r}")
    return _box5() + extra


def known_nonshannon_registry(n: int = 5, k_max: int = 5) -> list[InfoExpression]:
    """Catalog of unconditional non-Shannon-type inequalities for arity n."""
    if n == 4:
        return [four_variable_nonshannon()]
    if n == 5:
        out = [five_variable_nonshannon()]
        for k in range(1, k_max + 1):
            for kind in ("i", "ii", "iii"):
                out.append(series_inequality(kind, k))
        return out
    raise ArityOutOfRange("registry covers arities 4 and 5")

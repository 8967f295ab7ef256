"""Registry of conditional inequalities and the refutation engine.

A :class:`ConditionalInequality` is an implication: if every constraint
expression is 0, the target expression is >= 0.  The registry holds the nine
catalogued entries (I1..I6, the four-variable restrictions I4p and I5p, and
the six-constraint weak form), each with its almost-entropic status:
``valid`` / ``invalid`` / ``open``.

"Essentially conditional" means no Lagrange relaxation works: for every
choice of multipliers lambda_i the unconditional form

    target + sum_i lambda_i * constraint_i  >=  0

fails on some distribution.  The engine makes that mechanical through a
uniform bound L on sum |lambda_i|: a distribution with

    margin  =  target  +  L * sum_i |constraint_i|  <  0

simultaneously refutes every multiplier vector in the L-ball, so producing a
witness for each L is exactly essential conditionality, quantifier order
included.  Witnesses come from deterministic parameter sweeps of the paired
counterexample family (eps halving for the binary families, ascending primes
through the closed-form profile for the geometric family); each witness
re-verifies from its stored parameter alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Sequence

from .distribution import (
    JointDistribution,
    entropy_profile,
    format_real,
    is_cond_independent,
    is_functional,
    subset_entropies_decimal,
)
from .expressions import ArityMismatch, InfoExpression, parse
from .families import (
    generate,
    geometric_closed_profile,
    lift_with_copy,
    primes,
)
from .subsets import default_names

NUMERIC_CONSTRAINT_TOLERANCE = 1e-12

# Sweep schedule for the eps families: halving steps cover the float range,
# then exponent doubling reaches the log-slow families (claim2's margin decays
# like eps * log(1/eps), so a bound L needs eps ~ 2**(-3L)).  Exponents above
# _FLOAT_EXPONENT_LIMIT are evaluated in decimal arithmetic sized to the
# exponent; 2**-65536 is the exhaustion floor.
_FLOAT_EXPONENT_LIMIT = 40
_EPS_EXPONENTS = list(range(3, 41)) + [80 * (1 << k) for k in range(10)] + [65536]
_GEOMETRIC_MAX_Q = 10**6


class RefutationError(RuntimeError):
    """Unpaired inequality/family combination, or sweep exhaustion."""


@dataclass(frozen=True)
class ConditionalInequality:
    """Constraints (= 0) plus a target (>= 0), with almost-entropic status."""

    name: str
    n: int
    constraint_texts: tuple[str, ...]
    target_text: str
    aep_valid: str  # "valid" | "invalid" | "open"

    def __post_init__(self):
        if self.aep_valid not in ("valid", "invalid", "open"):
            raise ValueError(f"bad aep flag {self.aep_valid!r}")

    @property
    def var_names(self) -> tuple[str, ...]:
        return default_names(self.n)

    @property
    def constraints(self) -> tuple[InfoExpression, ...]:
        return tuple(parse(t, self.var_names) for t in self.constraint_texts)

    @property
    def target(self) -> InfoExpression:
        return parse(self.target_text, self.var_names)

    def serialize(self) -> str:
        parts = [self.name, "constraints: " + "; ".join(self.constraint_texts)]
        return "; ".join(parts + [f"target: {self.target_text}", f"aep: {self.aep_valid}"])


_BOX = "I(C;D|A) + I(C;D|B) + I(A;B) - I(C;D)"

REGISTRY: dict[str, ConditionalInequality] = {
    ci.name: ci
    for ci in (
        ConditionalInequality("I1", 4, ("I(A;B|C)", "I(A;B)"), _BOX, "invalid"),
        ConditionalInequality("I2", 4, ("I(A;B|C)", "I(B;D|C)"), _BOX, "open"),
        ConditionalInequality("I3", 4, ("I(A;B|C)", "H(C|A,B)"), _BOX, "invalid"),
        ConditionalInequality(
            "I4", 5, ("I(A;D|C)", "I(A;C|D)"), _BOX + " + I(A;C|E) + I(A;E|C)", "valid"
        ),
        ConditionalInequality(
            "I5", 5, ("I(B;C|D)", "I(C;D|B)"), _BOX + " + I(B;C|E) + I(C;E|B)", "valid"
        ),
        ConditionalInequality(
            "I6", 5, ("I(B;C|D)", "I(C;D|B)"), _BOX + " + I(C;D|E) + I(C;E|D)", "valid"
        ),
        ConditionalInequality("I4p", 4, ("I(A;D|C)", "I(A;C|D)"), _BOX, "valid"),
        ConditionalInequality("I5p", 4, ("I(B;C|D)", "I(C;D|B)"), _BOX, "valid"),
        ConditionalInequality(
            "weak",
            4,
            ("I(C;D|A)", "I(C;D|B)", "I(A;B)", "I(A;B|C)", "I(A;B|D)", "H(C|A,B)"),
            "- I(C;D)",
            "open",
        ),
    )
}


def get(name: str) -> ConditionalInequality:
    if name not in REGISTRY:
        raise KeyError(f"unknown inequality {name!r} (have {sorted(REGISTRY)})")
    return REGISTRY[name]


def serialize_registry() -> str:
    return "\n".join(REGISTRY[name].serialize() for name in REGISTRY)


# ---------------------------------------------------------------------------
# Structural recognizers: a canonical expression that happens to be a single
# conditional mutual information or conditional entropy is checked exactly on
# the atoms, never through floating entropies.
# ---------------------------------------------------------------------------


def as_conditional_mi(e: InfoExpression) -> tuple[int, int, int] | None:
    """Masks (a, b, c) when e == I(a;b|c) coefficient-exactly, else None."""
    plus = [m for m, c in e.items if c == 1]
    minus = [m for m, c in e.items if c == -1]
    if len(plus) + len(minus) != len(e.items) or len(plus) != 2:
        return None
    m1, m2 = plus
    c = m1 & m2
    a, b = m1 ^ c, m2 ^ c
    if not a or not b:
        return None
    expected = {m1 | m2: Fraction(-1)}
    if c:
        expected[c] = Fraction(-1)
    expected[m1] = expected.get(m1, Fraction(0)) + 1
    expected[m2] = expected.get(m2, Fraction(0)) + 1
    if {m: v for m, v in expected.items() if v} == e.coeffs:
        return a, b, c
    return None


def as_conditional_entropy(e: InfoExpression) -> tuple[int, int] | None:
    """Masks (target, given) when e == H(target|given) coefficient-exactly."""
    if len(e.items) == 1:
        (mask, coef), = e.items
        return (mask, 0) if coef == 1 else None
    if len(e.items) == 2:
        (m1, c1), (m2, c2) = e.items
        if c2 == 1 and c1 == -1 and (m1 & m2) == m1:
            return m2 ^ m1, m1
    return None


def constraint_holds_exactly(e: InfoExpression, d: JointDistribution) -> bool | None:
    """Structural decision for a recognizable constraint; None if generic."""
    mi = as_conditional_mi(e)
    if mi is not None:
        a, b, c = mi
        return is_cond_independent(d, a, b, c)
    ce = as_conditional_entropy(e)
    if ce is not None:
        target, given = ce
        return is_functional(d, target, given)
    return None


@dataclass(frozen=True)
class CheckResult:
    constraints_exact: bool
    exact_flags: tuple[bool, ...]
    constraint_values: tuple[float, ...]
    target_value: float


def check(ci: ConditionalInequality, d: JointDistribution) -> CheckResult:
    """Decide the constraints on d (structurally where possible) and evaluate the target."""
    if d.n != ci.n:
        raise ArityMismatch(f"{ci.name} has arity {ci.n}, distribution has {d.n}")
    profile = entropy_profile(d)
    flags = []
    values = []
    for expr in ci.constraints:
        value = expr.evaluate(profile)
        holds = constraint_holds_exactly(expr, d)
        if holds is None:
            holds = abs(value) <= NUMERIC_CONSTRAINT_TOLERANCE
        flags.append(holds)
        values.append(value)
    return CheckResult(all(flags), tuple(flags), tuple(values), ci.target.evaluate(profile))


# ---------------------------------------------------------------------------
# Refutation sweeps.
# ---------------------------------------------------------------------------

# Canonical pairing; the five-variable entries reuse the four-variable
# families with the extra variable bound to an existing one (the same
# identification that restricts I4-I6 to I4p/I5p).
_LIFTS: dict[str, Callable[[JointDistribution], JointDistribution]] = {
    "I4": lambda d: lift_with_copy(d, "D", "E"),
    "I5": lambda d: lift_with_copy(d, "D", "E"),
    "I6": lambda d: lift_with_copy(d, "B", "E"),
}

PAIRINGS: dict[str, str] = {
    "I1": "claim1",
    "I2": "claim2",
    "I3": "claim3",
    "I4": "claim4",
    "I5": "claim5",
    "I6": "claim5",
    "I4p": "claim4",
    "I5p": "claim5",
    "weak": "geometric",
}


@dataclass(frozen=True)
class RefutationWitness:
    """A family member violating target + L * sum |constraint_i| < 0."""

    inequality: str
    family: str
    parameter: Fraction | int
    lambda_bound: Fraction
    margin: float | Decimal
    target_value: float | Decimal
    constraint_values: tuple
    precision_digits: int | None = None

    def recompute(self):
        """Margin recomputed from the stored parameter alone."""
        margin, _, _ = _margin_at(
            get(self.inequality), self.family, self.parameter, self.lambda_bound,
            self.precision_digits,
        )
        return margin

    def verify(self, tolerance: float = 1e-12) -> bool:
        recomputed = self.recompute()
        if isinstance(self.margin, Decimal) or isinstance(recomputed, Decimal):
            delta = abs(Decimal(self.margin) - Decimal(recomputed))
            ok = delta <= Decimal(repr(tolerance))
        else:
            ok = abs(self.margin - recomputed) <= tolerance
        return ok and self.margin < 0

    def serialize(self) -> str:
        lines = [
            f"refutation of {self.inequality} via {self.family}",
            f"parameter = {self.parameter}",
            f"lambda bound = {self.lambda_bound}",
            f"target value = {_fmt(self.target_value)}",
        ]
        ci = get(self.inequality)
        for text, value in zip(ci.constraint_texts, self.constraint_values):
            lines.append(f"|{text}| = {_fmt(abs(value))}")
        if self.precision_digits:
            lines.append(f"precision = {self.precision_digits} decimal digits")
        lines.append(f"margin = {_fmt(self.margin)} < 0")
        return "\n".join(lines)


def _fmt(x) -> str:
    if isinstance(x, Decimal):
        return f"{x:.6E}"
    return format_real(x)


def _family_member(ci: ConditionalInequality, family: str, parameter) -> JointDistribution:
    d = generate(family, parameter)
    lift = _LIFTS.get(ci.name)
    return lift(d) if lift is not None else d


def _margin_at(
    ci: ConditionalInequality,
    family: str,
    parameter,
    lam: Fraction,
    digits: int | None,
):
    """(margin, target value, constraint values) at one family member."""
    if family == "geometric" and digits is None:
        profile = geometric_closed_profile(int(parameter))
        target = ci.target.evaluate(profile)
        values = tuple(c.evaluate(profile) for c in ci.constraints)
        margin = target + float(lam) * sum(abs(v) for v in values)
        return margin, target, values
    if family == "geometric":
        raise RefutationError("high-precision mode is not needed for the closed profile")
    d = _family_member(ci, family, parameter)
    if digits is None:
        profile = entropy_profile(d)
        target = ci.target.evaluate(profile)
        values = tuple(c.evaluate(profile) for c in ci.constraints)
        margin = target + float(lam) * sum(abs(v) for v in values)
        return margin, target, values
    coords = subset_entropies_decimal(d, digits)
    target = ci.target.evaluate_decimal(coords, digits)
    values = tuple(c.evaluate_decimal(coords, digits) for c in ci.constraints)
    with localcontext() as ctx:
        ctx.prec = digits
        lam_dec = Decimal(lam.numerator) / Decimal(lam.denominator)
        margin = target + lam_dec * sum(abs(v) for v in values)
    return margin, target, values


def _eps_schedule(precision: int | None):
    for exponent in _EPS_EXPONENTS:
        parameter = Fraction(1, 1 << exponent)
        # Resolving the sign of a margin of size ~eps needs digits scaled to
        # the exponent; an explicit precision may only raise that floor.
        needed = int(exponent * 0.302) + 40 if exponent > _FLOAT_EXPONENT_LIMIT else None
        if precision is not None:
            digits = max(precision, needed or 0)
        else:
            digits = needed
        yield parameter, digits


def refute(
    ci: ConditionalInequality | str,
    family: str | None = None,
    lambda_bound=Fraction(1),
    precision: int | None = None,
) -> RefutationWitness:
    """First sweep member whose margin is strictly negative.

    The sweep order is fixed, so witnesses are deterministic and shrink (eps)
    or grow (q) as the bound grows.  Exhaustion raises: that would falsify
    the implementation, not the catalogued statements.
    """
    if isinstance(ci, str):
        ci = get(ci)
    lam = Fraction(lambda_bound)
    if lam < 0:
        raise RefutationError("lambda bound must be nonnegative")
    paired = PAIRINGS.get(ci.name)
    if paired is None:
        raise RefutationError(f"no paired family for {ci.name}")
    if family is None:
        family = paired
    if family != paired:
        raise RefutationError(f"{ci.name} is paired with {paired!r}, not {family!r}")
    if precision is None and lam > 10**6 and family != "geometric":
        precision = 60
    if family == "geometric":
        schedule = ((q, None) for q in primes(3, _GEOMETRIC_MAX_Q))
    else:
        schedule = _eps_schedule(precision)
    for parameter, digits in schedule:
        margin, target, values = _margin_at(ci, family, parameter, lam, digits)
        if margin < 0:
            return RefutationWitness(
                ci.name, family, parameter, lam, margin, target, values, digits
            )
    raise RefutationError(
        f"sweep exhausted for {ci.name}/{family} at lambda bound {lam}"
    )


def refutation_curve(
    ci: ConditionalInequality | str,
    lambda_list: Sequence,
    family: str | None = None,
) -> list[tuple[Fraction, RefutationWitness]]:
    """Witness per lambda bound; shows the witness parameter drift with L."""
    out = []
    for lam in lambda_list:
        lam = Fraction(lam)
        out.append((lam, refute(ci, family, lam)))
    return out

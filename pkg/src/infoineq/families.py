"""Parametric counterexample families with exact rational parameters.

Five binary four-variable families (``claim1`` .. ``claim5``), each defined by
a small atom table in a rational parameter eps, plus the geometric family over
a prime field: a uniform distribution on (point A, point B, line C, parabola D)
configurations of the affine plane.  Every family keeps a set of structural
zero constraints exactly, for every in-domain parameter; the interesting
behaviour is how the remaining quantities scale as the parameter degenerates.

Parameters must be rationals so the structural checks stay exact; floats are
rejected.  The geometric family comes in two forms: explicit enumeration
(``geometric``, primes up to 31) and a closed-form entropy profile
(``geometric_closed_profile``, any prime), validated against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .distribution import EntropyVector, JointDistribution, entropy_profile, format_real
from .expressions import InfoExpression

GEOMETRIC_ENUMERATION_MAX_Q = 31  # q**4 (q-1) atoms; 31 is ~2.8e7, the memory limit


class ParameterError(ValueError):
    """Family parameter outside its domain or not an exact rational."""


def _rational(value) -> Fraction:
    if isinstance(value, float):
        raise ParameterError("family parameters must be exact rationals, not floats")
    try:
        return Fraction(value)
    except (ValueError, TypeError) as exc:
        raise ParameterError(f"cannot read {value!r} as a rational") from exc


@dataclass(frozen=True)
class ParametricFamily:
    name: str
    var_names: tuple[str, ...]
    domain: tuple[Fraction, Fraction]  # closed interval for eps families
    build: Callable[[Fraction], dict[tuple[int, ...], Fraction]]


def _claim1(eps: Fraction):
    q = (1 - eps) / 4
    return {
        (0, 0, 0, 1): q,
        (0, 1, 0, 0): q,
        (1, 0, 0, 1): q,
        (1, 1, 0, 1): q,
        (1, 0, 1, 1): eps,
    }


def _claim2(eps: Fraction):
    r = Fraction(1, 3) - eps
    return {
        (0, 0, 0, 0): 3 * eps,
        (1, 1, 0, 0): r,
        (1, 0, 1, 0): r,
        (0, 1, 0, 1): r,
    }


def _claim3(eps: Fraction):
    r = Fraction(1, 2) - eps
    return {
        (1, 1, 0, 0): r,
        (0, 1, 1, 0): eps,
        (1, 0, 1, 0): eps,
        (0, 0, 1, 1): r,
    }


def _claim4(eps: Fraction):
    quarter = Fraction(1, 4)
    return {
        (0, 0, 0, 0): eps,
        (1, 1, 0, 0): eps,
        (0, 1, 1, 0): quarter,
        (1, 1, 1, 0): quarter - eps,
        (0, 0, 0, 1): quarter - eps,
        (1, 0, 0, 1): quarter,
    }


def _claim5(eps: Fraction):
    r = Fraction(1, 2) - eps
    return {
        (0, 0, 0, 0): r,
        (0, 1, 0, 1): r,
        (1, 0, 1, 0): eps,
        (1, 1, 0, 0): eps,
    }


FAMILIES: dict[str, ParametricFamily] = {
    "claim1": ParametricFamily("claim1", ("A", "B", "C", "D"), (Fraction(0), Fraction(1)), _claim1),
    "claim2": ParametricFamily("claim2", ("A", "B", "C", "D"), (Fraction(0), Fraction(1, 3)), _claim2),
    "claim3": ParametricFamily("claim3", ("A", "B", "C", "D"), (Fraction(0), Fraction(1, 2)), _claim3),
    "claim4": ParametricFamily("claim4", ("A", "B", "C", "D"), (Fraction(0), Fraction(1, 4)), _claim4),
    "claim5": ParametricFamily("claim5", ("A", "B", "C", "D"), (Fraction(0), Fraction(1, 2)), _claim5),
}


def generate(name: str, param) -> JointDistribution:
    """Build a family member; zero-mass atoms at boundary parameters are omitted."""
    if name == "geometric":
        return geometric(int(param))
    if name not in FAMILIES:
        raise ParameterError(f"unknown family {name!r}")
    fam = FAMILIES[name]
    eps = _rational(param)
    lo, hi = fam.domain
    if not lo <= eps <= hi:
        raise ParameterError(f"{name} parameter {eps} outside [{lo}, {hi}]")
    atoms = {k: p for k, p in fam.build(eps).items() if p > 0}
    return JointDistribution(fam.var_names, (2, 2, 2, 2), atoms)


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def primes(start: int = 3, stop: int = 10**6):
    """Ascending primes in [start, stop]."""
    q = max(start, 2)
    while q <= stop:
        if is_prime(q):
            yield q
        q += 1


def _require_prime(q: int) -> int:
    q = int(q)
    if not is_prime(q) or q < 3:
        raise ParameterError(f"q must be an odd prime, got {q}")
    return q


def geometric(q: int) -> JointDistribution:
    """Uniform point/point/line/parabola configuration over the field of size q.

    C is a non-vertical line y = c0 + c1 x; A and B are (possibly equal)
    points on C; D ranges over the q-1 parabolas y = d0 + d1 x + d2 x**2
    (d2 != 0) whose intersection with C is exactly {A, B} -- for A = B that
    means C touches D at A only.  Every one of the q**4 (q-1) configurations
    has the same probability, which the difference-of-polynomials
    factorization below makes explicit: d(x) - c(x) = d2 (x - ax)(x - bx).
    """
    q = _require_prime(q)
    if q > GEOMETRIC_ENUMERATION_MAX_Q:
        raise ParameterError(
            f"enumeration is limited to q <= {GEOMETRIC_ENUMERATION_MAX_Q}; "
            "use geometric_closed_profile for larger q"
        )
    mass = Fraction(1, q**4 * (q - 1))
    atoms: dict[tuple[int, ...], Fraction] = {}
    for c0 in range(q):
        for c1 in range(q):
            c_idx = c0 * q + c1
            for ax in range(q):
                ay = (c0 + c1 * ax) % q
                a_idx = ax * q + ay
                for bx in range(q):
                    by = (c0 + c1 * bx) % q
                    b_idx = bx * q + by
                    s = (ax + bx) % q
                    p = (ax * bx) % q
                    for d2 in range(1, q):
                        # d(x) = c(x) + d2 (x - ax)(x - bx)
                        d1 = (c1 - d2 * s) % q
                        d0 = (c0 + d2 * p) % q
                        d_idx = ((d2 - 1) * q + d1) * q + d0
                        atoms[(a_idx, b_idx, c_idx, d_idx)] = mass
    return JointDistribution(
        ("A", "B", "C", "D"),
        (q * q, q * q, q * q, q * q * (q - 1)),
        atoms,
    )


def geometric_closed_coords(q: int) -> dict[int, float]:
    """Closed forms for the 15 subset entropies of the geometric family.

    With L = log2(q) and M = log2(q-1), counting configurations gives:

    * A, B, C are uniform on q**2 values; D is uniform on q**2 (q-1)
      parabolas (each parabola arises from exactly q**2 configurations:
      q(q-1) ordered point pairs plus q tangency points).
    * H(B|A): given A, the pair coincides with probability 1/q, otherwise B
      is uniform over the q(q-1) points off A's vertical line, so
      H(A,B) = 4L - L/q.
    * Given C, the points are independent and uniform on the line:
      H(A,C) = H(B,C) = 3L and H(A,B,C) = 4L.
    * Given D, each of its q tangent lines has probability 1/q**2 and each
      of its binom(q,2) secant lines probability 2/q**2, so
      H(C|D) = 2L - (q-1)/q and H(C,D) = 4L + M - (q-1)/q.
    * A is uniform on the q points of D, and distinct choices of the second
      point yield distinct lines: H(A,D) = 3L + M, H(A,C,D) = 4L + M.
    * (A,B) determines D up to the free leading coefficient
      (q-1 parabolas), and (B,C,D) determines A (the remaining intersection
      point, or B itself in the tangent case): every 3- and 4-subset
      containing D has entropy 4L + M.
    """
    q = _require_prime(q)
    L = math.log2(q)
    M = math.log2(q - 1)
    A, B, C, D = 1, 2, 4, 8
    return {
        A: 2 * L,
        B: 2 * L,
        C: 2 * L,
        D: 2 * L + M,
        A | B: 4 * L - L / q,
        A | C: 3 * L,
        B | C: 3 * L,
        A | D: 3 * L + M,
        B | D: 3 * L + M,
        C | D: 4 * L + M - (q - 1) / q,
        A | B | C: 4 * L,
        A | B | D: 4 * L + M,
        A | C | D: 4 * L + M,
        B | C | D: 4 * L + M,
        A | B | C | D: 4 * L + M,
    }


def geometric_closed_profile(q: int) -> EntropyVector:
    """Entropy profile of the geometric family from closed forms (any prime)."""
    return EntropyVector.from_values(4, geometric_closed_coords(q))


def lift_with_copy(d: JointDistribution, source: str, new_name: str) -> JointDistribution:
    """Adjoin a new variable that duplicates an existing one exactly."""
    if new_name in d.var_names:
        raise ParameterError(f"variable {new_name!r} already exists")
    idx = d.var_names.index(source)
    atoms = {key + (key[idx],): p for key, p in d.atoms.items()}
    return JointDistribution(
        d.var_names + (new_name,),
        d.alphabet_sizes + (d.alphabet_sizes[idx],),
        atoms,
    )


@dataclass(frozen=True)
class AsymptoticRow:
    eps: Fraction
    value: float
    over_eps: float
    over_eps2: float
    over_eps_log: float  # value / (eps * log2(1/eps))


def asymptotic_report(
    family: str, expr: InfoExpression, eps_list: Sequence
) -> list[AsymptoticRow]:
    """Evaluate ``expr`` on family members and tabulate the candidate scalings."""
    rows = []
    for raw in eps_list:
        eps = _rational(raw)
        d = generate(family, eps)
        value = expr.evaluate(entropy_profile(d))
        e = float(eps)
        if e <= 0 or e >= 1:
            raise ParameterError("asymptotic scalings need 0 < eps < 1")
        rows.append(
            AsymptoticRow(eps, value, value / e, value / (e * e), value / (e * math.log2(1 / e)))
        )
    return rows


def format_report(rows: Sequence[AsymptoticRow], tsv: bool = False) -> str:
    header = ("eps", "value", "value/eps", "value/eps^2", "value/(eps*log2(1/eps))")
    table = [header] + [
        (
            str(r.eps),
            format_real(r.value),
            format_real(r.over_eps),
            format_real(r.over_eps2),
            format_real(r.over_eps_log),
        )
        for r in rows
    ]
    if tsv:
        return "\n".join("\t".join(row) for row in table)
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    return "\n".join(
        "  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in table
    )

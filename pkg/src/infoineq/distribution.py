"""Finite joint distributions with exact rational probabilities.

A :class:`JointDistribution` stores the atoms (value tuple -> probability) of
a distribution over named discrete variables.  Probabilities are strictly
positive :class:`fractions.Fraction` values that sum to exactly 1; atoms of
probability zero are never stored, so ``0 * log 0`` terms simply do not occur.

Two views coexist deliberately:

* structural facts (conditional independence, functional dependence) are
  decided by exact rational identities on the atoms and are never inferred
  from floating-point entropies;
* entropy values (in bits, base-2 logarithms throughout) are computed in
  floating point with compensated summation, accurate to ~15 significant
  digits, and collected into an :class:`EntropyVector`.

All values are immutable after construction; every function here is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .subsets import bit_indices, iter_nonempty, lex_masks, mask_label


class InvalidDistribution(ValueError):
    """The atoms violate the distribution contract."""


class MaskError(ValueError):
    """A subset mask is empty, out of range, or overlaps where forbidden."""


Atom = tuple[int, ...]


class JointDistribution:
    """Immutable finite joint distribution over named discrete variables."""

    __slots__ = ("var_names", "alphabet_sizes", "atoms", "_weights")

    def __init__(
        self,
        var_names: Sequence[str],
        alphabet_sizes: Sequence[int],
        atoms: Mapping[Atom, Fraction],
    ):
        var_names = tuple(var_names)
        alphabet_sizes = tuple(int(s) for s in alphabet_sizes)
        if not var_names:
            raise InvalidDistribution("at least one variable is required")
        if len(set(var_names)) != len(var_names):
            raise InvalidDistribution(f"duplicate variable names in {var_names}")
        if len(alphabet_sizes) != len(var_names):
            raise InvalidDistribution("alphabet_sizes and var_names lengths differ")
        if any(s < 1 for s in alphabet_sizes):
            raise InvalidDistribution("alphabet sizes must be positive")
        clean: dict[Atom, Fraction] = {}
        total = Fraction(0)
        n = len(var_names)
        for key in sorted(atoms):
            p = Fraction(atoms[key])
            key = tuple(int(v) for v in key)
            if len(key) != n:
                raise InvalidDistribution(f"atom {key} has wrong arity (expected {n})")
            for v, size in zip(key, alphabet_sizes):
                if not 0 <= v < size:
                    raise InvalidDistribution(f"value {v} out of range in atom {key}")
            if p <= 0:
                raise InvalidDistribution(f"non-positive probability {p} for atom {key}")
            if key in clean:
                raise InvalidDistribution(f"duplicate atom {key}")
            clean[key] = p
            total += p
        if total != 1:
            raise InvalidDistribution(f"probabilities sum to {total}, expected exactly 1")
        object.__setattr__(self, "var_names", var_names)
        object.__setattr__(self, "alphabet_sizes", alphabet_sizes)
        object.__setattr__(self, "atoms", clean)
        object.__setattr__(self, "_weights", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("JointDistribution is immutable")

    @property
    def n(self) -> int:
        return len(self.var_names)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, JointDistribution)
            and self.var_names == other.var_names
            and self.alphabet_sizes == other.alphabet_sizes
            and self.atoms == other.atoms
        )

    def __repr__(self) -> str:
        return (
            f"JointDistribution(vars={','.join(self.var_names)}, "
            f"support={len(self.atoms)})"
        )

    def scaled_weights(self) -> tuple[dict[Atom, int], int]:
        """Atoms as integer weights over a common denominator (cached).

        Structural checks run on these so every comparison is integer-exact
        and cheap even for large uniform supports.
        """
        cached = self._weights
        if cached is None:
            denom = math.lcm(*(p.denominator for p in self.atoms.values()))
            cached = (
                {k: p.numerator * (denom // p.denominator) for k, p in self.atoms.items()},
                denom,
            )
            object.__setattr__(self, "_weights", cached)
        return cached


@dataclass(frozen=True)
class EntropyVector:
    """Point in R^(2^n - 1): joint entropies (bits) of all nonempty subsets."""

    n: int
    coords: tuple[float, ...]

    def __post_init__(self):
        if len(self.coords) != (1 << self.n) - 1:
            raise ValueError(f"expected {(1 << self.n) - 1} coordinates")
        for x in self.coords:
            if not math.isfinite(x) or x < 0:
                raise ValueError(f"coordinate {x} is not finite and nonnegative")

    def value(self, mask: int) -> float:
        if not 1 <= mask <= (1 << self.n) - 1:
            raise MaskError(f"mask {mask} out of range for n={self.n}")
        return self.coords[mask - 1]

    @classmethod
    def from_values(cls, n: int, values: Mapping[int, float]) -> "EntropyVector":
        return cls(n, tuple(values[m] for m in iter_nonempty(n)))

    def lines(self, var_names: Sequence[str]) -> list[str]:
        """Printable ``H(...) = value`` lines in lexicographic subset order."""
        return [
            f"H({mask_label(m, var_names)}) = {format_real(self.value(m))}"
            for m in lex_masks(self.n)
        ]


def format_real(x: float) -> str:
    """Reals printed with 12 significant digits, trailing zeros trimmed."""
    return f"{float(x):.12g}"


def neumaier_sum(terms: Iterable[float]) -> float:
    """Compensated (Neumaier) floating summation."""
    total = 0.0
    comp = 0.0
    for t in terms:
        s = total + t
        if abs(total) >= abs(t):
            comp += (total - s) + t
        else:
            comp += (t - s) + total
        total = s
    return total + comp


def _project(key: Atom, indices: tuple[int, ...]) -> Atom:
    return tuple(key[i] for i in indices)


def marginal(d: JointDistribution, s: int) -> JointDistribution:
    """Exact marginal of ``d`` onto the variables of nonempty mask ``s``."""
    if s == 0:
        raise MaskError("marginal requires a nonempty mask")
    if s >> d.n:
        raise MaskError(f"mask {s} out of range for n={d.n}")
    idx = bit_indices(s)
    acc: dict[Atom, Fraction] = {}
    for key, p in d.atoms.items():
        proj = _project(key, idx)
        acc[proj] = acc.get(proj, Fraction(0)) + p
    return JointDistribution(
        [d.var_names[i] for i in idx],
        [d.alphabet_sizes[i] for i in idx],
        acc,
    )


def _marginal_weights(d: JointDistribution, s: int) -> dict[Atom, int]:
    """Integer-weight marginal onto mask ``s`` (mask 0 gives ``{(): total}``)."""
    weights, total = d.scaled_weights()
    if s == 0:
        return {(): total}
    idx = bit_indices(s)
    acc: dict[Atom, int] = {}
    for key, w in weights.items():
        proj = _project(key, idx)
        acc[proj] = acc.get(proj, 0) + w
    return acc


def _entropy_of_weights(weights: Iterable[int], total: int) -> float:
    """H = sum (w/T) log2(T/w), compensated, grouped by repeated weights."""
    counts: dict[int, int] = {}
    for w in weights:
        counts[w] = counts.get(w, 0) + 1
    terms = []
    for w in sorted(counts):
        if w == total:
            continue
        p = w / total
        terms.append(counts[w] * (-p * math.log2(p)))
    return neumaier_sum(terms)


def entropy_profile(d: JointDistribution) -> EntropyVector:
    """Entropy profile of ``d``: H(S) in bits for every nonempty subset S.

    Marginal masses are accumulated exactly over a common integer denominator;
    only the final ``p log2(1/p)`` terms are floating point.
    """
    values: dict[int, float] = {}
    for mask in iter_nonempty(d.n):
        weights = _marginal_weights(d, mask)
        total = sum(weights.values())
        values[mask] = _entropy_of_weights(weights.values(), total)
    return EntropyVector.from_values(d.n, values)


def subset_entropies_decimal(d: JointDistribution, digits: int) -> dict[int, Decimal]:
    """Entropy profile as ``Decimal`` values with ``digits`` precision.

    The slow path behind high-precision refutation sweeps; exact marginal
    weights are shared with the float path.  ln() dominates at thousands of
    digits, so logarithms are cached per distinct integer weight
    (H = -sum (w/T) (ln w - ln T) / ln 2, and the same few weights recur
    across the marginals).
    """
    out: dict[int, Decimal] = {}
    with localcontext() as ctx:
        ctx.prec = digits
        ln2 = Decimal(2).ln()
        ln_cache: dict[int, Decimal] = {}

        def ln_int(n: int) -> Decimal:
            value = ln_cache.get(n)
            if value is None:
                value = Decimal(n).ln()
                ln_cache[n] = value
            return value

        for mask in iter_nonempty(d.n):
            weights = _marginal_weights(d, mask)
            total = sum(weights.values())
            total_dec = Decimal(total)
            ln_total = ln_int(total)
            acc = Decimal(0)
            for w in sorted(weights.values()):
                if w != total:
                    acc -= (Decimal(w) / total_dec) * ((ln_int(w) - ln_total) / ln2)
            out[mask] = acc
    return out


def _check_disjoint(*masks: int) -> None:
    seen = 0
    for m in masks:
        if m & seen:
            raise MaskError("masks must be pairwise disjoint")
        seen |= m


def is_cond_independent(d: JointDistribution, a: int, b: int, c: int = 0) -> bool:
    """Exact test of I(a : b | c) = 0 on the atoms.

    True iff p(a,b,c) * p(c) == p(a,c) * p(b,c) holds as a rational identity
    for every value combination, including the zero-probability cells implied
    by positive pairs.  With ``c == 0`` this is plain independence.
    """
    if a == 0 or b == 0:
        raise MaskError("a and b must be nonempty")
    if (a | b | c) >> d.n:
        raise MaskError("mask out of range")
    _check_disjoint(a, b, c)
    w_abc = _marginal_weights(d, a | b | c)
    w_ac = _marginal_weights(d, a | c)
    w_bc = _marginal_weights(d, b | c)
    w_c = _marginal_weights(d, c)

    a_idx, b_idx, c_idx = bit_indices(a), bit_indices(b), bit_indices(c)
    ac_pos = {i: j for j, i in enumerate(bit_indices(a | c))}
    bc_pos = {i: j for j, i in enumerate(bit_indices(b | c))}
    u_pos = {i: j for j, i in enumerate(bit_indices(a | b | c))}
    a_in_ac = [ac_pos[i] for i in a_idx]
    c_in_ac = [ac_pos[i] for i in c_idx]
    b_in_bc = [bc_pos[i] for i in b_idx]
    c_in_bc = [bc_pos[i] for i in c_idx]
    a_in_u = [u_pos[i] for i in a_idx]
    b_in_u = [u_pos[i] for i in b_idx]
    c_in_u = [u_pos[i] for i in c_idx]

    # Group the positive (a,c) and (b,c) cells by their c-part; the identity
    # must hold over the full rectangle for each c, not just on the support.
    by_c_a: dict[Atom, list[tuple[Atom, int]]] = {}
    for key, w in w_ac.items():
        cv = tuple(key[j] for j in c_in_ac)
        av = tuple(key[j] for j in a_in_ac)
        by_c_a.setdefault(cv, []).append((av, w))
    by_c_b: dict[Atom, list[tuple[Atom, int]]] = {}
    for key, w in w_bc.items():
        cv = tuple(key[j] for j in c_in_bc)
        bv = tuple(key[j] for j in b_in_bc)
        by_c_b.setdefault(cv, []).append((bv, w))

    u_len = len(u_pos)
    for c_val, wc in w_c.items():
        for a_val, wa in by_c_a.get(c_val, []):
            for b_val, wb in by_c_b.get(c_val, []):
                joint = [0] * u_len
                for pos, v in zip(a_in_u, a_val):
                    joint[pos] = v
                for pos, v in zip(b_in_u, b_val):
                    joint[pos] = v
                for pos, v in zip(c_in_u, c_val):
                    joint[pos] = v
                if w_abc.get(tuple(joint), 0) * wc != wa * wb:
                    return False
    return True


def is_functional(d: JointDistribution, target: int, given: int) -> bool:
    """Exact test of H(target | given) = 0: one target value per given value."""
    if target == 0:
        raise MaskError("target mask must be nonempty")
    if (target | given) >> d.n:
        raise MaskError("mask out of range")
    _check_disjoint(target, given)
    t_idx = bit_indices(target)
    g_idx = bit_indices(given)
    seen: dict[Atom, Atom] = {}
    for key in d.atoms:
        g_val = _project(key, g_idx)
        t_val = _project(key, t_idx)
        prev = seen.setdefault(g_val, t_val)
        if prev != t_val:
            return False
    return True


# ---------------------------------------------------------------------------
# Text format: line 1 "vars: A B C D", then "<v1> ... <vn> : <num>/<den>".
# ---------------------------------------------------------------------------


def parse_distribution(text: str) -> JointDistribution:
    """Parse the distribution text format; '#' starts a comment."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines or not lines[0].startswith("vars:"):
        raise InvalidDistribution("first line must be 'vars: <name> ...'")
    var_names = lines[0][len("vars:"):].split()
    if not var_names:
        raise InvalidDistribution("no variable names declared")
    atoms: dict[Atom, Fraction] = {}
    for line in lines[1:]:
        if ":" not in line:
            raise InvalidDistribution(f"malformed atom line {line!r}")
        left, right = line.rsplit(":", 1)
        values = left.split()
        if len(values) != len(var_names):
            raise InvalidDistribution(
                f"atom line {line!r} has {len(values)} values, expected {len(var_names)}"
            )
        try:
            key = tuple(int(v) for v in values)
            prob = Fraction(right.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidDistribution(f"malformed atom line {line!r}: {exc}") from exc
        if key in atoms:
            raise InvalidDistribution(f"duplicate atom {key}")
        atoms[key] = prob
    if not atoms:
        raise InvalidDistribution("no atoms given")
    sizes = [max(key[i] for key in atoms) + 1 for i in range(len(var_names))]
    return JointDistribution(var_names, sizes, atoms)


def format_distribution(d: JointDistribution) -> str:
    out = ["vars: " + " ".join(d.var_names)]
    for key in sorted(d.atoms):
        prob = d.atoms[key]
        out.append(" ".join(str(v) for v in key) + f" : {prob}")
    return "\n".join(out) + "\n"

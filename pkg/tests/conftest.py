"""Shared test helpers: random exact-rational distributions, constraint-exact
construction patterns, and independent brute-force oracles."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import product

import pytest

from infoineq.distribution import JointDistribution
from infoineq.subsets import bit_indices


# ---------------------------------------------------------------------------
# Independent oracles.  These deliberately share no code with the package:
# full-box marginalization and plain ascending summation.
# ---------------------------------------------------------------------------


def oracle_subset_entropy(d: JointDistribution, mask: int) -> float:
    """Brute-force H(S): scan the whole alphabet box, plain sorted summation."""
    idx = bit_indices(mask)
    terms = []
    for combo in product(*[range(d.alphabet_sizes[i]) for i in idx]):
        p = Fraction(0)
        for key, prob in d.atoms.items():
            if tuple(key[i] for i in idx) == combo:
                p += prob
        if p > 0:
            terms.append(-float(p) * math.log2(float(p)))
    return sum(sorted(terms))


# ---------------------------------------------------------------------------
# Random exact-rational distributions.
# ---------------------------------------------------------------------------


def random_distribution(
    rng: random.Random, n: int, max_support: int, max_alphabet: int = 2
) -> JointDistribution:
    sizes = [rng.randint(2, max_alphabet) for _ in range(n)]
    box = list(product(*[range(s) for s in sizes]))
    count = rng.randint(1, min(max_support, len(box)))
    keys = rng.sample(box, count)
    weights = [rng.randint(1, 9) for _ in keys]
    total = sum(weights)
    atoms = {k: Fraction(w, total) for k, w in zip(keys, weights)}
    names = [f"X{i}" for i in range(n)]
    return JointDistribution(names, sizes, atoms)


# ---------------------------------------------------------------------------
# Shared-source construction patterns.  Variables are functions of jointly
# independent rational sources, arranged so that specific conditional
# independences / functional dependences hold exactly.
# ---------------------------------------------------------------------------


class Sources:
    def __init__(self, rng: random.Random, count: int, max_alphabet: int = 3):
        self.rng = rng
        self.sizes = [rng.randint(2, max_alphabet) for _ in range(count)]
        self.probs = []
        for size in self.sizes:
            weights = [rng.randint(1, 4) for _ in range(size)]
            total = sum(weights)
            self.probs.append([Fraction(w, total) for w in weights])

    def combos(self):
        for combo in product(*[range(s) for s in self.sizes]):
            p = Fraction(1)
            for i, v in enumerate(combo):
                p *= self.probs[i][v]
            yield combo, p

    def random_function(self, arg_indices: tuple[int, ...], out_size: int = 2):
        """A random function of the chosen sources (same table for all atoms)."""
        table = {}
        for sub in product(*[range(self.sizes[i]) for i in arg_indices]):
            table[sub] = self.rng.randrange(out_size)
        return lambda combo: table[tuple(combo[i] for i in arg_indices)]

    def projection(self, arg_indices: tuple[int, ...]):
        return lambda combo: tuple(combo[i] for i in arg_indices)


def dist_from_functions(sources: Sources, fns, names) -> JointDistribution:
    raw: dict[tuple, Fraction] = {}
    for combo, p in sources.combos():
        key = tuple(fn(combo) for fn in fns)
        raw[key] = raw.get(key, Fraction(0)) + p
    # Re-index every coordinate onto 0..k-1 so values are plain ints.
    maps = []
    for i in range(len(names)):
        values = sorted({key[i] for key in raw})
        maps.append({v: j for j, v in enumerate(values)})
    atoms = {
        tuple(maps[i][key[i]] for i in range(len(names))): p for key, p in raw.items()
    }
    sizes = [len(m) for m in maps]
    return JointDistribution(names, sizes, atoms)


def _pair(f, g):
    return lambda combo: (f(combo), g(combo))


def constraint_exact_instance(rng: random.Random, name: str) -> JointDistribution:
    """A random distribution satisfying the named registry entry's constraints
    exactly, via disjoint/shared independent sources."""
    if name == "weak":
        src = Sources(rng, 4)
        all_idx = list(range(4))
        rng.shuffle(all_idx)
        sa = tuple(sorted(all_idx[:2]))
        sb = tuple(sorted(all_idx[2:3]))
        sc = tuple(sorted(rng.sample(sa + sb, rng.randint(1, 3))))
        outside = tuple(i for i in range(4) if i not in sc)
        sd = tuple(sorted(rng.sample(outside, rng.randint(1, len(outside)))))
        fns = [src.projection(s) for s in (sa, sb, sc, sd)]
        return dist_from_functions(src, fns, ("A", "B", "C", "D"))

    src = Sources(rng, 5)
    u, v, r1, r2, r3 = 0, 1, 2, 3, 4
    everything = (0, 1, 2, 3, 4)
    if name == "I1":
        # A and B draw on disjoint sources; C reveals exactly (U, V).
        a = src.random_function((u, r1), 3)
        b = src.random_function((v, r2), 3)
        c = src.projection((u, v))
        d = src.random_function(everything, 4)
        fns, names = [a, b, c, d], ("A", "B", "C", "D")
    elif name == "I2":
        c = src.projection((u, v))
        a = src.random_function((u, v, r1), 3)
        b = src.random_function((v, r2), 3)
        d = src.random_function((u, v, r1, r3), 4)  # avoids B's private source
        fns, names = [a, b, c, d], ("A", "B", "C", "D")
    elif name == "I3":
        # C = (U, V) is recoverable from A and B, which stay conditionally
        # independent given it.
        a = _pair(src.projection((u,)), src.random_function((u, r1), 2))
        b = _pair(src.projection((v,)), src.random_function((v, r2), 2))
        c = src.projection((u, v))
        d = src.random_function(everything, 4)
        fns, names = [a, b, c, d], ("A", "B", "C", "D")
    elif name in ("I4", "I4p"):
        # C and D share the common part W0 = source u; A only sees W0.
        c = src.projection((u, r1))
        d = src.projection((u, r2))
        a = src.random_function((u, r3), 3)
        b = src.random_function(everything, 4)
        fns, names = [a, b, c, d], ("A", "B", "C", "D")
    elif name in ("I5", "I5p", "I6"):
        b = src.projection((u, r1))
        d = src.projection((u, r2))
        c = src.random_function((u, r3), 3)
        a = src.random_function(everything, 4)
        fns, names = [a, b, c, d], ("A", "B", "C", "D")
    else:
        raise ValueError(name)
    if name in ("I4", "I5", "I6"):
        fns.append(src.random_function(everything, 3))
        names = names + ("E",)
    return dist_from_functions(src, fns, names)


def double_markov_instance(rng: random.Random) -> JointDistribution:
    """(X, Y, Z, V) with I(X;Z|Y) = I(Y;Z|X) = 0 exactly: X and Y share a
    common part that screens Z off."""
    src = Sources(rng, 4)
    w0, rx, ry, rz = 0, 1, 2, 3
    x = src.projection((w0, rx))
    y = src.projection((w0, ry))
    z = src.random_function((w0, rz), 3)
    v = src.random_function((w0, rx, ry, rz), 3)
    return dist_from_functions(src, [x, y, z, v], ("X", "Y", "Z", "V"))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240811)

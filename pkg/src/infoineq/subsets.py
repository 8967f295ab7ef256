"""Bitmask encoding of variable subsets.

A subset of the variables ``(X_0, ..., X_{n-1})`` is a bitmask with bit i set
iff X_i is in the subset.  Entropy vectors are indexed by the nonempty masks
``1 .. 2**n - 1``.  The external (printed) order is lexicographic on the
sorted index tuples, e.g. for n=3: A, AB, ABC, AC, B, BC, C.
"""

from __future__ import annotations

from typing import Iterator, Sequence

DEFAULT_NAMES = "ABCDEF"


def full_mask(n: int) -> int:
    return (1 << n) - 1


def iter_nonempty(n: int) -> Iterator[int]:
    """All nonempty subset masks in increasing bitmask order."""
    return iter(range(1, 1 << n))


def bit_indices(mask: int) -> tuple[int, ...]:
    """Indices of the set bits, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lex_masks(n: int) -> list[int]:
    """Nonempty masks sorted in the external lexicographic order."""
    return sorted(iter_nonempty(n), key=bit_indices)


def mask_label(mask: int, var_names: Sequence[str]) -> str:
    """Render a mask as a comma-joined variable list, e.g. ``A,C``."""
    return ",".join(var_names[i] for i in bit_indices(mask))


def mask_of_names(names: Sequence[str], var_names: Sequence[str]) -> int:
    """Mask for the given variable names; raises KeyError on unknown names."""
    index = {name: i for i, name in enumerate(var_names)}
    mask = 0
    for name in names:
        if name not in index:
            raise KeyError(f"unknown variable {name!r} (declared: {list(var_names)})")
        mask |= 1 << index[name]
    return mask


def default_names(n: int) -> tuple[str, ...]:
    if n <= len(DEFAULT_NAMES):
        return tuple(DEFAULT_NAMES[:n])
    return tuple(f"X{i}" for i in range(n))

"""Exact rational phase-1 simplex for equality-form feasibility.

Decides whether ``sum_j x_j * col_j = rhs`` has a solution with ``x >= 0``.
All arithmetic is :class:`fractions.Fraction`; Bland's anti-cycling pivot rule
guarantees termination, so the answer is a true decision, never a numerical
guess.  On infeasibility the final dual values give a separating functional
``y`` with ``y . col_j <= 0`` for every column and ``y . rhs > 0`` (the
nontrivial half of the Farkas alternative); the caller re-checks it exactly
and can fall back to :func:`farkas_certificate_by_lp` in degenerate cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Vector = tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Feasible:
    x: Vector  # nonnegative combination coefficients, one per column


@dataclass(frozen=True)
class Infeasible:
    y: Vector  # Farkas dual: y.col_j <= 0 for all j, y.rhs > 0


def _phase1(columns: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Run phase-1 on the sign-normalized tableau; returns (tableau state)."""
    m = len(rhs)
    ncols = len(columns)
    signs = [_ONE if rhs[i] >= 0 else -_ONE for i in range(m)]
    # Rows: structural columns, then the m artificial identity columns, then b.
    width = ncols + m
    rows = []
    for i in range(m):
        row = [signs[i] * columns[j][i] for j in range(ncols)]
        row.extend(_ONE if k == i else _ZERO for k in range(m))
        row.append(signs[i] * rhs[i])
        rows.append(row)
    basis = [ncols + i for i in range(m)]
    # Phase-1 objective: minimize the sum of artificials.  Maintain the
    # reduced-cost row z[j] = c_j - c_B . B^-1 A_j (c = 1 on artificials).
    z = [_ZERO] * (width + 1)
    for j in range(width + 1):
        z[j] = (_ONE if ncols <= j < width else _ZERO) - sum(rows[i][j] for i in range(m))

    while True:
        enter = -1
        for j in range(width):  # Bland: lowest eligible index
            if z[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][width] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            raise RuntimeError("phase-1 objective is bounded; unbounded pivot is a bug")
        piv = rows[leave][enter]
        rows[leave] = [v / piv for v in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[leave])]
        if z[enter] != 0:
            f = z[enter]
            z = [v - f * w for v, w in zip(z, rows[leave])]
        basis[leave] = enter

    objective = -z[width]
    return rows, z, basis, signs, objective


def solve_nonneg_combination(
    columns: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Feasible | Infeasible:
    """Decide ``rhs = sum_j x_j col_j, x >= 0`` exactly."""
    m = len(rhs)
    ncols = len(columns)
    for col in columns:
        if len(col) != m:
            raise ValueError("column length does not match rhs length")
    if m == 0:
        return Feasible(tuple(_ZERO for _ in range(ncols)))
    rows, z, basis, signs, objective = _phase1(columns, rhs)
    width = ncols + m
    if objective == 0:
        x = [_ZERO] * ncols
        for i, var in enumerate(basis):
            if var < ncols:
                x[var] = rows[i][width]
            elif rows[i][width] != 0:  # degenerate artificial stuck at zero is fine
                raise RuntimeError("artificial variable basic at nonzero level")
        result = Feasible(tuple(x))
        _verify_feasible(columns, rhs, result.x)
        return result
    # Dual values from the artificial reduced costs: z_art[i] = 1 - y_i.
    y = tuple(signs[i] * (_ONE - z[ncols + i]) for i in range(m))
    if _farkas_holds(columns, rhs, y):
        return Infeasible(y)
    # Degenerate edge case: recover the certificate from the explicit
    # alternative system instead.
    y = farkas_certificate_by_lp(columns, rhs)
    return Infeasible(y)


def _verify_feasible(columns, rhs, x) -> None:
    m = len(rhs)
    for i in range(m):
        total = sum((x[j] * columns[j][i] for j in range(len(columns))), _ZERO)
        if total != rhs[i]:
            raise RuntimeError("simplex returned a non-solution; this is a bug")


def _farkas_holds(columns, rhs, y) -> bool:
    if sum((yi * bi for yi, bi in zip(y, rhs)), _ZERO) <= 0:
        return False
    for col in columns:
        if sum((yi * ci for yi, ci in zip(y, col)), _ZERO) > 0:
            return False
    return True


def farkas_certificate_by_lp(
    columns: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Vector:
    """Solve the explicit alternative system for an infeasible instance.

    Finds y with y.col_j <= 0 and y.rhs = 1 by writing y = u - v, adding
    slacks, and running the same phase-1.
    """
    m = len(rhs)
    ncols = len(columns)
    # Variables: u_1..u_m, v_1..v_m, s_1..s_ncols (all >= 0).
    # Equations: col_j . (u - v) + s_j = 0 for each j; rhs . (u - v) = 1.
    eq_count = ncols + 1
    cols2: list[list[Fraction]] = []
    for i in range(m):  # u_i
        cols2.append([columns[j][i] for j in range(ncols)] + [rhs[i]])
    for i in range(m):  # v_i
        cols2.append([-columns[j][i] for j in range(ncols)] + [-rhs[i]])
    for j in range(ncols):  # slack s_j
        col = [_ZERO] * eq_count
        col[j] = _ONE
        cols2.append(col)
    rhs2 = [_ZERO] * ncols + [_ONE]
    result = solve_nonneg_combination(cols2, rhs2)
    if not isinstance(result, Feasible):
        raise RuntimeError("both Farkas alternatives failed; this is a bug")
    y = tuple(result.x[i] - result.x[m + i] for i in range(m))
    if not _farkas_holds(columns, rhs, y):
        raise RuntimeError("alternative-system certificate failed verification")
    return y

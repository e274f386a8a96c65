"""Exact rational simplex (dictionary form) with anti-cycling.

Variables are implicitly non-negative; upper bounds are ordinary rows.
Pivoting uses Dantzig's rule while the objective improves and falls
back to Bland's rule during degenerate stretches, so termination is
guaranteed. All tableau arithmetic is exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rationals import Q, ZERO, ONE, rat


class LPInfeasible(Exception):
    pass


class LPUnbounded(Exception):
    pass


@dataclass
class LPProblem:
    """max sum objective[v] * x_v  s.t.  rows, x >= 0.

    Variables are hashable ids (subset bitmasks for lifted LPs).
    Each constraint is (coeffs: dict, sense: '<=' | '>=' | '==', rhs).
    """

    objective: dict
    constraints: list = field(default_factory=list)

    def add(self, coeffs: dict, sense: str, rhs):
        if sense not in ("<=", ">=", "=="):
            raise ValueError(f"bad sense {sense!r}")
        self.constraints.append((coeffs, sense, rat(rhs)))

    def variables(self) -> list:
        seen = dict.fromkeys(self.objective)
        for coeffs, _, _ in self.constraints:
            seen.update(dict.fromkeys(coeffs))
        return list(seen)


# consecutive degenerate pivots tolerated before switching to Bland's rule
_DEGENERATE_STREAK = 12


class _Dictionary:
    """x_basic[i] = b[i] + sum_j rows[i][j] * x_nonbasic[j]."""

    def __init__(self, ncols, rows, b, basic, nonbasic):
        self.rows = rows
        self.b = b
        self.basic = basic
        self.nonbasic = nonbasic
        self.obj = [ZERO] * ncols
        self.obj0 = ZERO
        self.degen = 0

    def pivot(self, i, j):
        rows, b = self.rows, self.b
        piv = rows[i][j]
        old = rows[i]
        width = len(old)
        inv = -1 / piv
        newrow = [v * inv for v in old]
        newrow[j] = -inv  # coefficient of the leaving variable
        newb = -b[i] / piv
        for r in range(len(rows)):
            if r == i:
                continue
            row = rows[r]
            f = row[j]
            if f == 0:
                continue
            row[j] = ZERO
            for k in range(width):
                if newrow[k] != 0:
                    row[k] = row[k] + f * newrow[k]
            b[r] = b[r] + f * newb
        f = self.obj[j]
        if f != 0:
            self.obj[j] = ZERO
            for k in range(width):
                if newrow[k] != 0:
                    self.obj[k] = self.obj[k] + f * newrow[k]
            self.obj0 = self.obj0 + f * newb
        rows[i] = newrow
        b[i] = newb
        self.basic[i], self.nonbasic[j] = self.nonbasic[j], self.basic[i]

    def _entering(self):
        obj = self.obj
        if self.degen >= _DEGENERATE_STREAK:
            best = None
            for j, c in enumerate(obj):
                if c > 0 and (best is None or self.nonbasic[j] < self.nonbasic[best]):
                    best = j
            return best
        best = None
        for j, c in enumerate(obj):
            if c > 0 and (best is None or c > obj[best]):
                best = j
        return best

    def _leaving(self, j):
        rows, b = self.rows, self.b
        best = None
        best_ratio = None
        for i in range(len(rows)):
            a = rows[i][j]
            if a < 0:
                ratio = -b[i] / a
                if (best is None or ratio < best_ratio
                        or (ratio == best_ratio and self.basic[i] < self.basic[best])):
                    best, best_ratio = i, ratio
        return best

    def optimize(self):
        while True:
            j = self._entering()
            if j is None:
                return
            i = self._leaving(j)
            if i is None:
                raise LPUnbounded("objective unbounded above")
            degenerate = self.b[i] == 0
            self.pivot(i, j)
            self.degen = self.degen + 1 if degenerate else 0


def _build_rows(problem: LPProblem, var_index):
    rows, b = [], []
    for coeffs, sense, rhs in problem.constraints:
        senses = [("<=", coeffs, rhs)] if sense != "==" else \
            [("<=", coeffs, rhs), (">=", coeffs, rhs)]
        if sense == ">=":
            senses = [(">=", coeffs, rhs)]
        for s, cf, r in senses:
            sign = 1 if s == "<=" else -1
            row = [ZERO] * len(var_index)
            for v, c in cf.items():
                row[var_index[v]] += sign * rat(c)
            rows.append([-x for x in row])  # dictionary form keeps -A
            b.append(sign * rat(r))
    return rows, b


def simplex_exact(problem: LPProblem):
    """Exact optimum of an LPProblem; returns (value, point dict).

    Raises LPUnbounded / LPInfeasible.
    """
    variables = problem.variables()
    nvars = len(variables)
    var_index = {v: i for i, v in enumerate(variables)}
    rows, b = _build_rows(problem, var_index)
    m = len(rows)
    basic = list(range(nvars, nvars + m))
    nonbasic = list(range(nvars))
    d = _Dictionary(nvars, rows, b, basic, nonbasic)

    if any(x < 0 for x in b):
        _phase_one(d)

    for v, c in problem.objective.items():
        j = var_index[v]
        c = rat(c)
        # express the objective over the current basis
        placed = False
        for jj, nb in enumerate(d.nonbasic):
            if nb == j:
                d.obj[jj] += c
                placed = True
                break
        if not placed:
            for i, bs in enumerate(d.basic):
                if bs == j:
                    d.obj0 += c * d.b[i]
                    for k in range(len(d.obj)):
                        if d.rows[i][k] != 0:
                            d.obj[k] += c * d.rows[i][k]
                    break
    d.degen = 0
    d.optimize()

    point = {v: ZERO for v in variables}
    for i, bs in enumerate(d.basic):
        if bs < nvars:
            point[variables[bs]] = d.b[i]
    return d.obj0, point


def _phase_one(d: _Dictionary):
    """Standard auxiliary-variable phase: maximize -x0 with x0 added to every row."""
    aux = max(d.basic) + 1
    for row in d.rows:
        row.append(ONE)
    d.nonbasic.append(aux)
    d.obj = [ZERO] * len(d.nonbasic)
    d.obj[-1] = Q(-1)
    d.obj0 = ZERO
    # initial pivot: x0 enters, the most negative row leaves
    i0 = min(range(len(d.b)), key=lambda i: (d.b[i], d.basic[i]))
    d.pivot(i0, len(d.nonbasic) - 1)
    d.degen = 0
    d.optimize()
    if d.obj0 != 0:
        raise LPInfeasible("phase one optimum is negative")
    if aux in d.basic:
        # degenerate at zero: pivot x0 out on any nonzero row entry
        i = d.basic.index(aux)
        j = next(j for j, v in enumerate(d.rows[i]) if v != 0)
        d.pivot(i, j)
    j = d.nonbasic.index(aux)
    for row in d.rows:
        del row[j]
    del d.nonbasic[j]
    d.obj = [ZERO] * len(d.nonbasic)
    d.obj0 = ZERO

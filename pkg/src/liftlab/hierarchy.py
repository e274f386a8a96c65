"""Sherali-Adams and Lasserre lifted-polytope membership, linear SA
constraints, and the uniform-knapsack gap certificate.

Lifted points are SetVectors over P_t(V) (SA) or P_2t(V) (Lasserre)
with y_0 = 1. Both membership checkers include the box constraints
x_i >= 0 and 1 - x_i >= 0 alongside the capacity constraint; without
them neither definition pins down [0,1] localization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .knapsack import (KnapsackInstance, LinearConstraint, Solution,
                       all_constraints, uniform_gap_instance)
from .psd import psd_exact_witness
from .rationals import Q, ZERO, ONE, rat, rat_str
from .subsets import (SetVector, SubsetFamily, family_p_t, indices_of,
                      mask_of, moment_matrix, submasks)


@dataclass(frozen=True)
class Violation:
    kind: str          # which matrix or inequality family failed
    witness: tuple     # item indices of the witnessing subset family / pair
    margin: object = None  # offending value (negative pivot, slack, ...)

    def describe(self) -> str:
        margin = "" if self.margin is None else f" (margin {self.margin})"
        return f"{self.kind} at {list(self.witness)}{margin}"


@dataclass
class MembershipReport:
    violations: list = field(default_factory=list)
    checked: int = 0

    @property
    def accepted(self) -> bool:
        return not self.violations

    def add(self, kind, witness, margin=None):
        self.violations.append(Violation(kind, tuple(witness), margin))

    def describe(self) -> str:
        if self.accepted:
            return f"accepted ({self.checked} checks)"
        head = f"rejected ({len(self.violations)} violations / {self.checked} checks)"
        lines = [head] + ["  " + v.describe() for v in self.violations[:20]]
        if len(self.violations) > 20:
            lines.append(f"  ... {len(self.violations) - 20} more")
        return "\n".join(lines)


def integer_to_moment(inst: KnapsackInstance, sol: Solution, depth: int) -> SetVector:
    """Moment vector of a feasible 0/1 point: y_I = 1 iff I is contained in it."""
    chosen = sol.chosen if isinstance(sol, Solution) else sol
    if chosen >> inst.n:
        raise ValueError("solution uses items outside the instance")
    if not inst.is_feasible(chosen):
        raise ValueError("solution is infeasible")
    values = {}
    for size in range(depth + 1):
        for combo in itertools.combinations(range(inst.n), size):
            m = mask_of(combo)
            values[m] = ONE if m & ~chosen == 0 else ZERO
    return SetVector(inst.n, values)


def convex_combination(parts) -> SetVector:
    """Coordinate-wise mixture of lifted vectors with matching supports."""
    parts = [(rat(w), y) for w, y in parts]
    if not parts:
        raise ValueError("empty combination")
    if any(w < 0 for w, _ in parts):
        raise ValueError("weights must be non-negative")
    if sum(w for w, _ in parts) != 1:
        raise ValueError("weights must sum to 1")
    support = set(parts[0][1].values)
    n = parts[0][1].n
    for _, y in parts[1:]:
        if y.n != n or set(y.values) != support:
            raise ValueError("supports must be identical")
    values = {m: sum((w * y.values[m] for w, y in parts), ZERO) for m in support}
    return SetVector(n, values)


def _iter_subsets(n: int, sizes) -> "itertools.chain":
    return itertools.chain.from_iterable(
        itertools.combinations(range(n), k) for k in sizes)


class _ShiftedValues:
    """Lazy, memoized entries of g*y: (g*y)_K = b y_K + sum_i a_i y_{K u i}."""

    __slots__ = ("y", "terms", "offset", "memo")

    def __init__(self, y: SetVector, g: LinearConstraint):
        self.y = y
        self.offset = g.offset
        self.terms = [(1 << i, a) for i, a in enumerate(g.coefficients) if a != 0]
        self.memo = {}

    def __call__(self, mask: int):
        v = self.memo.get(mask)
        if v is None:
            y = self.y
            v = self.offset * y[mask]
            for bit, a in self.terms:
                v += a * y[mask | bit]
            self.memo[mask] = v
        return v


def _powerset_psd(values, u_mask: int, cache: dict):
    """Exact PSD check of M_P(U)(values), memoized on the value pattern.

    `values` maps a bitmask to a rational; every entry of the matrix is
    a union of submasks of U, hence determined by the 2^|U| values on
    P(U). Distinct families with the same pattern (ubiquitous on
    symmetric instances) share one elimination.
    """
    subs = sorted(submasks(u_mask))
    key = tuple(values(s) for s in subs)
    hit = cache.get(key)
    if hit is not None:
        return hit
    val = dict(zip(subs, key))
    rows = [[val[a | b] for b in subs] for a in subs]
    res = psd_exact_witness(rows)
    cache[key] = res
    return res


def _check_unit_and_range(y: SetVector, report: MembershipReport):
    if y.get(0) != 1:
        report.add("y_empty", (), y.get(0) - 1)
    for m, v in y.values.items():
        if not (0 <= v <= 1):
            report.add("range", indices_of(m), v)
    report.checked += 1 + len(y.values)


def _require_support(y: SetVector, n: int, depth: int, what: str):
    if y.n != n:
        raise ValueError(f"{what}: ground-set size mismatch")
    need = sum(1 for _ in _iter_subsets(n, range(depth + 1)))
    if not y.extended and len(y.values) < need:
        raise ValueError(f"{what}: vector must be defined on all subsets of size <= {depth}")


def sa_membership(y: SetVector, inst: KnapsackInstance, t: int,
                  families: str = "all") -> MembershipReport:
    """Membership in the level-t Sherali-Adams lifted polytope.

    Checks y_0 = 1, M_P(U)(y) PSD for |U| <= t and M_P(W)(g*y) PSD for
    |W| <= t-1 over the capacity and box constraints. With
    families="maximal" only the largest families are eliminated; every
    smaller family indexes a principal submatrix of a maximal one, so
    the accept/reject decision is identical and much faster.
    """
    if not 1 <= t <= inst.n:
        raise ValueError("level t must satisfy 1 <= t <= n")
    if families not in ("all", "maximal"):
        raise ValueError("families must be 'all' or 'maximal'")
    _require_support(y, inst.n, t, "sa_membership")
    n = inst.n
    report = MembershipReport()
    _check_unit_and_range(y, report)

    u_sizes = [min(t, n)] if families == "maximal" else range(min(t, n) + 1)
    cache = {}
    for combo in _iter_subsets(n, u_sizes):
        ok, bad = _powerset_psd(y.__getitem__, mask_of(combo), cache)
        report.checked += 1
        if not ok:
            report.add("moment M_P(U)", combo, bad)

    w_max = min(t - 1, n)
    w_sizes = [w_max] if families == "maximal" else range(w_max + 1)
    for gi, g in enumerate(all_constraints(inst)):
        shifted = _ShiftedValues(y, g)
        cache = {}
        for combo in _iter_subsets(n, w_sizes):
            ok, bad = _powerset_psd(shifted, mask_of(combo), cache)
            report.checked += 1
            if not ok:
                report.add(f"constraint[{gi}] M_P(W)(g*y)", combo, bad)
    return report


def lasserre_membership(y: SetVector, inst: KnapsackInstance, t: int) -> MembershipReport:
    """Membership in the level-t Lasserre lifted polytope.

    Checks y_0 = 1, M_{P_t(V)}(y) PSD, and M_{P_{t-1}(V)}(g*y) PSD for
    the capacity and box constraints; y must live on P_2t(V).
    """
    if not 1 <= t <= inst.n:
        raise ValueError("level t must satisfy 1 <= t <= n")
    _require_support(y, inst.n, 2 * t, "lasserre_membership")
    n = inst.n
    report = MembershipReport()
    _check_unit_and_range(y, report)

    fam_t = family_p_t(n, t)
    ok, bad = psd_exact_witness(moment_matrix(y, fam_t))
    report.checked += 1
    if not ok:
        report.add("moment M_Pt(V)", (t,), bad)

    fam_tm1 = family_p_t(n, t - 1)
    for gi, g in enumerate(all_constraints(inst)):
        shifted = _ShiftedValues(y, g)
        rows = [[shifted(a | b) for b in fam_tm1.masks] for a in fam_tm1.masks]
        ok, bad = psd_exact_witness(rows)
        report.checked += 1
        if not ok:
            report.add(f"constraint[{gi}] M_Pt-1(V)(g*y)", (t - 1,), bad)
    return report


@dataclass(frozen=True)
class LiftedInequality:
    """sum_mask coeffs[mask] * y_mask >= 0, with y_0 a regular variable."""

    coeffs: tuple  # ((mask, coefficient), ...) sorted by mask
    tag: str

    def evaluate(self, y: SetVector):
        return sum((c * y[m] for m, c in self.coeffs), ZERO)


def _signed_base(i_mask: int, j_mask: int, extra_bit: int = 0) -> dict:
    """Coefficients of sum_{L <= J} (-1)^|L| y_{I u L u extra}."""
    out = {}
    for l in submasks(j_mask):
        m = i_mask | l | extra_bit
        c = Q(-1 if l.bit_count() % 2 else 1)
        out[m] = out.get(m, ZERO) + c
    return out


def _merge(into: dict, other: dict, scale):
    for m, c in other.items():
        into[m] = into.get(m, ZERO) + scale * c
    return into


def _as_ineq(coeffs: dict, tag: str) -> LiftedInequality:
    items = tuple(sorted((m, c) for m, c in coeffs.items() if c != 0))
    return LiftedInequality(items, tag)


def sa_linear_constraints(inst: KnapsackInstance, t: int) -> list[LiftedInequality]:
    """Level-t linear SA system for Knapsack over y in P_t(V).

    For every disjoint pair (I, J) with |I| + |J| <= t - 1 emits the
    lifted capacity inequality and, per item, the lifted bounds
    0 <= x_i <= 1. The normalization y_0 = 1 is the consumer's to add.
    """
    if t < 1:
        raise ValueError("level t must be >= 1")
    n = inst.n
    out = []
    for total in range(t):
        for ij in itertools.combinations(range(n), total):
            for i_size in range(total + 1):
                for i_combo in itertools.combinations(ij, i_size):
                    i_mask = mask_of(i_combo)
                    j_mask = mask_of(ij) & ~i_mask
                    base = _signed_base(i_mask, j_mask)
                    pair = f"I={list(i_combo)},J={indices_of(j_mask)}"
                    cap = {}
                    _merge(cap, base, inst.capacity)
                    for item in range(n):
                        _merge(cap, _signed_base(i_mask, j_mask, 1 << item),
                               -inst.sizes[item])
                    out.append(_as_ineq(cap, f"cap {pair}"))
                    for item in range(n):
                        lifted_i = _signed_base(i_mask, j_mask, 1 << item)
                        out.append(_as_ineq(lifted_i, f"lb i={item} {pair}"))
                        ub = dict(base)
                        _merge(ub, lifted_i, Q(-1))
                        out.append(_as_ineq(ub, f"ub i={item} {pair}"))
    return out


def certificate_alpha(n: int, eps, t: int):
    eps = rat(eps)
    capacity = 2 * (1 - eps)
    return capacity / (n + (t - 1) * (1 - eps))


def sa_gap_certificate(n: int, eps, t: int) -> SetVector:
    """The uniform-knapsack SA certificate: y_0 = 1, singletons alpha, rest 0."""
    eps = rat(eps)
    if not (0 < eps < Q(1, 2)):
        raise ValueError("eps must lie in (0, 1/2)")
    if not 2 <= t < n:
        raise ValueError("level must satisfy 2 <= t < n")
    alpha = certificate_alpha(n, eps, t)
    values = {0: ONE}
    for size in range(1, t + 1):
        for combo in itertools.combinations(range(n), size):
            values[mask_of(combo)] = alpha if size == 1 else ZERO
    return SetVector(n, values)


@dataclass(frozen=True)
class CertificateCheck:
    value: object              # n * alpha, exact
    report: MembershipReport
    bound: object              # (2 - eps) / (1 + delta), exact
    bound_ok: bool

    def describe(self) -> str:
        status = "holds" if self.bound_ok else "FAILS"
        return (f"certificate value {rat_str(self.value)} ~ {float(self.value):.6f}; "
                f"target {rat_str(self.bound)} ~ {float(self.bound):.6f}: {status}; "
                f"membership {self.report.describe()}")


def verify_gap_certificate(n: int, eps, t: int, delta,
                           families: str = "all") -> CertificateCheck:
    """Construct the certificate, check SA membership exactly, compare its
    value n*alpha against (2-eps)/(1+delta) (the uniform instance has OPT 1)."""
    eps, delta = rat(eps), rat(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if t > delta * n:
        raise ValueError("level t must satisfy t <= delta * n")
    cert = sa_gap_certificate(n, eps, t)
    inst = uniform_gap_instance(n, eps)
    report = sa_membership(cert, inst, t, families=families)
    value = n * certificate_alpha(n, eps, t)
    bound = (2 - eps) / (1 + delta)
    return CertificateCheck(value, report, bound, value >= bound)

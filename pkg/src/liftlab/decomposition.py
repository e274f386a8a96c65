"""Lasserre decomposition: split a vanishing-condition point into a convex
combination of conditioned vectors w^X, and verify all claimed properties.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .hierarchy import MembershipReport, lasserre_membership
from .knapsack import KnapsackInstance, opt_bruteforce, residual
from .rationals import ZERO, ONE
from .subsets import (SetVector, SubsetFamily, extend, family_p_t, indices_of,
                      mask_of, restrict_reindex, submasks, w_normalize,
                      z_vector)

MAX_SPLIT_SET = 16


@dataclass(frozen=True)
class DecompositionResult:
    s_mask: int
    k: int
    level: int  # the level t of the decomposed input
    parts: tuple  # ((x_mask, weight, w: SetVector over P_{2t-2k}(V)), ...)

    def weights(self):
        return [w for _, w, _ in self.parts]


def vanishing_condition(y: SetVector, s_mask: int, k: int) -> bool:
    """True iff every stored entry with |I n S| >= k is exactly zero."""
    return all(v == 0 for m, v in y.values.items()
               if (m & s_mask).bit_count() >= k)


def big_items(inst: KnapsackInstance, k: int) -> int:
    """Items with value strictly above OPT/k, as a bitmask."""
    if k < 1:
        raise ValueError("threshold k must be >= 1")
    cutoff = opt_bruteforce(inst) / k
    return mask_of(i for i in range(inst.n) if inst.values[i] > cutoff)


def overflow_vanishing_check(y: SetVector, inst: KnapsackInstance,
                             s_mask: int, t: int, tol=0) -> MembershipReport:
    """Check that y_I vanishes whenever the S-part of I overflows the capacity.

    tol=0 demands exact zeros; a positive tol admits rounded solver output.
    """
    report = MembershipReport()
    for m, v in y.values.items():
        report.checked += 1
        if inst.cost(m & s_mask) > inst.capacity:
            bad = (v != 0) if tol == 0 else (abs(v) > tol)
            if bad:
                report.add("overflow entry", indices_of(m), v)
    return report


def t_families(n: int, s_mask: int, t: int, k: int) -> tuple[SubsetFamily, SubsetFamily]:
    """The shift-closed families T1 = {A : |A\\S| <= t-k} and T2 (strict)."""
    if k >= t:
        raise ValueError("need k < t")
    outside = [i for i in range(n) if not (s_mask >> i) & 1]
    t1, t2 = [], []
    for inner in submasks(s_mask):
        for size in range(min(t - k, len(outside)) + 1):
            for combo in itertools.combinations(outside, size):
                m = inner | mask_of(combo)
                t1.append(m)
                if size < t - k:
                    t2.append(m)
    return SubsetFamily(t1), SubsetFamily(t2)


def decompose(y: SetVector, inst: KnapsackInstance, s_mask: int,
              k: int, t: int) -> DecompositionResult:
    """Split y (in La_t, vanishing on |I n S| >= k) into sum of z^X_0 * w^X.

    Exact-rational inputs only. Guarantees: weights positive and summing
    to 1, and sum weight * w^X reproducing y on P_{2t-2k}(V). A negative
    weight signals the input was not Lasserre-feasible and is an error.
    """
    if not 1 <= k < t:
        raise ValueError("need 1 <= k < t")
    if s_mask.bit_count() > MAX_SPLIT_SET:
        raise ValueError(f"|S| capped at {MAX_SPLIT_SET}")
    if s_mask >> inst.n:
        raise ValueError("S outside the ground set")
    if not vanishing_condition(y, s_mask, k):
        raise ValueError("vanishing condition |I n S| >= k => y_I = 0 fails")
    yext = extend(y)
    target = family_p_t(inst.n, 2 * (t - k))
    parts = []
    total = ZERO
    for x_mask in sorted(submasks(s_mask)):
        z = z_vector(yext, s_mask, x_mask, masks=target.masks)
        weight = z[0]
        total += weight
        if weight < 0:
            raise ValueError(
                f"negative weight {weight} for X={indices_of(x_mask)}: "
                "input is not Lasserre-feasible")
        if weight == 0:
            continue
        parts.append((x_mask, weight, w_normalize(z, weight)))
    if total != y.get(0, ZERO):
        raise ValueError("weights do not sum to y_0 (input support inconsistent)")
    if y.get(0) != 1:
        raise ValueError("expected a normalized lifted point (y_0 = 1)")
    return DecompositionResult(s_mask, k, t, tuple(parts))


def verify_decomposition(res: DecompositionResult, y: SetVector,
                         inst: KnapsackInstance, t: int, k: int) -> MembershipReport:
    """Verify the four decomposition properties, each reported separately:

    (a) w^X is 0/1 on S, matching X;
    (b) w^X is level-(t-k) Lasserre feasible for the instance;
    (c) w^X restricted to V\\S is feasible for the residual instance at t-k;
    (d) sum weight * w^X reconstructs y on P_{2t-2k}(V).
    """
    report = MembershipReport()
    n = inst.n
    s_mask = res.s_mask
    for x_mask, weight, w in res.parts:
        xi = indices_of(x_mask)
        for j in indices_of(s_mask):
            expected = ONE if (x_mask >> j) & 1 else ZERO
            report.checked += 1
            if w[1 << j] != expected:
                report.add("w 0/1 pattern on S", (tuple(xi), j), w[1 << j] - expected)

        sub = lasserre_membership(w, inst, t - k)
        report.checked += sub.checked
        if not sub.accepted:
            report.add("w membership La_{t-k}", tuple(xi), len(sub.violations))

        keep_mask = ((1 << n) - 1) & ~s_mask
        if keep_mask:
            fixed = {j: 1 if (x_mask >> j) & 1 else 0 for j in indices_of(s_mask)}
            sub_inst, _ = residual(inst, fixed)
            w_out = restrict_reindex(w, keep_mask)
            sub = lasserre_membership(w_out, sub_inst, t - k)
            report.checked += sub.checked
            if not sub.accepted:
                report.add("w membership La_{t-k}(residual)", tuple(xi),
                           len(sub.violations))

    for m in family_p_t(n, 2 * (t - k)).masks:
        recon = sum((weight * w[m] for _, weight, w in res.parts), ZERO)
        report.checked += 1
        if recon != y[m]:
            report.add("reconstruction", indices_of(m), recon - y[m])
    return report

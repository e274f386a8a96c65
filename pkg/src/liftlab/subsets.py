"""Subset-indexed exact algebra: bitmask families, shift operator, moment matrices.

Subsets of the ground set V = {0, ..., n-1} are encoded as int bitmasks
(n <= 63). Dense operations that enumerate the full power set are capped
at n <= 20.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .rationals import Q, ZERO, ONE, rat, rat_str

MAX_GROUND = 63
MAX_DENSE = 20


def popcount(mask: int) -> int:
    return mask.bit_count()


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def submasks(mask: int):
    """All submasks of `mask`, including 0 and mask itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def supersets_within(base: int, room: int):
    """All masks J with base <= J <= base | room (room disjoint from base)."""
    for extra in submasks(room):
        yield base | extra


def canon_key(mask: int) -> tuple[int, int]:
    """Canonical family order: cardinality first, then numeric bitmask."""
    return (mask.bit_count(), mask)


class SubsetFamily:
    """Ordered, deduplicated collection of subset bitmasks in canonical order."""

    __slots__ = ("masks", "index")

    def __init__(self, masks):
        ordered = sorted(set(masks), key=canon_key)
        self.masks: tuple[int, ...] = tuple(ordered)
        self.index: dict[int, int] = {m: i for i, m in enumerate(ordered)}

    def __len__(self):
        return len(self.masks)

    def __iter__(self):
        return iter(self.masks)

    def __contains__(self, mask):
        return mask in self.index

    def __eq__(self, other):
        return isinstance(other, SubsetFamily) and self.masks == other.masks

    def __repr__(self):
        return f"SubsetFamily({len(self.masks)} sets)"


def family_p_t(n: int, t: int) -> SubsetFamily:
    """P_t(V): all subsets of {0..n-1} of size at most t."""
    if n > MAX_GROUND:
        raise ValueError(f"ground set too large: {n} > {MAX_GROUND}")
    masks = [m for m in range(1 << n) if m.bit_count() <= t] if n <= MAX_DENSE \
        else _p_t_sparse(n, t)
    return SubsetFamily(masks)


def _p_t_sparse(n: int, t: int) -> list[int]:
    # enumerate by size to avoid scanning 2^n masks
    out = [0]
    frontier = [0]
    for _ in range(t):
        nxt = []
        for m in frontier:
            top = m.bit_length()
            for i in range(top, n):
                nxt.append(m | (1 << i))
        out.extend(nxt)
        frontier = nxt
    return out


def family_powerset(mask: int) -> SubsetFamily:
    """P(U) for the ground subset U given as a bitmask."""
    return SubsetFamily(submasks(mask))


def is_closed_under_shifting(family: SubsetFamily, s_mask: int) -> bool:
    """True iff Y in T and X subset of S imply X | Y in T."""
    for y in family.masks:
        for x in submasks(s_mask):
            if (x | y) not in family.index:
                return False
    return True


class SetVector:
    """Exact rational vector indexed by subsets of the ground set.

    Lookup outside the stored support raises KeyError unless the vector
    is flagged `extended`, in which case missing entries read as 0.
    """

    __slots__ = ("n", "values", "extended")

    def __init__(self, n: int, values: dict[int, "Q"], extended: bool = False):
        if n > MAX_GROUND:
            raise ValueError(f"ground set too large: {n} > {MAX_GROUND}")
        self.n = n
        self.values = values
        self.extended = extended

    def __getitem__(self, mask: int):
        v = self.values.get(mask)
        if v is not None:
            return v
        if self.extended:
            return ZERO
        if mask in self.values:
            return self.values[mask]
        raise KeyError(f"subset {indices_of(mask)} outside support of non-extended vector")

    def get(self, mask: int, default=ZERO):
        return self.values.get(mask, default)

    def support(self):
        return sorted(self.values, key=canon_key)

    def __eq__(self, other):
        if not isinstance(other, SetVector) or self.n != other.n:
            return NotImplemented
        keys = set(self.values) | set(other.values)
        return all(self.get(k) == other.get(k) for k in keys)

    def __repr__(self):
        nz = sum(1 for v in self.values.values() if v != 0)
        return f"SetVector(n={self.n}, {len(self.values)} stored, {nz} nonzero)"

    def copy(self) -> "SetVector":
        return SetVector(self.n, dict(self.values), self.extended)


def extend(y: SetVector) -> SetVector:
    """Extension: same stored entries, out-of-support lookups read as 0."""
    return SetVector(y.n, dict(y.values), extended=True)


def project(y: SetVector, family: SubsetFamily) -> SetVector:
    """Restrict y to the given family (entries must be readable)."""
    return SetVector(y.n, {m: y[m] for m in family.masks})


def restrict_reindex(y: SetVector, keep_mask: int) -> SetVector:
    """Keep only subsets of keep_mask and relabel its items as 0..|keep|-1."""
    keep = indices_of(keep_mask)
    pos = {i: p for p, i in enumerate(keep)}
    values = {}
    for m, v in y.values.items():
        if m & ~keep_mask:
            continue
        values[mask_of(pos[i] for i in indices_of(m))] = v
    return SetVector(len(keep), values, y.extended)


@dataclass(frozen=True)
class MultilinearPoly:
    """Multilinear polynomial sum_I a_I prod_{i in I} x_i, as coeffs per bitmask."""

    coeffs: dict[int, "Q"]

    def __call__(self, x_mask: int):
        # evaluate at a 0/1 point given by a bitmask
        total = ZERO
        for m, a in self.coeffs.items():
            if m & ~x_mask == 0:
                total += a
        return total


def char_poly(s_mask: int, x_mask: int) -> MultilinearPoly:
    """Indicator polynomial of assignment X on S: prod_{i in X} x_i prod_{j in S\\X} (1-x_j)."""
    if x_mask & ~s_mask:
        raise ValueError("X must be a subset of S")
    coeffs = {}
    for j in supersets_within(x_mask, s_mask & ~x_mask):
        sign = -1 if (j & ~x_mask).bit_count() % 2 else 1
        coeffs[j] = Q(sign)
    return MultilinearPoly(coeffs)


def shift(x: SetVector, y: SetVector) -> SetVector:
    """Shift operator: (x*y)_I = sum_J x_J y_{I u J} over the full power set."""
    n = x.n
    if n != y.n:
        raise ValueError("ground-set mismatch")
    if n > MAX_DENSE:
        raise ValueError(f"dense shift capped at n <= {MAX_DENSE}")
    if not (x.extended or len(x.values) == 1 << n):
        raise ValueError("x must be extended over the full power set")
    if not (y.extended or len(y.values) == 1 << n):
        raise ValueError("y must be extended over the full power set")
    xs = [(j, v) for j, v in x.values.items() if v != 0]
    values = {}
    for i in range(1 << n):
        acc = ZERO
        for j, v in xs:
            acc += v * y.get(i | j)
        values[i] = acc
    return SetVector(n, values, extended=True)


def poly_shift(p: MultilinearPoly, y: SetVector, masks=None) -> SetVector:
    """(P*y)_I = sum_J a_J y_{I u J}, on the given index masks.

    Defaults to y's stored support. Out-of-support reads follow y's
    extension flag.
    """
    if masks is None:
        masks = y.support()
    items = [(j, a) for j, a in p.coeffs.items() if a != 0]
    values = {}
    for i in masks:
        acc = ZERO
        for j, a in items:
            acc += a * y[i | j]
        values[i] = acc
    return SetVector(y.n, values)


def z_vector(yext: SetVector, s_mask: int, x_mask: int, masks=None) -> SetVector:
    """z^X = P^X * y': z^X_I = sum_{X <= J <= S} (-1)^{|J\\X|} y'_{I u J}."""
    if x_mask & ~s_mask:
        raise ValueError("X must be a subset of S")
    if not yext.extended:
        raise ValueError("z_vector requires an extended vector")
    if masks is None:
        if yext.n > MAX_DENSE:
            raise ValueError("default full-power-set support capped at n <= 20")
        masks = range(1 << yext.n)
    return poly_shift(char_poly(s_mask, x_mask), yext, masks)


def w_normalize(z: SetVector, z_empty) -> SetVector:
    """z / z_0 when z_0 != 0, the all-zero vector otherwise."""
    if z_empty != z.get(0):
        raise ValueError("z_empty does not match z's entry at the empty set")
    if z_empty == 0:
        return SetVector(z.n, {m: ZERO for m in z.values}, z.extended)
    return SetVector(z.n, {m: v / z_empty for m, v in z.values.items()}, z.extended)


class MomentMatrix:
    """M_T(y): symmetric rational matrix with entry (I, J) = y_{I u J}."""

    __slots__ = ("family", "rows")

    def __init__(self, family: SubsetFamily, rows: list[list]):
        self.family = family
        self.rows = rows

    @property
    def dim(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]


def moment_matrix(y: SetVector, family: SubsetFamily) -> MomentMatrix:
    masks = family.masks
    rows = []
    for i, mi in enumerate(masks):
        row = [None] * len(masks)
        for j in range(i + 1):
            row[j] = y[mi | masks[j]]
        rows.append(row)
    # mirror the lower triangle; unions are symmetric so this is exact
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            rows[i][j] = rows[j][i]
    return MomentMatrix(family, rows)


def setvector_to_json(y: SetVector) -> str:
    obj = {json.dumps(indices_of(m)): rat_str(v)
           for m, v in sorted(y.values.items(), key=lambda kv: canon_key(kv[0]))}
    return json.dumps(obj, indent=1)


def setvector_from_json(text: str, n: int, extended: bool = False) -> SetVector:
    obj = json.loads(text)
    values = {}
    for key, val in obj.items():
        idx = json.loads(key)
        m = mask_of(idx)
        if m >> n:
            raise ValueError(f"subset {idx} outside ground set of size {n}")
        values[m] = rat(val)
    return SetVector(n, values, extended)

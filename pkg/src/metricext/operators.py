"""Extension operators R^{X x X} -> R^{Y x Y}.

``T`` is the weighted series sum over levels n of ``T_n``, where ``T_n`` integrates
the label extension ``E(p)`` along the spliced step functions ``f_n``.  On a
finite space every ``T_n(p)(y, y')`` is constant in n from the stabilization
index N on, so the series is summed exactly as levels 1..N plus a geometric tail.

``S`` integrates p along the Dugundji map h; ``S1`` and ``S2`` add multiples of
the pseudometric d*(y, y') = min(d(y, y'), d(y, X) + d(y', X)).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .covers import MeshCoverFamily, splice
from .dugundji import InnerCover
from .hm import StepFunction, XPoint, integrate_pair
from .space import FiniteMetricSpace, Instance, SubsetSpec, subset_distances


class DiagVariant(str, enum.Enum):
    """Value of E(p) on a pair of equal cover labels."""

    PAPER_ZERO = "paper-zero"
    BASE_DIAGONAL = "base-diagonal"


S_FAMILY = ("S", "S1", "S2")


@dataclass(eq=False)
class ExtensionResult:
    matrix: np.ndarray
    operator: str
    level: int | None
    variant: DiagVariant | None
    scale: float
    tail: np.ndarray | None = field(default=None, repr=False)

    def metadata(self) -> dict:
        return {
            "operator": self.operator,
            "stabilization_level": self.level,
            "variant": self.variant.value if self.variant else None,
            "scale": self.scale,
        }


def eval_E(p: np.ndarray, subset: SubsetSpec, l1, l2, variant=DiagVariant.BASE_DIAGONAL) -> float:
    """Extension of p to labels X + cover elements, first matching clause wins."""
    ia, ib = subset.a_pos, subset.b_pos
    x1, x2 = isinstance(l1, XPoint), isinstance(l2, XPoint)
    if x1 and x2:
        return float(p[subset.position(l1.point), subset.position(l2.point)])
    if x1:
        i = subset.position(l1.point)
        return 0.5 * p[i, ia] + 0.5 * p[i, ib]
    if x2:
        j = subset.position(l2.point)
        return 0.5 * p[ia, j] + 0.5 * p[ib, j]
    if l1 != l2:
        return float(p[ia, ib])
    return 0.0 if DiagVariant(variant) is DiagVariant.PAPER_ZERO else float(p[ia, ia])


def label_table(p: np.ndarray, subset: SubsetSpec, n_cover: int, variant=DiagVariant.BASE_DIAGONAL) -> np.ndarray:
    """Dense E(p) over labels encoded as X positions 0..m-1 then cover elements m..m+n_cover-1."""
    m = len(subset)
    ia, ib = subset.a_pos, subset.b_pos
    table = np.empty((m + n_cover, m + n_cover))
    table[:m, :m] = p
    table[:m, m:] = (0.5 * p[:, ia] + 0.5 * p[:, ib])[:, None]
    table[m:, :m] = (0.5 * p[ia, :] + 0.5 * p[ib, :])[None, :]
    table[m:, m:] = p[ia, ib]
    diag = 0.0 if DiagVariant(variant) is DiagVariant.PAPER_ZERO else p[ia, ia]
    idx = np.arange(m, m + n_cover)
    table[idx, idx] = diag
    return table


def stabilization_index(space: FiniteMetricSpace, subset: SubsetSpec) -> int:
    """Smallest N such that from level N on every f_n(y), y outside X, is a single cover label."""
    outside = [y for y in range(space.n) if y not in subset]
    if not outside:
        return 1
    dX = subset_distances(space, subset)
    nearest = float(dX[outside].min())
    n_far = max(1, math.ceil(1.0 / nearest))
    while n_far * nearest < 1.0:
        n_far += 1
    while n_far > 1 and (n_far - 1) * nearest >= 1.0:
        n_far -= 1
    pair_mask = np.ones((space.n, space.n), dtype=bool)
    inside = list(subset.members)
    pair_mask[np.ix_(inside, inside)] = False
    np.fill_diagonal(pair_mask, False)
    gap = float(space.d[pair_mask].min())
    n_sep = 1
    while 2.0 ** -n_sep >= gap:
        n_sep += 1
    return max(n_far, n_sep)


def tail_value(p: np.ndarray, subset: SubsetSpec, y: int, y2: int, variant=DiagVariant.BASE_DIAGONAL) -> float:
    """The eventual constant value of T_n(p)(y, y2) for n >= N."""
    ia, ib = subset.a_pos, subset.b_pos
    inside1, inside2 = y in subset, y2 in subset
    if inside1 and inside2:
        return float(p[subset.position(y), subset.position(y2)])
    if inside1:
        i = subset.position(y)
        return 0.5 * p[i, ia] + 0.5 * p[i, ib]
    if inside2:
        j = subset.position(y2)
        return 0.5 * p[ia, j] + 0.5 * p[ib, j]
    if y != y2:
        return float(p[ia, ib])
    return 0.0 if DiagVariant(variant) is DiagVariant.PAPER_ZERO else float(p[ia, ia])


def tail_matrix(p: np.ndarray, subset: SubsetSpec, size: int, variant=DiagVariant.BASE_DIAGONAL) -> np.ndarray:
    return np.array([[tail_value(p, subset, y, z, variant) for z in range(size)] for y in range(size)])


def dstar(space: FiniteMetricSpace, subset: SubsetSpec, y: int, y2: int) -> float:
    dX = subset_distances(space, subset)
    return min(float(space.d[y, y2]), float(dX[y] + dX[y2]))


def dstar_matrix(space: FiniteMetricSpace, subset: SubsetSpec) -> np.ndarray:
    dX = subset_distances(space, subset)
    return np.minimum(space.d, dX[:, None] + dX[None, :])


@dataclass(frozen=True, eq=False)
class Encoded:
    """A family of step functions packed for the pair-integration kernel."""

    offsets: np.ndarray
    ends: np.ndarray
    labels: np.ndarray

    def row(self, y: int) -> tuple[np.ndarray, np.ndarray]:
        s, e = self.offsets[y], self.offsets[y + 1]
        return self.ends[s:e], self.labels[s:e]


def encode(functions: list[StepFunction], code) -> Encoded:
    offsets = [0]
    ends: list[float] = []
    labels: list[int] = []
    for f in functions:
        ends.extend(f.breakpoints[1:])
        labels.extend(code(v) for v in f.values)
        offsets.append(len(labels))
    return Encoded(np.asarray(offsets, dtype=np.intp), np.asarray(ends, dtype=np.float64),
                   np.asarray(labels, dtype=np.intp))


class ExtensionContext:
    """Covers and step functions of one instance, shared by all operator evaluations.

    Build it once; every evaluation afterwards only reads cached state.
    """

    def __init__(self, space: FiniteMetricSpace, subset: SubsetSpec):
        self.space = space
        self.subset = subset
        self.inner = InnerCover(space, subset)
        self.mesh = MeshCoverFamily(self.inner)
        self.dist_to_x = subset_distances(space, subset)
        self.level = stabilization_index(space, subset)
        self._levels: dict[int, Encoded] = {}
        m = len(subset)
        self._m = m
        h = [self.inner.map_h(y) for y in range(space.n)]
        self._h = encode(h, lambda v: subset.position(v.point))
        self._h_coded = [StepFunction(f.breakpoints, tuple(subset.position(v.point) for v in f.values)) for f in h]

    @classmethod
    def from_instance(cls, instance: Instance) -> ExtensionContext:
        return cls(instance.space, instance.subset)

    @property
    def n(self) -> int:
        return self.space.n

    def _code(self, n: int):
        subset, m = self.subset, self._m

        def code(label) -> int:
            if isinstance(label, XPoint):
                return subset.position(label.point)
            if label.level != n:
                raise ValueError(f"label {label!r} does not belong to level {n}")
            return m + label.index
        return code

    def level_encoding(self, n: int) -> Encoded:
        enc = self._levels.get(n)
        if enc is None:
            if self.mesh.is_discrete(n):
                enc = encode([self._discrete_fn(y, n) for y in range(self.n)], lambda v: v)
            else:
                enc = encode([self.mesh.map_fn(y, n) for y in range(self.n)], self._code(n))
            self._levels[n] = enc
        return enc

    def _discrete_fn(self, y: int, n: int) -> StepFunction:
        """f_n(y) with integer labels when the level-n cover is all singletons (element y sits at y)."""
        if y in self.subset:
            return StepFunction.constant(self.subset.position(y))
        return splice(StepFunction.constant(self._m + y), self._h_coded[y], self.mesh.splice_point(y, n))

    def check_p(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=np.float64)
        m = self._m
        if p.shape != (m, m):
            raise ValueError(f"p must be a {m}x{m} matrix over X, got shape {p.shape}")
        return np.ascontiguousarray(p)

    def support_set(self, y: int, y2: int) -> list[int]:
        """Point ids {a, b} + supp h(y) + supp h(y2): all that T(p)(y, y2) reads from p."""
        ids = {self.subset.a, self.subset.b}
        ids |= {v.point for v in self.inner.map_h(y).support}
        ids |= {v.point for v in self.inner.map_h(y2).support}
        return sorted(ids)

    # --- T ------------------------------------------------------------------

    def _table(self, p: np.ndarray, variant) -> tuple[np.ndarray, bool]:
        return label_table(p, self.subset, self.n, variant), bool(np.array_equal(p, p.T))

    def _integrate_level(self, n: int, table: np.ndarray, symmetric: bool) -> np.ndarray:
        enc = self.level_encoding(n)
        return kernels.integrate_all(enc.offsets, enc.ends, enc.labels, table, symmetric)

    def level_matrix(self, p, n: int, variant=DiagVariant.BASE_DIAGONAL) -> np.ndarray:
        """T_n(p) over all of Y x Y."""
        p = self.check_p(p)
        return self._integrate_level(n, *self._table(p, variant))

    def level_value(self, p, y: int, y2: int, n: int, variant=DiagVariant.BASE_DIAGONAL) -> float:
        p = self.check_p(p)
        enc = self.level_encoding(n)
        table, _ = self._table(p, variant)
        return kernels.integrate_one(*enc.row(y), *enc.row(y2), table)

    def partial_sums(self, p, depth: int, variant=DiagVariant.BASE_DIAGONAL):
        """Yield (M, levels 1..M of the series) for M = 1..depth, without the tail."""
        p = self.check_p(p)
        table, symmetric = self._table(p, variant)
        total = np.zeros((self.n, self.n))
        for level in range(1, depth + 1):
            total = total + 2.0 ** -level * self._integrate_level(level, table, symmetric)
            yield level, total

    def partial_sum(self, p, depth: int, variant=DiagVariant.BASE_DIAGONAL, with_tail: bool = True) -> np.ndarray:
        """Levels 1..depth of the series, plus 2**-depth times the tail when requested."""
        p = self.check_p(p)
        total = np.zeros((self.n, self.n))
        for _, total in self.partial_sums(p, depth, variant):
            pass
        if with_tail:
            total = total + 2.0 ** -depth * tail_matrix(p, self.subset, self.n, variant)
        return total

    def extend_T(self, p, variant=DiagVariant.BASE_DIAGONAL) -> ExtensionResult:
        p = self.check_p(p)
        variant = DiagVariant(variant)
        N = self.level
        table, symmetric = self._table(p, variant)
        tail = tail_matrix(p, self.subset, self.n, variant)
        # highest level first: for constant entries every step doubles exactly
        total = 2.0 ** -N * tail
        for level in range(N, 0, -1):
            total = total + 2.0 ** -level * self._integrate_level(level, table, symmetric)
        return ExtensionResult(total, "T", N, variant, self.space.scale, tail)

    def T_value(self, p, y: int, y2: int, variant=DiagVariant.BASE_DIAGONAL) -> float:
        """T(p)(y, y2) alone, summed in the same order as :meth:`extend_T`."""
        p = self.check_p(p)
        N = self.level
        table = label_table(p, self.subset, self.n, variant)
        total = 2.0 ** -N * tail_value(p, self.subset, y, y2, variant)
        for level in range(N, 0, -1):
            enc = self.level_encoding(level)
            total = total + 2.0 ** -level * kernels.integrate_one(*enc.row(y), *enc.row(y2), table)
        return total

    # --- S family -----------------------------------------------------------

    def extend_S(self, p) -> np.ndarray:
        p = self.check_p(p)
        h = self._h
        return kernels.integrate_all(h.offsets, h.ends, h.labels, p, bool(np.array_equal(p, p.T)))

    def extend_S_family(self, p, which: str = "S") -> ExtensionResult:
        if which not in S_FAMILY:
            raise ValueError(f"unknown operator {which!r}; choose from {S_FAMILY}")
        p = self.check_p(p)
        out = self.extend_S(p)
        if which != "S":
            ia, ib = self.subset.a_pos, self.subset.b_pos
            coef = p[ia, ib] if which == "S1" else p[ia, ib] - p[ia, ia]
            out = out + coef * dstar_matrix(self.space, self.subset)
        return ExtensionResult(out, which, None, None, self.space.scale)


def compute_Tn(ctx: ExtensionContext, p, y: int, y2: int, n: int, variant=DiagVariant.BASE_DIAGONAL) -> float:
    """T_n(p)(y, y2) straight from the definitions: label objects, E clauses and hm integration."""
    p = np.asarray(p, dtype=float)
    fy, fy2 = ctx.mesh.map_fn(y, n), ctx.mesh.map_fn(y2, n)
    return integrate_pair(lambda u, v: eval_E(p, ctx.subset, u, v, variant), fy, fy2)


def extend_T(ctx: ExtensionContext, p, variant=DiagVariant.BASE_DIAGONAL) -> ExtensionResult:
    return ctx.extend_T(p, variant)


def extend_S_family(ctx: ExtensionContext, p, which: str = "S") -> ExtensionResult:
    return ctx.extend_S_family(p, which)


def extend(ctx: ExtensionContext, p, operator: str, variant=DiagVariant.BASE_DIAGONAL) -> ExtensionResult:
    if operator == "T":
        return ctx.extend_T(p, variant)
    return ctx.extend_S_family(p, operator)

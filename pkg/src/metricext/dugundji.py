"""Dugundji-style inner cover of Y minus X and the maps u: Y -> finite subsets of X, h: Y -> HM(X).

Every outside point y gets a ball of radius d(y, X)/4, sent to its nearest
point of X.  For z in the closure of such a ball, d(z, alpha) <= 5/3 d(z, X),
which keeps u(z) inside the open ball of radius 2 d(z, X).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hm import StepFunction, XPoint, canonical_step
from .space import FiniteMetricSpace, SubsetSpec, nearest_in_subset, subset_distances

INNER_RADIUS_FRACTION = 0.25


@dataclass(frozen=True, eq=False)
class WeightedCover:
    """Ordered balls with a hat-function partition of unity.

    ``weights[z]`` lists ``(element index, weight)`` with positive weights
    summing to one, in element order.
    """

    centers: tuple[int, ...]
    radii: tuple[float, ...]
    members: tuple[frozenset, ...]
    weights: dict[int, tuple[tuple[int, float], ...]]

    def __len__(self) -> int:
        return len(self.centers)

    def diameter(self, d: np.ndarray, e: int) -> float:
        ids = sorted(self.members[e])
        return float(d[np.ix_(ids, ids)].max()) if ids else 0.0


def hat_cover(d: np.ndarray, centers, radii, candidates) -> WeightedCover:
    """Open balls ``{z in candidates : d(z, c) < r}`` with weights max(0, 1 - d(z, c)/r), normalized.

    Elements keep the order of ``centers``; callers pass centers sorted by id.
    """
    candidates = np.asarray(sorted(candidates), dtype=np.intp)
    members = []
    raw: dict[int, list[tuple[int, float]]] = {int(z): [] for z in candidates}
    for e, (c, r) in enumerate(zip(centers, radii)):
        r = float(r)
        dist = d[c, candidates]
        inside = candidates[dist < r]
        members.append(frozenset(int(z) for z in inside))
        for z in inside:
            raw[int(z)].append((e, 1.0 - float(d[c, z]) / r))
    weights = {}
    for z, entries in raw.items():
        total = sum(w for _, w in entries)
        weights[z] = tuple((e, w / total) for e, w in entries)
    return WeightedCover(tuple(int(c) for c in centers), tuple(float(r) for r in radii),
                         tuple(members), weights)


def weights_to_steps(entries, label) -> StepFunction:
    """Lay the weights out left to right: piece ``e`` has width weight(e) and value label(e)."""
    breaks = [0.0]
    acc = 0.0
    for _, w in entries:
        acc += w
        breaks.append(min(acc, 1.0))
    breaks[-1] = 1.0
    return canonical_step(breaks, [label(e) for e, _ in entries])


class InnerCover:
    """Inner cover of Y minus X together with the choice map alpha: element -> X."""

    def __init__(self, space: FiniteMetricSpace, subset: SubsetSpec):
        self.space = space
        self.subset = subset
        dX = subset_distances(space, subset)
        outside = [y for y in range(space.n) if y not in subset]
        self.cover = hat_cover(space.d, outside, [INNER_RADIUS_FRACTION * dX[y] for y in outside], outside)
        self.alpha = tuple(nearest_in_subset(space, subset, c) for c in self.cover.centers)
        self._h: dict[int, StepFunction] = {}

    def map_u(self, y: int) -> frozenset[int]:
        if y in self.subset:
            return frozenset((y,))
        d = self.space.d
        return frozenset(
            self.alpha[e]
            for e, (c, r) in enumerate(zip(self.cover.centers, self.cover.radii))
            if d[y, c] <= r
        )

    def map_h(self, y: int) -> StepFunction:
        if y not in self._h:
            if y in self.subset:
                self._h[y] = StepFunction.constant(XPoint(y))
            else:
                self._h[y] = weights_to_steps(self.cover.weights[y], lambda e: XPoint(self.alpha[e]))
        return self._h[y]


def build_inner_cover(space: FiniteMetricSpace, subset: SubsetSpec) -> InnerCover:
    return InnerCover(space, subset)

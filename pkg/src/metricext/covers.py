"""Mesh covers of Y at level n (element diameter < 2**-n) and the maps h_n, f_n."""
from __future__ import annotations

import math
import threading

import numpy as np

from .dugundji import InnerCover, WeightedCover, hat_cover, weights_to_steps
from .hm import CoverElement, StepFunction, XPoint, canonical_step
from .space import subset_distances

MESH_RADIUS_FRACTION = 0.49


def build_mesh_cover(d: np.ndarray, n: int) -> WeightedCover:
    """One ball of radius 0.49 * 2**-n around every point of Y."""
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    size = d.shape[0]
    r = math.ldexp(MESH_RADIUS_FRACTION, -n)
    off = d[~np.eye(size, dtype=bool)]
    if size == 1 or r <= off.min():
        # every ball is a singleton; built directly since r underflows at deep levels
        return WeightedCover(tuple(range(size)), (r,) * size,
                             tuple(frozenset((y,)) for y in range(size)),
                             {y: ((y, 1.0),) for y in range(size)})
    cover = hat_cover(d, range(size), [r] * size, range(size))
    for e in range(len(cover)):
        if cover.diameter(d, e) >= math.ldexp(1.0, -n):
            raise AssertionError(f"mesh element {e} at level {n} is too wide")
    return cover


def splice(head: StepFunction, tail: StepFunction, s: float) -> StepFunction:
    """``head`` squeezed onto [0, s) followed by ``tail`` squeezed onto [s, 1)."""
    if s >= 1.0:
        return head
    if s <= 0.0:
        return tail
    hb, hv = head.rescaled(0.0, s)
    tb, tv = tail.rescaled(s, 1.0)
    return canonical_step(hb + tb[1:], hv + tv)


class MeshCoverFamily:
    """Level-n covers built on first use and cached."""

    def __init__(self, inner: InnerCover):
        self.inner = inner
        self.space = inner.space
        self.subset = inner.subset
        self.dist_to_x = subset_distances(self.space, self.subset)
        self._covers: dict[int, WeightedCover] = {}
        self._lock = threading.Lock()
        d = self.space.d
        gap = d[~np.eye(d.shape[0], dtype=bool)].min() if d.shape[0] > 1 else math.inf
        level = 1
        while math.ldexp(MESH_RADIUS_FRACTION, -level) > gap:
            level += 1
        self.discrete_level = level  # from here on every mesh ball is a singleton

    def is_discrete(self, n: int) -> bool:
        return n >= self.discrete_level

    def cover(self, n: int) -> WeightedCover:
        cover = self._covers.get(n)
        if cover is None:
            with self._lock:
                cover = self._covers.get(n)
                if cover is None:
                    cover = self._covers[n] = build_mesh_cover(self.space.d, n)
        return cover

    def map_hn(self, y: int, n: int) -> StepFunction:
        return weights_to_steps(self.cover(n).weights[y], lambda e: CoverElement(n, e))

    def splice_point(self, y: int, n: int) -> float:
        return min(1.0, n * float(self.dist_to_x[y]))

    def map_fn(self, y: int, n: int) -> StepFunction:
        if y in self.subset:
            return StepFunction.constant(XPoint(y))
        return splice(self.map_hn(y, n), self.inner.map_h(y), self.splice_point(y, n))

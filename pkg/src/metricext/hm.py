"""Step functions [0, 1) -> labels and exact integration of pair functions along them.

A step function is the element of the Hartman-Mycielski space HM(L) over a label
alphabet L.  Labels are either points of the subset X or cover elements of some
mesh level.  All constructors return canonical step functions, so equality and
support are structural.
"""
from __future__ import annotations

from bisect import bisect_right
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True, order=True)
class XPoint:
    point: int

    def __repr__(self) -> str:
        return f"X{self.point}"


@dataclass(frozen=True, order=True)
class CoverElement:
    level: int
    index: int

    def __post_init__(self):
        if self.level < 1 or self.index < 0:
            raise ValueError(f"invalid cover element label ({self.level}, {self.index})")

    def __repr__(self) -> str:
        return f"U{self.level}.{self.index}"


Label = Union[XPoint, CoverElement]
PairValues = Union[Callable[[Label, Label], float], Mapping[tuple, float]]


class EvaluationError(KeyError):
    """A pair function was asked for a label pair it does not define."""

    def __init__(self, pair):
        super().__init__(f"pair function undefined on {pair!r}")
        self.pair = pair


@dataclass(frozen=True)
class StepFunction:
    """Canonical piecewise-constant map on [0, 1).

    ``values[i]`` is taken on ``[breakpoints[i], breakpoints[i + 1])``.
    """

    breakpoints: tuple[float, ...]
    values: tuple

    def __post_init__(self):
        bp, vals = self.breakpoints, self.values
        if len(vals) < 1 or len(bp) != len(vals) + 1:
            raise ValueError("need one value per interval and at least one interval")
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        for left, right in zip(bp, bp[1:]):
            if not left < right:
                raise ValueError(f"non-canonical step function: interval [{left}, {right})")
        for u, v in zip(vals, vals[1:]):
            if u == v:
                raise ValueError(f"non-canonical step function: repeated adjacent value {u!r}")

    @classmethod
    def constant(cls, label) -> StepFunction:
        return cls((0.0, 1.0), (label,))

    @property
    def support(self) -> frozenset:
        return frozenset(self.values)

    @property
    def pieces(self) -> int:
        return len(self.values)

    def widths(self) -> list[float]:
        return [r - l for l, r in zip(self.breakpoints, self.breakpoints[1:])]

    def __call__(self, t: float):
        if not 0.0 <= t < 1.0:
            raise ValueError(f"t={t} outside [0, 1)")
        return self.values[bisect_right(self.breakpoints, t) - 1]

    def rescaled(self, start: float, stop: float) -> tuple[list[float], list]:
        """Breakpoints and values of this function squeezed affinely onto [start, stop)."""
        span = stop - start
        bp = [start + span * t for t in self.breakpoints]
        bp[0], bp[-1] = start, stop
        return bp, list(self.values)


def canonical_step(breakpoints: Sequence[float], values: Sequence) -> StepFunction:
    """Drop zero-width intervals and merge equal neighbours."""
    bp = [float(t) for t in breakpoints]
    if len(bp) < 2 or len(values) != len(bp) - 1:
        raise ValueError("need at least two breakpoints and one value per interval")
    if bp[0] != 0.0:
        raise ValueError(f"breakpoints must start at 0, got {bp[0]}")
    if bp[-1] != 1.0:
        raise ValueError(f"breakpoints must end at 1, got {bp[-1]}")
    for left, right in zip(bp, bp[1:]):
        if right < left:
            raise ValueError(f"breakpoints decrease: {left} > {right}")

    out_bp = [0.0]
    out_vals: list = []
    for right, value in zip(bp[1:], values):
        if right == out_bp[-1]:
            continue
        if out_vals and out_vals[-1] == value:
            out_bp[-1] = right
        else:
            out_vals.append(value)
            out_bp.append(right)
    return StepFunction(tuple(out_bp), tuple(out_vals))


def refine_pair(f: StepFunction, g: StepFunction) -> list[tuple[float, object, object]]:
    """Common refinement of two step functions as (width, f-label, g-label) pieces."""
    pieces = []
    i = j = 0
    prev = 0.0
    fb, gb = f.breakpoints, g.breakpoints
    while i < len(f.values) and j < len(g.values):
        cut = min(fb[i + 1], gb[j + 1])
        pieces.append((cut - prev, f.values[i], g.values[j]))
        prev = cut
        if fb[i + 1] == cut:
            i += 1
        if gb[j + 1] == cut:
            j += 1
    return pieces


def _lookup(q: PairValues) -> Callable[[object, object], float]:
    if isinstance(q, Mapping):
        def get(u, v):
            try:
                return q[(u, v)]
            except KeyError:
                raise EvaluationError((u, v)) from None
        return get

    def call(u, v):
        try:
            return q(u, v)
        except KeyError:
            raise EvaluationError((u, v)) from None
    return call


def integrate_pair(q: PairValues, f: StepFunction, g: StepFunction) -> float:
    """Integral over [0, 1) of q(f(t), g(t)), computed exactly on the common refinement.

    ``q`` is either a callable on label pairs or a mapping keyed by label pairs.
    """
    get = _lookup(q)
    return sum(width * get(u, v) for width, u, v in refine_pair(f, g))

"""Finite metric spaces Y with a distinguished subset X and base points a, b."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

TRIANGLE_RTOL = 1e-9


class InstanceError(ValueError):
    """Invalid instance data. ``witness`` holds the offending ids or values."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    d: np.ndarray
    scale: float = 1.0
    coords: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.d.shape[0]


@dataclass(frozen=True)
class SubsetSpec:
    members: tuple[int, ...]
    a: int
    b: int
    _position: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_position", {x: i for i, x in enumerate(self.members)})

    def __contains__(self, y: int) -> bool:
        return y in self._position

    def __len__(self) -> int:
        return len(self.members)

    def position(self, x: int) -> int:
        """Index of point ``x`` in the sorted member list (the row of p)."""
        return self._position[x]

    @property
    def a_pos(self) -> int:
        return self._position[self.a]

    @property
    def b_pos(self) -> int:
        return self._position[self.b]


def triangle_violation(d: np.ndarray, rtol: float = TRIANGLE_RTOL) -> tuple[int, int, int] | None:
    """First (i, j, k) in lexicographic order with d[i, k] > d[i, j] + d[j, k] beyond rtol."""
    n = d.shape[0]
    for i in range(n):
        # through[j, k] = d[i, j] + d[j, k]
        through = d[i][:, None] + d
        bad = d[i][None, :] > through * (1.0 + rtol)
        if bad.any():
            j, k = np.argwhere(bad)[0]
            return i, int(j), int(k)
    return None


def validate_subset(n: int, subset, a: int, b: int) -> SubsetSpec:
    members = [int(x) for x in subset]
    if sorted(set(members)) != sorted(members):
        raise InstanceError("subset has repeated ids", witness=members)
    members.sort()
    if len(members) < 2:
        raise InstanceError("subset X needs at least two points", witness=members)
    bad = [x for x in members if not 0 <= x < n]
    if bad:
        raise InstanceError(f"subset ids out of range [0, {n})", witness=bad)
    if a == b:
        raise InstanceError("base points a and b must differ", witness=(a, b))
    for name, v in (("a", a), ("b", b)):
        if v not in members:
            raise InstanceError(f"base point {name}={v} is not in the subset", witness=v)
    return SubsetSpec(tuple(members), int(a), int(b))


def load_space(subset, a: int, b: int, distances=None, points=None) -> tuple[FiniteMetricSpace, SubsetSpec]:
    """Validate and normalize a metric (given as a matrix or as coordinates) plus subset.

    Distances are divided by the diameter when it exceeds 1.
    """
    if (distances is None) == (points is None):
        raise InstanceError("give exactly one of distances or points")
    coords = None
    if points is not None:
        coords = np.asarray(points, dtype=float)
        if coords.ndim == 1:
            coords = coords[:, None]
        if coords.ndim != 2 or coords.shape[0] < 1:
            raise InstanceError("points must be a non-empty list of coordinate lists")
        d = np.sqrt(((coords[:, None, :] - coords[None, :, :]) ** 2).sum(axis=-1))
    else:
        d = np.array(distances, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
            raise InstanceError(f"distance matrix must be square, got shape {d.shape}")
    n = d.shape[0]
    if not np.all(np.isfinite(d)):
        raise InstanceError("distances must be finite")
    neg = np.argwhere(d < 0)
    if len(neg):
        raise InstanceError("negative distance", witness=tuple(int(v) for v in neg[0]))
    diag = np.flatnonzero(np.diag(d) != 0)
    if len(diag):
        raise InstanceError("nonzero diagonal", witness=(int(diag[0]), int(diag[0])))
    asym = np.argwhere(d != d.T)
    if len(asym):
        raise InstanceError("distance matrix not symmetric", witness=tuple(int(v) for v in asym[0]))
    dup = np.argwhere((d == 0) & ~np.eye(n, dtype=bool))
    if len(dup):
        raise InstanceError("duplicate points (zero distance)", witness=tuple(int(v) for v in dup[0]))
    tri = triangle_violation(d)
    if tri is not None:
        raise InstanceError(f"triangle inequality violated at {tri}", witness=tri)

    sub = validate_subset(n, subset, a, b)
    scale = 1.0
    diameter = float(d.max())
    if diameter > 1.0:
        scale = diameter
        d = d / diameter
    d.setflags(write=False)
    space = FiniteMetricSpace(d=d, scale=scale, coords=coords)
    outside = [y for y in range(n) if y not in sub]
    # a genuine metric keeps every outside point at positive distance from X
    assert all(dist_to_subset(space, sub, y) > 0 for y in outside)
    return space, sub


def dist_to_subset(space: FiniteMetricSpace, subset: SubsetSpec, y: int) -> float:
    return float(space.d[y, list(subset.members)].min())


def nearest_in_subset(space: FiniteMetricSpace, subset: SubsetSpec, y: int) -> int:
    """Closest member of X to y; ties go to the lowest id."""
    row = space.d[y, list(subset.members)]
    return subset.members[int(np.argmin(row))]


def subset_distances(space: FiniteMetricSpace, subset: SubsetSpec) -> np.ndarray:
    """d(y, X) for every point y."""
    return space.d[:, list(subset.members)].min(axis=1)


@dataclass(frozen=True, eq=False)
class Instance:
    space: FiniteMetricSpace
    subset: SubsetSpec
    group: tuple[tuple[int, ...], ...] | None = None
    p: np.ndarray | None = None
    raw: dict | None = None

    @property
    def n(self) -> int:
        return self.space.n


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("instance must be a JSON object")
    if ("points" in data) == ("distances" in data):
        raise InstanceError("instance needs exactly one of 'points' or 'distances'")
    for key in ("subset", "a", "b"):
        if key not in data:
            raise InstanceError(f"instance is missing '{key}'")
    try:
        space, sub = load_space(
            data["subset"], int(data["a"]), int(data["b"]),
            distances=data.get("distances"), points=data.get("points"),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError(f"malformed instance: {exc}") from exc
    group = None
    if data.get("group") is not None:
        group = tuple(tuple(int(i) for i in g) for g in data["group"])
    p = None
    if data.get("p") is not None:
        p = np.array(data["p"], dtype=float)
        m = len(sub)
        if p.shape != (m, m):
            raise InstanceError(f"p must be {m}x{m} over the subset, got shape {p.shape}")
    return Instance(space=space, subset=sub, group=group, p=p, raw=data)


def load_instance(path: str | Path) -> Instance:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"cannot parse {path}: {exc}") from exc
    return instance_from_dict(data)

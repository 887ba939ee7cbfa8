"""Seeded random instances, random (pseudo)metrics and the bundled example instances."""
from __future__ import annotations

import math

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .space import InstanceError


def metric_closure(weights: np.ndarray) -> np.ndarray:
    """Shortest-path closure of a symmetric matrix with positive off-diagonal entries."""
    w = np.array(weights, dtype=float)
    np.fill_diagonal(w, 0.0)
    closed = shortest_path(w, method="FW", directed=False)
    return np.minimum(closed, closed.T)


def random_metric(m: int, rng: np.random.Generator, low: float = 0.1, high: float = 1.0) -> np.ndarray:
    w = rng.uniform(low, high, size=(m, m))
    return metric_closure(np.triu(w, 1) + np.triu(w, 1).T)


def random_pseudometric(m: int, rng: np.random.Generator) -> np.ndarray:
    """Metric on random clusters pulled back to m points, so distinct points may sit at distance 0."""
    k = int(rng.integers(1, m + 1))
    labels = rng.integers(0, k, size=m)
    if k == 1:
        return np.zeros((m, m))
    base = random_metric(k, rng, low=1e-3)
    return base[np.ix_(labels, labels)]


def random_instance(rng: np.random.Generator, n: int, x_size: int, dim: int | None = 2,
                    with_p: bool = True) -> dict:
    """Random instance dict: Euclidean points in the unit cube (``dim``) or a random metric (``dim=None``)."""
    if x_size < 2 or x_size > n:
        raise InstanceError(f"need 2 <= |X| <= n, got |X|={x_size}, n={n}")
    subset = sorted(int(v) for v in rng.choice(n, size=x_size, replace=False))
    data: dict = {}
    if dim is None:
        data["distances"] = random_metric(n, rng, low=0.05).tolist()
    else:
        data["points"] = rng.uniform(0.0, 1.0, size=(n, dim)).tolist()
    data.update(subset=subset, a=subset[0], b=subset[1])
    if with_p:
        data["p"] = random_metric(x_size, rng).tolist()
    return data


def instance_I1() -> dict:
    """Four points on a line; X = {0, 1}."""
    return {"points": [[0.0], [1.0], [0.4], [0.6]], "subset": [0, 1], "a": 0, "b": 1,
            "p": [[0.0, 1.0], [1.0, 0.0]]}


def instance_G1() -> dict:
    """Square corners X = {0, 1, 2, 3} plus the centre, with the rotation group of order 4."""
    rot = [1, 2, 3, 0, 4]
    perms = [list(range(5))]
    for _ in range(3):
        perms.append([rot[i] for i in perms[-1]])
    half = 0.5
    p = [[0.0 if i == j else (1.0 if (i - j) % 4 == 2 else half) for j in range(4)] for i in range(4)]
    return {
        "points": [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]],
        "subset": [0, 1, 2, 3], "a": 0, "b": 1, "group": perms, "p": p,
    }


def _match(coords: np.ndarray, moved: np.ndarray) -> list[int]:
    dist = np.linalg.norm(moved[:, None, :] - coords[None, :, :], axis=-1)
    perm = dist.argmin(axis=1)
    if dist[np.arange(len(perm)), perm].max() > 1e-9 or len(set(perm.tolist())) != len(perm):
        raise AssertionError("point cloud is not symmetric under the group")
    return [int(v) for v in perm]


def symmetric_group_instance(rng: np.random.Generator, max_points: int = 30) -> dict:
    """Concentric regular k-gons (plus maybe the centre) acted on by a cyclic or dihedral group.

    X is a union of whole rings, so it is invariant; p is a random metric on X
    averaged over the group.
    """
    from .group import average_A

    k = int(rng.integers(3, 7))
    dihedral = bool(rng.integers(0, 2))
    rings = int(rng.integers(1, min(4, (max_points - 1) // k) + 1))
    radii = np.sort(rng.uniform(0.2, 1.0, size=rings))
    while rings > 1 and np.diff(radii).min() < 0.05:
        radii = np.sort(rng.uniform(0.2, 1.0, size=rings))
    centre = bool(rng.integers(0, 2)) or rings == 1
    pts = []
    ring_ids = []
    for r in radii:
        phase = (math.pi / k) * int(rng.integers(0, 2)) if dihedral else rng.uniform(0, 2 * math.pi / k)
        ids = []
        for j in range(k):
            ang = phase + 2 * math.pi * j / k
            ids.append(len(pts))
            pts.append([r * math.cos(ang), r * math.sin(ang)])
        ring_ids.append(ids)
    if centre:
        pts.append([0.0, 0.0])
    coords = np.array(pts)

    transforms = []
    for s in range(k):
        t = 2 * math.pi * s / k
        rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
        transforms.append(rot)
        if dihedral:
            transforms.append(rot @ np.diag([1.0, -1.0]))
    perms = [_match(coords, coords @ t.T) for t in transforms]

    chosen = sorted(rng.choice(rings, size=int(rng.integers(1, rings + 1)), replace=False).tolist())
    subset = [i for c in chosen for i in ring_ids[c]]
    if centre and rng.integers(0, 2):
        subset.append(len(pts) - 1)
    if len(subset) == len(pts):
        # keep at least one point outside X
        subset = subset[:-1] if centre else [i for c in chosen[:-1] for i in ring_ids[c]]
    subset = sorted(subset)
    pos = {x: i for i, x in enumerate(subset)}
    on_x = np.array([[pos[g[x]] for x in subset] for g in perms])
    p = average_A(random_metric(len(subset), rng), on_x)
    return {"points": coords.tolist(), "subset": subset, "a": subset[0], "b": subset[1],
            "group": perms, "p": p.tolist()}

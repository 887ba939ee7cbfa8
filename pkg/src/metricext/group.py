"""Finite group actions on Y, group averaging of pair functions and the invariant extension A o T."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .operators import DiagVariant, ExtensionContext, ExtensionResult
from .space import FiniteMetricSpace, InstanceError, SubsetSpec

INVARIANCE_TOL = 1e-12


class GroupError(InstanceError):
    pass


@dataclass(frozen=True, eq=False)
class GroupAction:
    perms: np.ndarray  # shape (|G|, n); row g maps point y to perms[g, y]

    def __len__(self) -> int:
        return self.perms.shape[0]

    def on_subset(self, subset: SubsetSpec) -> np.ndarray:
        """The action restricted to X, in subset positions."""
        members = list(subset.members)
        return np.array([[subset.position(int(g[x])) for x in members] for g in self.perms], dtype=np.intp)


def validate_group(perms, subset: SubsetSpec, space: FiniteMetricSpace | None = None) -> GroupAction:
    """Check that ``perms`` lists every element of a group acting on Y that keeps X invariant."""
    arr = np.asarray(perms, dtype=np.intp)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise GroupError("group must be a non-empty list of permutations")
    n = arr.shape[1]
    ident = np.arange(n)
    for k, g in enumerate(arr):
        if not np.array_equal(np.sort(g), ident):
            raise GroupError(f"element {k} is not a permutation of 0..{n - 1}", witness=k)
    keys = {tuple(g): k for k, g in enumerate(arr)}
    if len(keys) != len(arr):
        raise GroupError("group lists an element twice", witness=[k for k in range(len(arr)) if keys[tuple(arr[k])] != k][0])
    if tuple(ident) not in keys:
        raise GroupError("identity missing from group")
    for k, g in enumerate(arr):
        inv = np.empty_like(g)
        inv[g] = ident
        if tuple(inv) not in keys:
            raise GroupError(f"inverse of element {k} missing", witness=k)
        for j, h in enumerate(arr):
            if tuple(g[h]) not in keys:
                raise GroupError(f"not closed: element {k} after element {j} is missing", witness=(k, j))
    members = set(subset.members)
    for k, g in enumerate(arr):
        moved = [x for x in subset.members if int(g[x]) not in members]
        if moved:
            raise GroupError(f"element {k} moves X point {moved[0]} outside X", witness=(k, moved[0]))
    if space is not None:
        for k, g in enumerate(arr):
            if not np.allclose(space.d[np.ix_(g, g)], space.d, rtol=0, atol=1e-12):
                warnings.warn(f"group element {k} is not an isometry of the base metric", stacklevel=2)
                break
    arr.setflags(write=False)
    return GroupAction(arr)


def average_A(f: np.ndarray, group: GroupAction | np.ndarray) -> np.ndarray:
    """(Af)(y, y') = mean over g of f(g y, g y')."""
    perms = group.perms if isinstance(group, GroupAction) else np.asarray(group)
    f = np.asarray(f, dtype=float)
    total = np.zeros_like(f)
    for g in perms:
        total += f[np.ix_(g, g)]
    return total / len(perms)


def invariance_witness(f: np.ndarray, perms: np.ndarray, tol: float = INVARIANCE_TOL):
    """First (g, y, y') with |f(g y, g y') - f(y, y')| > tol, or None."""
    f = np.asarray(f, dtype=float)
    for k, g in enumerate(perms):
        bad = np.argwhere(np.abs(f[np.ix_(g, g)] - f) > tol)
        if len(bad):
            return k, int(bad[0][0]), int(bad[0][1])
    return None


def extend_invariant_I(ctx: ExtensionContext, p, group: GroupAction,
                       variant=DiagVariant.BASE_DIAGONAL) -> ExtensionResult:
    """I(p) = A(T(p)) for a G-invariant p on X x X."""
    p = ctx.check_p(p)
    w = invariance_witness(p, group.on_subset(ctx.subset))
    if w is not None:
        k, i, j = w
        x, x2 = ctx.subset.members[i], ctx.subset.members[j]
        raise GroupError(f"p is not invariant: element {k} moves pair ({x}, {x2})", witness=(k, x, x2))
    t = ctx.extend_T(p, variant)
    return ExtensionResult(average_A(t.matrix, group), "I", t.level, t.variant, t.scale, t.tail)

"""Property checks for the extension operators, reported as pass/fail records with witnesses."""
from __future__ import annotations

import json
from collections.abc import Callable
from dataclasses import asdict, dataclass, field

import numpy as np

from .generate import random_metric, random_pseudometric
from .group import GroupAction, average_A, extend_invariant_I, invariance_witness, validate_group
from .operators import DiagVariant, ExtensionContext
from .space import Instance

EXACT_TOL = 1e-12
ACCUM_TOL = 1e-9
TAIL_EXTRA_LEVELS = 10

OPERATORS = ("T", "S", "S1", "S2", "I")

# documented failures: (operator, check) -> reason
EXPECTED_FAILURES = {
    ("S", "metric_preservation"): "S does not preserve metrics",
    ("S1", "constants"): "S1 does not preserve constants",
    ("S2", "positivity"): "S2 is not positive",
}
PAPER_ZERO_NOTE = "equal cover labels evaluate to 0, which breaks constant preservation off X"


@dataclass
class CheckReport:
    name: str
    status: str  # "pass" | "fail" | "not-applicable"
    witness: dict | None = None
    tolerance: float | None = None
    notes: str = ""
    expected_fail: bool = False

    @property
    def label(self) -> str:
        if self.status == "fail" and self.expected_fail:
            return "expected-fail"
        return self.status

    @property
    def blocking(self) -> bool:
        return self.status == "fail" and not self.expected_fail

    def to_dict(self) -> dict:
        out = asdict(self)
        out["status"] = self.label
        return out


def _num(v) -> float:
    return float(v)


def check_metric_axioms(m, mode: str = "pseudometric", tol: float = ACCUM_TOL, name: str | None = None) -> CheckReport:
    """Symmetry, zero diagonal, nonnegativity and the triangle inequality; positivity off the diagonal for metrics."""
    if mode not in ("pseudometric", "metric"):
        raise ValueError(f"mode must be 'pseudometric' or 'metric', got {mode!r}")
    m = np.asarray(m, dtype=float)
    name = name or f"{mode}_axioms"
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return CheckReport(name, "fail", {"kind": "shape", "shape": list(m.shape)}, tol)
    n = m.shape[0]
    slack = tol * max(1.0, float(np.abs(m).max()) if m.size else 1.0)

    def fail(kind, where, **values):
        return CheckReport(name, "fail", {"kind": kind, "points": [int(v) for v in where], **values}, tol)

    bad = np.argwhere(np.abs(m - m.T) > slack)
    if len(bad):
        i, j = bad[0]
        return fail("symmetry", (i, j), values=[_num(m[i, j]), _num(m[j, i])])
    bad = np.flatnonzero(np.abs(np.diag(m)) > slack)
    if len(bad):
        i = bad[0]
        return fail("zero_diagonal", (i, i), value=_num(m[i, i]))
    bad = np.argwhere(m < -slack)
    if len(bad):
        i, j = bad[0]
        return fail("nonnegativity", (i, j), value=_num(m[i, j]))
    for i in range(n):
        through = m[i][:, None] + m  # [j, k] -> m(i, j) + m(j, k)
        viol = np.argwhere(m[i][None, :] > through + slack)
        if len(viol):
            j, k = viol[0]
            return fail("triangle", (i, j, k), lhs=_num(m[i, k]), rhs=_num(through[j, k]))
    if mode == "metric":
        off = ~np.eye(n, dtype=bool)
        bad = np.argwhere((m <= 0) & off)
        if len(bad):
            i, j = bad[0]
            return fail("positivity", (i, j), value=_num(m[i, j]))
    return CheckReport(name, "pass", None, tol)


def separation_floors(ctx: ExtensionContext, p: np.ndarray):
    """Yield (y, y2, floor) lower bounds on T(p)(y, y2) for a metric p and distinct y, y2."""
    subset, dX, d = ctx.subset, ctx.dist_to_x, ctx.space.d
    pab = float(p[subset.a_pos, subset.b_pos])
    n = ctx.n
    for y in range(n):
        for y2 in range(n):
            if y == y2:
                continue
            in1, in2 = y in subset, y2 in subset
            if in1 and in2:
                yield y, y2, float(p[subset.position(y), subset.position(y2)])
            elif in1 or in2:
                out = y2 if in1 else y
                level = 1
                while level * float(dX[out]) < 1.0:
                    level += 1
                yield y, y2, 2.0 ** (-level - 1) * pab
            else:
                near = min(float(dX[y]), float(dX[y2]))
                level = 1
                while level * near < 1.0 or 2.0 ** (-level + 1) >= d[y, y2]:
                    level += 1
                yield y, y2, 2.0 ** -level * pab


def floor_violation(ctx: ExtensionContext, p: np.ndarray, t: np.ndarray):
    for y, y2, floor in separation_floors(ctx, p):
        if not t[y, y2] >= floor * (1.0 - EXACT_TOL) or t[y, y2] <= 0:
            return {"points": [y, y2], "value": _num(t[y, y2]), "floor": floor}
    return None


@dataclass
class Suite:
    """Randomized checks of one operator on one instance."""

    instance: Instance
    operator: str
    variant: DiagVariant = DiagVariant.BASE_DIAGONAL
    seed: int = 0
    trials: int = 5
    ctx: ExtensionContext = field(init=False)
    group: GroupAction | None = field(init=False)

    def __post_init__(self):
        if self.operator not in OPERATORS:
            raise ValueError(f"unknown operator {self.operator!r}; choose from {OPERATORS}")
        self.variant = DiagVariant(self.variant)
        self.ctx = ExtensionContext.from_instance(self.instance)
        self.group = None
        if self.instance.group is not None:
            self.group = validate_group(self.instance.group, self.instance.subset)
        if self.operator == "I" and self.group is None:
            raise ValueError("operator I requires a group")
        self.m = len(self.instance.subset)
        self.x_perms = self.group.on_subset(self.instance.subset) if self.group else None

    # -- plumbing --------------------------------------------------------------

    def rng(self, check: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, sum(ord(c) * 31 ** i for i, c in enumerate(check)) % 2**32])

    def apply(self, p) -> np.ndarray:
        if self.operator == "T":
            return self.ctx.extend_T(p, self.variant).matrix
        if self.operator == "I":
            return extend_invariant_I(self.ctx, p, self.group, self.variant).matrix
        return self.ctx.extend_S_family(p, self.operator).matrix

    def prepare(self, p: np.ndarray) -> np.ndarray:
        """Make an input admissible for the operator (I only takes invariant functions)."""
        if self.operator == "I":
            return average_A(p, self.x_perms)
        return p

    def report(self, name: str, witness, tol: float, notes: str = "") -> CheckReport:
        expected = EXPECTED_FAILURES.get((self.operator, name))
        zero_constants = (name == "constants" and self.variant is DiagVariant.PAPER_ZERO
                          and self.operator in ("T", "I"))
        if zero_constants:
            expected = PAPER_ZERO_NOTE
        if expected:
            notes = "; ".join(filter(None, [notes, "documented failure: " + expected]))
        status = "fail" if witness is not None else "pass"
        if status == "pass" and expected:
            notes += " (not exhibited on this instance)"
        return CheckReport(name, status, witness, tol, notes, expected_fail=bool(expected))

    def na(self, name: str, why: str) -> CheckReport:
        return CheckReport(name, "not-applicable", None, None, why)

    # -- checks ----------------------------------------------------------------

    def check_extension(self) -> CheckReport:
        rng = self.rng("extension")
        inside = list(self.instance.subset.members)
        for trial in range(self.trials):
            p = self.prepare(rng.normal(size=(self.m, self.m)))
            out = self.apply(p)
            err = np.abs(out[np.ix_(inside, inside)] - p)
            bound = EXACT_TOL * (1.0 + np.abs(p).max())
            if err.max() > bound:
                i, j = np.unravel_index(err.argmax(), err.shape)
                return self.report("extension", {"trial": trial, "points": [inside[i], inside[j]],
                                                 "value": _num(out[inside[i], inside[j]]),
                                                 "expected": _num(p[i, j])}, EXACT_TOL)
        return self.report("extension", None, EXACT_TOL)

    def check_linearity(self) -> CheckReport:
        rng = self.rng("linearity")
        for trial in range(self.trials):
            alpha, beta = rng.uniform(-5, 5, size=2)
            p = self.prepare(rng.normal(size=(self.m, self.m)))
            q = self.prepare(rng.normal(size=(self.m, self.m)))
            lhs = self.apply(alpha * p + beta * q)
            tp, tq = self.apply(p), self.apply(q)
            rhs = alpha * tp + beta * tq
            scale = np.abs(alpha * tp) + np.abs(beta * tq) + np.abs(lhs)
            bad = np.argwhere(np.abs(lhs - rhs) > ACCUM_TOL * scale)
            if len(bad):
                y, z = bad[0]
                return self.report("linearity", {"trial": trial, "points": [int(y), int(z)],
                                                 "alpha": _num(alpha), "beta": _num(beta),
                                                 "lhs": _num(lhs[y, z]), "rhs": _num(rhs[y, z])}, ACCUM_TOL)
        return self.report("linearity", None, ACCUM_TOL)

    def check_positivity(self) -> CheckReport:
        rng = self.rng("positivity")
        ia, ib = self.instance.subset.a_pos, self.instance.subset.b_pos
        for trial in range(self.trials):
            p = rng.uniform(0, 1, size=(self.m, self.m))
            if trial % 2 == 0:
                # heavy diagonal at a, nothing between a and b
                p[ia, ia], p[ia, ib], p[ib, ia] = 1.0, 0.0, 0.0
            p = self.prepare(p)
            out = self.apply(p)
            if out.min() < -EXACT_TOL:
                y, z = np.unravel_index(out.argmin(), out.shape)
                return self.report("positivity", {"trial": trial, "points": [int(y), int(z)],
                                                  "value": _num(out[y, z]), "p": p.tolist()}, EXACT_TOL)
        return self.report("positivity", None, EXACT_TOL)

    def check_constants(self) -> CheckReport:
        rng = self.rng("constants")
        n = self.ctx.n
        order = [(y, z) for y in range(n) for z in range(n) if y != z] + [(y, y) for y in range(n)]
        for trial in range(self.trials):
            c = 1.0 if trial == 0 else float(rng.uniform(-5, 5))
            out = self.apply(np.full((self.m, self.m), c))
            tol = EXACT_TOL * max(1.0, abs(c))
            for y, z in order:
                if abs(out[y, z] - c) > tol:
                    return self.report("constants", {"trial": trial, "points": [y, z], "c": c,
                                                     "value": _num(out[y, z])}, EXACT_TOL)
        return self.report("constants", None, EXACT_TOL)

    def _random_pair(self, rng) -> tuple[int, int]:
        y, z = rng.integers(0, self.ctx.n, size=2)
        return int(y), int(z)

    def check_sandwich(self) -> CheckReport:
        if self.operator != "T":
            return self.na("sandwich", "stated for T")
        rng = self.rng("sandwich")
        sub = self.instance.subset
        bounds = self.variant is DiagVariant.BASE_DIAGONAL
        for trial in range(self.trials):
            y, z = self._random_pair(rng)
            A = [sub.position(x) for x in self.ctx.support_set(y, z)]
            p = rng.normal(size=(self.m, self.m))
            p2 = rng.normal(size=(self.m, self.m))
            p2[np.ix_(A, A)] = p[np.ix_(A, A)] + rng.uniform(0, 1, size=(len(A), len(A)))
            v, v2 = self.ctx.T_value(p, y, z, self.variant), self.ctx.T_value(p2, y, z, self.variant)
            block = p[np.ix_(A, A)]
            lo, hi = float(block.min()), float(block.max())
            slack = EXACT_TOL * max(1.0, abs(lo), abs(hi))
            if v > v2 + slack or (bounds and not lo - slack <= v <= hi + slack):
                return self.report("sandwich", {"trial": trial, "points": [y, z], "value": v,
                                                "raised_value": v2, "min": lo, "max": hi}, EXACT_TOL)
        notes = "" if bounds else "monotonicity only; min/max bounds need the base-diagonal variant"
        return self.report("sandwich", None, EXACT_TOL, notes)

    def check_locality(self) -> CheckReport:
        if self.operator != "T":
            return self.na("locality", "stated for T")
        rng = self.rng("locality")
        sub = self.instance.subset
        for trial in range(self.trials):
            y, z = self._random_pair(rng)
            A = [sub.position(x) for x in self.ctx.support_set(y, z)]
            p = rng.normal(size=(self.m, self.m))
            p2 = p + rng.normal(scale=10.0, size=p.shape)
            p2[np.ix_(A, A)] = p[np.ix_(A, A)]
            v, v2 = self.ctx.T_value(p, y, z, self.variant), self.ctx.T_value(p2, y, z, self.variant)
            if v != v2:
                return self.report("locality", {"trial": trial, "points": [y, z], "value": v,
                                                "perturbed_value": v2}, 0.0)
        return self.report("locality", None, 0.0, "bit-identical comparison")

    def _axioms(self, name: str, mode: str, sample: Callable) -> CheckReport:
        rng = self.rng(name)
        for trial in range(self.trials):
            p = self.prepare(sample(rng))
            rep = check_metric_axioms(self.apply(p), mode, ACCUM_TOL)
            if rep.status == "fail":
                return self.report(name, {"trial": trial, **rep.witness, "p": p.tolist()}, ACCUM_TOL)
        return self.report(name, None, ACCUM_TOL)

    def check_pseudometric_preservation(self) -> CheckReport:
        return self._axioms("pseudometric_preservation", "pseudometric",
                            lambda rng: random_pseudometric(self.m, rng))

    def check_metric_preservation(self) -> CheckReport:
        return self._axioms("metric_preservation", "metric", lambda rng: random_metric(self.m, rng))

    def check_metric_floor(self) -> CheckReport:
        if self.operator != "T":
            return self.na("metric_floor", "quantitative separation floors are stated for T")
        rng = self.rng("metric_floor")
        for trial in range(self.trials):
            p = random_metric(self.m, rng)
            w = floor_violation(self.ctx, p, self.apply(p))
            if w is not None:
                return self.report("metric_floor", {"trial": trial, **w}, EXACT_TOL)
        return self.report("metric_floor", None, EXACT_TOL)

    def check_tail_exactness(self) -> CheckReport:
        if self.operator != "T":
            return self.na("tail_exactness", "series summation belongs to T")
        rng = self.rng("tail_exactness")
        N = self.ctx.level
        for trial in range(self.trials):
            p = rng.normal(size=(self.m, self.m))
            result = self.ctx.extend_T(p, self.variant)
            exact, tail = result.matrix, result.tail
            tol = EXACT_TOL * (1.0 + np.abs(p).max())
            for depth, partial in self.ctx.partial_sums(p, N + TAIL_EXTRA_LEVELS, self.variant):
                if depth < N:
                    continue
                err = np.abs(partial + 2.0 ** -depth * tail - exact)
                if err.max() > tol:
                    y, z = np.unravel_index(err.argmax(), err.shape)
                    return self.report("tail_exactness", {"trial": trial, "depth": depth,
                                                          "points": [int(y), int(z)],
                                                          "error": _num(err[y, z])}, EXACT_TOL)
        return self.report("tail_exactness", None, EXACT_TOL, f"levels {N}..{N + TAIL_EXTRA_LEVELS}")

    def check_dugundji_geometry(self) -> CheckReport:
        inner, sub, d = self.ctx.inner, self.instance.subset, self.ctx.space.d
        dX = self.ctx.dist_to_x
        for y in range(self.ctx.n):
            u = inner.map_u(y)
            supp = {v.point for v in inner.map_h(y).support}
            if not supp <= u:
                return self.report("dugundji_geometry", {"points": [y], "kind": "support",
                                                         "support": sorted(supp), "u": sorted(u)}, 0.0)
            if y not in sub:
                far = [x for x in u if not d[y, x] < 2 * dX[y]]
                if far:
                    return self.report("dugundji_geometry", {"points": [y, far[0]], "kind": "ball",
                                                             "distance": _num(d[y, far[0]]),
                                                             "radius": _num(2 * dX[y])}, 0.0)
        return self.report("dugundji_geometry", None, 0.0)

    def check_group_invariance(self) -> CheckReport:
        if self.group is None:
            return self.na("group_invariance", "instance has no group")
        rng = self.rng("group_invariance")
        for trial in range(self.trials):
            p = self.prepare(rng.normal(size=(self.m, self.m)))
            out = self.apply(p)
            avg = average_A(out, self.group)
            err = np.abs(average_A(avg, self.group) - avg)
            if err.max() > EXACT_TOL * (1.0 + np.abs(avg).max()):
                y, z = np.unravel_index(err.argmax(), err.shape)
                return self.report("group_invariance", {"trial": trial, "kind": "retraction",
                                                        "points": [int(y), int(z)]}, EXACT_TOL)
            if self.operator == "I":
                w = invariance_witness(out, self.group.perms, EXACT_TOL * (1.0 + np.abs(out).max()))
                if w is not None:
                    return self.report("group_invariance", {"trial": trial, "kind": "invariance",
                                                            "element": w[0], "points": [w[1], w[2]]}, EXACT_TOL)
        notes = "" if self.operator == "I" else "averaging retraction only; operator output is not claimed invariant"
        return self.report("group_invariance", None, EXACT_TOL, notes)

    def run(self) -> list[CheckReport]:
        checks = [getattr(self, name) for name in sorted(dir(self)) if name.startswith("check_")]
        return sorted((check() for check in checks), key=lambda r: r.name)


def run_invariant_suite(instance: Instance, operator: str = "T", variant=DiagVariant.BASE_DIAGONAL,
                        seed: int = 0, trials: int = 5) -> list[CheckReport]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    return Suite(instance, operator, DiagVariant(variant), seed, trials).run()


def reports_to_json(reports: list[CheckReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)


def reports_table(reports: list[CheckReport]) -> str:
    width = max(len(r.name) for r in reports) if reports else 10
    lines = [f"{'check':<{width}}  {'status':<14}  notes"]
    for r in reports:
        note = r.notes
        if r.status == "fail" and r.witness:
            note = f"witness {r.witness.get('points')} " + note
        lines.append(f"{r.name:<{width}}  {r.label:<14}  {note}".rstrip())
    return "\n".join(lines)

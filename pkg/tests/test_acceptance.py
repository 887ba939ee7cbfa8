"""Acceptance criteria 1-10, one PASS/FAIL line each (also shown in the terminal summary)."""
import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from metricext.generate import (
    instance_G1,
    instance_I1,
    random_instance,
    random_metric,
    symmetric_group_instance,
)
from metricext.group import average_A, extend_invariant_I, validate_group
from metricext.hm import XPoint, canonical_step, integrate_pair
from metricext.operators import DiagVariant, ExtensionContext
from metricext.space import instance_from_dict
from metricext.verify import check_metric_axioms, floor_violation, run_invariant_suite

pytestmark = pytest.mark.acceptance

CORPUS_SIZE = 200
GROUP_INSTANCES = 50
MODES = [None, 1, 2, 3]  # shortest-path metric, then point clouds in 1-3 dimensions


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


class Case:
    def __init__(self, instance):
        self.instance = instance
        self.ctx = ExtensionContext.from_instance(instance)
        self.m = len(instance.subset)
        self.X = list(instance.subset.members)


@pytest.fixture(scope="module")
def corpus():
    cases = []
    for k in range(CORPUS_SIZE):
        rng = np.random.default_rng(1000 + k)
        n = int(rng.integers(2, 31))
        x = int(rng.integers(2, n + 1))
        cases.append(Case(instance_from_dict(random_instance(rng, n, x, MODES[k % 4]))))
    return cases


@pytest.fixture(scope="module")
def group_cases():
    cases = [Case(instance_from_dict(instance_G1()))]
    for k in range(GROUP_INSTANCES):
        cases.append(Case(instance_from_dict(symmetric_group_instance(np.random.default_rng(5000 + k)))))
    for case in cases:
        case.group = validate_group(case.instance.group, case.instance.subset, case.instance.space)
        case.x_perms = case.group.on_subset(case.instance.subset)
    return cases


@pytest.fixture(scope="module")
def i1_case():
    return Case(instance_from_dict(instance_I1()))


def _apply(case, p, op, variant=DiagVariant.BASE_DIAGONAL):
    if op == "T":
        return case.ctx.extend_T(p, variant).matrix
    return case.ctx.extend_S_family(p, op).matrix


def test_criterion_01_extension(corpus, group_cases):
    worst, where = 0.0, None
    for k, case in enumerate(corpus):
        p = np.random.default_rng([1, k]).normal(scale=3.0, size=(case.m, case.m))
        for op in ("T", "S", "S1", "S2"):
            err = np.abs(_apply(case, p, op)[np.ix_(case.X, case.X)] - p).max() / (1 + np.abs(p).max())
            if err > worst:
                worst, where = err, (k, op)
    for k, case in enumerate(group_cases):
        p = average_A(np.random.default_rng([2, k]).normal(size=(case.m, case.m)), case.x_perms)
        out = extend_invariant_I(case.ctx, p, case.group).matrix
        err = np.abs(out[np.ix_(case.X, case.X)] - p).max() / (1 + np.abs(p).max())
        if err > worst:
            worst, where = err, (k, "I")
    record(1, "extension identity", worst <= 1e-12,
           f"{len(corpus)} instances x T,S,S1,S2 and {len(group_cases)} group instances x I; "
           f"worst scaled error {worst:.2e} at {where}")


def test_criterion_02_metric_preservation(corpus, group_cases):
    failures = []
    for k, case in enumerate(corpus[:100]):
        p = random_metric(case.m, np.random.default_rng([3, k]))
        t = case.ctx.extend_T(p).matrix
        for op, out in (("T", t), ("S1", case.ctx.extend_S_family(p, "S1").matrix)):
            rep = check_metric_axioms(out, "metric", 1e-9)
            if rep.status != "pass":
                failures.append((k, op, rep.witness))
        w = floor_violation(case.ctx, p, t)
        if w is not None:
            failures.append((k, "T floor", w))
    for k, case in enumerate(group_cases):
        p = average_A(random_metric(case.m, np.random.default_rng([4, k])), case.x_perms)
        rep = check_metric_axioms(extend_invariant_I(case.ctx, p, case.group).matrix, "metric", 1e-9)
        if rep.status != "pass":
            failures.append((k, "I", rep.witness))
    record(2, "metric preservation and separation floors", not failures,
           f"100 metric inputs for T,S1 with floors, {len(group_cases)} for I; "
           f"violations {failures[:1] if failures else 0}")


def test_criterion_03_constants(corpus, i1_case):
    worst = 0.0
    for k, case in enumerate(corpus):
        c = float(np.random.default_rng([5, k]).uniform(-5, 5))
        out = case.ctx.extend_T(np.full((case.m, case.m), c)).matrix
        worst = max(worst, float(np.abs(out - c).max()) / max(1.0, abs(c)))
    zero = i1_case.ctx.extend_T(np.ones((2, 2)), DiagVariant.PAPER_ZERO).matrix[2, 3]
    record(3, "constants", worst <= 1e-12 and zero < 1.0,
           f"base-diagonal worst error {worst:.2e}; paper-zero T(1)(2,3) = {zero:.6f} < 1, expected-fail")


def test_criterion_04_linearity_positivity(corpus):
    worst_rel, worst_min = 0.0, np.inf
    for k, case in enumerate(corpus):
        rng = np.random.default_rng([6, k])
        alpha, beta = rng.uniform(-5, 5, 2)
        p, q = rng.normal(size=(2, case.m, case.m))
        tp, tq = case.ctx.extend_T(p).matrix, case.ctx.extend_T(q).matrix
        lhs = case.ctx.extend_T(alpha * p + beta * q).matrix
        rhs = alpha * tp + beta * tq
        scale = np.abs(alpha * tp) + np.abs(beta * tq) + np.abs(lhs)
        rel = np.divide(np.abs(lhs - rhs), scale, out=np.zeros_like(scale), where=scale > 0)
        worst_rel = max(worst_rel, float(rel.max()))
        pos = rng.uniform(0, 1, (case.m, case.m))
        pos[case.instance.subset.a_pos, case.instance.subset.b_pos] = 0.0
        for op in ("T", "S", "S1"):
            worst_min = min(worst_min, float(_apply(case, pos, op).min()))
    record(4, "linearity and positivity", worst_rel <= 1e-9 and worst_min >= -1e-12,
           f"worst relative error {worst_rel:.2e}; smallest entry from p >= 0 is {worst_min:.2e}")


def test_criterion_05_locality_monotonicity(corpus):
    moved, raised = 0, 0
    trials = 1000
    for trial in range(trials):
        case = corpus[trial % len(corpus)]
        rng = np.random.default_rng([7, trial])
        y, z = (int(v) for v in rng.integers(0, case.ctx.n, 2))
        A = [case.instance.subset.position(x) for x in case.ctx.support_set(y, z)]
        block = np.ix_(A, A)
        p = rng.normal(size=(case.m, case.m))
        far = p + rng.normal(scale=10.0, size=p.shape)
        far[block] = p[block]
        if case.ctx.T_value(far, y, z) != case.ctx.T_value(p, y, z):
            moved += 1
        up = rng.normal(size=p.shape)
        up[block] = p[block] + rng.uniform(0, 1, size=(len(A), len(A)))
        if case.ctx.T_value(p, y, z) > case.ctx.T_value(up, y, z) + 1e-12:
            raised += 1
    record(5, "locality and monotonicity", moved == 0 and raised == 0,
           f"{trials} trials; locality changes {moved}, monotonicity violations {raised}")


def test_criterion_06_tail(corpus):
    worst = 0.0
    for k, case in enumerate(corpus):
        p = np.random.default_rng([8, k]).normal(size=(case.m, case.m))
        result = case.ctx.extend_T(p)
        N = case.ctx.level
        for depth, partial in case.ctx.partial_sums(p, N + 10):
            if depth >= N:
                worst = max(worst, float(np.abs(partial + 2.0 ** -depth * result.tail - result.matrix).max()))
    record(6, "exact tail summation", worst <= 1e-12,
           f"levels N..N+10 on {len(corpus)} instances; worst error {worst:.2e}")


def test_criterion_07_s_family(corpus, i1_case):
    p = np.array([[0.0, 1.0], [1.0, 0.0]])
    s_zero = i1_case.ctx.extend_S_family(p, "S").matrix[2, 0]
    s1_fail = 0
    for k, case in enumerate(corpus[:100]):
        pm = random_metric(case.m, np.random.default_rng([9, k]))
        if check_metric_axioms(case.ctx.extend_S_family(pm, "S1").matrix, "metric", 1e-9).status != "pass":
            s1_fail += 1
    c = 2.0
    s1_const = i1_case.ctx.extend_S_family(np.full((2, 2), c), "S1").matrix
    s1_moves = float(np.abs(s1_const - c).max())
    s2 = {r.name: r for r in run_invariant_suite(i1_case.instance, "S2")}["positivity"]
    found = s2.status == "fail" and s2.witness["value"] < 0 and min(map(min, s2.witness["p"])) >= 0
    ok = s_zero == 0.0 and s1_fail == 0 and s1_moves > 1e-12 and found
    record(7, "S-family contrasts", ok,
           f"S(p)(2,0) = {s_zero}; S1 metric failures {s1_fail}/100; S1(2*1) moves by {s1_moves:.3f}; "
           f"S2 negative entry {s2.witness['value'] if s2.witness else None}")


def test_criterion_08_groups(group_cases):
    worst_idem, worst_inv, metric_fail = 0.0, 0.0, 0
    for k, case in enumerate(group_cases):
        rng = np.random.default_rng([10, k])
        f = rng.normal(size=(case.ctx.n, case.ctx.n))
        avg = average_A(f, case.group)
        worst_idem = max(worst_idem, float(np.abs(average_A(avg, case.group) - avg).max()))
        p = average_A(random_metric(case.m, rng), case.x_perms)
        out = extend_invariant_I(case.ctx, p, case.group).matrix
        for g in case.group.perms:
            worst_inv = max(worst_inv, float(np.abs(out[np.ix_(g, g)] - out).max()))
        if check_metric_axioms(out, "metric", 1e-9).status != "pass":
            metric_fail += 1
    ok = worst_idem <= 1e-12 and worst_inv <= 1e-12 and metric_fail == 0
    record(8, "group averaging and invariant extension", ok,
           f"G1 + {len(group_cases) - 1} symmetric clouds; A(A f) - A f {worst_idem:.2e}, "
           f"invariance {worst_inv:.2e}, metric failures {metric_fail}")


def _random_step(rng, labels):
    k = int(rng.integers(1, 8))
    cuts = np.sort(rng.uniform(0, 1, k - 1)).tolist()
    return canonical_step([0.0, *cuts, 1.0], [XPoint(int(v)) for v in rng.integers(0, labels, k)])


def test_criterion_09_hm_oracle():
    cells = 10_000
    t = (np.arange(cells) + 0.5) / cells
    worst = 0.0
    for k in range(500):
        rng = np.random.default_rng([11, k])
        labels = int(rng.integers(1, 6))
        q = rng.uniform(-1, 1, (labels, labels))
        f, g = _random_step(rng, labels), _random_step(rng, labels)
        exact = integrate_pair(lambda u, v: q[u.point, v.point], f, g)
        fi = np.array([v.point for v in f.values])[np.searchsorted(f.breakpoints, t, side="right") - 1]
        gi = np.array([v.point for v in g.values])[np.searchsorted(g.breakpoints, t, side="right") - 1]
        worst = max(worst, abs(exact - float(q[fi, gi].mean())))
    record(9, "step-function integration against a grid", worst <= 1e-3,
           f"500 pairs on a {cells}-cell grid; worst difference {worst:.2e}")


def test_criterion_10_geometry(corpus, group_cases):
    violations, checked = 0, 0
    for case in [*corpus, *group_cases]:
        inner, d, dX = case.ctx.inner, case.ctx.space.d, case.ctx.dist_to_x
        for y in range(case.ctx.n):
            if y in case.instance.subset:
                continue
            checked += 1
            u = inner.map_u(y)
            supp = {v.point for v in inner.map_h(y).support}
            violations += (not supp <= u) + sum(not d[y, x] < 2 * dX[y] for x in u)
    record(10, "cover geometry", violations == 0,
           f"{checked} outside points; violations {violations}")

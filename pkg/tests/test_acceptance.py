"""Acceptance criteria, one test each, at their stated tolerances.

Every test prints a single ``[acceptance N] PASS|FAIL ...`` line. Run the
file directly (``python tests/test_acceptance.py``) for just those lines.
"""

import itertools
import json
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mobopc import cli, gp  # noqa: E402
from mobopc.acquisition import AcquisitionContext, ehi_rounds, pehi, pehi_rounds  # noqa: E402
from mobopc.cone import PreferenceTuple, build_basis, canonical_vectors, in_s_perp  # noqa: E402
from mobopc.hypervolume import ParetoArchive, hypervolume, weighted_expected_hv  # noqa: E402
from mobopc.optimizer import RunConfig, compliance, run  # noqa: E402
from oracles import (  # noqa: E402
    central_difference,
    cone_feasible,
    hv_inclusion_exclusion,
    order_polytope_grid,
    random_model,
    weighted_hv_enumeration,
)

SEEDS = (0, 1, 2, 3, 4)
RUN_LIMIT_S = 300.0


def criterion_1():
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    checked = mismatches = 0
    for m in (2, 3, 4):
        vs = rng.normal(size=(1000, m))
        vs /= np.linalg.norm(vs, axis=1, keepdims=True)
        for q in range(1, m):
            idx = tuple(range(q + 1))
            grid = order_polytope_grid(m, idx, 2)
            basis = build_basis(PreferenceTuple(idx, m))
            for v in vs:
                tol = 1e-9 * np.linalg.norm(v)
                mismatches += in_s_perp(basis, v) != cone_feasible(grid, v, tol)
                checked += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 10.0
    return ok, f"{checked} vectors, {mismatches} disagreements, {elapsed:.2f}s (limit 10s)"


def _pair_case(i, j, q):
    if i == j:
        return "diagonal"
    if i <= q and j < q:
        return "chain/chain below" if j < i else "chain/chain above"
    if i <= q:
        return "chain/tail normal"
    if j < q:
        return "tail/chain normal"
    return "tail/tail"


def criterion_2():
    cases = {}
    worst = 0.0
    diag_min = np.inf
    for m in range(2, 7):
        for q in range(1, m):
            normals, gens = canonical_vectors(m, q)
            prod = gens @ normals.T  # [i, j] = generator_i . normal_j
            for i, j in itertools.product(range(m), repeat=2):
                case = _pair_case(i, j, q)
                cases[case] = cases.get(case, 0) + 1
                if case == "diagonal":
                    diag_min = min(diag_min, prod[i, j])
                else:
                    worst = max(worst, abs(prod[i, j]))
    ok = worst <= 1e-12 and diag_min > 0 and len(cases) == 6
    detail = ", ".join(f"{k}: {v}" for k, v in sorted(cases.items()))
    return ok, f"max off-diagonal {worst:.1e}, min diagonal {diag_min:.3f}; cases {detail}"


def criterion_3():
    rng = np.random.default_rng(303)
    worst_hv = worst_w = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, 4))
        pts = rng.uniform(0, 1, size=(n, m))
        if rng.random() < 0.3:
            pts = np.round(pts * 4) / 4  # ties along axes
        z = rng.uniform(-0.5, 0.2, size=m)
        worst_hv = max(worst_hv, abs(hypervolume(pts, z) - hv_inclusion_exclusion(pts, z)))
        probs = rng.choice([0.0, 1.0, rng.random(), rng.random()], size=n)
        got = weighted_expected_hv(ParetoArchive(np.zeros((n, 1)), pts, z, probs))
        ref = weighted_hv_enumeration(pts, probs, z)
        worst_w = max(worst_w, abs(got - ref) / max(1.0, abs(ref)))
    ok = worst_hv <= 1e-9 and worst_w <= 1e-12
    return ok, f"200 instances: max |hv - oracle| {worst_hv:.1e} (tol 1e-9); weighted max rel diff {worst_w:.1e}"


def criterion_4():
    rng = np.random.default_rng(404)
    worst = 0.0
    for _ in range(20):
        model = random_model(rng)
        h = 1e-5 * model.kernel.lengthscales
        for _ in range(100):
            x = rng.uniform(-2.5, 2.5, size=model.dim)
            g = gp.gradient_posterior(model, x).mean
            fd = central_difference(lambda p: gp.posterior(model, p)[0], x, h)
            # floor keeps near-stationary points from dividing by ~0
            scale = max(np.max(np.abs(fd)), 1e-6 * np.sqrt(model.kernel.signal_variance))
            worst = max(worst, np.max(np.abs(g - fd)) / scale)
    return worst < 1e-4, f"2000 points: max relative error {worst:.2e} (limit 1e-4)"


def _random_state(rng):
    n = int(rng.integers(1, 3))
    m = int(rng.integers(2, 4))
    count = int(rng.integers(4, 10))
    x = rng.uniform(-1, 1, size=(count, n))
    models, ys = [], []
    for _ in range(m):
        w = rng.normal(size=n)
        y = np.sin(x @ w) + 0.3 * rng.normal(size=count)
        kern = gp.KernelSpec(float(np.exp(rng.uniform(-1, 1))), np.exp(rng.uniform(-1, 0.5, size=n)), 1e-4)
        models.append(gp.condition(kern, x, y, y.mean()))
        ys.append(y)
    y = np.column_stack(ys)
    z = y.min(axis=0) - rng.uniform(0.1, 1.0, size=m)
    return models, ParetoArchive(x, y, z, np.ones(count)), n


def criterion_5():
    rng = np.random.default_rng(505)
    worst_ratio = 0.0
    zero_ok = True
    for k in range(50):
        models, arch, n = _random_state(rng)
        xq = rng.uniform(-1, 1, size=n)
        ctx = AcquisitionContext(models, arch, [], mc_samples=500, sx_override=1.0)
        e = ehi_rounds(ctx, xq, k)
        s_x, p = pehi_rounds(ctx, xq, k)
        p = s_x * p
        se = np.sqrt(e.var(ddof=1) / e.size + p.var(ddof=1) / p.size)
        diff = abs(e.mean() - p.mean())
        worst_ratio = max(worst_ratio, diff / se if se > 0 else (0.0 if diff == 0 else np.inf))
        ctx0 = AcquisitionContext(models, arch.with_probs(rng.uniform(0, 1, len(arch))), [], sx_override=0.0)
        zero_ok &= pehi(ctx0, xq, k) == 0.0
    ok = worst_ratio < 3.0 and zero_ok
    return ok, f"50 states: max |pehi - ehi| = {worst_ratio:.2f} combined SE (limit 3); s_x=0 gives 0: {zero_ok}"


def _runs(objective, iterations, acquisition, seeds=SEEDS):
    scores, times = [], []
    for s in seeds:
        cfg = RunConfig(objective=objective, iterations=iterations, preferences=("0>1",),
                        acquisition=acquisition, initial_design=5, seed=s)
        start = time.perf_counter()
        trace = run(cfg)
        times.append(time.perf_counter() - start)
        scores.append(compliance(trace, "analytic"))
    return np.array(scores), np.array(times)


_CACHE = {}


def _schaffer(acquisition):
    if acquisition not in _CACHE:
        _CACHE[acquisition] = _runs("schaffer_n1", 20, acquisition)
    return _CACHE[acquisition]


def criterion_6():
    s_scores, s_times = _schaffer("pehi")
    p_scores, p_times = _runs("poloni", 50, "pehi")
    slowest = max(s_times.max(), p_times.max())
    ok = s_scores.mean() >= 0.80 and p_scores.mean() >= 0.60 and slowest < RUN_LIMIT_S
    return ok, (
        f"schaffer 5+20 mean {s_scores.mean():.3f} (>= 0.80) {np.round(s_scores, 3).tolist()}; "
        f"poloni 5+50 mean {p_scores.mean():.3f} (>= 0.60) {np.round(p_scores, 3).tolist()}; "
        f"slowest run {slowest:.1f}s"
    )


def criterion_7():
    pc, _ = _schaffer("pehi")
    plain, _ = _schaffer("ehi")
    gap = pc.mean() - plain.mean()
    return gap >= 0.25, f"MOBO-PC {pc.mean():.3f} vs EHI {plain.mean():.3f}: gap {gap:.3f} (>= 0.25)"


def criterion_8(tmp_path):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("objective: poloni\niterations: 4\npreferences: ['0>1']\nseed: 11\n")
    codes = [cli.main(["run", "--config", str(cfg), "--out", str(tmp_path / d)]) for d in ("a", "b")]
    a = (tmp_path / "a" / "pareto.json").read_bytes()
    b = (tmp_path / "b" / "pareto.json").read_bytes()
    points = len(json.loads(a)["points"])
    return codes == [0, 0] and a == b, f"exit codes {codes}; {len(a)} bytes, {points} points, identical: {a == b}"


def _report(capsys, number, result):
    ok, detail = result
    line = f"[acceptance {number}] {'PASS' if ok else 'FAIL'} {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    return ok


def test_acceptance_1_cone_oracle(capsys):
    assert _report(capsys, 1, criterion_1())


def test_acceptance_2_basis_orthogonality(capsys):
    assert _report(capsys, 2, criterion_2())


def test_acceptance_3_hypervolume_exactness(capsys):
    assert _report(capsys, 3, criterion_3())


def test_acceptance_4_gradient_posterior(capsys):
    assert _report(capsys, 4, criterion_4())


def test_acceptance_5_pehi_degeneracy(capsys):
    assert _report(capsys, 5, criterion_5())


def test_acceptance_6_compliance_reproduction(capsys):
    assert _report(capsys, 6, criterion_6())


def test_acceptance_7_baseline_contrast(capsys):
    assert _report(capsys, 7, criterion_7())


def test_acceptance_8_determinism(capsys, tmp_path):
    assert _report(capsys, 8, criterion_8(tmp_path))


if __name__ == "__main__":
    import tempfile

    results = []
    for number, fn in enumerate([criterion_1, criterion_2, criterion_3, criterion_4,
                                 criterion_5, criterion_6, criterion_7], start=1):
        results.append(_report(None, number, fn()))
    with tempfile.TemporaryDirectory() as tmp:
        results.append(_report(None, 8, criterion_8(Path(tmp))))
    sys.exit(0 if all(results) else 1)

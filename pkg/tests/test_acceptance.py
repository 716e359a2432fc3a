"""Acceptance gate: one test per advertised guarantee of the package.

Each test prints a single machine-greppable line

    ACCEPTANCE <nn> <name>: PASS|FAIL | <detail>

and then asserts, so a ``pytest -v`` run shows one verdict per criterion.
Budgets (sample counts, seeds, tolerances, wall-clock limits) are fixed
here and nowhere else; the tests call the public API only.
"""

import json
import time

import numpy as np
import pytest

from tnl import (
    INF,
    LinConfig,
    MultilinearMap,
    NormedSpace,
    SMOOTHNESS_TOLERANCES,
    SigmaDualConfig,
    SmConfig,
    Tensor,
    TensorSpace,
    check_smoothness,
    evaluator_for,
    linearization_norm,
    property_B_check,
    random_map,
    random_tensor,
    scalar_space,
    si_p_norm,
    sm_pq_norm,
    sup_norm,
    vector_scalar_bridge,
    witness_search_nonsmooth,
)
from tnl.cli import main as cli_main

from conftest import eps_oracle, modulus_oracle, nuclear, random_factors, sigma_max

SHAPES = [
    ((2, 2), (2.0, 2.0)),
    ((2, 3), (1.0, INF)),
    ((3, 3), (2.0, 1.0)),
    ((2, 2, 2), (INF, 2.0, 1.0)),
]


def _verdict(num: int, name: str, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'} | {detail}"
    print(line)
    assert ok, line


def _space(dims, ps) -> TensorSpace:
    return TensorSpace(tuple(NormedSpace(d, p) for d, p in zip(dims, ps)))


def _smoothness_sweep(norm: str, p_values, samples: int, seed_base: int):
    """Max deviation of check_smoothness over all shapes (and p values)."""
    max_dev = 0.0
    cases = 0
    for p in p_values:
        beta = evaluator_for(norm, p=p, seed=0)
        for i, (dims, ps) in enumerate(SHAPES):
            report = check_smoothness(beta, _space(dims, ps), samples, seed=seed_base + i)
            max_dev = max(max_dev, report.max_deviation)
            cases += len(report.cases)
    return max_dev, cases


def test_criterion_01_injective_scalar_slot_invariance():
    start = time.monotonic()
    dev, cases = _smoothness_sweep("eps", [2.0], samples=50, seed_base=100)
    elapsed = time.monotonic() - start
    ok = cases >= 200 and dev <= 1e-6 and elapsed <= 60.0
    _verdict(1, "eps_smoothness", ok,
             f"cases={cases} max_rel_dev={dev:.3e} (tol 1e-6) elapsed={elapsed:.1f}s (limit 60s)")


def test_criterion_02_projective_scalar_slot_invariance():
    start = time.monotonic()
    dev, cases = _smoothness_sweep("pi", [2.0], samples=50, seed_base=200)
    elapsed = time.monotonic() - start
    ok = cases >= 200 and dev <= 1e-9 and elapsed <= 120.0
    _verdict(2, "pi_smoothness", ok,
             f"cases={cases} max_rel_dev={dev:.3e} (tol 1e-9) elapsed={elapsed:.1f}s (limit 120s)")


def test_criterion_03_sigma_scalar_slot_invariance():
    start = time.monotonic()
    dev, cases = _smoothness_sweep("sigma_p", [1.0, 1.5, 2.0], samples=17, seed_base=300)
    elapsed = time.monotonic() - start
    ok = cases >= 200 and dev <= 1e-5 and elapsed <= 180.0
    _verdict(3, "sigma_p_smoothness", ok,
             f"cases={cases} max_rel_dev={dev:.3e} (tol 1e-5) elapsed={elapsed:.1f}s (limit 180s)")


def test_criterion_04_euclidean_spectral_and_nuclear_oracles():
    space = TensorSpace((NormedSpace(3, 2.0), NormedSpace(3, 2.0)))
    eps_ev = evaluator_for("eps", seed=0)
    pi_ev = evaluator_for("pi", seed=0)
    eps_dev = 0.0
    pi_gap = 0.0
    contained = True
    for s in range(50):
        z = random_tensor(space, seed=400 + s)
        spectral = sigma_max(z.coeffs)
        est = eps_ev(z)
        eps_dev = max(eps_dev, abs(est.lower - spectral) / spectral)
        bracket = pi_ev(z)
        nuc = nuclear(z.coeffs)
        contained &= bracket.lower <= nuc + 1e-9 and nuc <= bracket.upper + 1e-9
        pi_gap = max(pi_gap, bracket.upper - bracket.lower)
    ok = eps_dev <= 1e-6 and contained and pi_gap <= 1e-3
    _verdict(4, "euclidean_matrix_oracles", ok,
             f"eps_dev={eps_dev:.3e} (tol 1e-6) nuclear_contained={contained} "
             f"pi_gap={pi_gap:.3e} (tol 1e-3)")


def test_criterion_05_polyhedral_enumeration_agreement():
    rng = np.random.default_rng(55)
    eps_ev = evaluator_for("eps", seed=0)
    dev = 0.0
    for s in range(50):
        n = int(rng.integers(2, 4))
        factors = random_factors(rng, n, max_dim=3, palette=(1.0, INF))
        z = random_tensor(TensorSpace(factors), seed=500 + s)
        oracle = eps_oracle(z)
        est = eps_ev(z)
        dev = max(dev, abs(est.lower - oracle) / max(oracle, 1e-12))
    l1 = NormedSpace(2, 1.0)
    ident = eps_ev(Tensor(TensorSpace((l1, l1)), np.eye(2)))
    exact_two = ident.lower == 2.0 and ident.upper == 2.0
    ok = dev <= 1e-9 and exact_two
    _verdict(5, "polyhedral_enumeration", ok,
             f"max_rel_dev={dev:.3e} (tol 1e-9) identity_on_l1_pair_exact_2={exact_two}")


def test_criterion_06_crossnorm_sandwich():
    rng = np.random.default_rng(606)
    eps_ev = evaluator_for("eps", seed=0)
    pi_ev = evaluator_for("pi", seed=0)
    p_cycle = (1.0, 1.5, 2.0)

    elem_dev = 0.0
    for k in range(30):
        factors = random_factors(rng, int(rng.integers(2, 4)))
        vecs = [rng.standard_normal(f.dim) for f in factors]
        coeffs = np.asarray(vecs[0], dtype=float)
        for v in vecs[1:]:
            coeffs = np.multiply.outer(coeffs, v)
        product = float(np.prod([f.norm(np.asarray(v, dtype=float))
                                 for f, v in zip(factors, vecs)]))
        z = Tensor(TensorSpace(factors), coeffs)
        sig_ev = evaluator_for("sigma_p", p=p_cycle[k % 3], seed=0)
        for est in (eps_ev(z), pi_ev(z), sig_ev(z)):
            for side in (est.lower, est.upper):
                if np.isfinite(side):
                    elem_dev = max(elem_dev, abs(side - product) / max(product, 1e-12))

    excess = 0.0
    for s in range(100):
        factors = random_factors(rng, int(rng.integers(2, 4)))
        z = random_tensor(TensorSpace(factors), seed=800 + s)
        p = p_cycle[s % 3]
        eps_lo = eps_ev(z).lower
        sig_up = evaluator_for("sigma_p", p=p, seed=0)(z).upper
        pi_up = pi_ev(z).upper
        excess = max(excess, eps_lo - sig_up, eps_lo - pi_up)

    ok = elem_dev <= 1e-6 and excess <= 1e-9
    _verdict(6, "crossnorm_sandwich", ok,
             f"elementary_dev={elem_dev:.3e} (tol 1e-6) sandwich_excess={excess:.3e} (tol 1e-9)")


def test_criterion_07_ideal_norm_equals_dual_tensor_norm():
    rng = np.random.default_rng(66)
    pi_ev = evaluator_for("pi", seed=0)
    dev = 0.0
    for s in range(50):
        n = int(rng.integers(1, 4))
        domain = random_factors(rng, n, max_dim=3, palette=(1.0, INF))
        if s % 2 == 0:
            cod = scalar_space()
        else:
            cod = NormedSpace(int(rng.integers(2, 4)), float(rng.choice((1.0, INF))))
        A = random_map(domain, cod, seed=700 + s)
        sup = sup_norm(A).lower
        form = A if A.is_scalar else vector_scalar_bridge(A)
        lin = linearization_norm(form, pi_ev, LinConfig(seed=s)).lower
        dev = max(dev, abs(sup - lin) / max(sup, 1e-12))
    ok = dev <= 1e-4
    _verdict(7, "representation_of_sup_norm", ok, f"max_rel_dev={dev:.3e} (tol 1e-4)")


def test_criterion_08_trailing_slot_adjunction_preserves_norms():
    devs = {}
    ok = True
    for norm in ("pi", "eps", "sigma_p"):
        report = property_B_check(evaluator_for(norm, p=1.5, seed=0), (2, 2),
                                  samples=6, cfg=LinConfig(seed=0))
        devs[norm] = report["max_rel_deviation"]
        ok &= devs[norm] <= SMOOTHNESS_TOLERANCES[norm]
    sp = NormedSpace(2, INF)
    mult = np.zeros((2, 2, 2))
    mult[0, 0, 0] = mult[1, 1, 1] = 1.0
    est = sup_norm(MultilinearMap((sp, sp), sp, mult))
    exact_one = est.lower == 1.0 and est.upper == 1.0
    ok &= exact_one
    _verdict(8, "property_b", ok,
             "devs " + " ".join(f"{k}={v:.3e}" for k, v in devs.items())
             + f" multiplication_form_exact_1={exact_one}")


def test_criterion_09_semi_integral_inequality():
    rng = np.random.default_rng(77)
    p_cycle = (1.0, 1.5, 2.0)
    violations = 0
    worst = 0.0
    for s in range(20):
        n = int(rng.integers(2, 4))
        domain = random_factors(rng, n, max_dim=3, palette=(1.0, INF))
        A = random_map(domain, scalar_space(), seed=1000 + s)
        p = p_cycle[s % 3]
        C = si_p_norm(A, p, SigmaDualConfig(seed=s)).lower
        form = A.form_coeffs()
        probe = np.random.default_rng([9090, s])
        for _ in range(1000):
            m = int(probe.integers(1, 5))
            mats = [probe.standard_normal((m, f.dim)) for f in domain]
            vals = np.empty(m)
            for j in range(m):
                v = form
                for mat in mats:
                    v = np.tensordot(mat[j], v, axes=(0, 0))
                vals[j] = float(v)
            lhs = float(np.sum(np.abs(vals) ** p) ** (1.0 / p))
            rhs = C * modulus_oracle(domain, mats, p)
            rel = (lhs - rhs) / max(rhs, 1e-12)
            worst = max(worst, rel)
            if rel > 1e-9:
                violations += 1
    ok = violations == 0
    _verdict(9, "semi_integral_inequality", ok,
             f"violations={violations}/20000 worst_rel_excess={worst:.3e} (tol 1e-9)")


def test_criterion_10_strongly_multiple_constant():
    rng = np.random.default_rng(1010)
    excess = 0.0
    for s in range(12):
        n = int(rng.integers(1, 3))
        domain = random_factors(rng, n, max_dim=3)
        cod = (
            scalar_space()
            if s % 2 == 0
            else NormedSpace(int(rng.integers(2, 4)), float(rng.choice((1.0, 2.0, INF))))
        )
        A = random_map(domain, cod, seed=900 + s)
        sup = sup_norm(A).lower
        sm = sm_pq_norm(A, 2.0, 2.0, family_budget=2, cfg=SmConfig(seed=s)).lower
        excess = max(excess, sup - sm)
    sp = NormedSpace(2, 2.0)
    ident = MultilinearMap((sp,), sp, np.eye(2))
    reached = sm_pq_norm(ident, 2.0, 2.0, cfg=SmConfig(seed=0)).lower
    ident_dev = abs(reached - np.sqrt(2.0))
    ok = excess <= 1e-9 and ident_dev <= 2e-2
    _verdict(10, "strongly_multiple_constant", ok,
             f"sup_minus_sm_excess={excess:.3e} (tol 1e-9) "
             f"euclidean_identity={reached:.6f} dev={ident_dev:.3e} (tol 2e-2)")


def test_criterion_11_reports_are_reproducible(tmp_path):
    suite_args = {
        "crossnorm": ["--samples", "3"],
        "metric": ["--samples", "3"],
        "smoothness": ["--samples", "3"],
        "property_b": ["--samples", "2"],
        "representation": ["--samples", "2"],
        "bidual": ["--samples", "2"],
    }
    mismatches = []
    for suite, extra in suite_args.items():
        blobs = []
        for run in range(2):
            out = tmp_path / f"{suite}_{run}.json"
            code = cli_main(["verify", "--suite", suite, "--seed", "7",
                             "--out", str(out)] + extra)
            assert code == 0, f"{suite} exited {code}"
            blobs.append(out.read_bytes())
        if blobs[0] != blobs[1]:
            mismatches.append(suite)
    witness_blobs = []
    for run in range(2):
        out = tmp_path / f"witness_{run}.json"
        code = cli_main(["witness", "--norm", "pi", "--budget", "6", "--seed", "3",
                         "--out", str(out)])
        assert code == 0
        witness_blobs.append(out.read_bytes())
    if witness_blobs[0] != witness_blobs[1]:
        mismatches.append("witness")
    ok = not mismatches
    _verdict(11, "byte_identical_reports", ok,
             f"suites_rerun={len(suite_args) + 1} mismatches={mismatches or 'none'}")


def test_criterion_12_witness_search_controls():
    gaps = {}
    ok = True
    for norm in ("pi", "eps", "sigma_p"):
        report = witness_search_nonsmooth(evaluator_for(norm, p=1.5, seed=0),
                                          (2, 2), budget=30, seed=0)
        gaps[norm] = report.max_deviation
        ok &= report.passed and report.max_deviation <= SMOOTHNESS_TOLERANCES[norm]
    beta_report = witness_search_nonsmooth(evaluator_for("beta_p", p=2.0, seed=0),
                                           (2, 2), budget=10, seed=0)
    recorded = (
        len(beta_report.cases) == 1
        and "coefficients" in beta_report.cases[0]
        and bool(beta_report.notes)
    )
    ok &= recorded
    _verdict(12, "witness_search", ok,
             "control_gaps " + " ".join(f"{k}={v:.3e}" for k, v in gaps.items())
             + f" beta_p_best_gap={beta_report.max_deviation:.3e} candidate_recorded={recorded}")

"""Injective norm: enumeration oracles, engine estimates, operator norms."""

import numpy as np
import pytest

from tnl import (
    INF,
    BudgetError,
    EpsilonConfig,
    NormedSpace,
    Tensor,
    TensorSpace,
    UnsupportedNormError,
    epsilon_argmax,
    epsilon_bruteforce,
    epsilon_estimate,
    multilinear_sup,
    operator_norm,
    random_tensor,
)
from tnl.tensors import eval_functionals

from conftest import elementary_tensor, eps_oracle, random_factors, sigma_max


class TestPolyhedralExact:
    def test_bruteforce_matches_oracle(self):
        rng = np.random.default_rng(21)
        for s in range(30):
            n = int(rng.integers(2, 4))
            factors = random_factors(rng, n, palette=(1.0, INF))
            z = random_tensor(TensorSpace(factors), seed=100 + s)
            want = eps_oracle(z)
            got = epsilon_bruteforce(z)
            assert got.lower == pytest.approx(want, abs=1e-12)
            assert got.upper == pytest.approx(want, abs=1e-12)

    def test_engine_matches_enumeration(self):
        rng = np.random.default_rng(22)
        for s in range(30):
            n = int(rng.integers(2, 4))
            factors = random_factors(rng, n, palette=(1.0, INF))
            z = random_tensor(TensorSpace(factors), seed=200 + s)
            want = eps_oracle(z)
            got = epsilon_estimate(z)
            assert got.lower == pytest.approx(want, abs=1e-9)

    def test_identity_on_ell1_pair_is_two(self):
        sp = TensorSpace((NormedSpace(2, 1.0), NormedSpace(2, 1.0)))
        est = epsilon_bruteforce(Tensor(sp, np.eye(2)))
        assert est.lower == 2.0
        assert est.upper == 2.0

    def test_budget_error(self):
        factors = tuple(NormedSpace(3, 1.0) for _ in range(3))
        z = random_tensor(TensorSpace(factors), seed=1)
        with pytest.raises(BudgetError):
            epsilon_bruteforce(z, EpsilonConfig(budget=10))


class TestEuclidean:
    def test_matches_largest_singular_value(self):
        sp = TensorSpace((NormedSpace(3, 2.0), NormedSpace(3, 2.0)))
        for s in range(20):
            z = random_tensor(sp, seed=300 + s)
            want = sigma_max(z.coeffs)
            got = epsilon_estimate(z)
            assert got.lower == pytest.approx(want, rel=1e-9)

    def test_identity_is_one(self):
        sp = TensorSpace((NormedSpace(2, 2.0), NormedSpace(2, 2.0)))
        est = epsilon_estimate(Tensor(sp, np.eye(2)))
        assert est.lower == pytest.approx(1.0, rel=1e-9)


class TestElementary:
    def test_product_of_norms(self):
        rng = np.random.default_rng(23)
        for s in range(20):
            n = int(rng.integers(2, 4))
            factors = random_factors(rng, n)
            vecs = [rng.standard_normal(f.dim) for f in factors]
            z, target = elementary_tensor(factors, vecs)
            got = epsilon_estimate(z)
            assert got.lower == pytest.approx(target, rel=1e-9, abs=1e-12)


class TestGridCertificate:
    def test_bracket_contains_truth(self):
        sp = TensorSpace((NormedSpace(2, 2.0), NormedSpace(2, 2.0)))
        z = random_tensor(sp, seed=31)
        want = sigma_max(z.coeffs)
        est = epsilon_bruteforce(z, EpsilonConfig(grid_resolution=6))
        assert np.isfinite(est.upper)
        assert est.lower <= want + 1e-9
        assert est.upper >= want - 1e-9

    def test_low_resolution_raises(self):
        sp = TensorSpace((NormedSpace(2, 2.0), NormedSpace(2, 2.0)))
        z = random_tensor(sp, seed=31)
        with pytest.raises(UnsupportedNormError):
            epsilon_bruteforce(z, EpsilonConfig(grid_resolution=1))


class TestArgmax:
    def test_slots_certify_the_bound(self):
        rng = np.random.default_rng(24)
        for s in range(10):
            factors = random_factors(rng, 2)
            z = random_tensor(TensorSpace(factors), seed=400 + s)
            est, slots = epsilon_argmax(z)
            pairing = abs(eval_functionals(z, slots))
            assert pairing == pytest.approx(est.lower, rel=1e-9, abs=1e-12)
            for f, phi in zip(factors, slots):
                assert f.dual().norm(phi) <= 1.0 + 1e-9


class TestMultilinearSup:
    def test_three_factor_polyhedral(self):
        rng = np.random.default_rng(25)
        factors = (NormedSpace(2, 1.0), NormedSpace(2, INF), NormedSpace(3, 1.0))
        z = random_tensor(TensorSpace(factors), seed=55)
        # variables range over the DUAL balls, so the engine estimates eps
        res = multilinear_sup(z.coeffs, tuple(f.dual() for f in factors), EpsilonConfig(restarts=32))
        assert res.value == pytest.approx(eps_oracle(z), rel=1e-9)


class TestOperatorNorm:
    def test_euclidean_is_spectral(self):
        rng = np.random.default_rng(26)
        M = rng.standard_normal((3, 3))
        got = operator_norm(M, NormedSpace(3, 2.0), NormedSpace(3, 2.0))
        assert got == pytest.approx(sigma_max(M), rel=1e-12)

    def test_ell1_to_ell1_is_max_column_sum(self):
        rng = np.random.default_rng(27)
        M = rng.standard_normal((3, 3))
        got = operator_norm(M, NormedSpace(3, 1.0), NormedSpace(3, 1.0))
        assert got == pytest.approx(np.abs(M).sum(axis=0).max(), rel=1e-9)

    def test_linf_to_linf_is_max_row_sum(self):
        rng = np.random.default_rng(28)
        M = rng.standard_normal((3, 3))
        got = operator_norm(M, NormedSpace(3, INF), NormedSpace(3, INF))
        assert got == pytest.approx(np.abs(M).sum(axis=1).max(), rel=1e-9)

    def test_identity(self):
        got = operator_norm(np.eye(3), NormedSpace(3, 1.5), NormedSpace(3, 1.5))
        assert got == pytest.approx(1.0, rel=1e-9)


class TestInvariances:
    def test_scaling_equivariance(self):
        sp = TensorSpace((NormedSpace(2, 1.0), NormedSpace(3, 2.0)))
        z = random_tensor(sp, seed=61)
        base = epsilon_estimate(z)
        scaled = epsilon_estimate(Tensor(sp, 3.5 * z.coeffs))
        assert scaled.lower == pytest.approx(3.5 * base.lower, rel=1e-12)

    def test_determinism(self):
        sp = TensorSpace((NormedSpace(3, 1.5), NormedSpace(3, 2.0)))
        z = random_tensor(sp, seed=62)
        a = epsilon_estimate(z)
        b = epsilon_estimate(z)
        assert (a.lower, a.upper, a.iterations) == (b.lower, b.upper, b.iterations)

    def test_zero_tensor(self):
        sp = TensorSpace((NormedSpace(2, 1.0), NormedSpace(2, 2.0)))
        est = epsilon_estimate(Tensor(sp, np.zeros((2, 2))))
        assert est.lower == 0.0
        assert est.upper == 0.0

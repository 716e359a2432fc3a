"""Tests for multilinear maps, ideal-norm searches, and the adjunction tools."""

import numpy as np
import pytest

from tnl import (
    INF,
    EpsilonConfig,
    Functional,
    LinConfig,
    Linearization,
    MultilinearMap,
    NormedSpace,
    SigmaDualConfig,
    SmConfig,
    SpaceError,
    Tensor,
    TensorSpace,
    UnsupportedNormError,
    Vector,
    compose,
    evaluator_for,
    finite_type_map,
    linearization_norm,
    one_adjunction,
    one_adjunction_inverse,
    property_B_check,
    random_map,
    scalar_space,
    si_p_norm,
    sm_pq_norm,
    sup_argmax,
    sup_norm,
    vector_scalar_bridge,
    vector_scalar_bridge_inverse,
)

from conftest import ball_vertices, map_sup_oracle


def _operator_norm_oracle(M, source, target):
    """Exact operator norm on polyhedral source balls: max over vertices."""
    return max(float(target.norm(M @ v)) for v in ball_vertices(source))


def _random_polyhedral_map(rng, n, vector_valued=False):
    palette = (1.0, INF)
    domain = tuple(
        NormedSpace(int(rng.integers(2, 4)), float(rng.choice(palette)))
        for _ in range(n)
    )
    cod = (
        NormedSpace(int(rng.integers(2, 4)), float(rng.choice(palette)))
        if vector_valued
        else scalar_space()
    )
    shape = tuple(f.dim for f in domain) + (cod.dim,)
    return MultilinearMap(domain, cod, rng.standard_normal(shape))


# ---------------------------------------------------------------------------
# MultilinearMap basics
# ---------------------------------------------------------------------------


def test_map_validation():
    sp = NormedSpace(2, 2.0)
    with pytest.raises(SpaceError):
        MultilinearMap((), sp, np.zeros((2,)))
    with pytest.raises(SpaceError):
        MultilinearMap((sp,), sp, np.zeros((3, 2)))


def test_map_apply_matches_einsum():
    rng = np.random.default_rng(3)
    domain = (NormedSpace(2, 1.0), NormedSpace(3, INF))
    cod = NormedSpace(2, 2.0)
    A = MultilinearMap(domain, cod, rng.standard_normal((2, 3, 2)))
    x, y = rng.standard_normal(2), rng.standard_normal(3)
    out = A.apply([x, y])
    assert np.allclose(out, np.einsum("ijk,i,j->k", A.coeffs, x, y))
    assert A.arity == 2 and not A.is_scalar
    assert A.domain_space().factors == domain


def test_map_apply_rejects_bad_arguments():
    sp = NormedSpace(2, 2.0)
    A = MultilinearMap((sp, sp), scalar_space(), np.zeros((2, 2, 1)))
    with pytest.raises(SpaceError):
        A.apply([np.zeros(2)])
    with pytest.raises(SpaceError):
        A.apply([np.zeros(3), np.zeros(2)])
    with pytest.raises(SpaceError):
        A.apply([Vector(NormedSpace(2, 1.0), np.zeros(2)), np.zeros(2)])


def test_map_coeffs_read_only_and_form_coeffs():
    sp = NormedSpace(2, 2.0)
    A = MultilinearMap((sp,), scalar_space(), np.ones((2, 1)))
    with pytest.raises(ValueError):
        A.coeffs[0, 0] = 5.0
    assert A.form_coeffs().shape == (2,)
    B = MultilinearMap((sp,), sp, np.ones((2, 2)))
    with pytest.raises(SpaceError):
        B.form_coeffs()


def test_linearization_agrees_with_map_on_elementary_tensors():
    rng = np.random.default_rng(4)
    domain = (NormedSpace(2, 2.0), NormedSpace(3, 1.5))
    cod = NormedSpace(2, 1.0)
    A = MultilinearMap(domain, cod, rng.standard_normal((2, 3, 2)))
    L = Linearization(A)
    assert L.matrix.shape == (2, 6)
    x, y = rng.standard_normal(2), rng.standard_normal(3)
    z = Tensor(TensorSpace(domain), np.multiply.outer(x, y))
    assert np.allclose(L.apply_tensor(z), A.apply([x, y]))
    with pytest.raises(SpaceError):
        L.apply_tensor(Tensor(TensorSpace((domain[0], domain[0])), np.eye(2)))


# ---------------------------------------------------------------------------
# supremum norm
# ---------------------------------------------------------------------------


def test_sup_norm_multiplication_form_is_exactly_one():
    # coordinatewise multiplication (ell_inf x ell_inf) -> ell_inf has
    # supremum norm exactly 1, and every ball involved is polyhedral, so
    # the bracket must be a point.
    d = 2
    sp = NormedSpace(d, INF)
    coeffs = np.zeros((d, d, d))
    for i in range(d):
        coeffs[i, i, i] = 1.0
    A = MultilinearMap((sp, sp), sp, coeffs)
    est = sup_norm(A)
    assert est.lower == 1.0
    assert est.upper == 1.0


def test_sup_norm_polyhedral_matches_enumeration():
    rng = np.random.default_rng(7)
    for trial in range(10):
        A = _random_polyhedral_map(rng, int(rng.integers(1, 4)), vector_valued=trial % 2 == 0)
        est = sup_norm(A)
        assert est.lower == est.upper  # exact tier
        assert est.lower == pytest.approx(map_sup_oracle(A), rel=1e-9)


def test_sup_norm_bilinear_euclidean_is_largest_singular_value():
    rng = np.random.default_rng(8)
    sp = NormedSpace(3, 2.0)
    for trial in range(10):
        M = rng.standard_normal((3, 3))
        A = MultilinearMap((sp, sp), scalar_space(), M[..., None])
        est = sup_norm(A, EpsilonConfig(seed=trial))
        assert est.lower == pytest.approx(float(np.linalg.svd(M, compute_uv=False)[0]), rel=1e-9)


def test_sup_argmax_slots_certify_the_value():
    rng = np.random.default_rng(9)
    A = _random_polyhedral_map(rng, 2, vector_valued=True)
    est, slots = sup_argmax(A)
    assert len(slots) == A.arity + 1
    value = A.coeffs
    for x in slots[: A.arity]:
        value = np.tensordot(x, value, axes=(0, 0))
    assert abs(float(value @ slots[-1])) == pytest.approx(est.lower, rel=1e-12)
    for sp, x in zip(A.domain + (A.codomain.dual(),), slots):
        assert float(sp.norm(np.asarray(x))) <= 1.0 + 1e-9


def test_sup_norm_zero_map():
    sp = NormedSpace(2, 2.0)
    est = sup_norm(MultilinearMap((sp,), sp, np.zeros((2, 2))))
    assert est.lower == est.upper == 0.0


# ---------------------------------------------------------------------------
# adjunctions and bridges
# ---------------------------------------------------------------------------


def test_one_adjunction_round_trip_is_bit_exact():
    rng = np.random.default_rng(11)
    domain = (NormedSpace(2, 1.0), NormedSpace(3, 2.0), scalar_space())
    cod = NormedSpace(2, INF)
    A = MultilinearMap(domain, cod, rng.standard_normal((2, 3, 1, 2)))
    A1 = one_adjunction(A)
    assert A1.domain == domain[:-1]
    back = one_adjunction_inverse(A1, domain[-1])
    assert np.array_equal(back.coeffs, A.coeffs)


def test_one_adjunction_preserves_sup_norm():
    rng = np.random.default_rng(12)
    domain = (NormedSpace(2, 1.0), NormedSpace(2, INF), scalar_space())
    A = MultilinearMap(domain, scalar_space(), rng.standard_normal((2, 2, 1, 1)))
    a = sup_norm(A)
    b = sup_norm(one_adjunction(A))
    assert a.lower == pytest.approx(b.lower, rel=1e-12)


def test_one_adjunction_requires_scalar_slot():
    sp = NormedSpace(2, 2.0)
    A = MultilinearMap((sp, sp), scalar_space(), np.ones((2, 2, 1)))
    with pytest.raises(SpaceError):
        one_adjunction(A)
    lone = MultilinearMap((scalar_space(),), scalar_space(), np.ones((1, 1)))
    with pytest.raises(SpaceError):
        one_adjunction(lone)


def test_vector_scalar_bridge_round_trip_and_sup_equality():
    rng = np.random.default_rng(13)
    domain = (NormedSpace(2, 1.0), NormedSpace(2, INF))
    cod = NormedSpace(2, 1.0)
    A = MultilinearMap(domain, cod, rng.standard_normal((2, 2, 2)))
    B = vector_scalar_bridge(A)
    assert B.is_scalar
    assert B.domain[-1] == cod.dual()
    back = vector_scalar_bridge_inverse(B, cod)
    assert np.array_equal(back.coeffs, A.coeffs)
    # the bridge trades the codomain norm for a supremum over the predual
    # ball, so the supremum norms agree exactly on polyhedral palettes
    assert sup_norm(A).lower == pytest.approx(sup_norm(B).lower, rel=1e-12)


def test_bridge_inverse_rejects_bad_inputs():
    sp = NormedSpace(2, 2.0)
    vector_valued = MultilinearMap((sp, sp), sp, np.ones((2, 2, 2)))
    with pytest.raises(SpaceError):
        vector_scalar_bridge_inverse(vector_valued)
    single = MultilinearMap((sp,), scalar_space(), np.ones((2, 1)))
    with pytest.raises(SpaceError):
        vector_scalar_bridge_inverse(single)
    form = MultilinearMap((sp, sp), scalar_space(), np.ones((2, 2, 1)))
    with pytest.raises(SpaceError):
        vector_scalar_bridge_inverse(form, NormedSpace(3, 2.0))


# ---------------------------------------------------------------------------
# composition and the ideal inequality
# ---------------------------------------------------------------------------


def test_compose_matches_direct_evaluation():
    rng = np.random.default_rng(14)
    domain = (NormedSpace(2, 2.0), NormedSpace(3, 1.0))
    cod = NormedSpace(2, INF)
    A = MultilinearMap(domain, cod, rng.standard_normal((2, 3, 2)))
    src1, src2 = NormedSpace(3, 2.0), NormedSpace(2, 2.0)
    tgt = NormedSpace(3, 1.0)
    U1, U2 = rng.standard_normal((2, 3)), rng.standard_normal((3, 2))
    T = rng.standard_normal((3, 2))
    C = compose(A, [(U1, src1), (U2, src2)], (T, tgt))
    assert C.domain == (src1, src2)
    assert C.codomain == tgt
    x, y = rng.standard_normal(3), rng.standard_normal(2)
    assert np.allclose(C.apply([x, y]), T @ A.apply([U1 @ x, U2 @ y]))


def test_compose_partial_none_slots():
    rng = np.random.default_rng(15)
    domain = (NormedSpace(2, 2.0), NormedSpace(2, 2.0))
    A = MultilinearMap(domain, scalar_space(), rng.standard_normal((2, 2, 1)))
    C = compose(A, [None, None])
    assert np.array_equal(C.coeffs, A.coeffs)


def test_compose_shape_validation():
    sp = NormedSpace(2, 2.0)
    A = MultilinearMap((sp,), sp, np.eye(2))
    with pytest.raises(SpaceError):
        compose(A, [])
    with pytest.raises(SpaceError):
        compose(A, [(np.zeros((3, 2)), NormedSpace(2, 2.0))])
    with pytest.raises(SpaceError):
        compose(A, [None], (np.zeros((2, 3)), NormedSpace(2, 2.0)))


def test_composition_respects_the_ideal_inequality():
    # sup |t o A o (u1, u2)| <= ||t|| * sup|A| * ||u1|| * ||u2||, checked on
    # polyhedral palettes where every supremum in sight is exact.
    rng = np.random.default_rng(16)
    for _ in range(6):
        A = _random_polyhedral_map(rng, 2, vector_valued=True)
        srcs = tuple(NormedSpace(2, float(rng.choice((1.0, INF)))) for _ in range(2))
        tgt = NormedSpace(2, float(rng.choice((1.0, INF))))
        mats = [rng.standard_normal((f.dim, s.dim)) for f, s in zip(A.domain, srcs)]
        T = rng.standard_normal((tgt.dim, A.codomain.dim))
        C = compose(A, list(zip(mats, srcs)), (T, tgt))
        lhs = sup_norm(C).lower
        rhs = sup_norm(A).lower * _operator_norm_oracle(T, A.codomain, tgt)
        for M, s, f in zip(mats, srcs, A.domain):
            rhs *= _operator_norm_oracle(M, s, f)
        assert lhs <= rhs * (1.0 + 1e-9)


def test_finite_type_map_matches_explicit_sum():
    sp1, sp2 = NormedSpace(2, 1.0), NormedSpace(3, 2.0)
    cod = NormedSpace(2, INF)
    rng = np.random.default_rng(17)
    terms = []
    for w in (1.5, -0.5):
        phis = (Functional(sp1, rng.standard_normal(2)), Functional(sp2, rng.standard_normal(3)))
        terms.append((w, phis, Vector(cod, rng.standard_normal(2))))
    A = finite_type_map(terms)
    x, y = rng.standard_normal(2), rng.standard_normal(3)
    expected = np.zeros(2)
    for w, phis, v in terms:
        expected += w * float(phis[0].coords @ x) * float(phis[1].coords @ y) * v.coords
    assert np.allclose(A.apply([x, y]), expected)
    with pytest.raises(SpaceError):
        finite_type_map([])


def test_random_map_is_deterministic():
    domain = (NormedSpace(2, 2.0),)
    cod = NormedSpace(2, 2.0)
    assert np.array_equal(random_map(domain, cod, 5).coeffs, random_map(domain, cod, 5).coeffs)


# ---------------------------------------------------------------------------
# linearization norm and the trailing-slot check
# ---------------------------------------------------------------------------


def test_linearization_norm_equals_sup_norm_for_projective():
    rng = np.random.default_rng(18)
    pi = evaluator_for("pi")
    for trial in range(5):
        A = _random_polyhedral_map(rng, int(rng.integers(2, 4)))
        lin = linearization_norm(A, pi, LinConfig(seed=trial))
        assert lin.lower == pytest.approx(sup_norm(A).lower, rel=1e-9)


def test_linearization_norm_rejects_vector_valued_maps():
    sp = NormedSpace(2, 2.0)
    A = MultilinearMap((sp,), sp, np.eye(2))
    with pytest.raises(UnsupportedNormError):
        linearization_norm(A, evaluator_for("pi"))


def test_linearization_norm_zero_map():
    sp = NormedSpace(2, 1.0)
    A = MultilinearMap((sp, sp), scalar_space(), np.zeros((2, 2, 1)))
    est = linearization_norm(A, evaluator_for("pi"))
    assert est.lower == est.upper == 0.0


def test_property_b_check_structure_and_projective_pass():
    report = property_B_check(evaluator_for("pi"), (2, 2), samples=4, cfg=LinConfig(seed=0))
    assert report["norm"] == "pi"
    assert report["samples"] == 4
    assert len(report["cases"]) == 4
    for case in report["cases"]:
        assert {"with_scalar_slot", "adjoint", "rel_deviation"} <= set(case)
    assert report["max_rel_deviation"] <= 1e-9


# ---------------------------------------------------------------------------
# strongly multiple (p, q)-summing constant
# ---------------------------------------------------------------------------


def test_sm_requires_p_at_least_q():
    sp = NormedSpace(2, 2.0)
    A = MultilinearMap((sp,), sp, np.eye(2))
    with pytest.raises(SpaceError):
        sm_pq_norm(A, 1.0, 2.0)


def test_sm_dominates_sup_norm():
    rng = np.random.default_rng(19)
    for trial in range(4):
        A = _random_polyhedral_map(rng, 2, vector_valued=trial % 2 == 0)
        sup = sup_norm(A).lower
        sm = sm_pq_norm(A, 2.0, 2.0, family_budget=2, cfg=SmConfig(seed=trial)).lower
        assert sm >= sup - 1e-9


def test_sm_euclidean_identity_reaches_sqrt2():
    sp = NormedSpace(2, 2.0)
    A = MultilinearMap((sp,), sp, np.eye(2))
    est = sm_pq_norm(A, 2.0, 2.0, cfg=SmConfig(seed=0))
    assert est.lower == pytest.approx(np.sqrt(2.0), abs=2e-2)


def test_sm_q_inf_tier_is_certified():
    sp = NormedSpace(2, 1.0)
    A = MultilinearMap((sp,), sp, np.eye(2))
    est = sm_pq_norm(A, INF, INF, cfg=SmConfig(seed=0))
    assert est.converged
    assert est.lower >= sup_norm(A).lower - 1e-12


def test_sm_zero_map():
    sp = NormedSpace(2, 2.0)
    A = MultilinearMap((sp,), sp, np.zeros((2, 2)))
    assert sm_pq_norm(A, 2.0, 2.0).lower == 0.0


# ---------------------------------------------------------------------------
# semi-integral constant
# ---------------------------------------------------------------------------


def test_si_unit_product_form_has_constant_one():
    sp1, sp2 = NormedSpace(2, 1.0), NormedSpace(2, INF)
    coeffs = np.outer(np.array([1.0, 0.0]), np.array([0.5, 0.5]))[..., None]
    A = MultilinearMap((sp1, sp2), scalar_space(), coeffs)
    est = si_p_norm(A, 2.0, SigmaDualConfig(seed=3))
    assert est.lower == pytest.approx(1.0, rel=1e-9)


def test_si_rejects_vector_valued_maps():
    sp = NormedSpace(2, 2.0)
    A = MultilinearMap((sp,), sp, np.eye(2))
    with pytest.raises(UnsupportedNormError):
        si_p_norm(A, 2.0)

"""The projective tensor norm: decomposition search and dual certificates.

The projective norm of z is the infimum of sum_j |w_j| prod_l ||x_j^(l)||
over finite rank-one decompositions z = sum_j w_j x_j^(1) (x) ... (x) x_j^(n).
Any decomposition that reconstructs z certifies an upper bound, so the upper
search only ever reports values backed by a reconstruction residual below
1e-9 (on unit-normalized input).  Lower bounds come from duality: any
multilinear form with supremum norm at most 1 on the product of unit balls
pairs with z below the projective norm.  On polyhedral factor spaces that
dual problem is a finite linear program and the bound is exact; for two
Euclidean factors the polar factor of the coefficient matrix is the optimal
form and the bracket collapses onto the nuclear norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .spaces import (
    INF,
    NormedSpace,
    SpaceError,
    Vector,
    extreme_points,
)
from .injective import BudgetError, EpsilonConfig, canonical_gauge, multilinear_sup
from .tensors import (
    Decomposition,
    DecompositionTerm,
    NormEstimate,
    Tensor,
    TensorSpace,
    from_decomposition,
)

__all__ = [
    "PiConfig",
    "pi_upper",
    "pi_lower",
    "pi_dual_certificate",
    "pi_estimate",
    "pi_matrix_oracle",
    "strip_unit_factors",
]

_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class PiConfig:
    """Budgets for the projective norm search."""

    restarts: int = 2
    max_rank: int | None = None
    refine_iters: int = 60
    deflation_iters: int = 40
    gap_tol: float = 1e-6
    seed: int = 0
    lp_budget: int = 20_000

    def __post_init__(self) -> None:
        if self.restarts < 0:
            raise ValueError("restarts must be >= 0")


def strip_unit_factors(z: Tensor) -> tuple[Tensor | None, float]:
    """Split off all one-dimensional factors.

    Returns (reduced, multiplier).  Every tensor norm in this package
    satisfies norm(z) = multiplier * norm(reduced): a one-dimensional slot
    contributes exactly the norm of its basis vector to each rank-one term,
    and the correspondence of decompositions (and of dual functionals) is a
    bijection.  When every factor is one-dimensional, reduced is None and
    the norm is multiplier * |single coefficient|.
    """
    keep = [f for f in z.space.factors if f.dim > 1]
    mult = 1.0
    for f in z.space.factors:
        if f.dim == 1:
            mult *= float(f.norm(np.ones(1)))
    if not keep:
        return None, mult
    if len(keep) == len(z.space.factors):
        return z, 1.0
    shape = tuple(f.dim for f in keep)
    return Tensor(TensorSpace(tuple(keep), z.space.dim_cap), z.coeffs.reshape(shape)), mult


def _norm_gradient(space: NormedSpace, X: np.ndarray) -> np.ndarray:
    """Columnwise gradient of the factor norm; subgradient 0 at kinks."""
    w = space.weight_array()[:, None]
    wx = w * X
    if space.p == 1.0:
        return w * np.sign(X)
    if space.p == INF:
        g = np.zeros_like(X)
        idx = np.argmax(np.abs(wx), axis=0)
        cols = np.arange(X.shape[1])
        g[idx, cols] = w[idx, 0] * np.sign(X[idx, cols])
        return g
    norms = space.norm(X.T)
    norms = np.where(norms > 0.0, norms, 1.0)
    if space.p == 2.0:
        return w * wx / norms[None, :]
    a = np.abs(wx) ** (space.p - 1.0) * np.sign(X)
    return w * a / (norms ** (space.p - 1.0))[None, :]


def _khatri_rao(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = mats[0]
    for M in mats[1:]:
        out = (out[:, None, :] * M[None, :, :]).reshape(-1, out.shape[1])
    return out


def _column_norms(factors: Sequence[NormedSpace], mats: Sequence[np.ndarray]) -> np.ndarray:
    return np.stack([np.atleast_1d(f.norm(M.T)) for f, M in zip(factors, mats)])


def _pi_objective(factors: Sequence[NormedSpace], mats: Sequence[np.ndarray]) -> float:
    return float(np.prod(_column_norms(factors, mats), axis=0).sum())


def _repair_pivot(
    unfolded: np.ndarray, free_mats: Sequence[np.ndarray]
) -> tuple[np.ndarray, float]:
    """Least-squares pivot factor given the other factors; returns residual too."""
    K = _khatri_rao(free_mats)
    sol, *_ = np.linalg.lstsq(K, unfolded.T, rcond=None)
    resid = float(np.linalg.norm(K @ sol - unfolded.T))
    return sol.T, resid


def _slice_candidate(shape: tuple[int, ...], pivot: int) -> list[np.ndarray]:
    """Basis-indicator free factors: the exact slice decomposition."""
    rest = [d for i, d in enumerate(shape) if i != pivot]
    R = int(np.prod(rest))
    mats = []
    grids = np.unravel_index(np.arange(R), tuple(rest))
    for d, g in zip(rest, grids):
        M = np.zeros((d, R))
        M[g, np.arange(R)] = 1.0
        mats.append(M)
    return mats


def _deflation_candidate(
    coeffs: np.ndarray, pivot: int, max_terms: int, iters: int
) -> list[np.ndarray]:
    """Greedy rank-one (Euclidean) deflation; returns stacked free factors."""
    n = coeffs.ndim
    residual = coeffs.copy()
    cols: list[list[np.ndarray]] = [[] for _ in range(n)]
    total = float(np.linalg.norm(coeffs))
    for _ in range(max_terms):
        if float(np.linalg.norm(residual)) <= 1e-14 * max(total, 1.0):
            break
        vecs = []
        for l in range(n):
            d = residual.shape[l]
            if d == 1:
                vecs.append(np.ones(1))
                continue
            unfold = np.moveaxis(residual, l, 0).reshape(d, -1)
            u, _, _ = np.linalg.svd(unfold, full_matrices=False)
            vecs.append(u[:, 0])
        for _ in range(iters):
            for l in range(n):
                vecs[l] = _contract_all_but(residual, vecs, l)
                nl = float(np.linalg.norm(vecs[l]))
                if nl <= 1e-300:
                    vecs[l] = np.ones_like(vecs[l]) / np.sqrt(len(vecs[l]))
                else:
                    vecs[l] = vecs[l] / nl
        weight = _contract_all(residual, vecs)
        rank1 = vecs[0] * weight
        for v in vecs[1:]:
            rank1 = np.multiply.outer(rank1, v)
        residual = residual - rank1
        scale = abs(weight) ** (1.0 / n) if weight != 0.0 else 1.0
        for l in range(n):
            cols[l].append(vecs[l] * scale)
    if not cols[0]:
        return []
    mats = [np.stack(c, axis=1) for c in cols]
    return [mats[l] for l in range(n) if l != pivot]


def _contract_all_but(coeffs: np.ndarray, vecs: Sequence[np.ndarray], skip: int) -> np.ndarray:
    out = coeffs
    # contract from the highest axis down so earlier axis indices stay valid
    for m in sorted((m for m in range(coeffs.ndim) if m != skip), reverse=True):
        out = np.tensordot(out, vecs[m], axes=(m, 0))
    return out


def _contract_all(coeffs: np.ndarray, vecs: Sequence[np.ndarray]) -> float:
    out = coeffs
    for v in reversed(vecs):
        out = np.tensordot(out, v, axes=(out.ndim - 1, 0))
    return float(out)


def _normalize_columns(space: NormedSpace, M: np.ndarray) -> np.ndarray:
    norms = np.atleast_1d(space.norm(M.T))
    safe = np.where(norms > 1e-300, norms, 1.0)
    return M / safe[None, :]


def _refine_candidate(
    factors: Sequence[NormedSpace],
    coeffs: np.ndarray,
    pivot: int,
    free_mats: list[np.ndarray],
    cfg: PiConfig,
) -> tuple[float, list[np.ndarray] | None, bool]:
    """Descend on the decomposition objective, keeping reconstruction exact.

    The pivot factor is refit by least squares after every trial step, so
    every accepted state reconstructs the tensor; steps that break the
    residual tolerance or increase the objective are rejected.
    """
    n = len(factors)
    free_idx = [l for l in range(n) if l != pivot]
    free_spaces = [factors[l] for l in free_idx]
    unfolded = np.moveaxis(coeffs, pivot, 0).reshape(coeffs.shape[pivot], -1)

    free = [_normalize_columns(s, M) for s, M in zip(free_spaces, free_mats)]
    pivot_mat, resid = _repair_pivot(unfolded, free)
    if resid > _RESIDUAL_TOL:
        return INF, None, False
    mats = _assemble(free, pivot_mat, pivot)
    best = _pi_objective(factors, mats)
    best_free = [M.copy() for M in free]
    step = 0.1
    converged = False
    for _ in range(cfg.refine_iters):
        norms = _column_norms(factors, mats)
        prods = np.prod(norms, axis=0)
        grads = []
        for k, l in enumerate(free_idx):
            g = _norm_gradient(free_spaces[k], mats[l])
            coef = np.where(norms[l] > 0.0, prods / np.where(norms[l] > 0, norms[l], 1.0), 0.0)
            grads.append(g * coef[None, :])
        gnorm = np.sqrt(sum(float((g * g).sum()) for g in grads))
        if gnorm <= 1e-14:
            converged = True
            break
        improved = False
        trial = step
        for _ in range(8):
            cand = [
                _normalize_columns(s, M - trial * g / gnorm)
                for s, M, g in zip(free_spaces, best_free, grads)
            ]
            piv, resid = _repair_pivot(unfolded, cand)
            if resid <= _RESIDUAL_TOL:
                val = _pi_objective(factors, _assemble(cand, piv, pivot))
                if val < best - 1e-15:
                    best = val
                    best_free = cand
                    pivot_mat = piv
                    mats = _assemble(cand, piv, pivot)
                    improved = True
                    step = trial * 1.5
                    break
            trial *= 0.5
        if not improved:
            converged = True
            break
    return best, _assemble(best_free, pivot_mat, pivot), converged


def _assemble(free: Sequence[np.ndarray], pivot_mat: np.ndarray, pivot: int) -> list[np.ndarray]:
    mats = list(free)
    mats.insert(pivot, pivot_mat)
    return mats


def _decomposition_from_mats(
    space: TensorSpace, mats: Sequence[np.ndarray], scale: float
) -> Decomposition:
    """Package factor matrices as unit-vector terms with signed weights."""
    factors = space.factors
    R = mats[0].shape[1]
    terms = []
    for j in range(R):
        weight = scale
        vectors = []
        for l, f in enumerate(factors):
            col = mats[l][:, j]
            nl = float(f.norm(col))
            if nl <= 1e-300:
                weight = 0.0
                vectors.append(Vector(f, _first_unit(f)))
            else:
                weight *= nl
                vectors.append(Vector(f, col / nl))
        if weight == 0.0:
            continue
        terms.append(DecompositionTerm(weight, tuple(vectors)))
    return Decomposition(tuple(terms))


def _first_unit(space: NormedSpace) -> np.ndarray:
    e = np.zeros(space.dim)
    e[0] = 1.0 / space.weight_array()[0]
    return e


def _mats_from_decomposition(
    dec: Decomposition, space: TensorSpace, pivot: int
) -> list[np.ndarray] | None:
    """Free factor matrices whose column products match the given terms."""
    n = space.order
    if not dec.terms or len(dec.terms[0].vectors) != n:
        return None
    cols: list[list[np.ndarray]] = [[] for _ in range(n)]
    share = 1.0 / (n - 1) if n > 1 else 1.0
    for term in dec.terms:
        mag = abs(term.weight) ** share
        for l in range(n):
            v = term.vectors[l].coords
            cols[l].append(v * mag if l != pivot else v)
    return [np.stack(cols[l], axis=1) for l in range(n) if l != pivot]


def pi_upper(
    z: Tensor,
    cfg: PiConfig | None = None,
    warm: Sequence[Decomposition] = (),
) -> tuple[float, Decomposition | None, bool, int]:
    """Best decomposition value found; every reported value is a true upper bound.

    Returns (value, decomposition, converged, candidates_tried).  The
    decomposition lives on the original space and reconstructs z.  Warm-start
    decompositions are both evaluated directly and used as refinement seeds,
    so the result never exceeds the value of a valid warm start.
    """
    cfg = cfg or PiConfig()
    normalized, scale = canonical_gauge(z.coeffs)
    if scale == 0.0:
        return 0.0, Decomposition(()), True, 0
    sign = 1.0 if z.coeffs.ravel()[np.flatnonzero(z.coeffs.ravel())[0]] > 0 else -1.0

    reduced, mult = strip_unit_factors(Tensor(z.space, normalized))
    if reduced is None:
        value = mult * float(abs(normalized.ravel()[0])) * scale
        dec = _reattach_units(z.space, None, sign * scale)
        return value, dec, True, 1
    if reduced.space.order == 1:
        f = reduced.space.factors[0]
        value = mult * float(f.norm(reduced.coeffs)) * scale
        base = Decomposition((DecompositionTerm(1.0, (Vector(f, reduced.coeffs),)),))
        return value, _reattach_units(z.space, base, sign * scale), True, 1

    factors = reduced.space.factors
    coeffs = reduced.coeffs
    shape = coeffs.shape
    n = len(factors)
    pivot = int(np.argmax(shape))
    rest = int(np.prod([d for i, d in enumerate(shape) if i != pivot]))
    max_rank = cfg.max_rank if cfg.max_rank is not None else rest

    candidates: list[list[np.ndarray]] = []
    if rest <= max_rank:
        candidates.append(_slice_candidate(shape, pivot))
    defl = _deflation_candidate(coeffs, pivot, max_rank, cfg.deflation_iters)
    if defl:
        candidates.append(defl)
    if n == 2:
        other = 1 - pivot
        scaled = coeffs * factors[0].weight_array()[:, None] * factors[1].weight_array()[None, :]
        u, s, vt = np.linalg.svd(scaled, full_matrices=False)
        basis = (u if other == 0 else vt.T) / factors[other].weight_array()[:, None]
        candidates.append([basis[:, : min(len(s), max_rank)]])
    rng = np.random.default_rng([cfg.seed, 104729])
    for _ in range(cfg.restarts):
        candidates.append(
            [rng.standard_normal((shape[l], max_rank)) for l in range(n) if l != pivot]
        )

    best = INF
    best_mats: list[np.ndarray] | None = None
    best_warm: Decomposition | None = None
    converged = False
    tried = 0

    for dec in warm:
        try:
            direct = from_decomposition(z.space, dec)
        except SpaceError:
            continue
        resid = float(np.linalg.norm(direct.coeffs - z.coeffs)) / max(scale, 1e-300)
        if resid <= _RESIDUAL_TOL:
            obj = sum(
                abs(t.weight) * np.prod([v.norm() for v in t.vectors]) for t in dec.terms
            )
            val = float(obj) / (mult * scale)
            if val < best:
                best = val
                best_warm = dec
        red_dec, _ = _strip_decomposition(dec, z.space)
        mats = _mats_from_decomposition(red_dec, reduced.space, pivot) if red_dec else None
        if mats is not None:
            candidates.append(mats)

    for mats in candidates:
        tried += 1
        val, out, conv = _refine_candidate(factors, coeffs, pivot, mats, cfg)
        if val < best:
            best = val
            best_mats = out
            best_warm = None
            converged = conv

    if not np.isfinite(best):
        return INF, None, False, tried

    value = best * mult * scale
    if best_warm is not None:
        return value, best_warm, True, tried
    base = _decomposition_from_mats(reduced.space, best_mats, 1.0)
    return value, _reattach_units(z.space, base, sign * scale), converged, tried


def _strip_decomposition(
    dec: Decomposition, space: TensorSpace
) -> tuple[Decomposition | None, float]:
    """Project a decomposition onto the stripped space (drop unit factors)."""
    keep = [i for i, f in enumerate(space.factors) if f.dim > 1]
    if len(keep) == space.order:
        return dec, 1.0
    if not keep:
        return None, 1.0
    terms = []
    for t in dec.terms:
        w = t.weight
        vecs = []
        for i, v in enumerate(t.vectors):
            if i in keep:
                vecs.append(v)
            else:
                w *= float(v.coords[0])
        terms.append(DecompositionTerm(w, tuple(vecs)))
    return Decomposition(tuple(terms)), 1.0


def _reattach_units(
    space: TensorSpace, base: Decomposition | None, scale: float
) -> Decomposition:
    """Lift a stripped-space decomposition back to the original space."""
    terms = []
    if base is None:
        vectors = tuple(Vector(f, np.ones(1)) for f in space.factors)
        return Decomposition((DecompositionTerm(scale, vectors),))
    keep = [i for i, f in enumerate(space.factors) if f.dim > 1]
    for t in base.terms:
        vecs: list[Vector] = []
        it = iter(t.vectors)
        for i, f in enumerate(space.factors):
            if i in keep:
                vecs.append(next(it))
            else:
                vecs.append(Vector(f, np.ones(1)))
        terms.append(DecompositionTerm(t.weight * scale, tuple(vecs)))
    return Decomposition(tuple(terms))


def _sup_norm_exact_polyhedral(factors: Sequence[NormedSpace], A: np.ndarray) -> float:
    import string

    mats = [np.stack([v.coords for v in extreme_points(f)]) for f in factors]
    n = len(factors)
    letters = string.ascii_lowercase[:n]
    out = string.ascii_uppercase[:n]
    spec = letters + "," + ",".join(out[l] + letters[l] for l in range(n)) + "->" + out
    vals = np.einsum(spec, A, *mats, optimize=True)
    return float(np.abs(vals).max())


def _pi_lower_polyhedral(
    factors: Sequence[NormedSpace], coeffs: np.ndarray, budget: int
) -> tuple[float, np.ndarray]:
    """Exact dual bound by linear programming over the polytope of feasible forms."""
    pts = [np.stack([v.coords for v in extreme_points(f)]) for f in factors]
    count = int(np.prod([len(P) for P in pts]))
    if count > budget:
        raise BudgetError(f"{count} dual constraints exceed budget {budget}")
    rows = pts[0]
    for P in pts[1:]:
        rows = (rows[:, None, :, None] * P[None, :, None, :]).reshape(
            rows.shape[0] * P.shape[0], -1
        )
    T = rows.reshape(count, -1)
    c = -coeffs.ravel()
    res = linprog(
        c,
        A_ub=np.vstack([T, -T]),
        b_ub=np.ones(2 * count),
        bounds=(None, None),
        method="highs",
    )
    if not res.success:
        return 0.0, np.zeros_like(coeffs)
    A = res.x.reshape(coeffs.shape)
    sup = _sup_norm_exact_polyhedral(factors, A)
    if sup <= 1e-300:
        return 0.0, np.zeros_like(coeffs)
    A = A / sup
    return abs(float(np.vdot(A, coeffs))), A


def _euclidean_embedding_constant(space: NormedSpace) -> float:
    """Upper bound for the Euclidean norm over the unit ball of the space."""
    winv = 1.0 / space.weight_array()
    base = float(winv.max())
    if space.p > 2.0:
        base *= space.dim ** (0.5 - 1.0 / space.p) if space.p < INF else space.dim**0.5
    return base


def _product_functional_certificate(
    factors: Sequence[NormedSpace], coeffs: np.ndarray, seed: int
) -> tuple[float, np.ndarray]:
    """Rank-one feasible form built from injective-argmax functionals.

    A product of dual-ball functionals has supremum norm exactly the
    product of their dual norms, so normalizing each slot certifies
    feasibility outright; the pairing it yields is the injective value
    those functionals attain, which equals the product of norms whenever
    the array is elementary.
    """
    duals = tuple(f.dual() for f in factors)
    sup = multilinear_sup(coeffs, duals, EpsilonConfig(restarts=8, seed=seed))
    slots = []
    for dual, phi in zip(duals, sup.slots):
        phi = np.asarray(phi, dtype=float)
        nrm = float(dual.norm(phi))
        if nrm <= 1e-300:
            return 0.0, np.zeros_like(coeffs)
        slots.append(phi / nrm)
    A = slots[0]
    for phi in slots[1:]:
        A = np.multiply.outer(A, phi)
    return abs(float(np.vdot(A, coeffs))), A


def pi_dual_certificate(
    factors: Sequence[NormedSpace],
    coeffs: np.ndarray,
    cfg: PiConfig | None = None,
) -> tuple[float, np.ndarray]:
    """Feasible dual form (supremum norm at most 1) paired with the array.

    Returns ``(value, A)`` where ``A`` is a multilinear form certified to
    satisfy ``sup |A(x_1, ..., x_n)| <= 1`` over the product of unit balls
    and ``value = |<A, coeffs>|``, a lower bound for the projective norm.
    Feasibility is enforced by exact rescaling (polyhedral enumeration,
    polar factors, or the Euclidean embedding bound), never left to solver
    tolerance.  The form doubles as an exact linear-maximization oracle for
    the supremum-norm ball wherever one of the exact branches applies.
    """
    cfg = cfg or PiConfig()
    coeffs = np.asarray(coeffs, dtype=float)
    if not np.any(coeffs):
        return 0.0, np.zeros_like(coeffs)

    if len(factors) == 1:
        g = _norm_gradient(factors[0], coeffs[:, None])[:, 0]
        return abs(float(np.vdot(g, coeffs))), g

    if all(f.is_polyhedral() for f in factors):
        try:
            peak = float(np.abs(coeffs).max())
            _, A = _pi_lower_polyhedral(list(factors), coeffs / peak, cfg.lp_budget)
            return abs(float(np.vdot(A, coeffs))), A
        except BudgetError:
            pass

    # always available: a rank-one product of normalized dual functionals,
    # exact on elementary arrays and never below the injective estimate
    best = _product_functional_certificate(factors, coeffs, cfg.seed)

    if len(factors) == 2 and all(f.p == 2.0 for f in factors):
        w1 = factors[0].weight_array()
        w2 = factors[1].weight_array()
        U, s, Vt = np.linalg.svd(coeffs * w1[:, None] * w2[None, :], full_matrices=False)
        polar = U @ Vt
        feas = float(np.linalg.norm(polar, 2))
        if feas > 1.0:
            polar = polar / feas
        A = w1[:, None] * polar * w2[None, :]
        cand = abs(float(np.vdot(A, coeffs))), A
    else:
        # generic fallback: the form A = z itself, made feasible by dividing
        # out a sound upper bound of its supremum norm (Cauchy-Schwarz
        # against the Euclidean embedding of each factor ball)
        embed = float(np.prod([_euclidean_embedding_constant(f) for f in factors]))
        fro = float(np.linalg.norm(coeffs))
        A = coeffs / (fro * embed)
        cand = abs(float(np.vdot(A, coeffs))), A
    return cand if cand[0] >= best[0] else best


def pi_lower(z: Tensor, cfg: PiConfig | None = None) -> float:
    """A certified lower bound for the projective norm via feasible dual forms.

    Polyhedral factor spaces solve the exact dual linear program (then
    rescale by the exactly enumerated supremum norm, so LP tolerance cannot
    push the bound above the truth).  Two Euclidean factors use the polar
    factor certificate, attaining the nuclear norm.  Other geometries fall
    back to the Euclidean-embedding certificate.
    """
    cfg = cfg or PiConfig()
    normalized, scale = canonical_gauge(z.coeffs)
    if scale == 0.0:
        return 0.0
    reduced, mult = strip_unit_factors(Tensor(z.space, normalized))
    if reduced is None:
        return mult * float(abs(normalized.ravel()[0])) * scale
    value, _ = pi_dual_certificate(reduced.space.factors, reduced.coeffs, cfg)
    return value * mult * scale


def pi_estimate(z: Tensor, cfg: PiConfig | None = None) -> NormEstimate:
    """Projective norm bracket: dual certificate below, decomposition above."""
    cfg = cfg or PiConfig()
    upper, _, conv_u, tried = pi_upper(z, cfg)
    lower = pi_lower(z, cfg)
    if lower > upper:
        # numerically exact modes can land within float dust of each other
        if lower <= upper * (1.0 + 1e-10) + 1e-12:
            lower = upper
        # otherwise NormEstimate will raise, which is the honest outcome
    gap_ok = upper < INF and (upper - lower) <= cfg.gap_tol * max(1.0, upper)
    return NormEstimate(lower, upper, bool(conv_u and gap_ok), tried, cfg.seed)


def pi_matrix_oracle(z: Tensor) -> float:
    """Exact projective norm for two Euclidean factors: the nuclear norm."""
    if z.space.order != 2:
        raise SpaceError("matrix oracle needs exactly two factors")
    for f in z.space.factors:
        if f.p != 2.0:
            raise SpaceError("matrix oracle needs both factors Euclidean")
    w1 = z.space.factors[0].weight_array()
    w2 = z.space.factors[1].weight_array()
    scaled = z.coeffs * w1[:, None] * w2[None, :]
    return float(np.linalg.svd(scaled, compute_uv=False).sum())

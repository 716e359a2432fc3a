"""Multilinear maps between normed spaces and their ideal norms.

A continuous n-linear map between finite-dimensional normed spaces is a
dense coefficient array with one axis per domain factor plus an output
axis.  This module provides:

* the supremum norm (alternating maximization over the domain unit balls
  and the codomain dual ball, with an exact enumeration mode when every
  one of those balls is polyhedral);
* the linearization norm obtained by viewing the map as a functional on
  the tensor product of its domain, normed by a chosen tensor norm — the
  operator norm of the induced linear map on that normed tensor product;
* the one-point adjunction that removes (or re-attaches) a trailing
  one-dimensional scalar slot, and the check that a tensor norm gives the
  same linearization norm on both sides of that adjunction;
* the strongly multiple (p, q)-summing constant, estimated from finite
  families with the inner supremum taken over the unit ball of multilinear
  forms (not merely product functionals);
* the exact correspondence between maps into a dual space and scalar
  forms with one extra slot.

Every maximization-based value reported here is a certified lower bound;
``upper`` is finite only when an exact enumeration closed the bracket.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .spaces import (
    INF,
    Functional,
    NormedSpace,
    SpaceError,
    UnsupportedNormError,
    Vector,
    extreme_points,
    scalar_space,
)
from .injective import BudgetError, EpsilonConfig, canonical_gauge, multilinear_sup
from .projective import PiConfig, pi_dual_certificate
from .sigma import (
    SigmaConfig,
    SigmaDualConfig,
    _q_norm,
    family_strong_norm,
    sigma_p_dual,
)
from .tensors import (
    NormEstimate,
    Tensor,
    TensorNormEvaluator,
    TensorSpace,
    random_tensor,
    unflatten_scalar,
)

__all__ = [
    "MultilinearMap",
    "Linearization",
    "LinConfig",
    "SmConfig",
    "sup_norm",
    "sup_argmax",
    "linearization_norm",
    "one_adjunction",
    "one_adjunction_inverse",
    "property_B_check",
    "sm_pq_norm",
    "si_p_norm",
    "vector_scalar_bridge",
    "vector_scalar_bridge_inverse",
    "compose",
    "finite_type_map",
    "random_map",
]


@dataclass(frozen=True)
class MultilinearMap:
    """A dense n-linear map: one coefficient axis per domain factor plus output.

    ``coeffs[i1, ..., in, k]`` is the k-th output coordinate of the map
    evaluated on the basis tuple (e_{i1}, ..., e_{in}).  Scalar-valued maps
    have a codomain of dimension one.
    """

    domain: tuple[NormedSpace, ...]
    codomain: NormedSpace
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain", tuple(self.domain))
        if not self.domain:
            raise SpaceError("a multilinear map needs at least one domain factor")
        arr = np.array(self.coeffs, dtype=float)
        expected = tuple(f.dim for f in self.domain) + (self.codomain.dim,)
        if arr.shape != expected:
            raise SpaceError(
                f"coefficient shape {arr.shape} does not match domain/codomain {expected}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def arity(self) -> int:
        return len(self.domain)

    @property
    def is_scalar(self) -> bool:
        return self.codomain.dim == 1

    def apply(self, vectors: Sequence[Vector | np.ndarray]) -> np.ndarray:
        """Evaluate on one vector per domain factor; returns codomain coordinates."""
        if len(vectors) != self.arity:
            raise SpaceError("need exactly one vector per domain factor")
        out = self.coeffs
        for l, v in enumerate(vectors):
            coords = v.coords if isinstance(v, Vector) else np.asarray(v, dtype=float)
            if isinstance(v, Vector) and v.space != self.domain[l]:
                raise SpaceError(f"argument {l} lives on the wrong factor space")
            if coords.shape != (self.domain[l].dim,):
                raise SpaceError(f"argument {l} has the wrong length")
            out = np.tensordot(out, coords, axes=(0, 0))
        return out

    def form_coeffs(self) -> np.ndarray:
        """Scalar maps only: the coefficients as a form on the domain product."""
        if not self.is_scalar:
            raise SpaceError("only scalar-valued maps define a form on the domain")
        return self.coeffs[..., 0]

    def domain_space(self) -> TensorSpace:
        return TensorSpace(self.domain)


@dataclass(frozen=True)
class Linearization:
    """The linear map on the tensor product induced by a multilinear map.

    Satisfies A_L(x1 (x) ... (x) xn) = A(x1, ..., xn) exactly: both sides
    contract the same coefficient array against the same coordinates.
    """

    map: MultilinearMap

    @property
    def matrix(self) -> np.ndarray:
        """Matrix of shape (codomain dim, product of domain dims)."""
        d = self.map.codomain.dim
        return self.map.coeffs.reshape(-1, d).T

    def apply_tensor(self, z: Tensor) -> np.ndarray:
        if z.space.factors != self.map.domain:
            raise SpaceError("tensor lives on a different domain product")
        return self.matrix @ z.coeffs.ravel()


def _ball_spaces(A: MultilinearMap) -> tuple[NormedSpace, ...]:
    """The balls the supremum norm ranges over: domain primal, codomain dual."""
    return A.domain + (A.codomain.dual(),)


def _enumerate_ball_sup(
    coeffs: np.ndarray, balls: Sequence[NormedSpace], budget: int
) -> tuple[float, tuple[np.ndarray, ...], int]:
    """Exact supremum over polyhedral balls by extreme-point enumeration."""
    mats = [np.stack([v.coords for v in extreme_points(sp)]) for sp in balls]
    total = int(np.prod([len(M) for M in mats]))
    if total > budget:
        raise BudgetError(f"enumeration size {total} exceeds budget {budget}")
    n = len(balls)
    letters = string.ascii_lowercase[:n]
    out = string.ascii_uppercase[:n]
    spec = letters + "," + ",".join(out[l] + letters[l] for l in range(n)) + "->" + out
    values = np.einsum(spec, coeffs, *mats, optimize=True)
    flat = int(np.argmax(np.abs(values)))
    idx = np.unravel_index(flat, values.shape)
    slots = tuple(mats[l][idx[l]] for l in range(n))
    return float(abs(values[idx])), slots, total


def sup_argmax(
    A: MultilinearMap, cfg: EpsilonConfig | None = None
) -> tuple[NormEstimate, tuple[np.ndarray, ...]]:
    """Supremum norm with the maximizing slot vectors.

    The slots are (x_1, ..., x_n, y') — unit vectors of each domain factor
    followed by a unit functional on the codomain.  Exact (lower == upper)
    when every one of those balls is polyhedral and fits the enumeration
    budget; otherwise a lower bound from alternating maximization.
    """
    cfg = cfg or EpsilonConfig()
    balls = _ball_spaces(A)
    normalized, scale = canonical_gauge(A.coeffs)
    if scale == 0.0:
        return (
            NormEstimate.exact(0.0, seed=cfg.seed),
            tuple(np.zeros(sp.dim) for sp in balls),
        )
    if all(sp.is_polyhedral() for sp in balls):
        try:
            value, slots, total = _enumerate_ball_sup(normalized, balls, cfg.budget)
            return (
                NormEstimate.exact(value * scale, iterations=total, seed=cfg.seed),
                slots,
            )
        except BudgetError:
            pass
    res = multilinear_sup(normalized, balls, cfg)
    est = NormEstimate(res.value * scale, INF, res.converged, res.iterations, cfg.seed)
    return est, res.slots


def sup_norm(A: MultilinearMap, cfg: EpsilonConfig | None = None) -> NormEstimate:
    """sup of the codomain norm of A(x_1, ..., x_n) over the domain unit balls."""
    est, _ = sup_argmax(A, cfg)
    return est


def one_adjunction(A: MultilinearMap) -> MultilinearMap:
    """Drop a trailing scalar domain slot: A1(x_1, ..., x_n) = A(x_1, ..., x_n, 1).

    Requires the last domain factor to be the scalar field (dimension one,
    unit weight), so plugging in the number 1 plugs in a unit vector and the
    supremum norm is preserved exactly.
    """
    last = A.domain[-1]
    if last.dim != 1:
        raise SpaceError("one_adjunction requires a trailing domain factor of dimension 1")
    if abs(float(last.norm(np.ones(1))) - 1.0) > 0.0:
        raise SpaceError("the trailing domain factor must carry the unit weight of the scalar field")
    if len(A.domain) == 1:
        raise SpaceError("cannot drop the only domain factor")
    return MultilinearMap(A.domain[:-1], A.codomain, A.coeffs[..., 0, :])


def one_adjunction_inverse(
    A1: MultilinearMap, slot: NormedSpace | None = None
) -> MultilinearMap:
    """Re-attach a scalar domain slot; exact inverse of :func:`one_adjunction`."""
    slot = slot if slot is not None else scalar_space()
    if slot.dim != 1 or abs(float(slot.norm(np.ones(1))) - 1.0) > 0.0:
        raise SpaceError("the re-attached slot must be the scalar field")
    return MultilinearMap(
        A1.domain + (slot,), A1.codomain, A1.coeffs[..., None, :]
    )


def vector_scalar_bridge(A: MultilinearMap) -> MultilinearMap:
    """A map into a dual space, re-read as a scalar form with one more slot.

    The codomain is treated as the dual of its own dual space: the bridge
    appends that predual as a new domain factor and the form's value on
    (x_1, ..., x_n, y) is the pairing of A(x_1, ..., x_n) with y.  The
    coefficient array is reinterpreted, not recomputed, so the round trip
    is bit-exact.
    """
    predual = A.codomain.dual()
    return MultilinearMap(
        A.domain + (predual,), scalar_space(), A.coeffs[..., None]
    )


def vector_scalar_bridge_inverse(
    B: MultilinearMap, codomain: NormedSpace | None = None
) -> MultilinearMap:
    """Read an (n+1)-form as a map into the dual of its last domain factor."""
    if not B.is_scalar:
        raise SpaceError("the bridge inverse needs a scalar-valued form")
    if len(B.domain) < 2:
        raise SpaceError("the bridge inverse needs at least two domain factors")
    target = codomain if codomain is not None else B.domain[-1].dual()
    if target.dim != B.domain[-1].dim:
        raise SpaceError("codomain dimension must match the last domain factor")
    return MultilinearMap(B.domain[:-1], target, B.coeffs[..., 0])


def compose(
    A: MultilinearMap,
    pre: Sequence[tuple[np.ndarray, NormedSpace] | None],
    post: tuple[np.ndarray, NormedSpace] | None = None,
) -> MultilinearMap:
    """t o A o (u_1, ..., u_n): precompose each slot, postcompose the output.

    Each ``pre`` entry is (matrix, source_space) with matrix shape
    (old_factor_dim, source_dim); ``post`` is (matrix, target_space) with
    matrix shape (target_dim, old_codomain_dim).  None leaves a slot alone.
    """
    if len(pre) != A.arity:
        raise SpaceError("need exactly one pre-operator (or None) per domain factor")
    coeffs = np.asarray(A.coeffs)
    domain: list[NormedSpace] = []
    for l, op in enumerate(pre):
        if op is None:
            domain.append(A.domain[l])
            continue
        M, src = op
        M = np.asarray(M, dtype=float)
        if M.shape != (A.domain[l].dim, src.dim):
            raise SpaceError(
                f"pre-operator {l} has shape {M.shape}, expected ({A.domain[l].dim}, {src.dim})"
            )
        coeffs = np.moveaxis(np.tensordot(M.T, coeffs, axes=(1, l)), 0, l)
        domain.append(src)
    codomain = A.codomain
    if post is not None:
        T, tgt = post
        T = np.asarray(T, dtype=float)
        if T.shape != (tgt.dim, A.codomain.dim):
            raise SpaceError(
                f"post-operator has shape {T.shape}, expected ({tgt.dim}, {A.codomain.dim})"
            )
        coeffs = np.tensordot(coeffs, T.T, axes=(coeffs.ndim - 1, 0))
        codomain = tgt
    return MultilinearMap(tuple(domain), codomain, coeffs)


def finite_type_map(
    terms: Sequence[tuple[float, Sequence[Functional], Vector]],
) -> MultilinearMap:
    """Sum of weight * (phi_1 (x) ... (x) phi_n) * y maps (finite type)."""
    if not terms:
        raise SpaceError("a finite-type map needs at least one term")
    _, funcs0, y0 = terms[0]
    domain = tuple(f.space for f in funcs0)
    codomain = y0.space
    shape = tuple(sp.dim for sp in domain) + (codomain.dim,)
    coeffs = np.zeros(shape)
    for weight, funcs, y in terms:
        if tuple(f.space for f in funcs) != domain or y.space != codomain:
            raise SpaceError("all finite-type terms must share domain and codomain")
        block = np.asarray(funcs[0].coords, dtype=float)
        for f in funcs[1:]:
            block = np.multiply.outer(block, f.coords)
        coeffs += weight * np.multiply.outer(block, y.coords)
    return MultilinearMap(domain, codomain, coeffs)


def random_map(
    domain: Sequence[NormedSpace],
    codomain: NormedSpace,
    seed: int,
) -> MultilinearMap:
    """Seeded random multilinear map with iid Gaussian coefficients."""
    rng = np.random.default_rng(seed)
    shape = tuple(f.dim for f in domain) + (codomain.dim,)
    return MultilinearMap(tuple(domain), codomain, rng.standard_normal(shape))


# ---------------------------------------------------------------------------
# linearization norm
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinConfig:
    """Budgets for the linearization-norm ratio ascent."""

    tensors: int = 8
    polish_rounds: int = 8
    step: float = 0.25
    seed: int = 0
    sup: EpsilonConfig = field(default_factory=EpsilonConfig)


def _pairing(form: np.ndarray, z: Tensor) -> float:
    return float(np.vdot(form, z.coeffs))


def linearization_norm(
    A: MultilinearMap,
    beta: TensorNormEvaluator,
    cfg: LinConfig | None = None,
    extra: Sequence[Tensor] = (),
) -> NormEstimate:
    """Operator norm of the linearization on the beta-normed tensor product.

    For scalar maps this is sup |<A, z>| over tensors with beta(z) <= 1,
    estimated from below by a ratio ascent over candidate tensors.  Each
    ratio divides by the *certified upper* end of the beta bracket, so no
    candidate can claim more than it proves; candidates whose beta estimate
    has no finite upper end are skipped.  Candidates: the elementary tensor
    built from the supremum-norm argmax (for beta = pi this already attains
    the supremum norm, which the linearization norm then reproduces), any
    caller-provided tensors, seeded random tensors, and a local polish.
    """
    if not A.is_scalar:
        raise UnsupportedNormError(
            "linearization_norm takes scalar-valued maps; bridge vector-valued ones first"
        )
    cfg = cfg or LinConfig()
    form = A.form_coeffs()
    space = A.domain_space()
    if not np.any(form):
        return NormEstimate.exact(0.0, seed=cfg.seed)

    sup_est, slots = sup_argmax(A, cfg.sup)
    candidates: list[Tensor] = []
    elem = slots[0]
    for x in slots[1 : A.arity]:
        elem = np.multiply.outer(elem, x)
    candidates.append(Tensor(space, elem.reshape(space.shape)))
    candidates.extend(extra)
    if cfg.tensors > 0:
        rng_seed = np.random.default_rng([cfg.seed, 32452843])
        for _ in range(cfg.tensors):
            s = int(rng_seed.integers(0, 2**31 - 1))
            candidates.append(random_tensor(space, seed=s))

    best = 0.0
    best_converged = False
    best_z: Tensor | None = None
    evals = 0

    def ratio(z: Tensor) -> float:
        nonlocal evals, best, best_converged, best_z
        evals += 1
        num = abs(_pairing(form, z))
        if num <= 1e-300:
            return 0.0
        est = beta(z)
        if not np.isfinite(est.upper) or est.upper <= 1e-300:
            return 0.0
        r = num / est.upper
        if r > best:
            best = r
            best_converged = est.converged
            best_z = z
        return r

    for z in candidates:
        if z.space.factors != space.factors:
            raise SpaceError("extra candidates must live on the map's domain product")
        ratio(z)

    if best_z is not None and cfg.polish_rounds > 0:
        rng = np.random.default_rng([cfg.seed, 86028121])
        cur = best_z.coeffs.copy()
        cur_ratio = best
        step = cfg.step
        for _ in range(cfg.polish_rounds):
            g = rng.standard_normal(cur.shape)
            gn = float(np.linalg.norm(g))
            if gn <= 1e-300:
                continue
            cand = cur + step * float(np.linalg.norm(cur)) * g / gn
            r = ratio(Tensor(space, cand))
            if r > cur_ratio * (1.0 + 1e-12):
                cur, cur_ratio = cand, r
                step = min(step * 1.4, 1.0)
            else:
                step *= 0.7
            if step < 1e-3:
                break

    return NormEstimate(best, INF, best_converged, evals, cfg.seed)


def property_B_check(
    beta: TensorNormEvaluator,
    dims: Sequence[int],
    samples: int,
    cfg: LinConfig | None = None,
    polyhedral_only: bool | None = None,
) -> dict:
    """Does the trailing-scalar-slot adjunction preserve the linearization norm?

    For sampled scalar maps A on (E_1, ..., E_n, K), compares the
    linearization norm of A on the (n+1)-factor product with that of the
    adjoint A1 on the n-factor product, under the same tensor norm.  Both
    sides are evaluated on coupled candidate pools (each n-factor candidate
    is lifted by appending the scalar slot), so the reported deviation
    reflects the norms themselves, not sampling noise.  Returns a report
    with the per-sample values and the maximum relative deviation.
    """
    cfg = cfg or LinConfig()
    if polyhedral_only is None:
        polyhedral_only = beta.name == "eps"
    palette = (1.0, INF) if polyhedral_only else (1.0, 2.0, INF)
    lincfg = LinConfig(tensors=0, polish_rounds=0, step=cfg.step, seed=cfg.seed, sup=cfg.sup)
    rng = np.random.default_rng([cfg.seed, 27644437])
    cases = []
    max_dev = 0.0
    for s in range(samples):
        factors = tuple(
            NormedSpace(int(d), float(palette[int(rng.integers(0, len(palette)))]))
            for d in dims
        )
        domain = factors + (scalar_space(),)
        shape = tuple(f.dim for f in domain) + (1,)
        A = MultilinearMap(domain, scalar_space(), rng.standard_normal(shape))
        A1 = one_adjunction(A)

        base_space = TensorSpace(factors)
        pool: list[Tensor] = []
        _, slots1 = sup_argmax(A1, cfg.sup)
        elem = slots1[0]
        for x in slots1[1 : A1.arity]:
            elem = np.multiply.outer(elem, x)
        pool.append(Tensor(base_space, elem.reshape(base_space.shape)))
        _, slots = sup_argmax(A, cfg.sup)
        elem = slots[0]
        for x in slots[1 : A.arity]:
            elem = np.multiply.outer(elem, x)
        pool.append(Tensor(base_space, elem.reshape(base_space.shape + (1,))[..., 0]))
        for _ in range(max(cfg.tensors, 2)):
            t = int(rng.integers(0, 2**31 - 1))
            pool.append(random_tensor(base_space, seed=t))
        lifted = [unflatten_scalar(t) for t in pool]

        v_tall = linearization_norm(A, beta, lincfg, extra=lifted).lower
        v_flat = linearization_norm(A1, beta, lincfg, extra=pool).lower
        dev = abs(v_tall - v_flat) / max(abs(v_tall), abs(v_flat), 1e-12)
        max_dev = max(max_dev, dev)
        cases.append(
            {
                "sample": s,
                "dims": [f.dim for f in factors],
                "p_values": [f.p for f in factors],
                "with_scalar_slot": v_tall,
                "adjoint": v_flat,
                "rel_deviation": dev,
            }
        )
    return {
        "norm": beta.name,
        "samples": samples,
        "max_rel_deviation": max_dev,
        "cases": cases,
    }


# ---------------------------------------------------------------------------
# strongly multiple (p, q)-summing constant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmConfig:
    """Budgets for the strongly multiple (p, q)-summing family search."""

    restarts: int = 8
    polish_rounds: int = 40
    cg_iters: int = 10
    cg_starts: int = 4
    step: float = 0.3
    seed: int = 0
    sup: EpsilonConfig = field(default_factory=EpsilonConfig)
    modulus: SigmaConfig = field(default_factory=lambda: SigmaConfig(restarts=6, max_sweeps=60))
    pi: PiConfig = field(default_factory=lambda: PiConfig(restarts=1))


def _grid_values(coeffs: np.ndarray, fams: Sequence[np.ndarray]) -> np.ndarray:
    """Evaluate a map's coefficients on the full family grid.

    coeffs has one axis per domain factor (plus optionally an output axis);
    the result has one grid axis per factor (plus the output axis if any).
    """
    n = len(fams)
    extra = coeffs.ndim - n
    letters = string.ascii_lowercase[:n]
    out = string.ascii_uppercase[:n]
    tail = string.ascii_lowercase[n : n + extra]
    spec = (
        letters
        + tail
        + ","
        + ",".join(out[l] + letters[l] for l in range(n))
        + "->"
        + out
        + tail
    )
    return np.einsum(spec, coeffs, *fams, optimize=True)


def _family_norms(spaces: Sequence[NormedSpace], fams: Sequence[np.ndarray]) -> np.ndarray:
    """Outer product of member norms: entry J is prod_l ||x_{l, j_l}||."""
    per = [np.atleast_1d(sp.norm(X)) for sp, X in zip(spaces, fams)]
    out = per[0]
    for v in per[1:]:
        out = np.multiply.outer(out, v)
    return out


def _norming_functional(space: NormedSpace, x: np.ndarray) -> np.ndarray:
    """A functional of dual norm at most 1 with <g, x> = ||x||."""
    from .projective import _norm_gradient

    return _norm_gradient(space, np.asarray(x, dtype=float)[:, None])[:, 0]


def _form_ball_denominator(
    spaces: Sequence[NormedSpace],
    fams: Sequence[np.ndarray],
    q: float,
    cfg: SmConfig,
) -> tuple[float, bool]:
    """sup over the unit ball of multilinear forms of the grid q-sum.

    Returns (value, exact).  Exact tiers: a single grid point (the supremum
    is the product of member norms), q = inf (max and sup commute), and one
    domain factor (single-family strong norm, exact on polyhedral and
    Euclidean/q=2 balls).  Otherwise a conditional-gradient ascent over
    certified-feasible forms (each iterate has supremum norm at most 1 by
    the same rescaling used for projective lower bounds), reported as a
    lower estimate of the supremum.
    """
    prod_norms = _family_norms(spaces, fams)
    if prod_norms.size == 1:
        return float(prod_norms.ravel()[0]), True
    if q == INF:
        return float(prod_norms.max()), True
    if len(spaces) == 1:
        res = family_strong_norm(spaces[0], fams[0], q, cfg.modulus)
        return res.value, res.exact

    # conditional gradient over the form ball, started from the product
    # functionals of the heaviest grid points (always feasible forms)
    flat_order = np.argsort(prod_norms.ravel())[::-1]
    starts = []
    for flat in flat_order[: cfg.cg_starts]:
        idx = np.unravel_index(int(flat), prod_norms.shape)
        g = _norming_functional(spaces[0], fams[0][idx[0]])
        for l in range(1, len(spaces)):
            g = np.multiply.outer(g, _norming_functional(spaces[l], fams[l][idx[l]]))
        starts.append(g)

    def q_sum(form: np.ndarray) -> float:
        return _q_norm(_grid_values(form, fams).ravel(), q)

    best = 0.0
    for phi in starts:
        val = q_sum(phi)
        best = max(best, val)
        for _ in range(cfg.cg_iters):
            v = _grid_values(phi, fams)
            av = np.abs(v)
            if q == 1.0:
                u = np.sign(v)
            else:
                peak = av.max()
                if peak <= 1e-300:
                    break
                u = (av / peak) ** (q - 1.0) * np.sign(v)
            # gradient direction as a tensor on the domain product
            G = np.einsum(
                _grid_values_spec_reverse(len(fams)), u, *fams, optimize=True
            )
            _, cand = pi_dual_certificate(spaces, G, cfg.pi)
            val = q_sum(cand)
            if val <= best * (1.0 + 1e-12):
                break
            best = val
            phi = cand
    return best, False


def _grid_values_spec_reverse(n: int) -> str:
    """einsum spec assembling a domain tensor from grid weights and families."""
    letters = string.ascii_lowercase[:n]
    out = string.ascii_uppercase[:n]
    return out + "," + ",".join(out[l] + letters[l] for l in range(n)) + "->" + letters


def _sm_ratio(
    A: MultilinearMap,
    fams: Sequence[np.ndarray],
    p: float,
    q: float,
    cfg: SmConfig,
) -> tuple[float, bool]:
    vals = _grid_values(A.coeffs, fams)
    norms = np.atleast_1d(A.codomain.norm(vals.reshape(-1, A.codomain.dim)))
    num = _q_norm(norms, p)
    if num <= 1e-300:
        return 0.0, True
    den, exact = _form_ball_denominator(A.domain, fams, q, cfg)
    if den <= 1e-300:
        return 0.0, exact
    return num / den, exact


def sm_pq_norm(
    A: MultilinearMap,
    p: float,
    q: float,
    family_budget: int = 3,
    cfg: SmConfig | None = None,
) -> NormEstimate:
    """Lower estimate of the strongly multiple (p, q)-summing constant.

    Maximizes, over finite families of up to ``family_budget`` members per
    domain factor, the ratio of the p-sum of output norms on the full index
    grid to the supremum over the unit ball of multilinear forms of the
    grid q-sum.  The single-member family built from the supremum-norm
    argmax is always tried first, so the result is never below the
    supremum norm it was seeded with.  On configurations where the inner
    supremum has an exact tier (single grid point, q = inf, or a single
    domain factor with a polyhedral or Euclidean/q=2 ball) the reported
    ratio is a certified lower bound of the constant; elsewhere the inner
    supremum is itself an ascent value and the ratio is a best-effort
    estimate, flagged by converged=False.
    """
    if not (p >= q >= 1.0):
        raise SpaceError("the strongly multiple constant needs p >= q >= 1")
    cfg = cfg or SmConfig()
    n = A.arity
    if not np.any(A.coeffs):
        return NormEstimate.exact(0.0, seed=cfg.seed)

    _, slots = sup_argmax(A, cfg.sup)
    seed_fam = [np.asarray(slots[l], dtype=float)[None, :] for l in range(n)]

    best = 0.0
    best_exact = True
    best_fams: list[np.ndarray] | None = None
    evals = 0

    def consider(fams: list[np.ndarray]) -> float:
        nonlocal best, best_exact, best_fams, evals
        evals += 1
        r, exact = _sm_ratio(A, fams, p, q, cfg)
        if r > best:
            best, best_exact, best_fams = r, exact, fams
        return r

    consider(seed_fam)
    rng = np.random.default_rng([cfg.seed, 49979687])
    for m in range(1, family_budget + 1):
        for _ in range(cfg.restarts):
            fams = []
            for sp in A.domain:
                G = rng.standard_normal((m, sp.dim))
                norms = np.atleast_1d(sp.norm(G))
                norms = np.where(norms > 1e-12, norms, 1.0)
                fams.append(G / norms[:, None])
            consider(fams)

    if best_fams is not None and cfg.polish_rounds > 0:
        cur = [X.copy() for X in best_fams]
        cur_ratio = best
        step = cfg.step
        for _ in range(cfg.polish_rounds):
            cand = []
            for sp, X in zip(A.domain, cur):
                P = X + step * rng.standard_normal(X.shape)
                norms = np.atleast_1d(sp.norm(P))
                norms = np.where(norms > 1e-12, norms, 1.0)
                cand.append(P / norms[:, None])
            r = consider(cand)
            if r > cur_ratio * (1.0 + 1e-12):
                cur, cur_ratio = cand, r
                step = min(step * 1.4, 1.0)
            else:
                step *= 0.7
            if step < 1e-4:
                break

    return NormEstimate(best, INF, best_exact, evals, cfg.seed)


def si_p_norm(
    A: MultilinearMap, p: float, cfg: SigmaDualConfig | None = None
) -> NormEstimate:
    """Semi-integral constant of a scalar-valued map (lower estimate).

    Delegates to the family-ratio search on the map's form coefficients;
    vector-valued maps are not supported (bridge them to a scalar form
    first if the extra slot is meant to range over a ball).
    """
    if not A.is_scalar:
        raise UnsupportedNormError("the semi-integral constant is defined for scalar-valued maps")
    res = sigma_p_dual(Tensor(A.domain_space(), A.form_coeffs()), p, cfg)
    seed = cfg.seed if cfg is not None else 0
    return NormEstimate(res.value, INF, res.converged, res.iterations, seed)

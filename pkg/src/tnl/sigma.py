"""The sigma_p and beta_p tensor norms and their family-modulus kernel.

sigma_p(z) is the infimum of ||(lambda_j)||_q * M_p(x-families) over finite
representations z = sum_j lambda_j x_1j (x) ... (x) x_nj, where M_p is the
family modulus: the supremum over dual-ball functional tuples of the p-sum
of the term products |phi_1(x_1j) ... phi_n(x_nj)|.  Its dual norm is the
semi-integral constant: the best C with ||(A(x_j))_j||_p <= C * M_p(family)
for every family, which this module estimates by a direct family search
(the two formulations coincide because the Hoelder-optimal weights lambda
turn the dual pairing into exactly that ratio).

beta_p(z) generalizes the representation to grouped blocks whose coefficient
arrays live in the final factor F and whose family index runs over a full
product grid; over that grid the modulus factorizes into per-factor "strong
p-norms" of each family, which is what the search evaluates.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .injective import BudgetError, EpsilonConfig, canonical_gauge, multilinear_sup
from .projective import (
    PiConfig,
    _deflation_candidate,
    _mats_from_decomposition,
    _reattach_units,
    _repair_pivot,
    _slice_candidate,
    pi_upper,
    strip_unit_factors,
)
from .spaces import (
    INF,
    NormedSpace,
    SpaceError,
    Vector,
    ball_linear_maximizer_batch,
    conjugate_exponent,
    extreme_points,
)
from .tensors import (
    Decomposition,
    DecompositionTerm,
    GroupedBlock,
    GroupedDecomposition,
    Tensor,
    grouped_to_tensor,
)

__all__ = [
    "ConjugatePair",
    "ModulusResult",
    "SigmaConfig",
    "SigmaDualConfig",
    "BetaConfig",
    "SigmaResult",
    "SigmaDualResult",
    "BetaResult",
    "family_modulus_p",
    "family_strong_norm",
    "sigma_p_upper",
    "sigma_p_dual",
    "beta_p_upper",
]

_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class ConjugatePair:
    """An exponent p in [1, inf] together with its conjugate q, 1/p + 1/q = 1."""

    p: float

    def __post_init__(self) -> None:
        if not (self.p >= 1.0):
            raise SpaceError(f"p must be >= 1, got {self.p}")

    @property
    def q(self) -> float:
        return conjugate_exponent(self.p)


def _q_norm(values: np.ndarray, q: float) -> float:
    a = np.abs(np.asarray(values, dtype=float))
    if a.size == 0:
        return 0.0
    if q == INF:
        return float(a.max())
    top = a.max()
    if top <= 0.0:
        return 0.0
    return float(top * ((a / top) ** q).sum() ** (1.0 / q))


@dataclass(frozen=True)
class ModulusResult:
    """Value of a family modulus plus the functionals attaining it."""

    value: float
    functionals: tuple[np.ndarray, ...]
    exact: bool
    iterations: int


@dataclass(frozen=True)
class SigmaConfig:
    """Budgets for the sigma_p decomposition search."""

    restarts: int = 8
    max_sweeps: int = 80
    tol: float = 1e-12
    split_rounds: int = 4
    max_rank: int | None = None
    seed: int = 0
    exact_budget: int = 50_000


@dataclass(frozen=True)
class SigmaDualConfig:
    """Budgets for the semi-integral (dual sigma_p) family search."""

    family_sizes: tuple[int, ...] = (1, 2, 4, 8)
    restarts_per_size: int = 12
    polish_rounds: int = 60
    modulus: SigmaConfig = SigmaConfig(restarts=6, max_sweeps=60)
    seed: int = 0


@dataclass(frozen=True)
class BetaConfig:
    """Budgets for the grouped beta_p representation search."""

    max_blocks: int = 3
    max_family: int = 3
    restarts: int = 4
    polish_rounds: int = 80
    seed: int = 0
    modulus: SigmaConfig = SigmaConfig(restarts=6, max_sweeps=60)


@dataclass(frozen=True)
class SigmaResult:
    value: float
    decomposition: Decomposition | None
    converged: bool
    candidates: int


@dataclass(frozen=True)
class SigmaDualResult:
    value: float
    family: tuple[np.ndarray, ...]
    converged: bool
    iterations: int


@dataclass(frozen=True)
class BetaResult:
    value: float
    grouped: GroupedDecomposition | None
    converged: bool
    certified: bool


def _family_arrays(
    families: Sequence[Sequence[Vector]],
) -> tuple[tuple[NormedSpace, ...], list[np.ndarray]]:
    if not families or any(len(f) == 0 for f in families):
        raise SpaceError("every factor needs a nonempty family")
    m = len(families[0])
    if any(len(f) != m for f in families):
        raise SpaceError("aligned families must share one length")
    spaces = tuple(f[0].space for f in families)
    mats = [np.stack([v.coords for v in f]) for f in families]
    return spaces, mats


def _modulus_exact(
    spaces: Sequence[NormedSpace], mats: Sequence[np.ndarray], p: float, budget: int
) -> ModulusResult:
    points = [np.stack([v.coords for v in extreme_points(s.dual())]) for s in spaces]
    total = int(np.prod([len(P) for P in points]))
    m = mats[0].shape[0]
    if total * m > budget:
        raise BudgetError(f"{total}x{m} grid exceeds modulus budget {budget}")
    acts = [P @ X.T for P, X in zip(points, mats)]
    n = len(spaces)
    up = string.ascii_uppercase
    spec = ",".join(up[l] + "j" for l in range(n)) + "->" + up[:n] + "j"
    prod = np.einsum(spec, *acts, optimize=True)
    if p == INF:
        grid = np.abs(prod).max(axis=-1)
    else:
        grid = (np.abs(prod) ** p).sum(axis=-1)
    flat = int(np.argmax(grid))
    idx = np.unravel_index(flat, grid.shape)
    value = float(grid[idx]) if p == INF else float(grid[idx]) ** (1.0 / p)
    funcs = tuple(points[l][idx[l]] for l in range(n))
    return ModulusResult(value, funcs, True, total)


def _modulus_engine(
    spaces: Sequence[NormedSpace],
    mats: Sequence[np.ndarray],
    p: float,
    cfg: SigmaConfig,
    seeds: Sequence[tuple[np.ndarray, ...]],
) -> ModulusResult:
    n = len(spaces)
    duals = [s.dual() for s in spaces]
    phis: list[np.ndarray] = []
    for l in range(n):
        rng = np.random.default_rng([cfg.seed, 6007 + l])
        g = rng.standard_normal((max(cfg.restarts, 1), duals[l].dim))
        norms = np.atleast_1d(duals[l].norm(g))
        block = g / np.where(norms > 1e-12, norms, 1.0)[:, None]
        rows = [np.asarray(s[l], dtype=float) for s in seeds]
        phis.append(np.vstack([np.stack(rows), block]) if rows else block)
    acts = [phis[l] @ mats[l].T for l in range(n)]

    def scores() -> np.ndarray:
        prod = acts[0].copy()
        for a in acts[1:]:
            prod *= a
        if p == INF:
            return np.abs(prod).max(axis=1)
        return (np.abs(prod) ** p).sum(axis=1)

    best = scores()
    stall = 0
    sweeps = 0
    for _ in range(cfg.max_sweeps):
        sweeps += 1
        for l in range(n):
            t = np.ones_like(acts[0])
            for k in range(n):
                if k != l:
                    t *= acts[k]
            v = acts[l]
            if p == INF:
                pick = np.argmax(np.abs(t * v), axis=1)
                rows = np.arange(v.shape[0])
                w = np.zeros_like(v)
                w[rows, pick] = np.abs(t[rows, pick]) * np.sign(v[rows, pick])
            else:
                w = (np.abs(t) ** p) * (np.abs(v) ** (p - 1.0)) * np.sign(v)
            c = w @ mats[l]
            y, _ = ball_linear_maximizer_batch(duals[l], c)
            phis[l] = y
            acts[l] = y @ mats[l].T
        cur = scores()
        if cur.max() <= best.max() * (1.0 + cfg.tol) + cfg.tol:
            stall += 1
        else:
            stall = 0
        best = np.maximum(best, cur)
        if stall >= 3:
            break
    r = int(np.argmax(best))
    value = float(best[r]) if p == INF else float(best[r]) ** (1.0 / p)
    return ModulusResult(value, tuple(phis[l][r] for l in range(n)), False, sweeps)


def family_modulus_p(
    families: Sequence[Sequence[Vector]],
    p: float,
    cfg: SigmaConfig | None = None,
    seeds: Sequence[tuple[np.ndarray, ...]] = (),
) -> ModulusResult:
    """sup over dual-ball tuples of the p-sum of aligned term products.

    Exact by enumeration when every factor ball is polyhedral (and for a
    single-member family, where the supremum is the product of norms);
    otherwise a monotone conditional-gradient ascent from seeded starts —
    a lower bound, like every maximization-based estimate in this package.
    """
    cfg = cfg or SigmaConfig()
    pair = ConjugatePair(p)
    spaces, mats = _family_arrays(families)
    return _modulus_arrays(spaces, mats, pair.p, cfg, seeds)


def _modulus_arrays(
    spaces: Sequence[NormedSpace],
    mats: Sequence[np.ndarray],
    p: float,
    cfg: SigmaConfig,
    seeds: Sequence[tuple[np.ndarray, ...]] = (),
) -> ModulusResult:
    m = mats[0].shape[0]
    if m == 1:
        value = 1.0
        funcs = []
        for sp, X in zip(spaces, mats):
            y, val = ball_linear_maximizer_batch(sp.dual(), X[0])
            value *= float(val[0])
            funcs.append(y[0])
        return ModulusResult(value, tuple(funcs), True, 1)
    if all(sp.is_polyhedral() for sp in spaces):
        try:
            return _modulus_exact(spaces, mats, p, cfg.exact_budget)
        except BudgetError:
            pass
    return _modulus_engine(spaces, mats, p, cfg, seeds)


def family_strong_norm(
    space: NormedSpace,
    vectors: Sequence[Vector] | np.ndarray,
    p: float,
    cfg: SigmaConfig | None = None,
) -> ModulusResult:
    """sup over the dual ball of the p-sum of |phi(x_j)| for one family.

    This is the per-factor building block of the grid modulus used by
    beta_p: over a full product index the joint modulus factorizes into the
    product of these single-factor strong norms.  Exact for polyhedral
    balls, for Euclidean balls with p = 2 (largest singular value), and for
    p = inf (the largest member norm); conditional-gradient ascent otherwise.
    """
    cfg = cfg or SigmaConfig()
    if isinstance(vectors, np.ndarray):
        X = np.atleast_2d(np.asarray(vectors, dtype=float))
    else:
        X = np.stack([v.coords for v in vectors])
    if p == INF:
        norms = np.atleast_1d(space.norm(X))
        j = int(np.argmax(norms))
        y, _ = ball_linear_maximizer_batch(space.dual(), X[j])
        return ModulusResult(float(norms[j]), (y[0],), True, 1)
    if space.p == 2.0 and p == 2.0:
        w = space.weight_array()
        M = X * w[None, :]
        u, s, vt = np.linalg.svd(M, full_matrices=False)
        return ModulusResult(float(s[0]), (w * vt[0],), True, 1)
    return _modulus_arrays((space,), [X], p, cfg)


def _split_scales(lam: np.ndarray, m: np.ndarray, p: float, q: float) -> np.ndarray:
    """Per-term rescaling minimizing ||lam*s||_q * ||m/s||_p (Hoelder split)."""
    a = np.abs(lam)
    if q == INF:
        s = 1.0 / np.where(a > 1e-300, a, 1.0)
    elif p == INF:
        s = m.copy()
    else:
        s = (np.where(m > 0, m, 1e-300) ** p / np.where(a > 0, a, 1e-300) ** q) ** (
            1.0 / (p + q)
        )
    s = np.clip(s, 1e-9, 1e9)
    geo = np.exp(np.mean(np.log(s)))
    return s / geo


def _sigma_candidate_value(
    factors: Sequence[NormedSpace],
    mats: Sequence[np.ndarray],
    p: float,
    q: float,
    cfg: SigmaConfig,
    seeds: Sequence[tuple[np.ndarray, ...]],
) -> tuple[float, np.ndarray, list[np.ndarray], bool]:
    """Evaluate one exact decomposition under the sigma_p objective.

    Columns are normalized so term weights carry the scale, then the
    Hoelder split re-distributes scale between the weights and the first
    factor's family, re-evaluating the modulus honestly each round.
    """
    n = len(factors)
    norms = np.stack([np.atleast_1d(f.norm(M.T)) for f, M in zip(factors, mats)])
    lam = np.prod(norms, axis=0)
    keep = lam > 0.0
    if not np.any(keep):
        return 0.0, np.zeros(0), [np.zeros((0, f.dim)) for f in factors], True
    fams = []
    for l, f in enumerate(factors):
        safe = np.where(norms[l] > 0.0, norms[l], 1.0)
        fams.append((mats[l] / safe[None, :]).T[keep])
    lam = lam[keep]

    best = np.inf
    best_state: tuple[np.ndarray, list[np.ndarray], tuple[np.ndarray, ...]] | None = None
    prev = np.inf
    converged = False
    # the injective-argmax seed must survive every split round: each modulus
    # estimate that includes it stays at or above the pairing it certifies,
    # which is what keeps the reported value above the injective bound
    base_seeds = list(seeds)
    for _ in range(cfg.split_rounds):
        mod = _modulus_arrays(factors, fams, p, cfg, seeds)
        value = _q_norm(lam, q) * mod.value
        if value < best:
            best = value
            best_state = (lam.copy(), [F.copy() for F in fams], mod.functionals)
        if abs(prev - value) <= 1e-12 * max(1.0, value):
            converged = True
            break
        prev = value
        acts = np.ones(len(lam))
        for l in range(n):
            acts = acts * (fams[l] @ mod.functionals[l])
        m_j = np.abs(acts)
        s = _split_scales(lam, m_j, p, q)
        lam = lam * s
        fams[0] = fams[0] / s[:, None]
        seeds = base_seeds + [mod.functionals]
    assert best_state is not None
    lam_b, fams_b, _ = best_state
    return float(best), lam_b, fams_b, converged


def sigma_p_upper(
    z: Tensor, p: float, cfg: SigmaConfig | None = None
) -> SigmaResult:
    """Best sigma_p representation value found (an upper-bound search).

    Candidates come from exact slice/deflation/projective decompositions;
    each is evaluated under ||lambda||_q * modulus with Hoelder-split
    rebalancing.  Every modulus run is seeded with the injective argmax
    functionals of the tensor itself, which keeps the reported value at or
    above the injective lower bound by construction.
    """
    cfg = cfg or SigmaConfig()
    pair = ConjugatePair(p)
    q = pair.q
    normalized, scale = canonical_gauge(z.coeffs)
    if scale == 0.0:
        return SigmaResult(0.0, Decomposition(()), True, 0)
    sign = 1.0 if z.coeffs.ravel()[np.flatnonzero(z.coeffs.ravel())[0]] > 0 else -1.0
    reduced, mult = strip_unit_factors(Tensor(z.space, normalized))
    if reduced is None:
        value = mult * float(abs(normalized.ravel()[0])) * scale
        return SigmaResult(value, _reattach_units(z.space, None, sign * scale), True, 1)
    factors = reduced.space.factors
    coeffs = reduced.coeffs
    if reduced.space.order == 1:
        f = factors[0]
        value = mult * float(f.norm(coeffs)) * scale
        base = Decomposition((DecompositionTerm(1.0, (Vector(f, coeffs),)),))
        return SigmaResult(value, _reattach_units(z.space, base, sign * scale), True, 1)

    # seed the modulus runs with the injective argmax at the full default
    # restart budget: the reported value then never drops below the bound an
    # injective run at default budgets can certify for the same tensor
    eps_cfg = EpsilonConfig(restarts=max(32, cfg.restarts), seed=cfg.seed)
    sup = multilinear_sup(coeffs, reduced.space.dual_factors(), eps_cfg)
    seeds = [sup.slots]

    shape = coeffs.shape
    n = len(factors)
    pivot = int(np.argmax(shape))
    rest = int(np.prod([d for i, d in enumerate(shape) if i != pivot]))
    max_rank = cfg.max_rank if cfg.max_rank is not None else rest
    unfolded = np.moveaxis(coeffs, pivot, 0).reshape(shape[pivot], -1)

    def full_mats(free: list[np.ndarray]) -> list[np.ndarray] | None:
        piv, resid = _repair_pivot(unfolded, free)
        if resid > _RESIDUAL_TOL:
            return None
        mats = list(free)
        mats.insert(pivot, piv)
        return mats

    candidates: list[list[np.ndarray]] = []
    if rest <= max_rank:
        c = full_mats(_slice_candidate(shape, pivot))
        if c is not None:
            candidates.append(c)
    defl = _deflation_candidate(coeffs, pivot, max_rank, 40)
    if defl:
        c = full_mats(defl)
        if c is not None:
            candidates.append(c)
    if n == 2:
        other = 1 - pivot
        w0 = factors[0].weight_array()
        w1 = factors[1].weight_array()
        scaled = coeffs * w0[:, None] * w1[None, :]
        u, s, vt = np.linalg.svd(scaled, full_matrices=False)
        basis = (u if other == 0 else vt.T) / factors[other].weight_array()[:, None]
        c = full_mats([basis[:, : min(len(s), max_rank)]])
        if c is not None:
            candidates.append(c)
    pi_val, pi_dec, _, _ = pi_upper(
        Tensor(reduced.space, coeffs), PiConfig(seed=cfg.seed, restarts=2)
    )
    if pi_dec is not None and pi_dec.terms:
        free = _mats_from_decomposition(pi_dec, reduced.space, pivot)
        if free is not None:
            c = full_mats(free)
            if c is not None:
                candidates.append(c)

    best = np.inf
    best_lam: np.ndarray | None = None
    best_fams: list[np.ndarray] | None = None
    converged = False
    for mats in candidates:
        val, lam, fams, conv = _sigma_candidate_value(factors, mats, p, q, cfg, seeds)
        if val < best:
            best = val
            best_lam, best_fams = lam, fams
            converged = conv

    if not np.isfinite(best) or best_lam is None:
        return SigmaResult(float("inf"), None, False, len(candidates))

    terms = []
    for j in range(len(best_lam)):
        vecs = tuple(
            Vector(factors[l], best_fams[l][j]) for l in range(len(factors))
        )
        terms.append(DecompositionTerm(float(best_lam[j]), vecs))
    base = Decomposition(tuple(terms))
    dec = _reattach_units(z.space, base, sign * scale)
    return SigmaResult(best * mult * scale, dec, converged, len(candidates))


def _eval_form_family(form: np.ndarray, fams: Sequence[np.ndarray]) -> np.ndarray:
    """A(x_{1,j},...,x_{n,j}) for every aligned index j."""
    n = len(fams)
    letters = string.ascii_lowercase[:n]
    spec = letters + "," + ",".join("j" + letters[l] for l in range(n)) + "->j"
    return np.einsum(spec, form, *fams, optimize=True)


def _si_ratio(
    form: np.ndarray,
    spaces: Sequence[NormedSpace],
    fams: Sequence[np.ndarray],
    p: float,
    cfg: SigmaConfig,
) -> float:
    num = _q_norm(_eval_form_family(form, fams), p)
    den = _modulus_arrays(spaces, fams, p, cfg).value
    if den <= 1e-300:
        return 0.0
    return num / den


def sigma_p_dual(form: Tensor, p: float, cfg: SigmaDualConfig | None = None) -> SigmaDualResult:
    """The semi-integral constant of a scalar multilinear map, from below.

    ``form`` holds the map's coefficients on the product of its domain
    spaces.  By duality the constant equals the supremum over tensors of
    |<A, z>| / sigma_p(z); optimizing the representation weights in closed
    form reduces that to the supremum over vector families of
    ||(A(x_j))_j||_p / modulus_p(family), which is searched directly:
    seeded multi-start families polished by hill climbing.
    """
    cfg = cfg or SigmaDualConfig()
    ConjugatePair(p)
    spaces = form.space.factors
    coeffs = form.coeffs
    if float(np.linalg.norm(coeffs)) == 0.0:
        return SigmaDualResult(0.0, tuple(np.zeros((1, s.dim)) for s in spaces), True, 0)

    eps_cfg = EpsilonConfig(restarts=8, seed=cfg.seed)
    sup = multilinear_sup(coeffs, tuple(spaces), eps_cfg)
    best_fams: list[np.ndarray] = [s[None, :] for s in sup.slots]
    best = _si_ratio(coeffs, spaces, best_fams, p, cfg.modulus)

    iterations = 0
    rng_master = np.random.default_rng([cfg.seed, 15485863])
    for m in cfg.family_sizes:
        for r in range(cfg.restarts_per_size):
            fams = []
            for sp in spaces:
                g = rng_master.standard_normal((m, sp.dim))
                norms = np.atleast_1d(sp.norm(g))
                fams.append(g / np.where(norms > 1e-12, norms, 1.0)[:, None])
            val = _si_ratio(coeffs, spaces, fams, p, cfg.modulus)
            step = 0.3
            for _ in range(cfg.polish_rounds):
                iterations += 1
                cand = []
                for sp, F in zip(spaces, fams):
                    g = rng_master.standard_normal(F.shape)
                    trial = F + step * g
                    norms = np.atleast_1d(sp.norm(trial))
                    cand.append(trial / np.where(norms > 1e-12, norms, 1.0)[:, None])
                cval = _si_ratio(coeffs, spaces, cand, p, cfg.modulus)
                if cval > val:
                    fams, val = cand, cval
                    step = min(step * 1.4, 1.0)
                else:
                    step *= 0.7
                    if step < 1e-4:
                        break
            if val > best:
                best = val
                best_fams = fams
    return SigmaDualResult(float(best), tuple(best_fams), True, iterations)


def _block_design(families: Sequence[np.ndarray]) -> np.ndarray:
    """Design matrix mapping a block's flat coefficients to domain coefficients."""
    out = np.ones((1, 1))
    for X in families:
        out = np.kron(out, X.T)
    return out


def _fit_blocks(
    domain_dim: int,
    codim: int,
    target: np.ndarray,
    family_sets: Sequence[Sequence[np.ndarray]],
) -> tuple[list[np.ndarray], float]:
    """Joint least-squares coefficients for all blocks; returns residual too."""
    designs = [_block_design(fams) for fams in family_sets]
    G = np.hstack(designs)
    sol, *_ = np.linalg.lstsq(G, target.reshape(domain_dim, codim), rcond=None)
    resid = float(np.linalg.norm(G @ sol - target.reshape(domain_dim, codim)))
    out = []
    offset = 0
    for fams, D in zip(family_sets, designs):
        width = D.shape[1]
        shape = tuple(X.shape[0] for X in fams) + (codim,)
        out.append(sol[offset : offset + width].reshape(shape))
        offset += width
    return out, resid


def _beta_objective(
    domain: Sequence[NormedSpace],
    cod: NormedSpace,
    family_sets: Sequence[Sequence[np.ndarray]],
    coeff_arrays: Sequence[np.ndarray],
    p: float,
    q: float,
    cfg: SigmaConfig,
) -> tuple[float, bool]:
    total = 0.0
    certified = True
    for fams, b in zip(family_sets, coeff_arrays):
        flat = b.reshape(-1, b.shape[-1])
        coef = _q_norm(np.atleast_1d(cod.norm(flat)), q)
        strong = 1.0
        for sp, X in zip(domain, fams):
            res = family_strong_norm(sp, X, p, cfg)
            strong *= res.value
            certified = certified and res.exact
        total += coef * strong
    return total, certified


def beta_p_upper(z: Tensor, p: float, cfg: BetaConfig | None = None) -> BetaResult:
    """Best grouped-representation value found for beta_p (upper-flavored).

    The final factor is the codomain slot; families live on the remaining
    factors and block coefficients are refit by least squares after every
    family move, so all reported values come from exact reconstructions.
    ``certified`` records whether every per-factor strong norm was computed
    exactly (polyhedral or Euclidean-p2 oracles) rather than by ascent.
    """
    cfg = cfg or BetaConfig()
    pair = ConjugatePair(p)
    q = pair.q
    if z.space.order < 1:
        raise SpaceError("beta_p needs at least the codomain factor")
    cod = z.space.factors[-1]
    domain = z.space.factors[:-1]
    normalized, scale = canonical_gauge(z.coeffs)
    if scale == 0.0:
        return BetaResult(0.0, None, True, True)
    sign = 1.0 if z.coeffs.ravel()[np.flatnonzero(z.coeffs.ravel())[0]] > 0 else -1.0
    if not domain:
        return BetaResult(float(cod.norm(z.coeffs)), None, True, True)

    dom_dim = int(np.prod([f.dim for f in domain]))
    target = normalized.reshape(dom_dim, cod.dim)

    candidate_sets: list[list[list[np.ndarray]]] = []
    candidate_sets.append([[np.eye(f.dim) for f in domain]])

    pi_val, pi_dec, _, _ = pi_upper(
        Tensor(z.space, normalized), PiConfig(seed=cfg.seed, restarts=1)
    )
    if pi_dec is not None and pi_dec.terms:
        blocks = []
        for t in pi_dec.terms[: cfg.max_blocks * 3]:
            blocks.append([t.vectors[l].coords[None, :] for l in range(len(domain))])
        if blocks:
            candidate_sets.append(blocks)

    rng = np.random.default_rng([cfg.seed, 32452843])
    for r in range(cfg.restarts):
        nblocks = 1 + r % cfg.max_blocks
        blocks = []
        for _ in range(nblocks):
            fams = []
            for f in domain:
                size = min(cfg.max_family, f.dim)
                g = rng.standard_normal((size, f.dim))
                norms = np.atleast_1d(f.norm(g))
                fams.append(g / np.where(norms > 1e-12, norms, 1.0)[:, None])
            blocks.append(fams)
        candidate_sets.append(blocks)

    best = np.inf
    best_state: tuple[list[list[np.ndarray]], list[np.ndarray]] | None = None
    best_cert = False
    converged = False
    for family_sets in candidate_sets:
        coeff_arrays, resid = _fit_blocks(dom_dim, cod.dim, target, family_sets)
        if resid > _RESIDUAL_TOL:
            continue
        val, cert = _beta_objective(domain, cod, family_sets, coeff_arrays, p, q, cfg.modulus)
        state = (family_sets, coeff_arrays)
        step = 0.2
        stalled = 0
        for _ in range(cfg.polish_rounds):
            trial_sets = []
            for fams in state[0]:
                tf = []
                for sp, X in zip(domain, fams):
                    g = rng.standard_normal(X.shape)
                    t = X + step * g
                    norms = np.atleast_1d(sp.norm(t))
                    tf.append(t / np.where(norms > 1e-12, norms, 1.0)[:, None])
                trial_sets.append(tf)
            t_coeffs, t_resid = _fit_blocks(dom_dim, cod.dim, target, trial_sets)
            if t_resid <= _RESIDUAL_TOL:
                t_val, t_cert = _beta_objective(
                    domain, cod, trial_sets, t_coeffs, p, q, cfg.modulus
                )
                if t_val < val:
                    val, cert = t_val, t_cert
                    state = (trial_sets, t_coeffs)
                    step = min(step * 1.3, 0.8)
                    stalled = 0
                    continue
            step *= 0.7
            stalled += 1
            if stalled >= 12:
                break
        if val < best:
            best = val
            best_state = state
            best_cert = cert
            converged = stalled >= 12 or cfg.polish_rounds == 0
    if best_state is None:
        return BetaResult(float("inf"), None, False, False)
    # undo the input normalization through the coefficient arrays
    blocks = [
        GroupedBlock(tuple(fams), b * sign * scale)
        for fams, b in zip(best_state[0], best_state[1])
    ]
    grouped = GroupedDecomposition(tuple(blocks))
    return BetaResult(best * scale, grouped, converged, best_cert)

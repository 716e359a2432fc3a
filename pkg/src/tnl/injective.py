"""The injective tensor norm and the shared multilinear supremum engine.

The injective norm of z on E_1 (x) ... (x) E_n is the supremum of
|<z, f_1 (x) ... (x) f_n>| over the dual unit balls ||f_l||' <= 1.  Fixing
all slots but one leaves a linear functional, whose maximum over a unit
ball has a closed form, so coordinate-ascent sweeps are exact and monotone.
The same engine drives every other supremum in the package (operator norms,
multilinear sup norms) by passing different ball spaces.

Three evaluation routes are provided:

* :func:`epsilon_estimate`: seeded multi-start alternating maximization.
  Always a lower bound; upper stays +inf unless a certificate is attached.
* :func:`epsilon_bruteforce`: exact enumeration when every dual ball is
  polyhedral, or a grid sweep with a rigorous Lipschitz bracket otherwise.
* :func:`epsilon_matrix_oracle`: largest singular value for two Euclidean
  factors.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, replace

import numpy as np

from .spaces import (
    INF,
    NormedSpace,
    SpaceError,
    UnsupportedNormError,
    ball_linear_maximizer_batch,
    extreme_points,
)
from .tensors import NormEstimate, Tensor

__all__ = [
    "EpsilonConfig",
    "SupResult",
    "multilinear_sup",
    "epsilon_estimate",
    "epsilon_argmax",
    "epsilon_bruteforce",
    "epsilon_matrix_oracle",
    "operator_norm",
    "canonical_gauge",
    "BudgetError",
]

_STALL_SWEEPS = 3


class BudgetError(RuntimeError):
    """An exhaustive mode would exceed its evaluation budget."""


@dataclass(frozen=True)
class EpsilonConfig:
    """Search budget for supremum-type estimators.

    restarts counts independent starting points (the first is a spectral
    initialization, the rest are seeded random draws); convergence is
    declared when the relative improvement stays below tol for three
    consecutive sweeps.  grid_resolution is the number of subdivisions per
    axis in grid mode; budget caps exhaustive enumeration sizes.
    """

    restarts: int = 32
    max_iters: int = 600
    tol: float = 1e-13
    grid_resolution: int = 0
    seed: int = 0
    budget: int = 2_000_000

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (self.tol > 0.0):
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class SupResult:
    """Outcome of a multilinear supremum search."""

    value: float
    slots: tuple[np.ndarray, ...]
    iterations: int
    converged: bool


def canonical_gauge(coeffs: np.ndarray) -> tuple[np.ndarray, float]:
    """Normalize a coefficient array to unit Frobenius norm and canonical sign.

    Returns (normalized, scale) with coeffs = (sign) * scale * normalized and
    scale >= 0.  Estimators run on the normalized array and multiply by the
    scale, which makes them equivariant under scaling of the input (exactly
    so for power-of-two scalings, where float multiplication is exact).
    """
    flat = coeffs.ravel()
    scale = float(np.linalg.norm(flat))
    if scale == 0.0:
        return coeffs, 0.0
    nz = flat[flat != 0.0]
    sign = 1.0 if nz[0] > 0 else -1.0
    return coeffs * (sign / scale), scale


def _leading_direction(coeffs: np.ndarray, axis: int) -> np.ndarray:
    """Leading left singular vector of the mode unfolding; a strong start."""
    d = coeffs.shape[axis]
    if d == 1:
        return np.ones(1)
    unfold = np.moveaxis(coeffs, axis, 0).reshape(d, -1)
    u, _, _ = np.linalg.svd(unfold, full_matrices=False)
    return u[:, 0]


def _contract_specs(n: int) -> list[str]:
    """einsum spec contracting all slots except l, batched over restarts."""
    letters = string.ascii_lowercase[:n]
    specs = []
    for l in range(n):
        operands = [letters]
        for m in range(n):
            if m != l:
                operands.append("z" + letters[m])
        specs.append(",".join(operands) + "->z" + letters[l])
    return specs


def multilinear_sup(
    coeffs: np.ndarray,
    ball_spaces: tuple[NormedSpace, ...],
    cfg: EpsilonConfig,
) -> SupResult:
    """Maximize |sum coeffs * x_1 ... x_n| over unit balls of the given spaces.

    Monotone alternating sweeps with batched restarts.  Returns the best
    value found (a lower bound on the true supremum), the maximizing slot
    vectors, and convergence metadata.
    """
    n = len(ball_spaces)
    if coeffs.shape != tuple(sp.dim for sp in ball_spaces):
        raise SpaceError("coefficient shape does not match ball spaces")
    R = cfg.restarts
    slots: list[np.ndarray] = []
    for l, sp in enumerate(ball_spaces):
        mats = np.empty((R, sp.dim))
        lead = _leading_direction(coeffs, l)
        nl = float(sp.norm(lead))
        mats[0] = lead / (nl if nl > 1e-300 else 1.0)
        if R > 1:
            rng = np.random.default_rng([cfg.seed, 7919 + l])
            g = rng.standard_normal((R - 1, sp.dim))
            norms = np.atleast_1d(sp.norm(g))
            norms = np.where(norms > 1e-12, norms, 1.0)
            mats[1:] = g / norms[:, None]
        slots.append(mats)

    if n == 1:
        X, vals = ball_linear_maximizer_batch(ball_spaces[0], np.broadcast_to(coeffs, (R, coeffs.shape[0])))
        best = int(np.argmax(vals))
        return SupResult(float(vals[best]), (X[best],), 1, True)

    specs = _contract_specs(n)
    vals = np.zeros(R)
    stall = np.zeros(R, dtype=int)
    iterations = 0
    converged = False
    for iterations in range(1, cfg.max_iters + 1):
        v = vals
        for l in range(n):
            others = [slots[m] for m in range(n) if m != l]
            C = np.einsum(specs[l], coeffs, *others, optimize=True)
            slots[l], v = ball_linear_maximizer_batch(ball_spaces[l], C)
        improvement = v - vals
        stall = np.where(improvement <= cfg.tol * np.maximum(1.0, v), stall + 1, 0)
        vals = v
        if bool(np.all(stall >= _STALL_SWEEPS)):
            converged = True
            break
    best = int(np.argmax(vals))
    return SupResult(
        float(vals[best]),
        tuple(slots[l][best] for l in range(n)),
        iterations,
        converged or bool(stall[best] >= _STALL_SWEEPS),
    )


def epsilon_argmax(z: Tensor, cfg: EpsilonConfig | None = None) -> tuple[NormEstimate, tuple[np.ndarray, ...]]:
    """Injective norm lower bound plus the maximizing dual functionals."""
    cfg = cfg or EpsilonConfig()
    normalized, scale = canonical_gauge(z.coeffs)
    if scale == 0.0:
        unit = tuple(np.zeros(f.dim) for f in z.space.factors)
        return NormEstimate.exact(0.0, seed=cfg.seed), unit
    res = multilinear_sup(normalized, z.space.dual_factors(), cfg)
    est = NormEstimate(res.value * scale, INF, res.converged, res.iterations, cfg.seed)
    return est, res.slots


def epsilon_estimate(z: Tensor, cfg: EpsilonConfig | None = None) -> NormEstimate:
    """Alternating-maximization estimate of the injective norm (lower bound)."""
    est, _ = epsilon_argmax(z, cfg)
    return est


def _dual_ball_grid(space: NormedSpace, resolution: int) -> tuple[np.ndarray, float]:
    """Cover the unit ball of ``space`` with grid points and a covering radius.

    Returns (points, delta): every ball point is within delta of some
    returned point, measured in the ball's own norm, and every returned
    point lies inside the ball.
    """
    if resolution < 2:
        raise SpaceError("grid mode needs grid_resolution >= 2")
    d, q = space.dim, space.p
    w = space.weight_array()
    h = 2.0 / resolution
    ticks = np.linspace(-1.0, 1.0, resolution + 1)
    mesh = np.stack(np.meshgrid(*([ticks] * d), indexing="ij"), axis=-1).reshape(-1, d)
    half_cover = (d ** (1.0 / q) if q < INF else 1.0) * (h / 2.0)
    norms = NormedSpace(d, q).norm(mesh)
    keep = norms <= 1.0 + half_cover
    pts = mesh[keep]
    scale = np.maximum(1.0, norms[keep])
    pts = pts / scale[:, None]
    return pts / w, 2.0 * half_cover


def epsilon_bruteforce(z: Tensor, cfg: EpsilonConfig | None = None) -> NormEstimate:
    """Certified injective norm bracket by exhaustive evaluation.

    If every dual ball is polyhedral the supremum is attained on extreme
    points and the result is exact (lower == upper).  Otherwise each dual
    ball is swept on a grid and the upper bound carries the multilinear
    Lipschitz slack implied by the covering radius: the true supremum is at
    most best/(1 - sum of radii) whenever the radii sum below one.
    """
    cfg = cfg or EpsilonConfig()
    normalized, scale = canonical_gauge(z.coeffs)
    if scale == 0.0:
        return NormEstimate.exact(0.0, seed=cfg.seed)
    duals = z.space.dual_factors()
    polyhedral = all(sp.is_polyhedral() for sp in duals)
    mats: list[np.ndarray] = []
    slack_sum = 0.0
    total = 1
    if polyhedral:
        for sp in duals:
            pts = np.stack([v.coords for v in extreme_points(sp)])
            mats.append(pts)
            total *= len(pts)
    else:
        if cfg.grid_resolution < 2:
            raise UnsupportedNormError(
                "factors with non-polyhedral dual balls need grid_resolution >= 2"
            )
        for sp in duals:
            pts, delta = _dual_ball_grid(sp, cfg.grid_resolution)
            mats.append(pts)
            slack_sum += delta
            total *= len(pts)
    if total > cfg.budget:
        raise BudgetError(f"enumeration size {total} exceeds budget {cfg.budget}")

    n = z.space.order
    letters = string.ascii_lowercase[:n]
    out = string.ascii_uppercase[:n]
    spec = (
        letters
        + ","
        + ",".join(out[l] + letters[l] for l in range(n))
        + "->"
        + out
    )
    values = np.einsum(spec, normalized, *mats, optimize=True)
    best = float(np.abs(values).max()) * scale
    if polyhedral:
        return NormEstimate.exact(best, iterations=total, seed=cfg.seed)
    upper = best / (1.0 - slack_sum) if slack_sum < 1.0 else INF
    return NormEstimate(best, upper, True, total, cfg.seed)


def epsilon_matrix_oracle(z: Tensor) -> float:
    """Exact injective norm for two Euclidean factors: the top singular value."""
    if z.space.order != 2:
        raise UnsupportedNormError("matrix oracle needs exactly two factors")
    for f in z.space.factors:
        if f.p != 2.0:
            raise UnsupportedNormError("matrix oracle needs both factors Euclidean")
    w1 = z.space.factors[0].weight_array()
    w2 = z.space.factors[1].weight_array()
    scaled = z.coeffs * w1[:, None] * w2[None, :]
    return float(np.linalg.svd(scaled, compute_uv=False)[0])


def operator_norm(
    matrix: np.ndarray,
    source: NormedSpace,
    target: NormedSpace,
    cfg: EpsilonConfig | None = None,
) -> float:
    """Operator norm of a matrix between normed spaces.

    Computed as the bilinear supremum sup { <g, M x> : x in B_source,
    g in the dual ball of the target }, which is the injective norm of the
    matrix viewed as a 2-tensor.  Euclidean-to-Euclidean pairs short-circuit
    to the singular value oracle.
    """
    M = np.asarray(matrix, dtype=float)
    if M.shape != (target.dim, source.dim):
        raise SpaceError(f"matrix shape {M.shape}, expected ({target.dim}, {source.dim})")
    if source.p == 2.0 and target.p == 2.0:
        ws = source.weight_array()
        wt = target.weight_array()
        return float(np.linalg.svd(wt[:, None] * M / ws[None, :], compute_uv=False)[0])
    cfg = cfg or EpsilonConfig(restarts=16, max_iters=300)
    normalized, scale = canonical_gauge(M)
    if scale == 0.0:
        return 0.0
    res = multilinear_sup(normalized, (target.dual(), source), cfg)
    return res.value * scale

"""Uniform evaluator objects for the implemented tensor norms.

Each factory wraps one norm as a :class:`~tnl.tensors.TensorNormEvaluator`
with a fixed configuration, a stable name, and a declared certified side:

* ``eps``   — injective norm; certified lower bound from alternating
  maximization, with an exact bracket (lower == upper) whenever every dual
  ball is polyhedral (or a grid resolution is configured) within budget.
* ``pi``    — projective norm; two-sided bracket (dual certificate below,
  reconstructed decomposition above).
* ``sigma_p`` — certified upper bound from the decomposition search; the
  lower end of the bracket is the injective bound, which every reasonable
  crossnorm dominates.
* ``beta_p`` — upper-bound search over grouped decompositions; no lower
  certificate is implemented, so the bracket's lower end is zero.

All evaluators strip one-dimensional factors where that is value-preserving
(everything except beta_p, for which the collapse genuinely changes the
norm), so identities that hinge on appending a scalar slot are reproduced
exactly rather than up to search noise.
"""

from __future__ import annotations

from dataclasses import asdict

import numpy as np

from .injective import (
    BudgetError,
    EpsilonConfig,
    canonical_gauge,
    epsilon_bruteforce,
    epsilon_estimate,
)
from .projective import PiConfig, pi_estimate, strip_unit_factors
from .sigma import BetaConfig, SigmaConfig, beta_p_upper, sigma_p_upper
from .spaces import INF, SpaceError
from .tensors import NormEstimate, Tensor, TensorNormEvaluator

__all__ = [
    "make_epsilon_evaluator",
    "make_pi_evaluator",
    "make_sigma_evaluator",
    "make_beta_evaluator",
    "evaluator_for",
]


def make_epsilon_evaluator(cfg: EpsilonConfig | None = None) -> TensorNormEvaluator:
    """Injective norm evaluator: exact on polyhedral dual balls, else a lower bound."""
    cfg = cfg or EpsilonConfig()

    def fn(z: Tensor) -> NormEstimate:
        normalized, scale = canonical_gauge(z.coeffs)
        if scale == 0.0:
            return NormEstimate.exact(0.0, seed=cfg.seed)
        reduced, mult = strip_unit_factors(Tensor(z.space, normalized))
        if reduced is None:
            v = mult * abs(float(normalized.ravel()[0])) * scale
            return NormEstimate.exact(v, seed=cfg.seed)
        if reduced.space.order == 1:
            v = mult * float(reduced.space.factors[0].norm(reduced.coeffs)) * scale
            return NormEstimate.exact(v, seed=cfg.seed)
        duals = reduced.space.dual_factors()
        if all(sp.is_polyhedral() for sp in duals) or cfg.grid_resolution >= 2:
            try:
                est = epsilon_bruteforce(reduced, cfg)
                upper = est.upper * mult * scale if np.isfinite(est.upper) else INF
                return NormEstimate(
                    est.lower * mult * scale, upper, est.converged, est.iterations, cfg.seed
                )
            except BudgetError:
                pass
        est = epsilon_estimate(reduced, cfg)
        return NormEstimate(
            est.lower * mult * scale, INF, est.converged, est.iterations, cfg.seed
        )

    return TensorNormEvaluator("eps", fn, {"norm": "eps", **asdict(cfg)}, "lower")


def make_pi_evaluator(cfg: PiConfig | None = None) -> TensorNormEvaluator:
    """Projective norm evaluator: certified bracket from both sides."""
    cfg = cfg or PiConfig()

    def fn(z: Tensor) -> NormEstimate:
        return pi_estimate(z, cfg)

    return TensorNormEvaluator("pi", fn, {"norm": "pi", **asdict(cfg)}, "both")


def make_sigma_evaluator(p: float, cfg: SigmaConfig | None = None) -> TensorNormEvaluator:
    """sigma_p evaluator: decomposition-search upper, injective lower.

    The injective run uses the same stripped tensor, seed, and restart
    budget as the seeding inside the sigma search, so the bracket can never
    cross by construction; the min() below only absorbs float dust.
    """
    cfg = cfg or SigmaConfig()
    eps_eval = make_epsilon_evaluator(
        EpsilonConfig(restarts=max(32, cfg.restarts), seed=cfg.seed)
    )

    def fn(z: Tensor) -> NormEstimate:
        sig = sigma_p_upper(z, p, cfg)
        if not np.isfinite(sig.value):
            return NormEstimate(0.0, INF, False, sig.candidates, cfg.seed)
        eps = eps_eval(z)
        lower = min(eps.lower, sig.value)
        return NormEstimate(lower, sig.value, sig.converged, sig.candidates, cfg.seed)

    return TensorNormEvaluator(
        "sigma_p", fn, {"norm": "sigma_p", "p": p, **asdict(cfg)}, "upper"
    )


def make_beta_evaluator(p: float, cfg: BetaConfig | None = None) -> TensorNormEvaluator:
    """beta_p evaluator: grouped-decomposition upper bound only."""
    cfg = cfg or BetaConfig()

    def fn(z: Tensor) -> NormEstimate:
        res = beta_p_upper(z, p, cfg)
        return NormEstimate(0.0, res.value, res.converged, 0, cfg.seed)

    return TensorNormEvaluator(
        "beta_p", fn, {"norm": "beta_p", "p": p, **asdict(cfg)}, "upper"
    )


def evaluator_for(
    kind: str,
    p: float = 2.0,
    seed: int = 0,
    restarts: int | None = None,
    max_rank: int | None = None,
    grid: int = 0,
) -> TensorNormEvaluator:
    """Build a named evaluator from scalar knobs (the command-line surface)."""
    if kind == "eps":
        cfg = EpsilonConfig(
            restarts=restarts if restarts is not None else 32,
            grid_resolution=grid,
            seed=seed,
        )
        return make_epsilon_evaluator(cfg)
    if kind == "pi":
        cfg = PiConfig(
            restarts=restarts if restarts is not None else 2,
            max_rank=max_rank,
            seed=seed,
        )
        return make_pi_evaluator(cfg)
    if kind == "sigma_p":
        cfg = SigmaConfig(
            restarts=restarts if restarts is not None else 8,
            max_rank=max_rank,
            seed=seed,
        )
        return make_sigma_evaluator(p, cfg)
    if kind == "beta_p":
        cfg = BetaConfig(
            restarts=restarts if restarts is not None else 4,
            seed=seed,
        )
        return make_beta_evaluator(p, cfg)
    raise SpaceError(f"unknown tensor norm kind: {kind!r}")

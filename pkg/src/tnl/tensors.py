"""Tensors on products of normed spaces, their decompositions, and estimate types.

A tensor is a dense coefficient array over a finite product of
:class:`~tnl.spaces.NormedSpace` factors.  Norm computations in this package
never return bare floats: they return a :class:`NormEstimate` bracket
``[lower, upper]`` together with convergence metadata, so that every
downstream comparison can be explicit about which side of the bracket it
certifies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .spaces import NormedSpace, SpaceError, Vector, scalar_space

DEFAULT_DIM_CAP = 4096

__all__ = [
    "TensorSpace",
    "Tensor",
    "DecompositionTerm",
    "Decomposition",
    "GroupedBlock",
    "GroupedDecomposition",
    "NormEstimate",
    "TensorNormEvaluator",
    "from_decomposition",
    "grouped_to_tensor",
    "eval_functionals",
    "flatten_scalar",
    "unflatten_scalar",
    "apply_operators",
    "random_tensor",
    "random_decomposition",
]


@dataclass(frozen=True)
class TensorSpace:
    """An ordered product of normed factors; dense storage throughout.

    The total dimension (product of factor dimensions) is capped so that a
    mistyped shape fails fast instead of allocating gigabytes.
    """

    factors: tuple[NormedSpace, ...]
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self) -> None:
        if len(self.factors) < 1:
            raise SpaceError("a tensor space needs at least one factor")
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.total_dim > self.dim_cap:
            raise SpaceError(
                f"total dimension {self.total_dim} exceeds cap {self.dim_cap}"
            )

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @property
    def order(self) -> int:
        return len(self.factors)

    @property
    def total_dim(self) -> int:
        n = 1
        for f in self.factors:
            n *= f.dim
        return n

    def dual_factors(self) -> tuple[NormedSpace, ...]:
        return tuple(f.dual() for f in self.factors)


@dataclass(frozen=True)
class Tensor:
    """Dense coefficients over a :class:`TensorSpace`; immutable after construction."""

    space: TensorSpace
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=float)
        if arr.shape != self.space.shape:
            raise SpaceError(
                f"coefficient shape {arr.shape} does not match space shape {self.space.shape}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.coeffs.ravel()))


@dataclass(frozen=True)
class DecompositionTerm:
    """One rank-one term: weight times an elementary tensor of unit-free vectors."""

    weight: float
    vectors: tuple[Vector, ...]


@dataclass(frozen=True)
class Decomposition:
    """A finite sum of rank-one terms representing a tensor."""

    terms: tuple[DecompositionTerm, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.terms:
            n = len(self.terms[0].vectors)
            for t in self.terms:
                if len(t.vectors) != n:
                    raise SpaceError("all terms must have the same number of factors")

    @property
    def rank(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class GroupedBlock:
    """One block of a grouped decomposition.

    ``families[l]`` is an (I_l, d_l) array of vectors in domain factor l and
    ``coeff_array`` has shape (I_1, ..., I_n, dim_F): one final-factor vector
    for every multi-index of the per-factor families.
    """

    families: tuple[np.ndarray, ...]
    coeff_array: np.ndarray

    def __post_init__(self) -> None:
        fams = tuple(np.array(f, dtype=float) for f in self.families)
        for f in fams:
            if f.ndim != 2:
                raise SpaceError("each family must be a 2-d array (members, dim)")
            f.setflags(write=False)
        arr = np.array(self.coeff_array, dtype=float)
        expect = tuple(f.shape[0] for f in fams)
        if arr.shape[:-1] != expect:
            raise SpaceError(
                f"coeff_array leading shape {arr.shape[:-1]} does not match family sizes {expect}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "families", fams)
        object.__setattr__(self, "coeff_array", arr)


@dataclass(frozen=True)
class GroupedDecomposition:
    """A sum of grouped blocks; the final tensor factor plays the codomain role."""

    blocks: tuple[GroupedBlock, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise SpaceError("a grouped decomposition needs at least one block")


@dataclass(frozen=True)
class NormEstimate:
    """A bracket [lower, upper] for a norm value, plus search metadata.

    ``upper`` may be +inf when no certificate is available.  The bracket is
    validated on construction; estimators must never emit a crossed bracket.
    """

    lower: float
    upper: float
    converged: bool
    iterations: int
    seed: int

    def __post_init__(self) -> None:
        lo, up = float(self.lower), float(self.upper)
        if lo < 0.0:
            if lo < -1e-12:
                raise ValueError(f"norm lower bound must be >= 0, got {lo}")
            lo = 0.0
        if lo > up + 1e-12:
            raise ValueError(f"crossed bracket: lower={lo} > upper={up}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @classmethod
    def exact(cls, value: float, iterations: int = 0, seed: int = 0) -> "NormEstimate":
        return cls(value, value, True, iterations, seed)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= x <= self.upper + slack


@dataclass(frozen=True)
class TensorNormEvaluator:
    """Uniform calling contract for a tensor norm estimator.

    ``sides`` states which end of the bracket the estimator certifies:
    "lower" (supremum formulas), "upper" (infimum formulas), or "both".
    Estimators are deterministic functions of (tensor, params, seed) and are
    scaling-equivariant by construction (inputs are normalized internally).
    """

    name: str
    fn: Callable[[Tensor], NormEstimate]
    params: dict
    sides: str = "both"

    def __call__(self, z: Tensor) -> NormEstimate:
        return self.fn(z)

    def value(self, est: NormEstimate) -> float:
        """The representative value of a bracket for this estimator's certified side."""
        if self.sides == "lower":
            return est.lower
        if self.sides == "upper":
            return est.upper
        return 0.5 * (est.lower + est.upper)


def _outer(vectors: Sequence[np.ndarray]) -> np.ndarray:
    out = np.asarray(vectors[0], dtype=float)
    for v in vectors[1:]:
        out = np.multiply.outer(out, np.asarray(v, dtype=float))
    return out


def from_decomposition(space: TensorSpace, d: Decomposition) -> Tensor:
    """Assemble the dense tensor of a finite rank-one decomposition."""
    coeffs = np.zeros(space.shape)
    for term in d.terms:
        if len(term.vectors) != space.order:
            raise SpaceError("term order does not match space order")
        for v, f in zip(term.vectors, space.factors):
            if v.space != f:
                raise SpaceError("term vector lives on the wrong factor space")
        coeffs += term.weight * _outer([v.coords for v in term.vectors])
    return Tensor(space, coeffs)


def grouped_to_tensor(space: TensorSpace, g: GroupedDecomposition) -> Tensor:
    """Assemble the dense tensor of a grouped decomposition.

    The last factor of ``space`` receives the coeff_array vectors; the other
    factors receive the block families.
    """
    import string

    n = space.order - 1
    if n < 1:
        raise SpaceError("grouped decompositions need at least two factors")
    letters = string.ascii_lowercase
    # families: (j_l, a_l); coeff array: (j_1 ... j_n, c); output: (a_1 ... a_n, c)
    spec = ",".join(letters[l] + letters[n + l] for l in range(n))
    spec += "," + letters[:n] + letters[2 * n]
    spec += "->" + letters[n : 2 * n] + letters[2 * n]
    coeffs = np.zeros(space.shape)
    for block in g.blocks:
        if len(block.families) != n:
            raise SpaceError("block family count does not match domain order")
        for f, fac in zip(block.families, space.factors[:-1]):
            if f.shape[1] != fac.dim:
                raise SpaceError("family vector length does not match factor dimension")
        if block.coeff_array.shape[-1] != space.factors[-1].dim:
            raise SpaceError("coeff_array final axis does not match last factor")
        coeffs += np.einsum(spec, *block.families, block.coeff_array)
    return Tensor(space, coeffs)


def eval_functionals(z: Tensor, functionals: Sequence) -> float:
    """Pair the tensor with one functional per factor (full contraction)."""
    if len(functionals) != z.space.order:
        raise SpaceError("need exactly one functional per factor")
    out = z.coeffs
    for l, f in enumerate(functionals):
        coords = f.coords if hasattr(f, "coords") else np.asarray(f, dtype=float)
        if hasattr(f, "space") and f.space != z.space.factors[l]:
            raise SpaceError(f"functional {l} acts on the wrong factor space")
        if coords.shape != (z.space.factors[l].dim,):
            raise SpaceError(f"functional {l} has the wrong length")
        out = np.tensordot(out, coords, axes=(0, 0))
    return float(out)


def flatten_scalar(z: Tensor) -> Tensor:
    """Drop a trailing one-dimensional scalar factor.

    Requires the last factor to be one-dimensional with unit weight, so the
    identification t x -> t * x preserves every norm of interest exactly; the
    coefficient array is reshaped, not recomputed.
    """
    last = z.space.factors[-1]
    if last.dim != 1:
        raise SpaceError("flatten_scalar requires a trailing factor of dimension 1")
    if abs(last.norm(np.ones(1)) - 1.0) > 0.0:
        raise SpaceError("flatten_scalar requires the trailing factor to have unit weight")
    if z.space.order == 1:
        raise SpaceError("cannot flatten the only factor of a tensor space")
    new_space = TensorSpace(z.space.factors[:-1], z.space.dim_cap)
    return Tensor(new_space, z.coeffs[..., 0])


def unflatten_scalar(z: Tensor) -> Tensor:
    """Append a scalar factor; exact inverse of :func:`flatten_scalar`."""
    new_space = TensorSpace(z.space.factors + (scalar_space(),), z.space.dim_cap)
    return Tensor(new_space, z.coeffs[..., None])


def apply_operators(
    z: Tensor,
    operators: Sequence[tuple[np.ndarray, NormedSpace] | None],
) -> Tensor:
    """Apply one linear operator per factor (None means identity on that factor).

    Each entry is (matrix, target_space) with matrix shape
    (target_dim, source_dim); the result lives on the product of targets.
    """
    if len(operators) != z.space.order:
        raise SpaceError("need exactly one operator (or None) per factor")
    coeffs = z.coeffs
    targets: list[NormedSpace] = []
    for l, op in enumerate(operators):
        if op is None:
            targets.append(z.space.factors[l])
            continue
        mat, tgt = op
        M = np.asarray(mat, dtype=float)
        if M.ndim != 2 or M.shape != (tgt.dim, z.space.factors[l].dim):
            raise SpaceError(
                f"operator {l} has shape {M.shape}, expected ({tgt.dim}, {z.space.factors[l].dim})"
            )
        coeffs = np.moveaxis(np.tensordot(M, coeffs, axes=(1, l)), 0, l)
        targets.append(tgt)
    return Tensor(TensorSpace(tuple(targets), z.space.dim_cap), coeffs)


def random_tensor(
    space: TensorSpace,
    seed: int,
    style: str = "dense",
    rank: int | None = None,
) -> Tensor:
    """Seeded random tensor: iid Gaussian coefficients, or a low-rank sum."""
    if style == "dense":
        rng = np.random.default_rng(seed)
        return Tensor(space, rng.standard_normal(space.shape))
    if style == "low_rank":
        if rank is None or rank < 1:
            raise SpaceError("low_rank style needs rank >= 1")
        return from_decomposition(space, random_decomposition(space, rank, seed))
    raise SpaceError(f"unknown random tensor style: {style!r}")


def random_decomposition(space: TensorSpace, rank: int, seed: int) -> Decomposition:
    """Seeded decomposition with ``rank`` unit-vector terms and unit weights."""
    rng = np.random.default_rng(seed)
    terms = []
    for _ in range(rank):
        vectors = []
        for f in space.factors:
            g = rng.standard_normal(f.dim)
            n = float(f.norm(g))
            while n < 1e-12:
                g = rng.standard_normal(f.dim)
                n = float(f.norm(g))
            vectors.append(Vector(f, g / n))
        terms.append(DecompositionTerm(1.0, tuple(vectors)))
    return Decomposition(tuple(terms))

"""Three block-diagonal semigroup families on finite truncations.

All families have growth bound 0 and are assembled from 1x1 and upper
triangular 2x2 blocks, so the semigroup, its generator, and the resolvent
all have closed forms:

* ``DIAG_JORDAN``: one unimodular 1x1 block with eigenvalue i, then Jordan
  blocks with repeated eigenvalue ik - 1/k (k = 1, ..., max_index - 1).
  The semigroup block is exp((ik - 1/k) t) * [[1, t], [0, 1]].  Measured in
  the Euclidean norm its growth is linear in t while the resolvent product
  stays bounded.
* ``JORDAN_PAIRS``: 2x2 blocks with simple eigenvalues i(n + 1/n) and
  i(n - 1/n), n = 2, ..., max_index.  The semigroup block is
  exp(int) * [[exp(it/n), n sin(t/n)], [0, exp(-it/n)]]; the supremum of the
  block norms grows like t.
* ``LOG_SPECTRUM``: diagonal with simple eigenvalues i log n,
  n = 2, ..., max_index, measured in the order-N difference-weighted norm,
  where the semigroup norm grows like t^N.

Everything here is a pure function of its inputs; block constructors are
vectorized over blocks and the dense assemblers exist for moderate sizes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import SpectrumHitError, TruncationInadequateError
from .linalg import MatvecOperator, NormContext, NormKind

#: Exponential growth bound shared by all three families: block norms carry
#: no e^{wt} factor with w > 0, only polynomial-in-t envelopes.
GROWTH_BOUND = 0.0

#: Minimal blocks-per-unit-time for the block families (sup over blocks is
#: attained near, or beyond, block index t).
BLOCK_TRUNCATION_FACTOR = 50

#: Minimal coordinates-per-unit-time for LOG_SPECTRUM (the norm witness is
#: supported on indices up to 4t).
DIAG_TRUNCATION_FACTOR = 8

_SPECTRUM_MARGIN = 1e-12


class Family(enum.Enum):
    DIAG_JORDAN = "DIAG_JORDAN"
    JORDAN_PAIRS = "JORDAN_PAIRS"
    LOG_SPECTRUM = "LOG_SPECTRUM"


@dataclass(frozen=True)
class ModelSpec:
    """Which family to build, at which truncation, with which parameters."""

    family: Family
    max_index: int
    order: int = 1
    mu_default: complex = 1.0 + 0.0j

    def __post_init__(self):
        if not isinstance(self.family, Family):
            raise ValueError(f"family must be a Family, got {self.family!r}")
        if self.max_index < 2:
            raise ValueError(f"max_index must be >= 2, got {self.max_index}")
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        mu = complex(self.mu_default)
        eigs = _eigenvalue_array(self.family, self.max_index)
        if np.min(np.abs(eigs - mu)) < _SPECTRUM_MARGIN:
            raise ValueError(f"mu_default {mu} lies on the spectrum")
        object.__setattr__(self, "mu_default", mu)


@dataclass(frozen=True)
class Block:
    start: int
    size: int
    eigenvalues: tuple


@dataclass(frozen=True)
class Eigenvalue:
    value: complex
    multiplicity: int


@dataclass(frozen=True)
class Model:
    spec: ModelSpec
    blocks: tuple
    norm_context: NormContext

    @property
    def dim(self) -> int:
        return self.norm_context.dim


def _eigenvalue_array(family: Family, max_index: int) -> np.ndarray:
    """Distinct eigenvalues of the truncation, unsorted, one per value."""
    if family is Family.DIAG_JORDAN:
        k = np.arange(1, max_index, dtype=float)
        return np.concatenate([[1j], 1j * k - 1.0 / k])
    n = np.arange(2, max_index + 1, dtype=float)
    if family is Family.JORDAN_PAIRS:
        return np.concatenate([1j * (n + 1.0 / n), 1j * (n - 1.0 / n)])
    return 1j * np.log(n)


def build_model(spec: ModelSpec) -> Model:
    """Block layout plus the norm context the family is measured in."""
    blocks = []
    if spec.family is Family.DIAG_JORDAN:
        blocks.append(Block(0, 1, (1j,)))
        for k in range(1, spec.max_index):
            lam = 1j * k - 1.0 / k
            blocks.append(Block(1 + 2 * (k - 1), 2, (lam, lam)))
        ctx = NormContext.euclidean(2 * spec.max_index - 1)
    elif spec.family is Family.JORDAN_PAIRS:
        for n in range(2, spec.max_index + 1):
            lam_up = 1j * (n + 1.0 / n)
            lam_dn = 1j * (n - 1.0 / n)
            blocks.append(Block(2 * (n - 2), 2, (lam_up, lam_dn)))
        ctx = NormContext.euclidean(2 * (spec.max_index - 1))
    else:
        for n in range(2, spec.max_index + 1):
            blocks.append(Block(n - 2, 1, (1j * math.log(n),)))
        ctx = NormContext.delta_weighted(spec.order, spec.max_index - 1)
    return Model(spec, tuple(blocks), ctx)


@dataclass(frozen=True)
class BlockDiagonal:
    """Block-diagonal operator: leading 1x1 entries, then stacked 2x2 blocks.

    ``scalars`` has shape (m,), ``pairs`` shape (k, 2, 2); coordinates are
    laid out scalars first.  Supports the small algebra the package needs
    (sums, scalar multiples, products, spectral norm, trace, densify).
    """

    scalars: np.ndarray
    pairs: np.ndarray

    @property
    def dim(self) -> int:
        return self.scalars.shape[0] + 2 * self.pairs.shape[0]

    def __add__(self, other):
        return BlockDiagonal(self.scalars + other.scalars, self.pairs + other.pairs)

    def __sub__(self, other):
        return BlockDiagonal(self.scalars - other.scalars, self.pairs - other.pairs)

    def __rmul__(self, c):
        return BlockDiagonal(c * self.scalars, c * self.pairs)

    def __matmul__(self, other):
        return BlockDiagonal(self.scalars * other.scalars,
                             np.matmul(self.pairs, other.pairs))

    @classmethod
    def zeros_like(cls, other):
        return cls(np.zeros_like(other.scalars), np.zeros_like(other.pairs))

    @classmethod
    def identity_like(cls, other):
        eye = np.broadcast_to(np.eye(2, dtype=complex), other.pairs.shape).copy()
        return cls(np.ones_like(other.scalars), eye)

    def trace(self) -> complex:
        t = complex(self.scalars.sum()) if self.scalars.size else 0.0 + 0.0j
        if self.pairs.size:
            t += complex(np.trace(self.pairs, axis1=1, axis2=2).sum())
        return t

    def sup_singular_value(self) -> float:
        """Euclidean spectral norm: the supremum of block norms."""
        best = 0.0
        if self.scalars.size:
            best = float(np.max(np.abs(self.scalars)))
        if self.pairs.size:
            best = max(best, float(np.max(_sigma_max_2x2(self.pairs))))
        return best

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        m = self.scalars.shape[0]
        out[np.arange(m), np.arange(m)] = self.scalars
        for i in range(self.pairs.shape[0]):
            s = m + 2 * i
            out[s:s + 2, s:s + 2] = self.pairs[i]
        return out


def _sigma_max_2x2(blocks: np.ndarray) -> np.ndarray:
    # Largest singular value of each 2x2 block from the Frobenius norm and
    # determinant: sigma^2 = (s + sqrt(s^2 - 4 |det|^2)) / 2.
    s = np.sum(np.abs(blocks) ** 2, axis=(1, 2))
    det = blocks[:, 0, 0] * blocks[:, 1, 1] - blocks[:, 0, 1] * blocks[:, 1, 0]
    p = np.abs(det) ** 2
    disc = np.sqrt(np.maximum(s * s - 4.0 * p, 0.0))
    return np.sqrt((s + disc) / 2.0)


def _pair_eigenvalues(spec: ModelSpec):
    """Per-block eigenvalue arrays (upper, lower) for the 2x2 families."""
    if spec.family is Family.DIAG_JORDAN:
        k = np.arange(1, spec.max_index, dtype=float)
        lam = 1j * k - 1.0 / k
        return lam, lam
    n = np.arange(2, spec.max_index + 1, dtype=float)
    return 1j * (n + 1.0 / n), 1j * (n - 1.0 / n)


def evolve_blocks(model: Model, t: float) -> BlockDiagonal:
    """The semigroup at time t as a block-diagonal operator."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    spec = model.spec
    if spec.family is Family.LOG_SPECTRUM:
        n = np.arange(2, spec.max_index + 1, dtype=float)
        return BlockDiagonal(np.exp(1j * t * np.log(n)),
                             np.zeros((0, 2, 2), dtype=complex))
    if spec.family is Family.DIAG_JORDAN:
        k = np.arange(1, spec.max_index, dtype=float)
        scale = np.exp((1j * k - 1.0 / k) * t)
        pairs = np.zeros((k.size, 2, 2), dtype=complex)
        pairs[:, 0, 0] = scale
        pairs[:, 0, 1] = t * scale
        pairs[:, 1, 1] = scale
        return BlockDiagonal(np.array([np.exp(1j * t)]), pairs)
    n = np.arange(2, spec.max_index + 1, dtype=float)
    carrier = np.exp(1j * t * n)
    pairs = np.zeros((n.size, 2, 2), dtype=complex)
    pairs[:, 0, 0] = carrier * np.exp(1j * t / n)
    pairs[:, 0, 1] = carrier * n * np.sin(t / n)
    pairs[:, 1, 1] = carrier * np.exp(-1j * t / n)
    return BlockDiagonal(np.zeros(0, dtype=complex), pairs)


def generator_blocks(model: Model) -> BlockDiagonal:
    """The generator as a block-diagonal operator (1 on the superdiagonal)."""
    spec = model.spec
    if spec.family is Family.LOG_SPECTRUM:
        n = np.arange(2, spec.max_index + 1, dtype=float)
        return BlockDiagonal(1j * np.log(n), np.zeros((0, 2, 2), dtype=complex))
    lam_up, lam_dn = _pair_eigenvalues(spec)
    pairs = np.zeros((lam_up.size, 2, 2), dtype=complex)
    pairs[:, 0, 0] = lam_up
    pairs[:, 0, 1] = 1.0
    pairs[:, 1, 1] = lam_dn
    if spec.family is Family.DIAG_JORDAN:
        return BlockDiagonal(np.array([1j]), pairs)
    return BlockDiagonal(np.zeros(0, dtype=complex), pairs)


def resolvent_blocks(model: Model, mu: complex) -> BlockDiagonal:
    """(A - mu I)^-1 as a block-diagonal operator, blockwise closed form."""
    mu = complex(mu)
    eigs = _eigenvalue_array(model.spec.family, model.spec.max_index)
    dist = float(np.min(np.abs(eigs - mu)))
    if dist < _SPECTRUM_MARGIN:
        raise SpectrumHitError(
            f"mu {mu} is within {dist:.3e} of the spectrum")
    spec = model.spec
    if spec.family is Family.LOG_SPECTRUM:
        n = np.arange(2, spec.max_index + 1, dtype=float)
        return BlockDiagonal(1.0 / (1j * np.log(n) - mu),
                             np.zeros((0, 2, 2), dtype=complex))
    lam_up, lam_dn = _pair_eigenvalues(spec)
    a = lam_up - mu
    b = lam_dn - mu
    pairs = np.zeros((a.size, 2, 2), dtype=complex)
    pairs[:, 0, 0] = 1.0 / a
    pairs[:, 0, 1] = -1.0 / (a * b)
    pairs[:, 1, 1] = 1.0 / b
    if spec.family is Family.DIAG_JORDAN:
        return BlockDiagonal(np.array([1.0 / (1j - mu)]), pairs)
    return BlockDiagonal(np.zeros(0, dtype=complex), pairs)


def evolve(model: Model, t: float) -> np.ndarray:
    """Dense matrix of the semigroup at time t (moderate dims only)."""
    return evolve_blocks(model, t).to_dense()


def generator(model: Model) -> np.ndarray:
    return generator_blocks(model).to_dense()


def resolvent(model: Model, mu: complex) -> np.ndarray:
    return resolvent_blocks(model, mu).to_dense()


def eigenvalues(model: Model) -> list:
    """Distinct eigenvalues sorted by (imag, real), with multiplicities.

    Repeated eigenvalues (the Jordan blocks) are produced by one expression,
    so bitwise grouping is exact here.
    """
    values = []
    for block in model.blocks:
        values.extend(block.eigenvalues)
    arr = np.asarray(values, dtype=complex)
    uniq, counts = np.unique(arr, return_counts=True)
    order = np.lexsort((uniq.real, uniq.imag))
    return [Eigenvalue(complex(v), int(c))
            for v, c in zip(uniq[order], counts[order])]


def block_operator_norm(model: Model, blocks: BlockDiagonal,
                        tol: float = linalg.POWER_TOL_DEFAULT) -> float:
    """Operator norm of a block-diagonal operator in the model's norm.

    Euclidean contexts reduce to the supremum of block norms; the weighted
    context runs power iteration on the diagonal with structured transforms.
    """
    ctx = model.norm_context
    if ctx.kind is NormKind.EUCLIDEAN:
        return blocks.sup_singular_value()
    return linalg.operator_norm(MatvecOperator.from_diagonal(blocks.scalars),
                                ctx, tol=tol)


def required_max_index(family: Family, t_max: float) -> int:
    """Minimal adequate truncation for norms sampled out to time t_max."""
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    if family is Family.LOG_SPECTRUM:
        need = math.ceil(DIAG_TRUNCATION_FACTOR * t_max) + 1
    else:
        need = math.ceil(BLOCK_TRUNCATION_FACTOR * t_max)
    return max(need, 2)


def check_truncation(model: Model, t_max: float) -> None:
    """Hard adequacy gate; raises naming the minimal adequate max_index."""
    need = required_max_index(model.spec.family, t_max)
    if model.spec.max_index < need:
        raise TruncationInadequateError(
            f"{model.spec.family.value} with max_index {model.spec.max_index} "
            f"is inadequate for t_max {t_max}; need max_index >= {need}",
            required=need)

"""Spectral projections by contour quadrature, with closed-form oracles.

The projection onto the part of the spectrum enclosed by a circle is
computed as (1 / 2 pi i) times the contour integral of (mu I - A)^-1,
approximated by the trapezoidal rule on equispaced nodes, which converges
exponentially for integrands analytic in a neighborhood of the circle.
This normalization (prefactor and counterclockwise orientation) is the one
that makes the result idempotent.

Also provides the two checkable conditions used by the decay-criterion
pipeline: existence of an isolating circle around an eigenvalue, and decay
of the projected semigroup norm against a majorant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, models
from .errors import (ClusteredSpectrumError, ContourTooCloseError,
                     NonconvergedError)
from .models import BlockDiagonal, Model

#: Times at which the commutation defect of a projection is probed.
COMMUTATION_TIMES = (0.0, 1.0, 10.0, 100.0)

#: Maximal admissible drift of the projection under node doubling.
QUADRATURE_DRIFT_TOL = 1e-8

#: Minimal distance between the contour circle and any eigenvalue.
CONTOUR_MARGIN = 1e-6

#: Default cap on isolating-circle radii.
RADIUS_CAP = 0.5

#: Below this eigenvalue gap no isolating circle is attempted.
MIN_GAP = 1e-9

DEFAULT_NODES = 64

_TRACE_INT_TOL = 1e-6


@dataclass(frozen=True)
class Contour:
    """A counterclockwise circle in C with an even number of quadrature nodes."""

    center: complex
    radius: float
    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.nodes < 16 or self.nodes % 2 != 0:
            raise ValueError(f"nodes must be even and >= 16, got {self.nodes}")
        object.__setattr__(self, "center", complex(self.center))


@dataclass(frozen=True)
class ProjectionReport:
    """A spectral projection together with its quality diagnostics."""

    blocks: BlockDiagonal
    idempotency_defect: float
    commutation_defect: float
    rank: int
    enclosed: tuple

    @property
    def projection(self) -> np.ndarray:
        return self.blocks.to_dense()


@dataclass(frozen=True)
class DecayCurve:
    """Sampled t -> ||T(t) P|| / f(t) with a monotone-decay verdict."""

    ts: np.ndarray
    values: np.ndarray
    slope: float | None
    decaying: bool


def _contour_margin_check(model: Model, contour: Contour) -> None:
    eigs = np.array([e.value for e in models.eigenvalues(model)])
    margins = np.abs(np.abs(eigs - contour.center) - contour.radius)
    worst = float(np.min(margins))
    if worst < CONTOUR_MARGIN:
        raise ContourTooCloseError(
            f"an eigenvalue lies within {worst:.3e} of the contour "
            f"(margin {CONTOUR_MARGIN})")


def _quadrature_sum(model: Model, contour: Contour, nodes: int) -> BlockDiagonal:
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    weights = np.exp(1j * theta)
    mus = contour.center + contour.radius * weights
    acc = BlockDiagonal.zeros_like(models.evolve_blocks(model, 0.0))
    scale = contour.radius / nodes
    for mu, w in zip(mus, weights):
        # (mu I - A)^-1 = -(A - mu I)^-1, hence the minus sign.
        acc = acc - (scale * w) * models.resolvent_blocks(model, mu)
    return acc


def _enclosed_eigenvalues(model: Model, contour: Contour) -> tuple:
    return tuple(e.value for e in models.eigenvalues(model)
                 if abs(e.value - contour.center) < contour.radius)


def _build_report(model: Model, blocks: BlockDiagonal, enclosed) -> ProjectionReport:
    idem = (blocks @ blocks - blocks).sup_singular_value()
    comm = 0.0
    for t in COMMUTATION_TIMES:
        semi = models.evolve_blocks(model, t)
        comm = max(comm, (semi @ blocks - blocks @ semi).sup_singular_value())
    tr = blocks.trace()
    rank = round(tr.real)
    if abs(tr - rank) > _TRACE_INT_TOL:
        raise NonconvergedError(
            f"projection trace {tr} is not within {_TRACE_INT_TOL} of an integer")
    return ProjectionReport(blocks, float(idem), float(comm), int(rank),
                            tuple(enclosed))


def riesz_projection_quadrature(model: Model, contour: Contour,
                                drift_tol: float = QUADRATURE_DRIFT_TOL
                                ) -> ProjectionReport:
    """Spectral projection for the circle, by trapezoidal quadrature.

    The report carries the projection at the requested node count; the node
    count is doubled once as a convergence check and a drift above
    ``drift_tol`` raises :class:`NonconvergedError`.
    """
    _contour_margin_check(model, contour)
    p = _quadrature_sum(model, contour, contour.nodes)
    p2 = _quadrature_sum(model, contour, 2 * contour.nodes)
    drift = (p - p2).sup_singular_value()
    if drift > drift_tol:
        raise NonconvergedError(
            f"node doubling moved the projection by {drift:.3e} "
            f"(tolerance {drift_tol})")
    return _build_report(model, p, _enclosed_eigenvalues(model, contour))


def _closed_blocks_for_value(model: Model, lam: complex) -> BlockDiagonal:
    base = models.evolve_blocks(model, 0.0)
    scalars = np.zeros_like(base.scalars)
    pairs = np.zeros_like(base.pairs)
    si = 0
    pi = 0
    for block in model.blocks:
        if block.size == 1:
            if abs(block.eigenvalues[0] - lam) < 1e-12:
                scalars[si] = 1.0
            si += 1
            continue
        a, b = block.eigenvalues
        hit_a = abs(a - lam) < 1e-12
        hit_b = abs(b - lam) < 1e-12
        if hit_a and hit_b:
            pairs[pi, 0, 0] = 1.0
            pairs[pi, 1, 1] = 1.0
        elif hit_a:
            pairs[pi, 0, 0] = 1.0
            pairs[pi, 0, 1] = 1.0 / (a - b)
        elif hit_b:
            pairs[pi, 0, 1] = -1.0 / (a - b)
            pairs[pi, 1, 1] = 1.0
        pi += 1
    return BlockDiagonal(scalars, pairs)


def riesz_projection_closed(model: Model, eigenvalue_index: int) -> ProjectionReport:
    """Exact blockwise projection onto one eigenvalue, the quadrature oracle.

    Blocks not containing the eigenvalue contribute zero; a 2x2 block with
    distinct eigenvalues a, b projects onto a as [[1, 1/(a-b)], [0, 0]] and
    onto b as the complement; a Jordan block is kept whole.
    """
    eigs = models.eigenvalues(model)
    if not 0 <= eigenvalue_index < len(eigs):
        raise IndexError(
            f"eigenvalue index {eigenvalue_index} out of range (0..{len(eigs) - 1})")
    lam = eigs[eigenvalue_index].value
    blocks = _closed_blocks_for_value(model, lam)
    return _build_report(model, blocks, (lam,))


def contour_projection_closed(model: Model, contour: Contour) -> ProjectionReport:
    """Closed-form projection for everything enclosed by the circle."""
    _contour_margin_check(model, contour)
    enclosed = _enclosed_eigenvalues(model, contour)
    blocks = BlockDiagonal.zeros_like(models.evolve_blocks(model, 0.0))
    for lam in enclosed:
        blocks = blocks + _closed_blocks_for_value(model, lam)
    return _build_report(model, blocks, enclosed)


def hypothesis_a_check(model: Model, lam: complex,
                       radius_cap: float = RADIUS_CAP,
                       nodes: int = DEFAULT_NODES) -> Contour:
    """An isolating circle around the eigenvalue, if one exists.

    The radius is half the distance to the nearest other eigenvalue, capped.
    """
    lam = complex(lam)
    values = [e.value for e in models.eigenvalues(model)]
    if min(abs(v - lam) for v in values) > 1e-12:
        raise ValueError(f"{lam} is not an eigenvalue of the model")
    others = [abs(v - lam) for v in values if abs(v - lam) > 1e-12]
    if not others:
        return Contour(lam, radius_cap, nodes)
    gap = min(others)
    if gap < MIN_GAP:
        raise ClusteredSpectrumError(
            f"nearest-neighbor gap {gap:.3e} at {lam} is below {MIN_GAP}")
    return Contour(lam, min(gap / 2.0, radius_cap), nodes)


def hypothesis_b_check(model: Model, contour: Contour, ts, envelope,
                       tol: float = linalg.POWER_TOL_DEFAULT) -> DecayCurve:
    """Decay of t -> ||T(t) P_contour|| / f(t) over the sampled grid.

    ``envelope`` is any callable majorant f(t) > 0.  The verdict is decaying
    when the log-log least-squares slope is <= -0.5 and the last sample is
    below a tenth of the first.  An identically-zero curve (contour around
    nothing) is decaying vacuously.
    """
    ts = np.asarray(ts, dtype=float)
    if ts.ndim != 1 or ts.size < 2 or np.any(ts <= 0) or np.any(np.diff(ts) <= 0):
        raise ValueError("ts must be a strictly increasing grid of positive times")
    proj = riesz_projection_quadrature(model, contour).blocks
    values = np.empty(ts.size, dtype=float)
    for i, t in enumerate(ts):
        prod = models.evolve_blocks(model, float(t)) @ proj
        values[i] = models.block_operator_norm(model, prod, tol=tol) / float(envelope(t))
    positive = values > 1e-13
    if not np.any(positive):
        return DecayCurve(ts, values, None, True)
    if np.count_nonzero(positive) < 2:
        # A single surviving sample cannot carry a trend.
        return DecayCurve(ts, values, None, False)
    design = np.column_stack([np.ones(ts.size), np.log(ts)])[positive]
    slope = float(np.linalg.lstsq(design, np.log(values[positive]), rcond=None)[0][1])
    decaying = slope <= -0.5 and values[-1] < 0.1 * values[0]
    return DecayCurve(ts, values, slope, bool(decaying))

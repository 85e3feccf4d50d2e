"""Dynamic field automata: densities evolved by the Frobenius-Perron operator.

Two routes are provided.  The analytic route pushes uniform densities on
rectangles through the NDA exactly (a uniform rectangle stays a uniform
rectangle as long as it sits inside one branch cell).  The numerical route
discretizes the transfer operator on an ``n x n`` grid.

Grid densities are ``(n, n)`` arrays indexed ``cells[i, j]`` with ``i`` the
x-column and ``j`` the y-row; flattened, the index is ``i * n + j``
(row-major, y fastest).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, ResolutionMismatch, StraddlesPartition
from .goedel import AffineBranch, NdaMachine, Rect

MASS_TOL = 1e-12


@dataclass(frozen=True)
class RectMacrostate:
    """Uniform probability density on a rectangle; ``weight == 1 / area``."""

    support: Rect
    weight: Fraction = None

    def __post_init__(self):
        if self.weight is None:
            object.__setattr__(self, "weight", 1 / self.support.area)
        object.__setattr__(self, "weight", Fraction(self.weight))
        if self.weight * self.support.area != 1:
            raise ValueError("macrostate weight must equal 1/area of its support")

    def density(self, p):
        return self.weight if self.support.contains_point(p) else Fraction(0)


def _branch_for(m: NdaMachine, r: Rect) -> AffineBranch | None:
    """The branch whose cell contains ``r``, ``None`` for the identity region."""
    hits = [b for b in m.branches if b.cell.intersects(r)]
    if not hits:
        return None
    if len(hits) == 1 and hits[0].cell.contains(r):
        return hits[0]
    raise StraddlesPartition(f"rectangle {r} overlaps {len(hits)} cell(s) without lying inside one")


def dfa_step(m: NdaMachine, r: RectMacrostate) -> RectMacrostate:
    branch = _branch_for(m, r.support)
    if branch is None:
        return r
    return RectMacrostate(branch.image(r.support))


def dfa_orbit(m: NdaMachine, r0: RectMacrostate, steps: int) -> list[RectMacrostate]:
    orbit = [r0]
    for t in range(steps):
        try:
            orbit.append(dfa_step(m, orbit[-1]))
        except StraddlesPartition as exc:
            raise StraddlesPartition(str(exc), step=t) from None
    return orbit


# -- grid discretization -----------------------------------------------------


@dataclass(frozen=True)
class GridDensity:
    """Piecewise-constant density on an ``n x n`` grid over the unit square.

    ``cells`` holds float64 values, or Python ``Fraction`` objects (dtype
    object) for exact evolution.
    """

    n: int
    cells: np.ndarray

    def __post_init__(self):
        cells = np.asarray(self.cells)
        if cells.shape != (self.n, self.n):
            raise DimensionMismatch(f"expected {(self.n, self.n)} cells, got {cells.shape}")
        if cells.dtype != object and np.any(cells < 0):
            raise ValueError("densities must be nonnegative")
        object.__setattr__(self, "cells", cells)
        if abs(float(self.mass()) - 1.0) > MASS_TOL:
            raise ValueError(f"density is not normalized (mass {float(self.mass())})")

    @property
    def exact(self):
        return self.cells.dtype == object

    def mass(self):
        if self.exact:
            return sum(self.cells.ravel().tolist(), Fraction(0)) / (self.n * self.n)
        return self.cells.sum() / (self.n * self.n)

    def flat(self) -> np.ndarray:
        return self.cells.reshape(-1)

    def support(self) -> np.ndarray:
        return self.cells != 0


def check_alignment(m: NdaMachine, n: int):
    if n < 1:
        raise ResolutionMismatch("grid resolution must be positive")
    for b in m.branches:
        for edge in b.cell.as_tuple():
            if (edge * n).denominator != 1:
                raise ResolutionMismatch(f"n={n} does not resolve cell edge {edge} of branch {b.label!r}")


def rasterize(r: Rect | RectMacrostate, n: int, exact: bool = False) -> GridDensity:
    """Cell-averaged density of a uniform rectangle (exact for aligned grids)."""
    if isinstance(r, RectMacrostate):
        rect, weight = r.support, r.weight
    else:
        rect, weight = r, 1 / r.area
    cells = np.zeros((n, n), dtype=object) if exact else np.zeros((n, n))
    if exact:
        cells[:] = Fraction(0)
    area = Fraction(1, n * n)
    for i in range(floor(rect.x_lo * n), ceil(rect.x_hi * n)):
        for j in range(floor(rect.y_lo * n), ceil(rect.y_hi * n)):
            cell = Rect(Fraction(i, n), Fraction(i + 1, n), Fraction(j, n), Fraction(j + 1, n))
            value = weight * rect.intersection_area(cell) / area
            cells[i, j] = value if exact else float(value)
    return GridDensity(n, cells)


@dataclass(frozen=True)
class TransferOperator:
    """Discretized kernel ``delta(x - Phi(y))``.

    ``rows[src]`` lists ``(target, fraction)`` pairs: the share of source
    cell ``src``'s measure that lands in ``target``.  Fractions are exact.
    """

    n: int
    rows: tuple[tuple[tuple[int, Fraction], ...], ...]
    _matrix: sp.csr_matrix = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.rows) != self.n * self.n:
            raise DimensionMismatch("operator needs one row per grid cell")
        for src, row in enumerate(self.rows):
            if sum((f for _, f in row), Fraction(0)) != 1:
                raise ValueError(f"row {src} does not conserve measure")
        size = self.n * self.n
        targets = [t for row in self.rows for t, _ in row]
        sources = [s for s, row in enumerate(self.rows) for _ in row]
        values = [float(f) for row in self.rows for _, f in row]
        # indexed (target, source): equal cell areas make density transfer equal measure transfer
        matrix = sp.csr_matrix((values, (targets, sources)), shape=(size, size))
        object.__setattr__(self, "_matrix", matrix)

    @property
    def matrix(self) -> sp.csr_matrix:
        """Sparse matrix ``P`` with ``new_density = P @ density`` (target x source)."""
        return self._matrix

    def row_sums(self) -> np.ndarray:
        """Total outgoing fraction per source cell (all ones)."""
        return np.asarray(self._matrix.sum(axis=0)).ravel()

    def triples(self):
        for src, row in enumerate(self.rows):
            for tgt, frac in row:
                yield src, tgt, frac


def _spread(lo, hi, n):
    """Grid intervals hit by ``[lo, hi)`` with their share of its length."""
    width = hi - lo
    out = []
    for k in range(floor(lo * n), ceil(hi * n)):
        overlap = min(hi, Fraction(k + 1, n)) - max(lo, Fraction(k, n))
        if overlap > 0:
            out.append((k, overlap / width))
    return out


def build_transfer_operator(m: NdaMachine, n: int) -> TransferOperator:
    """Forward-distribute each grid cell's measure over its exact image."""
    check_alignment(m, n)
    rows = []
    for i in range(n):
        for j in range(n):
            cell = Rect(Fraction(i, n), Fraction(i + 1, n), Fraction(j, n), Fraction(j + 1, n))
            branch = _branch_for(m, cell)
            if branch is None:
                rows.append(((i * n + j, Fraction(1)),))
                continue
            image = branch.image(cell)
            rows.append(tuple(
                (ti * n + tj, fx * fy)
                for ti, fx in _spread(image.x_lo, image.x_hi, n)
                for tj, fy in _spread(image.y_lo, image.y_hi, n)
            ))
    return TransferOperator(n, tuple(rows))


def fp_apply(op: TransferOperator, d: GridDensity) -> GridDensity:
    """Push a density forward one time step."""
    if op.n != d.n:
        raise DimensionMismatch(f"operator is {op.n}x{op.n}, density is {d.n}x{d.n}")
    if d.exact:
        flat = d.flat()
        out = [Fraction(0)] * (d.n * d.n)
        for src, tgt, frac in op.triples():
            if flat[src]:
                out[tgt] += frac * flat[src]
        cells = np.empty(d.n * d.n, dtype=object)
        cells[:] = out
        return GridDensity(d.n, cells.reshape(d.n, d.n))
    return GridDensity(d.n, (op.matrix @ d.flat()).reshape(d.n, d.n))


def fp_orbit(op: TransferOperator, d0: GridDensity, steps: int) -> list[GridDensity]:
    out = [d0]
    for _ in range(steps):
        out.append(fp_apply(op, out[-1]))
    return out


# -- link to the Amari equation ---------------------------------------------


@dataclass(frozen=True)
class DiscretizationReport:
    n: int
    tau: float
    dt: float
    steps: int
    max_deviation: float
    masses: tuple[float, ...]

    @property
    def ok(self):
        return self.max_deviation == 0.0


def amari_step(op: TransferOperator, u: np.ndarray, tau=1.0, dt=1.0, activation=None) -> np.ndarray:
    """Explicit Euler step ``u + dt/tau (-u + W f(u))`` with kernel ``W = op``.

    Works on raw ``(n, n)`` field arrays: with a nonlinear ``f`` the field
    need not stay a normalized density.
    """
    u = np.asarray(u, dtype=float)
    flat = u.reshape(-1)
    fu = flat if activation is None else activation(flat)
    rate = dt / tau
    return ((1 - rate) * flat + rate * (op.matrix @ fu)).reshape(u.shape)


def amari_discretization_check(m: NdaMachine, r0: RectMacrostate, steps: int, n: int,
                               tau=1.0, dt=1.0) -> DiscretizationReport:
    """Euler-Amari steps with identity activation against Frobenius-Perron steps.

    Each Amari step is compared with ``(1 - dt/tau) u + dt/tau fp_apply(u)``;
    for ``tau == dt`` that reference is ``fp_apply`` itself.
    """
    op = build_transfer_operator(m, n)
    u = rasterize(r0, n)
    rate = dt / tau
    deviation = 0.0
    masses = [float(u.mass())]
    for _ in range(steps):
        pushed = fp_apply(op, u).cells
        reference = pushed if rate == 1 else (1 - rate) * u.cells + rate * pushed
        stepped = amari_step(op, u.cells, tau, dt)
        deviation = max(deviation, float(np.max(np.abs(stepped - reference))))
        u = GridDensity(n, stepped)
        masses.append(float(u.mass()))
    return DiscretizationReport(n, tau, dt, steps, deviation, tuple(masses))

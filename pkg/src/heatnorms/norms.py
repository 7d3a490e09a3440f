"""Lebesgue, mixed space-time and grand norms by quadrature.

Mixed norms follow the convention that the *first* exponent-axis pair is the
inner integral: inner space / outer time integrates |F|^p over space per time
slice first, inner time / outer space the reverse.  (The reversed-order
definition is printed elsewhere with a duplicated time differential; the
only reading that makes it a norm in x, outer dx over space, is used here.)

Outer integrals over (0, inf) are truncated at the time grid's horizon; a
power law fitted on the last decade of inner-norm values supplies an
optional tail correction, which is reported separately and never hidden in
the value.  Quadrature accumulations run in a fixed traversal order so
reruns are bit-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError, DomainError
from .grids import SpaceGrid, TimeGrid
from .testfunctions import (PowerWeight, SpaceTimeTestFunction, TestFunction,
                            closed_form_lp)

__all__ = [
    "SampledField", "MixedNormSpec", "NormResult", "lp_norm", "time_lp_norm",
    "mixed_norm", "inner_time_norms", "grand_lebesgue_norm",
    "two_param_gls_norm", "kernel_operator_bound", "sample_field",
    "power_cell_averages", "weighted_outer_space_norm",
]


@dataclass(frozen=True)
class NormResult:
    """A norm value with its quadrature caveats."""

    value: float
    truncation_estimate: float = 0.0
    tail_contribution: float = 0.0
    excluded_measure: float = 0.0
    warnings: tuple = ()

    def __float__(self) -> float:
        return self.value


@dataclass
class SampledField:
    """Function values on a space grid, optionally stacked over a time grid.

    values has shape grid.shape() for a spatial field and
    (len(time.nodes), *grid.shape()) for a space-time field.  Non-finite
    entries mark singular cells; norms exclude them and report the excluded
    measure instead of crashing.
    """

    space: SpaceGrid
    values: np.ndarray
    time: TimeGrid | None = None
    description: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        expected = self.space.shape()
        if self.time is not None:
            expected = (len(self.time.nodes),) + expected
        if self.values.shape != expected:
            raise DomainError(
                f"value shape {self.values.shape} does not match grid {expected}"
            )

    def singular_measure(self) -> float:
        bad = ~np.isfinite(self.values)
        return float(np.count_nonzero(bad)) * self.space.cell_volume


def sample_field(f: TestFunction, grid: SpaceGrid) -> SampledField:
    """Sample a test function; power weights are capped at one grid cell."""
    if isinstance(f, PowerWeight):
        vals = f.capped_values(grid.points(), grid.h).reshape(grid.shape())
    else:
        vals = grid.sample(f)
    return SampledField(grid, vals, description={"kind": type(f).__name__})


def _finite_power_sum(values: np.ndarray, p: float, cell: float):
    """sum |v|^p * cell over finite entries; returns (sum, excluded_measure)."""
    flat = np.asarray(values, dtype=float).reshape(-1)
    finite = np.isfinite(flat)
    excluded = float(np.count_nonzero(~finite)) * cell
    if p == math.inf:
        sup = float(np.max(np.abs(flat[finite]))) if np.any(finite) else 0.0
        return sup, excluded
    acc = float(np.sum(np.abs(flat[finite]) ** p)) * cell
    return acc, excluded


def lp_norm(f, p: float, grid: SpaceGrid | None = None,
            with_report: bool = False):
    """L^p norm over space by tensor midpoint quadrature.

    ``f`` may be a TestFunction (sampled on ``grid``) or a SampledField.
    p = inf returns the grid supremum.  The report carries an a-posteriori
    truncation estimate formed from the outermost shell of cells and a
    resolution warning when fewer than 8 cells cover the smallest declared
    feature scale.
    """
    if p != math.inf and p < 1:
        raise DomainError(f"p must be >= 1 or inf, got {p}")
    warnings = []
    if isinstance(f, TestFunction):
        if grid is None:
            raise DomainError("a grid is required to sample a test function")
        scale = f.min_feature_scale()
        if scale is not None and grid.h > scale / 8.0:
            warnings.append(
                f"resolution: grid step {grid.h:.4g} exceeds 1/8 of the "
                f"smallest feature scale {scale:.4g}"
            )
        field_ = sample_field(f, grid)
    elif isinstance(f, SampledField):
        field_ = f
        if field_.time is not None:
            raise DomainError("lp_norm expects a spatial field; use mixed_norm")
    else:
        raise DomainError(f"cannot take a norm of {type(f).__name__}")
    g = field_.space
    if p == math.inf:
        sup, excl = _finite_power_sum(field_.values, p, g.cell_volume)
        result = NormResult(sup, excluded_measure=excl, warnings=tuple(warnings))
        return result if with_report else result.value
    acc, excl = _finite_power_sum(field_.values, p, g.cell_volume)
    value = acc ** (1.0 / p)
    # outermost shell of cells as a truncation estimate
    vals = np.abs(np.nan_to_num(field_.values, nan=0.0, posinf=0.0, neginf=0.0))
    inner = vals[tuple(slice(1, -1) for _ in range(g.d))]
    shell = float(np.sum(vals**p) - np.sum(inner**p)) * g.cell_volume
    trunc = shell ** (1.0 / p) if shell > 0 else 0.0
    result = NormResult(value, truncation_estimate=trunc,
                        excluded_measure=excl, warnings=tuple(warnings))
    return result if with_report else result.value


def _tail_power_fit(ts: np.ndarray, vals: np.ndarray) -> tuple[float, float]:
    """Fit vals ~ C t^s on the last decade; returns (s, C)."""
    mask = ts >= ts[-1] / 10.0
    t_fit, v_fit = ts[mask], vals[mask]
    pos = v_fit > 0
    if np.count_nonzero(pos) < 3:
        return -math.inf, 0.0
    s, logc = np.polyfit(np.log(t_fit[pos]), np.log(v_fit[pos]), 1)
    return float(s), float(math.exp(logc))


#: an extrapolated tail below this fraction of the body is negligible even
#: when the fitted exponent does not certify convergence
_TAIL_SIGNIFICANCE = 1e-9


def _tail_increment(s: float, c: float, horizon: float, q: float) -> float:
    """Exact next-decade integral of the fitted law (c t^s)^q beyond horizon."""
    e = s * q + 1.0
    base = (c * horizon**s) ** q * horizon
    if abs(e) < 1e-12:
        return base * math.log(10.0)
    return base * (10.0**e - 1.0) / e


def time_lp_norm(values: np.ndarray, q: float, tgrid: TimeGrid,
                 tail_extrapolation: bool = True) -> tuple[float, float]:
    """L^q norm over (t_min, horizon] plus an extrapolated tail.

    Returns (norm, tail_contribution_to_the_q-th_power).  When the fitted
    tail exponent s satisfies s*q < -1 the converged tail integral is added;
    otherwise the norm is reported as infinite only if the next decade of
    the fitted law would contribute significantly, which separates genuine
    divergence from far-field columns that merely have not turned over
    inside the horizon.
    """
    vals = np.abs(np.asarray(values, dtype=float))
    if q == math.inf:
        return float(np.max(vals)), 0.0
    body = float(np.dot(vals**q, tgrid.weights))
    tail = 0.0
    if tail_extrapolation and vals[-1] > max(1e-300, 1e-13 * float(np.max(vals))):
        s, c = _tail_power_fit(tgrid.nodes, vals)
        if c > 0:
            if s * q < -1.0:
                tail = (c * tgrid.horizon**s) ** q * tgrid.horizon / (-(s * q + 1.0))
            else:
                inc = _tail_increment(s, c, tgrid.horizon, q)
                if inc > _TAIL_SIGNIFICANCE * body:
                    return math.inf, math.inf
                tail = inc
    return (body + tail) ** (1.0 / q), tail


@dataclass(frozen=True)
class MixedNormSpec:
    """Inner/outer exponents and which axis the inner integral runs over."""

    inner_axis: str          # "space" or "time"
    inner: float
    outer: float
    tail_extrapolation: bool = True

    def __post_init__(self):
        if self.inner_axis not in ("space", "time"):
            raise DomainError(f"inner_axis must be space or time, got {self.inner_axis}")
        for e in (self.inner, self.outer):
            if e != math.inf and e < 1:
                raise DomainError(f"exponents must be >= 1 or inf, got {e}")


def _spacetime_values(F, sgrid: SpaceGrid, tgrid: TimeGrid) -> np.ndarray:
    if isinstance(F, SampledField):
        if F.time is None:
            raise DomainError("mixed_norm needs a space-time field")
        return F.values.reshape(len(F.time.nodes), -1)
    if hasattr(F, "values") and callable(F.values):
        pts = sgrid.points()
        rows = [np.asarray(F.values(pts, float(t)), dtype=float).reshape(-1)
                for t in tgrid.nodes]
        return np.stack(rows)
    arr = np.asarray(F, dtype=float)
    return arr.reshape(len(tgrid.nodes), -1)


def mixed_norm(F, spec: MixedNormSpec, sgrid: SpaceGrid | None = None,
               tgrid: TimeGrid | None = None, with_report: bool = False):
    """Mixed space-time norm of a symbolic or sampled field.

    inner_axis = "space": [ integral ( integral |F|^p dx )^{q/p} dt ]^{1/q};
    inner_axis = "time" : the same with the roles of x and t exchanged.
    A divergent extrapolated tail propagates as an infinite value rather
    than an exception, so envelope checks can record a divergence verdict.
    """
    if isinstance(F, SampledField) and F.time is not None:
        sgrid = F.space
        tgrid = F.time
    if sgrid is None or tgrid is None:
        raise DomainError("mixed_norm needs both a space grid and a time grid")
    vals = np.abs(_spacetime_values(F, sgrid, tgrid))
    cell = sgrid.cell_volume
    excluded = 0.0
    if not np.all(np.isfinite(vals)):
        excluded = float(np.count_nonzero(~np.isfinite(vals))) * cell
        vals = np.where(np.isfinite(vals), vals, 0.0)
    tail = 0.0
    if spec.inner_axis == "space":
        p, q = spec.inner, spec.outer
        if p == math.inf:
            inner = np.max(vals, axis=1)
        else:
            inner = (np.sum(vals**p, axis=1) * cell) ** (1.0 / p)
        value, tail = time_lp_norm(inner, q, tgrid, spec.tail_extrapolation)
    else:
        q, p = spec.inner, spec.outer
        inner, diverged, tail = inner_time_norms(vals, q, tgrid,
                                                 spec.tail_extrapolation)
        if diverged:
            return _mk_result(math.inf, math.inf, excluded, with_report)
        if p == math.inf:
            value = float(np.max(inner))
        else:
            value = float((np.sum(inner**p) * cell) ** (1.0 / p))
    return _mk_result(value, tail, excluded, with_report)


def inner_time_norms(vals: np.ndarray, q: float, tgrid: TimeGrid,
                     tail_extrapolation: bool = True):
    """Per-column time norms of a (time, space) value matrix.

    Returns (inner_norms, diverged, max_tail_contribution); ``diverged`` is
    set when some column's extrapolated tail is both non-convergent and
    significant against its body.
    """
    vals = np.abs(np.asarray(vals, dtype=float))
    if q == math.inf:
        return np.max(vals, axis=0), False, 0.0
    body = tgrid.weights @ (vals**q)
    tails = np.zeros_like(body)
    if tail_extrapolation:
        # columns at roundoff level relative to the field are quadrature
        # noise; fitting their logs produces arbitrary exponents
        floor = max(1e-300, 1e-13 * float(np.max(vals)))
        sig = vals[-1] > floor
        if np.any(sig):
            s_arr, c_arr = _fit_columns(tgrid.nodes, vals[:, sig])
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                e = s_arr * q + 1.0
                logb = (q * (np.log(c_arr) + s_arr * math.log(tgrid.horizon))
                        + math.log(tgrid.horizon))
                base = np.exp(np.minimum(logb, 700.0))
                conv = e < 0.0
                col_tail = np.where(conv, base / np.where(conv, -e, 1.0), 0.0)
                inc = np.where(np.abs(e) < 1e-12, base * math.log(10.0),
                               base * (10.0**np.clip(e, -60.0, 60.0) - 1.0)
                               / np.where(np.abs(e) < 1e-12, 1.0, e))
            body_sig = body[sig]
            if np.any(~conv & (inc > _TAIL_SIGNIFICANCE * body_sig)):
                return np.full(body.shape, math.inf), True, math.inf
            tails[sig] = np.where(conv, col_tail, inc)
    inner = (body + tails) ** (1.0 / q)
    return inner, False, float(np.max(tails)) if np.size(tails) else 0.0


def _mk_result(value, tail, excluded, with_report):
    res = NormResult(float(value), tail_contribution=float(tail),
                     excluded_measure=excluded)
    return res if with_report else res.value


def _fit_columns(ts: np.ndarray, vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Power-law fit of each column on the last decade of the time grid."""
    mask = ts >= ts[-1] / 10.0
    t_fit = np.log(ts[mask])
    v = np.maximum(vals[mask, :], 1e-300)
    lv = np.log(v)
    A = np.stack([t_fit, np.ones_like(t_fit)], axis=1)
    coef, *_ = np.linalg.lstsq(A, lv, rcond=None)
    with np.errstate(over="ignore"):
        c = np.exp(np.minimum(coef[1], 700.0))
    return coef[0], c


def grand_lebesgue_norm(f, psi, interval: tuple[float, float],
                        grid_size: int = 64, *, sgrid: SpaceGrid | None = None,
                        norms=None) -> float:
    """sup over p in (a, b) of |f|_p / psi(p), on a geometric p-grid.

    The endpoints are approached but excluded.  ``f`` may be a TestFunction
    (needs ``sgrid``; closed forms are used when available) or ``norms`` may
    supply |f|_p directly as a callable.
    """
    a, b = interval
    if not (1 <= a < b):
        raise DomainError(f"need 1 <= a < b, got ({a}, {b})")
    ps = np.geomspace(a, b, grid_size + 2)[1:-1]
    if norms is None:
        if not isinstance(f, TestFunction):
            raise DomainError("pass norms= for non-symbolic inputs")

        def norms(p):
            cf = closed_form_lp(f, p)
            if cf is not None:
                return cf
            if sgrid is None:
                raise DomainError("sgrid required when no closed form exists")
            return lp_norm(f, p, sgrid)

    best = -math.inf
    for p in ps:
        w = psi(float(p))
        if not (w > 0):
            raise DomainError(f"psi must be positive on the grid, psi({p}) = {w}")
        best = max(best, norms(float(p)) / w)
    return best


def two_param_gls_norm(provider, weight, lattice) -> float:
    """max over an exponent lattice of mixed-norm(point) / weight(point).

    ``provider`` and ``weight`` are callables on lattice points (tuples);
    the lattice must be non-empty.  Reduction order follows the sorted
    lattice for reproducibility.
    """
    points = sorted(lattice)
    if not points:
        raise DomainError("empty admissible lattice")
    best = -math.inf
    for pt in points:
        w = weight(*pt)
        if not (w > 0):
            raise DomainError(f"weight must be positive, weight{pt} = {w}")
        best = max(best, provider(*pt) / w)
    return best


def power_cell_averages(grid: SpaceGrid, c: float) -> np.ndarray:
    """Cell averages of the weight |x|^{-c}, integrated exactly in d = 1.

    Plain midpoint sampling of a power weight loses O(h^{1-c}) mass near the
    singularity, which is enough to contaminate fitted dilation slopes; the
    exact cell integral keeps weighted quadrature second-order.  Requires
    c < d for local integrability.  d >= 2 refines the near-origin cells by
    micro-midpoints and uses the equal-volume-ball rule on a centered cell.
    """
    if c == 0:
        return np.ones(grid.shape())
    if not c < grid.d:
        raise DivergenceError(
            f"weight power {c} is not locally integrable in d = {grid.d}")
    h = grid.h
    if grid.d == 1:
        x = grid.axis()
        anti = lambda z: np.sign(z) * np.abs(z) ** (1.0 - c) / (1.0 - c)
        return (anti(x + h / 2.0) - anti(x - h / 2.0)) / h
    pts = grid.points()
    r = np.sqrt(np.sum(pts * pts, axis=-1))
    vals = np.empty(r.shape)
    far = r > 3.5 * h * math.sqrt(grid.d)
    vals[far] = r[far] ** (-c)
    near = ~far
    if np.any(near):
        m = 9
        sub = ((np.arange(m) + 0.5) / m - 0.5) * h
        mesh = np.meshgrid(*([sub] * grid.d), indexing="ij")
        shifts = np.stack([s.reshape(-1) for s in mesh], axis=-1)
        npts = pts[near][:, None, :] + shifts[None, :, :]
        rr = np.sqrt(np.sum(npts * npts, axis=-1))
        vals[near] = np.mean(np.where(rr > 0, rr ** (-c), 0.0), axis=1)
    center = r == 0.0
    if np.any(center):
        from .kernels import sphere_area
        unit_ball = math.pi ** (grid.d / 2.0) / math.gamma(grid.d / 2.0 + 1.0)
        rho = h * unit_ball ** (-1.0 / grid.d)
        vals[center] = sphere_area(grid.d) * rho ** (grid.d - c) / (grid.d - c) / h**grid.d
    return vals.reshape(grid.shape())


def weighted_outer_space_norm(inner_values: np.ndarray, b: float, q: float,
                              grid: SpaceGrid) -> float:
    """( integral (|x|^{-b} Psi(x))^q dx )^{1/q} with Psi given per cell.

    The weight's q-th power is integrated analytically per cell, the smooth
    factor by midpoint; requires b*q < d.
    """
    psi = np.asarray(inner_values, dtype=float).reshape(-1)
    if q == math.inf:
        raise DomainError("weighted outer norm needs a finite exponent")
    w = power_cell_averages(grid, b * q).reshape(-1)
    return float((np.sum(psi**q * w) * grid.cell_volume) ** (1.0 / q))


def kernel_operator_bound(K: np.ndarray, p: float, q: float,
                          wx: np.ndarray, wy: np.ndarray) -> float:
    """Upper bound |K|_{p,X; q',Y} for the integral operator with kernel K.

    K is sampled as K[y, x] with quadrature weights wx, wy.  The bound is
    the mixed norm with inner exponent p over x and outer exponent
    q' = q/(q-1) over y, dominating the q -> p operator norm.
    """
    if q <= 1:
        raise DomainError(f"requires q > 1, got q = {q}")
    K = np.asarray(K, dtype=float)
    qc = q / (q - 1.0)
    if p == math.inf:
        inner = np.max(np.abs(K), axis=1)
    else:
        inner = (np.abs(K) ** p @ wx) ** (1.0 / p)
    return float((inner**qc @ wy) ** (1.0 / qc))

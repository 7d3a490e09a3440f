"""Symbolic test functions closed under dilation, translation and tensoring.

The scaling (necessity) experiments need *exact* power laws, so dilation is
an expression-tree operation, never a grid resampling.  Every node evaluates
pointwise by formula; evaluation is pure and the trees are immutable.

Power weights |x|^{-a} are singular at the origin: pointwise evaluation
there returns a flagged infinity (``math.inf``), and grid sampling caps the
weight at a truncation radius, by default one grid cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "TestFunction", "Gaussian", "Indicator", "PowerWeight", "Sum", "Scaled",
    "Dilated", "Translated", "SpaceTimeTestFunction", "Tensor",
    "AnisotropicDilated", "dilate", "translate", "scale", "tensor",
    "generalized_dilate", "anisotropic_dilate", "closed_form_lp",
]


def _as_vec(value, d: int) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(d, float(arr))
    if arr.shape != (d,):
        raise DomainError(f"expected a length-{d} vector, got shape {arr.shape}")
    return arr


class TestFunction:
    """Base node; subclasses implement ``values`` on arrays of points."""

    d: int

    def values(self, x: np.ndarray) -> np.ndarray:
        """Evaluate on points, x shaped (..., d).  Returns shape (...)."""
        raise NotImplementedError

    def support1d(self) -> tuple | None:
        """Effective support (lo, hi) for d = 1 nodes, None when unbounded."""
        return None

    def evaluate(self, x) -> float:
        """Evaluate at a single point (scalar allowed when d = 1)."""
        pt = np.asarray(x, dtype=float).reshape(-1)
        if pt.size != self.d:
            raise DomainError(f"point has dimension {pt.size}, function has {self.d}")
        return float(self.values(pt.reshape(1, self.d))[0])

    def min_feature_scale(self) -> float | None:
        """Smallest length scale the function carries, for resolution checks."""
        return None

    # algebra -------------------------------------------------------------
    def __add__(self, other: "TestFunction") -> "TestFunction":
        return Sum((self, other))

    def __mul__(self, c: float) -> "TestFunction":
        return Scaled(float(c), self)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Gaussian(TestFunction):
    """amplitude * (2 pi sigma^2)^{-d/2} exp(-|x - center|^2 / (2 sigma^2))."""

    d: int = 1
    sigma: float = 1.0
    center: tuple = ()
    amplitude: float = 1.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        c = _as_vec(self.center if len(self.center) else 0.0, self.d)
        object.__setattr__(self, "center", tuple(c))

    def values(self, x):
        x = np.asarray(x, dtype=float)
        diff = x - np.asarray(self.center)
        r2 = np.sum(diff * diff, axis=-1)
        norm = (2.0 * math.pi * self.sigma**2) ** (-self.d / 2.0)
        return self.amplitude * norm * np.exp(-r2 / (2.0 * self.sigma**2))

    def min_feature_scale(self):
        return self.sigma

    def support1d(self):
        if self.d != 1:
            return None
        c = self.center[0]
        return (c - 6.0 * self.sigma, c + 6.0 * self.sigma)


@dataclass(frozen=True)
class Indicator(TestFunction):
    """amplitude * 1_{box}, the closed box [lo_i, hi_i] per axis."""

    d: int = 1
    lo: tuple = (-1.0,)
    hi: tuple = (1.0,)
    amplitude: float = 1.0

    def __post_init__(self):
        lo = _as_vec(self.lo, self.d)
        hi = _as_vec(self.hi, self.d)
        if np.any(hi <= lo):
            raise DomainError("indicator box must have hi > lo on every axis")
        object.__setattr__(self, "lo", tuple(lo))
        object.__setattr__(self, "hi", tuple(hi))

    def values(self, x):
        x = np.asarray(x, dtype=float)
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        inside = np.all((x >= lo) & (x <= hi), axis=-1)
        return self.amplitude * inside.astype(float)

    def volume(self) -> float:
        return float(np.prod(np.asarray(self.hi) - np.asarray(self.lo)))

    def min_feature_scale(self):
        return float(np.min(np.asarray(self.hi) - np.asarray(self.lo)))

    def support1d(self):
        return (self.lo[0], self.hi[0]) if self.d == 1 else None


@dataclass(frozen=True)
class PowerWeight(TestFunction):
    """amplitude * |x|^{-exponent}; singular at the origin.

    ``trunc_radius`` caps grid sampling near the singularity; ``None`` defers
    to one cell of whatever grid does the sampling.  Pointwise evaluation at
    the origin returns a flagged infinity.
    """

    d: int = 1
    exponent: float = 0.5
    trunc_radius: float | None = None
    amplitude: float = 1.0

    def values(self, x):
        x = np.asarray(x, dtype=float)
        r = np.sqrt(np.sum(x * x, axis=-1))
        out = np.full(r.shape, math.inf)
        pos = r > 0
        np.power(r, -self.exponent, out=out, where=pos)
        if self.exponent <= 0:  # not singular, fix the origin value
            out = np.where(pos, out, 0.0 if self.exponent < 0 else 1.0)
        return self.amplitude * out

    def capped_values(self, x, cap_radius: float):
        """Like ``values`` but frozen at its value on the truncation circle."""
        rad = self.trunc_radius if self.trunc_radius is not None else cap_radius
        x = np.asarray(x, dtype=float)
        r = np.maximum(np.sqrt(np.sum(x * x, axis=-1)), rad)
        return self.amplitude * r ** (-self.exponent)


@dataclass(frozen=True)
class Sum(TestFunction):
    children: tuple = ()

    def __post_init__(self):
        if not self.children:
            raise DomainError("sum node needs at least one child")
        d = self.children[0].d
        if any(c.d != d for c in self.children):
            raise DomainError("sum children must share a dimension")
        object.__setattr__(self, "d", d)

    def values(self, x):
        total = self.children[0].values(x)
        for c in self.children[1:]:
            total = total + c.values(x)
        return total

    def min_feature_scale(self):
        scales = [c.min_feature_scale() for c in self.children]
        scales = [s for s in scales if s is not None]
        return min(scales) if scales else None

    def support1d(self):
        sups = [c.support1d() for c in self.children]
        if any(s is None for s in sups):
            return None
        return (min(s[0] for s in sups), max(s[1] for s in sups))


@dataclass(frozen=True)
class Scaled(TestFunction):
    factor: float
    child: TestFunction = None

    def __post_init__(self):
        object.__setattr__(self, "d", self.child.d)

    def values(self, x):
        return self.factor * self.child.values(x)

    def min_feature_scale(self):
        return self.child.min_feature_scale()

    def support1d(self):
        return self.child.support1d()


@dataclass(frozen=True)
class Dilated(TestFunction):
    """x -> child(lam * x)."""

    lam: float
    child: TestFunction = None

    def __post_init__(self):
        if self.lam <= 0:
            raise DomainError(f"dilation factor must be positive, got {self.lam}")
        object.__setattr__(self, "d", self.child.d)

    def values(self, x):
        return self.child.values(np.asarray(x, dtype=float) * self.lam)

    def min_feature_scale(self):
        s = self.child.min_feature_scale()
        return None if s is None else s / self.lam

    def support1d(self):
        s = self.child.support1d()
        return None if s is None else (s[0] / self.lam, s[1] / self.lam)


@dataclass(frozen=True)
class Translated(TestFunction):
    """x -> child(x - shift)."""

    shift: tuple = (0.0,)
    child: TestFunction = None

    def __post_init__(self):
        object.__setattr__(self, "d", self.child.d)
        object.__setattr__(self, "shift", tuple(_as_vec(self.shift, self.d)))

    def values(self, x):
        return self.child.values(np.asarray(x, dtype=float) - np.asarray(self.shift))

    def min_feature_scale(self):
        return self.child.min_feature_scale()

    def support1d(self):
        s = self.child.support1d()
        if s is None or self.d != 1:
            return None
        return (s[0] + self.shift[0], s[1] + self.shift[0])


def dilate(f: TestFunction, lam: float) -> TestFunction:
    """Exact symbolic dilate x -> f(lam x)."""
    return Dilated(lam, f)


def translate(f: TestFunction, shift) -> TestFunction:
    return Translated(tuple(np.atleast_1d(np.asarray(shift, dtype=float))), f)


def scale(f: TestFunction, c: float) -> TestFunction:
    return Scaled(float(c), f)


# --------------------------------------------------------------------------
# space-time functions
# --------------------------------------------------------------------------

#: evaluation below this temporal floor is out of domain
T_FLOOR = 1e-8


class SpaceTimeTestFunction:
    """F(x, t) on R^d x (0, inf)."""

    d: int
    t_floor: float = T_FLOOR

    def values(self, x: np.ndarray, t) -> np.ndarray:
        raise NotImplementedError

    def temporal_support(self) -> tuple | None:
        """Effective (lo, hi) support in time, None when unknown."""
        return None

    def evaluate(self, x, t: float) -> float:
        if t < self.t_floor:
            raise DomainError(f"t = {t} below the temporal domain floor {self.t_floor}")
        pt = np.asarray(x, dtype=float).reshape(1, -1)
        return float(np.asarray(self.values(pt, t)).reshape(-1)[0])


@dataclass(frozen=True)
class Tensor(SpaceTimeTestFunction):
    """F(x, t) = spatial(x) * temporal(t), exact at every point."""

    spatial: TestFunction = None
    temporal: TestFunction = None

    def __post_init__(self):
        if self.temporal.d != 1:
            raise DomainError("temporal factor must be one-dimensional")
        object.__setattr__(self, "d", self.spatial.d)

    def values(self, x, t):
        tv = self.temporal.values(np.asarray(t, dtype=float).reshape(-1, 1))
        sv = self.spatial.values(x)
        if np.ndim(t) == 0:
            return float(tv[0]) * sv
        return tv.reshape(np.shape(t)) * sv  # caller aligns broadcasting

    def temporal_support(self):
        return self.temporal.support1d()


@dataclass(frozen=True)
class AnisotropicDilated(SpaceTimeTestFunction):
    """(x, t) -> child(lam x, mu t); the parabolic dilation uses mu = lam^2."""

    lam: float
    mu: float
    child: SpaceTimeTestFunction = None

    def __post_init__(self):
        if self.lam <= 0 or self.mu <= 0:
            raise DomainError(
                f"dilation factors must be positive, got lam={self.lam}, mu={self.mu}"
            )
        object.__setattr__(self, "d", self.child.d)

    def values(self, x, t):
        return self.child.values(np.asarray(x, dtype=float) * self.lam,
                                 np.asarray(t, dtype=float) * self.mu)

    def temporal_support(self):
        s = self.child.temporal_support()
        return None if s is None else (s[0] / self.mu, s[1] / self.mu)

    def as_tensor(self) -> Tensor | None:
        """Push the dilation into a tensor child, when the child is one."""
        if isinstance(self.child, Tensor):
            return Tensor(dilate(self.child.spatial, self.lam),
                          dilate(self.child.temporal, self.mu))
        return None


def tensor(g: TestFunction, h: TestFunction) -> Tensor:
    """g(x) * h(t) with h on the half-line."""
    return Tensor(g, h)


def anisotropic_dilate(F: SpaceTimeTestFunction, lam: float,
                       mu: float) -> SpaceTimeTestFunction:
    return AnisotropicDilated(lam, mu, F)


def generalized_dilate(F: SpaceTimeTestFunction, lam: float) -> SpaceTimeTestFunction:
    """Parabolic dilation: space by lam, time by lam^2."""
    return AnisotropicDilated(lam, lam * lam, F)


# --------------------------------------------------------------------------
# closed-form norms
# --------------------------------------------------------------------------

def closed_form_lp(f: TestFunction, p: float) -> float | None:
    """Analytic L^p norm where the node admits one, else None.

    Gaussian: |amp| (2 pi sigma^2)^{d(1/p-1)/2} p^{-d/(2p)};
    box indicator: |amp| volume^{1/p}; dilation, translation and scalar
    factors reduce through their exact covariance laws.
    """
    if p != math.inf and p < 1:
        raise DomainError(f"p must be >= 1 or inf, got {p}")
    if isinstance(f, Gaussian):
        if math.isinf(p):
            return abs(f.amplitude) * (2.0 * math.pi * f.sigma**2) ** (-f.d / 2.0)
        s2 = f.sigma**2
        return abs(f.amplitude) * (
            (2.0 * math.pi * s2) ** (f.d * (1.0 / p - 1.0) / 2.0)
            * p ** (-f.d / (2.0 * p))
        )
    if isinstance(f, Indicator):
        if math.isinf(p):
            return abs(f.amplitude)
        return abs(f.amplitude) * f.volume() ** (1.0 / p)
    if isinstance(f, Scaled):
        base = closed_form_lp(f.child, p)
        return None if base is None else abs(f.factor) * base
    if isinstance(f, Translated):
        return closed_form_lp(f.child, p)
    if isinstance(f, Dilated):
        base = closed_form_lp(f.child, p)
        if base is None:
            return None
        if math.isinf(p):
            return base
        return f.lam ** (-f.d / p) * base
    return None

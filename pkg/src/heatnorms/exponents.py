"""Exponent tuples and admissibility relations.

Every estimate in the package lives on a family of Lebesgue exponents tied
together by one or two linear relations among reciprocals, plus open-interval
constraints.  ``admissibility`` solves each relation for its dependent
exponent, fills the derived quantities, and records every violated constraint
by name instead of silently failing.

Scaling consistency notes (see the decisions ledger for the full audit):

* the weighted relation ``weight7`` uses kappa = (a + b + d + 2*theta - 2/r)/d.
  This is the sign forced by dilation invariance and by the kernel power
  d + 2*theta - 2/r of the weighted time norm; it reduces to the unweighted
  kappa = 1 - 2/(dr) at a = b = theta = 0.
* upper endpoints p_plus are reported as 1/(1 - kappa), the exact point where
  the solved q leaves the finite range; published b = 0 special cases agree.
* ``frac8-duhamel-a`` uses kappa_1 = (a + b + d - 2*alpha/Q_1)/d, matching the
  kernel's time-norm power and the published p_plus expression.
* ``frac8-duhamel-b`` treats the data weight as R = s^beta * F, the reading
  under which kappa_2 = beta + tau + zeta_2 is dilation-consistent; the lower
  and upper interval bounds apply to the temporal data exponent k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, InadmissibleError, UsageError

__all__ = ["ExponentTuple", "admissibility", "frac_exponents", "RELATIONS",
           "perturb_reciprocal"]

IDENTITY_TOL = 1e-12


@dataclass
class ExponentTuple:
    """A set of Lebesgue exponents with derived quantities and a verdict.

    ``exponents`` holds the primary entries (p, q, r, k, h, m, Q, ...),
    ``derived`` the dimensionless combinations (theta, kappa, beta, lambda1,
    lambda2, zeta2), ``bounds`` the interval endpoints (p_minus, p_plus,
    k_minus, k_plus, q_minus, q_plus).  ``constraints`` maps each named
    constraint of the relation to True/False; the tuple is admissible only
    when all hold strictly.  A solved exponent landing on a boundary
    (q = inf, kappa not in (0,1), ...) sets ``boundary`` and an explanatory
    entry in ``failures``.
    """

    d: int
    kind: str = ""
    exponents: dict[str, float] = field(default_factory=dict)
    derived: dict[str, float] = field(default_factory=dict)
    bounds: dict[str, float] = field(default_factory=dict)
    constraints: dict[str, bool] = field(default_factory=dict)
    admissible: bool = False
    boundary: bool = False
    failures: list[str] = field(default_factory=list)

    def __getitem__(self, name: str) -> float:
        for table in (self.exponents, self.derived, self.bounds):
            if name in table:
                return table[name]
        raise KeyError(name)

    def require(self, name: str, ok: bool, description: str) -> None:
        self.constraints[name] = bool(ok)
        if not ok:
            self.failures.append(description)

    def finish(self) -> "ExponentTuple":
        self.admissible = not self.failures
        return self

    def raise_if_inadmissible(self) -> "ExponentTuple":
        if not self.admissible:
            raise InadmissibleError("; ".join(self.failures) or "inadmissible tuple")
        return self

    def identity_residuals(self) -> dict[str, float]:
        """Residuals of the defining identities; all should be < 1e-12."""
        res = {}
        e, dd = self.exponents, self.derived
        if "Q" in e and "p" in e and "r" in e:
            res["Q"] = abs(1.0 / e["p"] + 1.0 - 1.0 / e["Q"] - 1.0 / e["r"])
        if "theta" in dd and "Q" in e:
            res["theta"] = abs(dd["theta"] - 0.5 * self.d * (1.0 - 1.0 / e["Q"]))
        if "beta" in dd and "theta" in dd:
            res["beta"] = abs(dd["beta"] - dd["theta"] / self.d)
        return res


def _set(t: ExponentTuple, table: str, **vals) -> None:
    getattr(t, table).update({k: float(v) for k, v in vals.items()})


def _solve_reciprocal(value: float, what: str, t: ExponentTuple) -> float:
    """Turn a solved reciprocal into an exponent, flagging boundaries."""
    if value <= 0:
        t.boundary = True
        t.require(f"{what}_finite", False,
                  f"solved {what} = infinity (reciprocal {value:.6g} <= 0)")
        return math.inf
    q = 1.0 / value
    if q <= 1:
        t.boundary = q == 1
        t.require(f"{what}_gt_1", False, f"solved {what} = {q:.6g} <= 1")
    return q


def _require_open(t: ExponentTuple, name: str, x: float, lo: float, hi: float) -> None:
    t.require(name, lo < x < hi,
              f"{name}: requires {lo:.6g} < {x:.6g} < {hi:.6g}")


# --------------------------------------------------------------------------
# the individual relations
# --------------------------------------------------------------------------

def _rel_g0(d: int, p: float, r: float) -> ExponentTuple:
    """1/q = 1/p - 2/(r d) with r > 2/d and p in (1, dr/2)."""
    t = ExponentTuple(d=d, kind="G0")
    _set(t, "exponents", p=p, r=r)
    t.require("dr_gt_2", d * r > 2, f"requires d*r > 2, got {d * r:.6g}")
    _require_open(t, "p_window", p, 1.0, d * r / 2.0)
    qinv = 1.0 / p - 2.0 / (r * d)
    q = _solve_reciprocal(qinv, "q", t)
    _set(t, "exponents", q=q)
    kappa = 1.0 - 2.0 / (d * r)
    _set(t, "derived", kappa=kappa)
    _set(t, "bounds", p_minus=1.0, p_plus=d * r / 2.0,
         q_minus=r * d / max(r * d - 2.0, 1e-300), q_plus=math.inf)
    return t.finish()


def _rel_decay(d: int, p: float, q: float) -> ExponentTuple:
    """1 + 1/q = 1/m + 1/p with q >= p (semigroup decay pairing)."""
    t = ExponentTuple(d=d, kind="decay")
    _set(t, "exponents", p=p, q=q)
    t.require("q_ge_p", q >= p, f"requires q >= p, got q = {q:.6g} < p = {p:.6g}")
    minv = 1.0 + 1.0 / q - 1.0 / p
    m = 1.0 / minv if minv > 0 else math.inf
    if m == 1.0:
        t.boundary = True  # p = q collapses the smoothing exponent
    _set(t, "exponents", m=m)
    _set(t, "derived", decay_exponent=-0.5 * d * (1.0 / p - 1.0 / q))
    return t.finish()


def _g1_core(d: int, p: float, r: float) -> tuple[float, float]:
    """Q and theta shared by the forcing-side estimates."""
    Qinv = 1.0 + 1.0 / p - 1.0 / r
    Q = 1.0 / Qinv
    theta = 0.5 * d * (1.0 - Qinv)
    return Q, theta


def _rel_g1(d: int, p: float, r: float, k: float) -> ExponentTuple:
    """1/q + d/(2p) = 1/k + d/(2r) - 1 on the domain p > r, k in (1, k_plus)."""
    t = ExponentTuple(d=d, kind="G1")
    _set(t, "exponents", p=p, r=r, k=k)
    Q, theta = _g1_core(d, p, r)
    beta = theta / d
    _set(t, "exponents", Q=Q)
    _set(t, "derived", theta=theta, beta=beta)
    t.require("p_gt_r", p > r, f"requires p > r, got p = {p:.6g}, r = {r:.6g}")
    _require_open(t, "theta_window", theta, 0.0, 1.0)
    k_plus = d / (d - theta) if d > theta else math.inf
    _set(t, "bounds", k_minus=1.0, k_plus=k_plus,
         q_minus=1.0 / beta if beta > 0 else math.inf, q_plus=math.inf)
    _require_open(t, "k_window", k, 1.0, k_plus)
    qinv = 1.0 / k + 0.5 * d / r - 1.0 - 0.5 * d / p
    q = _solve_reciprocal(qinv, "q", t)
    _set(t, "exponents", q=q)
    return t.finish()


def _rel_thm31b(d: int, h: float, r: float, k: float) -> ExponentTuple:
    """1/m = 1/h - 2/(d r) together with 1 + 1/q = 1/r + 1/k."""
    t = ExponentTuple(d=d, kind="thm31b")
    _set(t, "exponents", h=h, r=r, k=k)
    t.require("dr_gt_2", d * r > 2, f"requires d*r > 2, got {d * r:.6g}")
    _require_open(t, "h_window", h, 1.0, d * r / 2.0)
    t.require("time_young", 1.0 / r + 1.0 / k > 1.0,
              f"requires 1/r + 1/k > 1, got {1.0 / r + 1.0 / k:.6g}")
    m = _solve_reciprocal(1.0 / h - 2.0 / (d * r), "m", t)
    q = _solve_reciprocal(1.0 / r + 1.0 / k - 1.0, "q", t)
    _set(t, "exponents", m=m, q=q)
    _set(t, "bounds", p_minus=1.0, p_plus=d * r / 2.0)
    return t.finish()


def _rel_young(d: int, p: float, q: float) -> ExponentTuple:
    """1 + 1/r = 1/p + 1/q."""
    t = ExponentTuple(d=d, kind="young")
    _set(t, "exponents", p=p, q=q)
    t.require("p_ge_1", p >= 1, f"requires p >= 1, got {p:.6g}")
    t.require("q_ge_1", q >= 1, f"requires q >= 1, got {q:.6g}")
    rinv = 1.0 / p + 1.0 / q - 1.0
    if rinv <= 0:
        t.boundary = True
        t.require("r_finite", False,
                  f"requires 1/p + 1/q > 1, got {1.0 / p + 1.0 / q:.6g}")
        r = math.inf
    else:
        r = 1.0 / rinv
        if r == 1.0:
            t.boundary = True
    _set(t, "exponents", r=r)
    return t.finish()


def _rel_necessity43(d: int, p: float, r: float, k: float) -> ExponentTuple:
    """1 + 1/q - 1/k = (d/2)(1/r - 1/p), the bare forcing-side scaling law."""
    t = ExponentTuple(d=d, kind="necessity43")
    _set(t, "exponents", p=p, r=r, k=k)
    q = _solve_reciprocal(1.0 / k - 1.0 + 0.5 * d * (1.0 / r - 1.0 / p), "q", t)
    _set(t, "exponents", q=q)
    return t.finish()


def _rel_weight7(d: int, a: float, b: float, theta: float,
                 r: float, p: float) -> ExponentTuple:
    """Weighted initial-data relation 1 + 1/q = 1/p + kappa."""
    t = ExponentTuple(d=d, kind="weight7")
    _set(t, "exponents", p=p, r=r)
    _set(t, "derived", a=a, b=b, theta_w=theta)
    t.require("weights_nonneg", a >= 0 and b >= 0 and theta >= 0,
              f"weights must be >= 0, got a={a}, b={b}, theta={theta}")
    t.require("a_lt_d", a < d, f"requires a < d, got a = {a:.6g}")
    kappa = (a + b + d + 2.0 * theta - 2.0 / r) / d
    _set(t, "derived", kappa=kappa)
    _require_open(t, "kappa_window", kappa, 0.0, 1.0)
    t.require("kernel_power_positive", 2.0 / r < d + 2.0 * theta,
              f"requires 2/r < d + 2*theta, got 2/r = {2.0 / r:.6g}")
    t.require("weight_window", a + 2.0 * theta < 2.0 / r,
              f"requires a + 2*theta < 2/r, got {a + 2.0 * theta:.6g}")
    p_minus = d / (d - a) if a < d else math.inf
    # the upper endpoint encodes target-side integrability b*q < d; it is
    # never larger than the q-finiteness bound 1/(1 - kappa)
    denom = 2.0 / r - a - 2.0 * theta
    p_plus = d / denom if denom > 0 else math.inf
    _set(t, "bounds", p_minus=p_minus, p_plus=p_plus)
    _require_open(t, "p_window", p, p_minus, p_plus)
    q = _solve_reciprocal(1.0 / p + kappa - 1.0, "q", t)
    _set(t, "exponents", q=q)
    if math.isfinite(t.exponents.get("q", math.inf)):
        t.require("target_weight_integrable", b * t.exponents["q"] < d,
                  f"requires b*q < d, got {b * t.exponents['q']:.6g}")
    return t.finish()


def _rel_frac_initial(d: int, alpha: float, a: float, b: float, tau: float,
                      r: float, p: float) -> ExponentTuple:
    """Weighted fractional initial-data relation, kernel power lambda1."""
    t = ExponentTuple(d=d, kind="frac8-initial")
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    _set(t, "exponents", p=p, r=r)
    _set(t, "derived", alpha=alpha, a=a, b=b, tau=tau)
    t.require("weights_nonneg", a >= 0 and b >= 0 and tau >= 0,
              f"weights must be >= 0, got a={a}, b={b}, tau={tau}")
    t.require("a_lt_d", a < d, f"requires a < d, got a = {a:.6g}")
    # lambda1 at zero kernel weight, with the time weight folded in through
    # the effective dimension d + 2*alpha*tau (dilation-consistent form).
    lam1 = d + 2.0 * alpha * tau - 2.0 * alpha / r
    _set(t, "derived", lambda1=lam1)
    t.require("time_norm_converges", (d + 2.0 * alpha * tau) * r > 2.0 * alpha,
              f"requires (d + 2*alpha*tau)*r > 2*alpha, got "
              f"{(d + 2.0 * alpha * tau) * r:.6g} vs {2.0 * alpha:.6g}")
    kappa0 = (a + b + lam1) / d
    _set(t, "derived", kappa=kappa0)
    _require_open(t, "kappa_window", kappa0, 0.0, 1.0)
    p_minus = d / (d - a) if a < d else math.inf
    # printed form d/(d - a - lambda1): target-side integrability b*q < d
    denom = d - a - lam1
    p_plus = d / denom if denom > 0 else math.inf
    _set(t, "bounds", p_minus=p_minus, p_plus=p_plus)
    _require_open(t, "p_window", p, p_minus, p_plus)
    q = _solve_reciprocal(1.0 / p + kappa0 - 1.0, "q", t)
    _set(t, "exponents", q=q)
    if math.isfinite(t.exponents.get("q", math.inf)):
        t.require("target_weight_integrable", b * t.exponents["q"] < d,
                  f"requires b*q < d, got {b * t.exponents['q']:.6g}")
    return t.finish()


def _rel_frac_duhamel_a(d: int, alpha: float, a: float, b: float,
                        r: float, m: float, p: float) -> ExponentTuple:
    """Space-weighted fractional forcing relation (time Young + Riesz step)."""
    t = ExponentTuple(d=d, kind="frac8-duhamel-a")
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    _set(t, "exponents", r=r, m=m, p=p)
    _set(t, "derived", alpha=alpha, a=a, b=b)
    t.require("weights_nonneg", a >= 0 and b >= 0,
              f"weights must be >= 0, got a={a}, b={b}")
    t.require("a_lt_d", a < d, f"requires a < d, got a = {a:.6g}")
    Qinv = 1.0 + 1.0 / r - 1.0 / m
    Q = _solve_reciprocal(Qinv, "Q", t)
    _set(t, "exponents", Q=Q)
    _require_open(t, "Q_window", Q, 1.0, math.inf)
    if math.isfinite(Q):
        t.require("kernel_time_norm", d * Q > 2.0 * alpha,
                  f"requires d*Q > 2*alpha, got {d * Q:.6g} vs {2.0 * alpha:.6g}")
        kappa1 = (a + b + d - 2.0 * alpha / Q) / d
    else:
        kappa1 = math.nan
    _set(t, "derived", kappa=kappa1)
    _require_open(t, "kappa_window", kappa1, 0.0, 1.0)
    p_minus = d / (d - a) if a < d else math.inf
    # printed form d/(2 alpha/Q - a): target-side integrability b*q < d
    denom = 2.0 * alpha / Q - a if math.isfinite(Q) else math.nan
    p_plus = d / denom if denom > 0 else math.inf
    _set(t, "bounds", p_minus=p_minus, p_plus=p_plus)
    _require_open(t, "p_window", p, p_minus, p_plus)
    q = _solve_reciprocal(1.0 / p + kappa1 - 1.0, "q", t)
    _set(t, "exponents", q=q)
    if math.isfinite(t.exponents.get("q", math.inf)):
        t.require("target_weight_integrable", b * t.exponents["q"] < d,
                  f"requires b*q < d, got {b * t.exponents['q']:.6g}")
    return t.finish()


def _rel_frac_duhamel_b(d: int, alpha: float, beta: float, tau: float,
                        Q: float, p: float, k: float) -> ExponentTuple:
    """Time-weighted fractional forcing relation (space Young + time Hardy)."""
    t = ExponentTuple(d=d, kind="frac8-duhamel-b")
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    _set(t, "exponents", Q=Q, p=p, k=k)
    _set(t, "derived", alpha=alpha, beta_w=beta, tau=tau)
    t.require("beta_window", 0 <= beta < 1, f"requires 0 <= beta < 1, got {beta}")
    t.require("tau_window", 0 <= tau < 1, f"requires 0 <= tau < 1, got {tau}")
    _require_open(t, "Q_window", Q, 1.0, math.inf)
    zeta2 = d * (1.0 - 1.0 / Q) / (2.0 * alpha)
    _set(t, "derived", zeta2=zeta2)
    _require_open(t, "zeta2_window", zeta2, 0.0, 1.0)
    kappa2 = beta + tau + zeta2
    _set(t, "derived", kappa=kappa2)
    t.require("kappa_lt_1", kappa2 < 1.0,
              f"requires beta + tau + zeta2 < 1, got {kappa2:.6g}")
    q = _solve_reciprocal(1.0 / Q + 1.0 / p - 1.0, "q", t)
    # interval bounds act on the temporal data exponent k
    k_minus = 1.0 / (1.0 - beta)
    k_plus = 1.0 / (1.0 - kappa2) if kappa2 < 1 else math.inf
    _set(t, "bounds", k_minus=k_minus, k_plus=k_plus)
    _require_open(t, "k_window", k, k_minus, k_plus)
    r = _solve_reciprocal(1.0 / k + kappa2 - 1.0, "r", t)
    _set(t, "exponents", q=q, r=r)
    return t.finish()


RELATIONS = {
    "G0": _rel_g0,
    "decay": _rel_decay,
    "G1": _rel_g1,
    "thm31b": _rel_thm31b,
    "young": _rel_young,
    "necessity43": _rel_necessity43,
    "weight7": _rel_weight7,
    "frac8-initial": _rel_frac_initial,
    "frac8-duhamel-a": _rel_frac_duhamel_a,
    "frac8-duhamel-b": _rel_frac_duhamel_b,
}


def admissibility(kind: str, **params) -> ExponentTuple:
    """Solve the named relation for its dependent exponent(s).

    Fills derived quantities and interval bounds and marks the tuple
    admissible only when every open-interval constraint holds strictly.
    Unknown relation names raise UsageError.
    """
    try:
        rel = RELATIONS[kind]
    except KeyError:
        raise UsageError(
            f"unknown relation {kind!r}; supported: {sorted(RELATIONS)}"
        ) from None
    try:
        return rel(**params)
    except TypeError as exc:
        raise UsageError(f"relation {kind!r}: {exc}") from None


def frac_exponents(d: int, alpha: float, theta: float, tau: float,
                   r: float | None = None, p: float | None = None) -> ExponentTuple:
    """Decay powers of the weighted fractional kernel plus named constraints.

    lambda1 (needs r) is the power of |x| in the kernel's time norm,
    lambda2 (needs p) the power of t in its space norm.  Each convergence
    constraint is reported individually in ``constraints``.
    """
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    if theta < 0 or tau < 0:
        raise DomainError(f"weights must be >= 0, got theta={theta}, tau={tau}")
    t = ExponentTuple(d=d, kind="frac-exponents")
    _set(t, "derived", alpha=alpha, theta=theta, tau=tau)
    if r is not None:
        _set(t, "exponents", r=r)
        lam1 = -2.0 * alpha / r + d + theta
        _set(t, "derived", lambda1=lam1)
        t.require("time_norm_converges", (d + 2.0 * alpha * tau) * r > 2.0 * alpha,
                  f"requires (d + 2*alpha*tau)*r > 2*alpha, got "
                  f"{(d + 2.0 * alpha * tau) * r:.6g}")
        t.require("time_norm_second", r * (d + 2.0 * alpha * tau + 2.0 * alpha) > d,
                  "requires r*(d + 2*alpha*tau + 2*alpha) > d")
    if p is not None:
        _set(t, "exponents", p=p)
        lam2 = tau - d * (1.0 / p - 1.0) / (2.0 * alpha) + theta / (2.0 * alpha)
        _set(t, "derived", lambda2=lam2)
        t.require("space_norm_alpha", d - alpha * p > 0,
                  f"requires d - alpha*p > 0, got {d - alpha * p:.6g}")
        t.require("space_norm_second", d * p + 2.0 * alpha * p - d + theta * p > 0,
                  "requires d*p + 2*alpha*p - d + theta*p > 0")
        t.require("space_weight_integrable", d - theta * p > 0,
                  f"requires d - theta*p > 0, got {d - theta * p:.6g}")
    return t.finish()


def perturb_reciprocal(exponent: float, delta: float) -> float:
    """Shift 1/exponent by delta, the natural perturbation for scaling laws.

    The admissibility relations are linear in reciprocals, so necessity
    experiments detune a tuple by moving the dependent exponent's reciprocal.
    """
    newinv = 1.0 / exponent + delta
    if newinv <= 0:
        return math.inf
    return 1.0 / newinv

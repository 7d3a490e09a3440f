"""Verification engine: ratio envelopes, dilation power laws, extremizers.

The estimates under test carry non-constructive constants, so no check ever
compares against an "exact" constant.  What is checkable, and what the
exactness claims reduce to numerically, is

* finiteness and scale-invariance of measured ratio envelopes over declared
  test families,
* dilation power laws: the numerator of an admissible ratio must scale with
  the predicted exponent, and detuning the dependent exponent's reciprocal
  must produce a visible slope mismatch (necessity),
* closed-form constants reproduced by independent quadrature,
* one-sided grand-norm chains built from measured envelopes.

Every report records parameters and the seed of the named generator
(PCG64), and reruns are bit-identical; envelope reductions run in sorted
order so the worker count cannot change results.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, asdict

import numpy as np

from . import constants as C
from .errors import DomainError, InadmissibleError
from .exponents import admissibility, perturb_reciprocal
from .grids import SpaceGrid, TimeGrid
from .kernels import tail_fit, z_profile
from .norms import MixedNormSpec, SampledField, lp_norm, mixed_norm, time_lp_norm
from .operators import ConvolutionPlan, duhamel, frac_duhamel, frac_evolve, heat_evolve
from .testfunctions import (Gaussian, Indicator, PowerWeight, Tensor,
                            anisotropic_dilate, closed_form_lp, dilate,
                            tensor)

__all__ = [
    "VerificationReport", "RatioEnvelope", "GridProfile", "power_law_fit",
    "verify_young", "verify_thm20a", "verify_decay", "verify_thm31",
    "verify_weight", "verify_united", "verify_gls", "CHECKS", "SUITES",
    "run_suite", "reports_to_jsonl",
]

RNG_NAME = "PCG64"
LAMBDA_SET = (0.5, 1.0, 2.0, 4.0)


@dataclass
class VerificationReport:
    """One measured check: quantity, reference, tolerance, verdict."""

    check_id: str
    params: dict
    measured: float
    reference: float
    tolerance: float
    kind: str = "inequality"  # inequality | slope | consistency
    verdict: str = "fail"
    seed: int | None = None
    runtime_s: float = 0.0
    notes: list = field(default_factory=list)

    def judge(self) -> "VerificationReport":
        if self.kind == "slope":
            ok = abs(self.measured - self.reference) <= self.tolerance
        elif self.kind == "detection":
            # the measured quantity must reach the reference threshold
            ok = self.measured >= self.reference
        elif self.kind == "finite":
            ok = math.isfinite(self.measured)
        else:
            ok = self.measured <= self.reference * (1.0 + self.tolerance)
        self.verdict = "pass" if ok else "fail"
        return self

    def skip(self, reason: str) -> "VerificationReport":
        self.verdict = "inadmissible-skipped"
        self.notes.append(reason)
        return self

    def to_record(self, with_timestamp: bool = True) -> dict:
        rec = {
            "id": self.check_id,
            "params": self.params,
            "seed": self.seed,
            "kind": self.kind,
            "measured": self.measured,
            "reference": self.reference,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "notes": list(self.notes),
            "runtime_s": round(self.runtime_s, 3) if with_timestamp else 0.0,
        }
        if with_timestamp:
            rec["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
        return rec

    def line(self) -> str:
        return (f"{self.verdict.upper():6s} {self.check_id:24s} "
                f"measured={self.measured:.6g} reference={self.reference:.6g} "
                f"tol={self.tolerance:g}")


@dataclass
class RatioEnvelope:
    """Measured supremum of solution-to-data ratios over a family."""

    family: str
    ratios: list = field(default_factory=list)  # (member description, ratio)

    def add(self, member: str, ratio: float) -> None:
        self.ratios.append((member, float(ratio)))

    @property
    def supremum(self) -> float:
        return max(r for _, r in self.ratios) if self.ratios else math.nan

    @property
    def margin(self) -> float:
        return C.ENVELOPE_MARGIN

    def bound(self) -> float:
        return self.supremum * (1.0 + self.margin)

    def spread(self) -> float:
        vals = [r for _, r in self.ratios]
        return max(vals) / min(vals) - 1.0 if vals else math.nan


def power_law_fit(samples) -> dict:
    """Least squares of log(value) on log(lambda); needs positive values."""
    lam = np.asarray([s[0] for s in samples], dtype=float)
    val = np.asarray([s[1] for s in samples], dtype=float)
    if len(lam) < 3:
        raise DomainError("power_law_fit needs at least 3 samples")
    if np.any(val <= 0):
        raise DomainError("power_law_fit needs positive values")
    slope, intercept = np.polyfit(np.log(lam), np.log(val), 1)
    pred = slope * np.log(lam) + intercept
    resid = np.log(val) - pred
    ss_tot = float(np.sum((np.log(val) - np.mean(np.log(val))) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return {"slope": float(slope), "intercept": float(intercept), "r2": r2}


# --------------------------------------------------------------------------
# grid profiles
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GridProfile:
    """Desk-scale grid configuration shared by the checks."""

    extent: float = 64.0
    n: int = 2048
    t_min: float = 1e-6
    horizon: float = 1e6
    t_panels: int = 36
    t_order: int = 8
    s_nodes: int = 96
    trials: int = 200
    members: int = 4
    lam_set: tuple = LAMBDA_SET

    @classmethod
    def quick(cls) -> "GridProfile":
        return cls(extent=48.0, n=768, t_panels=24, t_order=6, s_nodes=48,
                   trials=60, members=3)

    def space(self, d: int = 1, extent: float | None = None,
              n: int | None = None) -> SpaceGrid:
        return SpaceGrid(d, extent or self.extent, n or self.n)

    def time(self, t_min: float | None = None,
             horizon: float | None = None) -> TimeGrid:
        return TimeGrid(t_min or self.t_min, horizon or self.horizon,
                        self.t_panels, self.t_order)


def _gaussian_family(profile: GridProfile, d: int = 1):
    sigmas = (0.5, 1.0, 2.0, 4.0)[: profile.members]
    return [(f"gaussian sigma={s}", Gaussian(d=d, sigma=s)) for s in sigmas]


def _u0_matrix(f, plan: ConvolutionPlan, tg: TimeGrid,
               evolver=heat_evolve, **kw) -> SampledField:
    rows = [evolver(f, float(t), plan, **kw).values for t in tg.nodes]
    return SampledField(plan.grid, np.stack(rows), time=tg)


# --------------------------------------------------------------------------
# convolution inequality
# --------------------------------------------------------------------------

def _conv_ratio(f, g, r: float, p: float, q: float, plan: ConvolutionPlan):
    from .operators import space_convolve
    conv = space_convolve(f, g, plan)
    num = lp_norm(SampledField(plan.grid, conv.values), r)
    den = lp_norm(f, p, plan.grid) * lp_norm(g, q, plan.grid)
    return num / den


def verify_young(d: int, p: float, q: float, trials: int = 200,
                 seed: int = 42, profile: GridProfile | None = None):
    """Sharp convolution constant: random pairs, extremizer search, dilation."""
    profile = profile or GridProfile()
    t0 = time.time()
    tup = admissibility("young", d=d, p=p, q=q)
    base = {"d": d, "p": p, "q": q, "rng": RNG_NAME}
    if not tup.admissible:
        return [VerificationReport("young.ratio", base, math.nan, math.nan,
                                   1e-3, seed=seed).skip("; ".join(tup.failures))]
    r = tup.exponents["r"]
    kb = C.beckner_constant(d, p, q).value
    grid = profile.space(d)
    plan = ConvolutionPlan(grid)
    rng = np.random.default_rng(np.random.PCG64(seed))

    worst = -math.inf
    for _ in range(trials):
        if rng.random() < 0.7:
            f = Gaussian(d=d, sigma=float(rng.uniform(0.4, 2.5)),
                         center=tuple(rng.uniform(-2, 2, size=d)),
                         amplitude=float(rng.uniform(0.2, 2.0)))
        else:
            lo = rng.uniform(-3, 0, size=d)
            f = Indicator(d=d, lo=tuple(lo),
                          hi=tuple(lo + rng.uniform(0.5, 3.0, size=d)),
                          amplitude=float(rng.uniform(0.2, 2.0)))
        g = Gaussian(d=d, sigma=float(rng.uniform(0.4, 2.5)),
                     center=tuple(rng.uniform(-2, 2, size=d)),
                     amplitude=float(rng.uniform(0.2, 2.0)))
        worst = max(worst, _conv_ratio(f, g, r, p, q, plan))
    rep_ratio = VerificationReport(
        "young.ratio", {**base, "r": r, "trials": trials}, worst, kb, 1e-3,
        seed=seed, notes=[f"sharp constant {kb:.7f}"]).judge()
    rep_ratio.runtime_s = time.time() - t0

    # two-level extremizer search over gaussian widths
    t1 = time.time()
    lo_w, hi_w = 0.4, 2.5
    best = (-math.inf, None)
    for _ in range(2):
        widths = np.geomspace(lo_w, hi_w, 16)
        for s1 in widths:
            for s2 in widths:
                ratio = _conv_ratio(Gaussian(d=d, sigma=float(s1)),
                                    Gaussian(d=d, sigma=float(s2)), r, p, q, plan)
                if ratio > best[0]:
                    best = (ratio, (float(s1), float(s2)))
        c1, c2 = best[1]
        lo_w, hi_w = c1 / 1.3, c1 * 1.3  # refine around the maximizer
    attained = best[0]
    rep_ext = VerificationReport(
        "young.extremizer", {**base, "r": r, "widths": best[1]},
        measured=attained, reference=0.98 * kb, tolerance=0.0,
        kind="detection", seed=seed,
        notes=[f"attained/K = {attained / kb:.5f}"]).judge()
    rep_ext.runtime_s = time.time() - t1

    # both sides must scale with the same dilation exponent
    t2 = time.time()
    f0 = Gaussian(d=d, sigma=1.0)
    g0 = Gaussian(d=d, sigma=0.7)
    lhs, rhs = [], []
    for lam in profile.lam_set:
        from .operators import space_convolve
        cv = space_convolve(dilate(f0, lam), dilate(g0, lam), plan)
        lhs.append((lam, lp_norm(SampledField(grid, cv.values), r)))
        rhs.append((lam, lp_norm(dilate(f0, lam), p, grid)
                    * lp_norm(dilate(g0, lam), q, grid)))
    gap = abs(power_law_fit(lhs)["slope"] - power_law_fit(rhs)["slope"])
    rep_dil = VerificationReport(
        "young.dilation", {**base, "lam_set": list(profile.lam_set)},
        gap, 0.0, 1e-2, kind="slope", seed=seed,
        notes=["slope difference between the two sides"]).judge()
    rep_dil.runtime_s = time.time() - t2
    return [rep_ratio, rep_ext, rep_dil]


def young_necessity_gap(d: int, p: float, q: float, delta: float = 0.1,
                        profile: GridProfile | None = None) -> float:
    """Slope gap after detuning 1/r by delta; admissible tuples give ~0."""
    profile = profile or GridProfile()
    tup = admissibility("young", d=d, p=p, q=q).raise_if_inadmissible()
    r_bad = perturb_reciprocal(tup.exponents["r"], delta)
    grid = profile.space(d)
    plan = ConvolutionPlan(grid)
    f0, g0 = Gaussian(d=d, sigma=1.0), Gaussian(d=d, sigma=0.7)
    lhs, rhs = [], []
    for lam in profile.lam_set:
        from .operators import space_convolve
        cv = space_convolve(dilate(f0, lam), dilate(g0, lam), plan)
        lhs.append((lam, lp_norm(SampledField(grid, cv.values), r_bad)))
        rhs.append((lam, lp_norm(dilate(f0, lam), p, grid)
                    * lp_norm(dilate(g0, lam), q, grid)))
    return abs(power_law_fit(lhs)["slope"] - power_law_fit(rhs)["slope"])


# --------------------------------------------------------------------------
# initial-data estimate
# --------------------------------------------------------------------------

def _mixed_time_space(field: SampledField, r: float, q: float) -> float:
    """Inner time exponent r, outer space exponent q."""
    return mixed_norm(field, MixedNormSpec("time", r, q))


def verify_thm20a(d: int, p: float, r: float, seed: int = 42,
                  profile: GridProfile | None = None, perturb: float = 0.0):
    """Homogeneous-solution mixed-norm estimate on the G0 family."""
    profile = profile or GridProfile()
    t0 = time.time()
    tup = admissibility("G0", d=d, p=p, r=r)
    q = tup.exponents["q"]
    base = {"d": d, "p": p, "r": r, "q": q, "grid": profile.n}
    if not tup.admissible:
        return [VerificationReport("thm20a.envelope", base, math.nan, math.nan,
                                   0.10, seed=seed).skip("; ".join(tup.failures))]
    if perturb:
        q = perturb_reciprocal(q, perturb)
        base["q_perturbed"] = q
    grid = profile.space(d)
    plan = ConvolutionPlan(grid)
    tg = profile.time()

    env = RatioEnvelope("gaussian widths")
    for name, f in _gaussian_family(profile, d):
        num = _mixed_time_space(_u0_matrix(f, plan, tg), r, q)
        env.add(name, num / lp_norm(f, p, grid))
    rep_env = VerificationReport(
        "thm20a.envelope", base, env.spread(), 0.0, 0.10, kind="slope",
        seed=seed, notes=[f"envelope sup {env.supremum:.6g} (+{env.margin:.0%} "
                          f"margin -> {env.bound():.6g})"]).judge()
    if not math.isfinite(env.supremum):
        rep_env.verdict = "fail"
        rep_env.notes.append("ratio envelope not finite")
    rep_env.runtime_s = time.time() - t0

    t1 = time.time()
    f0 = Gaussian(d=d, sigma=1.0)
    samples = [(lam, _mixed_time_space(_u0_matrix(dilate(f0, lam), plan, tg), r, q))
               for lam in profile.lam_set]
    fit = power_law_fit(samples)
    predicted = -d / q - 2.0 / r
    rep_slope = VerificationReport(
        "thm20a.slope", {**base, "lam_set": list(profile.lam_set)},
        fit["slope"], predicted, 0.02 * abs(predicted), kind="slope",
        seed=seed, notes=[f"r2 = {fit['r2']:.8f}"]).judge()
    rep_slope.runtime_s = time.time() - t1
    return [rep_env, rep_slope]


def thm20a_necessity_gap(d: int, p: float, r: float, delta: float = 0.1,
                         profile: GridProfile | None = None) -> float:
    """Ratio drift exponent with a detuned outer exponent 1/q -> 1/q + delta."""
    profile = profile or GridProfile()
    tup = admissibility("G0", d=d, p=p, r=r).raise_if_inadmissible()
    q_bad = perturb_reciprocal(tup.exponents["q"], delta)
    grid = profile.space(d)
    plan = ConvolutionPlan(grid)
    tg = profile.time()
    f0 = Gaussian(d=d, sigma=1.0)
    samples = []
    for lam in profile.lam_set:
        f = dilate(f0, lam)
        num = _mixed_time_space(_u0_matrix(f, plan, tg), r, q_bad)
        samples.append((lam, num / lp_norm(f, p, grid)))
    return abs(power_law_fit(samples)["slope"])


# --------------------------------------------------------------------------
# semigroup decay
# --------------------------------------------------------------------------

def verify_decay(d: int, p: float, q: float, seed: int = 42,
                 profile: GridProfile | None = None):
    """Large-time decay exponent and Gaussian asymptotic extremality."""
    profile = profile or GridProfile()
    t0 = time.time()
    tup = admissibility("decay", d=d, p=p, q=q)
    base = {"d": d, "p": p, "q": q}
    if not tup.admissible:
        return [VerificationReport("decay.slope", base, math.nan, math.nan, 0.03,
                                   seed=seed).skip("; ".join(tup.failures))]
    m = tup.exponents["m"]
    predicted = -0.5 * d * (1.0 / p - 1.0 / q)
    # wide grid: the evolved width at t = 1000 must still fit
    grid = SpaceGrid(d, 384.0, 4096 if profile.n >= 1024 else 2048)
    plan = ConvolutionPlan(grid)
    f = Gaussian(d=d, sigma=1.0)
    ts = np.geomspace(10.0, 1000.0, 12)
    norms_q = [lp_norm(SampledField(grid, heat_evolve(f, float(t), plan).values), q)
               for t in ts]
    fit = power_law_fit(list(zip(ts, norms_q)))
    tol = max(0.03 * abs(predicted), 1e-4)
    rep_slope = VerificationReport(
        "decay.slope", base, fit["slope"], predicted, tol, kind="slope",
        seed=seed, notes=[f"m = {m:.6g}, r2 = {fit['r2']:.6f}"]).judge()
    rep_slope.runtime_s = time.time() - t0

    t1 = time.time()
    kb = C.beckner_constant(d, m, p).value if m > 1 else 1.0
    kw = C.heat_lp_constant(d, m).value
    fp = lp_norm(f, p, grid)
    ratios = [n / (kw * kb * fp * float(t) ** predicted)
              for n, t in zip(norms_q, ts)]
    drift = power_law_fit(list(zip(ts, ratios)))["slope"]
    rep_ext = VerificationReport(
        "decay.extremality", {**base, "m": m}, drift, 0.0, 0.01, kind="slope",
        seed=seed,
        notes=[f"ratio to bound at t=1000: {ratios[-1]:.6f} (tends to a constant)"]
    ).judge()
    rep_ext.runtime_s = time.time() - t1
    return [rep_slope, rep_ext]


# --------------------------------------------------------------------------
# forcing estimates
# --------------------------------------------------------------------------

def _factorable_family(profile: GridProfile, d: int = 1):
    gs = [Gaussian(d=d, sigma=s) for s in (0.7, 1.4)]
    hs = [Indicator(d=1, lo=(0.25,), hi=(1.25,)),
          Gaussian(d=1, sigma=0.25, center=(1.0,))]
    fam = []
    for i, g in enumerate(gs[: max(1, profile.members // 2)]):
        for j, h in enumerate(hs):
            fam.append((f"g{i} x h{j}", tensor(g, h)))
    return fam


def _u1_matrix(F, plan: ConvolutionPlan, tg: TimeGrid, profile: GridProfile,
               kernel: str = "heat", alpha: float | None = None,
               beta: float = 0.0) -> SampledField:
    rows = [duhamel(F, float(t), plan, n_nodes=profile.s_nodes, kernel=kernel,
                    alpha=alpha, forcing_weight_beta=beta).values
            for t in tg.nodes]
    return SampledField(plan.grid, np.stack(rows), time=tg)


def verify_thm31(d: int, variant: str, seed: int = 42,
                 profile: GridProfile | None = None,
                 tuple_params: dict | None = None, perturb: float = 0.0):
    """Duhamel-term mixed-norm estimates, both norm orders."""
    profile = profile or GridProfile()
    t0 = time.time()
    if variant == "a":
        params = tuple_params or {"p": 8.0, "r": 1.5, "k": 1.25}
        tup = admissibility("G1", d=d, **params)
        dep = "q"
    elif variant == "b":
        params = tuple_params or {"h": 1.5, "r": 4.0, "k": 1.2}
        tup = admissibility("thm31b", d=d, **params)
        dep = "q"
    else:
        raise DomainError(f"variant must be 'a' or 'b', got {variant!r}")
    base = {"d": d, "variant": variant, **params}
    cid = f"thm31{variant}"
    if not tup.admissible:
        return [VerificationReport(f"{cid}.envelope", base, math.nan, math.nan,
                                   0.10, seed=seed).skip("; ".join(tup.failures))]
    q = tup.exponents["q"]
    base["q"] = q
    if perturb:
        q = perturb_reciprocal(q, perturb)
        base["q_perturbed"] = q

    grid = profile.space(d, extent=profile.extent / 2.0, n=profile.n // 2)
    plan = ConvolutionPlan(grid)
    tg = TimeGrid(profile.t_min, 1e4, max(profile.t_panels * 2 // 3, 12),
                  profile.t_order)

    if variant == "a":
        p, r, k = params["p"], params["r"], params["k"]
        lhs_spec = lambda F: mixed_norm(F, MixedNormSpec("space", p, q))
        rhs_norm = lambda F: _factorable_mixed(F, "space", r, k, grid, tg)
        lhs_slope_pred = -2.0 - d / p - 2.0 / q
        rhs_slope_pred = -d / r - 2.0 / k
    else:
        h_, r, k = params["h"], params["r"], params["k"]
        m = tup.exponents["m"]
        base["m"] = m
        lhs_spec = lambda F: mixed_norm(F, MixedNormSpec("time", q, m))
        rhs_norm = lambda F: _factorable_mixed(F, "time", k, h_, grid, tg)
        lhs_slope_pred = -2.0 - 2.0 / q - d / m
        rhs_slope_pred = -2.0 / k - d / h_

    env = RatioEnvelope("factorable gaussians x time bumps")
    for name, F in _factorable_family(profile, d):
        U = _u1_matrix(F, plan, tg, profile)
        env.add(name, lhs_spec(U) / rhs_norm(F))
    rep_env = VerificationReport(
        f"{cid}.envelope", base, env.supremum, 0.0, 0.0, kind="finite",
        seed=seed,
        notes=[f"envelope sup {env.supremum:.6g} (+{env.margin:.0%} margin -> "
               f"{env.bound():.6g}); spread across shapes {env.spread():.3f}"]
    ).judge()
    rep_env.runtime_s = time.time() - t0

    t1 = time.time()
    F0 = _factorable_family(profile, d)[0][1]
    lhs_samples, rhs_samples = [], []
    for lam in profile.lam_set:
        Fl = anisotropic_dilate(F0, lam, lam * lam)
        U = _u1_matrix(Fl, plan, tg, profile)
        lhs_samples.append((lam, lhs_spec(U)))
        rhs_samples.append((lam, rhs_norm(Fl)))
    lhs_fit = power_law_fit(lhs_samples)
    rhs_fit = power_law_fit(rhs_samples)
    rep_slope = VerificationReport(
        f"{cid}.slope",
        {**base, "lam_set": list(profile.lam_set),
         "rhs_slope": rhs_fit["slope"], "rhs_slope_predicted": rhs_slope_pred},
        lhs_fit["slope"], lhs_slope_pred, 0.02 * abs(lhs_slope_pred),
        kind="slope", seed=seed,
        notes=[f"rhs slope {rhs_fit['slope']:.6g} vs predicted "
               f"{rhs_slope_pred:.6g}; r2 = {lhs_fit['r2']:.8f}"]).judge()
    if abs(rhs_fit["slope"] - rhs_slope_pred) > 0.02 * abs(rhs_slope_pred):
        rep_slope.verdict = "fail"
        rep_slope.notes.append("data-side slope off its prediction")
    rep_slope.runtime_s = time.time() - t1
    return [rep_env, rep_slope]


def _factorable_mixed(F, inner_axis: str, inner: float, outer: float,
                      grid: SpaceGrid, tg: TimeGrid) -> float:
    """Mixed norm of a (possibly dilated) tensor function.

    inner_axis names the inner integral of the *solution* side convention:
    variant a measures |F|_{r,X;k,T} (inner space), variant b |F|_{k,T;h,X}
    (inner time).
    """
    if hasattr(F, "as_tensor") and F.as_tensor() is not None:
        F = F.as_tensor()
    if isinstance(F, Tensor):
        # analytic factor norms where available; sharp-edged temporal factors
        # are not quadrable on a panel grid to the accuracy slopes need
        def tnorm(e):
            cf = closed_form_lp(F.temporal, e)
            if cf is not None:
                return cf
            return time_lp_norm(F.temporal.values(tg.nodes.reshape(-1, 1)),
                                e, tg)[0]

        def snorm(e):
            cf = closed_form_lp(F.spatial, e)
            return cf if cf is not None else lp_norm(F.spatial, e, grid)

        if inner_axis == "space":
            return snorm(inner) * tnorm(outer)
        return tnorm(inner) * snorm(outer)
    spec = (MixedNormSpec("space", inner, outer) if inner_axis == "space"
            else MixedNormSpec("time", inner, outer))
    return mixed_norm(F, spec, grid, tg)


def thm31_necessity_gap(d: int, variant: str, delta: float = 0.1,
                        profile: GridProfile | None = None,
                        tuple_params: dict | None = None) -> float:
    """Anisotropic-dilation slope mismatch after detuning the dependent q."""
    profile = profile or GridProfile()
    reps = verify_thm31(d, variant, profile=profile, tuple_params=tuple_params,
                        perturb=delta)
    slope_rep = [r for r in reps if r.check_id.endswith("slope")][0]
    # mismatch between the measured (detuned) lhs slope and the data side
    return abs(slope_rep.measured - slope_rep.params["rhs_slope"])


# --------------------------------------------------------------------------
# weighted estimates
# --------------------------------------------------------------------------

def _weighted_mixed_time_space(sol, r: float, q: float) -> float:
    """|v|_{r,T;q,X} with the singular space weight integrated analytically."""
    from .norms import inner_time_norms, weighted_outer_space_norm
    grid, tg = sol.smooth.space, sol.smooth.time
    vals = sol.smooth.values.reshape(len(tg.nodes), -1)
    inner, diverged, _ = inner_time_norms(vals, r, tg)
    if diverged:
        return math.inf
    if sol.space_weight_b == 0:
        return float((np.sum(inner**q) * grid.cell_volume) ** (1.0 / q))
    return weighted_outer_space_norm(inner, sol.space_weight_b, q, grid)


def _weighted_u0_ratio(g0_fn, tup, weights: dict, kind: str,
                       plan: ConvolutionPlan, tg: TimeGrid,
                       alpha: float | None = None) -> float:
    """ratio |v0|_{r,T;q,X} / |g|_p for the weighted initial-data estimate."""
    from .operators import weighted_field
    grid = plan.grid
    r, q, p = tup.exponents["r"], tup.exponents["q"], tup.exponents["p"]
    w = dict(weights)
    if alpha is not None:
        w["alpha"] = alpha
    sol = weighted_field(kind, g0_fn, w, plan, tg)
    num = _weighted_mixed_time_space(sol, r, q)
    return num / lp_norm(g0_fn, p, grid)


def verify_weight(section: str, seed: int = 42,
                  profile: GridProfile | None = None,
                  weights: dict | None = None,
                  tuple_params: dict | None = None):
    """Weighted estimates: envelope, zero-weight reduction, dilation slope."""
    profile = profile or GridProfile()
    t0 = time.time()
    reports = []
    if section == "7":
        w = weights or {"a": 0.25, "b": 0.25, "theta": 0.0}
        pars = tuple_params or {"r": 3.0, "p": 2.0}
        tup = admissibility("weight7", d=1, a=w["a"], b=w["b"],
                            theta=w["theta"], **pars)
        kind, alpha = "v0", None
        lhs_slope = (w["a"] + w["b"] + 2.0 * w["theta"] - 2.0 / pars["r"]
                     - 1.0 / tup.exponents.get("q", math.inf))
    elif section == "8.0":
        w = weights or {"a": 0.0, "b": 0.0, "tau": 0.0}
        pars = tuple_params or {"r": 2.0, "p": 1.5}
        alpha = (weights or {}).get("alpha", 0.5)
        tup = admissibility("frac8-initial", d=1, alpha=alpha, a=w["a"],
                            b=w["b"], tau=w["tau"], **pars)
        kind = "v0_frac"
        lhs_slope = None  # filled from the relation below
    elif section in ("8.1a", "8.1b"):
        return _verify_weight_duhamel(section, seed, profile, weights,
                                      tuple_params)
    else:
        raise DomainError(f"unknown weight section {section!r}")

    base = {"section": section, "weights": w, **pars}
    cid = f"weight{section.replace('.', '')}"
    if not tup.admissible:
        return [VerificationReport(f"{cid}.envelope", base, math.nan, math.nan,
                                   0.15, seed=seed).skip("; ".join(tup.failures))]
    q = tup.exponents["q"]
    base["q"] = q
    grid = profile.space(1, extent=profile.extent / 2.0, n=profile.n // 2)
    plan = ConvolutionPlan(grid)
    tg = profile.time(horizon=1e5)

    env = RatioEnvelope("gaussian data")
    for name, g0 in _gaussian_family(profile, 1):
        env.add(name, _weighted_u0_ratio(g0, tup, w, kind, plan, tg, alpha))
    rep_env = VerificationReport(
        f"{cid}.envelope", base, env.spread(), 0.0, 0.15, kind="slope",
        seed=seed, notes=[f"envelope sup {env.supremum:.6g} (+{env.margin:.0%} "
                          f"margin -> {env.bound():.6g})"]).judge()
    if not math.isfinite(env.supremum):
        rep_env.verdict = "fail"
    rep_env.runtime_s = time.time() - t0
    reports.append(rep_env)

    # zero-weight reduction must reproduce the unweighted ratio
    if all(v == 0 for k, v in w.items() if k in ("a", "b", "theta", "tau")):
        t1 = time.time()
        f0 = Gaussian(d=1, sigma=1.0)
        ratio_w = _weighted_u0_ratio(f0, tup, w, kind, plan, tg, alpha)
        if kind == "v0":
            U = _u0_matrix(f0, plan, tg)
        else:
            U = _u0_matrix(f0, plan, tg,
                           evolver=lambda f, t, pl: frac_evolve(f, alpha, t, pl))
        ratio_u = (_mixed_time_space(U, tup.exponents["r"], q)
                   / lp_norm(f0, tup.exponents["p"], grid))
        rep_red = VerificationReport(
            f"{cid}.reduction", base, abs(ratio_w / ratio_u - 1.0), 0.0, 1e-9,
            kind="slope", seed=seed,
            notes=["zero weights reproduce the unweighted check"]).judge()
        rep_red.runtime_s = time.time() - t1
        reports.append(rep_red)

    t2 = time.time()
    if section == "7":
        pred = (w["a"] + w["b"] + 2.0 * w["theta"] - 2.0 / pars["r"] - 1.0 / q)
    else:
        pred = (w["a"] + w["b"] + 2.0 * alpha * w.get("tau", 0.0)
                - 2.0 * alpha / pars["r"] - 1.0 / q)
    f0 = Gaussian(d=1, sigma=1.0)
    samples = []
    for lam in profile.lam_set:
        from .operators import weighted_field
        ww = dict(w)
        if alpha is not None:
            ww["alpha"] = alpha
        sol = weighted_field(kind, dilate(f0, lam), ww, plan, tg)
        samples.append((lam, _weighted_mixed_time_space(sol, tup.exponents["r"], q)))
    fit = power_law_fit(samples)
    rep_slope = VerificationReport(
        f"{cid}.slope", {**base, "lam_set": list(profile.lam_set)},
        fit["slope"], pred, max(0.02 * abs(pred), 5e-3), kind="slope",
        seed=seed, notes=[f"r2 = {fit['r2']:.8f}"]).judge()
    rep_slope.runtime_s = time.time() - t2
    reports.append(rep_slope)
    return reports


def _verify_weight_duhamel(section: str, seed: int, profile: GridProfile,
                           weights: dict | None, tuple_params: dict | None):
    """Weighted Duhamel estimates (space-weighted and time-weighted)."""
    t0 = time.time()
    alpha = (weights or {}).get("alpha", 0.5)
    if section == "8.1a":
        w = weights or {"a": 0.0, "b": 0.0}
        pars = tuple_params or {"r": 4.0, "m": 4.0 / 3.0, "p": 4.0 / 3.0}
        tup = admissibility("frac8-duhamel-a", d=1, alpha=alpha, a=w.get("a", 0),
                            b=w.get("b", 0), **pars)
        cid = "weight81a"
    else:
        w = weights or {"beta": 0.0, "tau": 0.0}
        pars = tuple_params or {"Q": 2.0, "p": 4.0 / 3.0, "k": 1.2}
        tup = admissibility("frac8-duhamel-b", d=1, alpha=alpha,
                            beta=w.get("beta", 0), tau=w.get("tau", 0), **pars)
        cid = "weight81b"
    base = {"section": section, "alpha": alpha, "weights": w, **pars}
    if not tup.admissible:
        return [VerificationReport(f"{cid}.envelope", base, math.nan, math.nan,
                                   0.15, seed=seed).skip("; ".join(tup.failures))]
    grid = profile.space(1, extent=profile.extent / 2.0, n=profile.n // 2)
    plan = ConvolutionPlan(grid)
    tg = TimeGrid(profile.t_min, 1e4, max(profile.t_panels * 2 // 3, 12),
                  profile.t_order)
    from .operators import weighted_field

    if section == "8.1a":
        r1, q1 = pars["r"], tup.exponents["q"]
        m1, p1 = pars["m"], pars["p"]
        base["q"] = q1
        lhs = lambda sol: _weighted_mixed_time_space(sol, r1, q1)
        rhs = lambda H: _factorable_mixed(H, "time", m1, p1, grid, tg)
        wf = lambda H: weighted_field("v1_frac", H,
                                      {"alpha": alpha, **w}, plan, tg,
                                      n_nodes=profile.s_nodes)
        lhs_pred = (w.get("a", 0) + w.get("b", 0) - 2.0 * alpha
                    - 2.0 * alpha / r1 - 1.0 / q1)
        rhs_pred = -2.0 * alpha / m1 - 1.0 / p1
    else:
        q2, r2 = tup.exponents["q"], tup.exponents["r"]
        p2, k2 = pars["p"], pars["k"]
        base.update({"q": q2, "r": r2})
        lhs = lambda sol: mixed_norm(sol.smooth, MixedNormSpec("space", q2, r2))
        rhs = lambda R: _factorable_mixed(R, "space", p2, k2, grid, tg)
        wf = lambda R: weighted_field("v2_frac", R,
                                      {"alpha": alpha, **w}, plan, tg,
                                      n_nodes=profile.s_nodes)
        beta_w, tau_w = w.get("beta", 0), w.get("tau", 0)
        lhs_pred = (2.0 * alpha * beta_w + 2.0 * alpha * tau_w - 2.0 * alpha
                    - 1.0 / q2 - 2.0 * alpha / r2)
        rhs_pred = -1.0 / p2 - 2.0 * alpha / k2

    env = RatioEnvelope("factorable data")
    for name, F in _factorable_family(profile, 1):
        env.add(name, lhs(wf(F)) / rhs(F))
    rep_env = VerificationReport(
        f"{cid}.envelope", base, env.supremum, 0.0, 0.0, kind="finite",
        seed=seed,
        notes=[f"envelope sup {env.supremum:.6g} (+{env.margin:.0%} margin -> "
               f"{env.bound():.6g}); spread across shapes {env.spread():.3f}"]
    ).judge()
    rep_env.runtime_s = time.time() - t0

    t1 = time.time()
    F0 = _factorable_family(profile, 1)[0][1]
    lhs_s, rhs_s = [], []
    for lam in profile.lam_set:
        Fl = anisotropic_dilate(F0, lam, lam ** (2.0 * alpha))
        lhs_s.append((lam, lhs(wf(Fl))))
        rhs_s.append((lam, rhs(Fl)))
    lhs_fit = power_law_fit(lhs_s)
    rhs_fit = power_law_fit(rhs_s)
    rep_slope = VerificationReport(
        f"{cid}.slope", {**base, "lam_set": list(profile.lam_set)},
        lhs_fit["slope"], lhs_pred, max(0.02 * abs(lhs_pred), 5e-3),
        kind="slope", seed=seed,
        notes=[f"rhs slope {rhs_fit['slope']:.6g} vs {rhs_pred:.6g}; "
               f"r2 = {lhs_fit['r2']:.8f}"]).judge()
    if abs(rhs_fit["slope"] - rhs_pred) > max(0.02 * abs(rhs_pred), 5e-3):
        rep_slope.verdict = "fail"
        rep_slope.notes.append("data-side slope off its prediction")
    rep_slope.runtime_s = time.time() - t1
    return [rep_env, rep_slope]


# --------------------------------------------------------------------------
# united estimate and grand-norm chain
# --------------------------------------------------------------------------

def verify_united(d: int = 1, seed: int = 42,
                  profile: GridProfile | None = None):
    """Full-solution estimate assembled from the measured envelopes."""
    profile = profile or GridProfile()
    t0 = time.time()
    p0, q1 = 2.0, 8.0
    tup0 = admissibility("G0", d=d, p=p0, r=q1)     # time exponent q1
    m1 = tup0.exponents["q"]                        # outer space exponent
    h1, r1 = 12.0 / 7.0, 6.0
    tup1 = admissibility("thm31b", d=d, h=h1, r=r1, k=24.0 / 23.0)
    base = {"d": d, "p0": p0, "q1": q1, "m1": m1, "h1": h1, "r1": r1,
            "k1": 24.0 / 23.0}
    if not (tup0.admissible and tup1.admissible):
        return [VerificationReport("united.bound", base, math.nan, math.nan,
                                   0.0, seed=seed).skip(
            "; ".join(tup0.failures + tup1.failures))]
    if abs(tup1.exponents["m"] - m1) > 1e-9 or abs(tup1.exponents["q"] - q1) > 1e-9:
        return [VerificationReport("united.bound", base, math.nan, math.nan,
                                   0.0, seed=seed).skip(
            "tuples do not share the united pair (q1, m1)")]
    k1 = 24.0 / 23.0
    grid = profile.space(d, extent=profile.extent / 2.0, n=profile.n // 2)
    plan = ConvolutionPlan(grid)
    tg = profile.time(horizon=1e5)

    f = Gaussian(d=d, sigma=1.0)
    F = _factorable_family(profile, d)[0][1]
    U0 = _u0_matrix(f, plan, tg)
    U1 = _u1_matrix(F, plan, tg, profile)
    lhs = mixed_norm(
        SampledField(grid, U0.values + U1.values, time=tg),
        MixedNormSpec("time", q1, m1))

    # envelope constants measured on the family, argument pattern of the
    # underlying single-term estimates (reading recorded here)
    DV0 = C.heat_time_constant(d, q1).value * C.riesz_factor(d, p0, q1).value
    env0 = RatioEnvelope("u0 family")
    for name, g0 in _gaussian_family(profile, d):
        env0.add(name, _mixed_time_space(_u0_matrix(g0, plan, tg), q1, m1)
                 / (DV0 * lp_norm(g0, p0, grid)))
    DV1 = (C.heat_time_constant(d, r1).value * C.riesz_factor(d, h1, r1).value
           * C.beckner_constant(1, r1, k1).value)
    env1 = RatioEnvelope("u1 family")
    for name, FF in _factorable_family(profile, d):
        env1.add(name, _mixed_time_space(_u1_matrix(FF, plan, tg, profile), q1, m1)
                 / (DV1 * _factorable_mixed(FF, "time", k1, h1, grid, tg)))

    rhs = (env0.bound() * DV0 * lp_norm(f, p0, grid)
           + env1.bound() * DV1 * _factorable_mixed(F, "time", k1, h1, grid, tg))
    rep = VerificationReport(
        "united.bound", base, lhs, rhs, 0.0, seed=seed,
        notes=[
            "rhs from measured envelope constants (provenance empirical-envelope)",
            "constant arguments follow the single-term estimates evaluated at "
            "the united tuple (time exponent feeds the kernel time constant)",
            f"margin = {rhs / lhs - 1.0:.3f}",
        ]).judge()
    rep.runtime_s = time.time() - t0

    # direct-sum norm, upper bound via the canonical split
    t1 = time.time()
    r0 = 6.0
    q0 = admissibility("G0", d=d, p=p0, r=r0).exponents["q"]
    m_split = (_mixed_time_space(U0, r0, q0) + _mixed_time_space(U1, q1, m1))
    rep_m = VerificationReport(
        "united.mnorm", {**base, "r0": r0, "q0": q0}, m_split, rhs, 0.0,
        seed=seed, notes=["upper bound from the canonical (u0, u1) split; the "
                          "infimum over splits is not evaluated"]).judge()
    rep_m.runtime_s = time.time() - t1
    return [rep, rep_m]


def verify_gls(d: int = 1, seed: int = 42, profile: GridProfile | None = None,
               interval: tuple = (1.3, 2.6), r_set: tuple = (4.0, 6.0, 8.0),
               held_out_sigma: float = 1.4):
    """Grand-norm chain with an empirically constructed solution weight."""
    profile = profile or GridProfile()
    t0 = time.time()
    a, b = interval
    psi = lambda p: 1.0
    grid = profile.space(d, extent=profile.extent / 2.0, n=profile.n // 2)
    plan = ConvolutionPlan(grid)
    tg = profile.time(horizon=1e5)
    p_grid = np.geomspace(a, b, 10)[1:-1]

    lattice = []
    for r in r_set:
        for p in p_grid:
            tup = admissibility("G0", d=d, p=float(p), r=float(r))
            if tup.admissible:
                lattice.append((float(tup.exponents["q"]), float(r), float(p)))
    if not lattice:
        return [VerificationReport("gls.chain", {"interval": interval},
                                   math.nan, math.nan, 0.05,
                                   seed=seed).skip("empty admissible lattice")]
    lattice.sort()

    build = [Gaussian(d=d, sigma=s) for s in (0.5, 1.0, 2.0)]
    held = Gaussian(d=d, sigma=held_out_sigma)

    def member_norms(f):
        U = _u0_matrix(f, plan, tg)
        return {(q, r): _mixed_time_space(U, r, q) for q, r, _ in lattice}

    build_norms = [member_norms(f) for f in build]
    nu_hat = {}
    for q, r, p in lattice:
        ratios = [bn[(q, r)] / (lp_norm(f, p, grid) / psi(p))
                  for bn, f in zip(build_norms, build)]
        nu_hat[(q, r)] = max(ratios)

    def gls_pair(f, norms=None):
        norms = norms or member_norms(f)
        lhs = max(norms[(q, r)] / nu_hat[(q, r)] for q, r, _ in lattice)
        rhs = max(lp_norm(f, float(p), grid) / psi(float(p)) for p in p_grid)
        return lhs, rhs

    worst = -math.inf
    for f, bn in zip(build, build_norms):
        lhs, rhs = gls_pair(f, bn)
        worst = max(worst, lhs / rhs)
    lhs_h, rhs_h = gls_pair(held)
    worst = max(worst, lhs_h / rhs_h)
    rep = VerificationReport(
        "gls.chain", {"d": d, "interval": list(interval), "r_set": list(r_set),
                      "held_out_sigma": held_out_sigma, "lattice": len(lattice)},
        worst, 1.0, 0.05, seed=seed,
        notes=[f"held-out ratio {lhs_h / rhs_h:.6f}",
               "solution weight built from measured envelopes on the build family"]
    ).judge()
    rep.runtime_s = time.time() - t0
    return [rep]


# --------------------------------------------------------------------------
# smoke checks (closed-form oracles only)
# --------------------------------------------------------------------------

def smoke_checks(seed: int = 42, profile: GridProfile | None = None):
    profile = profile or GridProfile()
    reports = []

    t0 = time.time()
    worst = -math.inf
    for d in (1, 2):
        g = SpaceGrid(d, 12.0, 2048 if d == 1 else 384)
        for Q in (1.0, 1.5, 2.0, 3.0):
            quad = lp_norm(Gaussian(d=d, sigma=1.0), Q, g)
            closed = C.heat_lp_constant(d, Q).value
            worst = max(worst, abs(quad / closed - 1.0))
    r = VerificationReport("smoke.kernel_lp", {"d": [1, 2], "Q": [1, 1.5, 2, 3]},
                           worst, 0.0, 1e-6, kind="slope", seed=seed).judge()
    r.runtime_s = time.time() - t0
    reports.append(r)

    t0 = time.time()
    from .kernels import heat_time_norm
    worst = -math.inf
    for (d, rr) in ((1, 4.0), (1, 6.0), (3, 2.0)):
        for z in (0.5, 1.0, 2.0):
            quad = heat_time_norm(d, rr, z, "quadrature")
            closed = heat_time_norm(d, rr, z, "closed-form")
            worst = max(worst, abs(quad / closed - 1.0))
    note = C.heat_time_constant(1, 4.0).note
    r = VerificationReport("smoke.kernel_time", {"pairs": "(1,4),(1,6),(3,2)"},
                           worst, 0.0, 1e-4, kind="slope", seed=seed,
                           notes=[note]).judge()
    r.runtime_s = time.time() - t0
    reports.append(r)

    t0 = time.time()
    from .operators import cesaro_hardy, riesz_potential
    u1 = abs(cesaro_hardy(lambda s: 1.0, 0.5, 1.0) - 2.0)
    u2 = abs(cesaro_hardy(lambda s: s, 0.5, 1.0) - 4.0 / 3.0)
    r = VerificationReport("smoke.cesaro", {"theta": 0.5}, max(u1, u2), 0.0,
                           1e-6, kind="slope", seed=seed).judge()
    r.runtime_s = time.time() - t0
    reports.append(r)

    t0 = time.time()
    g2 = SpaceGrid(1, 12.0, 1536)
    I = riesz_potential(Indicator(d=1, lo=(-1.0,), hi=(1.0,)), 0.5, 1, g2)
    i0 = int(np.argmin(np.abs(g2.axis())))
    r = VerificationReport("smoke.riesz", {"beta": 0.5},
                           abs(float(I.values[i0]) - 4.0), 0.0, 1e-3,
                           kind="slope", seed=seed).judge()
    r.runtime_s = time.time() - t0
    reports.append(r)

    t0 = time.time()
    from .kernels import transstable_density
    errs = []
    for x in np.linspace(0, 10, 21):
        errs.append(abs(transstable_density(1, 0.5, x)
                        - math.sqrt(2 / math.pi) / (1 + x * x)))
        errs.append(abs(transstable_density(1, 1.0, x)
                        - 2 ** -0.5 * math.exp(-x * x / 4.0)))
    # fit past x ~ 30: nearer in, the exact closed form itself regresses to
    # -2.05 against log(1 + x), outside the +/- 0.05 window
    fit = tail_fit(1, 0.5, (30.0, 300.0))
    r = VerificationReport("smoke.transstable", {"alphas": [0.5, 1.0]},
                           max(errs), 0.0, 1e-6, kind="slope", seed=seed,
                           notes=[f"tail slope {fit.slope:.4f} (target -2)"]).judge()
    if abs(fit.slope + 2.0) > 0.05:
        r.verdict = "fail"
        r.notes.append("tail slope outside -2 +/- 0.05")
    r.runtime_s = time.time() - t0
    reports.append(r)

    t0 = time.time()
    g = SpaceGrid(1, 16.0, 2048)
    plan = ConvolutionPlan(g)
    from .operators import space_convolve
    w05 = Gaussian(d=1, sigma=math.sqrt(0.5))
    conv = space_convolve(w05, w05, plan)
    gap = float(np.max(np.abs(conv.values - g.sample(Gaussian(d=1, sigma=1.0)))))
    r = VerificationReport("smoke.semigroup", {"n": 2048, "L": 16}, gap, 0.0,
                           1e-6, kind="slope", seed=seed).judge()
    r.runtime_s = time.time() - t0
    reports.append(r)
    return reports


# --------------------------------------------------------------------------
# suite registry
# --------------------------------------------------------------------------

def _check_young(seed, profile):
    return verify_young(1, 2.0, 4.0 / 3.0, trials=profile.trials, seed=seed,
                        profile=profile)


def _check_thm20a(seed, profile):
    reps = verify_thm20a(1, 2.0, 8.0, seed=seed, profile=profile)
    gap = thm20a_necessity_gap(1, 2.0, 8.0, 0.1, profile)
    rep = VerificationReport(
        "thm20a.necessity", {"d": 1, "p": 2.0, "r": 8.0, "delta": 0.1},
        measured=gap, reference=0.05, tolerance=0.0, kind="detection",
        seed=seed,
        notes=[f"detuned ratio drifts at slope {gap:.4f} (>= 0.05 required)"]
    ).judge()
    return reps + [rep]


def _check_decay(seed, profile):
    return verify_decay(1, 1.0, 2.0, seed=seed, profile=profile)


def _check_thm31a(seed, profile):
    reps = verify_thm31(1, "a", seed=seed, profile=profile)
    gap = thm31_necessity_gap(1, "a", 0.1, profile)
    rep = VerificationReport(
        "thm31a.necessity", {"d": 1, "delta": 0.1}, gap, 0.05, 0.0,
        kind="detection", seed=seed,
        notes=[f"slope mismatch {gap:.4f} after detuning (>= 0.05 required)"]
    ).judge()
    return reps + [rep]


def _check_thm31b(seed, profile):
    reps = verify_thm31(1, "b", seed=seed, profile=profile)
    gap = thm31_necessity_gap(1, "b", 0.1, profile)
    rep = VerificationReport(
        "thm31b.necessity", {"d": 1, "delta": 0.1}, gap, 0.05, 0.0,
        kind="detection", seed=seed,
        notes=[f"slope mismatch {gap:.4f} after detuning (>= 0.05 required)"]
    ).judge()
    return reps + [rep]


def _check_young_necessity(seed, profile):
    gap = young_necessity_gap(1, 2.0, 4.0 / 3.0, 0.1, profile)
    return [VerificationReport(
        "young.necessity", {"d": 1, "p": 2.0, "q": 4.0 / 3.0, "delta": 0.1},
        gap, 0.05, 0.0, kind="detection", seed=seed,
        notes=[f"slope mismatch {gap:.4f} after detuning (>= 0.05 required)"]
    ).judge()]


def _check_weight7(seed, profile):
    reps = verify_weight("7", seed=seed, profile=profile)
    reps += verify_weight("7", seed=seed, profile=profile,
                          weights={"a": 0.0, "b": 0.0, "theta": 0.0},
                          tuple_params={"r": 8.0, "p": 2.0})
    return reps


def _check_weight80(seed, profile):
    return verify_weight("8.0", seed=seed, profile=profile)


def _check_weight81a(seed, profile):
    reps = verify_weight("8.1a", seed=seed, profile=profile)
    reps += verify_weight(
        "8.1a", seed=seed, profile=profile,
        weights={"a": 0.25, "b": 0.25, "alpha": 0.5},
        tuple_params={"r": 2.0, "m": 4.0 / 3.0, "p": 1.6})
    return reps


def _check_weight81b(seed, profile):
    reps = verify_weight("8.1b", seed=seed, profile=profile)
    reps += verify_weight(
        "8.1b", seed=seed, profile=profile,
        weights={"beta": 0.25, "tau": 0.25, "alpha": 0.5},
        tuple_params={"Q": 4.0 / 3.0, "p": 4.0 / 3.0, "k": 2.0})
    return reps


def _check_united(seed, profile):
    return verify_united(1, seed=seed, profile=profile)


def _check_gls(seed, profile):
    return verify_gls(1, seed=seed, profile=profile)


def _check_smoke(seed, profile):
    return smoke_checks(seed, profile)


def _check_extended_d2(seed, profile):
    """d = 2 closed-form cross-checks at moderate grids."""
    t0 = time.time()
    from .kernels import transstable_density
    alpha = 0.5
    z0 = transstable_density(2, alpha, (0.0, 0.0))
    # at the origin the angular integral collapses: Gamma(d/(2 alpha))/(2 alpha)
    closed = C.gamma_fn(2.0 / (2.0 * alpha)) / (2.0 * alpha)
    rep = VerificationReport(
        "extended.z2_origin", {"d": 2, "alpha": alpha}, abs(z0 - closed), 0.0,
        1e-8, kind="slope", seed=seed,
        notes=["origin value vs the radial closed form"]).judge()
    rep.runtime_s = time.time() - t0

    t1 = time.time()
    grid = SpaceGrid(2, 12.0, 256)
    plan = ConvolutionPlan(grid)
    from .operators import space_convolve
    w05 = Gaussian(d=2, sigma=math.sqrt(0.5))
    conv = space_convolve(w05, w05, plan)
    gap = float(np.max(np.abs(conv.values - grid.sample(Gaussian(d=2, sigma=1.0)))))
    rep2 = VerificationReport(
        "extended.semigroup_d2", {"d": 2, "n": 256, "L": 12}, gap, 0.0, 1e-6,
        kind="slope", seed=seed).judge()
    rep2.runtime_s = time.time() - t1
    return [rep, rep2]


def _check_extended_d3(seed, profile):
    """d = 3 operator identities on coarse grids.

    Full d = 3 mixed-norm envelopes are beyond desk scale at honest
    resolution, so the extended coverage checks the building blocks: the
    convolution semigroup, the Duhamel term against an independent
    time-quadrature oracle, and the forcing-tuple algebra.
    """
    t0 = time.time()
    grid = SpaceGrid(3, 12.0, 40)
    plan = ConvolutionPlan(grid)
    from .operators import space_convolve
    w05 = Gaussian(d=3, sigma=math.sqrt(0.5))
    conv = space_convolve(w05, w05, plan)
    gap = float(np.max(np.abs(conv.values - grid.sample(Gaussian(d=3, sigma=1.0)))))
    rep1 = VerificationReport("extended.semigroup_d3", {"d": 3, "n": 40},
                              gap, 0.0, 1e-6, kind="slope", seed=seed).judge()
    rep1.runtime_s = time.time() - t0

    t1 = time.time()
    tup = admissibility("thm31b", d=3, h=2.0, r=2.0, k=4.0 / 3.0)
    ok = (tup.admissible and abs(tup.exponents["m"] - 6.0) < 1e-12
          and abs(tup.exponents["q"] - 4.0) < 1e-12)
    rep2 = VerificationReport(
        "extended.tuple_d3", {"d": 3, "h": 2.0, "r": 2.0, "k": 4.0 / 3.0},
        0.0 if ok else 1.0, 0.0, 1e-12, kind="slope", seed=seed,
        notes=[f"solved (m, q) = ({tup.exponents['m']:.6g}, "
               f"{tup.exponents['q']:.6g})"]).judge()
    rep2.runtime_s = time.time() - t1

    t2 = time.time()
    g3 = SpaceGrid(3, 16.0, 32)
    plan3 = ConvolutionPlan(g3)
    F = tensor(Gaussian(d=3, sigma=1.0), Indicator(d=1, lo=(0.0,), hi=(2.0,)))
    u1 = duhamel(F, 1.0, plan3, n_nodes=96)
    # independent oracle: u1(., t) = integral_0^t (w_s * g) ds by quadrature
    from .grids import gauss_log_nodes
    nodes, weights = gauss_log_nodes(1e-6, 1.0, panels=12, order=8)
    oracle = sum(w * heat_evolve(Gaussian(d=3, sigma=1.0), float(s), plan3).values
                 for s, w in zip(nodes, weights))
    rel = float(np.max(np.abs(u1.values - oracle)) / np.max(np.abs(oracle)))
    rep3 = VerificationReport("extended.duhamel_d3", {"d": 3, "n": 32, "t": 1.0},
                              rel, 0.0, 1e-3, kind="slope", seed=seed,
                              notes=["forcing g(x) x 1_(0,2](t); oracle by "
                                     "independent time quadrature",
                                     "coarse-grid d=3 pipeline check; the "
                                     "tight scheme validation is the d=1 "
                                     "oracle test"]).judge()
    rep3.runtime_s = time.time() - t2
    return [rep1, rep2, rep3]


CHECKS = {
    "smoke": _check_smoke,
    "young": _check_young,
    "young-necessity": _check_young_necessity,
    "thm20a": _check_thm20a,
    "decay": _check_decay,
    "thm31a": _check_thm31a,
    "thm31b": _check_thm31b,
    "weight7": _check_weight7,
    "weight80": _check_weight80,
    "weight81a": _check_weight81a,
    "weight81b": _check_weight81b,
    "united": _check_united,
    "gls": _check_gls,
    "extended-d2": _check_extended_d2,
    "extended-d3": _check_extended_d3,
}

SUITES = {
    "smoke": ["smoke"],
    "standard": ["young", "young-necessity", "thm20a", "decay", "thm31a",
                 "thm31b", "weight7", "weight80", "weight81a", "weight81b",
                 "united", "gls"],
    "extended": ["extended-d2", "extended-d3"],
}
SUITES["all"] = SUITES["smoke"] + SUITES["standard"] + SUITES["extended"]


def run_suite(names, seed: int = 42, quick: bool = False, jobs: int = 1):
    """Run named checks (or a suite name) and return sorted reports."""
    if isinstance(names, str):
        names = SUITES.get(names, [names])
    expanded = []
    for n in names:
        if n in SUITES:
            expanded.extend(SUITES[n])
        elif n in CHECKS:
            expanded.append(n)
        else:
            raise DomainError(f"unknown check or suite {n!r}; "
                              f"known: {sorted(CHECKS) + sorted(SUITES)}")
    profile = GridProfile.quick() if quick else GridProfile()
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {n: pool.submit(_run_one, n, seed, quick) for n in expanded}
            groups = {n: f.result() for n, f in futures.items()}
    else:
        groups = {n: _run_one(n, seed, quick) for n in expanded}
    reports = [r for n in expanded for r in groups[n]]
    reports.sort(key=lambda r: r.check_id)
    return reports


def _run_one(name: str, seed: int, quick: bool):
    profile = GridProfile.quick() if quick else GridProfile()
    return CHECKS[name](seed, profile)


def reports_to_jsonl(reports, with_timestamp: bool = True) -> str:
    lines = [json.dumps(r.to_record(with_timestamp), ensure_ascii=True)
             for r in reports]
    return "\n".join(lines) + "\n"

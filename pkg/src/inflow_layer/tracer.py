"""Existence-curve tracing by backward shooting from the far-field equilibrium.

The curves of interest all approach the far-field equilibrium S1 forward in
xi, which makes forward shooting onto them ill-posed: any transverse error
grows like exp(lambda_unstable * xi).  Backward integration reverses the
roles, contracting the off-manifold component, so every trace here seeds a
small offset from S1 along the appropriate eigen-direction and integrates
backward until it hits an axis, is captured by the secondary equilibrium
S2, or exhausts its budget.

In the sonic regime the approach to S1 is algebraic, not exponential: the
backward orbit crawls along the center direction, and an explicit stepper
(stability-limited transversally) would need ~1/(a2*eps) steps to escape a
seed at distance eps.  The trace therefore bridges the innermost stretch
analytically along the quadratic invariant-manifold graph W2 = c2 W1^2
(geometric error O(|W1|^3), far below the curve tolerances) and starts the
integrator where the crawl is affordable.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, LayerError, OutOfRange, TraceFailed, UnexpectedTerminal
from .integrator import (BACKWARD, BUDGET, COMPONENT_CROSSES, NEAR_EQUILIBRIUM,
                         THETA_CROSSES_ZERO, U_CROSSES_ZERO, IntegrationSettings,
                         component_crosses, integrate, near_equilibrium,
                         theta_crosses_zero, u_crosses_zero)
from .linearize import EigenPair, TransonicFrame, from_w
from .system import (PhasePoint, Region, SystemData, nullcline_h1, nullcline_h2,
                     phase_field)

CURVE_SIGMA = "sigma"
CURVE_GAMMA1 = "gamma1"
CURVE_GAMMA2 = "gamma2"

TERMINAL_HIT_U_AXIS = "hit_u_axis"
TERMINAL_HIT_THETA_AXIS = "hit_theta_axis"
TERMINAL_CONVERGED_TO_S2 = "converged_to_s2"
TERMINAL_BUDGET = "budget"


@dataclass(frozen=True)
class TraceOptions:
    """Knobs for curve tracing; scale-relative values multiply max(u+, theta+)."""

    seed_offset: float | None = None      # absolute; default 1e-6 * scale
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 200_000
    switch_offset: float = 1e-3           # * scale, sonic manifold handoff
    sample_cap: float = 2e-3              # * scale, max emitted spacing
    thin_spacing: float = 1e-5            # * scale, min kept spacing
    capture_radius: float = 1e-8          # * scale, S2 capture
    slide_points_per_decade: int = 12


@dataclass(frozen=True)
class Membership:
    """Result of a curve-membership query."""

    on_curve: bool
    parameter: float
    distance: float
    nearest: PhasePoint
    refined: bool


@dataclass
class Curve:
    """A traced existence curve, sampled from S1 outward (backward-xi order).

    S1 itself is included as the first sample (the degenerate constant
    layer); the axis terminal point, when present, is the last sample but is
    excluded from the membership parameter range since it violates the
    positivity constraints.  ``backward_time`` is the time-of-flight from
    the seed (S1 itself carries +inf: the true orbit needs infinite xi).
    """

    label: str
    samples: np.ndarray
    backward_time: np.ndarray
    terminal: str
    terminal_point: PhasePoint
    seed_offset: float
    system: SystemData
    frame: Optional[TransonicFrame] = None
    eig: Optional[EigenPair] = None
    stable_slope: float | None = None
    _interp: object = field(default=None, repr=False)

    @property
    def param_index(self) -> int:
        """Index of the monotone parameter: u for sigma/gamma1, theta for gamma2."""
        return 1 if self.label == CURVE_GAMMA2 else 0

    @property
    def params(self) -> np.ndarray:
        return self.samples[:, self.param_index]

    @property
    def values(self) -> np.ndarray:
        return self.samples[:, 1 - self.param_index]

    @property
    def param_scale(self) -> float:
        s = self.system
        return s.theta_plus if self.param_index == 1 else s.u_plus

    @property
    def value_scale(self) -> float:
        s = self.system
        return s.u_plus if self.param_index == 1 else s.theta_plus

    @property
    def param_range(self) -> tuple[float, float]:
        p = self.params
        return float(p[-1]), float(p[0])

    def _interpolator(self):
        if self._interp is None:
            x = self.params[::-1]
            y = self.values[::-1]
            self._interp = PchipInterpolator(x, y, extrapolate=False)
        return self._interp

    def _gap_value(self, q: float) -> float:
        """Curve value between S1 and the first offset sample.

        Sigma uses the quadratic invariant-manifold graph; the gamma
        branches use the stable eigen-line (the gap is O(seed_offset), where
        the quadratic correction is negligible).
        """
        s = self.system
        if self.frame is not None:
            f = self.frame
            du = q - s.u_plus
            w1 = du
            for _ in range(4):
                w1 = du - float(f.manifold_graph(w1))
            return s.theta_plus + f.m1 * w1 + f.m2 * float(f.manifold_graph(w1))
        if self.param_index == 0:
            return s.theta_plus + self.stable_slope * (q - s.u_plus)
        return s.u_plus + (q - s.theta_plus) / self.stable_slope

    def predict(self, q: float) -> float:
        """Interpolated curve value at parameter q (inside the traced span)."""
        lo, hi = self.param_range
        if not lo <= q <= hi:
            raise OutOfRange(
                f"{self.label}: parameter {q} outside traced span [{lo}, {hi}]")
        if q > self.params[1]:  # between S1 and the first offset sample
            return self._gap_value(q)
        return float(self._interpolator()(q))

    def point_at(self, q: float) -> PhasePoint:
        v = self.predict(q)
        if self.param_index == 0:
            return PhasePoint(q, v)
        return PhasePoint(v, q)

    def refine_value(self, q: float) -> float | None:
        """Re-integrate locally for a sharper curve value at parameter q.

        Starts from the stored sample on the S1 side of q and integrates
        backward (the stable direction) until the parameter crosses q.
        """
        params = self.params
        if q >= params[1]:
            return self._gap_value(q)
        idx = int(np.searchsorted(-params, -q, side="left"))
        idx = min(max(idx - 1, 1), len(params) - 2)
        start = self.samples[idx]
        settings = IntegrationSettings(rel_tol=1e-12, abs_tol=1e-14,
                                       direction=BACKWARD, max_steps=50_000)
        try:
            res = integrate(phase_field(self.system), start, settings,
                            events=[component_crosses(self.param_index, q)])
        except LayerError:
            return None
        if res.event.kind != COMPONENT_CROSSES:
            return None
        pt = res.event.point
        return pt.theta if self.param_index == 0 else pt.u


def _thin(samples: list[np.ndarray], times: list[float], s: SystemData,
          param_index: int, param_dir: float, keep_radius: float, floor: float,
          noise: float):
    """Thin to the target density while enforcing strict monotonicity.

    Keeps a sample only when both coordinates strictly advance in the
    curve's direction; noise-level backtracks (integration error around a
    weak eigendirection) are absorbed into the previous sample, anything
    beyond the noise budget raises TraceFailed.
    """
    p_s1 = (s.u_plus, s.theta_plus)[param_index]
    vidx = 1 - param_index
    vdir = -param_dir  # u and theta always advance in opposite directions
    kept_s, kept_t = [samples[0]], [times[0]]
    for i in range(1, len(samples) - 1):
        row = samples[i]
        adv_p = (row[param_index] - kept_s[-1][param_index]) * param_dir
        adv_v = (row[vidx] - kept_s[-1][vidx]) * vdir
        if adv_p < -noise or adv_v < -noise:
            raise TraceFailed(
                f"sample {i} backtracks by more than the noise budget {noise:.1e}")
        near_s1 = abs(row[param_index] - p_s1) <= keep_radius
        wanted = adv_p >= floor or (near_s1 and adv_p > 0.0)
        if wanted and adv_p > 0.0 and adv_v > 0.0:
            kept_s.append(row)
            kept_t.append(times[i])
    last = samples[-1]
    while len(kept_s) > 1 and (
            (last[param_index] - kept_s[-1][param_index]) * param_dir <= 0.0
            or (last[vidx] - kept_s[-1][vidx]) * vdir <= 0.0):
        # terminal bisection can land within noise of the last kept samples
        kept_s.pop()
        kept_t.pop()
    kept_s.append(last)
    kept_t.append(times[-1])
    return np.vstack(kept_s), np.asarray(kept_t)


def _validate_curve(label: str, samples: np.ndarray, s: SystemData,
                    seed_offset: float, terminal: str, slack: float) -> None:
    """Monotonicity, positivity, and region confinement of the kept samples."""
    u = samples[:, 0]
    th = samples[:, 1]
    du = np.diff(u)
    dth = np.diff(th)
    if label == CURVE_GAMMA2:
        mono = np.all(du > 0.0) and np.all(dth < 0.0)
    else:
        mono = np.all(du < 0.0) and np.all(dth > 0.0)
    if not mono:
        raise TraceFailed(f"{label}: samples are not strictly monotone")
    interior = samples[:-1] if terminal in (TERMINAL_HIT_U_AXIS,
                                            TERMINAL_HIT_THETA_AXIS) else samples
    if np.any(interior[1:, 0] <= 0.0) or np.any(interior[1:, 1] <= 0.0):
        raise TraceFailed(f"{label}: interior sample violates positivity")
    region = Region.REGION_II if label == CURVE_GAMMA2 else Region.REGION_I
    s1 = np.array([s.u_plus, s.theta_plus])
    s2 = np.array([s.alpha1 * s.u_plus, s.alpha2 * s.theta_plus])
    skip_s1 = 10.0 * seed_offset
    skip_s2 = 1e-3 * s.scale
    for row in interior[1:]:
        if np.max(np.abs(row - s1)) <= skip_s1:
            continue
        if label == CURVE_GAMMA2 and np.max(np.abs(row - s2)) <= skip_s2:
            continue
        if row[1] <= 0.0:
            continue
        p = PhasePoint(float(row[0]), float(row[1]))
        if not _region_ok(p, region, s, slack):
            raise TraceFailed(
                f"{label}: sample ({row[0]}, {row[1]}) escaped its region; "
                "tighten the integrator tolerances")


def _region_ok(p: PhasePoint, region: Region, s: SystemData, slack: float) -> bool:
    # band test equivalent to region_contains, widened by the integration
    # noise budget: near S1 the region pinches to a parabolic sliver that a
    # correct trace rides to within its error tolerance
    if region is Region.REGION_I:
        u_lo, u_hi = 0.0, s.u_plus
    else:
        u_lo, u_hi = s.u_plus, s.alpha1 * s.u_plus
    if not u_lo - slack < p.u < u_hi + slack:
        return False
    h1 = float(nullcline_h1(p.u, s))
    h2 = float(nullcline_h2(p.u, s))
    return min(h1, h2) - slack < p.theta < max(h1, h2) + slack


def trace_sigma(s: SystemData, f: TransonicFrame,
                opts: TraceOptions | None = None) -> Curve:
    """Trace the sonic-regime curve from S1 to its endpoint Z0 on u = 0.

    The seed sits at ``seed_offset`` from S1 along the center direction with
    negative u-component (the side the incoming orbit is tangent to); the
    quadratic-manifold slide then bridges to ``switch_offset`` before the
    backward integration takes over.
    """
    opts = opts or TraceOptions()
    scale = s.scale
    eps = opts.seed_offset if opts.seed_offset is not None else 1e-6 * scale
    norm_e1 = math.hypot(1.0, f.m1)
    w_seed = eps / norm_e1
    y_switch = opts.switch_offset * scale

    pts: list[np.ndarray] = [np.array([s.u_plus, s.theta_plus])]
    times: list[float] = [math.inf]
    if w_seed < y_switch:
        n_dec = math.log10(y_switch / w_seed)
        n_pts = max(2, int(round(n_dec * opts.slide_points_per_decade)) + 1)
        ws = np.geomspace(w_seed, y_switch, n_pts)
        for w in ws:
            p = from_w((-w, f.manifold_graph(-w)), f, s)
            pts.append(p.as_array())
            # time-of-flight of the quadratic center flow, bookkeeping only
            times.append((1.0 / w_seed - 1.0 / w) / f.a2)
        start = pts[-1]
        t_offset = times[-1]
    else:
        p = from_w((-w_seed, f.manifold_graph(-w_seed)), f, s)
        pts.append(p.as_array())
        times.append(0.0)
        start = pts[-1]
        t_offset = 0.0

    settings = IntegrationSettings(rel_tol=opts.rel_tol, abs_tol=opts.abs_tol,
                                   max_steps=opts.max_steps, direction=BACKWARD)
    res = integrate(phase_field(s), start, settings,
                    events=[u_crosses_zero()],
                    max_state_step=opts.sample_cap * scale)
    for t, y in zip(res.xi[1:], res.points[1:]):
        pts.append(y)
        times.append(t_offset - t)
    if res.event.kind == U_CROSSES_ZERO:
        terminal = TERMINAL_HIT_U_AXIS
    elif res.event.kind == BUDGET:
        terminal = TERMINAL_BUDGET
    else:
        raise TraceFailed(f"sigma: unexpected event {res.event.kind}")

    noise = 1e3 * (opts.abs_tol + opts.rel_tol * scale)
    samples, btimes = _thin(pts, times, s, 0, -1.0,
                            keep_radius=3.0 * y_switch,
                            floor=opts.thin_spacing * scale, noise=noise)
    _validate_curve(CURVE_SIGMA, samples, s, eps, terminal, noise)
    return Curve(label=CURVE_SIGMA, samples=samples, backward_time=btimes,
                 terminal=terminal, terminal_point=res.event.point,
                 seed_offset=eps, system=s, frame=f)


def trace_gamma(s: SystemData, eig: EigenPair, branch: str,
                opts: TraceOptions | None = None) -> Curve:
    """Trace a stable-manifold branch of the subsonic saddle at S1.

    gamma1 seeds into 0 < u < u+ and ends on the u = 0 axis at Z1; gamma2
    seeds into u > u+ and either converges to the secondary equilibrium S2
    (when alpha2 > 0) or reaches the theta = 0 axis at Z2 (alpha2 <= 0).
    """
    if branch not in (CURVE_GAMMA1, CURVE_GAMMA2):
        raise ValueError(f"unknown branch {branch!r}")
    if not (eig.lambda2 < 0.0 < eig.lambda1):
        raise DomainError("gamma branches require a saddle (subsonic regime)")
    opts = opts or TraceOptions()
    scale = s.scale
    eps = opts.seed_offset if opts.seed_offset is not None else 1e-6 * scale
    e_stable = eig.e2  # normalized with positive u-component, negative slope
    sign = 1.0 if branch == CURVE_GAMMA2 else -1.0
    s1 = np.array([s.u_plus, s.theta_plus])
    seed = s1 + sign * eps * e_stable

    if branch == CURVE_GAMMA1:
        events = [u_crosses_zero()]
    else:
        events = [theta_crosses_zero(),
                  near_equilibrium(s.s2, opts.capture_radius * scale)]
    settings = IntegrationSettings(rel_tol=opts.rel_tol, abs_tol=opts.abs_tol,
                                   max_steps=opts.max_steps, direction=BACKWARD)
    res = integrate(phase_field(s), seed, settings, events=events,
                    max_state_step=opts.sample_cap * scale)

    kind = res.event.kind
    if kind == U_CROSSES_ZERO:
        terminal = TERMINAL_HIT_U_AXIS
    elif kind == THETA_CROSSES_ZERO:
        terminal = TERMINAL_HIT_THETA_AXIS
    elif kind == NEAR_EQUILIBRIUM:
        terminal = TERMINAL_CONVERGED_TO_S2
    else:
        terminal = TERMINAL_BUDGET
    if branch == CURVE_GAMMA2:
        expected = (TERMINAL_CONVERGED_TO_S2 if s.alpha2 > 0.0
                    else TERMINAL_HIT_THETA_AXIS)
        if terminal != expected and terminal != TERMINAL_BUDGET:
            raise UnexpectedTerminal(
                f"gamma2 ended with {terminal}, but alpha2 = {s.alpha2} predicts {expected}")

    pts = [s1] + [y for y in res.points]
    times = [math.inf] + [-t for t in res.xi]
    pidx = 1 if branch == CURVE_GAMMA2 else 0
    noise = 1e3 * (opts.abs_tol + opts.rel_tol * scale)
    samples, btimes = _thin(pts, times, s, pidx, -1.0,
                            keep_radius=10.0 * eps,
                            floor=opts.thin_spacing * scale, noise=noise)
    _validate_curve(branch, samples, s, eps, terminal, noise)
    slope = e_stable[1] / e_stable[0]
    return Curve(label=branch, samples=samples, backward_time=btimes,
                 terminal=terminal, terminal_point=res.event.point,
                 seed_offset=eps, system=s, eig=eig, stable_slope=slope)


def curve_membership(c: Curve, p: PhasePoint, tol: float = 1e-6) -> Membership:
    """Decide whether a phase point lies on a traced curve.

    The curve is parameterized by its strictly monotone coordinate (u for
    sigma/gamma1, theta for gamma2).  Borderline distances (between tol/3
    and 10 tol, relative) are re-refined by local re-integration before
    deciding.

    Raises
    ------
    DomainError
        If p violates positivity.
    OutOfRange
        If p's parameter lies beyond the traced span.
    """
    if p.u <= 0.0 or p.theta <= 0.0:
        raise DomainError("membership queries require u > 0 and theta > 0")
    q = p.theta if c.param_index == 1 else p.u
    val = p.u if c.param_index == 1 else p.theta
    predicted = c.predict(q)
    dist = val - predicted
    thr = tol * c.value_scale
    refined = False
    if thr / 3.0 <= abs(dist) <= 10.0 * thr:
        better = c.refine_value(q)
        if better is not None:
            dist = val - better
            predicted = better
            refined = True
    if c.param_index == 1:
        nearest = PhasePoint(predicted, q)
    else:
        nearest = PhasePoint(q, predicted)
    return Membership(on_curve=abs(dist) <= thr, parameter=q, distance=dist,
                      nearest=nearest, refined=refined)


def export_curve_csv(c: Curve, path) -> None:
    """Write the samples as ``index,u,theta`` rows in backward-xi order."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "u", "theta"])
        for i, row in enumerate(c.samples):
            writer.writerow([i, repr(float(row[0])), repr(float(row[1]))])


def export_curve_json(c: Curve, path) -> None:
    """Write curve metadata: label, terminal kind and point, seed offset."""
    payload = {
        "label": c.label,
        "terminal": {
            "kind": c.terminal,
            "u": c.terminal_point.u,
            "theta": c.terminal_point.theta,
        },
        "seed_offset": c.seed_offset,
        "n_samples": int(len(c.samples)),
        "s1_included": True,
        "axis_endpoint_excluded": True,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")

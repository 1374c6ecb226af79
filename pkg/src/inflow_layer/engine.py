"""Existence decision procedure, layer profiles, and their verification.

A boundary layer exists iff the mass fluxes match, the far field is not
supersonic, and the boundary point (u-, theta-) lies on the traced curve of
its regime (sonic: sigma; subsonic: gamma1 or gamma2), the equal-states
case giving the trivial constant layer.

Profiles ride invariant manifolds into the far-field equilibrium S1, which
forward shooting cannot follow (transverse errors grow exponentially), so
the profile is computed by the same stable backward integration used for
tracing: start within 1e-10 * scale of S1 on the incoming direction,
integrate backward until the boundary parameter is crossed, then reverse
and re-base xi to zero at the boundary.  In the sonic regime the innermost
algebraic stretch is covered by quadrature of the one-dimensional flow
restricted to the quadratic invariant-manifold graph, which is the only
numerically stable way to resolve the 1/xi tail.
"""

from __future__ import annotations

import csv
import math
import threading
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.integrate import fixed_quad

from .errors import (InvalidBoundary, OutOfRange, ProfileDiverged, TailTooShort)
from .gas import (EndState, GasParams, Regime, TOL_FLUX, TOL_MACH,
                  check_flux_condition, classify_regime, mach)
from .integrator import (BACKWARD, COMPONENT_CROSSES, IntegrationSettings,
                         component_crosses, integrate)
from .linearize import eigen_2x2, from_w, transonic_frame
from .system import PhasePoint, SystemData, build_system, field_poly, phase_field
from .tracer import (CURVE_GAMMA1, CURVE_GAMMA2, CURVE_SIGMA, Curve,
                     TraceOptions, curve_membership, trace_gamma, trace_sigma)

REASON_MASS_FLUX = "mass_flux_mismatch"
REASON_NONPOSITIVE_U_PLUS = "nonpositive_u_plus"
REASON_SUPERSONIC = "supersonic"
REASON_OFF_CURVE = "off_curve"
REASON_OUT_OF_RANGE = "outside_curve_range"

CURVE_TRIVIAL = "trivial"

_TRIVIAL_RTOL = 1e-12


@dataclass(frozen=True)
class Tolerances:
    """Decision tolerances: flux identity, transonic band, curve membership."""

    tol_A: float = TOL_FLUX
    tol_M: float = TOL_MACH
    tol_member: float = 1e-6


@dataclass(frozen=True)
class Query:
    """One existence question: boundary data, far field, gas, tolerances."""

    left: EndState
    right: EndState
    gas: GasParams
    tolerances: Tolerances = Tolerances()

    def __post_init__(self):
        if self.left.u <= 0.0:
            raise InvalidBoundary(
                f"inflow problem requires u_minus > 0, got {self.left.u}")


@dataclass(frozen=True)
class Verdict:
    """Existence decision with reason codes and diagnostics.

    For exists=True, ``curve`` is the curve label (or "trivial") and
    ``curve_parameter`` the boundary point's parameter on it.  For
    exists=False, ``reason`` is one of the REASON_* codes; off-curve
    verdicts carry the signed distance and the nearest curve to make
    near-misses actionable.
    """

    exists: bool
    mach_plus: float
    regime: Regime | None = None
    curve: str | None = None
    curve_parameter: float | None = None
    reason: str | None = None
    distance: float | None = None
    nearest_curve: str | None = None
    flux_gap: float | None = None
    notes: tuple[str, ...] = ()


@dataclass
class Profile:
    """Sampled layer profile on the integrator's grid, xi = 0 at the boundary.

    V satisfies V = (v+/u+) U identically (the integrated mass equation).
    ``metrics`` holds monotonicity, the scaled sup residual, the endpoint
    gap to S1, and the decay report when a fit was possible.
    """

    xi: np.ndarray
    V: np.ndarray
    U: np.ndarray
    Theta: np.ndarray
    trivial: bool
    curve: str | None
    system: SystemData
    metrics: dict = dc_field(default_factory=dict)
    segments: list | None = None
    t_shift: float = 0.0
    reduced_records: list | None = None


@dataclass(frozen=True)
class DecayReport:
    """Fitted tail behavior of a profile.

    kind is "exponential" (subsonic: |U - u+| ~ C exp(-rate xi)),
    "algebraic" (sonic: |U - u+| ~ C / xi, exponent near -1, and
    xi * (u+ - U) -> inv_coeff), or "not_applicable" for trivial profiles.
    """

    kind: str
    rate: float | None = None
    amplitude: float | None = None
    rate_theta: float | None = None
    exponent: float | None = None
    inv_coeff: float | None = None
    exponent_d1: float | None = None
    n_tail: int = 0


class ExistenceEngine:
    """Caches traced curves per (gas, far field) and answers queries.

    Curve tracing is the expensive step; traces are cached immutable and
    shared read-only across queries, with single-writer population.
    """

    def __init__(self, trace_options: TraceOptions | None = None):
        self.trace_options = trace_options or TraceOptions()
        self._cache: dict = {}
        self._lock = threading.Lock()

    # -- system and curve assembly -------------------------------------

    def curves_for(self, gas: GasParams, right: EndState,
                   tol_M: float = TOL_MACH) -> dict[str, Curve]:
        key = (gas.gamma, gas.R, gas.mu, gas.kappa,
               right.v, right.u, right.theta)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        s = build_system(gas, right)
        regime = classify_regime(s.mach_plus, tol_M)
        curves: dict[str, Curve] = {}
        if regime.is_transonic:
            frame = transonic_frame(s, tol_M)
            curves[CURVE_SIGMA] = trace_sigma(s, frame, self.trace_options)
        elif regime.is_subsonic:
            eig = eigen_2x2(s.matrix)
            curves[CURVE_GAMMA1] = trace_gamma(s, eig, CURVE_GAMMA1, self.trace_options)
            curves[CURVE_GAMMA2] = trace_gamma(s, eig, CURVE_GAMMA2, self.trace_options)
        with self._lock:
            self._cache.setdefault(key, curves)
            return self._cache[key]

    # -- decision procedure ---------------------------------------------

    def decide(self, q: Query) -> Verdict:
        """Run the full existence decision for one query."""
        left, right, gas = q.left, q.right, q.gas
        mach_plus = mach(right, gas)
        if right.u <= 0.0:
            return Verdict(exists=False, mach_plus=mach_plus,
                           reason=REASON_NONPOSITIVE_U_PLUS)
        flux = check_flux_condition(left, right, q.tolerances.tol_A)
        if not flux.ok:
            return Verdict(exists=False, mach_plus=mach_plus,
                           reason=REASON_MASS_FLUX, flux_gap=flux.gap)
        regime = classify_regime(mach_plus, q.tolerances.tol_M)
        scale = max(right.u, right.theta)
        if (abs(left.u - right.u) <= _TRIVIAL_RTOL * scale
                and abs(left.theta - right.theta) <= _TRIVIAL_RTOL * scale):
            return Verdict(exists=True, mach_plus=mach_plus, regime=regime,
                           curve=CURVE_TRIVIAL,
                           notes=("boundary data equals the far field: "
                                  "constant (zero-amplitude) layer",))
        if regime.is_supersonic:
            return Verdict(exists=False, mach_plus=mach_plus, regime=regime,
                           reason=REASON_SUPERSONIC)
        curves = self.curves_for(gas, right, q.tolerances.tol_M)
        order = [CURVE_SIGMA] if regime.is_transonic else [CURVE_GAMMA1, CURVE_GAMMA2]
        p = PhasePoint(left.u, left.theta)
        best = None
        for label in order:
            try:
                mem = curve_membership(curves[label], p, q.tolerances.tol_member)
            except OutOfRange:
                continue
            if mem.on_curve:
                return Verdict(exists=True, mach_plus=mach_plus, regime=regime,
                               curve=label, curve_parameter=mem.parameter)
            if best is None or abs(mem.distance) < abs(best[1].distance):
                best = (label, mem)
        if best is not None:
            return Verdict(exists=False, mach_plus=mach_plus, regime=regime,
                           reason=REASON_OFF_CURVE, distance=best[1].distance,
                           nearest_curve=best[0])
        return Verdict(exists=False, mach_plus=mach_plus, regime=regime,
                       reason=REASON_OUT_OF_RANGE)

    # -- profile computation ---------------------------------------------

    def compute_profile(self, q: Query, verdict: Verdict | None = None) -> Profile:
        """Compute the layer profile (V, U, Theta)(xi) for an existing layer.

        Raises ProfileDiverged if the backward realization fails to land on
        the boundary data within ten membership tolerances (a sign the
        membership decision was borderline; tighten tolerances).
        """
        verdict = verdict if verdict is not None else self.decide(q)
        if not verdict.exists:
            raise ProfileDiverged(f"no layer exists: {verdict.reason}")
        s = build_system(q.gas, q.right)
        if verdict.curve == CURVE_TRIVIAL:
            return self._trivial_profile(q, s)
        curves = self.curves_for(q.gas, q.right, q.tolerances.tol_M)
        curve = curves[verdict.curve]
        if curve.label == CURVE_SIGMA:
            prof = self._transonic_profile(q, s, curve)
        else:
            prof = self._subsonic_profile(q, s, curve)
        prof.metrics["monotone_ok"], prof.metrics["signs"] = _monotone_check(prof)
        prof.metrics["endpoint_gap"] = max(abs(prof.U[-1] - s.u_plus),
                                           abs(prof.Theta[-1] - s.theta_plus))
        prof.metrics["residual_sup"] = verify_residual(prof, s)
        try:
            report = verify_decay(prof, classify_regime(s.mach_plus, q.tolerances.tol_M),
                                  curve=curve)
        except TailTooShort:
            report = None
        prof.metrics["decay"] = report
        return prof

    def _trivial_profile(self, q: Query, s: SystemData) -> Profile:
        xi = np.array([0.0, 1.0])
        U = np.full(2, q.left.u)
        Theta = np.full(2, q.left.theta)
        V = (s.v_plus / s.u_plus) * U
        prof = Profile(xi=xi, V=V, U=U, Theta=Theta, trivial=True,
                       curve=CURVE_TRIVIAL, system=s)
        prof.metrics = {"monotone_ok": True, "signs": (0, 0, 0),
                        "residual_sup": 0.0, "endpoint_gap": 0.0,
                        "decay": DecayReport(kind="not_applicable")}
        return prof

    def _landing_check(self, q: Query, event_point: PhasePoint, pidx: int) -> None:
        tol = q.tolerances.tol_member
        if pidx == 0:
            gap = abs(event_point.theta - q.left.theta)
            lim = 10.0 * tol * q.right.theta
        else:
            gap = abs(event_point.u - q.left.u)
            lim = 10.0 * tol * q.right.u
        if gap > lim:
            raise ProfileDiverged(
                f"profile landed {gap:.3e} away from the boundary data "
                f"(limit {lim:.3e}); membership was borderline")

    def _subsonic_profile(self, q: Query, s: SystemData, curve: Curve) -> Profile:
        eig = curve.eig
        r = 1e-10 * s.scale
        pidx = curve.param_index
        bparam = q.left.u if pidx == 0 else q.left.theta
        p_s1 = s.u_plus if pidx == 0 else s.theta_plus
        if abs(bparam - p_s1) <= 10.0 * r:
            return self._trivial_profile(q, s)
        sign = 1.0 if curve.label == CURVE_GAMMA2 else -1.0
        seed = np.array([s.u_plus, s.theta_plus]) + sign * r * eig.e2
        settings = IntegrationSettings(rel_tol=1e-13, abs_tol=1e-15,
                                       direction=BACKWARD,
                                       h_max=0.25 / abs(eig.lambda2),
                                       max_steps=500_000)
        res = integrate(phase_field(s), seed, settings,
                        events=[component_crosses(pidx, bparam)])
        if res.event.kind != COMPONENT_CROSSES:
            raise ProfileDiverged(
                f"backward profile run ended with {res.event.kind} before "
                "reaching the boundary data")
        self._landing_check(q, res.event.point, pidx)
        t_ev = res.event.xi
        xi = (res.xi - t_ev)[::-1].copy()
        pts = res.points[::-1].copy()
        U = pts[:, 0]
        Theta = pts[:, 1]
        V = (s.v_plus / s.u_plus) * U
        return Profile(xi=xi, V=V, U=U, Theta=Theta, trivial=False,
                       curve=curve.label, system=s, segments=res.segments,
                       t_shift=t_ev)

    def _transonic_profile(self, q: Query, s: SystemData, curve: Curve) -> Profile:
        frame = curve.frame
        norm_e1 = math.hypot(1.0, frame.m1)
        w_stop = 1e-10 * s.scale / norm_e1
        y_switch = self.trace_options.switch_offset * s.scale
        du_boundary = s.u_plus - q.left.u

        # outer leg: backward 2D integration from the manifold handoff point
        # down to the boundary, unless the boundary sits inside the handoff
        segments = None
        t_ev = 0.0
        if du_boundary > 1.2 * y_switch:
            w1_sw = _w1_from_du(-y_switch, frame)
            start = from_w((w1_sw, frame.manifold_graph(w1_sw)), frame, s)
            settings = IntegrationSettings(rel_tol=1e-13, abs_tol=1e-15,
                                           direction=BACKWARD, max_steps=500_000)
            res = integrate(phase_field(s), start, settings,
                            events=[component_crosses(0, q.left.u)])
            if res.event.kind != COMPONENT_CROSSES:
                raise ProfileDiverged(
                    f"backward profile run ended with {res.event.kind} before "
                    "reaching the boundary data")
            self._landing_check(q, res.event.point, 0)
            t_ev = res.event.xi
            xi = (res.xi - t_ev)[::-1].copy()
            pts = res.points[::-1].copy()
            segments = res.segments
            w1_inner_start = w1_sw
            xi_inner0 = float(xi[-1])
        else:
            w1_inner_start = _w1_from_du(-du_boundary, frame)
            p0 = from_w((w1_inner_start, frame.manifold_graph(w1_inner_start)),
                        frame, s)
            self._landing_check(q, p0, 0)
            xi = np.array([0.0])
            pts = np.array([[p0.u, p0.theta]])
            xi_inner0 = 0.0

        # inner leg: quadrature of the center flow restricted to the local
        # invariant-manifold graph, from the handoff down to ~1e-10 of S1
        n_dec = math.log10(abs(w1_inner_start) / w_stop)
        n_pts = max(60, int(round(n_dec * 16)) + 1)
        w_grid = -np.geomspace(abs(w1_inner_start), w_stop, n_pts)
        speed = frame.reduced_field
        xi_inner = [xi_inner0]
        for a, b in zip(w_grid[:-1], w_grid[1:]):
            dxi, _ = fixed_quad(lambda w: 1.0 / speed(w), a, b, n=20)
            xi_inner.append(xi_inner[-1] + float(dxi))
        inner_pts = []
        reduced_records = []
        for w1, x in zip(w_grid, xi_inner):
            pp = from_w((w1, frame.manifold_graph(w1)), frame, s)
            inner_pts.append([pp.u, pp.theta])
            w1dot = float(speed(w1))
            slope = float(frame.manifold_slope(w1))
            du_dxi = w1dot * (1.0 + slope)
            dth_dxi = w1dot * (frame.m1 + slope * frame.m2)
            reduced_records.append((pp.u, pp.theta, du_dxi, dth_dxi))
        # first inner point coincides with the handoff sample
        xi = np.concatenate([xi, np.asarray(xi_inner[1:])])
        pts = np.vstack([pts, np.asarray(inner_pts[1:])])
        U = pts[:, 0]
        Theta = pts[:, 1]
        V = (s.v_plus / s.u_plus) * U
        return Profile(xi=xi, V=V, U=U, Theta=Theta, trivial=False,
                       curve=curve.label, system=s, segments=segments,
                       t_shift=t_ev, reduced_records=reduced_records[1:])


def _w1_from_du(du: float, frame) -> float:
    """Solve du = w1 + graph(w1) for the small root near w1 = du."""
    w1 = du
    for _ in range(5):
        w1 = du - float(frame.manifold_graph(w1))
    return w1


def _monotone_check(prof: Profile) -> tuple[bool, tuple[int, int, int]]:
    """Strict monotonicity of (V, U, Theta) via sample differences."""
    dV = np.diff(prof.V)
    dU = np.diff(prof.U)
    dT = np.diff(prof.Theta)

    def sgn(d):
        if np.all(d > 0.0):
            return 1
        if np.all(d < 0.0):
            return -1
        return 0

    signs = (sgn(dV), sgn(dU), sgn(dT))
    if prof.curve == CURVE_GAMMA2:
        ok = signs == (-1, -1, 1)
    else:
        ok = signs == (1, 1, -1)
    return ok, signs


def _dense_derivative(seg, t: float, width: float) -> np.ndarray:
    """Time derivative of a dense-output segment.

    Runge-Kutta dense output is polynomial in the step fraction, so the
    derivative is evaluated exactly when the coefficient layout is exposed;
    otherwise a central difference (with its roundoff floor) is used.
    """
    Q = getattr(seg, "Q", None)
    h = getattr(seg, "h", None)
    order = getattr(seg, "order", None)
    if Q is not None and h is not None and order is not None:
        x = (t - seg.t_old) / h
        k = np.arange(order + 1)
        return np.asarray(Q) @ ((k + 1) * x ** k)
    delta = min(1e-5, 0.25 * width)
    return (seg(t + delta) - seg(t - delta)) / (2.0 * delta)


def _residual_pair(s: SystemData, u, theta, du_dxi, dth_dxi):
    """Residuals of both integrated equations plus their local term masses."""
    gas = s.gas
    V = (s.v_plus / s.u_plus) * u
    du = u - s.u_plus
    dth = theta - s.theta_plus
    lhs1 = gas.mu * du_dxi / V
    t1a = -s.sigma_minus * du
    t1b = gas.R * (theta / V - s.theta_plus / s.v_plus)
    lhs2 = gas.kappa * dth_dxi / V
    t2a = -s.sigma_minus * gas.R / (gas.gamma - 1.0) * dth
    t2b = s.p_plus * du
    t2c = 0.5 * s.sigma_minus * du * du
    r1 = lhs1 - (t1a + t1b)
    r2 = lhs2 - (t2a + t2b + t2c)
    loc1 = abs(lhs1) + abs(t1a) + abs(t1b)
    loc2 = abs(lhs2) + abs(t2a) + abs(t2b) + abs(t2c)
    return r1, r2, loc1, loc2


def verify_residual(prof: Profile, s: SystemData) -> float:
    """Scaled sup norm of the integrated-equation residuals along a profile.

    Derivatives come from the integrator's dense output (evaluated at step
    midpoints, where the interpolant is independent of the endpoint field
    values) and, on the quadrature-generated sonic tail, from the exact
    derivative of the constructed path, so the tail residual measures the
    invariant-manifold defect.  Profiles without dense segments (e.g.
    externally modified data) fall back to finite differences on the
    samples.
    """
    if prof.trivial:
        return 0.0
    scale = max(abs(s.sigma_minus) * s.u_plus, s.p_plus * s.u_plus)
    worst = 0.0
    records = []
    if prof.segments is not None:
        # the last stored step extends past the boundary event; only the part
        # inside the profile's time range belongs to the profile
        dom_lo = min(prof.t_shift, 0.0)
        dom_hi = max(prof.t_shift, 0.0)
        for t_lo, t_hi, seg in prof.segments:
            a, b = sorted((t_lo, t_hi))
            a, b = max(a, dom_lo), min(b, dom_hi)
            if b - a < 1e-5:
                continue
            t_mid = 0.5 * (a + b)
            y = seg(t_mid)
            dy = _dense_derivative(seg, t_mid, b - a)
            records.append((float(y[0]), float(y[1]), float(dy[0]), float(dy[1])))
    elif prof.reduced_records is None and len(prof.xi) >= 3:
        # nonuniform central differences on the samples
        for i in range(1, len(prof.xi) - 1):
            h1 = prof.xi[i] - prof.xi[i - 1]
            h2 = prof.xi[i + 1] - prof.xi[i]
            w1 = -h2 / (h1 * (h1 + h2))
            w2 = (h2 - h1) / (h1 * h2)
            w3 = h1 / (h2 * (h1 + h2))
            du = w1 * prof.U[i - 1] + w2 * prof.U[i] + w3 * prof.U[i + 1]
            dth = w1 * prof.Theta[i - 1] + w2 * prof.Theta[i] + w3 * prof.Theta[i + 1]
            records.append((float(prof.U[i]), float(prof.Theta[i]), float(du), float(dth)))
    if prof.reduced_records:
        records.extend(prof.reduced_records)
    for u, theta, du_dxi, dth_dxi in records:
        r1, r2, loc1, loc2 = _residual_pair(s, u, theta, du_dxi, dth_dxi)
        # each residual is scaled by the larger of the global momentum/energy
        # scale and the local term magnitude (the equations blow up like 1/V
        # toward the u = 0 axis, where only a relative measure is meaningful)
        worst = max(worst, abs(r1) / max(scale, loc1), abs(r2) / max(scale, loc2))
    return worst


def verify_decay(prof: Profile, regime: Regime, eig=None, frame=None,
                 curve: Curve | None = None) -> DecayReport:
    """Fit the tail decay of a profile and report the fitted constants.

    Subsonic profiles decay exponentially; the fitted rate should match the
    magnitude of the negative eigenvalue at S1.  Sonic profiles decay
    algebraically like 1/xi with xi * (u+ - U) approaching the reciprocal
    of the center-direction quadratic coefficient.

    Raises TailTooShort if fewer than 50 samples lie in the tail window.
    """
    if prof.trivial:
        return DecayReport(kind="not_applicable")
    s = prof.system
    if curve is not None:
        eig = eig if eig is not None else curve.eig
        frame = frame if frame is not None else curve.frame
    y = np.abs(prof.U - s.u_plus)
    z = np.abs(prof.Theta - s.theta_plus)
    if regime.is_subsonic:
        mask = (y >= 1e-9 * s.scale) & (y <= 1e-2 * s.scale) & (prof.xi > 0.0)
        n = int(np.count_nonzero(mask))
        if n < 50:
            raise TailTooShort(f"{n} samples in the exponential tail window")
        slope, intercept = np.polyfit(prof.xi[mask], np.log(y[mask]), 1)
        zmask = mask & (z > 0.0)
        slope_th, _ = np.polyfit(prof.xi[zmask], np.log(z[zmask]), 1)
        return DecayReport(kind="exponential", rate=float(-slope),
                           amplitude=float(math.exp(intercept)),
                           rate_theta=float(-slope_th), n_tail=n)
    if regime.is_transonic:
        mask = (y >= 1e-8 * s.scale) & (y <= 1e-4 * s.scale) & (prof.xi > 0.0)
        n = int(np.count_nonzero(mask))
        if n < 50:
            raise TailTooShort(f"{n} samples in the algebraic tail window")
        exponent, _ = np.polyfit(np.log(prof.xi[mask]), np.log(y[mask]), 1)
        pmask = mask & (y <= 1e-5 * s.scale)
        prod = float(np.median(prof.xi[pmask] * (s.u_plus - prof.U[pmask])))
        fu, _fth = field_poly(prof.U[mask], prof.Theta[mask], s)
        d1, _ = np.polyfit(np.log(prof.xi[mask]), np.log(np.abs(fu)), 1)
        return DecayReport(kind="algebraic", exponent=float(exponent),
                           inv_coeff=prod, exponent_d1=float(d1), n_tail=n)
    raise ProfileDiverged("supersonic profiles do not exist")


def decay_to_dict(report: DecayReport | None) -> dict | None:
    """JSON-ready decay report (None when no fit was performed)."""
    if report is None:
        return None
    return {
        "kind": report.kind,
        "rate": report.rate,
        "amplitude": report.amplitude,
        "rate_theta": report.rate_theta,
        "exponent": report.exponent,
        "inv_coeff": report.inv_coeff,
        "exponent_d1": report.exponent_d1,
        "n_tail": report.n_tail,
    }


def verdict_to_dict(v: Verdict, decay: DecayReport | None = None) -> dict:
    """JSON-ready dictionary with the stable verdict schema."""
    return {
        "outcome": "exists" if v.exists else "not_exists",
        "reason": v.reason,
        "regime": v.regime.tag if v.regime is not None else None,
        "mach_plus": v.mach_plus,
        "curve": v.curve,
        "curve_parameter": v.curve_parameter,
        "distance": v.distance,
        "nearest_curve": v.nearest_curve,
        "flux_gap": v.flux_gap,
        "decay": decay_to_dict(decay),
        "notes": list(v.notes),
    }


def export_profile_csv(prof: Profile, path) -> None:
    """Write the profile as ``xi,V,U,Theta`` rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["xi", "V", "U", "Theta"])
        for row in zip(prof.xi, prof.V, prof.U, prof.Theta):
            writer.writerow([repr(float(x)) for x in row])


_default_engine = ExistenceEngine()


def decide(q: Query) -> Verdict:
    """Decide a query against the process-wide default engine."""
    return _default_engine.decide(q)


def compute_profile(q: Query, verdict: Verdict | None = None) -> Profile:
    """Compute a profile using the process-wide default engine."""
    return _default_engine.compute_profile(q, verdict)

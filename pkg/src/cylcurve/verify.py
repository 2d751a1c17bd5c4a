"""Certification of the self-intersection theorems on concrete curves.

Given a curve that is 2*pi-periodic in x and self-intersecting, this module
certifies that

  (a) some planar closed sub-loop has length at most ell - 2*pi,
  (b) the curvature is somewhere at least 2*pi/(ell - 2*pi), and the closed
      witness loop (corner included) has total curvature at least 2*pi,
  (c) when the tangent angle is periodic, some window of length ell contains
      at least two distinct crossings.

It also provides the chord-comparison oracle behind (b), an Umlaufsatz
identity check at a simple crossing, and a seeded random-curve generator for
property testing.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .curves import (TWO_PI, ArcCurve, CurveSpec, build_curve, max_curvature,
                     reparametrize_arclength, turning_delta)
from .errors import (GenerationFailed, HypothesisViolated, LoopNotSimple,
                     NonRegular, NotMultipleOf2Pi, NotSimple,
                     PipelineMismatch, QuadratureFailure, ResolutionTooCoarse)
from .topology import SIMPLE, Crossing, Loop, find_crossings

BOUND_TOL = 1e-6
ILL_CONDITIONED_FLOOR = 1e-3


def _wrap_pi(x):
    """Wrap an angle to (-pi, pi]."""
    return -((-x + math.pi) % TWO_PI - math.pi)


def _require_simple(crossings):
    bad = [c for c in crossings if c.simplicity != SIMPLE]
    if bad:
        raise NotSimple(
            f"{len(bad)} non-simple crossing(s); perturb to general "
            f"position first")


def _planar_pair(crossing: Crossing, ell: float):
    """The unique planar identification p(a) = p(b) carried by a crossing.

    A crossing (s1, s2, k) means p(s2) = p(s1 + k*ell); sorting gives the
    closed planar arc [a, b].
    """
    a, b = sorted((crossing.s1, crossing.s2 - crossing.winding * ell))
    return a, b


def oracle_min_loop(crossings, ell: float) -> Optional[Loop]:
    """Brute-force shortest planar loop over every crossing's identification."""
    best = None
    for c in crossings:
        a, b = _planar_pair(c, ell)
        if best is None or b - a < best.length:
            best = Loop(a, b, "plane", 0)
    return best


def locate_short_loop(curve: ArcCurve, crossings=None) -> Optional[Loop]:
    """A planar closed loop of length <= ell - 2*pi, or None if the curve is
    simple.

    Follows the constructive proof: pick a crossing, shrink to a minimal
    cylinder sub-loop (winding in {-1, 0, 1}); windings 0 and 1 translate
    directly to a short planar loop, while winding -1 is routed through the
    winding-2 complement and the winding-one extraction step.  The result
    is cross-checked against the brute-force oracle.
    """
    from .topology import extract_winding_one_subloop, minimal_subloop

    if crossings is None:
        crossings = find_crossings(curve)
    if not crossings:
        return None
    _require_simple(crossings)
    ell = curve.ell

    c = crossings[0]
    start = Loop(c.s1, c.s2, "cylinder", c.winding)
    m = minimal_subloop(curve, start, crossings)
    if m.winding == 0:
        witness = Loop(m.a, m.b, "plane", 0)
    elif m.winding == 1:
        # p(b) = p(a + ell): the complementary planar arc closes up
        witness = Loop(m.b, m.a + ell, "plane", 0)
    else:
        # winding -1: its complement in one period winds 2; extract a
        # winding-1 sub-loop and translate as above
        comp = Loop(m.b, m.a + ell, "cylinder", 2)
        sub = extract_winding_one_subloop(curve, comp, crossings)
        witness = Loop(sub.b, sub.a + ell, "plane", 0)

    budget = ell - TWO_PI + BOUND_TOL * max(1.0, ell)
    if witness.length > budget:
        oracle = oracle_min_loop(crossings, ell)
        raise PipelineMismatch(
            f"pipeline witness length {witness.length!r} exceeds "
            f"ell - 2*pi = {ell - TWO_PI!r} (oracle minimum "
            f"{oracle.length!r})")
    return witness


def loop_total_curvature(curve: ArcCurve, loop: Loop) -> float:
    """Total curvature of the closed witness loop: the integral of |kappa|
    along the arc plus the exterior corner angle where it closes up."""
    a, b = loop.a, loop.b
    n = max(64, int(math.ceil((b - a) / curve.ell * 4 * curve.n_samples)))
    nodes, weights = np.polynomial.legendre.leggauss(12)
    edges = np.linspace(a, b, n + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    sgrid = (mid[:, None] + half * nodes[None, :]).ravel()
    kap = np.abs(curve.curvature(sgrid)).reshape(n, 12)
    total = float(np.sum(kap @ weights) * half)
    corner = abs(_wrap_pi(curve.tangent_angle(a) - curve.tangent_angle(b)))
    return total + corner


def check_curvature_bound(curve: ArcCurve, crossings=None,
                          witness: Optional[Loop] = None,
                          tol: float = BOUND_TOL) -> dict:
    """Curvature-bound fragment: max |kappa| vs 2*pi/(ell - 2*pi), and the
    witness loop's total curvature vs 2*pi.

    Violations are reported as failed flags, never raised: a genuine
    violation would falsify the theorem and must surface loudly.
    """
    if crossings is None:
        crossings = find_crossings(curve)
    ell = curve.ell
    kmax = max_curvature(curve)
    excess = ell - TWO_PI
    ill = excess < ILL_CONDITIONED_FLOOR
    bound = None if ill else TWO_PI / excess
    frag = {
        "max_curvature": kmax,
        "curvature_bound": bound,
        "ill_conditioned": ill,
        "prop_b_ok": True,
        "prop_b_margin": None,
        "loop_total_curvature": None,
        "loop_curvature_ok": True,
    }
    if crossings and not ill:
        frag["prop_b_margin"] = float(kmax - bound)
        frag["prop_b_ok"] = bool(kmax >= bound - tol)
    if witness is not None:
        tot = loop_total_curvature(curve, witness)
        frag["loop_total_curvature"] = tot
        frag["loop_curvature_ok"] = bool(tot >= TWO_PI - tol)
    return frag


def _angle_integrals(kappa, S: float, n_fine: int):
    """Reconstruct a unit-speed arc from its curvature profile.

    kappa may be a callable on [0, S] or an array of uniform samples.
    Returns (s_fine, kappa_fine, x_spline, y_spline) where the splines give
    the arc position as a function of arc length.
    """
    s = np.linspace(0.0, S, n_fine)
    if callable(kappa):
        k = np.asarray([float(kappa(v)) for v in s])
    else:
        arr = np.asarray(kappa, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("curvature profile must be a callable or a 1-d "
                             "array of at least two samples")
        k = CubicSpline(np.linspace(0.0, S, arr.size), arr)(s)
    theta = CubicSpline(s, k).antiderivative()(s)
    x = CubicSpline(s, np.cos(theta)).antiderivative()
    y = CubicSpline(s, np.sin(theta)).antiderivative()
    return s, k, x, y


def schur_chord_compare(kappa1, kappa2, S: float, n_grid: int = 64,
                        n_fine: int = 8193) -> dict:
    """Chord-length comparison between a convex arc and a flatter arc.

    The reference arc has curvature kappa1 >= 0 with total turn <= pi (so
    the arc plus its chord bounds a convex region); the comparison arc has
    |kappa2| <= kappa1 pointwise.  The chord of the flatter arc is then at
    least as long at every arc length.  Returns per-s margins; a negative
    margin beyond roundoff would be a red-alert numerical bug.
    """
    if S <= 0:
        raise ValueError("arc length S must be positive")
    s, k1, x1, y1 = _angle_integrals(kappa1, S, n_fine)
    _, k2, x2, y2 = _angle_integrals(kappa2, S, n_fine)
    eps = 1e-9
    if np.min(k1) < -eps:
        raise HypothesisViolated("reference curvature must be nonnegative "
                                 f"(min {float(np.min(k1))!r})")
    turn = float(np.trapezoid(k1, s))
    if turn > math.pi + eps:
        raise HypothesisViolated("reference arc turns by more than pi "
                                 f"({turn!r}); convexity not guaranteed")
    if np.max(np.abs(k2) - k1) > eps:
        i = int(np.argmax(np.abs(k2) - k1))
        raise HypothesisViolated(
            f"|kappa2| exceeds kappa1 at s = {float(s[i])!r}: "
            f"{float(abs(k2[i]))!r} > {float(k1[i])!r}")

    grid = np.linspace(0.0, S, n_grid + 1)
    chord1 = np.hypot(x1(grid) - x1(0.0), y1(grid) - y1(0.0))
    chord2 = np.hypot(x2(grid) - x2(0.0), y2(grid) - y2(0.0))
    margin = chord2 - chord1
    return {
        "s": grid,
        "chord_reference": chord1,
        "chord_compared": chord2,
        "margin": margin,
        "min_margin": float(np.min(margin)),
        "ok": bool(np.min(margin) >= -1e-8),
    }


def verify_prop_c(curve: ArcCurve, crossings=None) -> dict:
    """Find a window of length ell containing two distinct crossings.

    Applicable only when the tangent angle is periodic (turning delta zero)
    and crossings exist.  A missing window would falsify the theorem and is
    reported as a loud witness_not_found flag with the sweep diagnostics.
    """
    if crossings is None:
        crossings = find_crossings(curve)
    _, m = turning_delta(curve)
    frag = {"applicable": False, "segment_start": None,
            "crossings_in_segment": 0, "witness_not_found": False}
    if m != 0 or not crossings:
        return frag
    frag["applicable"] = True
    ell = curve.ell
    tol = 1e-9 * max(1.0, ell)
    pairs = []
    for c in crossings:
        a, b = _planar_pair(c, ell)
        if b - a <= ell + tol:
            pairs.append((a % ell, b - a))
    starts = sorted({lo for lo, _ in pairs})
    best = (0, None)
    for a0 in starts:
        a = a0 - tol
        count = sum(1 for lo, g in pairs if (lo - a) % ell + g <= ell + tol)
        if count > best[0]:
            best = (count, a0)
    if best[0] >= 2:
        frag["segment_start"] = best[1]
        frag["crossings_in_segment"] = best[0]
    else:
        frag["crossings_in_segment"] = best[0]
        frag["witness_not_found"] = True
    return frag


def umlaufsatz_check(curve: ArcCurve, crossing: Crossing,
                     crossings=None) -> dict:
    """Turning-angle identity at a simple crossing whose planar loop is
    simple: |integral of theta'| over the loop equals pi + alpha or
    pi - alpha depending on orientation, and with the exterior corner angle
    added the closed loop turns by exactly 2*pi in absolute value."""
    if crossing.simplicity != SIMPLE:
        raise NotSimple("Umlaufsatz check requires a simple crossing")
    if crossings is None:
        crossings = find_crossings(curve)
    ell = curve.ell
    tol = 1e-6 * max(1.0, ell)
    a, b = _planar_pair(crossing, ell)
    for other in crossings:
        p, q = _planar_pair(other, ell)
        for shift in range(-3, 4):
            ps, qs = p + shift * ell, q + shift * ell
            if a - tol <= ps and qs <= b + tol:
                if abs(ps - a) < tol and abs(qs - b) < tol:
                    continue
                raise LoopNotSimple(
                    f"loop [{a!r}, {b!r}] contains the crossing pair "
                    f"({ps!r}, {qs!r})")

    turn = float(curve.tangent_angle(b) - curve.tangent_angle(a))
    alpha = crossing.alpha
    r_plus = abs(abs(turn) - (math.pi + alpha))
    r_minus = abs(abs(turn) - (math.pi - alpha))
    matched = "pi+alpha" if r_plus <= r_minus else "pi-alpha"
    corner = float(_wrap_pi(curve.tangent_angle(a) - curve.tangent_angle(b)))
    total = turn + corner
    return {
        "turn": turn,
        "alpha": float(alpha),
        "matched": matched,
        "residual": float(min(r_plus, r_minus)),
        "closed_turn": total,
        "closed_residual": float(abs(abs(total) - TWO_PI)),
    }


def random_curve(seed: int, harmonics: int, amplitude: float,
                 max_retries: int = 100,
                 regularity_floor: float = 1e-2) -> CurveSpec:
    """Seeded random Fourier curve with k^-2 coefficient decay, rejection
    resampled until comfortably regular.  Deterministic per seed.

    The floor is stricter than the library-wide regularity floor so that
    near-cusp draws (which need extreme sampling) are resampled instead of
    analyzed.
    """
    if harmonics < 1:
        raise ValueError("harmonics must be >= 1")
    if amplitude <= 0.0:
        raise ValueError("amplitude must be positive")
    rng = np.random.default_rng(seed)
    decay = np.arange(1, harmonics + 1, dtype=float)**2
    for _ in range(max_retries):
        raw = rng.standard_normal((4, harmonics)) / decay
        norm = math.hypot(np.abs(raw[:2]).sum(), np.abs(raw[2:]).sum())
        raw *= amplitude / norm
        spec = CurveSpec(
            x_cos=tuple(raw[0]), x_sin=tuple(raw[1]),
            y_cos=tuple(raw[2]), y_sin=tuple(raw[3]),
            label=f"random-{seed}",
        )
        try:
            build_curve(spec, regularity_floor=regularity_floor)
        except NonRegular:
            continue
        return spec
    raise GenerationFailed(
        f"no regular curve for seed {seed} in {max_retries} draws")


@dataclass
class AnalysisReport:
    """Full certification report for one curve."""

    ell: float
    max_curvature: float
    curvature_bound: Optional[float]
    crossings: list
    short_loop: Optional[Loop]
    prop_a_ok: bool
    prop_a_margin: Optional[float]
    prop_b_ok: bool
    prop_b_margin: Optional[float]
    prop_c: dict
    loop_total_curvature: Optional[float]
    loop_curvature_ok: bool
    general_position: bool
    ill_conditioned: bool
    oracle_loop_length: Optional[float] = None
    label: str = ""
    n_samples: int = 0

    @property
    def all_ok(self) -> bool:
        return (self.prop_a_ok and self.prop_b_ok and self.loop_curvature_ok
                and not self.prop_c.get("witness_not_found", False))

    def to_dict(self) -> dict:
        def loop_d(lp):
            if lp is None:
                return None
            return {"a": float(lp.a), "b": float(lp.b), "kind": lp.kind,
                    "winding": int(lp.winding), "length": float(lp.length)}

        return {
            "label": self.label,
            "n_samples": self.n_samples,
            "ell": self.ell,
            "max_curvature": self.max_curvature,
            "curvature_bound": self.curvature_bound,
            "crossings": [{
                "s1": float(c.s1), "s2": float(c.s2),
                "phi": float(c.point.phi), "v": float(c.point.v),
                "winding": int(c.winding), "alpha": float(c.alpha),
                "simplicity": c.simplicity, "residual": float(c.residual),
            } for c in self.crossings],
            "short_loop": loop_d(self.short_loop),
            "oracle_loop_length": self.oracle_loop_length,
            "prop_a_ok": self.prop_a_ok,
            "prop_a_margin": self.prop_a_margin,
            "prop_b_ok": self.prop_b_ok,
            "prop_b_margin": self.prop_b_margin,
            "prop_c": dict(self.prop_c),
            "loop_total_curvature": self.loop_total_curvature,
            "loop_curvature_ok": self.loop_curvature_ok,
            "general_position": self.general_position,
            "ill_conditioned": self.ill_conditioned,
            "all_ok": self.all_ok,
        }


def analyze(spec_or_curve, n_samples: int = None,
            tol: float = None) -> AnalysisReport:
    """Run the full certification battery on one curve."""
    from .curves import DEFAULT_SAMPLES

    tol = BOUND_TOL if tol is None else tol
    if tol <= 0.0:
        raise ValueError("tolerance override must be positive")

    if isinstance(spec_or_curve, ArcCurve):
        curve = spec_or_curve
        crossings = find_crossings(curve)
    else:
        # with no pinned sample count, double on resolution failures
        n = n_samples or DEFAULT_SAMPLES
        n_cap = n if n_samples else max(n, 65536)
        while True:
            try:
                curve = reparametrize_arclength(spec_or_curve, n)
                crossings = find_crossings(curve)
                break
            except (QuadratureFailure, NotMultipleOf2Pi,
                    ResolutionTooCoarse):
                if n >= n_cap:
                    raise
                n *= 2
    general = all(c.simplicity == SIMPLE for c in crossings)

    short_loop = None
    oracle = None
    prop_a_ok, prop_a_margin = True, None
    if crossings and general:
        short_loop = locate_short_loop(curve, crossings)
        oracle = oracle_min_loop(crossings, curve.ell)
        prop_a_margin = float((curve.ell - TWO_PI) - short_loop.length)
        prop_a_ok = bool(prop_a_margin >= -tol)

    frag = check_curvature_bound(curve, crossings, short_loop, tol=tol)
    prop_c = verify_prop_c(curve, crossings)

    return AnalysisReport(
        ell=float(curve.ell),
        max_curvature=frag["max_curvature"],
        curvature_bound=frag["curvature_bound"],
        crossings=crossings,
        short_loop=short_loop,
        prop_a_ok=prop_a_ok,
        prop_a_margin=prop_a_margin,
        prop_b_ok=frag["prop_b_ok"],
        prop_b_margin=frag["prop_b_margin"],
        prop_c=prop_c,
        loop_total_curvature=frag["loop_total_curvature"],
        loop_curvature_ok=frag["loop_curvature_ok"],
        general_position=general,
        ill_conditioned=frag["ill_conditioned"],
        oracle_loop_length=None if oracle is None else oracle.length,
        label=curve.spec.label,
        n_samples=curve.n_samples,
    )

"""Periodic curve model: Fourier descriptors, validation, arc-length
reparametrization and pointwise geometry (position, tangent angle, curvature).

A curve is given in a raw parameter t by

    x(t) = t + sum_k a_k cos(k t) + b_k sin(k t)
    y(t) = y0 + sum_k c_k cos(k t) + d_k sin(k t)

so that x(t + 2*pi) = x(t) + 2*pi and y is 2*pi-periodic by construction.
After reparametrization by arc length s the period length is ell and

    p(s + ell) = p(s) + (2*pi, 0).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.optimize import minimize_scalar

from .errors import NonFinite, NonRegular, NotMultipleOf2Pi, QuadratureFailure

TWO_PI = 2.0 * math.pi

#: speed below this is treated as a cusp / irregular parametrization
REGULARITY_FLOOR = 1e-6

#: default / minimum number of arc-length samples per period
DEFAULT_SAMPLES = 4096
MIN_SAMPLES = 256


@dataclass(frozen=True)
class CurveSpec:
    """Fourier descriptor of one period of a curve periodic in x.

    Index i of each coefficient list holds harmonic k = i + 1.
    """

    x_cos: tuple = ()
    x_sin: tuple = ()
    y_const: float = 0.0
    y_cos: tuple = ()
    y_sin: tuple = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "x_cos", tuple(float(c) for c in self.x_cos))
        object.__setattr__(self, "x_sin", tuple(float(c) for c in self.x_sin))
        object.__setattr__(self, "y_cos", tuple(float(c) for c in self.y_cos))
        object.__setattr__(self, "y_sin", tuple(float(c) for c in self.y_sin))
        object.__setattr__(self, "y_const", float(self.y_const))

    # -- serialization ----------------------------------------------------

    def to_dict(self):
        return {
            "label": self.label,
            "x_cos": list(self.x_cos),
            "x_sin": list(self.x_sin),
            "y_const": self.y_const,
            "y_cos": list(self.y_cos),
            "y_sin": list(self.y_sin),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            x_cos=tuple(d.get("x_cos", ())),
            x_sin=tuple(d.get("x_sin", ())),
            y_const=d.get("y_const", 0.0),
            y_cos=tuple(d.get("y_cos", ())),
            y_sin=tuple(d.get("y_sin", ())),
            label=d.get("label", ""),
        )

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    # -- analytic evaluation ---------------------------------------------

    def _series(self, t, cos_c, sin_c, order):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for i, (a, b) in enumerate(zip(cos_c, sin_c)):
            k = i + 1
            kt = k * t
            if order == 0:
                out += a * np.cos(kt) + b * np.sin(kt)
            elif order == 1:
                out += k * (-a * np.sin(kt) + b * np.cos(kt))
            elif order == 2:
                out += k * k * (-a * np.cos(kt) - b * np.sin(kt))
            else:
                raise ValueError("order must be 0, 1 or 2")
        return out

    def _pad(self):
        kx = max(len(self.x_cos), len(self.x_sin))
        ky = max(len(self.y_cos), len(self.y_sin))
        pad = lambda c, n: tuple(c) + (0.0,) * (n - len(c))
        return (pad(self.x_cos, kx), pad(self.x_sin, kx),
                pad(self.y_cos, ky), pad(self.y_sin, ky))

    def x(self, t, order=0):
        xc, xs, _, _ = self._pad()
        base = np.asarray(t, dtype=float) if order == 0 else (
            np.ones_like(np.asarray(t, dtype=float)) if order == 1
            else np.zeros_like(np.asarray(t, dtype=float)))
        return base + self._series(t, xc, xs, order)

    def y(self, t, order=0):
        _, _, yc, ys = self._pad()
        base = self.y_const if order == 0 else 0.0
        return base + self._series(t, yc, ys, order)

    def speed(self, t):
        return np.hypot(self.x(t, 1), self.y(t, 1))

    def curvature(self, t):
        """Signed curvature of the raw parametrization at t."""
        xp, yp = self.x(t, 1), self.y(t, 1)
        xpp, ypp = self.x(t, 2), self.y(t, 2)
        sp = np.hypot(xp, yp)
        return (xp * ypp - yp * xpp) / sp**3

    @property
    def harmonics(self):
        return max(len(self.x_cos), len(self.x_sin),
                   len(self.y_cos), len(self.y_sin))


def build_curve(spec: CurveSpec, regularity_floor: float = REGULARITY_FLOOR):
    """Validate a CurveSpec: finiteness and regularity.

    Returns the spec unchanged if regular; the minimum speed found is
    recorded on the exception otherwise.
    """
    coeffs = (spec.x_cos + spec.x_sin + spec.y_cos + spec.y_sin
              + (spec.y_const,))
    if not all(math.isfinite(c) for c in coeffs):
        raise NonFinite("curve coefficients must be finite")

    n = 4096 * max(1, spec.harmonics)
    n = min(n, 1 << 16)
    t = np.linspace(0.0, TWO_PI, n, endpoint=False)
    sp = spec.speed(t)
    i = int(np.argmin(sp))
    # polish the grid minimum locally
    h = TWO_PI / n
    res = minimize_scalar(lambda u: float(spec.speed(u)),
                          bounds=(t[i] - h, t[i] + h), method="bounded",
                          options={"xatol": 1e-12})
    min_speed = min(float(sp[i]), float(res.fun))
    if min_speed <= regularity_floor:
        raise NonRegular(
            f"curve '{spec.label}' has speed {min_speed:.3e} at "
            f"t={res.x:.6f}; cannot reparametrize by arc length",
            min_speed=min_speed, at=float(res.x))
    return spec


# -- arc-length machinery --------------------------------------------------

_GL_NODES, _GL_WEIGHTS = leggauss(12)


def _cumulative_arclength(spec, n_panels):
    """Arc length A(t) at panel edges t_j = j * 2*pi / n_panels, by
    Gauss-Legendre quadrature on each panel."""
    edges = np.linspace(0.0, TWO_PI, n_panels + 1)
    h = TWO_PI / n_panels
    mid = edges[:-1] + 0.5 * h
    tq = mid[None, :] + 0.5 * h * _GL_NODES[:, None]
    vals = spec.speed(tq)
    panel = 0.5 * h * np.einsum("q,qp->p", _GL_WEIGHTS, vals)
    cum = np.concatenate(([0.0], np.cumsum(panel)))
    return edges, cum


def _partial_gl(spec, t0, t1):
    """Vectorized integral of speed from t0 to t1 (arrays of equal shape)."""
    mid = 0.5 * (t0 + t1)
    half = 0.5 * (t1 - t0)
    tq = mid[None, :] + half[None, :] * _GL_NODES[:, None]
    vals = spec.speed(tq)
    return half * np.einsum("q,qp->p", _GL_WEIGHTS, vals)


@dataclass(frozen=True)
class ArcCurve:
    """Arc-length-parametrized sampling of one period of a periodic curve.

    The canonical identities are p(s + ell) = p(s) + (2*pi, 0) and
    theta(s + ell) = theta(s) + theta_turn with theta_turn an integer
    multiple of 2*pi.
    """

    spec: CurveSpec
    ell: float
    s: np.ndarray          # uniform, [0, ell), length N
    t: np.ndarray          # raw parameter at each s, t(0) = 0
    u: np.ndarray
    v: np.ndarray
    theta: np.ndarray      # continuous lift of the tangent angle
    kappa: np.ndarray
    theta_turn: float
    n_samples: int
    _t_resid: CubicSpline = field(repr=False, compare=False)
    _theta_resid: CubicSpline = field(repr=False, compare=False)

    # -- parameter transport ---------------------------------------------

    def t_of_s(self, s):
        """Raw parameter t for arc length s (lifted: t(s+ell) = t(s)+2*pi)."""
        s = np.asarray(s, dtype=float)
        wrap = np.floor(s / self.ell)
        s0 = s - wrap * self.ell
        return (TWO_PI / self.ell) * s0 + self._t_resid(s0) + TWO_PI * wrap

    def point(self, s):
        """Planar point p(s) = (u, v) with the lifted u component."""
        s = np.asarray(s, dtype=float)
        wrap = np.floor(s / self.ell)
        t = self.t_of_s(s - wrap * self.ell)
        return (self.spec.x(t) + TWO_PI * wrap, self.spec.y(t))

    def tangent_angle(self, s):
        """Continuous lift theta(s)."""
        s = np.asarray(s, dtype=float)
        wrap = np.floor(s / self.ell)
        s0 = s - wrap * self.ell
        return ((self.theta_turn / self.ell) * s0 + self._theta_resid(s0)
                + self.theta_turn * wrap)

    def curvature(self, s):
        return self.spec.curvature(self.t_of_s(s))

    def evaluate(self, s):
        """Pointwise geometry at arc length s: {point, angle, curvature}."""
        uu, vv = self.point(s)
        return {
            "point": (float(uu), float(vv)) if np.ndim(s) == 0 else (uu, vv),
            "angle": float(self.tangent_angle(s)) if np.ndim(s) == 0
                     else self.tangent_angle(s),
            "curvature": float(self.curvature(s)) if np.ndim(s) == 0
                         else self.curvature(s),
        }


def reparametrize_arclength(spec: CurveSpec,
                            n_samples: int = DEFAULT_SAMPLES) -> ArcCurve:
    """Resample a validated curve uniformly in arc length.

    ell is computed by panelwise Gauss-Legendre quadrature with one
    convergence doubling; the inverse map t(s) is polished by Newton
    iteration so that the residual |A(t) - s| is at quadrature accuracy.
    """
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be at least {MIN_SAMPLES}")
    build_curve(spec)

    n_panels = max(2048, 256 * max(1, spec.harmonics))
    edges, cum = _cumulative_arclength(spec, n_panels)
    _, cum2 = _cumulative_arclength(spec, 2 * n_panels)
    ell, ell2 = cum[-1], cum2[-1]
    if abs(ell2 - ell) > 1e-10 * max(1.0, ell):
        edges, cum = _cumulative_arclength(spec, 4 * n_panels)
        _, cum2 = _cumulative_arclength(spec, 8 * n_panels)
        ell, ell2 = cum[-1], cum2[-1]
        if abs(ell2 - ell) > 1e-10 * max(1.0, ell):
            raise QuadratureFailure(
                f"arc length did not converge: {ell!r} vs {ell2!r}")
    ell = ell2

    s_grid = np.arange(n_samples) * (ell / n_samples)
    # initialize t(s) by monotone interpolation of the edge data, then polish
    inv = PchipInterpolator(cum, edges)
    t = np.clip(inv(s_grid), 0.0, TWO_PI)
    for _ in range(8):
        j = np.clip(np.searchsorted(edges, t, side="right") - 1,
                    0, len(edges) - 2)
        a_t = cum[j] + _partial_gl(spec, edges[j], t)
        resid = a_t - s_grid
        t = t - resid / spec.speed(t)
        t = np.clip(t, 0.0, TWO_PI)
        if np.max(np.abs(resid)) < 1e-12 * max(1.0, ell):
            break
    else:
        raise QuadratureFailure("arc-length inversion did not converge")

    u = spec.x(t)
    v = spec.y(t)
    xp, yp = spec.x(t, 1), spec.y(t, 1)
    theta_raw = np.arctan2(yp, xp)
    # include the period endpoint so the lift captures the final step
    theta_ext = np.unwrap(np.concatenate([theta_raw, [math.atan2(
        float(spec.y(TWO_PI, 1)), float(spec.x(TWO_PI, 1)))]]))
    steps = np.abs(np.diff(theta_ext))
    if steps.max() > 0.5 * math.pi:
        raise QuadratureFailure(
            "tangent angle steps exceed pi/2; raise n_samples")
    theta = theta_ext[:-1]
    theta_turn = float(theta_ext[-1] - theta_ext[0])
    kappa = spec.curvature(t)

    # periodic residual splines for t(s) and theta(s)
    s_ext = np.concatenate([s_grid, [ell]])
    t_resid = np.concatenate([t, [TWO_PI]]) - (TWO_PI / ell) * s_ext
    th_resid = theta_ext - (theta_turn / ell) * s_ext
    t_spline = CubicSpline(s_ext, t_resid, bc_type="periodic")
    th_spline = CubicSpline(s_ext, th_resid, bc_type="periodic")

    return ArcCurve(spec=spec, ell=float(ell), s=s_grid, t=t, u=u, v=v,
                    theta=theta, kappa=kappa, theta_turn=theta_turn,
                    n_samples=n_samples, _t_resid=t_spline,
                    _theta_resid=th_spline)


def max_curvature(curve: ArcCurve) -> float:
    """Maximum |kappa| over the period, polished near the grid argmax."""
    i = int(np.argmax(np.abs(curve.kappa)))
    t0 = curve.t[i]
    h = TWO_PI / curve.n_samples * 4.0
    res = minimize_scalar(lambda t: -abs(float(curve.spec.curvature(t))),
                          bounds=(t0 - h, t0 + h), method="bounded",
                          options={"xatol": 1e-12})
    return max(float(np.abs(curve.kappa[i])), -float(res.fun))


def turning_delta(curve: ArcCurve, tol: float = 1e-6):
    """Total turning theta(ell) - theta(0) and its integer multiple of 2*pi.

    Returns (delta, m) with delta = 2*pi*m enforced within tol.
    """
    m = round(curve.theta_turn / TWO_PI)
    resid = abs(curve.theta_turn - TWO_PI * m)
    if resid > tol:
        raise NotMultipleOf2Pi(
            f"theta turn {curve.theta_turn!r} is {resid:.2e} away from "
            f"2*pi*{m}; sampling too coarse")
    return curve.theta_turn, m

import math

import numpy as np
import pytest

from cylcurve import (CurveSpec, build_curve, max_curvature,
                      reparametrize_arclength, turning_delta)
from cylcurve.curves import TWO_PI
from cylcurve.errors import NonFinite, NonRegular, NotMultipleOf2Pi

# quadrature-oracle arc lengths (1000-panel Gauss-Legendre of the analytic
# speed, frozen)
SIN_ELL = 7.640395578055423
PROLATE_ELL = 10.505022269844503


def test_line_arclength_is_two_pi(line):
    assert line.ell == pytest.approx(TWO_PI, abs=1e-12)


def test_sin_curve_arclength_matches_quadrature_oracle():
    c = reparametrize_arclength(CurveSpec(y_sin=(1.0,)))
    assert c.ell == pytest.approx(SIN_ELL, abs=1e-10)


def test_prolate_arclength_matches_quadrature_oracle(prolate):
    assert prolate.ell == pytest.approx(PROLATE_ELL, abs=1e-8)


def test_prolate_max_curvature_closed_form(prolate):
    # A / (1 - A)^2 at the cusp-side extreme, with A = 1.5
    assert max_curvature(prolate) == pytest.approx(6.0, abs=1e-9)


def test_unit_speed_parametrization(prolate):
    s = np.linspace(0.0, prolate.ell, 257)
    th = prolate.tangent_angle(s)
    x, y = prolate.point(s)
    h = 1e-6
    xp = (np.asarray(prolate.point(s + h)[0]) - x) / h
    yp = (np.asarray(prolate.point(s + h)[1]) - y) / h
    assert np.max(np.hypot(xp - np.cos(th), yp - np.sin(th))) < 1e-4


def test_period_advance(prolate):
    s = np.linspace(0.0, prolate.ell, 33)
    u0, v0 = prolate.point(s)
    u1, v1 = prolate.point(s + prolate.ell)
    assert np.max(np.abs(np.asarray(u1) - np.asarray(u0) - TWO_PI)) < 1e-9
    assert np.max(np.abs(np.asarray(v1) - np.asarray(v0))) < 1e-9


def test_t_of_s_is_monotone(prolate):
    s = np.linspace(0.0, prolate.ell, 1025)
    t = np.asarray(prolate.t_of_s(s))
    assert np.all(np.diff(t) > 0)


def test_curvature_is_tangent_angle_derivative(prolate):
    s = np.linspace(0.1, prolate.ell - 0.1, 101)
    h = 1e-5
    num = (np.asarray(prolate.tangent_angle(s + h))
           - np.asarray(prolate.tangent_angle(s - h))) / (2 * h)
    assert np.max(np.abs(num - np.asarray(prolate.curvature(s)))) < 1e-5


def test_turning_delta_prolate(prolate):
    delta, m = turning_delta(prolate)
    assert m == -1
    assert delta == pytest.approx(-TWO_PI, abs=1e-9)


def test_turning_delta_periodic_theta(remark2):
    _, m = turning_delta(remark2)
    assert m == 0


def test_cusp_curve_rejected():
    # common cycloid: speed vanishes at t = 0
    with pytest.raises(NonRegular):
        build_curve(CurveSpec(x_sin=(-1.0,), y_cos=(-1.0,)))


def test_nonfinite_rejected():
    with pytest.raises(NonFinite):
        build_curve(CurveSpec(x_sin=(float("nan"),)))


def test_arclength_converges_with_sampling():
    spec = CurveSpec(x_sin=(-1.5,), y_cos=(-1.5,), y_const=1.0)
    a = reparametrize_arclength(spec, 4096)
    b = reparametrize_arclength(spec, 8192)
    assert abs(a.ell - b.ell) / b.ell < 1e-6
    assert abs(max_curvature(a) - max_curvature(b)) / 6.0 < 1e-6


def test_spec_roundtrip():
    spec = CurveSpec(x_cos=(0.1,), x_sin=(-1.5, 0.2), y_const=0.3,
                     y_cos=(1.0,), y_sin=(0.0, 0.4), label="rt")
    again = CurveSpec.from_dict(spec.to_dict())
    assert again == spec

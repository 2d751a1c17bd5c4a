import math

import numpy as np
import pytest

from cylcurve import (CurveSpec, Loop, extract_winding_one_subloop,
                      find_crossings, minimal_subloop,
                      perturb_to_general_position, reparametrize_arclength,
                      winding_number)
from cylcurve.curves import TWO_PI
from cylcurve.errors import GeneralPositionFailed, NotALoop, NotSimple
from cylcurve.topology import SIMPLE, TANGENTIAL

from conftest import load_curve, load_spec

# frozen from the refined crossing of the prolate fixture (independent check:
# t* solves t = 1.5 sin t, crossing at p(+-t*))
PROLATE_S1 = 8.938247879076933
PROLATE_S2 = 12.071796660612069
PROLATE_ALPHA = 1.0710915812813928


def test_prolate_single_simple_crossing(prolate):
    crossings = find_crossings(prolate)
    assert len(crossings) == 1
    c = crossings[0]
    assert c.winding == 0
    assert c.simplicity == SIMPLE
    assert c.s1 == pytest.approx(PROLATE_S1, abs=1e-8)
    assert c.s2 == pytest.approx(PROLATE_S2, abs=1e-8)
    assert c.alpha == pytest.approx(PROLATE_ALPHA, abs=1e-6)
    assert c.residual < 1e-10


def test_crossing_closes_on_the_plane(prolate):
    c = find_crossings(prolate)[0]
    a, b = c.s1, c.s2 - c.winding * prolate.ell
    ua, va = prolate.point(a)
    ub, vb = prolate.point(b)
    assert math.hypot(ub - ua, vb - va) < 1e-9


def test_line_has_no_crossings(line):
    assert find_crossings(line) == []


def test_remark3_windings(remark3):
    crossings = find_crossings(remark3)
    assert sorted(c.winding for c in crossings) == [-1, -1, 0]
    assert all(c.simplicity == SIMPLE for c in crossings)


def test_wind2_has_deep_windings(wind2):
    crossings = find_crossings(wind2)
    assert min(c.winding for c in crossings) == -2
    assert all(c.simplicity == SIMPLE for c in crossings)


def test_full_period_winds_once(prolate):
    assert winding_number(prolate, 0.0, prolate.ell) == 1


def test_winding_number_rejects_open_interval(prolate):
    with pytest.raises(NotALoop):
        winding_number(prolate, 0.0, 1.0)


def test_minimal_subloop_is_idempotent(prolate):
    crossings = find_crossings(prolate)
    c = crossings[0]
    loop = Loop(c.s1, c.s2, "cylinder", c.winding)
    m = minimal_subloop(prolate, loop, crossings)
    m2 = minimal_subloop(prolate, m, crossings)
    assert (m2.a, m2.b, m2.winding) == (m.a, m.b, m.winding)


def test_minimal_subloop_of_full_period(prolate):
    m = minimal_subloop(prolate, Loop(0.0, prolate.ell, "cylinder", 1))
    assert m.winding in (-1, 0, 1)
    assert m.length < prolate.ell


def test_extract_methods_agree_on_wind2(wind2):
    crossings = find_crossings(wind2)
    c = min(crossings, key=lambda c: c.winding)      # winding -2
    loop = Loop(c.s2, c.s1 + wind2.ell, "cylinder", 1 - c.winding)
    rec = extract_winding_one_subloop(wind2, loop, crossings, "recursive")
    enu = extract_winding_one_subloop(wind2, loop, crossings, "enumerate")
    for sub in (rec, enu):
        assert sub.winding == 1
        assert loop.a <= sub.a < sub.b < loop.b + 1e-9
        assert winding_number(wind2, sub.a, sub.b) == 1


def test_extract_rejects_winding_one_input(prolate):
    with pytest.raises(ValueError):
        extract_winding_one_subloop(prolate, Loop(0.0, prolate.ell,
                                                  "cylinder", 1))


def test_tangential_crossing_detected():
    curve = load_curve("tangent", 65536)
    crossings = find_crossings(curve)
    kinds = sorted(c.simplicity for c in crossings)
    assert TANGENTIAL in kinds
    assert SIMPLE in kinds          # the persistent winding-0 crossing


def test_perturbation_resolves_tangency():
    spec = load_spec("tangent")
    seen = set()
    for seed in (0, 1):
        out = perturb_to_general_position(spec, 1e-4, seed, n_samples=65536)
        crossings = find_crossings(reparametrize_arclength(out, 65536))
        assert all(c.simplicity == SIMPLE for c in crossings)
        # quadratic tangency: the touching pair either separates or splits
        # in two; the pre-existing winding-0 crossing always remains
        new = [c for c in crossings if c.winding != 0]
        assert len(new) in (0, 2)
        seen.add(len(new))
    assert seen == {0, 2}


def test_perturbation_is_deterministic():
    spec = load_spec("tangent")
    a = perturb_to_general_position(spec, 1e-4, 1, n_samples=65536)
    b = perturb_to_general_position(spec, 1e-4, 1, n_samples=65536)
    assert a == b


def test_perturbation_zero_magnitude_fails():
    spec = load_spec("tangent")
    with pytest.raises(GeneralPositionFailed):
        perturb_to_general_position(spec, 0.0, 1, n_samples=65536)


def test_extract_requires_simple_crossings():
    curve = load_curve("tangent", 65536)
    crossings = find_crossings(curve)
    with pytest.raises(NotSimple):
        extract_winding_one_subloop(curve, Loop(0.0, 2.0 * curve.ell,
                                                "cylinder", 2), crossings)


def test_detection_is_deterministic(remark3):
    a = find_crossings(remark3)
    b = find_crossings(remark3)
    assert a == b


def _mirrored(spec):
    # x -> -x reflection (with reversed parameter): negate x_cos and y_sin
    return CurveSpec(
        x_cos=tuple(-c for c in spec.x_cos), x_sin=spec.x_sin,
        y_const=spec.y_const, y_cos=spec.y_cos,
        y_sin=tuple(-c for c in spec.y_sin), label=spec.label + "-mirror")


@pytest.mark.parametrize("name", ["prolate", "remark1", "remark3"])
def test_mirror_symmetry_metamorphic(name):
    spec = load_spec(name)
    c1 = reparametrize_arclength(spec)
    c2 = reparametrize_arclength(_mirrored(spec))
    assert c1.ell == pytest.approx(c2.ell, rel=1e-10)
    x1 = find_crossings(c1)
    x2 = find_crossings(c2)
    assert len(x1) == len(x2)
    d1 = sorted(abs(c.s2 - c.s1 - c.winding * c1.ell) for c in x1)
    d2 = sorted(abs(c.s2 - c.s1 - c.winding * c2.ell) for c in x2)
    assert np.allclose(d1, d2, atol=1e-7)


def test_crossing_params_converge(prolate):
    fine = reparametrize_arclength(prolate.spec, 8192)
    c1 = find_crossings(prolate)[0]
    c2 = find_crossings(fine)[0]
    assert abs(c1.s1 - c2.s1) / prolate.ell < 1e-6
    assert abs(c1.s2 - c2.s2) / prolate.ell < 1e-6

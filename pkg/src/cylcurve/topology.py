"""Cylinder projection, crossing detection and classification, winding
numbers, and sub-loop extraction.

The curve is projected to the cylinder S^1 x R by P(s) = (u(s) mod 2*pi,
v(s)).  A crossing is an unordered pair of parameters mod ell mapping to the
same cylinder point.  Each crossing is stored with the representative pair
(s1, s2), s1 in [0, ell), s1 < s2 < s1 + ell, whose loop has the winding
number of smallest magnitude among the two complementary choices; with that
choice the translate identity p(s2) = p(s1 + k*ell) holds directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from .curves import TWO_PI, ArcCurve, CurveSpec, build_curve, \
    reparametrize_arclength
from .errors import GeneralPositionFailed, NoCrossingFound, NotALoop, \
    NotSimple, ResolutionTooCoarse, WindingToleranceExceeded

#: |(u(b)-u(a))/2pi - round(...)| above this is a hard error
WINDING_TOL = 1e-6

#: crossings with tangent angle closer than this to {0, pi} are tangential
ANGLE_FLOOR = 1e-3

SIMPLE = "Simple"
TANGENTIAL = "Tangential"
MULTIPLE = "Multiple"


def closure_tolerance(curve: ArcCurve) -> float:
    return 1e-9 * max(1.0, curve.ell)


@dataclass(frozen=True)
class CylinderPoint:
    phi: float  # in [0, 2*pi)
    v: float

    def __post_init__(self):
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)
        object.__setattr__(self, "v", float(self.v))

    def distance(self, other):
        dphi = abs(self.phi - other.phi)
        dphi = min(dphi, TWO_PI - dphi)
        return math.hypot(dphi, self.v - other.v)


@dataclass(frozen=True)
class Crossing:
    s1: float
    s2: float
    point: CylinderPoint
    winding: int
    alpha: float
    simplicity: str
    residual: float

    @property
    def loop_length(self):
        return self.s2 - self.s1


@dataclass(frozen=True)
class Loop:
    """Closed sub-arc [a, b].  For a CylinderLoop P(a) = P(b); for a
    PlaneLoop p(b) = p(a) + (2*pi*k, 0) with the matching winding k
    (k = 0 is a genuine planar loop)."""

    a: float
    b: float
    kind: str  # "plane" | "cylinder"
    winding: int

    @property
    def length(self):
        return self.b - self.a


def project(curve: ArcCurve, s: float) -> CylinderPoint:
    u, v = curve.point(s)
    return CylinderPoint(u, v)


def winding_number(curve: ArcCurve, a: float, b: float,
                   tol: float = None) -> int:
    """Winding number of the loop {P(s): s in [a, b]} around the cylinder."""
    tol = tol if tol is not None else 1e3 * closure_tolerance(curve)
    if project(curve, a).distance(project(curve, b)) > tol:
        raise NotALoop(f"P({a}) != P({b}): interval is not a loop")
    ua, _ = curve.point(a)
    ub, _ = curve.point(b)
    k = (ub - ua) / TWO_PI
    ki = round(k)
    if abs(k - ki) > WINDING_TOL:
        raise WindingToleranceExceeded(
            f"u-increment {ub - ua!r} is not a multiple of 2*pi "
            f"(residual {abs(k - ki):.2e})")
    return int(ki)


# -- crossing detection ----------------------------------------------------

def _newton_refine(curve, s1, s2, max_iter=40):
    """Polish P(s1) = P(s2) with 2D Newton on the lifted u difference.

    Returns (s1, s2, residual) or None if the iteration diverges.
    """
    k0 = round(float(curve.point(s2)[0] - curve.point(s1)[0]) / TWO_PI)
    tol = closure_tolerance(curve)
    step_cap = 8.0 * curve.ell / curve.n_samples
    for _ in range(max_iter):
        u1, v1 = curve.point(s1)
        u2, v2 = curve.point(s2)
        f1 = u2 - u1 - TWO_PI * k0
        f2 = v2 - v1
        res = math.hypot(f1, f2)
        th1 = curve.tangent_angle(s1)
        th2 = curve.tangent_angle(s2)
        # d/ds1 = -(cos th1, sin th1), d/ds2 = (cos th2, sin th2)
        a, b = -math.cos(th1), math.cos(th2)
        c, d = -math.sin(th1), math.sin(th2)
        det = a * d - b * c
        if abs(det) < 1e-12:
            return None
        d1 = (d * f1 - b * f2) / det
        d2 = (-c * f1 + a * f2) / det
        n = math.hypot(d1, d2)
        if n > step_cap:
            d1 *= step_cap / n
            d2 *= step_cap / n
        s1, s2 = s1 - d1, s2 - d2
        if res < 0.1 * tol and n < 0.1 * tol:
            return s1, s2, res
    u1, v1 = curve.point(s1)
    u2, v2 = curve.point(s2)
    res = math.hypot(u2 - u1 - TWO_PI * k0, v2 - v1)
    if res < tol:
        return s1, s2, res
    return None


def _seg_intersect(p0, p1, q0, q1):
    """Parameters (t, u) in [0,1]^2 of the intersection of two segments,
    or None."""
    r = (p1[0] - p0[0], p1[1] - p0[1])
    s = (q1[0] - q0[0], q1[1] - q0[1])
    den = r[0] * s[1] - r[1] * s[0]
    if den == 0.0:
        return None
    dx, dy = q0[0] - p0[0], q0[1] - p0[1]
    t = (dx * s[1] - dy * s[0]) / den
    u = (dx * r[1] - dy * r[0]) / den
    eps = 1e-9
    if -eps <= t <= 1 + eps and -eps <= u <= 1 + eps:
        return t, u
    return None


def _candidate_pairs(u, v, n):
    """Indices (i, j) of non-adjacent polyline segments sharing a hash cell
    of the cylinder strip.  Segment i joins sample i to i+1 (mod n, with the
    wrap segment shifted by 2*pi in u)."""
    phi = u % TWO_PI
    du = np.abs(np.diff(np.concatenate([u, [u[0] + TWO_PI]])))
    dv = np.abs(np.diff(np.concatenate([v, [v[0]]])))
    hmax = float(np.max(np.hypot(du, dv)))
    cell = max(2.0 * hmax, 1e-9)
    nphi = max(1, int(TWO_PI / cell))
    cell_phi = TWO_PI / nphi

    grid = {}
    phi_ext = np.concatenate([phi, [phi[0]]])
    v_ext = np.concatenate([v, [v[0]]])
    for i in range(n):
        p0, p1 = phi_ext[i], phi_ext[i + 1]
        # endpoints may sit on opposite sides of the seam
        if abs(p0 - p1) > math.pi:
            if p0 < p1:
                p0 += TWO_PI
            else:
                p1 += TWO_PI
        lo, hi = min(p0, p1), max(p0, p1)
        vlo, vhi = min(v_ext[i], v_ext[i + 1]), max(v_ext[i], v_ext[i + 1])
        ix0 = int(lo / cell_phi)
        ix1 = int(hi / cell_phi)
        iy0 = int(math.floor(vlo / cell))
        iy1 = int(math.floor(vhi / cell))
        for ix in range(ix0, ix1 + 1):
            for iy in range(iy0, iy1 + 1):
                grid.setdefault((ix % nphi, iy), []).append(i)

    pairs = set()
    for members in grid.values():
        if len(members) < 2:
            continue
        for i, j in combinations(members, 2):
            if abs(i - j) <= 1 or abs(i - j) >= n - 1:
                continue
            pairs.add((i, j) if i < j else (j, i))
    return pairs


def find_crossings(curve: ArcCurve) -> list:
    """All crossings of the compact cylinder curve, Newton-refined and
    canonicalized to the minimal-|winding| representative pair."""
    u, v, s = curve.u, curve.v, curve.s
    n = curve.n_samples
    ell = curve.ell
    h = ell / n
    u_ext = np.concatenate([u, [u[0] + TWO_PI]])
    v_ext = np.concatenate([v, [v[0]]])
    s_ext = np.concatenate([s, [ell]])

    raw = []
    unresolved = []
    for i, j in sorted(_candidate_pairs(u, v, n)):
        pi0 = (u_ext[i], v_ext[i])
        pi1 = (u_ext[i + 1], v_ext[i + 1])
        base_shift = round((0.5 * (pi0[0] + pi1[0])
                            - 0.5 * (u_ext[j] + u_ext[j + 1])) / TWO_PI)
        for dk in (-1, 0, 1):
            shift = TWO_PI * (base_shift + dk)
            q0 = (u_ext[j] + shift, v_ext[j])
            q1 = (u_ext[j + 1] + shift, v_ext[j + 1])
            hit = _seg_intersect(pi0, pi1, q0, q1)
            if hit is None:
                continue
            t, w = hit
            si = s_ext[i] + t * (s_ext[i + 1] - s_ext[i])
            sj = s_ext[j] + w * (s_ext[j + 1] - s_ext[j])
            ref = _newton_refine(curve, si, sj)
            if ref is None:
                unresolved.append((si, sj))
                continue
            raw.append((ref[0], ref[1], ref[2]))

    # reduce to unordered pairs mod ell and dedupe
    # wide enough to absorb the ill-conditioned duplicate solutions a
    # tangential crossing produces under Newton iteration
    merge_tol = 1e-5 * max(1.0, ell)
    uniq = []
    for s1, s2, res in raw:
        r1, r2 = sorted((s1 % ell, s2 % ell))
        cyc = min(r2 - r1, ell - (r2 - r1))
        if cyc < 3.0 * h:
            continue  # spurious near-diagonal solution
        for q in uniq:
            if abs(q[0] - r1) < merge_tol and abs(q[1] - r2) < merge_tol:
                break
        else:
            uniq.append((r1, r2, res))

    # a polyline intersection that Newton cannot resolve and that is not
    # explained by an accepted crossing means the sampling is too coarse
    for si, sj in unresolved:
        r1, r2 = sorted((si % ell, sj % ell))
        if not any(abs(q[0] - r1) < 3 * h and abs(q[1] - r2) < 3 * h
                   for q in uniq):
            raise ResolutionTooCoarse(
                f"crossing candidate near ({r1:.6f}, {r2:.6f}) could not "
                f"be refined; raise n_samples")

    crossings = []
    for r1, r2, res in sorted(uniq):
        kd = round(float(curve.point(r2)[0] - curve.point(r1)[0]) / TWO_PI)
        kc = 1 - kd  # winding of the complementary loop [r2, r1 + ell]
        if abs(kd) <= abs(kc):
            s1, s2, k = r1, r2, kd
        else:
            s1, s2, k = r2, r1 + ell, kc
        th1 = curve.tangent_angle(s1)
        th2 = curve.tangent_angle(s2)
        dth = (th2 - th1 + math.pi) % TWO_PI - math.pi
        # crossing angle between the two branches, measured so that the
        # curvilinear-polygon turning identity reads pi + alpha
        alpha = math.pi - abs(dth)
        cr = Crossing(s1=float(s1), s2=float(s2),
                      point=project(curve, s1), winding=int(k),
                      alpha=float(alpha), simplicity=SIMPLE,
                      residual=float(res))
        crossings.append(replace(cr, simplicity=classify_crossing(curve, cr)))
    crossings.sort(key=lambda c: c.s1)
    return crossings


def classify_crossing(curve: ArcCurve, crossing: Crossing) -> str:
    """Simple / Tangential / Multiple per crossing angle and clustering."""
    if min(crossing.alpha, math.pi - crossing.alpha) < ANGLE_FLOOR:
        return TANGENTIAL
    radius = 10.0 * closure_tolerance(curve)
    # any third parameter branch through the same cylinder point?
    pt = crossing.point
    phi_d = np.abs((curve.u - pt.phi + math.pi) % TWO_PI - math.pi)
    d = np.hypot(phi_d, curve.v - pt.v)
    h = curve.ell / curve.n_samples
    near = np.nonzero(d < max(radius, 2.0 * h))[0]
    branches = 0
    if near.size:
        groups = np.split(near, np.nonzero(np.diff(near) > 2)[0] + 1)
        if near[0] == 0 and near[-1] == curve.n_samples - 1 and len(groups) > 1:
            groups[0] = np.concatenate([groups[-1], groups[0]])
            groups = groups[:-1]
        for g in groups:
            ss = curve.s[g]
            # refine closest approach of this branch to the point
            d0 = float(np.min(d[g]))
            if d0 > radius:
                smid = float(ss[int(np.argmin(d[g]))])
                d0 = _branch_distance(curve, smid, pt)
            if d0 < radius:
                branches += 1
    if branches > 2:
        return MULTIPLE
    return SIMPLE


def _branch_distance(curve, s0, pt, iters=50):
    """Distance from the curve near s0 to a cylinder point, by local
    golden-section polish."""
    h = 2.0 * curve.ell / curve.n_samples

    def f(s):
        return project(curve, s).distance(pt)

    lo, hi = s0 - h, s0 + h
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    for _ in range(iters):
        if f(c) < f(d):
            b = d
        else:
            a = c
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
    return f(0.5 * (a + b))


# -- sub-loop machinery ----------------------------------------------------

def _crossing_reps(crossings, ell, a, b, tol=1e-9):
    """For each crossing, the sorted parameter representatives inside
    [a, b] (lifted by multiples of ell).  Yields (index, [values])."""
    for idx, c in enumerate(crossings):
        vals = []
        for base in (c.s1 % ell, c.s2 % ell):
            j0 = math.floor((a - base) / ell)
            for j in range(int(j0), int(j0) + int((b - a) / ell) + 3):
                val = base + j * ell
                if a - tol <= val <= b + tol:
                    vals.append(min(max(val, a), b))
        vals = sorted(set(round(v, 12) for v in vals))
        # merge near-duplicates
        merged = []
        for v in vals:
            if not merged or v - merged[-1] > 1e-8 * max(1.0, ell):
                merged.append(v)
        if len(merged) >= 1:
            yield idx, merged


def _pairs_in(curve, crossings, a, b, cyclic=False):
    """Crossing pairs (r1, r2, winding, idx) with a <= r1 < r2 <= b.

    With cyclic=True (input loop is the full compact curve), wrap-around
    sub-loops through the base point are included as (r2, r1 + (b - a)).
    """
    ell = curve.ell
    out = []
    for idx, reps in _crossing_reps(crossings, ell, a, b):
        for r1, r2 in combinations(reps, 2):
            k = round(float(curve.point(r2)[0] - curve.point(r1)[0]) / TWO_PI)
            out.append((r1, r2, k, idx))
        if cyclic:
            for r1, r2 in combinations(reps, 2):
                # complement loop through the a ~ b junction
                rr1, rr2 = r2, r1 + (b - a)
                k = round(float(curve.point(rr2)[0]
                                - curve.point(rr1)[0]) / TWO_PI)
                out.append((rr1, rr2, k, idx))
    return sorted(out)


def minimal_subloop(curve: ArcCurve, loop: Loop,
                    crossings=None) -> Loop:
    """Shrink a cylinder loop to a sub-loop containing no proper sub-loop.

    For a full-period input the compact curve is treated cyclically, so the
    result may pass through the former base point (then b > ell is
    possible).  The result's winding is in {-1, 0, 1}.
    """
    if crossings is None:
        crossings = find_crossings(curve)
    w = winding_number(curve, loop.a, loop.b)
    cyclic = abs(loop.length - curve.ell) < 1e-9 * max(1.0, curve.ell)
    eps = 1e-9 * max(1.0, curve.ell)
    cands = [(r2 - r1, r1, r2, k)
             for r1, r2, k, _ in _pairs_in(curve, crossings, loop.a, loop.b,
                                           cyclic=cyclic)
             if not (abs(r1 - loop.a) < eps and abs(r2 - loop.b) < eps)]
    if not cands:
        if abs(w) > 1:
            raise NoCrossingFound(
                "loop has |winding| > 1 but no internal crossing")
        return loop
    d, r1, r2, k = min(cands)
    if abs(k) > 1:
        raise WindingToleranceExceeded(
            f"minimal sub-loop has winding {k}; detection is inconsistent")
    return Loop(a=float(r1), b=float(r2), kind="cylinder", winding=int(k))


# -- winding-one extraction (inductive splitting + enumeration oracle) -----

class _Path:
    """Closed path on the cylinder given as a chain of parameter intervals
    [(p_i, q_i)]; consecutive intervals join at equal cylinder points and
    the chain closes up."""

    def __init__(self, curve, segments):
        self.curve = curve
        self.segments = [(float(p), float(q)) for p, q in segments]
        self.lengths = [q - p for p, q in self.segments]
        self.cum = np.concatenate([[0.0], np.cumsum(self.lengths)])
        self.L = float(self.cum[-1])
        lift = 0.0
        self._lift0 = []
        for p, q in self.segments:
            self._lift0.append(lift)
            lift += float(curve.point(q)[0] - curve.point(p)[0])
        self.total_dU = lift

    @property
    def winding(self):
        k = self.total_dU / TWO_PI
        ki = round(k)
        if abs(k - ki) > WINDING_TOL:
            raise WindingToleranceExceeded(
                f"path u-increment {self.total_dU!r} not a 2*pi multiple")
        return int(ki)

    def s_of(self, lam):
        i = int(np.clip(np.searchsorted(self.cum, lam, side="right") - 1,
                        0, len(self.segments) - 1))
        return self.segments[i][0] + (lam - self.cum[i])

    def positions_of(self, value_sets):
        """Path coordinates of crossing representatives.

        value_sets: iterable of (idx, values-in-lifted-s mod ell).
        Returns {idx: sorted positions}."""
        ell = self.curve.ell
        out = {}
        for idx, bases in value_sets:
            pos = []
            for i, (p, q) in enumerate(self.segments):
                for base in bases:
                    j0 = math.floor((p - base) / ell)
                    for j in range(int(j0), int(j0) + int((q - p) / ell) + 3):
                        val = base + j * ell
                        if p - 1e-9 <= val <= q + 1e-9:
                            pos.append(self.cum[i]
                                       + min(max(val, p), q) - p)
            pos = sorted(pos)
            merged = []
            for v in pos:
                if not merged or v - merged[-1] > 1e-8 * max(1.0, ell):
                    merged.append(v)
            if merged:
                out[idx] = merged
        return out

    def crossing_pairs(self, crossings):
        """Splittable pairs (lam1, lam2), excluding the whole-path pair."""
        ell = self.curve.ell
        vsets = [(i, (c.s1 % ell, c.s2 % ell))
                 for i, c in enumerate(crossings)]
        posmap = self.positions_of(vsets)
        eps = 1e-8 * max(1.0, ell)
        pairs = []
        for idx, pos in posmap.items():
            for l1, l2 in combinations(pos, 2):
                if l1 < eps and l2 > self.L - eps:
                    continue
                pairs.append((l1, l2, idx))
        return sorted(pairs)

    def sub(self, l1, l2):
        segs = []
        for i, (p, q) in enumerate(self.segments):
            lo = max(l1, self.cum[i])
            hi = min(l2, self.cum[i + 1])
            if hi - lo > 1e-12:
                segs.append((p + lo - self.cum[i], p + hi - self.cum[i]))
        return _Path(self.curve, segs)

    def complement(self, l1, l2):
        segs = []
        for part_lo, part_hi in ((l2, self.L), (0.0, l1)):
            for i, (p, q) in enumerate(self.segments):
                lo = max(part_lo, self.cum[i])
                hi = min(part_hi, self.cum[i + 1])
                if hi - lo > 1e-12:
                    segs.append((p + lo - self.cum[i],
                                 p + hi - self.cum[i]))
        return _Path(self.curve, segs)

    def as_interval(self):
        if len(self.segments) == 1:
            return self.segments[0]
        # adjacent segments that continue each other can be merged
        merged = [list(self.segments[0])]
        for p, q in self.segments[1:]:
            if abs(p - merged[-1][1]) < 1e-10:
                merged[-1][1] = q
            else:
                merged.append([p, q])
        if len(merged) == 1:
            return tuple(merged[0])
        return None


def _recurse_winding_one(path, crossings, depth=0):
    """Inductive splitting: returns (lam_a, lam_b), a sub-interval of the
    path's own coordinate [0, L] whose loop has winding exactly 1, with
    lam_b < L."""
    if depth > 4 * len(crossings) + 16:
        raise NoCrossingFound("winding-one recursion did not terminate")
    W = path.winding
    pairs = path.crossing_pairs(crossings)
    if not pairs:
        raise NoCrossingFound(
            f"loop with winding {W} has no internal crossing")
    l1, l2, _ = pairs[0]  # deterministic: smallest start, then smallest end
    inner = path.sub(l1, l2)
    k1 = inner.winding
    k2 = W - k1

    def resolve(la, lb):
        # candidate winding-one interval in path coordinates
        if lb <= path.L - 1e-12:
            return la, lb
        # wraps the base point: take the complement within this path
        la2, lb2 = lb - path.L, la
        comp = path.sub(la2, lb2)
        if comp.winding == 1:
            return la2, lb2
        r = _recurse_winding_one(comp, crossings, depth + 1)
        return la2 + r[0], la2 + r[1]

    if k1 == 1:
        return resolve(l1, l2)
    if k2 == 1:
        # complement loop [l2, L] + [0, l1]: wraps unless l1 == 0
        if l1 < 1e-12:
            return resolve(l2, path.L)  # triggers complement handling
        return resolve(l2, l1 + path.L)
    if k1 >= 2:
        r = _recurse_winding_one(inner, crossings, depth + 1)
        return resolve(l1 + r[0], l1 + r[1])
    # k1 <= 0, so k2 >= 2: recurse on the re-based complement
    outer = path.complement(l1, l2)
    r = _recurse_winding_one(outer, crossings, depth + 1)
    # outer coordinate lam maps to path coordinate l2 + lam (mod L)
    la = l2 + r[0]
    lb = l2 + r[1]
    if la >= path.L - 1e-12:
        la -= path.L
        lb -= path.L
    return resolve(la, lb)


def extract_winding_one_subloop(curve: ArcCurve, loop: Loop,
                                crossings=None,
                                method: str = "recursive") -> Loop:
    """A contiguous sub-loop [a1, b1], a <= a1 < b1 < b, with winding 1.

    method: "recursive" follows the inductive splitting argument,
    "enumerate" scans all crossing pairs inside and returns the shortest
    winding-one pair.  Both raise NoCrossingFound when no internal crossing
    exists (topologically impossible for winding > 1, hence a numerical
    failure) and NotSimple when a non-simple crossing is present.
    """
    if crossings is None:
        crossings = find_crossings(curve)
    W = winding_number(curve, loop.a, loop.b)
    if W <= 1:
        raise ValueError(
            f"extract_winding_one_subloop requires winding > 1, got {W}")
    inside = _pairs_in(curve, crossings, loop.a, loop.b)
    for r1, r2, _, idx in inside:
        if crossings[idx].simplicity != SIMPLE:
            raise NotSimple(
                f"crossing at ({crossings[idx].s1:.6f}, "
                f"{crossings[idx].s2:.6f}) is {crossings[idx].simplicity}")

    if method == "enumerate":
        eps = 1e-9 * max(1.0, curve.ell)
        best = None
        for r1, r2, k, _ in inside:
            if k != 1 or r2 >= loop.b - eps:
                continue
            if best is None or (r2 - r1) < (best[1] - best[0]):
                best = (r1, r2)
        if best is None:
            raise NoCrossingFound(
                "no interior winding-one crossing pair found")
        return Loop(a=float(best[0]), b=float(best[1]), kind="cylinder",
                    winding=1)

    if method != "recursive":
        raise ValueError(f"unknown method {method!r}")
    path = _Path(curve, [(loop.a, loop.b)])
    la, lb = _recurse_winding_one(path, crossings)
    a1, b1 = loop.a + la, loop.a + lb
    return Loop(a=float(a1), b=float(b1), kind="cylinder", winding=1)


# -- general position ------------------------------------------------------

def perturb_to_general_position(spec: CurveSpec, magnitude: float,
                                seed: int, n_samples: int = None,
                                max_retries: int = 20) -> CurveSpec:
    """Add seeded Fourier jitter of sup-norm <= magnitude until every
    crossing classifies Simple.  Deterministic given the seed."""
    from .curves import DEFAULT_SAMPLES
    n_samples = n_samples or DEFAULT_SAMPLES

    def all_simple(sp):
        curve = reparametrize_arclength(sp, n_samples)
        return all(c.simplicity == SIMPLE for c in find_crossings(curve))

    build_curve(spec)
    if all_simple(spec):
        return spec
    if magnitude <= 0.0:
        raise GeneralPositionFailed(
            "curve is not in general position and magnitude is zero")

    rng = np.random.default_rng(seed)
    kmax = max(1, spec.harmonics) + 2
    pad = lambda c: tuple(c) + (0.0,) * (kmax - len(c))
    for _ in range(max_retries):
        raw = rng.standard_normal((4, kmax)) / np.arange(1, kmax + 1)**2
        # sup-norm of the planar jitter is bounded by the coefficient sums
        norm = math.hypot(np.abs(raw[:2]).sum(), np.abs(raw[2:]).sum())
        raw *= magnitude / norm
        cand = CurveSpec(
            x_cos=tuple(np.array(pad(spec.x_cos)) + raw[0]),
            x_sin=tuple(np.array(pad(spec.x_sin)) + raw[1]),
            y_const=spec.y_const,
            y_cos=tuple(np.array(pad(spec.y_cos)) + raw[2]),
            y_sin=tuple(np.array(pad(spec.y_sin)) + raw[3]),
            label=spec.label + "+jitter",
        )
        try:
            build_curve(cand)
        except Exception:
            continue
        if all_simple(cand):
            return cand
    raise GeneralPositionFailed(
        f"no general-position perturbation found in {max_retries} tries")

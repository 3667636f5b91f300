"""Sampling-based numerical checks of the quantitative geometry bounds.

Each check constructs explicit configurations in upper half-space,
measures the quantity of interest with the geometry primitives, and
compares against the claimed bound.  Results are collected into
SweepReport records that serialize to canonical JSON and CSV; a report
row passes exactly when its measured value does not exceed its bound.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .geom import (
    INFINITY,
    MoebiusMap,
    OrientedGeodesic,
    Point,
    Vector,
    NotNormalError,
    apply_to_point,
    direction_toward,
    geodesic_through,
    hexagon_solve,
    hyperbolic_point_distance,
    normalize_to_axis,
    point_to_geodesic_distance,
    translate_along,
)

__all__ = [
    "AngleCoordinates",
    "DegenerateFrameError",
    "SweepReport",
    "SweepRow",
    "angle_change_check",
    "angle_coordinates",
    "hexagon_asymptotics_check",
    "quasigeodesic_stability_check",
    "two_planes_angle_check",
]


class DegenerateFrameError(ValueError):
    """The angle-coordinate frame cannot be built from these inputs."""


@dataclass(frozen=True)
class AngleCoordinates:
    """Direction of a segment in the frame of a geodesic with a normal.

    theta is the angle to the geodesic's forward direction, phi the
    angle to the binormal of the plane spanned by the geodesic and the
    orthogonal reference geodesic; both lie in [0, pi].
    """

    theta: float
    phi: float

    def __post_init__(self):
        if not (-1e-12 <= self.theta <= math.pi + 1e-12):
            raise ValueError("theta out of range")
        if not (-1e-12 <= self.phi <= math.pi + 1e-12):
            raise ValueError("phi out of range")


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a sweep: parameters, worst measurement, bound."""

    params: tuple[tuple[str, object], ...]
    measured: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.measured <= self.bound


@dataclass(frozen=True)
class SweepReport:
    """Outcome of one sweep; passes when every row does."""

    name: str
    rows: tuple[SweepRow, ...]
    samples: int = 0
    rejected: int = 0
    stats: tuple[tuple[str, float], ...] = ()

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_json(self) -> str:
        obj = {
            "version": 1,
            "name": self.name,
            "samples": self.samples,
            "rejected": self.rejected,
            "stats": dict(self.stats),
            "rows": [
                {
                    "params": dict(r.params),
                    "measured": r.measured,
                    "bound": r.bound,
                    "pass": r.passed,
                }
                for r in self.rows
            ],
            "pass": self.passed,
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))

    def to_csv(self) -> str:
        keys = sorted({k for r in self.rows for k, _ in r.params})
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(keys + ["measured", "bound", "pass"])
        for r in self.rows:
            d = dict(r.params)
            writer.writerow(
                [d.get(k, "") for k in keys]
                + [repr(r.measured), repr(r.bound), str(r.passed).lower()]
            )
        return out.getvalue()


def _angle_between(v: Vector, w: Vector) -> float:
    dot = (v.horizontal * w.horizontal.conjugate()).real + v.vertical * w.vertical
    dot /= v.euclidean_norm() * w.euclidean_norm()
    return math.acos(max(-1.0, min(1.0, dot)))


def angle_coordinates(
    gamma: OrientedGeodesic,
    alpha: OrientedGeodesic,
    segment: tuple[Point, Point],
) -> AngleCoordinates:
    """Angles (theta, phi) of a segment leaving a framed geodesic.

    gamma carries the frame: its forward direction is the first frame
    vector, and alpha -- which must cross gamma orthogonally -- supplies
    the normal whose parallel transport along gamma completes the frame.
    The segment starts at a point of gamma; theta is its angle to
    gamma's direction and phi its angle to the binormal.
    """
    x, y = segment
    m = normalize_to_axis(gamma)
    a_img = alpha.apply(m)
    a, b = a_img.source, a_img.target
    if isinstance(a, type(INFINITY)) or isinstance(b, type(INFINITY)):
        raise DegenerateFrameError("alpha shares an endpoint with gamma")
    a, b = complex(a), complex(b)
    scale = abs(a) + abs(b)
    if min(abs(a), abs(b)) <= 1e-9 * scale:
        raise DegenerateFrameError("alpha shares an endpoint with gamma")
    if abs(a + b) > 1e-6 * scale:
        raise NotNormalError("alpha does not cross gamma orthogonally")
    chi = math.atan2(b.imag, b.real)

    x_img = apply_to_point(m, x)
    if abs(x_img.horizontal) > 1e-6 * x_img.height:
        raise ValueError("segment must start on gamma")
    x0 = Point(0j, x_img.height)
    y_img = apply_to_point(m, y)
    g = geodesic_through(x0, y_img)
    e = direction_toward(x0, g.target)
    theta = _angle_between(e, Vector(0j, 1.0))
    binormal = Vector(1j * complex(math.cos(chi), math.sin(chi)), 0.0)
    phi = _angle_between(e, binormal)
    return AngleCoordinates(theta=theta, phi=phi)


def _pairwise_distances(z: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Hyperbolic distance matrix for points (z_i, t_i)."""
    sq = np.abs(z[:, None] - z[None, :]) ** 2 + (t[:, None] - t[None, :]) ** 2
    coshd = 1.0 + sq / (2.0 * np.outer(t, t))
    return np.arccosh(np.maximum(coshd, 1.0))


def quasigeodesic_stability_check(
    delta: float, samples: int = 10000, seed: int = 0
) -> SweepReport:
    """Random quasigeodesics stay in the claimed chord neighborhood.

    Generates zigzag paths along the axis (0, infinity): vertices every
    0.1 of arclength, displaced transversally with alternating direction
    and near-maximal amplitude.  Every path is verified to satisfy the
    multiplicative-additive quasigeodesic inequality on the full net of
    vertex pairs before use; paths failing the pre-check are counted as
    rejected and regenerated at reduced amplitude.  The measured
    quantity is the largest distance of any net point to the axis, the
    bound is 5 * delta**(1/5).
    """
    if not 0.0 < delta <= 1e-2:
        raise ValueError("delta must lie in (0, 1e-2]")
    if samples < 1:
        raise ValueError("need at least one sample")
    eta = 5.0 * delta**0.2
    h = 0.1
    base_amp = min(eta / 4.0, 0.5 * h * math.sqrt(delta))
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0x6C5)))
    n_points = 0
    rejected = 0
    measured = 0.0
    while n_points < samples:
        span = float(rng.uniform(12.0, 20.0))
        n = int(span / h)
        s = np.arange(n + 1) * h
        draw = float(rng.uniform(0.0, 1.0))
        # stress bias: mostly maximal amplitude, a few tame or straight
        if draw < 0.05:
            scale = 0.0
        elif draw < 0.25:
            scale = float(rng.uniform(0.0, 1.0))
        else:
            scale = 1.0
        amp = base_amp * scale
        psi = (
            float(rng.uniform(0.0, 2.0 * math.pi))
            + np.arange(n + 1) * math.pi
            + rng.uniform(-0.3, 0.3, n + 1)
        )
        for _ in range(60):
            u = np.full(n + 1, amp)
            u[0] = u[-1] = 0.0
            z = np.exp(s) * np.tanh(u) * np.exp(1j * psi)
            t = np.exp(s) / np.cosh(u)
            dist = _pairwise_distances(z, t)
            seg = np.array([dist[i, i + 1] for i in range(n)])
            walk = np.concatenate(([0.0], np.cumsum(seg)))
            gap = np.abs(walk[:, None] - walk[None, :])
            lower_ok = np.all(dist >= gap / (1.0 + delta) - delta - 1e-12)
            upper_ok = np.all(dist <= (1.0 + delta) * gap + delta + 1e-12)
            if lower_ok and upper_ok:
                break
            rejected += 1
            amp *= 0.6
        else:
            raise RuntimeError("could not generate an admissible path")
        deviation = np.arcsinh(np.abs(z) / t)
        measured = max(measured, float(deviation.max()))
        n_points += n + 1
    row = SweepRow(params=(("delta", delta),), measured=measured, bound=eta)
    return SweepReport(
        name="quasigeodesic-stability",
        rows=(row,),
        samples=n_points,
        rejected=rejected,
        stats=(("eta", eta),),
    )


def hexagon_asymptotics_check(R_values) -> SweepReport:
    """Exact identities and the 5R/2 asymptotic for the hexagon spine.

    For each R the symmetric right-angled hexagon with alternating sides
    R/2 yields a perpendicular of length d1; a geodesic is placed at
    distance d1 from the axis point, giving d2 at height R, and the
    chord between the two height-R points is compared to 5R/2.  The two
    closed forms (cosh d1 and sinh d2) are identity rows with bound
    1e-9 on the relative residual; the chord rows are bounded by a
    fitted constant times exp(-R/2), with the fitted decay slope
    reported in the stats.
    """
    R_values = [float(R) for R in R_values]
    if not R_values:
        raise ValueError("need at least one R value")
    if any(R < 2.0 for R in R_values):
        raise ValueError("R values must be at least 2")
    rows = []
    chords = []
    for R in R_values:
        hexd = hexagon_solve(R / 2.0, R / 2.0, R / 2.0)
        d1 = hexd.duals[0].real
        target1 = math.cosh(R / 2.0) / (math.cosh(R / 2.0) - 1.0)
        res1 = abs(math.cosh(d1) - target1) / max(1.0, abs(target1))
        rows.append(
            SweepRow(params=(("R", R), ("check", "d1-identity")), measured=res1, bound=1e-9)
        )

        perpendicular = OrientedGeodesic(-1.0 + 0j, 1.0 + 0j)
        push = translate_along(perpendicular, d1)
        gamma1 = OrientedGeodesic(0j, INFINITY).apply(push)
        y1 = Point(0j, math.exp(R))
        d2 = point_to_geodesic_distance(y1, gamma1)
        target2 = math.sinh(d1) * math.cosh(R)
        res2 = abs(math.sinh(d2) - target2) / max(1.0, abs(target2))
        rows.append(
            SweepRow(params=(("R", R), ("check", "d2-identity")), measured=res2, bound=1e-9)
        )

        y2 = apply_to_point(translate_along(gamma1, R), y1)
        chord = hyperbolic_point_distance(y1, y2)
        chords.append((R, abs(chord - 2.5 * R)))
    fitted = max(res * math.exp(R / 2.0) for R, res in chords)
    for R, res in chords:
        rows.append(
            SweepRow(
                params=(("R", R), ("check", "chord-asymptotic")),
                measured=res,
                bound=fitted * math.exp(-R / 2.0) * (1.0 + 1e-12),
            )
        )
    stats = [("fitted_constant", fitted)]
    if len(chords) >= 2:
        xs = np.array([R for R, _ in chords])
        ys = np.log(np.maximum([res for _, res in chords], 1e-300))
        slope = float(np.polyfit(xs, ys, 1)[0])
        stats.append(("log_residual_slope", slope))
    return SweepReport(
        name="hexagon-asymptotics",
        rows=tuple(rows),
        samples=len(R_values),
        stats=tuple(stats),
    )


def two_planes_angle_check(
    eps: float, R: float, samples: int = 1000, seed: int = 0
) -> SweepReport:
    """Dihedral angle between two nearly-coplanar half-planes is small.

    Each sample builds a hyperbolic right triangle with legs b and d
    meeting orthogonally, measures the angle beta at the far end of leg
    b with tangent vectors, and compares two computations of the
    dihedral angle psi of the plane tilted by xi along that leg: the
    closed form sin^2 psi = sin^2 xi / (1 - sin^2 beta cos^2 xi) against
    a direct construction of the tilted normal on the unit tangent
    sphere.  Every psi must stay below 10 * eps / R and the two routes
    must agree to 1e-9.
    """
    if not 0.0 < eps < 0.1:
        raise ValueError("eps must lie in (0, 0.1)")
    if R < 10.0:
        raise ValueError("R must be at least 10")
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0x2B1)))
    leg_axis = OrientedGeodesic(-1.0 + 0j, 1.0 + 0j)
    corner = Point(0j, 1.0)
    xi_max = 4.0 * eps / R * math.exp(-R / 4.0)
    max_psi = 0.0
    max_disagreement = 0.0
    for _ in range(samples):
        b = float(rng.uniform(math.exp(-R / 4.0), 2.0))
        d = float(rng.uniform(1.0, R))
        xi = float(rng.uniform(-xi_max, xi_max))
        B = apply_to_point(translate_along(leg_axis, b), corner)
        C = Point(0j, math.exp(d))
        hyp = hyperbolic_point_distance(B, C)
        toward_corner = direction_toward(
            B, geodesic_through(B, corner).target
        )
        toward_far = direction_toward(B, geodesic_through(B, C).target)
        beta = _angle_between(toward_corner, toward_far)

        sin_beta = math.sinh(d) / math.sinh(hyp)
        sin_xi = math.sin(xi)
        s2 = sin_xi * sin_xi / (1.0 - sin_beta * sin_beta * math.cos(xi) ** 2)
        psi_formula = math.asin(min(1.0, math.sqrt(s2)))

        # direct route on the unit tangent sphere, with the measured beta:
        # rotate the vertical normal by xi about the leg direction, then
        # follow the tilted plane's great circle for the turn at B
        turn = math.atan2(sin_xi * math.sin(beta), math.cos(beta))
        # the angle whose cosine is cos(xi) cos(turn), read off through
        # its sine to stay accurate when both factors are close to 1
        psi_direct = math.atan2(
            math.hypot(sin_xi * math.cos(turn), math.sin(turn)),
            math.cos(xi) * math.cos(turn),
        )

        max_psi = max(max_psi, psi_formula)
        max_disagreement = max(max_disagreement, abs(psi_direct - psi_formula))
    rows = (
        SweepRow(
            params=(("eps", eps), ("R", R), ("check", "dihedral-bound")),
            measured=max_psi,
            bound=10.0 * eps / R,
        ),
        SweepRow(
            params=(("eps", eps), ("R", R), ("check", "route-agreement")),
            measured=max_disagreement,
            bound=1e-9,
        ),
    )
    return SweepReport(
        name="two-planes-angle", rows=rows, samples=samples
    )


def angle_change_check(
    rep_pair, p: int, samples: int = 1000, seed: int = 0
) -> SweepReport:
    """Angle coordinates barely move between two developed complexes.

    Both representations must develop the same complex at the same R;
    segments leave a shared cuff axis at matched points and end at the
    images of the base point under matched holonomy words.  The theta
    shift and the phi defect from pi/2 are each bounded by 1/(4p), their
    maximum by 1/p.  Samples whose endpoints are closer than R/2 are
    rejected and redrawn.
    """
    rho0, rho1 = rep_pair
    if rho0.complex != rho1.complex:
        raise ValueError("representations must develop the same complex")
    R = rho0.params.R
    if rho1.params.R != R:
        raise ValueError("representations must share R")
    if p < 2:
        raise ValueError("need p >= 2")
    if samples < 1:
        raise ValueError("need at least one sample")
    cutoff = 1.0 / (10000.0 * p * p)
    c = min(rho0.complex.regular_circles())
    gamma = OrientedGeodesic(0j, INFINITY)
    alpha = OrientedGeodesic(-1.0 + 0j, 1.0 + 0j)
    base_point = Point(0j, 1.0)
    flip = MoebiusMap(0, 1j, 1j, 0)
    word_mats = []
    for rho in (rho0, rho1):
        # generators of the pants on both sides of the circle, written in
        # the circle's left-oriented axis coordinates; words mixing the
        # two sides feel the bending of the deformed gluing
        placed = []
        for idx, (pi, si) in enumerate(rho.circle_sides[c]):
            frame = rho.measure_frames[c][idx]
            rep = rho.base_reps[pi]
            for g in (rep.gen1, rep.gen2):
                m = frame * g * frame.inverse()
                if idx == 1:
                    m = flip * m * flip
                placed.append(m)
        word_mats.append(placed + [g.inverse() for g in placed])
    n_letters = len(word_mats[0])

    rng = np.random.default_rng(np.random.SeedSequence((seed, 0x3A7)))
    max_theta = 0.0
    max_phi = 0.0
    max_combined = 0.0
    accepted = 0
    rejected = 0
    attempts = 0
    while accepted < samples:
        attempts += 1
        if attempts > 50 * samples:
            raise RuntimeError("could not draw enough admissible samples")
        t = float(rng.uniform(cutoff, R))
        sign = 1.0 if rng.uniform() < 0.5 else -1.0
        x = Point(0j, math.exp(sign * t))
        length = int(rng.integers(1, 4))
        word = []
        for _ in range(length):
            while True:
                letter = int(rng.integers(0, n_letters))
                if not word or letter != (word[-1] + n_letters // 2) % n_letters:
                    break
            word.append(letter)
        coords = []
        ok = True
        for mats in word_mats:
            m = mats[word[0]]
            for letter in word[1:]:
                m = m * mats[letter]
            y = apply_to_point(m, base_point)
            if hyperbolic_point_distance(x, y) < R / 2.0:
                ok = False
                break
            coords.append(angle_coordinates(gamma, alpha, (x, y)))
        if not ok:
            rejected += 1
            continue
        accepted += 1
        d_theta = abs(coords[0].theta - coords[1].theta)
        d_phi = abs(coords[1].phi - math.pi / 2.0)
        max_theta = max(max_theta, d_theta)
        max_phi = max(max_phi, d_phi)
        max_combined = max(
            max_combined, max(d_theta, abs(coords[0].phi - coords[1].phi))
        )
    rows = (
        SweepRow(
            params=(("p", p), ("R", R), ("check", "theta-shift")),
            measured=max_theta,
            bound=1.0 / (4.0 * p),
        ),
        SweepRow(
            params=(("p", p), ("R", R), ("check", "phi-orthogonality")),
            measured=max_phi,
            bound=1.0 / (4.0 * p),
        ),
        SweepRow(
            params=(("p", p), ("R", R), ("check", "combined")),
            measured=max_combined,
            bound=1.0 / p,
        ),
    )
    return SweepReport(
        name="angle-change",
        rows=rows,
        samples=accepted,
        rejected=rejected,
    )

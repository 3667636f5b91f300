"""Holonomy representations of pants complexes.

build_rho places one skew pair of pants per vertex of the complex,
glued along the regular circles with prescribed half-lengths and
shearing parameters, and assigns loxodromic root holonomies to the
singular circles.  The perturbation family is parametrized by tau in
[0, 1]: at tau = 0 every half-length is R/2 and every shear is 1, and
at tau = 1 the per-circle offsets (xi, eta) are fully switched on.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .complexes import PantsComplex, graph_of
from .geom import (
    MoebiusMap,
    OrientedGeodesic,
    Point,
    apply_to_point,
    complex_translation_length,
    hyperbolic_point_distance,
    point_to_geodesic_distance,
)
from .pants import PantsRep, build_pants_rep, cuff_frame, foot_of, measured_halflength, shear

__all__ = [
    "QiReport",
    "RepParams",
    "ScanReport",
    "ViableRep",
    "build_rho",
    "certify_qi",
    "check_p_separated",
    "lift_skeleton",
    "measured_shear",
    "nontriviality_scan",
]

# axis reversal z -> 1/z, used as the frame flip between the two sides
# of a glued circle
_FLIP = MoebiusMap(0, 1j, 1j, 0)


def _screw(d: complex) -> MoebiusMap:
    half = cmath.exp(complex(d) / 2.0)
    return MoebiusMap(half, 0, 0, 1.0 / half)


@dataclass(frozen=True)
class RepParams:
    """Perturbation data for a representation of a pants complex.

    Circle c gets half-length R/2 + tau*xi[c]/R and shear
    1 + tau*eta[c]/R**2.
    """

    R: float
    tau: float
    xi: tuple[float, ...]
    eta: tuple[float, ...]

    def halflength(self, c: int) -> complex:
        return complex(self.R / 2.0 + self.tau * self.xi[c] / self.R)

    def shear_of(self, c: int) -> complex:
        return complex(1.0 + self.tau * self.eta[c] / self.R**2)

    @classmethod
    def zero(cls, x: PantsComplex, R: float, tau: float = 0.0) -> "RepParams":
        n = len(x.circles)
        return cls(R=R, tau=tau, xi=(0.0,) * n, eta=(0.0,) * n)

    @classmethod
    def random(
        cls, x: PantsComplex, R: float, tau: float, seed: int, scale: float = 0.1
    ) -> "RepParams":
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        n = len(x.circles)
        return cls(
            R=R,
            tau=tau,
            xi=tuple(rng.uniform(-scale, scale, n)),
            eta=tuple(rng.uniform(-scale, scale, n)),
        )


@dataclass(frozen=True)
class ViableRep:
    """A pants complex developed in hyperbolic 3-space.

    reps[i] is the placed holonomy of pants i.  Each regular circle
    stores its two sides and a frame taking the circle's axis to
    (0, infinity) as oriented by the left side; non-tree circles also
    store the re-developed conjugator of their right-side pants (the
    placed copy differs from it by the circle's stable letter).
    """

    complex: PantsComplex
    params: RepParams
    conjugators: tuple[MoebiusMap, ...]
    base_reps: tuple[PantsRep, ...]
    reps: tuple[PantsRep, ...]
    circle_sides: dict
    circle_frames: dict
    measure_frames: dict
    redeveloped: dict
    singular_holonomy: dict
    singular_base: dict

    def side_conjugator(self, c: int, which: int) -> MoebiusMap:
        """Conjugator placing one side's pants against the circle."""
        pi, _ = self.circle_sides[c][which]
        if which == 1 and c in self.redeveloped:
            return self.redeveloped[c]
        return self.conjugators[pi]

    def stable_letter(self, c: int) -> MoebiusMap:
        """Holonomy of the stable letter of a non-tree circle."""
        pi, _ = self.circle_sides[c][1]
        return self.redeveloped[c] * self.conjugators[pi].inverse()

    def halflength_at(self, pants: int, slot: int):
        """Half-length of a cuff read back from the holonomy.

        Measured on the unconjugated copy; the placed copy carries the
        same traces but with entries too large to read them stably.
        """
        return measured_halflength(self.base_reps[pants], slot)

    def singular_length(self, c: int):
        """Complex translation length of a singular circle's root.

        Measured on the base-frame copy for the same reason as
        halflength_at: the placed copy's entries are too large to read
        the trace stably.
        """
        return complex_translation_length(self.singular_base[c])


def build_rho(x: PantsComplex, params: RepParams) -> ViableRep:
    """Develop the complex: glue pants along circles by shear-and-paste.

    A spanning tree of the graph is traversed from pants 0; tree circles
    determine the placements, the remaining circles get stable letters.
    Singular circles carry the d-th root loxodromic of the adjacent cuff
    (rotated by k extra turns), so its d-th power is the cuff holonomy.
    """
    g = graph_of(x)
    base = [
        build_pants_rep(*(params.halflength(c) for c in p.slots)) for p in x.pants
    ]
    n = len(x.pants)
    conj: list[MoebiusMap | None] = [None] * n
    conj[0] = MoebiusMap.identity()
    circle_sides = {}
    circle_frames = {}
    measure_frames = {}
    redeveloped = {}

    def glue_conjugator(frame, delta, i, slot):
        # the conjugator putting pants i's cuff `slot` on (0, infinity)
        # in the given frame with its foot at coordinate delta
        B = cuff_frame(base[i], slot)
        return frame.inverse() * _screw(delta) * B

    visited = {0}
    queue = [0]
    while queue:
        u = queue.pop(0)
        for su, c in enumerate(x.pants[u].slots):
            if not x.is_regular(c):
                continue
            (pa, sa), (pb, sb) = x.attachments_of(c)
            if c in circle_sides:
                continue
            v, sv = (pb, sb) if (pa, sa) == (u, su) else (pa, sa)
            s = params.shear_of(c) + math.pi * 1j
            u_is_left = (pa, sa) == (u, su)
            # frames of the placed copy are the base frames transported
            # by the conjugator; computing them on the base copy avoids
            # reading seam endpoints off of large matrices
            G0 = cuff_frame(base[u], su)
            G = G0 * conj[u].inverse()
            frame_left = G if u_is_left else _FLIP * G
            circle_sides[c] = ((pa, sa), (pb, sb))
            circle_frames[c] = frame_left
            delta = -s if u_is_left else s
            other_frame = _FLIP * frame_left if u_is_left else frame_left
            g_other = glue_conjugator(other_frame, delta, v, sv)
            # the transported per-side measuring frames collapse to
            # cancellation-free products: the shared frame times the
            # side's conjugator equals cuff_frame(base) on the placed
            # side and Screw(delta) * cuff_frame(base) on the new side
            frame_v = _screw(delta) * cuff_frame(base[v], sv)
            measure_frames[c] = (G0, frame_v) if u_is_left else (frame_v, G0)
            if v not in visited:
                conj[v] = g_other
                visited.add(v)
                queue.append(v)
            else:
                redeveloped[c] = g_other
    if len(visited) < n:
        raise ValueError("complex is not connected")

    reps = tuple(base[i].conjugated(conj[i]) for i in range(n))
    singular = {}
    singular_base = {}
    for c in x.singular_circles():
        d = x.circles[c].d
        k = x.circles[c].k
        (pi, slot) = x.attachments_of(c)[0]
        F = cuff_frame(base[pi], slot)
        root_length = (2.0 * params.halflength(c) + 2.0 * k * math.pi * 1j) / d
        root = F.inverse() * _screw(root_length) * F
        singular_base[c] = root
        singular[c] = conj[pi] * root * conj[pi].inverse()
    return ViableRep(
        complex=x,
        params=params,
        conjugators=tuple(conj),
        base_reps=tuple(base),
        reps=reps,
        circle_sides=circle_sides,
        circle_frames=circle_frames,
        measure_frames=measure_frames,
        redeveloped=redeveloped,
        singular_holonomy=singular,
        singular_base=singular_base,
    )


def measured_shear(rho: ViableRep, c: int) -> complex:
    """The shear of a regular circle read back off the developed pants."""
    (pa, sa), (pb, sb) = rho.circle_sides[c]
    frame_left, frame_right = rho.measure_frames[c]
    foot_left = foot_of(rho.base_reps[pa], sa, frame=frame_left)
    foot_right = foot_of(rho.base_reps[pb], sb, frame=frame_right)
    return shear(foot_left, foot_right)


def check_p_separated(rho: ViableRep, p: int, tol: float = 1e-9) -> bool:
    """Whether the feet on every singular circle are 2*pi/p separated.

    The d-fold rotational symmetry spreads each foot into d copies; the
    circle passes iff all circular gaps between copies are at least
    2*pi/p and no two feet coincide.
    """
    x = rho.complex
    for c in x.singular_circles():
        d = x.circles[c].d
        F = None
        angles = []
        for pi, slot in x.attachments_of(c):
            if F is None:
                # frame from the first attachment; its own foot angle is 0
                first = pi
                F = cuff_frame(rho.base_reps[pi], slot) * rho.conjugators[pi].inverse()
            frame = (
                cuff_frame(rho.base_reps[pi], slot)
                if pi == first
                else F * rho.conjugators[pi]
            )
            theta = foot_of(rho.base_reps[pi], slot, frame=frame).value.imag
            angles.extend((theta + 2.0 * math.pi * l / d) % (2.0 * math.pi) for l in range(d))
        angles.sort()
        gaps = [b - a for a, b in zip(angles, angles[1:])]
        gaps.append(angles[0] + 2.0 * math.pi - angles[-1])
        if len(angles) > 1 and min(gaps) < tol:
            return False
        if min(gaps) < 2.0 * math.pi / p - tol:
            return False
    return True


def _generator_matrices(rho: ViableRep) -> list[MoebiusMap]:
    gens = []
    for rep in rho.reps:
        gens.append(rep.gen1)
        gens.append(rep.gen2)
    gens.extend(rho.singular_holonomy.values())
    gens.extend(rho.stable_letter(c) for c in rho.redeveloped)
    return gens


def lift_skeleton(rho: ViableRep, radius: float) -> list[OrientedGeodesic]:
    """All lifts of the cuff axes meeting the ball of this radius.

    Saturates under the holonomy generators: the returned set is closed
    under every generator as long as the image still meets the ball.
    """
    base_point = Point(0j, 1.0)
    gens = _generator_matrices(rho)
    gens = gens + [g.inverse() for g in gens]

    def key(axis):
        def enc(e):
            if isinstance(e, complex):
                return (round(e.real, 6), round(e.imag, 6))
            return ("inf",)

        return frozenset((enc(axis.source), enc(axis.target)))

    lifts = {}
    frontier = []
    for i, rep in enumerate(rho.reps):
        for cuff in range(3):
            axis = rep.cuff_axis(cuff)
            if point_to_geodesic_distance(base_point, axis) <= radius:
                k = key(axis)
                if k not in lifts:
                    lifts[k] = axis
                    frontier.append(axis)
    while frontier:
        axis = frontier.pop()
        for g in gens:
            try:
                image = axis.apply(g)
                far = point_to_geodesic_distance(base_point, image) > radius
            except ValueError:
                # endpoints numerically collapsed: the lift is far away
                far = True
            if far:
                continue
            k = key(image)
            if k not in lifts:
                lifts[k] = image
                frontier.append(image)
    return list(lifts.values())


@dataclass(frozen=True)
class QiReport:
    """Outcome of the broken-path chord-length certification."""

    R: float
    p: int
    samples: int
    violations: int
    min_margin: float
    min_ratio: float
    max_ratio: float
    seed: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


def certify_qi(R: float, p: int, samples: int = 10000, seed: int = 0) -> QiReport:
    """Sample admissible broken geodesic paths and check their chords.

    A path has segments of length in [R/2, 3R] meeting at angles in
    [2*pi/p, pi]; its chord must be at least half its length minus R/4
    and at most its length.
    """
    if p < 3:
        raise ValueError("need p >= 3 for admissible bends")
    base = Point(0j, 1.0)
    # rotation by alpha about the horizontal axis through the base point
    sqrt2 = math.sqrt(2.0)
    to_horizontal = MoebiusMap(1 / sqrt2, 1 / sqrt2, 1 / sqrt2, -1 / sqrt2)

    def tilt(alpha):
        return to_horizontal.inverse() * _screw(1j * alpha) * to_horizontal

    root = np.random.SeedSequence(seed)
    children = root.spawn(samples)
    violations = 0
    min_margin = math.inf
    min_ratio = math.inf
    max_ratio = -math.inf
    for child in children:
        rng = np.random.default_rng(child)
        n_seg = int(rng.integers(2, 6))
        frame = MoebiusMap.identity()
        total = 0.0
        for i in range(n_seg):
            length = float(rng.uniform(R / 2.0, 3.0 * R))
            total += length
            frame = frame * _screw(complex(length))
            if i + 1 < n_seg:
                bend = float(rng.uniform(2.0 * math.pi / p, math.pi))
                spin = float(rng.uniform(0.0, 2.0 * math.pi))
                frame = frame * _screw(1j * spin) * tilt(math.pi - bend)
        chord = hyperbolic_point_distance(base, apply_to_point(frame, base))
        margin = chord - (total / 2.0 - R / 4.0)
        ratio = chord / total
        min_margin = min(min_margin, margin)
        min_ratio = min(min_ratio, ratio)
        max_ratio = max(max_ratio, ratio)
        if margin < 0 or chord > total + 1e-9:
            violations += 1
    return QiReport(
        R=R,
        p=p,
        samples=samples,
        violations=violations,
        min_margin=min_margin,
        min_ratio=min_ratio,
        max_ratio=max_ratio,
        seed=seed,
    )


@dataclass(frozen=True)
class ScanReport:
    """Outcome of the near-identity word scan."""

    max_length: int
    n_generators: int
    total_words: int
    violations: tuple[tuple[int, ...], ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def _scan_alphabet(rho: ViableRep, cap: int = 4) -> list[MoebiusMap]:
    """Generators of up to `cap` pairwise non-adjacent pants.

    Non-adjacent pants share no circle, so no two alphabet letters
    satisfy a short gluing relation; reduced words over the alphabet are
    nontrivial in the fundamental group.
    """
    x = rho.complex
    chosen = []
    used_circles = set()
    for i, p in enumerate(x.pants):
        if used_circles.intersection(p.slots):
            continue
        chosen.append(i)
        used_circles.update(p.slots)
        if len(chosen) == cap:
            break
    gens = []
    for i in chosen:
        gens.append(rho.reps[i].gen1)
        gens.append(rho.reps[i].gen2)
    return gens


def nontriviality_scan(
    rho: ViableRep, max_length: int = 6, threshold: float = 1e-6
) -> ScanReport:
    """Check that no short reduced word has holonomy near the identity.

    Enumerates all freely reduced words up to the given length over the
    bounded alphabet and flags any whose matrix is within threshold of
    +/- identity.  Words are reported as tuples of letter indices
    (letter 2i is generator i, letter 2i+1 its inverse).
    """
    gens = _scan_alphabet(rho)
    letters = []
    for g in gens:
        letters.append(np.array(g.entries(), dtype=complex).reshape(2, 2))
        letters.append(np.array(g.inverse().entries(), dtype=complex).reshape(2, 2))
    n_letters = len(letters)
    eye = np.eye(2)
    violations = []
    total = 0

    # frontier: matrices, their words, and each word's final letter
    mats = np.stack(letters)
    words = np.arange(n_letters, dtype=np.int8).reshape(-1, 1)
    for depth in range(1, max_length + 1):
        total += len(mats)
        err_plus = np.abs(mats - eye).max(axis=(1, 2))
        err_minus = np.abs(mats + eye).max(axis=(1, 2))
        bad = np.minimum(err_plus, err_minus) < threshold
        for w in words[bad]:
            violations.append(tuple(int(a) for a in w))
        if depth == max_length:
            break
        last = words[:, -1]
        next_mats = []
        next_words = []
        for l in range(n_letters):
            mask = last != (l ^ 1)
            if not mask.any():
                continue
            # long words overflow float range at large R; an overflowed
            # product is nowhere near +/- identity, so inf entries are
            # still classified correctly
            with np.errstate(over="ignore", invalid="ignore"):
                next_mats.append(mats[mask] @ letters[l])
            block = np.empty((int(mask.sum()), depth + 1), dtype=np.int8)
            block[:, :depth] = words[mask]
            block[:, depth] = l
            next_words.append(block)
        mats = np.concatenate(next_mats)
        words = np.concatenate(next_words)
    return ScanReport(
        max_length=max_length,
        n_generators=len(gens),
        total_words=total,
        violations=tuple(violations),
    )

"""Combinatorial 2-complexes built from pants and circles.

A complex is a set of three-holed-sphere records whose boundary slots
are attached to circles; each circle carries a rotation degree d >= 1.
Circles with exactly two attachments and degree 1 are regular (the
complex looks like a surface there); everything else is singular.  The
graph of the complex has the pants as vertices and the regular circles
as edges, and its complexity is (shortest essential path length, minus
the number of such paths), measured between the singular-adjacent
(marked) vertices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


class NoEssentialPathError(ValueError):
    """Raised when a graph has no essential path between marked vertices."""


class NotOnShortestPathError(ValueError):
    """Raised when a surgery edge is not mid-position on a shortest path."""


class DisconnectedResultError(ValueError):
    """Raised when cut-and-paste surgery would disconnect the complex."""


@dataclass(frozen=True)
class Circle:
    """A circle of the complex with its rotation degree.

    k is the rotation numerator for singular circles (coprime to d); it
    is carried through to the holonomy builder and ignored when d = 1.
    """

    d: int = 1
    k: int = 1


@dataclass(frozen=True)
class Pants:
    """Three boundary slots, each attached to a circle with a sign."""

    slots: tuple[int, int, int]
    orientations: tuple[int, int, int] = (1, 1, 1)


@dataclass(frozen=True)
class PantsComplex:
    pants: tuple[Pants, ...]
    circles: tuple[Circle, ...]

    def attachments_of(self, circle: int) -> list[tuple[int, int]]:
        out = []
        for pi, p in enumerate(self.pants):
            for si, c in enumerate(p.slots):
                if c == circle:
                    out.append((pi, si))
        return out

    def degree_sum(self, circle: int) -> int:
        """D_C = d_C times the number of attachments."""
        return self.circles[circle].d * len(self.attachments_of(circle))

    def is_regular(self, circle: int) -> bool:
        return self.degree_sum(circle) == 2 and self.circles[circle].d == 1

    def regular_circles(self) -> list[int]:
        return [c for c in range(len(self.circles)) if self.is_regular(c)]

    def singular_circles(self) -> list[int]:
        return [c for c in range(len(self.circles)) if not self.is_regular(c)]

    def max_degree_sum(self) -> int:
        return max(self.degree_sum(c) for c in range(len(self.circles)))

    def to_json(self) -> str:
        doc = {
            "version": 1,
            "pants": [{"slots": list(p.slots)} for p in self.pants],
            "circles": [
                {"id": i, "d": c.d, **({"k": c.k} if c.d > 1 else {})}
                for i, c in enumerate(self.circles)
            ],
            "orientations": [list(p.orientations) for p in self.pants],
            "markings": self.singular_circles(),
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "PantsComplex":
        doc = json.loads(text)
        if doc.get("version") != 1:
            raise ValueError(f"unsupported document version {doc.get('version')}")
        circles = tuple(
            Circle(d=c["d"], k=c.get("k", 1))
            for c in sorted(doc["circles"], key=lambda c: c["id"])
        )
        pants = tuple(
            Pants(slots=tuple(p["slots"]), orientations=tuple(o))
            for p, o in zip(doc["pants"], doc["orientations"])
        )
        return cls(pants=pants, circles=circles)


def _attachment_table(x: PantsComplex) -> list[list[tuple[int, int]]]:
    """attachments_of for every circle, computed in one pass."""
    table = [[] for _ in x.circles]
    n_circles = len(x.circles)
    for pi, p in enumerate(x.pants):
        for si, c in enumerate(p.slots):
            if 0 <= c < n_circles:
                table[c].append((pi, si))
    return table


def validate(x: PantsComplex) -> list[str]:
    """All structural violations of the complex, empty iff valid."""
    issues = []
    n_circles = len(x.circles)
    for pi, p in enumerate(x.pants):
        if len(p.slots) != 3:
            issues.append(f"pants {pi} has {len(p.slots)} slots")
            continue
        for si, c in enumerate(p.slots):
            if not (0 <= c < n_circles):
                issues.append(f"pants {pi} slot {si} attached to missing circle {c}")
        for si, o in enumerate(p.orientations):
            if o not in (1, -1):
                issues.append(f"pants {pi} slot {si} has orientation {o}")
    table = _attachment_table(x)
    for ci, c in enumerate(x.circles):
        if c.d < 1:
            issues.append(f"circle {ci} has degree {c.d} < 1")
            continue
        atts = table[ci]
        if not atts:
            issues.append(f"circle {ci} has no attachment")
        elif c.d * len(atts) < 2:
            issues.append(f"circle {ci} has D = {c.d * len(atts)} < 2")
    return issues


def build_xp(genus: int, p: int) -> PantsComplex:
    """The model complex: a pants chain whose two end circles carry d = p.

    4*genus pants in a chain, consecutive pants sharing alternately two
    circles and one circle (double, single, ..., double); the first and
    last pants each keep one slot for a singular circle of degree p.
    The two singular attachments get opposite orientations so the two
    singular circles are homologous.
    """
    if genus < 1:
        raise ValueError("genus must be at least 1")
    if p < 2:
        raise ValueError("rotation degree must be at least 2")
    n = 4 * genus
    # circles 0, 1 are the singular ones
    circles = [Circle(d=p, k=1), Circle(d=p, k=1)]
    pants = []
    prev = None  # circles shared with the previous pants
    for i in range(n):
        slots = []
        if i == 0:
            slots.append(0)
        elif i == n - 1:
            slots.append(1)
        else:
            slots.extend(prev)
        gap = 2 if i % 2 == 0 else 1  # circles shared with the next pants
        if i == n - 1:
            slots.extend(prev)
            gap = 0
        nxt = []
        for _ in range(gap):
            circles.append(Circle())
            nxt.append(len(circles) - 1)
        slots.extend(nxt)
        prev = nxt
        orientations = tuple(
            -1 if (i > 0 and c in pants[i - 1].slots) or c == 1 else 1
            for c in slots
        )
        pants.append(Pants(slots=tuple(slots), orientations=orientations))
    return PantsComplex(pants=tuple(pants), circles=tuple(circles))


@dataclass(frozen=True)
class PantsGraph:
    """Pants as vertices, regular circles as (multi-)edges."""

    n_vertices: int
    edges: tuple[tuple[int, int, int], ...]  # (circle id, vertex, vertex)
    marked: frozenset[int]


def graph_of(x: PantsComplex) -> PantsGraph:
    bad = validate(x)
    if bad:
        raise ValueError(f"invalid complex: {bad[0]}")
    edges = []
    marked = set()
    table = _attachment_table(x)
    for ci, circle in enumerate(x.circles):
        atts = table[ci]
        if circle.d == 1 and len(atts) == 2:
            (pa, _), (pb, _) = atts
            edges.append((ci, pa, pb))
        else:
            for pi, _ in atts:
                marked.add(pi)
    return PantsGraph(
        n_vertices=len(x.pants), edges=tuple(edges), marked=frozenset(marked)
    )


def _darts(g: PantsGraph):
    """Darts 2e and 2e+1 are the two directions of edge e."""
    head = []
    tail = []
    for _, a, b in g.edges:
        tail.extend((a, b))
        head.extend((b, a))
    return tail, head


def _dart_arrays(g: PantsGraph):
    """Vectorized dart data: (tail, head, marked mask, count dtype)."""
    tail, head = _darts(g)
    n_darts = len(tail)
    tail = np.array(tail, dtype=np.intp)
    head = np.array(head, dtype=np.intp)
    marked = np.zeros(g.n_vertices, dtype=bool)
    if g.marked:
        marked[list(g.marked)] = True
    # exact Python integers for small graphs where parallel edges can
    # make counts explode; int64 for large graphs, which arise from
    # surgery and have vertex degree <= 3, keeping counts below 2**63
    dtype = np.int64 if n_darts > 256 else object
    return tail, head, marked, dtype


def _marked_walk_counts(g: PantsGraph, max_len: int):
    """Count of essential marked-to-marked walks at the shortest level.

    An essential walk is non-backtracking, its interior vertices are
    unmarked (a path *between* marked vertices visits them only at its
    ends), and when closed it is also cyclically reduced (its last dart
    is not the reverse of its first).  A closed walk failing the last
    condition is an out-and-back excursion whose shortest homotopy
    representative is a loop missing the marked vertex entirely, so it
    does not count as a path between marked vertices.

    Returns {length: count of ordered walks} for the first length at
    which any walk exists (empty if none up to max_len); a walk and its
    reverse are both counted (no such walk is its own reverse).
    """
    tail, head, marked, dtype = _dart_arrays(g)
    n_darts = len(tail)
    starts = np.flatnonzero(marked[tail])
    n_starts = len(starts)
    if n_starts == 0:
        return {}
    # cur[i][d] = number of admissible walks whose first dart is
    # starts[i] and whose last dart is d; tracking the first dart is
    # what lets the closed non-reduced walks be subtracted off
    cur = np.zeros((n_starts, n_darts), dtype=dtype)
    cur[np.arange(n_starts), starts] = 1
    flip = np.arange(n_darts) ^ 1
    rows = np.arange(n_starts)[:, None]
    at_marked = marked[head]
    for length in range(1, max_len + 1):
        # a walk ending with the reverse of its first dart is closed at
        # the start vertex and not cyclically reduced
        total = int(cur[:, at_marked].sum()) - int(
            cur[np.arange(n_starts), starts ^ 1].sum()
        )
        if total:
            # only the shortest level matters to the callers; walks can
            # only get more numerous from here on
            return {length: total}
        # a walk may only continue past an unmarked vertex
        ext = np.where(at_marked[None, :], 0, cur)
        by_vertex = np.zeros((n_starts, g.n_vertices), dtype=dtype)
        np.add.at(by_vertex, (rows, head[None, :]), ext)
        cur = by_vertex[:, tail] - ext[:, flip]
    return {}


def complexity(g: PantsGraph) -> tuple[int, int]:
    """(l, -n): shortest essential path length and minus their number.

    Essential paths have both endpoints marked and are not null
    homotopic; the shortest ones are exactly the non-backtracking edge
    walks between marked vertices with unmarked interior, cyclically
    reduced when closed (a walk and its reverse count once).
    """
    if not g.marked:
        raise NoEssentialPathError("no marked vertices")
    bound = 2 * (g.n_vertices + len(g.edges)) + 1
    counts = _marked_walk_counts(g, bound)
    if not counts:
        raise NoEssentialPathError("no essential marked path")
    l = min(counts)
    return l, -(counts[l] // 2)


def _shortest_essential_walk(g: PantsGraph) -> list[int]:
    """One shortest essential walk, as a list of darts."""
    l, _ = complexity(g)
    tail, head = _darts(g)
    by_vertex = [[] for _ in range(g.n_vertices)]
    for d in range(len(tail)):
        by_vertex[tail[d]].append(d)

    def extend(walk):
        if len(walk) == l:
            if head[walk[-1]] not in g.marked:
                return None
            if head[walk[-1]] == tail[walk[0]] and walk[-1] == walk[0] ^ 1:
                return None  # closed but not cyclically reduced
            return walk
        if head[walk[-1]] in g.marked:
            return None  # interior vertices must be unmarked
        for d2 in by_vertex[head[walk[-1]]]:
            if d2 != walk[-1] ^ 1:
                got = extend(walk + [d2])
                if got is not None:
                    return got
        return None

    for d in sorted(
        range(len(tail)), key=lambda d: (tail[d] not in g.marked, d)
    ):
        if tail[d] in g.marked:
            got = extend([d])
            if got is not None:
                return got
    raise NoEssentialPathError("no essential marked path")


def _middle_dart_counts(g: PantsGraph) -> tuple[int, int, list[int]]:
    """Per-dart count of shortest essential walks crossing it midway.

    Returns (l, k, counts) where k = ceil((l + 1)/2) and counts[d] is
    the number of shortest walks whose k-th dart is d.
    """
    l, _ = complexity(g)
    k = (l + 1 + 1) // 2  # ceil((l + 1)/2), 1-based position
    tail, head, marked, dtype = _dart_arrays(g)
    n_darts = len(tail)
    flip = np.arange(n_darts) ^ 1
    starts = np.flatnonzero(marked[tail])
    ends = np.flatnonzero(marked[head])

    def sweep(seeds, steps, forward):
        n_seeds = len(seeds)
        cur = np.zeros((n_seeds, n_darts), dtype=dtype)
        cur[np.arange(n_seeds), seeds] = 1
        block = marked[head] if forward else marked[tail]
        bucket = head if forward else tail
        target = tail if forward else head
        rows = np.arange(n_seeds)[:, None]
        for _ in range(steps):
            # a walk may only continue past an unmarked vertex
            ext = np.where(block[None, :], 0, cur)
            by_vertex = np.zeros((n_seeds, g.n_vertices), dtype=dtype)
            np.add.at(by_vertex, (rows, bucket[None, :]), ext)
            cur = by_vertex[:, target] - ext[:, flip]
        return cur

    # fwd[i][d]: length-k walks with first dart starts[i] and k-th dart
    # d; bwd[j][d]: length-(l - k + 1) walks with first dart d and last
    # dart ends[j].  Gluing at position k and excluding the pairs that
    # form a closed non-reduced walk (last dart = reverse of first)
    # gives the per-dart count of shortest essential walks.
    fwd = sweep(starts, k - 1, True)
    bwd = sweep(ends, l - k, False)
    counts = fwd.sum(axis=0) * bwd.sum(axis=0)
    # starts ^ 1 points back into its start vertex, so it is an end dart
    end_index = {int(e): j for j, e in enumerate(ends)}
    for i, s in enumerate(starts):
        counts -= fwd[i] * bwd[end_index[int(s) ^ 1]]
    return l, k, counts.tolist()


def _middle_edge_circles(x: PantsComplex) -> set[int]:
    """Circles that occur as the mid-position edge of a shortest path."""
    g = graph_of(x)
    _, _, counts = _middle_dart_counts(g)
    return {g.edges[d // 2][0] for d, c in enumerate(counts) if c}


def make_donor() -> PantsComplex:
    """A closed four-pants surface with circle 0 distinguished.

    Two bridge pants share circles 0 and 1; each also carries a handle
    pants closed up by a self-glued circle.  All circles are regular,
    and circle 0 is non-separating.  Cutting circle 0 leaves circle 1
    as the unique shortest route between its two former attachments, so
    surgery along this donor replaces the cut edge by a single length-3
    path instead of a pair of parallel ones; this keeps the number of
    shortest essential paths from doubling at every surgery, which is
    what makes repeated growth to large thresholds tractable.
    """
    return PantsComplex(
        pants=(
            Pants(slots=(0, 1, 2), orientations=(1, 1, 1)),
            Pants(slots=(2, 3, 3), orientations=(-1, 1, -1)),
            Pants(slots=(0, 1, 4), orientations=(-1, -1, 1)),
            Pants(slots=(4, 5, 5), orientations=(-1, 1, -1)),
        ),
        circles=(Circle(), Circle(), Circle(), Circle(), Circle(), Circle()),
    )


def surger(x: PantsComplex, edge: int, donor: PantsComplex) -> PantsComplex:
    """Cut along a mid-path circle of x and a donor circle, cross-paste.

    edge is a regular circle sitting at position ceil((l+1)/2) on some
    shortest essential path; the donor's circle 0 must be regular and
    non-separating.  Each former attachment of the cut circle is joined
    to one former attachment of the donor circle, so every path through
    the old edge now has to cross the donor.
    """
    if not x.is_regular(edge):
        raise NotOnShortestPathError(f"circle {edge} is not regular")
    if edge not in _middle_edge_circles(x):
        raise NotOnShortestPathError(
            f"circle {edge} is not the middle edge of any shortest essential path"
        )
    donor_atts = donor.attachments_of(0)
    if len(donor_atts) != 2 or not donor.is_regular(0):
        raise ValueError("donor circle 0 must be regular")
    if _separates(donor, 0):
        raise DisconnectedResultError("donor circle separates the donor")

    n_x_circles = len(x.circles)
    # donor circle j > 0 becomes circle n_x_circles + j - 1; the cut
    # circles (x's `edge` and donor's 0) are reused as the two pasted
    # circles: x-side keeps id `edge`, donor-side keeps id n_x_circles
    # mapped from... both new circles need fresh pairings.
    (xa, xa_slot), (xb, xb_slot) = x.attachments_of(edge)
    new_circle_b = n_x_circles  # pairs xb with the donor's second side

    def donor_circle_id(j):
        return n_x_circles + j  # j = 0 -> new_circle_b is reused below

    pants = list(x.pants)
    # reroute xb's slot to the fresh circle
    slots = list(pants[xb].slots)
    slots[xb_slot] = new_circle_b
    pants[xb] = Pants(slots=tuple(slots), orientations=pants[xb].orientations)

    (da, da_slot), (db, db_slot) = donor_atts
    offset = len(pants)
    for qi, q in enumerate(donor.pants):
        slots = []
        for si, c in enumerate(q.slots):
            if c == 0:
                # first donor attachment joins x's circle `edge`,
                # second joins the fresh circle
                slots.append(edge if (qi, si) == (da, da_slot) else new_circle_b)
            else:
                slots.append(donor_circle_id(c))
        pants.append(Pants(slots=tuple(slots), orientations=q.orientations))

    circles = list(x.circles) + [Circle()] + [
        donor.circles[j] for j in range(1, len(donor.circles))
    ]
    result = PantsComplex(pants=tuple(pants), circles=tuple(circles))
    if not _connected(result):
        raise DisconnectedResultError("surgery disconnected the complex")
    return result


def _separates(x: PantsComplex, circle: int) -> bool:
    """Whether cutting the complex along a circle disconnects it."""
    n = len(x.pants)
    if n <= 1:
        return False
    adj = [[] for _ in range(n)]
    table = _attachment_table(x)
    for ci in range(len(x.circles)):
        if ci == circle:
            continue
        atts = table[ci]
        for i in range(len(atts)):
            for j in range(i + 1, len(atts)):
                adj[atts[i][0]].append(atts[j][0])
                adj[atts[j][0]].append(atts[i][0])
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) < n


def _connected(x: PantsComplex) -> bool:
    return not _separates(x, -1)


def grow_until(x: PantsComplex, threshold: int, donor_factory=make_donor) -> PantsComplex:
    """Surger along shortest-path middle edges until l(G) > threshold.

    Terminates because each step strictly increases (l, -n)
    lexicographically and n is bounded for fixed l.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    while True:
        g = graph_of(x)
        l, _, counts = _middle_dart_counts(g)
        if l > threshold:
            return x
        # of the admissible mid-path darts, cut the one carried by the
        # most shortest walks: one surgery then retires a whole family
        best = max(range(len(counts)), key=lambda d: (counts[d], -d))
        edge = g.edges[best // 2][0]
        x = surger(x, edge, donor_factory())

"""Shortest homotopic paths (geodesics) for subwalks of facial walks.

The whole plane is triangulated once per graph: all vertices plus four
far-away box corners, with every graph edge as a constraint.  Each triangle
is assigned to the face it lies in.  A query walk is pushed slightly into
its face; the portals it crosses are exactly the triangle fans around its
interior corners, and pulling the string taut through those portals (funnel
algorithm) yields the geodesic.

The clip box turns the unbounded face into a bounded region; geodesics never
bend at box corners (they are convex corners of the region), which is
asserted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geom import convex_hull, orient_xy, walk_length
from .pslg import (
    LemmaViolation,
    Pslg,
    PslgError,
    facial_walks,
    walk_of_directed_edge,
)
from . import pslg as _pslg
from .triangulate import insert_constraint, triangulate_points


class WalkNotInFace(PslgError):
    pass


class NotSafeWalk(PslgError):
    pass


@dataclass(frozen=True)
class FaceRegion:
    face_id: int
    boundary: tuple  # the facial walk vertex sequence
    is_outer: bool
    clip_box: tuple | None  # ((xmin, ymin), (xmax, ymax)) ints, outer face only


@dataclass
class GeodesicPath:
    seq: list  # Points from p_0 to p_t
    length: float

    def ids(self):
        return [p.id for p in self.seq]


class _FaceEnv:
    """Per-graph triangulated environment shared by all geodesic queries."""

    def __init__(self, g: Pslg):
        from .pslg import require_augmentable

        require_augmentable(g)
        self.g = g
        ids = sorted(p.id for p in g.points)
        self.lid = {v: i for i, v in enumerate(ids)}
        self.gid = ids
        pts = [g.ipt(v) for v in ids]
        self.n_graph = len(pts)
        self.box = _make_box(pts)
        self.pts = pts + list(self.box)

        self.T = triangulate_points(self.pts)
        for (u, v) in sorted(g.edges):
            insert_constraint(self.T, self.lid[u], self.lid[v])
        self.T.validate()

        self.dedge_pos = walk_of_directed_edge(g)
        self.walks = facial_walks(g)

        side = self.T.directed_side_tri()
        # triangle right of directed graph edge (u, v) = CCW triangle on (v, u)
        self.right_tri = {}
        for (u, v) in self.dedge_pos:
            self.right_tri[(u, v)] = side[(self.lid[v], self.lid[u])]

        # face id per triangle: seed from graph edges, flood across
        # unconstrained edges
        self.tri_face = {}
        for (u, v), (face, _) in self.dedge_pos.items():
            t = self.right_tri[(u, v)]
            prev = self.tri_face.get(t)
            if prev is not None and prev != face:
                raise LemmaViolation("conflicting face assignment for triangle")
            self.tri_face[t] = face
        frontier = sorted(self.tri_face)
        while frontier:
            t = frontier.pop()
            f = self.tri_face[t]
            for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                k = (min(e), max(e))
                if k in self.T.constrained:
                    continue
                for s in self.T.tris_of_edge(*e):
                    if s == t:
                        continue
                    prev = self.tri_face.get(s)
                    if prev is None:
                        self.tri_face[s] = f
                        frontier.append(s)
                    elif prev != f:
                        raise LemmaViolation("face flood fill conflict")
        if len(self.tri_face) != len(self.T.tris):
            raise LemmaViolation("face assignment incomplete")

    def fan_portals(self, prev, apex, nxt):
        """Portals crossed while swinging around ``apex`` from the triangle
        right of (prev, apex) to the triangle right of (apex, nxt).

        Local-index pairs (left, right); left is always the pivot.
        """
        t_in = self.right_tri[(prev, apex)]
        t_out = self.right_tri[(apex, nxt)]
        w = self.lid[apex]
        portals = []
        cur = t_in
        other = self.lid[prev]
        guard = 0
        while cur != t_out:
            z = self.T.apex(cur, w, other)
            portals.append((w, z))
            cur = self.T.other_tri(w, z, cur)
            if cur is None:
                raise LemmaViolation("fan walked off the triangulation")
            other = z
            guard += 1
            if guard > len(self.T.tris):
                raise LemmaViolation("fan did not close")
        return portals


def _make_box(pts):
    """Four far corners whose hull strictly contains all points with margin
    at least the point-set diameter, nudged so no corner is collinear with
    any two other points."""
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    span = (max(xs) - min(xs)) + (max(ys) - min(ys)) + 1
    base = [
        (min(xs) - span, min(ys) - span),
        (max(xs) + span, min(ys) - span),
        (max(xs) + span, max(ys) + span),
        (min(xs) - span, max(ys) + span),
    ]
    out_dir = [(-1, -1), (1, -1), (1, 1), (-1, 1)]
    placed = list(pts)
    corners = []
    for (bx, by), (dx, dy) in zip(base, out_dir):
        k = 0
        while True:
            cand = (bx + k * dx, by + 2 * k * dy)
            ok = True
            for i in range(len(placed)):
                xi, yi = placed[i]
                for j in range(i + 1, len(placed)):
                    xj, yj = placed[j]
                    if orient_xy(cand[0], cand[1], xi, yi, xj, yj) == 0:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                break
            k += 1
        corners.append(cand)
        placed.append(cand)
    return corners


def face_env(g: Pslg) -> _FaceEnv:
    if g._face_env is None:
        g._face_env = _FaceEnv(g)
    return g._face_env


def face_region(g: Pslg, face_id: int) -> FaceRegion:
    env = face_env(g)
    w = env.walks[face_id]
    box = None
    if w.is_outer:
        b = env.box
        box = ((b[0][0], b[0][1]), (b[2][0], b[2][1]))
    return FaceRegion(face_id=face_id, boundary=w.seq, is_outer=w.is_outer, clip_box=box)


def locate_subwalk(g: Pslg, walk_ids):
    """(face_id, start_position) of the unique occurrence of the directed
    subwalk, or raise WalkNotInFace."""
    if len(walk_ids) < 2:
        raise WalkNotInFace("walk needs at least one edge")
    env = face_env(g)
    key = (walk_ids[0], walk_ids[1])
    if key not in env.dedge_pos:
        raise WalkNotInFace(f"directed edge {key} not on any facial walk")
    face, pos = env.dedge_pos[key]
    seq = env.walks[face].seq
    m = len(seq) - 1
    if len(walk_ids) - 1 > m:
        raise WalkNotInFace("walk longer than its facial walk")
    for k, v in enumerate(walk_ids):
        if seq[(pos + k) % m] != v:
            raise WalkNotInFace(f"walk diverges from facial walk at step {k}")
    return face, pos


def _funnel(pts, portals, s, t):
    """Pull the string taut through a portal sequence: exact arithmetic,
    restart variant.  Points are local indices into pts."""

    def o(a, b, c):
        pa, pb, pc = pts[a], pts[b], pts[c]
        return orient_xy(pa[0], pa[1], pb[0], pb[1], pc[0], pc[1])

    path = [s]
    apex, ai = s, -1
    left, li = s, -1
    right, ri = s, -1
    seq = list(portals) + [(t, t)]
    i = 0
    guard = (len(seq) + 2) * (len(seq) + 2)
    steps = 0
    while i < len(seq):
        steps += 1
        if steps > guard:
            raise LemmaViolation("funnel did not converge")
        nl, nr = seq[i]
        restart = False
        if nr != right:
            if nr == apex or right == apex or o(apex, right, nr) >= 0:
                if nr == apex or left == apex or o(apex, left, nr) < 0:
                    right, ri = nr, i
                else:
                    path.append(left)
                    apex, ai = left, li
                    left = right = apex
                    li = ri = ai
                    i = ai + 1
                    restart = True
        if restart:
            continue
        if nl != left:
            if nl == apex or left == apex or o(apex, left, nl) <= 0:
                if nl == apex or right == apex or o(apex, right, nl) > 0:
                    left, li = nl, i
                else:
                    path.append(right)
                    apex, ai = right, ri
                    left = right = apex
                    li = ri = ai
                    i = ai + 1
                    restart = True
        if restart:
            continue
        i += 1
    path.append(t)
    out = [path[0]]
    for v in path[1:]:
        if v != out[-1]:
            out.append(v)
    return out


def geodesic(g: Pslg, walk_ids) -> GeodesicPath:
    """Shortest path homotopic to the given facial subwalk inside its face.

    ``walk_ids`` must trace a contiguous subwalk (>= 2 edges) of one facial
    walk, in walk direction.
    """
    walk_ids = list(walk_ids)
    if len(walk_ids) < 3:
        raise WalkNotInFace("geodesic needs a walk of at least 2 edges")
    if walk_ids[0] == walk_ids[-1]:
        raise WalkNotInFace("geodesic of a closed walk is degenerate")
    for a, b in zip(walk_ids, walk_ids[1:]):
        if a == b:
            raise WalkNotInFace("repeated consecutive vertex in walk")
    locate_subwalk(g, walk_ids)
    env = face_env(g)

    portals = []
    for k in range(1, len(walk_ids) - 1):
        for p in env.fan_portals(walk_ids[k - 1], walk_ids[k], walk_ids[k + 1]):
            # reduce the crossing word: re-crossing the last portal is a
            # contractible excursion into a single (obstacle-free) triangle
            if portals and {*portals[-1]} == {*p}:
                portals.pop()
            else:
                portals.append(p)
    s = env.lid[walk_ids[0]]
    t = env.lid[walk_ids[-1]]
    path = _funnel(env.pts, portals, s, t)
    for v in path:
        if v >= env.n_graph:
            raise LemmaViolation("geodesic bent at a clip-box corner")
    points = [g.by_id[env.gid[v]] for v in path]

    # interior vertices must be reflex vertices of the graph
    for p in points[1:-1]:
        if not _is_reflex_vertex(g, p.id):
            raise LemmaViolation(f"geodesic interior vertex {p.id} is not reflex")
    return GeodesicPath(seq=points, length=walk_length(points))


def _is_reflex_vertex(g: Pslg, v) -> bool:
    """A vertex is reflex iff some angle between CCW-consecutive incident
    edges is >= pi (degree-1 vertices count as reflex)."""
    rot = g.rotation[v]
    if len(rot) == 1:
        return True
    ax, ay = g.ipt(v)
    for i, u in enumerate(rot):
        w = rot[(i + 1) % len(rot)]
        ux, uy = g.ipt(u)
        wx, wy = g.ipt(w)
        cr = (ux - ax) * (wy - ay) - (uy - ay) * (wx - ax)
        if cr <= 0:  # sector from u to w is >= pi
            return True
    return False


def walk_is_convex(g: Pslg, walk_ids, closed=False) -> bool:
    """Convexity of a (located) facial subwalk under the corner-angle
    convention (every interior corner strictly convex)."""
    ids = list(walk_ids)
    rng = range(1, len(ids) - 1)
    for i in rng:
        if not _pslg._corner_convex(g, ids[i - 1], ids[i], ids[i + 1]):
            return False
    if closed and ids[0] == ids[-1]:
        if not _pslg._corner_convex(g, ids[-2], ids[0], ids[1]):
            return False
    return True


def check_lemma1(g: Pslg, walk_ids) -> bool:
    """Oracle for the safe-convex-walk lemma: the geodesic of a safe convex
    walk is a simple path avoiding the walk's interior vertices."""
    ids = list(walk_ids)
    if len(ids) < 3:
        raise NotSafeWalk("walk needs at least 2 edges")
    locate_subwalk(g, ids)
    if not walk_is_convex(g, ids):
        raise NotSafeWalk("walk is not convex")
    pts = [g.by_id[v] for v in ids]
    hull = convex_hull(pts)
    hull_coords = {p.coords() for p in hull}
    for p in pts[1:-1]:
        if p.coords() not in hull_coords:
            raise NotSafeWalk(f"interior vertex {p.id} not on the hull boundary")
    geo = geodesic(g, ids)
    gids = geo.ids()
    if len(set(gids)) != len(gids):
        return False
    interior = set(gids[1:-1])
    return not (interior & set(ids))

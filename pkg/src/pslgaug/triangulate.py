"""Point-set triangulation with constraint insertion and Lawson flips.

Works on exact integer (or rational) coordinates with local point indices.
The same machinery backs the geodesic face environment (constrained, no
Delaunay requirement) and the dynamic-transform phase 2 (unconstrained
Lawson flips to the Delaunay triangulation).
"""

from __future__ import annotations

from collections import deque

from .geom import DegenerateInput, in_ccw_sector, orient_xy, segments_properly_cross
from .pslg import LemmaViolation


def _ek(i, j):
    return (i, j) if i < j else (j, i)


class Triangulation:
    """Triangle soup over indexed points with edge adjacency.

    Triangles are stored as CCW tuples canonically rotated to start at the
    smallest index.
    """

    def __init__(self, pts):
        self.pts = list(pts)  # local index -> (x, y) exact
        self.tris = set()
        self.edge_tris = {}  # (i, j) i<j -> set of triangles
        self.constrained = set()

    # -- predicates on local indices -----------------------------------

    def orient(self, a, b, c):
        pa, pb, pc = self.pts[a], self.pts[b], self.pts[c]
        return orient_xy(pa[0], pa[1], pb[0], pb[1], pc[0], pc[1])

    def in_circle(self, a, b, c, d):
        """+1 iff d strictly inside the circumcircle of CCW triangle abc."""
        (ax, ay), (bx, by), (cx, cy), (dx, dy) = (
            self.pts[a],
            self.pts[b],
            self.pts[c],
            self.pts[d],
        )
        adx, ady = ax - dx, ay - dy
        bdx, bdy = bx - dx, by - dy
        cdx, cdy = cx - dx, cy - dy
        det = (
            (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
            - (bdx * bdx + bdy * bdy) * (adx * cdy - cdx * ady)
            + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
        )
        return 1 if det > 0 else (-1 if det < 0 else 0)

    # -- structure edits ------------------------------------------------

    def _canon(self, a, b, c):
        if self.orient(a, b, c) < 0:
            a, b, c = a, c, b
        # rotate smallest first
        if b < a and b < c:
            a, b, c = b, c, a
        elif c < a and c < b:
            a, b, c = c, a, b
        return (a, b, c)

    def add_tri(self, a, b, c):
        t = self._canon(a, b, c)
        if self.orient(*t) <= 0:
            raise DegenerateInput(f"degenerate triangle {t}")
        self.tris.add(t)
        for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            self.edge_tris.setdefault(_ek(*e), set()).add(t)
        return t

    def remove_tri(self, t):
        self.tris.remove(t)
        for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            k = _ek(*e)
            self.edge_tris[k].discard(t)
            if not self.edge_tris[k]:
                del self.edge_tris[k]

    def edges(self):
        return set(self.edge_tris)

    def has_edge(self, i, j):
        return _ek(i, j) in self.edge_tris

    def tris_of_edge(self, i, j):
        return self.edge_tris.get(_ek(i, j), set())

    def other_tri(self, i, j, t):
        ts = self.tris_of_edge(i, j)
        for s in ts:
            if s != t:
                return s
        return None

    def apex(self, t, i, j):
        for v in t:
            if v != i and v != j:
                return v
        raise KeyError((t, i, j))

    def directed_side_tri(self):
        """Map each directed side (a, b) to the CCW triangle containing it."""
        m = {}
        for t in self.tris:
            a, b, c = t
            m[(a, b)] = t
            m[(b, c)] = t
            m[(c, a)] = t
        return m

    def validate(self):
        """Structural sanity: interior edges have 2 triangles, hull edges 1."""
        for k, ts in self.edge_tris.items():
            if len(ts) not in (1, 2):
                raise LemmaViolation(f"edge {k} borders {len(ts)} triangles")


def triangulate_points(pts) -> Triangulation:
    """Scan triangulation of a point set in general position.

    Points are added in lexicographic order; each new point is joined to all
    hull edges it sees.  O(n^2), exact.
    """
    T = Triangulation(pts)
    n = len(pts)
    if n < 3:
        raise DegenerateInput("need at least 3 points")
    order = sorted(range(n), key=lambda i: pts[i])
    a, b, c = order[0], order[1], order[2]
    if T.orient(a, b, c) == 0:
        raise DegenerateInput(f"collinear points {a},{b},{c}")
    if T.orient(a, b, c) < 0:
        b, c = c, b
    T.add_tri(a, b, c)
    hull = [a, b, c]  # CCW

    for q in order[3:]:
        h = len(hull)
        vis = []
        for i in range(h):
            u, v = hull[i], hull[(i + 1) % h]
            s = T.orient(u, v, q)
            if s == 0:
                raise DegenerateInput(f"point {q} collinear with hull edge ({u},{v})")
            vis.append(s < 0)
        if not any(vis):
            raise LemmaViolation(f"point {q} inside current hull during scan")
        # visible edges form one contiguous cyclic arc
        start = next(i for i in range(h) if vis[i] and not vis[i - 1])
        arc = []
        i = start
        while vis[i % h]:
            arc.append(i % h)
            i += 1
        for i in arc:
            u, v = hull[i], hull[(i + 1) % h]
            T.add_tri(u, q, v)
        keep_from = (arc[-1] + 1) % h
        keep_to = start  # hull[start] stays (first endpoint of first visible edge)
        newhull = [q]
        i = keep_from
        while True:
            newhull.append(hull[i])
            if i == keep_to:
                break
            i = (i + 1) % h
        hull = newhull
    return T


def _seg_hits_edge(T, u, w, i, j):
    pu, pw = T.pts[u], T.pts[w]
    pi, pj = T.pts[i], T.pts[j]
    return segments_properly_cross(
        pu[0], pu[1], pw[0], pw[1], pi[0], pi[1], pj[0], pj[1]
    )


def insert_constraint(T: Triangulation, u, w):
    """Force edge (u, w) into the triangulation by channel retriangulation.

    The open segment must not pass through any point and must not cross a
    constrained edge.
    """
    k = _ek(u, w)
    if T.has_edge(u, w):
        T.constrained.add(k)
        return
    # find the triangle at u whose wedge contains the direction to w
    ux, uy = T.pts[u]
    wx, wy = T.pts[w]
    start = None
    for t in sorted({t for ts in T.edge_tris.values() for t in ts if u in t}):
        a, b, c = t
        # order so the triangle reads (u, p, q) CCW: wedge from ray u->p to u->q
        if a == u:
            p, q = b, c
        elif b == u:
            p, q = c, a
        else:
            p, q = a, b
        px, py = T.pts[p]
        qx, qy = T.pts[q]
        if in_ccw_sector(px - ux, py - uy, qx - ux, qy - uy, wx - ux, wy - uy):
            start = (t, p, q)
            break
    if start is None:
        raise LemmaViolation(f"no wedge at {u} contains direction to {w}")

    t, p, q = start
    left_chain, right_chain = [], []  # vertices left/right of line u->w
    channel = [t]
    cross_edge = (p, q)  # p is left of u->w? classify below

    def side(v):
        vx, vy = T.pts[v]
        s = orient_xy(ux, uy, wx, wy, vx, vy)
        if s == 0:
            raise LemmaViolation(f"constraint ({u},{w}) passes through point {v}")
        return s

    # p is CCW-before q around u; relative to the line u->w, p is left iff
    # orient(u, w, p) > 0
    if side(p) > 0:
        left_chain.append(p)
        right_chain.append(q)
    else:
        left_chain.append(q)
        right_chain.append(p)
        cross_edge = (q, p)

    while True:
        i, j = cross_edge
        if _ek(i, j) in T.constrained:
            raise LemmaViolation(f"constraint ({u},{w}) crosses constrained edge ({i},{j})")
        nxt = T.other_tri(i, j, channel[-1])
        if nxt is None:
            raise LemmaViolation(f"constraint ({u},{w}) exits the triangulation")
        channel.append(nxt)
        z = T.apex(nxt, i, j)
        if z == w:
            break
        if side(z) > 0:
            left_chain.append(z)
            cross_edge = (z, cross_edge[1])
        else:
            right_chain.append(z)
            cross_edge = (cross_edge[0], z)

    for t in channel:
        T.remove_tri(t)
    # left polygon: u -> left chain -> w, closed by segment w->u
    for tri in ear_clip([u] + left_chain + [w], T.pts):
        T.add_tri(*tri)
    for tri in ear_clip([u] + right_chain + [w], T.pts):
        T.add_tri(*tri)
    T.constrained.add(k)


def ear_clip(poly, pts):
    """Triangulate a simple polygon (list of local indices) by ear clipping.

    Exact; assumes distinct vertices and no three collinear.  Returns CCW
    triangles.
    """

    def o(a, b, c):
        pa, pb, pc = pts[a], pts[b], pts[c]
        return orient_xy(pa[0], pa[1], pb[0], pb[1], pc[0], pc[1])

    idx = list(poly)
    if len(idx) < 3:
        raise DegenerateInput("polygon with fewer than 3 vertices")
    area2 = 0
    for i in range(len(idx)):
        a, b = pts[idx[i]], pts[idx[(i + 1) % len(idx)]]
        area2 += a[0] * b[1] - b[0] * a[1]
    if area2 < 0:
        idx.reverse()

    out = []
    while len(idx) > 3:
        n = len(idx)
        for k in range(n):
            a, b, c = idx[k - 1], idx[k], idx[(k + 1) % n]
            if o(a, b, c) <= 0:
                continue
            ok = True
            for v in idx:
                if v in (a, b, c):
                    continue
                if o(a, b, v) > 0 and o(b, c, v) > 0 and o(c, a, v) > 0:
                    ok = False
                    break
            if ok:
                out.append((a, b, c))
                del idx[k]
                break
        else:
            raise LemmaViolation("ear clipping found no ear (polygon not simple?)")
    out.append(tuple(idx))
    return out


def lawson_flips(T: Triangulation, protect_constrained=True, on_flip=None, flip_cap=None):
    """Flip non-Delaunay edges until the empty-circumcircle test passes.

    on_flip(old_edge, new_edge, apexes) is called after each flip with local
    indices; the flip count is returned and capped (a blown cap indicates a
    bug, not bad input).
    """
    if flip_cap is None:
        flip_cap = 4 * len(T.pts) * len(T.pts) + 64
    queue = deque(sorted(T.edge_tris))
    queued = set(queue)
    count = 0
    while queue:
        e = queue.popleft()
        queued.discard(e)
        if protect_constrained and e in T.constrained:
            continue
        ts = T.edge_tris.get(e)
        if ts is None or len(ts) != 2:
            continue
        a, b = e
        t1, t2 = sorted(ts)
        c = T.apex(t1, a, b)
        d = T.apex(t2, a, b)
        # in_circle wants (a, b, c) CCW: c must be the apex left of a->b
        if (a, b) in ((t2[0], t2[1]), (t2[1], t2[2]), (t2[2], t2[0])):
            c, d = d, c
        if T.in_circle(a, b, c, d) <= 0:
            continue
        # quad a-c-b-d must be strictly convex for the flip
        if not (
            T.orient(c, d, a) != T.orient(c, d, b)
            and T.orient(c, d, a) != 0
            and T.orient(c, d, b) != 0
        ):
            raise LemmaViolation(f"illegal edge {e} in non-convex quad")
        for t in list(ts):
            T.remove_tri(t)
        T.add_tri(a, c, d)
        T.add_tri(b, c, d)
        count += 1
        if count > flip_cap:
            raise LemmaViolation("flip budget exceeded")
        if on_flip is not None:
            on_flip((a, b), _ek(c, d), (c, d))
        for side in (_ek(a, c), _ek(c, b), _ek(b, d), _ek(d, a), _ek(c, d)):
            if side not in queued and side in T.edge_tris:
                queue.append(side)
                queued.add(side)
    return count


def is_delaunay(T: Triangulation) -> bool:
    """Exact empty-circumcircle check over all adjacent triangle pairs."""
    for e, ts in T.edge_tris.items():
        if len(ts) != 2:
            continue
        a, b = e
        t1, t2 = sorted(ts)
        c = T.apex(t1, a, b)
        d = T.apex(t2, a, b)
        if T.in_circle(*t1, d) > 0 or T.in_circle(*t2, c) > 0:
            return False
    return True

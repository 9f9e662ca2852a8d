"""Morphing a connected PSLG into a short Hamiltonian cycle by certified
edge insertions and deletions.

Five phases: (1) strip to a minimum spanning subtree of the existing edges;
(2) flip an arbitrary triangulation of the tree to the Delaunay
triangulation, swapping each flipped tree edge for a strictly shorter quad
side; (3) exchange edges to the Euclidean MST; (4) grow a weakly simple
polygon from a hull edge until it spans every vertex; (5) shortcut repeated
vertices until the polygon is simple.

Every step keeps the graph a connected PSLG below the length ceiling
||E|| + ||MST(V)||; the final cycle has length at most 2 ||MST(V)||.  All
steps are recorded in a replayable OpLog, with per-step snapshots.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .geom import angle_less, convex_hull, dist, ekey, segments_properly_cross
from .geodesic import geodesic
from .pslg import (
    InvalidInstance,
    LemmaViolation,
    Pslg,
    PslgError,
    build,
    require_augmentable,
)
from .triangulate import insert_constraint, is_delaunay, lawson_flips, triangulate_points

LENGTH_TOL = 1e-9

PHASE_TREE = 1
PHASE_DELAUNAY = 2
PHASE_MST = 3
PHASE_GROW = 4
PHASE_SIMPLIFY = 5


class ReplayViolation(PslgError):
    def __init__(self, step, invariant, message=""):
        self.step = step
        self.invariant = invariant
        super().__init__(f"step {step}: {invariant} violated{': ' + message if message else ''}")


@dataclass(frozen=True)
class OpStep:
    op: str  # "insert" | "delete"
    u: int
    v: int
    phase: int


@dataclass
class Snapshot:
    len_graph: float
    len_weighted: float
    phase: int


@dataclass
class OpLog:
    steps: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)


@dataclass
class WeaklySimplePolygon:
    """Closed vertex sequence with edge multiset of multiplicity at most 2."""

    seq: list  # cyclic, no duplicated closing vertex

    def vertices(self):
        return set(self.seq)

    def edge_multiset(self):
        m = len(self.seq)
        return Counter(ekey(self.seq[i], self.seq[(i + 1) % m]) for i in range(m))

    def multiplicity(self):
        return Counter(self.seq)

    def length(self, g):
        m = len(self.seq)
        return sum(
            dist(g.by_id[self.seq[i]], g.by_id[self.seq[(i + 1) % m]])
            for i in range(m)
        )

    def is_simple(self):
        return max(self.multiplicity().values()) == 1

    def validate(self, g):
        m = len(self.seq)
        if m < 3:
            raise LemmaViolation("polygon too short")
        ems = self.edge_multiset()
        if max(ems.values()) > 2:
            raise LemmaViolation("polygon edge multiplicity exceeds 2")
        # support edges must be pairwise non-crossing
        sup = sorted(ems)
        for i in range(len(sup)):
            a, b = sup[i]
            pa, pb = g.by_id[a], g.by_id[b]
            for j in range(i + 1, len(sup)):
                c, d = sup[j]
                pc, pd = g.by_id[c], g.by_id[d]
                if segments_properly_cross(
                    pa.x, pa.y, pb.x, pb.y, pc.x, pc.y, pd.x, pd.y
                ):
                    raise LemmaViolation(f"polygon edges {sup[i]} {sup[j]} cross")
        self._check_rotations(g)

    def _check_rotations(self, g):
        """Occurrence ray pairs at a repeated vertex must not strictly
        interleave in the circular order (the curve would cross itself)."""
        m = len(self.seq)
        at = {}
        for j, v in enumerate(self.seq):
            prev = self.seq[j - 1]
            nxt = self.seq[(j + 1) % m]
            at.setdefault(v, []).append((prev, nxt))
        for v, occs in at.items():
            if len(occs) < 2:
                continue
            vx, vy = g.ipt(v)

            def angle_key(w):
                wx, wy = g.ipt(w)
                dx, dy = wx - vx, wy - vy
                half = 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1
                return (half, dx, dy)

            rays = sorted({w for occ in occs for w in occ}, key=angle_key)

            def circ_cmp(a, b):
                ax, ay = g.ipt(a)
                bx, by = g.ipt(b)
                da = (ax - vx, ay - vy)
                db = (bx - vx, by - vy)
                ha = 0 if (da[1] > 0 or (da[1] == 0 and da[0] > 0)) else 1
                hb = 0 if (db[1] > 0 or (db[1] == 0 and db[0] > 0)) else 1
                if ha != hb:
                    return -1 if ha < hb else 1
                cr = da[0] * db[1] - da[1] * db[0]
                return -1 if cr > 0 else (1 if cr < 0 else 0)

            import functools

            order = sorted({w for occ in occs for w in occ}, key=functools.cmp_to_key(circ_cmp))
            pos = {w: i for i, w in enumerate(order)}
            for a in range(len(occs)):
                for b in range(a + 1, len(occs)):
                    quad = {*occs[a], *occs[b]}
                    if len(quad) < 4:
                        continue  # shared ray direction: skip (not strict)
                    a1, a2 = sorted((pos[occs[a][0]], pos[occs[a][1]]))
                    b1, b2 = sorted((pos[occs[b][0]], pos[occs[b][1]]))
                    if (a1 < b1 < a2 < b2) or (b1 < a1 < b2 < a2):
                        raise LemmaViolation(
                            f"polygon occurrences interleave at vertex {v}"
                        )


class _Editor:
    """Mutable edge set over fixed points, recording certified operations."""

    def __init__(self, g: Pslg, ceiling: float):
        self.g = g
        self.edges = set(g.edges)
        self.length = g.total_length()
        self.ceiling = ceiling
        self.log = OpLog()

    def _assert_ceiling(self, phase, weighted=None):
        if self.length > self.ceiling + LENGTH_TOL:
            raise LemmaViolation(
                f"length {self.length:.9g} exceeds ceiling {self.ceiling:.9g}"
            )
        self.log.snapshots.append(
            Snapshot(
                len_graph=self.length,
                len_weighted=self.length if weighted is None else weighted,
                phase=phase,
            )
        )

    def insert(self, u, v, phase, weighted=None):
        e = ekey(u, v)
        if e in self.edges:
            raise LemmaViolation(f"insert of existing edge {e}")
        pu, pv = self.g.by_id[u], self.g.by_id[v]
        for (a, b) in self.edges:
            pa, pb = self.g.by_id[a], self.g.by_id[b]
            if segments_properly_cross(
                pu.x, pu.y, pv.x, pv.y, pa.x, pa.y, pb.x, pb.y
            ):
                raise LemmaViolation(f"insert {e} crosses {ekey(a, b)}")
        self.edges.add(e)
        self.length += dist(pu, pv)
        self.log.steps.append(OpStep("insert", e[0], e[1], phase))
        self._assert_ceiling(phase, weighted)

    def delete(self, u, v, phase, weighted=None):
        e = ekey(u, v)
        if e not in self.edges:
            raise LemmaViolation(f"delete of missing edge {e}")
        self.edges.remove(e)
        if not self._connected():
            raise LemmaViolation(f"delete {e} disconnects the graph")
        self.length -= dist(self.g.by_id[u], self.g.by_id[v])
        self.log.steps.append(OpStep("delete", e[0], e[1], phase))
        self._assert_ceiling(phase, weighted)

    def _connected(self):
        ids = [p.id for p in self.g.points]
        adj = {i: [] for i in ids}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {ids[0]}
        stack = [ids[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(ids)

    def snapshot_graph(self) -> Pslg:
        return build(self.g.points, sorted(self.edges))


def _sq(g, u, v):
    ux, uy = g.ipt(u)
    vx, vy = g.ipt(v)
    return (ux - vx) ** 2 + (uy - vy) ** 2


def _kruskal(g, edge_pool):
    """Minimum spanning forest of the pool, exact lengths, ties by key."""
    ids = [p.id for p in g.points]
    parent = {i: i for i in ids}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    out = set()
    for e in sorted(edge_pool, key=lambda e: (_sq(g, *e), e)):
        ra, rb = find(e[0]), find(e[1])
        if ra != rb:
            parent[ra] = rb
            out.add(e)
    return out


def euclidean_mst(g: Pslg):
    """Canonical Euclidean MST over all point pairs (exact comparisons)."""
    ids = sorted(p.id for p in g.points)
    pool = [(ids[i], ids[j]) for i in range(len(ids)) for j in range(i + 1, len(ids))]
    return _kruskal(g, pool)


def mst_length(g: Pslg):
    return sum(dist(g.by_id[u], g.by_id[v]) for u, v in euclidean_mst(g))


# -- phases -------------------------------------------------------------


def phase1_spanning_tree(ed: _Editor):
    """Strip to the minimum spanning subtree of the existing edges."""
    tree = _kruskal(ed.g, ed.edges)
    for e in sorted(ed.edges - tree):
        ed.delete(e[0], e[1], PHASE_TREE)
    return tree


def phase2_to_delaunay_tree(ed: _Editor, tree):
    """Flip to the Delaunay triangulation, swapping flipped tree edges for
    strictly shorter quad sides; the intermediate graph stays connected."""
    g = ed.g
    ids = sorted(p.id for p in g.points)
    lid = {v: i for i, v in enumerate(ids)}
    pts = [g.ipt(v) for v in ids]
    T = triangulate_points(pts)
    for (u, v) in sorted(tree):
        insert_constraint(T, lid[u], lid[v])
    T.constrained.clear()

    tree = set(tree)

    def on_flip(old_edge, new_edge, apexes):
        a, b = ids[old_edge[0]], ids[old_edge[1]]
        e = ekey(a, b)
        if e not in tree:
            return
        c, d = ids[apexes[0]], ids[apexes[1]]
        # pick the apex with the obtuse angle: both its sides are shorter
        # than the flipped edge
        if _dot_at(g, c, a, b) < 0:
            apex = c
        elif _dot_at(g, d, a, b) < 0:
            apex = d
        else:
            raise LemmaViolation("no obtuse apex on an illegal edge")
        comp_a = _tree_component(tree - {e}, a)
        other = b if apex in comp_a else a
        new = ekey(apex, other)
        if _sq(g, *new) >= _sq(g, a, b):
            raise LemmaViolation("tree swap did not shorten")
        ed.insert(new[0], new[1], PHASE_DELAUNAY)
        ed.delete(a, b, PHASE_DELAUNAY)
        tree.discard(e)
        tree.add(new)

    flips = lawson_flips(T, protect_constrained=False, on_flip=on_flip)
    if not is_delaunay(T):
        raise LemmaViolation("flip sequence did not reach Delaunay")
    for e in tree:
        if not T.has_edge(lid[e[0]], lid[e[1]]):
            raise LemmaViolation("tree edge missing from the Delaunay triangulation")
    ed.log.stats["flips"] = flips
    ed.log.stats["delaunay_ok"] = True
    return tree, T


def _dot_at(g, apex, a, b):
    ax, ay = g.ipt(a)
    bx, by = g.ipt(b)
    cx, cy = g.ipt(apex)
    return (ax - cx) * (bx - cx) + (ay - cy) * (by - cy)


def _tree_component(edges, root):
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen = {root}
    stack = [root]
    while stack:
        x = stack.pop()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def phase3_to_mst(ed: _Editor, tree):
    """Exchange tree edges for the canonical Euclidean MST: insert a missing
    MST edge, delete a longest edge of the unique created cycle."""
    g = ed.g
    target = euclidean_mst(g)
    tree = set(tree)
    for e in sorted(target - tree):
        ed.insert(e[0], e[1], PHASE_MST)
        tree.add(e)
        cyc = _tree_cycle(tree, e)
        mx = max(_sq(g, *f) for f in cyc)
        cand = [f for f in cyc if _sq(g, *f) == mx]
        outside = [f for f in cand if f not in target]
        if not outside:
            raise LemmaViolation("all longest cycle edges belong to the MST")
        f = min(outside)
        ed.delete(f[0], f[1], PHASE_MST)
        tree.discard(f)
    if tree != target:
        raise LemmaViolation("phase 3 did not reach the MST")
    return tree


def _tree_cycle(edges, e):
    """The unique cycle of tree+e, as a list of edge keys (e included)."""
    u0, v0 = e
    adj = {}
    for a, b in edges:
        if (a, b) == e:
            continue
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    # path from u0 to v0 in tree - e
    prev = {u0: None}
    stack = [u0]
    while stack:
        x = stack.pop()
        if x == v0:
            break
        for y in adj.get(x, ()):
            if y not in prev:
                prev[y] = x
                stack.append(y)
    if v0 not in prev:
        raise LemmaViolation("cycle edge endpoints not connected in tree")
    path = [v0]
    while path[-1] != u0:
        path.append(prev[path[-1]])
    return [e] + [ekey(path[i], path[i + 1]) for i in range(len(path) - 1)]


def _tree_path(edges, u0, v0):
    adj = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    prev = {u0: None}
    stack = [u0]
    while stack:
        x = stack.pop()
        if x == v0:
            break
        for y in adj.get(x, ()):
            if y not in prev:
                prev[y] = x
                stack.append(y)
    path = [v0]
    while path[-1] != u0:
        path.append(prev[path[-1]])
    return path[::-1]


def _weighted_length(g, poly: WeaklySimplePolygon, edges):
    sup = set(poly.edge_multiset())
    extra = sum(dist(g.by_id[u], g.by_id[v]) for u, v in edges if (u, v) not in sup)
    return poly.length(g) + extra


def phase4_grow_cycle(ed: _Editor, mst, mst_len):
    """Grow a weakly simple polygon from a hull edge over the whole vertex
    set; the polygon plus leftover edges never exceed twice the MST."""
    g = ed.g
    hull = convex_hull(list(g.points))
    hull_edges = [
        ekey(hull[i].id, hull[(i + 1) % len(hull)].id) for i in range(len(hull))
    ]
    absent = [e for e in hull_edges if e not in mst]
    if not absent:
        raise LemmaViolation("spanning tree contains the whole hull cycle")
    uv = max(absent, key=lambda e: (_sq(g, *e), [-c for c in e]))
    u, v = uv

    path = _tree_path(mst, u, v)
    ed.insert(u, v, PHASE_GROW)
    poly = WeaklySimplePolygon(seq=list(path))
    bound = 2 * mst_len + LENGTH_TOL

    rounds = 0
    while poly.vertices() != {p.id for p in g.points}:
        rounds += 1
        if rounds > g.n:
            raise LemmaViolation("phase 4 exceeded its round budget")
        g_cur = ed.snapshot_graph()
        vc = poly.vertices()
        found = None
        for y in sorted(vc):
            rot = g_cur.rotation[y]
            k = len(rot)
            yx, yy = g_cur.ipt(y)
            # a CCW-consecutive mixed pair with a convex corner always
            # exists at some boundary vertex (at most one reflex sector per
            # vertex); the in-polygon endpoint may come first or second
            for i in range(k):
                a, b = rot[i], rot[(i + 1) % k]
                if (a in vc) == (b in vc):
                    continue
                ax, ay = g_cur.ipt(a)
                bx, by = g_cur.ipt(b)
                if (ax - yx) * (by - yy) - (ay - yy) * (bx - yx) > 0:
                    found = (a, y, b)
                    break
            if found:
                break
        if found is None:
            raise LemmaViolation("no convex boundary pair found in phase 4")
        a_end, y, b_end = found
        xq, zq = (a_end, b_end) if a_end in vc else (b_end, a_end)
        ems = poly.edge_multiset()
        if ems.get(ekey(xq, y), 0) == 0:
            raise LemmaViolation("selected pair edge is not on the polygon")

        geo = geodesic(g_cur, [a_end, y, b_end])
        gids = geo.ids() if a_end == xq else geo.ids()[::-1]  # from xq to zq

        # splice: replace one copy of edge (xq, y) by xq .. geodesic .. zq, y
        m = len(poly.seq)
        at = None
        for j in range(m):
            a, b = poly.seq[j], poly.seq[(j + 1) % m]
            if ekey(a, b) == ekey(xq, y):
                at = j
                break
        a, b = poly.seq[at], poly.seq[(at + 1) % m]
        if a == xq:
            ins = gids[1:]  # ends at zq, then the old y follows
        else:
            ins = [zq] + gids[1:-1][::-1]
        new_seq = poly.seq[: at + 1] + ins + poly.seq[at + 1 :]
        new_poly = WeaklySimplePolygon(seq=new_seq)
        if max(new_poly.edge_multiset().values()) > 2:
            raise LemmaViolation("polygon edge multiplicity exceeded 2 in phase 4")

        # delete the replaced polygon edge first (the rest of the polygon
        # keeps everything connected); only then insert the geodesic, so the
        # intermediate length never spikes above the ceiling
        new_support = set(new_poly.edge_multiset())
        vc_new = new_poly.vertices()
        e0 = ekey(xq, y)
        if e0 not in new_support:
            wl = _weighted_length(g, new_poly, ed.edges - {e0})
            ed.delete(e0[0], e0[1], PHASE_GROW, weighted=wl)
        for e in zip(gids, gids[1:]):
            e = ekey(*e)
            if e not in ed.edges:
                wl = _weighted_length(g, new_poly, ed.edges | {e})
                ed.insert(e[0], e[1], PHASE_GROW, weighted=wl)
        for e in sorted(ed.edges):
            if e[0] in vc_new and e[1] in vc_new and e not in new_support:
                wl = _weighted_length(g, new_poly, ed.edges - {e})
                ed.delete(e[0], e[1], PHASE_GROW, weighted=wl)
        poly = new_poly
        poly.validate(g)
        wl = _weighted_length(g, poly, ed.edges)
        if wl > bound:
            raise LemmaViolation(
                f"phase 4 weighted length {wl:.9g} exceeds 2*MST {bound:.9g}"
            )
    if poly.length(g) > bound:
        raise LemmaViolation("final polygon exceeds 2*MST")
    return poly


def phase5_simplify(ed: _Editor, poly: WeaklySimplePolygon, mst_len):
    """Shortcut the sharpest corner of a repeated vertex until the polygon
    is simple; the total length strictly decreases each step."""
    g = ed.g
    bound = 2 * mst_len + LENGTH_TOL
    guard = 0
    while not poly.is_simple():
        guard += 1
        if guard > 4 * g.n * g.n + 16:
            raise LemmaViolation("phase 5 exceeded its step budget")
        g_cur = ed.snapshot_graph()
        mult = poly.multiplicity()
        m = len(poly.seq)
        best = None
        for j in range(m):
            vtx = poly.seq[j]
            if mult[vtx] < 2:
                continue
            prev = poly.seq[j - 1]
            nxt = poly.seq[(j + 1) % m]
            px, py = g.ipt(prev)
            vx, vy = g.ipt(vtx)
            nx, ny = g.ipt(nxt)
            u_vec = (px - vx, py - vy)
            w_vec = (nx - vx, ny - vy)
            key = (vtx, j)
            if best is None or angle_less(u_vec, w_vec, best[1], best[2]):
                best = (key, u_vec, w_vec, j, prev, vtx, nxt)
        _, u_vec, w_vec, j, prev, vtx, nxt = best
        cr = u_vec[0] * w_vec[1] - u_vec[1] * w_vec[0]
        if cr == 0:
            raise LemmaViolation("degenerate corner in phase 5")
        walk = [prev, vtx, nxt] if cr > 0 else [nxt, vtx, prev]
        geo = geodesic(g_cur, walk)
        gids = geo.ids() if cr > 0 else geo.ids()[::-1]
        # replace (prev, vtx, nxt) at position j by the geodesic
        old_len = poly.length(g)
        new_seq = poly.seq[:j] + gids[1:-1] + poly.seq[j + 1 :]
        if j == 0:
            new_seq = poly.seq[1:] + gids[1:-1]
        new_poly = WeaklySimplePolygon(seq=new_seq)
        if max(new_poly.edge_multiset().values()) > 2:
            raise LemmaViolation("polygon edge multiplicity exceeded 2 in phase 5")
        new_len = new_poly.length(g)
        if not new_len < old_len + 1e-12:
            raise LemmaViolation("phase 5 step did not shorten the polygon")

        # corner edges that vanish go first (the repeated vertex stays on
        # the polygon elsewhere), keeping the intermediate length monotone
        new_support = set(new_poly.edge_multiset())
        for e in sorted({ekey(prev, vtx), ekey(vtx, nxt)}):
            if e in ed.edges and e not in new_support:
                wl = _weighted_length(g, new_poly, ed.edges - {e})
                ed.delete(e[0], e[1], PHASE_SIMPLIFY, weighted=wl)
        for e in zip(gids, gids[1:]):
            e = ekey(*e)
            if e not in ed.edges:
                wl = _weighted_length(g, new_poly, ed.edges | {e})
                ed.insert(e[0], e[1], PHASE_SIMPLIFY, weighted=wl)
        for e in sorted(ed.edges):
            if e not in new_support:
                wl = _weighted_length(g, new_poly, ed.edges - {e})
                ed.delete(e[0], e[1], PHASE_SIMPLIFY, weighted=wl)
        poly = new_poly
        poly.validate(g)
        if _weighted_length(g, poly, ed.edges) > bound:
            raise LemmaViolation("phase 5 exceeded 2*MST")
    return poly


def transform(g: Pslg):
    """Run phases 1-5; returns (final cycle graph, polygon, OpLog)."""
    require_augmentable(g)
    base_len = g.total_length()
    mst_len = mst_length(g)
    ed = _Editor(g, ceiling=base_len + mst_len)
    ed.log.stats["base_length"] = base_len
    ed.log.stats["mst_length"] = mst_len

    tree = phase1_spanning_tree(ed)
    tree, _ = phase2_to_delaunay_tree(ed, tree)
    tree = phase3_to_mst(ed, tree)
    poly = phase4_grow_cycle(ed, tree, mst_len)
    poly = phase5_simplify(ed, poly, mst_len)

    final = ed.snapshot_graph()
    n = g.n
    if len(final.edges) != n or any(final.degree(p.id) != 2 for p in final.points):
        raise LemmaViolation("final graph is not a Hamiltonian cycle")
    if not poly.is_simple() or len(poly.seq) != n:
        raise LemmaViolation("final polygon is not simple Hamiltonian")
    final_len = final.total_length()
    if final_len > 2 * mst_len + LENGTH_TOL:
        raise LemmaViolation("final cycle exceeds 2*MST")
    ed.log.stats["final_length"] = final_len
    return final, poly, ed.log


def replay(g: Pslg, steps):
    """Re-execute an OpLog on a fresh copy of g, asserting planarity,
    connectivity and the length ceiling after every step."""
    ceiling = g.total_length() + mst_length(g) + LENGTH_TOL
    edges = set(g.edges)
    length = g.total_length()
    ids = [p.id for p in g.points]
    max_len = length

    def connected():
        adj = {i: [] for i in ids}
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {ids[0]}
        stack = [ids[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(ids)

    for k, st in enumerate(steps):
        e = ekey(st.u, st.v)
        if st.u not in g.by_id or st.v not in g.by_id:
            raise ReplayViolation(k, "vertices", f"unknown endpoint in {e}")
        if st.op == "insert":
            if e in edges:
                raise ReplayViolation(k, "planarity", f"edge {e} already present")
            pu, pv = g.by_id[st.u], g.by_id[st.v]
            for (a, b) in edges:
                pa, pb = g.by_id[a], g.by_id[b]
                if segments_properly_cross(
                    pu.x, pu.y, pv.x, pv.y, pa.x, pa.y, pb.x, pb.y
                ):
                    raise ReplayViolation(k, "planarity", f"{e} crosses {ekey(a,b)}")
            edges.add(e)
            length += dist(pu, pv)
        elif st.op == "delete":
            if e not in edges:
                raise ReplayViolation(k, "planarity", f"edge {e} not present")
            edges.remove(e)
            length -= dist(g.by_id[st.u], g.by_id[st.v])
        else:
            raise ReplayViolation(k, "op", st.op)
        if not connected():
            raise ReplayViolation(k, "connectivity")
        if length > ceiling:
            raise ReplayViolation(
                k, "length", f"{length:.9g} > ceiling {ceiling:.9g}"
            )
        max_len = max(max_len, length)

    return {
        "ok": True,
        "steps": len(steps),
        "max_intermediate_length": max_len,
        "final_length": length,
        "final_edges": sorted(edges),
    }

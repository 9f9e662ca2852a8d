"""PSLG data model: rotation systems, facial walks, connectivity queries and
the maximal-convex-walk decomposition with its dual graph.

Facial-walk convention: arriving at v via edge (u, v), the walk departs via
the CCW-successor of (v, u) in the rotation at v.  Each face then lies to the
right of its directed boundary edges, bounded faces are traversed clockwise
(negative shoelace area) and the outer walk is the unique one with
non-negative area.  Under this convention the corner of a walk (prev, apex,
next) spans exactly the angular sector of its face at that corner, measured
counterclockwise from ray(apex->prev) to ray(apex->next), so walk convexity
is decided by ccw_angle_class on the corner triple.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .geom import (
    CONVEX,
    Point,
    ekey,
    in_ccw_sector,
    orient_xy,
    segments_properly_cross,
    to_rational,
)


class PslgError(Exception):
    """Base class for instance-validation and internal-invariant errors."""


class DuplicatePoint(PslgError):
    pass


class CollinearTriple(PslgError):
    pass


class CrossingEdges(PslgError):
    pass


class EdgeThroughVertex(PslgError):
    pass


class InvalidInstance(PslgError):
    pass


class LemmaViolation(PslgError):
    """A structural invariant that must hold for every valid input failed:
    indicates an internal bug, not bad input."""


@dataclass(frozen=True)
class FacialWalk:
    face_id: int
    seq: tuple  # closed vertex-id sequence, seq[0] == seq[-1]
    is_outer: bool

    def __len__(self):
        return len(self.seq) - 1  # number of edge slots

    def edge_slots(self):
        return [ekey(self.seq[i], self.seq[i + 1]) for i in range(len(self.seq) - 1)]


@dataclass(frozen=True)
class Walk:
    """A contiguous subwalk of one facial walk (open or closed)."""

    face_id: int
    seq: tuple

    @property
    def closed(self):
        return self.seq[0] == self.seq[-1]

    def edges(self):
        return [ekey(self.seq[i], self.seq[i + 1]) for i in range(len(self.seq) - 1)]

    def __len__(self):
        return len(self.seq) - 1


@dataclass
class ConvexWalkSet:
    p0: list  # single-edge maximal walks
    p1: list  # closed convex walks
    p2: list  # open convex walks of >= 2 edges
    graph: "Pslg" = field(repr=False, default=None)


@dataclass
class DualGraph:
    nodes: list  # walks of P1 + P2
    adjacency: dict  # node index -> set of node indices


@dataclass
class ConnectivityReport:
    components: list
    cut_vertices: set
    bridges: set
    is_2_connected: bool
    is_2_edge_connected: bool

    @property
    def connected(self):
        return len(self.components) == 1


class Pslg:
    """Immutable planar straight-line graph in general position.

    Construct through :func:`build`; all derived queries are cached.
    """

    def __init__(self, points, edges, rotation, ix, iy, scale):
        self.points = points  # list[Point], input order
        self.edges = edges  # frozenset of (u, v), u < v
        self.rotation = rotation  # id -> tuple of neighbor ids, CCW
        self.by_id = {p.id: p for p in points}
        self._ix = ix  # id -> scaled int x
        self._iy = iy
        self._scale = scale
        self._walks = None
        self._conn = None
        self._face_env = None

    # -- basic views ---------------------------------------------------

    @property
    def n(self):
        return len(self.points)

    def neighbors(self, v):
        return self.rotation[v]

    def degree(self, v):
        return len(self.rotation[v])

    def total_length(self):
        from .geom import dist

        return sum(dist(self.by_id[u], self.by_id[v]) for u, v in self.edges)

    def ipt(self, v):
        """Scaled integer coordinates (exact, for hot-path predicates)."""
        return (self._ix[v], self._iy[v])

    def rotation_successor(self, v, u):
        """Neighbor following u in the CCW rotation at v."""
        rot = self.rotation[v]
        i = rot.index(u)
        return rot[(i + 1) % len(rot)]


def _polar_sort(center_xy, items, key_xy):
    """Sort items by CCW polar angle of key_xy(item) around center, starting
    from the +x axis.  Exact; assumes no two directions coincide."""
    cx, cy = center_xy

    def half(dxy):
        dx, dy = dxy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    import functools

    def cmp(i1, i2):
        x1, y1 = key_xy(i1)
        x2, y2 = key_xy(i2)
        d1 = (x1 - cx, y1 - cy)
        d2 = (x2 - cx, y2 - cy)
        h1, h2 = half(d1), half(d2)
        if h1 != h2:
            return -1 if h1 < h2 else 1
        cr = d1[0] * d2[1] - d1[1] * d2[0]
        if cr > 0:
            return -1
        if cr < 0:
            return 1
        return 0

    return sorted(items, key=functools.cmp_to_key(cmp))


def build(points, edge_pairs) -> Pslg:
    """Validate and build a PSLG.

    ``points`` is an iterable of Point or (id, x, y) with decimal-string
    (or int/Fraction) coordinates; ``edge_pairs`` an iterable of id pairs.
    Raises DuplicatePoint, CollinearTriple, CrossingEdges, EdgeThroughVertex
    or InvalidInstance with the offending ids.
    """
    pts = []
    for p in points:
        if isinstance(p, Point):
            pts.append(p)
        else:
            pid, x, y = p
            pts.append(Point.make(pid, x, y))

    ids = [p.id for p in pts]
    if len(set(ids)) != len(ids):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        raise DuplicatePoint(f"duplicate point ids: {dup}")
    coord_seen = {}
    for p in pts:
        other = coord_seen.get(p.coords())
        if other is not None:
            raise DuplicatePoint(f"points {other} and {p.id} coincide")
        coord_seen[p.coords()] = p.id

    # scale all coordinates to integers once; every combinatorial test
    # below (and the hot paths downstream) runs on ints
    denom = 1
    for p in pts:
        denom = lcm(denom, to_rational(p.x).denominator, to_rational(p.y).denominator)
    scale = Fraction(denom)
    ix = {p.id: int(p.x * denom) for p in pts}
    iy = {p.id: int(p.y * denom) for p in pts}

    by_id = {p.id: p for p in pts}
    edges = set()
    for u, v in edge_pairs:
        if u not in by_id or v not in by_id:
            raise InvalidInstance(f"edge ({u},{v}) references unknown point id")
        if u == v:
            raise InvalidInstance(f"self-loop at point {u}")
        k = ekey(u, v)
        if k in edges:
            raise InvalidInstance(f"duplicate edge {k}")
        edges.add(k)

    # edge through a third vertex (reported before the generic collinear scan)
    for (u, v) in sorted(edges):
        ax, ay, bx, by = ix[u], iy[u], ix[v], iy[v]
        for p in pts:
            if p.id in (u, v):
                continue
            px, py = ix[p.id], iy[p.id]
            if orient_xy(ax, ay, bx, by, px, py) == 0 and (
                min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)
            ):
                raise EdgeThroughVertex(f"edge ({u},{v}) passes through point {p.id}")

    # general position: no three collinear
    order = sorted(ids)
    for i in range(len(order)):
        a = order[i]
        ax, ay = ix[a], iy[a]
        for j in range(i + 1, len(order)):
            b = order[j]
            bx, by = ix[b], iy[b]
            for k in range(j + 1, len(order)):
                c = order[k]
                if orient_xy(ax, ay, bx, by, ix[c], iy[c]) == 0:
                    raise CollinearTriple(f"points ({a},{b},{c}) are collinear")

    # no two edges properly cross
    elist = sorted(edges)
    for i in range(len(elist)):
        u1, v1 = elist[i]
        for j in range(i + 1, len(elist)):
            u2, v2 = elist[j]
            if segments_properly_cross(
                ix[u1], iy[u1], ix[v1], iy[v1], ix[u2], iy[u2], ix[v2], iy[v2]
            ):
                raise CrossingEdges(f"edges ({u1},{v1}) and ({u2},{v2}) cross")

    rotation = {}
    adj = {p.id: [] for p in pts}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for p in pts:
        nbrs = _polar_sort((ix[p.id], iy[p.id]), adj[p.id], lambda w: (ix[w], iy[w]))
        rotation[p.id] = tuple(nbrs)

    return Pslg(pts, frozenset(edges), rotation, ix, iy, scale)


# -- facial walks ------------------------------------------------------


def facial_walks(g: Pslg):
    """All facial walks of g, canonically rotated and ordered.

    Each directed edge appears in exactly one walk exactly once; the unique
    walk of non-negative shoelace area is flagged as outer.
    """
    if g._walks is not None:
        return g._walks

    nxt = {}
    for v in g.rotation:
        rot = g.rotation[v]
        for i, u in enumerate(rot):
            # arrived via (u, v): continue to CCW-successor of u at v
            nxt[(u, v)] = (v, rot[(i + 1) % len(rot)])

    seen = set()
    raw = []
    for start in sorted(nxt):
        if start in seen:
            continue
        cyc = []
        d = start
        while True:
            cyc.append(d)
            seen.add(d)
            d = nxt[d]
            if d == start:
                break
        raw.append(cyc)

    walks = []
    for cyc in raw:
        # canonical rotation: start at the smallest directed edge
        k = min(range(len(cyc)), key=lambda i: cyc[i])
        cyc = cyc[k:] + cyc[:k]
        seq = tuple([d[0] for d in cyc] + [cyc[0][0]])
        walks.append(seq)
    walks.sort()

    areas = []
    for seq in walks:
        a = 0
        for i in range(len(seq) - 1):
            u, v = seq[i], seq[i + 1]
            a += g._ix[u] * g._iy[v] - g._ix[v] * g._iy[u]
        areas.append(a)

    # bounded faces are traversed clockwise (negative area); a walk of
    # non-negative area is the external boundary of its component (unique
    # when the graph is connected)
    result = []
    if walks and not any(a >= 0 for a in areas):
        raise LemmaViolation("no outer facial walk found")
    for i, seq in enumerate(walks):
        result.append(FacialWalk(face_id=i, seq=seq, is_outer=(areas[i] >= 0)))
    g._walks = result
    return result


def walk_of_directed_edge(g: Pslg):
    """Map each directed edge (u, v) to (face_id, position) in its walk."""
    index = {}
    for w in facial_walks(g):
        for i in range(len(w.seq) - 1):
            index[(w.seq[i], w.seq[i + 1])] = (w.face_id, i)
    return index


# -- connectivity ------------------------------------------------------


def connectivity(g: Pslg) -> ConnectivityReport:
    if g._conn is not None:
        return g._conn

    adj = {p.id: list(g.rotation[p.id]) for p in g.points}
    ids = sorted(adj)
    visited = set()
    components = []
    cut = set()
    bridges = set()

    for root in ids:
        if root in visited:
            continue
        comp = []
        # iterative Tarjan articulation/bridge DFS
        disc = {}
        low = {}
        parent = {root: None}
        children = {root: 0}
        stack = [(root, iter(adj[root]))]
        disc[root] = low[root] = len(visited)
        t = disc[root]
        visited.add(root)
        comp.append(root)
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if w not in disc:
                    t += 1
                    disc[w] = low[w] = t
                    parent[w] = v
                    children[w] = 0
                    children[v] = children.get(v, 0) + 1
                    visited.add(w)
                    comp.append(w)
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
                elif w != parent[v]:
                    low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        bridges.add(ekey(u, v))
                    if parent[u] is not None and low[v] >= disc[u]:
                        cut.add(u)
        if children.get(root, 0) > 1:
            cut.add(root)
        components.append(sorted(comp))

    # cross-check against the facial-walk characterization
    fw_cut = set()
    fw_bridges = set()
    for w in facial_walks(g):
        inner = w.seq[:-1]
        seen_v = set()
        for v in inner:
            if v in seen_v:
                fw_cut.add(v)
            seen_v.add(v)
        slot_seen = set()
        for e in w.edge_slots():
            if e in slot_seen:
                fw_bridges.add(e)
            slot_seen.add(e)
    if fw_cut != cut or fw_bridges != bridges:
        raise LemmaViolation(
            f"facial-walk characterization disagrees with DFS: "
            f"cut {sorted(fw_cut)} vs {sorted(cut)}, "
            f"bridges {sorted(fw_bridges)} vs {sorted(bridges)}"
        )

    connected = len(components) == 1
    report = ConnectivityReport(
        components=components,
        cut_vertices=cut,
        bridges=bridges,
        is_2_connected=connected and g.n >= 3 and not cut,
        is_2_edge_connected=connected and not bridges,
    )
    g._conn = report
    return report


def require_augmentable(g: Pslg):
    rep = connectivity(g)
    if not rep.connected:
        raise InvalidInstance("graph is not connected")
    if g.n < 3:
        raise InvalidInstance("need at least 3 vertices")


# -- convex walk decomposition ----------------------------------------


def _corner_convex(g: Pslg, prev, apex, nxt) -> bool:
    if prev == nxt:
        return False  # leaf / immediate backtrack: full angle
    ax, ay = g.ipt(apex)
    px, py = g.ipt(prev)
    nx, ny = g.ipt(nxt)
    return (px - ax) * (ny - ay) - (py - ay) * (nx - ax) > 0


def corner_sector_contains(g: Pslg, prev, apex, nxt, target) -> bool:
    """Exact test: does the ray apex->target lie strictly inside the facial
    sector at corner (prev, apex, nxt)?"""
    ax, ay = g.ipt(apex)
    px, py = g.ipt(prev)
    nx, ny = g.ipt(nxt)
    tx, ty = g.ipt(target)
    return in_ccw_sector(px - ax, py - ay, nx - ax, ny - ay, tx - ax, ty - ay)


def convex_walk_decomposition(g: Pslg) -> ConvexWalkSet:
    """Split every facial walk at its reflex corners into maximal convex
    walks: P0 single edges, P1 closed walks, P2 open walks of >= 2 edges."""
    require_augmentable(g)
    p0, p1, p2 = [], [], []
    for w in facial_walks(g):
        seq = w.seq
        m = len(seq) - 1
        # corner i sits between edge i and edge i+1, apex seq[i] (1-indexed,
        # corner m is the wrap corner at seq[m] == seq[0])
        reflex = []
        for i in range(1, m + 1):
            prev = seq[i - 1]
            apex = seq[i]
            nxt = seq[1] if i == m else seq[i + 1]
            if not _corner_convex(g, prev, apex, nxt):
                reflex.append(i)
        if not reflex:
            # the whole closed walk is convex
            inner = seq[:-1]
            k = min(range(m), key=lambda i: (inner[i], i))
            rot = inner[k:] + inner[:k]
            p1.append(Walk(w.face_id, tuple(rot) + (rot[0],)))
            continue
        for a, b in zip(reflex, reflex[1:] + [reflex[0] + m]):
            # run of edges a+1 .. b (cyclic), i.e. vertices seq[a..b]
            piece = tuple(seq[(a + i) % m] for i in range(b - a + 1))
            if len(piece) == 2:
                p0.append(Walk(w.face_id, piece))
            elif piece[0] == piece[-1]:
                p1.append(Walk(w.face_id, piece))
            else:
                p2.append(Walk(w.face_id, piece))
    return ConvexWalkSet(p0=p0, p1=p1, p2=p2, graph=g)


def dual_graph(c: ConvexWalkSet) -> DualGraph:
    """Dual graph on P1 + P2 walks, adjacent iff they share a graph edge.

    Asserts the two structural facts the bounds rest on: every edge of E is
    covered by some P1/P2 walk, and the dual graph is connected.
    """
    g = c.graph
    nodes = list(c.p1) + list(c.p2)
    edge_to_nodes = {}
    for i, wk in enumerate(nodes):
        for e in wk.edges():
            edge_to_nodes.setdefault(e, set()).add(i)
    uncovered = set(g.edges) - set(edge_to_nodes)
    if uncovered:
        raise LemmaViolation(f"edges not covered by any convex chain: {sorted(uncovered)}")
    adjacency = {i: set() for i in range(len(nodes))}
    for e, ns in edge_to_nodes.items():
        for i in ns:
            for j in ns:
                if i != j:
                    adjacency[i].add(j)
    if nodes:
        seen = {0}
        frontier = [0]
        while frontier:
            i = frontier.pop()
            for j in adjacency[i]:
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
        if len(seen) != len(nodes):
            raise LemmaViolation("dual graph of convex chains is disconnected")
    return DualGraph(nodes=nodes, adjacency=adjacency)

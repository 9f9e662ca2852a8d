"""Constructive augmentations to 2-edge- and 2-vertex-connectivity with
added length at most twice the existing edge length.

2-edge-connectivity: every maximal convex walk of two or more edges is cut
into pieces of two or three edges and each piece is closed into a cycle by
its geodesic.  2-connectivity: closed convex walks are handled directly
(either already a cycle, or a pendant vertex inside a convex polygon fixed
by one chord); open convex walks are decomposed from their hull subchain
outward so that every piece together with its geodesic forms a simple
cycle.

Since each edge occurs in at most two convex walks and geodesics never
exceed their walks in length, the produced length is bounded by twice the
total edge length; the bound is asserted, as is the resulting connectivity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .geom import convex_hull, dist, ekey
from .geodesic import geodesic
from .pslg import (
    ConvexWalkSet,
    LemmaViolation,
    Pslg,
    Walk,
    build,
    connectivity,
    convex_walk_decomposition,
    require_augmentable,
)

EDGE_2EC = "EDGE_2EC"
VERTEX_2VC = "VERTEX_2VC"

LENGTH_TOL = 1e-9


@dataclass
class Certificate:
    """Provenance of inserted edges: the convex walk piece, its geodesic and
    which of the geodesic's edges were new."""

    face_id: int
    walk: tuple
    geodesic: tuple
    new_edges: list
    geodesic_length: float


@dataclass
class AugmentationResult:
    added: list  # sorted edge keys
    total_added_length: float
    mode: str
    certificates: list = field(default_factory=list)

    @property
    def produced_length(self):
        """Multiset length of all produced geodesics (>= total_added_length);
        this is the quantity the 2||E|| bound is proved for."""
        return sum(c.geodesic_length for c in self.certificates)


def split_into_short_walks(c: ConvexWalkSet):
    """Cut every P1/P2 walk into edge-disjoint convex pieces of 2 or 3
    edges.  Single edges and 3-edge convex cycles are discarded."""
    pieces = []
    for w in sorted(list(c.p1) + list(c.p2), key=lambda w: (w.face_id, w.seq)):
        m = len(w)
        if m < 2:
            continue
        if w.closed and m == 3 and len(set(w.seq[:-1])) == 3:
            continue  # triangle: already a cycle
        sizes = []
        rem = m
        while rem > 0:
            if rem % 3 == 0 or rem > 4:
                sizes.append(3)
                rem -= 3
            else:  # rem is 2 or 4: finish with 2-edge pieces
                sizes.append(2)
                rem -= 2
        at = 0
        for s in sizes:
            pieces.append(Walk(w.face_id, w.seq[at : at + s + 1]))
            at += s
    return pieces


def _insert_geodesic_edges(g, walk, added, certs):
    geo = geodesic(g, walk.seq)
    gids = geo.ids()
    new = []
    for a, b in zip(gids, gids[1:]):
        e = ekey(a, b)
        if e in g.edges or e in added:
            continue
        added[e] = dist(g.by_id[a], g.by_id[b])
        new.append(e)
    certs.append(
        Certificate(
            face_id=walk.face_id,
            walk=tuple(walk.seq),
            geodesic=tuple(gids),
            new_edges=new,
            geodesic_length=geo.length,
        )
    )


def _finish(g, added, certs, mode):
    total = sum(added.values())
    bound = 2 * g.total_length()
    produced = sum(c.geodesic_length for c in certs)
    if produced > bound + LENGTH_TOL or total > bound + LENGTH_TOL:
        raise LemmaViolation(
            f"augmentation length {total:.12g} (produced {produced:.12g}) "
            f"exceeds 2||E|| = {bound:.12g}"
        )
    g2 = build(g.points, sorted(set(g.edges) | set(added)))
    rep = connectivity(g2)
    if mode == EDGE_2EC and not rep.is_2_edge_connected:
        raise LemmaViolation("augmented graph is not 2-edge-connected")
    if mode == VERTEX_2VC and not rep.is_2_connected:
        raise LemmaViolation("augmented graph is not 2-connected")
    return AugmentationResult(
        added=sorted(added),
        total_added_length=total,
        mode=mode,
        certificates=certs,
    )


def augment_2ec(g: Pslg) -> AugmentationResult:
    """Augment a connected PSLG to 2-edge-connectivity, added length at most
    2||E||."""
    require_augmentable(g)
    c = convex_walk_decomposition(g)
    added = {}
    certs = []
    for piece in split_into_short_walks(c):
        if piece.seq[0] == piece.seq[-1]:
            continue  # closed 3-edge piece of a longer walk: already a cycle
        _insert_geodesic_edges(g, piece, added, certs)
    return _finish(g, added, certs, EDGE_2EC)


def _case2_decompose(g, walk: Walk, added, certs):
    """Open convex walk: recursive hull-subchain decomposition.

    Every processed piece p' is a simple path whose geodesic avoids its
    other vertices, so p' + geod(p') is a simple cycle; the recursion covers
    the remaining prefix and suffix.
    """
    seq = list(walk.seq)
    if len(seq) < 3:
        return

    def cycle_ok(sub):
        if len(set(sub)) != len(sub):
            return None
        geo = geodesic(g, sub)
        gids = geo.ids()
        if len(set(gids)) != len(gids):
            return None
        if set(gids[1:-1]) & set(sub):
            return None
        return geo

    geo = cycle_ok(seq)
    if geo is not None:
        _insert_geodesic_edges(g, Walk(walk.face_id, tuple(seq)), added, certs)
        return

    pts = [g.by_id[v] for v in seq]
    hull_coords = {p.coords() for p in convex_hull(pts)}
    on_hull = [p.coords() in hull_coords for p in pts]
    # the hull vertices of a convex walk form one contiguous block
    blocks = []
    k = 0
    n = len(seq)
    while k < n:
        if on_hull[k]:
            j = k
            while j + 1 < n and on_hull[j + 1]:
                j += 1
            blocks.append((k, j))
            k = j + 1
        else:
            k += 1
    if len(blocks) != 1:
        raise LemmaViolation(
            f"hull subchain of convex walk is not contiguous: {blocks}"
        )
    i, j = blocks[0]
    if j - i < 1:
        raise LemmaViolation("hull subchain of convex walk has no edge")

    if seq[i] == seq[j]:
        # closed subchain along the hull: it is already a cycle in the graph
        pass
    else:
        if cycle_ok(seq[i : j + 1]) is None:
            raise LemmaViolation("geodesic of a safe hull subchain hits the walk")
        # grow the subchain while the simple-cycle property survives:
        # first toward the front, then toward the back
        while i > 0 and cycle_ok(seq[i - 1 : j + 1]) is not None:
            i -= 1
        while j < n - 1 and cycle_ok(seq[i : j + 2]) is not None:
            j += 1
        _insert_geodesic_edges(g, Walk(walk.face_id, tuple(seq[i : j + 1])), added, certs)

    if i > 0:
        _case2_decompose(g, Walk(walk.face_id, tuple(seq[: i + 1])), added, certs)
    if j < n - 1:
        _case2_decompose(g, Walk(walk.face_id, tuple(seq[j:])), added, certs)


def _split_simple_segments(seq):
    """Cut a walk at repeated-vertex occurrences into edge-disjoint maximal
    simple segments (consecutive segments share their junction vertex)."""
    segs = []
    start = 0
    seen = {seq[0]}
    k = 1
    while k < len(seq):
        if seq[k] in seen:
            if seq[k] == seq[k - 1]:
                raise LemmaViolation("immediate backtrack in convex walk")
            # close the previous segment before the repeat; the junction
            # vertex seq[k-1] starts the next segment
            segs.append(seq[start : k])
            start = k - 1
            seen = {seq[k - 1]}
        else:
            seen.add(seq[k])
            k += 1
    if start < len(seq) - 1:
        segs.append(seq[start:])
    return segs


def augment_2vc(g: Pslg) -> AugmentationResult:
    """Augment a connected PSLG to 2-connectivity, added length at most
    2||E||."""
    require_augmentable(g)
    c = convex_walk_decomposition(g)
    added = {}
    certs = []

    for w in sorted(c.p1, key=lambda w: (w.face_id, w.seq)):
        inner = w.seq[:-1]
        if len(set(inner)) == len(inner):
            continue  # a plain cycle: its vertices are already 2-connected
        seq = w.seq
        if seq[1] != seq[-2]:
            raise LemmaViolation(
                f"closed convex walk with unexpected repeat pattern: {seq}"
            )
        p0, p2 = seq[0], seq[2]
        e = ekey(p0, p2)
        if e not in g.edges and e not in added:
            added[e] = dist(g.by_id[p0], g.by_id[p2])
            certs.append(
                Certificate(
                    face_id=w.face_id,
                    walk=tuple(seq),
                    geodesic=(p0, p2),
                    new_edges=[e],
                    geodesic_length=added[e],
                )
            )

    for w in sorted(c.p2, key=lambda w: (w.face_id, w.seq)):
        for seg in _split_simple_segments(list(w.seq)):
            if len(seg) >= 3:
                _case2_decompose(g, Walk(w.face_id, tuple(seg)), added, certs)

    return _finish(g, added, certs, VERTEX_2VC)

import random

import numpy as np
import pytest

from pslgaug import build
from pslgaug.geom import ekey
from pslgaug.instances import generate
from pslgaug.optimal import (
    IndexedWalk,
    InfeasibleFace,
    cut_structure,
    dp_2ec,
    dp_2vc,
    feasibility,
    optimal_augment,
)
from pslgaug.oracle import Exhausted, brute_force_optimal
from pslgaug.pslg import connectivity, facial_walks
from pslgaug.heuristic import augment_2ec, augment_2vc


def occurrences(w, vid):
    return [i for i in range(1, w.n + 1) if w.vert[i] == vid]


def test_feasibility_fig3(fig3):
    walk = facial_walks(fig3)[0]
    w = IndexedWalk.from_walk(walk)
    F = feasibility(fig3, w, walk.is_outer)
    # the two dashed chords are feasible at exactly one occurrence pair each
    p1_pos = occurrences(w, 1)
    p3_pos = occurrences(w, 3)
    assert any(
        np.isfinite(F[i, j]) and F[i, j] == pytest.approx(1.0)
        for i in p1_pos
        for j in p3_pos
    )
    p4_pos = occurrences(w, 4)
    assert all(not np.isfinite(F[i, j]) for i in p1_pos for j in p4_pos)
    # existing edges are never candidates
    for i in range(1, w.n + 1):
        j = i + 1 if i < w.n else 1
        u, v = int(w.vert[i]), int(w.vert[j])
        assert not np.isfinite(F[min(i, j) or 1, max(i, j)]) or ekey(u, v) not in fig3.edges


def test_feasibility_matches_brute_force():
    # independent re-derivation of the feasibility semantics on a small tree
    g = generate(7, 12345, 0.0)
    walk = facial_walks(g)[0]
    w = IndexedWalk.from_walk(walk)
    F = feasibility(g, w, walk.is_outer)
    from pslgaug.geom import segments_properly_cross, in_ccw_sector

    def sector_ok(i, j):
        prev, nxt = w.neighbors(i)
        v = w.seq[i]
        vx, vy = g.ipt(v)
        px, py = g.ipt(prev)
        nx, ny = g.ipt(nxt)
        tx, ty = g.ipt(w.seq[j])
        return in_ccw_sector(px - vx, py - vy, nx - vx, ny - vy, tx - vx, ty - vy)

    face_edges = set()
    for i in range(1, w.n + 1):
        face_edges.add(ekey(w.seq[i - 1], w.seq[i]))
    for i in range(1, w.n + 1):
        for j in range(i + 1, w.n + 1):
            u, v = w.seq[i], w.seq[j]
            expect = True
            if u == v or ekey(u, v) in g.edges:
                expect = False
            if expect:
                expect = sector_ok(i, j) and sector_ok(j, i)
            if expect:
                ux, uy = g.ipt(u)
                vx, vy = g.ipt(v)
                for (a, b) in face_edges:
                    if u in (a, b) or v in (a, b):
                        continue
                    ax, ay = g.ipt(a)
                    bx, by = g.ipt(b)
                    if segments_properly_cross(ux, uy, vx, vy, ax, ay, bx, by):
                        expect = False
                        break
            assert np.isfinite(F[i, j]) == expect, (i, j)


def test_cut_structure_fig3(fig3):
    walk = facial_walks(fig3)[0]
    w = IndexedWalk.from_walk(walk)
    cuts = cut_structure(w, 1, w.n)
    assert set(cuts) == {2, 3}
    for v in (2, 3):
        assert len(cuts[v]["groups"]) == 1


def test_cut_structure_no_repeats(triangle):
    walk = [w for w in facial_walks(triangle) if not w.is_outer][0]
    w = IndexedWalk.from_walk(walk)
    assert cut_structure(w, 1, w.n) == {}


def test_cut_structure_star(star3):
    walk = facial_walks(star3)[0]
    w = IndexedWalk.from_walk(walk)
    cuts = cut_structure(w, 1, w.n)
    assert set(cuts) == {0}
    assert len(cuts[0]["occurrences"]) == 3
    assert len(cuts[0]["groups"]) == 2


def test_dp_fig3(fig3):
    walk = facial_walks(fig3)[0]
    cost, edges = dp_2vc(fig3, walk)
    assert cost == pytest.approx(2.0, abs=1e-9)
    assert edges == [(1, 3), (2, 4)]
    cost, edges = dp_2ec(fig3, walk)
    assert cost == pytest.approx(2.0, abs=1e-9)
    assert edges == [(1, 3), (2, 4)]


def test_dp_2connected_face(triangle):
    for walk in facial_walks(triangle):
        assert dp_2vc(triangle, walk) == (0.0, [])
        assert dp_2ec(triangle, walk) == (0.0, [])


def test_dp_two_triangles(two_triangles):
    res_ec = optimal_augment(two_triangles, "2ec")
    assert res_ec.total_added_length == 0.0
    res_vc = optimal_augment(two_triangles, "2vc")
    assert res_vc.total_added_length > 0
    cost, edges = brute_force_optimal(two_triangles, "2vc")
    assert res_vc.total_added_length == pytest.approx(cost, abs=1e-9)


def test_optimal_fig3(fig3):
    for mode in ("2vc", "2ec"):
        res = optimal_augment(fig3, mode)
        assert res.total_added_length == pytest.approx(2.0, abs=1e-9)
        assert res.added == [(1, 3), (2, 4)]


def test_optimal_already_2connected(square_diag):
    res = optimal_augment(square_diag, "2vc")
    assert res.added == [] and res.total_added_length == 0.0


def test_oracle_equality_random():
    rng = random.Random(77)
    checked = 0
    for seed in range(60):
        n = rng.randrange(4, 10)
        g = generate(n, seed + 40000, rng.choice([0.0, 0.3, 0.6]))
        for mode in ("2vc", "2ec"):
            try:
                bb_cost, _ = brute_force_optimal(g, mode, limit=26)
            except Exhausted:
                continue
            res = optimal_augment(g, mode)
            assert res.total_added_length == pytest.approx(bb_cost, abs=1e-9), (
                seed,
                mode,
            )
            checked += 1
    assert checked >= 60


def test_cardinality_mode_random():
    # unit weights make the DP a minimum-cardinality augmentation
    rng = random.Random(99)
    checked = 0
    for seed in range(40):
        n = rng.randrange(4, 9)
        g = generate(n, seed + 50000, rng.choice([0.0, 0.4]))
        for mode in ("2vc", "2ec"):
            try:
                bb_cost, _ = brute_force_optimal(g, mode, limit=22, weight="unit")
            except Exhausted:
                continue
            res = optimal_augment(g, mode, weight="unit")
            assert res.total_added_length == pytest.approx(bb_cost, abs=1e-9)
            assert len(res.added) == round(bb_cost)
            checked += 1
    assert checked >= 30


def test_dp_at_most_heuristic():
    rng = random.Random(7)
    for seed in range(40):
        n = rng.randrange(3, 11)
        g = generate(n, seed + 60000, rng.choice([0.0, 0.4, 0.8]))
        for mode, heur in (("2ec", augment_2ec), ("2vc", augment_2vc)):
            res = optimal_augment(g, mode)
            h = heur(g)
            assert res.total_added_length <= h.total_added_length + 1e-9
            g2 = build(g.points, sorted(set(g.edges) | set(res.added)))
            rep = connectivity(g2)
            assert rep.is_2_connected if mode == "2vc" else rep.is_2_edge_connected


def test_infeasible_face_error():
    # a subwalk interval with an unsatisfiable relative cut vertex reports
    # infinity internally; full instances in general position always succeed,
    # so exercise the error through the exception type only
    assert issubclass(InfeasibleFace, Exception)

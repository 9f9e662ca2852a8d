"""Instance files, run records, OpLog serialization and seeded generation.

Instance JSON keeps coordinates as decimal strings so exact predicates
reproduce across platforms; parsing then serializing is the identity.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
from fractions import Fraction

from .geom import orient_xy
from .pslg import InvalidInstance, Pslg, build
from .triangulate import lawson_flips, triangulate_points

FORMAT_VERSION = 1


def fraction_to_decimal(x: Fraction) -> str:
    """Exact decimal string of a rational whose denominator divides 10^k."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    x = abs(x)
    den = x.denominator
    k = 0
    while den % 2 == 0:
        den //= 2
        k += 1
    k2 = 0
    while den % 5 == 0:
        den //= 5
        k2 += 1
    if den != 1:
        raise InvalidInstance(f"coordinate {x} has no finite decimal form")
    digits = max(k, k2)
    scaled = x * 10**digits
    s = str(scaled.numerator)
    if digits == 0:
        return sign + s
    s = s.rjust(digits + 1, "0")
    whole, frac = s[:-digits], s[-digits:]
    frac = frac.rstrip("0")
    return sign + whole + ("." + frac if frac else "")


def serialize(g: Pslg) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "points": [
            {"id": p.id, "x": fraction_to_decimal(p.x), "y": fraction_to_decimal(p.y)}
            for p in sorted(g.points, key=lambda p: p.id)
        ],
        "edges": [list(e) for e in sorted(g.edges)],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def parse(text: str) -> Pslg:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInstance(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise InvalidInstance("missing or unsupported format_version")
    try:
        pts = [(p["id"], p["x"], p["y"]) for p in doc["points"]]
        edges = [tuple(e) for e in doc["edges"]]
    except (KeyError, TypeError) as e:
        raise InvalidInstance(f"malformed instance document: {e}") from None
    return build(pts, edges)


def load(path) -> Pslg:
    with open(path, "r", encoding="utf-8") as f:
        return parse(f.read())


def instance_hash(g: Pslg) -> str:
    return hashlib.sha256(serialize(g).encode()).hexdigest()[:16]


def default_seed() -> int:
    env = os.environ.get("PSLG_SEED")
    return int(env) if env else 0


# -- generation ---------------------------------------------------------

GRID = 1_000_000


def _collinear_with_any_pair(coords, c) -> bool:
    n = len(coords)
    for i in range(n):
        xi, yi = coords[i]
        for j in range(i + 1, n):
            xj, yj = coords[j]
            if orient_xy(xi, yi, xj, yj, c[0], c[1]) == 0:
                return True
    return False


def generate(n: int, seed: int, density: float) -> Pslg:
    """Seeded random connected PSLG: n grid points in general position,
    edges a random subgraph of their Delaunay triangulation repaired to
    connectivity with minimum-spanning-tree edges."""
    if n < 3:
        raise InvalidInstance("need n >= 3")
    rng = random.Random(seed)
    coords = []
    used = set()
    while len(coords) < n:
        c = (rng.randrange(GRID), rng.randrange(GRID))
        if c in used or _collinear_with_any_pair(coords, c):
            continue
        coords.append(c)
        used.add(c)

    T = triangulate_points(coords)
    lawson_flips(T, protect_constrained=False)
    dt_edges = sorted(T.edges())

    def d2(e):
        (x1, y1), (x2, y2) = coords[e[0]], coords[e[1]]
        return (x1 - x2) ** 2 + (y1 - y2) ** 2

    keep = [e for e in dt_edges if rng.random() < density]

    # Kruskal over DT edges gives the repair spanning tree
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in keep:
        parent[find(e[0])] = find(e[1])
    for e in sorted(dt_edges, key=lambda e: (d2(e), e)):
        ra, rb = find(e[0]), find(e[1])
        if ra != rb:
            parent[ra] = rb
            keep.append(e)

    pts = [(i, coords[i][0], coords[i][1]) for i in range(n)]
    return build(pts, sorted(set(keep)))


# -- run records and op logs -------------------------------------------


def run_record(g: Pslg, mode: str, payload: dict, wall_ms: float) -> dict:
    rec = {
        "instance": instance_hash(g),
        "mode": mode,
    }
    rec.update(payload)
    rec["wall_ms"] = round(wall_ms, 3)
    return rec


def record_json(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True) + "\n"


def oplog_to_jsonl(steps, assert_len_le=None) -> str:
    """One JSON object per step: {"op", "u", "v"} plus the optional length
    ceiling and phase tag."""
    lines = []
    for st in steps:
        doc = {"op": st.op, "u": st.u, "v": st.v, "phase": st.phase}
        if assert_len_le is not None:
            doc["assert_len_le"] = assert_len_le
        lines.append(json.dumps(doc, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def oplog_from_jsonl(text: str):
    from .transform import OpStep

    steps = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            doc = json.loads(line)
            op = doc["op"]
            u, v = int(doc["u"]), int(doc["v"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            raise InvalidInstance(f"bad oplog line {ln}") from None
        if op not in ("insert", "delete"):
            raise InvalidInstance(f"bad op {op!r} on oplog line {ln}")
        steps.append(OpStep(op=op, u=u, v=v, phase=int(doc.get("phase", 0))))
    return steps

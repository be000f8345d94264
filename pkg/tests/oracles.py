"""Independent reference implementations used by the tests.

Nothing here calls the planarization or equivalence code in the package;
the only package pieces used are the data types and, for *generating*
inputs, the validity filter.
"""
from __future__ import annotations

import functools
import random
from collections import Counter
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.spatial import Delaunay

from kitemorph.drawing import Drawing, validate_drawing
from kitemorph.graphs import adjacency, is_triconnected


# --- brute-force cell walks ------------------------------------------------------

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _proper_crossing(p, q, r, s):
    d1, d2 = _cross(p, q, r), _cross(p, q, s)
    d3, d4 = _cross(r, s, p), _cross(r, s, q)
    if d1 * d2 < 0 and d3 * d4 < 0:
        t = Fraction(d3, d3 - d4) if isinstance(d3, int) else d3 / (d3 - d4)
        return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
    return None


def _half(d):
    return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1


def _ccw_cmp(d1, d2):
    h1, h2 = _half(d1), _half(d2)
    if h1 != h2:
        return h1 - h2
    c = d1[0] * d2[1] - d1[1] * d2[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def brute_cells(d: Drawing):
    """Planar map of ``d``: node positions, ccw rotation and face walks.

    Crossing nodes are labelled by their pair of edges, so labels agree across
    drawings of the same graph."""
    pos = {v: (Fraction(p[0]), Fraction(p[1])) for v, p in d.positions.items()}
    edges = sorted(d.edges)
    on_edge = {e: [] for e in edges}
    for e, f in combinations(edges, 2):
        if set(e) & set(f):
            continue
        x = _proper_crossing(pos[e[0]], pos[e[1]], pos[f[0]], pos[f[1]])
        if x is not None:
            label = ("x",) + tuple(sorted((e, f)))
            pos[label] = x
            on_edge[e].append(label)
            on_edge[f].append(label)
    nbr = {v: set() for v in pos}
    for e in edges:
        a, b = pos[e[0]], pos[e[1]]
        chain = sorted(on_edge[e], key=lambda n: (pos[n][0] - a[0]) * (b[0] - a[0]) + (pos[n][1] - a[1]) * (b[1] - a[1]))
        seq = [e[0]] + chain + [e[1]]
        for s, t in zip(seq, seq[1:]):
            nbr[s].add(t)
            nbr[t].add(s)
    rot = {}
    for v, ns in nbr.items():
        p = pos[v]
        key = functools.cmp_to_key(lambda x, y: _ccw_cmp((pos[x][0] - p[0], pos[x][1] - p[1]),
                                                        (pos[y][0] - p[0], pos[y][1] - p[1])))
        rot[v] = sorted(ns, key=key)
    seen, walks = set(), []
    for u in sorted(pos, key=repr):
        for v in rot[u]:
            if (u, v) in seen:
                continue
            walk, a, b = [], u, v
            while (a, b) not in seen:
                seen.add((a, b))
                walk.append(a)
                ring = rot[b]
                a, b = b, ring[ring.index(a) - 1]   # next neighbour clockwise: face stays on the left
            walks.append(tuple(walk))
    return pos, nbr, walks


def _area2(walk, pos):
    return sum(pos[walk[i]][0] * pos[walk[(i + 1) % len(walk)]][1]
               - pos[walk[(i + 1) % len(walk)]][0] * pos[walk[i]][1] for i in range(len(walk)))


def _canon(walk):
    k = len(walk)
    return min((tuple(walk[(i + j) % k] for j in range(k)) for i in range(k)), key=repr) if k else ()


def _winding(p, walk, pos):
    w = 0
    for i in range(len(walk)):
        a, b = pos[walk[i]], pos[walk[(i + 1) % len(walk)]]
        if a[1] <= p[1] < b[1] and _cross(a, b, p) > 0:
            w += 1
        elif b[1] <= p[1] < a[1] and _cross(a, b, p) < 0:
            w -= 1
    return w


def cell_walk_signature(d: Drawing):
    """Bounded face walks, per-component outer walks, and for every component
    the bounded face (of another component) that immediately contains it."""
    pos, nbr, walks = brute_cells(d)
    comp, label = {}, 0
    for s in sorted(pos, key=repr):
        if s in comp:
            continue
        stack = [s]
        comp[s] = label
        while stack:
            x = stack.pop()
            for y in nbr[x]:
                if y not in comp:
                    comp[y] = label
                    stack.append(y)
        label += 1
    bounded, outer = [], {}
    for w in walks:
        if _area2(w, pos) > 0:
            bounded.append(w)
        else:
            outer[comp[w[0]]] = w
    for v in pos:
        if not nbr[v]:
            outer[comp[v]] = (v,)
    members = {c: sorted((x for x in pos if comp[x] == c), key=repr) for c in outer}
    contain = {}
    for c, walk in outer.items():
        p = pos[members[c][0]]
        host = [w for w in bounded if comp[w[0]] != c and _winding(p, w, pos) != 0]
        best = min(host, key=lambda w: _area2(w, pos)) if host else None
        contain[_canon(walk)] = _canon(best) if best is not None else None
    return (Counter(_canon(w) for w in bounded), Counter(_canon(w) for w in outer.values()), contain)


def oracle_equivalent(a: Drawing, b: Drawing) -> bool:
    return a.graph == b.graph and cell_walk_signature(a) == cell_walk_signature(b)


# --- random small drawings -----------------------------------------------------------

def random_drawing(rng: random.Random, n_max: int = 8, grid: int = 12):
    while True:
        n = rng.randint(2, n_max)
        names = [f"v{i}" for i in range(n)]
        pairs_ = list(combinations(names, 2))
        m = rng.randint(1, min(len(pairs_), 2 * n))
        edges = rng.sample(pairs_, m)
        pos = {v: (rng.randint(0, grid), rng.randint(0, grid)) for v in names}
        if len(set(pos.values())) < n:
            continue
        d = Drawing.build(pos, edges)
        if not validate_drawing(d):
            return d


def _moved(rng, d: Drawing, how: str, grid: int = 12):
    pos = {v: (Fraction(p[0]), Fraction(p[1])) for v, p in d.positions.items()}
    if how == "affine":
        while True:
            a, b, c, e = (rng.randint(-3, 3) for _ in range(4))
            if a * e - b * c > 0:
                break
        tx, ty = rng.randint(-5, 5), rng.randint(-5, 5)
        return {v: (a * x + b * y + tx, c * x + e * y + ty) for v, (x, y) in pos.items()}
    if how == "mirror":
        return {v: (-x, y) for v, (x, y) in pos.items()}
    if how == "jiggle":
        out = dict(pos)
        for v in rng.sample(sorted(pos), rng.randint(1, 2)):
            x, y = out[v]
            out[v] = (x + Fraction(rng.randint(-4, 4), 2), y + Fraction(rng.randint(-4, 4), 2))
        return out
    return {v: (rng.randint(0, grid), rng.randint(0, grid)) for v in pos}


def random_pair(rng: random.Random):
    """(a, b, how): two valid drawings of one graph, equivalent or not."""
    a = random_drawing(rng)
    while True:
        how = rng.choice(("affine", "affine", "mirror", "jiggle", "jiggle", "fresh"))
        pos = _moved(rng, a, how)
        if len(set(pos.values())) < len(pos):
            continue
        b = a.with_positions(pos)
        if not validate_drawing(b):
            return a, b, how


# --- random convex instances ------------------------------------------------------------

def _tutte(names, edges, fixed, rng):
    idx = {v: i for i, v in enumerate(names)}
    n = len(names)
    L = np.zeros((n, n))
    for u, v in edges:
        w = rng.uniform(0.2, 5.0)
        L[idx[u], idx[v]] -= w
        L[idx[v], idx[u]] -= w
        L[idx[u], idx[u]] += w
        L[idx[v], idx[v]] += w
    free = [idx[v] for v in names if v not in fixed]
    bnd = [idx[v] for v in fixed]
    xb = np.array([fixed[names[i]] for i in bnd], dtype=float)
    x = np.linalg.solve(L[np.ix_(free, free)], -L[np.ix_(free, bnd)] @ xb)
    out = {names[i]: tuple(xb[k]) for k, i in enumerate(bnd)}
    out.update({names[i]: tuple(x[k]) for k, i in enumerate(free)})
    return out


def _snap(p, q=10 ** 6):
    return (Fraction(round(p[0] * q), q), Fraction(round(p[1] * q), q))


def random_convex_instance(rng: random.Random, n_max: int = 50, fixed: bool = True, quads: bool = True):
    """(a, b) planar drawings of one triconnected graph with a triangular outer
    face and strictly convex inner faces (triangles and a few quadrilaterals)."""
    from kitemorph.geometry import is_strictly_convex

    np_rng = np.random.default_rng(rng.randrange(2 ** 32))
    n = rng.randint(4, n_max)
    corners = [(0.0, 0.0), (100.0, 0.0), (50.0, 90.0)]
    inner = []
    while len(inner) < n - 3:
        s, t = np_rng.random(2)
        if s + t < 1:
            x, y = s * 100 + t * 50, t * 90
            if min(y, 90 * x / 50 - y, 90 * (100 - x) / 50 - y) > 2:
                inner.append((x, y))
    pts = np.array(corners + inner)
    names = ["b0", "b1", "b2"] + [f"p{i}" for i in range(len(inner))]
    tri = Delaunay(pts)
    edges = set()
    triangles = []
    for s in tri.simplices:
        s = [int(i) for i in s]
        triangles.append(s)
        for i, j in ((0, 1), (1, 2), (0, 2)):
            edges.add(tuple(sorted((names[s[i]], names[s[j]]))))
    pos_a = {names[i]: _snap(p) for i, p in enumerate(pts)}
    if fixed:
        bnd_b = {v: pos_a[v] for v in names[:3]}
    else:
        ang = rng.uniform(-2.5, 2.5)
        c, s_ = np.cos(ang), np.sin(ang)
        sc = rng.uniform(0.5, 2.0)
        jitter = [(rng.uniform(-15, 15), rng.uniform(-15, 15)) for _ in range(3)]
        bnd_b = {}
        for k, v in enumerate(names[:3]):
            x, y = corners[k][0] + jitter[k][0], corners[k][1] + jitter[k][1]
            bnd_b[v] = _snap((sc * (c * x - s_ * y) + 20, sc * (s_ * x + c * y) - 30))
    b_float = _tutte(names, sorted(edges), {v: (float(p[0]), float(p[1])) for v, p in bnd_b.items()}, rng)
    pos_b = {v: _snap(p) for v, p in b_float.items()}
    pos_b.update(bnd_b)
    if quads:
        by_edge = {}
        for s in triangles:
            for i, j in ((0, 1), (1, 2), (0, 2)):
                by_edge.setdefault(tuple(sorted((names[s[i]], names[s[j]]))), []).append(s)
        used = set()
        for e in sorted(by_edge):
            if rng.random() > 0.15 or len(by_edge[e]) != 2:
                continue
            t1, t2 = by_edge[e]
            if used & {tuple(sorted(t1)), tuple(sorted(t2))}:
                continue
            other = [names[i] for i in t1 + t2 if names[i] not in e]
            quad = [e[0], other[0], e[1], other[1]]
            if not all(is_strictly_convex([p[v] for v in quad]) for p in (pos_a, pos_b)):
                continue
            trial = edges - {e}
            names_set = set(names)
            if not is_triconnected(adjacency(names_set, trial)):
                continue
            edges = trial
            used |= {tuple(sorted(t1)), tuple(sorted(t2))}
    a = Drawing.build(pos_a, sorted(edges))
    b = Drawing.build(pos_b, sorted(edges))
    return a, b


# --- chain-of-cycles and skinny-drawing checks ------------------------------------------------

def faces_at_base_are_triangles(d: Drawing, u: str, v: str) -> bool:
    _, _, walks = brute_cells(d)
    return all(len(w) == 3 for w in walks if u in w or v in w)


def inner_face_third_vertex(d: Drawing, u: str, v: str):
    pos, _, walks = brute_cells(d)
    for w in walks:
        if len(w) == 3 and u in w and v in w and _area2(w, pos) > 0:
            return next(x for x in w if x not in (u, v))
    return None


def chain_failures(hp, d_prime: str):
    """Names of the chain properties (a)-(e) that fail for H' ``hp``."""
    import networkx as nx

    u, v, d = hp.u, hp.v, hp.d
    keep = hp.a.vertices - {u, v}
    rest = Drawing.build({x: hp.a.positions[x] for x in keep},
                         [e for e in hp.a.edges if keep.issuperset(e)])
    pos, nbr, walks = brute_cells(rest)
    g = nx.Graph()
    g.add_nodes_from(keep)
    g.add_edges_from(rest.edges)
    bad = []
    outer = [w for w in walks if _area2(w, pos) <= 0]
    if not nx.is_connected(g) or len(outer) != 1:
        return ["a"]
    walk = outer[0]
    c = nx.Graph()
    c.add_nodes_from(walk)
    c.add_edges_from((walk[i], walk[(i + 1) % len(walk)]) for i in range(len(walk)) if len(walk) > 1)
    cd = Drawing.build({x: rest.positions[x] for x in c.nodes}, list(c.edges))
    cpos, _, cwalks = brute_cells(cd)
    couter = [w for w in cwalks if _area2(w, cpos) <= 0]
    if len(couter) != 1 or set(couter[0]) != set(c.nodes):
        bad.append("a")
    blocks = [set(b) for b in nx.biconnected_components(c)]
    for b in blocks:
        sub = c.subgraph(b)
        if not (sub.number_of_edges() == 1 or all(deg == 2 for _, deg in sub.degree())):
            bad.append("b")
            break
    adj = hp.a.graph.adjacency()
    cuts = set(nx.articulation_points(c))
    if any(not (u in adj[x] and v in adj[x]) for x in cuts):
        bad.append("c")
    bc = nx.Graph()
    for i, b in enumerate(blocks):
        bc.add_node(("B", i))
        for x in b & cuts:
            bc.add_edge(("B", i), ("C", x))
    if not (nx.is_tree(bc) and all(deg <= 2 for _, deg in bc.degree())):
        bad.append("d")
    ends = [b for i, b in enumerate(blocks) if bc.degree(("B", i)) <= 1]
    for x in c.nodes:
        if x in cuts:
            continue
        both = u in adj[x] and v in adj[x]
        if x in (d, d_prime):
            if not both or not any(x in b for b in ends):
                bad.append("e")
        elif both or not (u in adj[x] or v in adj[x]):
            bad.append("e")
    return sorted(set(bad))


def skinny_failures(skinny, chain, params):
    """Which of R.1-R.4 fail for a skinny drawing in its local (w, r) frame."""
    import math

    loc = skinny.local
    bad = []
    on_cycles = {x for cyc in skinny.cycles for x in cyc} | set(chain.nodes)
    if not all(math.hypot(*loc[x]) < params.radius and loc[x][1] > 0 for x in on_cycles):
        bad.append("R.1")
    for cyc in skinny.cycles:
        pts = [(Fraction(loc[x][0]), Fraction(loc[x][1])) for x in cyc]
        k = len(pts)
        turns = [_cross(pts[i - 1], pts[i], pts[(i + 1) % k]) for i in range(k)]
        if not all(t > 0 for t in turns) or _area2(list(range(k)), dict(enumerate(pts))) <= 0:
            bad.append("R.2")
            break
    if not all(loc[x][0] == 0 and loc[x][1] > 0 for x in chain.nodes):
        bad.append("R.3")
    for cyc in skinny.cycles:
        for i in range(len(cyc)):
            p, q = loc[cyc[i]], loc[cyc[(i + 1) % len(cyc)]]
            if not math.atan2(abs(q[0] - p[0]), abs(q[1] - p[1])) < params.phi:
                bad.append("R.4")
                break
    return sorted(set(bad))


def triconnected_bruteforce(vertices, edges) -> bool:
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(vertices)
    g.add_edges_from(edges)
    if g.number_of_nodes() < 4 or not nx.is_connected(g):
        return False
    for x, y in combinations(sorted(g.nodes), 2):
        h = g.copy()
        h.remove_nodes_from((x, y))
        if not nx.is_connected(h):
            return False
    return True

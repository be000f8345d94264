import math

import networkx as nx
import pytest

from kitemorph import corpus
from kitemorph.drawing import Drawing, subdrawing, validate_drawing
from kitemorph.geometry import DegenerateGeometryError
from kitemorph.kites import assign_levels, detect_kites
from kitemorph.morph import ConstantStage, MorphError, evaluate, sample
from kitemorph.pipeline import (
    NotEquivalentError,
    PieceOfKite,
    build_H_prime,
    compute_half_disk,
    extract_chain_of_cycles,
    extract_pieces,
    morph,
)

from oracles import oracle_equivalent

SQUARE = {"u": (0, 0), "v": (8, 0), "p": (8, 8), "q": (0, 8)}
KITE = [("u", "v"), ("v", "p"), ("p", "q"), ("q", "u"), ("u", "p"), ("v", "q")]


def kite_with(inner, edges):
    a = Drawing.build({**SQUARE, **inner}, KITE + edges)
    b = a.with_positions({k: (2 * x + 1, 3 * y - 2) for k, (x, y) in a.positions.items()})
    return a, b


def pieces_of(a):
    lv = assign_levels(a)
    qa = subdrawing(a, [v for v, k in lv.level.items() if k < lv.max_level])
    return extract_pieces(qa, a, lv)


def chain_for(inner, edges):
    a, b = kite_with(inner, edges)
    (piece,) = pieces_of(a)
    hp = build_H_prime(piece, a, b)
    return hp, extract_chain_of_cycles(hp)


def frame_of(pos):
    return lambda t: {k: (float(x), float(y)) for k, (x, y) in pos.items()}


def base_piece():
    d = Drawing.build({"u": (0, 0), "v": (2, 0), "p": (2, 4), "q": (0, 4)}, KITE)
    (k,) = detect_kites(d)
    return d, PieceOfKite(k, ("u", "v"), k.crossing_point, frozenset(), frozenset(), 1)


# --- half-disk ---------------------------------------------------------------------------

def test_static_half_disk_closed_form():
    d, piece = base_piece()
    assert piece.apex == (1, 2)
    hd = compute_half_disk(piece, frame_of(d.positions), samples=5)
    assert hd.lam == pytest.approx(2 * 0.95, rel=1e-12)
    assert hd.radius == pytest.approx(2 / math.sqrt(5) * 0.9, rel=1e-12)
    assert hd.phi == pytest.approx(math.atan(hd.lam / (2 * hd.radius)), rel=1e-12)


def test_unit_half_disk_gives_forty_five_degrees():
    d, piece = base_piece()
    # rescale the safety factors so that lambda = 2 and |r| = 1
    hd = compute_half_disk(piece, frame_of(d.positions), samples=3, lam_safety=1.0,
                           radius_safety=math.sqrt(5) / 2)
    assert hd.lam == pytest.approx(2.0) and hd.radius == pytest.approx(1.0)
    assert math.degrees(hd.phi) == pytest.approx(45.0)


def test_degenerate_apex_is_an_error():
    d, piece = base_piece()
    flat = {**d.positions, "p": (2, 0)}
    with pytest.raises(DegenerateGeometryError):
        compute_half_disk(piece, frame_of(flat), samples=3)


# --- pieces, H' and chains ---------------------------------------------------------------

def test_single_inner_vertex_gives_one_piece_and_one_edge_chain():
    hp, chain = chain_for({"x": (4, 1)}, [("x", "u"), ("x", "v")])
    assert hp.riders == {"x", hp.d}
    assert chain.d_prime == "x" and chain.d == hp.d
    assert chain.nodes == ["x", hp.d] and len(chain.blocks) == 1
    assert oracle_equivalent(hp.a, hp.b)


def test_two_stacked_vertices_form_two_blocks():
    hp, chain = chain_for({"x1": (4, 1), "x2": (4, 2)},
                          [("x1", "u"), ("x1", "v"), ("x2", "u"), ("x2", "v"), ("x1", "x2")])
    assert chain.nodes == ["x1", "x2", hp.d] and chain.cutvertices == ["x2"]
    # brute-force block decomposition of H' - {u, v}
    g = nx.Graph(e for e in hp.a.edges if not {hp.u, hp.v} & set(e))
    blocks = {frozenset(b) for b in nx.biconnected_components(g)}
    assert blocks == set(chain.blocks)
    tree = nx.Graph()
    for b in chain.blocks:
        for c in chain.cutvertices:
            if c in b:
                tree.add_edge(b, c)
    assert tree.number_of_nodes() == 3 and nx.is_path(tree, [chain.blocks[0], "x2", chain.blocks[1]])


def test_piece_vertices_partition_the_top_level(corpus_pairs):
    for name, (a, _) in corpus_pairs.items():
        lv = assign_levels(a)
        if lv.max_level == 0:
            continue
        pieces = pieces_of(a)
        top = {v for v, k in lv.level.items() if k == lv.max_level}
        assert sum(len(p.h) for p in pieces) == len(top)
        assert set().union(*(p.h for p in pieces)) == top


def test_two_level_instance_pieces(corpus_pairs):
    pieces = pieces_of(corpus_pairs["two_level"][0])
    assert 1 <= len(pieces) <= 4
    assert len({p.kite for p in pieces}) == 1


def test_chain_adjacency_tags_match_h_prime(corpus_morphs):
    seen = 0
    for m in corpus_morphs.values():
        for rec in m.trace.pieces:
            ch, hp = rec.chain, rec.hp
            for x, tag in ch.tags.items():
                to_u = (min(x, hp.u), max(x, hp.u)) in hp.a.edges
                to_v = (min(x, hp.v), max(x, hp.v)) in hp.a.edges
                assert (tag == "both") == (to_u and to_v)
                assert tag != "u" or to_u
                assert tag != "v" or to_v
            seen += 1
    assert seen > 0


# --- morphs --------------------------------------------------------------------------------

def test_identical_drawings_give_a_constant_morph():
    a = corpus.two_level()
    m = morph(a, a)
    assert isinstance(m.stage, ConstantStage)
    assert evaluate(m, 0.3).positions == evaluate(m, 0.9).positions


def test_mirror_image_is_rejected():
    a = corpus.planar_convex()
    b = a.with_positions({v: (-x, y) for v, (x, y) in a.positions.items()})
    with pytest.raises(NotEquivalentError):
        morph(a, b)


def test_one_piece_gives_three_phases():
    a, b = kite_with({"x": (4, 1)}, [("x", "u"), ("x", "v")])
    m = morph(a, b)
    assert len(m.trace.pieces) == 1
    (rec,) = m.trace.pieces
    assert all(rec.checks.values())
    seq = m.stage.inner
    assert [type(st).__name__ for st, _ in seq.parts] == ["ParallelStage", "RigidFollowStage", "ParallelStage"]
    frames = sample(m, 41)
    for fr in frames[1:-1:5]:
        assert validate_drawing(fr) == []
        assert oracle_equivalent(a, fr)


def test_endpoints_and_sampling(corpus_morphs, corpus_pairs):
    m = corpus_morphs["k4_kite"]
    a, b = corpus_pairs["k4_kite"]
    s = sample(m, 3)
    assert [f.positions for f in s] == [evaluate(m, t).positions for t in (0.0, 0.5, 1.0)]
    for fr, d in ((s[0], a), (s[-1], b)):
        diag = max(math.dist(map(float, p), map(float, q)) for p in d.positions.values() for q in d.positions.values())
        assert max(math.dist(fr.positions[v], tuple(map(float, d.positions[v]))) for v in d.vertices) <= 1e-9 * diag
    with pytest.raises(MorphError):
        evaluate(m, 1.5)


def test_recursion_reaches_every_level(corpus_morphs, corpus_pairs):
    a, _ = corpus_pairs["nested_three_level"]
    m = corpus_morphs["nested_three_level"]
    assert assign_levels(a).max_level == 2
    # one piece record per occupied kite side on each recursive level
    assert len(m.trace.pieces) >= 2

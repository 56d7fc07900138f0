import json

import pytest
from hypothesis import given, strategies as st

from oracles import brute_force_hom_count, is_morphism
from prime_moduli import graphs
from prime_moduli.errors import InvalidInputError, MarkingConflictError, NotAForestError, ResourceCapError, ValenceError
from prime_moduli.graphs import Graph, MarkedGraph, make_graph
from strategies import composable, pool, relabelled


def loop_graph():
    return make_graph(1, [(0, 0)], (0,))


# -- construction and validation ----------------------------------------------


def test_theta_and_rose_shapes():
    t, r = graphs.theta(), graphs.rose2()
    assert (t.num_vertices, t.num_edges, t.genus) == (2, 3, 2)
    assert (r.num_vertices, r.num_edges, r.genus) == (1, 2, 2)
    assert all(t.graph.valence(v) == 3 for v in t.graph.vertices)
    assert r.graph.loops_at(0) == 2


def test_disconnected_graph_rejected():
    with pytest.raises(InvalidInputError):
        make_graph(2, [(0, 0), (1, 1)], (0, 1))


def test_low_valence_unmarked_vertex_rejected():
    with pytest.raises(ValenceError):
        make_graph(2, [(0, 1), (0, 1)], (0,))


def test_marking_must_be_injective():
    with pytest.raises(InvalidInputError):
        make_graph(1, [(0, 0)], (0, 0))


def test_involution_must_be_fixed_point_free():
    with pytest.raises(InvalidInputError):
        Graph(1, (0, 0), (0, 1))


def test_json_round_trip():
    for mg in (graphs.theta(), graphs.rose2(), loop_graph(), *pool(1, 2)):
        text = json.dumps(mg.to_json())
        assert MarkedGraph.from_json(text) == mg


def test_resolve_graph_accepts_names_and_json(tmp_path):
    assert graphs.resolve_graph("theta") == graphs.theta()
    path = tmp_path / "g.json"
    path.write_text(json.dumps(loop_graph().to_json()))
    assert graphs.resolve_graph(str(path)) == loop_graph()
    with pytest.raises(InvalidInputError):
        graphs.resolve_graph("no-such-graph")


def test_redundant_edges_of_dumbbell():
    dumbbell = make_graph(2, [(0, 0), (1, 1), (0, 1)])
    assert dumbbell.redundant_edges() == (2,) or list(dumbbell.redundant_edges()) == [2]
    assert not graphs.theta().has_redundant_edges()


# -- enumeration ------------------------------------------------------------


@pytest.mark.parametrize(
    "g, n, nr, expected",
    [(2, 0, True, 2), (2, 0, False, 3), (1, 1, False, 2), (0, 2, False, 1), (0, 3, False, 4), (3, 0, True, 8), (3, 0, False, 15)],
)
def test_enumeration_counts(g, n, nr, expected):
    assert len(graphs.enumerate_graphs(g, n, no_redundant=nr)) == expected


def test_enumeration_has_no_duplicates_and_respects_type():
    found = graphs.enumerate_graphs(2, 1)
    keys = {graphs.canonical_key(mg) for mg in found}
    assert len(keys) == len(found) == 14
    assert all(mg.genus == 2 and mg.n == 1 for mg in found)


def test_empty_case_rejected():
    with pytest.raises(InvalidInputError):
        graphs.enumerate_graphs(0, 0)


def test_iso_class_cap():
    with pytest.raises(ResourceCapError):
        graphs.enumerate_graphs(3, 1, cap=5)


def test_automorphism_orders():
    assert len(graphs.automorphisms(graphs.theta())) == 12
    assert len(graphs.automorphisms(graphs.rose2())) == 8
    assert len(graphs.automorphisms(loop_graph())) == 2
    assert graphs.automorphisms(graphs.theta())[0].key == graphs.identity(graphs.theta()).key


# -- isomorphism --------------------------------------------------------------


@given(st.sampled_from(pool(2, 1) + pool(3, 0)[:6]), st.data())
def test_canonical_form_is_relabelling_invariant(mg, data):
    copy, iso = data.draw(relabelled(mg))
    assert graphs.canonical_key(copy) == graphs.canonical_key(mg)
    assert is_morphism(mg, copy, iso.vertex_map, iso.half_edge_map)
    assert len(graphs.isomorphisms(mg, copy)) == len(graphs.automorphisms(mg))


# -- morphisms ----------------------------------------------------------------


def test_hom_theta_rose_matches_brute_force():
    homs = graphs.hom_set(graphs.theta(), graphs.rose2())
    assert len(homs) == 24 == brute_force_hom_count(graphs.theta(), graphs.rose2())
    assert all(is_morphism(f.source, f.target, f.vertex_map, f.half_edge_map) for f in homs)


def test_hom_sets_in_genus_one_match_brute_force():
    objs = [mg for mg in pool(1, 2) if len(mg.graph.root) <= 4]
    for a in objs:
        for b in objs:
            assert len(graphs.hom_set(a, b)) == brute_force_hom_count(a, b)


def test_contract_rejects_cycles_and_marking_clashes():
    with pytest.raises(NotAForestError):
        graphs.contract_edges(graphs.theta(), [0, 1])
    two_marked = make_graph(2, [(0, 1), (0, 0), (1, 1)], (0, 1))
    with pytest.raises(MarkingConflictError):
        graphs.contract_edges(two_marked, [0])


def test_invalid_morphism_detected():
    f = graphs.theta_to_rose()
    broken = graphs.GraphMorphism(f.source, f.target, f.vertex_map, (None,) * 6)
    with pytest.raises(InvalidInputError):
        broken.validate()


@given(composable(2, 0))
def test_composition_of_morphisms_is_a_morphism(pair):
    f, k = pair
    kf = graphs.compose(k, f)
    kf.validate()
    assert kf.source == f.source and kf.target == k.target


@given(composable(2, 0))
def test_tripod_pullback_is_contravariant(pair):
    f, k = pair
    pf, pk, pkf = graphs.tripod_pullback(f), graphs.tripod_pullback(k), graphs.tripod_pullback(graphs.compose(k, f))
    assert set(pkf) == set(graphs.tripods(k.target))
    for t in pkf:
        assert pkf[t] == pf[pk[t]]


@given(composable(2, 1))
def test_tripod_pullback_is_contravariant_with_markings(pair):
    f, k = pair
    pf, pk, pkf = graphs.tripod_pullback(f), graphs.tripod_pullback(k), graphs.tripod_pullback(graphs.compose(k, f))
    assert all(pkf[t] == pf[pk[t]] for t in pkf)


def test_tripod_pullback_on_pi():
    T, R = graphs.THETA_HALF_EDGES, graphs.ROSE2_HALF_EDGES
    pull = graphs.tripod_pullback(graphs.theta_to_rose())
    assert pull[(R["h1"], R["h2"], R["h3"])] == (T["h1'"], T["h3'"], T["h2'"])
    assert pull[(R["h1"], R["h2"], R["h4"])] == (T["h3"], T["h1"], T["h2"])


# -- relative homology ----------------------------------------------------------


@pytest.mark.parametrize("g, n", [(2, 0), (1, 2), (2, 1), (0, 3)])
def test_relative_homology_rank(g, n):
    for mg in pool(g, n):
        H = graphs.relative_homology(mg)
        assert H.rank == g + max(n - 1, 0)
        assert all(H.is_cycle(v) for v in H.basis)


@given(composable(2, 1))
def test_chain_map_is_functorial(pair):
    f, k = pair
    from prime_moduli import linalg

    lhs = graphs.chain_map(graphs.compose(k, f))
    rhs = linalg.matmul(graphs.chain_map(k), graphs.chain_map(f), f.target.num_edges)
    assert [list(r) for r in lhs] == [list(r) for r in rhs]


# -- chain poset ----------------------------------------------------------------


def test_genus_two_chain_poset():
    P = graphs.chain_poset(2, 0)
    assert sorted(len(c.automorphisms) for c in P.elements) == [4, 8, 12]
    assert P.depth == 1
    assert len(P.relations()) == 2


def test_genus_three_chain_poset_is_connected():
    P = graphs.chain_poset(3, 0)
    assert len(P.objects) == 8
    adj = {x: set() for x in range(len(P.elements))}
    for x, y in P.relations():
        adj[x].add(y)
        adj[y].add(x)
    seen, todo = {0}, [0]
    while todo:
        for y in adj[todo.pop()] - seen:
            seen.add(y)
            todo.append(y)
    assert len(seen) == len(P.elements)

import json

import pytest
from hypothesis import given, strategies as st

from oracles import series_product
from prime_moduli import graphs, hgamma
from prime_moduli.errors import FactorDataError, InvalidInputError
from strategies import composable, pool, ring_elements


def expected_betti(mg, D):
    """prod over unmarked vertices of prod_{k=1}^{val-2} (1 + k t^2), times (1 + t^3)^rank H_1,
    with one shared 1/(1 - t^4) when nothing is marked."""
    factors = []
    for v in mg.unmarked_vertices:
        factors += [{0: 1, 2: k} for k in range(1, mg.graph.valence(v) - 1)]
    rank = mg.genus + max(mg.n - 1, 0)
    factors += [{0: 1, 3: 1}] * rank
    if mg.n == 0:
        factors.append(("geom", 4))
    return series_product(factors, D)


@pytest.mark.parametrize("g, n", [(2, 0), (3, 0), (1, 2), (2, 1), (0, 3)])
def test_ring_betti_matches_series(g, n):
    for mg in pool(g, n):
        ring = hgamma.build_ring(mg)
        assert list(ring.ring_betti(14).ranks) == expected_betti(mg, 14)


def test_even_series_helper_agrees():
    for mg in pool(3, 0):
        assert hgamma.even_series(mg, 16) == list(hgamma.build_ring(mg).even_presentation.betti(16).ranks)


def test_theta_ring_structure():
    ring = hgamma.build_ring(graphs.theta())
    p = ring.presentation
    assert [n for n, _ in p.even_gens] == ["c_0_1_2", "c_3_4_5"]
    assert [n for n, _ in p.odd_gens] == ["b1", "b2"]
    t = hgamma.theta_classes(ring)
    assert (t["u1"] * t["u2"]).is_zero()
    assert t["c1"] ** 2 == t["c2"] ** 2 == ring.delta()
    assert list(ring.ring_betti(8).ranks) == [1, 0, 2, 2, 2, 4, 3, 4, 4]


def test_rose_ring_structure():
    ring = hgamma.build_ring(graphs.rose2())
    r = hgamma.rose_classes(ring)
    assert (r["z1"] * r["w"]).is_zero()
    assert (r["z2"] * r["w"]).is_zero()
    assert all(len(ring.even_presentation.graded_basis(2 * k)) == 3 for k in range(1, 10))


def test_tripod_class_requires_common_unmarked_root():
    ring = hgamma.build_ring(graphs.theta())
    with pytest.raises(InvalidInputError):
        ring.c(0, 3, 1)
    with pytest.raises(InvalidInputError):
        ring.beta(3)


def test_factor_data_multiplies_series():
    mg = pool(0, 2)[0]
    with pytest.raises(FactorDataError):
        hgamma.build_ring(mg).betti(6)
    ring = hgamma.build_ring(mg, factor_data=[[1, 0, 0, 1, 0, 0, 0], [1, 0, 1, 0, 1, 0, 1]])
    assert list(ring.betti(6).ranks) == series_product([{0: 1, 3: 1}, {0: 1, 3: 1}, ("geom", 2)], 6)
    with pytest.raises(FactorDataError):
        ring.betti(12)


def test_factor_data_validation():
    with pytest.raises(InvalidInputError):
        hgamma.build_ring(graphs.theta(), factor_data=[[1]])
    with pytest.raises(InvalidInputError):
        hgamma.build_ring(pool(0, 2)[0], factor_data=[[1]])
    with pytest.raises(InvalidInputError):
        hgamma.build_ring(pool(0, 2)[0], factor_data=[[0], [1]])


def test_json_export():
    data = json.loads(json.dumps(hgamma.build_ring(graphs.theta()).to_json()))
    assert data["provenance"]["b1"]["chain"] == ["-1", "1", "0"]
    assert data["provenance"]["c_0_1_2"]["vertex"] == 0


def test_pi_star_on_named_classes():
    m = hgamma.induced_map(graphs.theta_to_rose())
    assert m.verify()
    t = hgamma.theta_classes(hgamma.build_ring(graphs.theta()))
    r = hgamma.rose_classes(hgamma.build_ring(graphs.rose2()))
    assert m(r["w"]) == -t["u1"]
    assert m(r["z1"]) == t["u2"]
    assert m(r["z2"]) == -t["u2"]
    assert m(r["beta1"]) == t["beta1"] and m(r["beta2"]) == t["beta2"]


def test_odd_part_disabled_with_markings():
    f = graphs.hom_set(pool(1, 2)[0], pool(1, 2)[-1])
    if f:
        with pytest.raises(InvalidInputError):
            hgamma.induced_map(f[0], include_odd=True)


@given(composable(2, 0))
def test_induced_map_is_contravariantly_functorial(pair):
    f, k = pair
    lhs = hgamma.induced_map(graphs.compose(k, f))
    rhs = hgamma.induced_map(f) @ hgamma.induced_map(k)
    assert lhs.same_as(rhs)


@given(composable(2, 1))
def test_induced_map_is_functorial_on_even_parts(pair):
    f, k = pair
    lhs = hgamma.induced_map(graphs.compose(k, f))
    assert lhs.verify()
    assert lhs.same_as(hgamma.induced_map(f) @ hgamma.induced_map(k))


AUT_GRAPHS = [graphs.theta(), graphs.rose2()] + [mg for mg in pool(3, 0) if len(graphs.automorphisms(mg)) > 2][:3]


@st.composite
def aut_pair(draw):
    mg = draw(st.sampled_from(AUT_GRAPHS))
    auts = graphs.automorphisms(mg)
    return mg, draw(st.sampled_from(auts)), draw(st.sampled_from(auts))


@given(aut_pair())
def test_aut_action_is_a_left_action(triple):
    mg, a, b = triple
    ring = hgamma.build_ring(mg)
    lhs = hgamma.aut_action(ring, graphs.compose(a, b))
    assert lhs.same_as(hgamma.aut_action(ring, a) @ hgamma.aut_action(ring, b))


@given(aut_pair(), st.data())
def test_aut_action_is_multiplicative(triple, data):
    mg, a, _ = triple
    ring = hgamma.build_ring(mg)
    m = hgamma.aut_action(ring, a)
    x = data.draw(ring_elements(ring.presentation, max_degree=7, max_terms=3))
    y = data.draw(ring_elements(ring.presentation, max_degree=7, max_terms=3))
    assert m(x * y) == m(x) * m(y)


def test_aut_action_rejects_foreign_morphism():
    with pytest.raises(InvalidInputError):
        hgamma.aut_action(hgamma.build_ring(graphs.theta()), graphs.identity(graphs.rose2()))


def test_theta_degree_eight_count_by_exhaustive_listing():
    # Lambda<b1, b2> tensor Q[u1, u2]/(u1 u2): list every monomial of degree 8
    # with a squarefree odd part and discard those divisible by u1 u2
    import itertools

    count = 0
    for odd in itertools.chain.from_iterable(itertools.combinations((1, 2), r) for r in range(3)):
        rest = 8 - 3 * len(odd)
        for a in range(0, rest // 2 + 1):
            b = rest // 2 - a
            if rest % 2 == 0 and not (a and b):
                count += 1
    assert count == 4
    assert len(hgamma.build_ring(graphs.theta()).presentation.graded_basis(8)) == count

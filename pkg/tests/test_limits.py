import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import odd_invariant_table, series_product, u2_betti
from prime_moduli import graphs, hgamma, limits, linalg
from prime_moduli.errors import ExcludedCaseError, FactorDataError, InvalidInputError, NonInvariantError, SpanGapError
from strategies import ring_elements

THETA = hgamma.build_ring(graphs.theta())
ROSE = hgamma.build_ring(graphs.rose2())
ACTIONS = {
    ("theta", "s3xc2"): limits.group_action(THETA, limits.named_group(THETA.graph, "s3xc2")),
    ("theta", "c2xc2"): limits.group_action(THETA, limits.named_group(THETA.graph, "c2xc2")),
    ("theta", "trivial"): limits.group_action(THETA, limits.named_group(THETA.graph, "trivial")),
    ("rose2", "d8"): limits.group_action(ROSE, limits.named_group(ROSE.graph, "d8")),
}


# -- invariants -----------------------------------------------------------------


def test_group_orders_and_closure():
    assert [len(ACTIONS[k]) for k in sorted(ACTIONS)] == [8, 4, 12, 1]
    for action in ACTIONS.values():
        assert action.verify()


def test_invariant_tables():
    D = 24
    assert list(limits.invariant_betti(THETA.presentation, ACTIONS[("theta", "s3xc2")], D).ranks) == u2_betti(D)
    assert list(limits.invariant_betti(THETA.presentation, ACTIONS[("theta", "c2xc2")], D).ranks) == odd_invariant_table(D)
    assert list(limits.invariant_betti(ROSE.presentation, ACTIONS[("rose2", "d8")], D).ranks) == odd_invariant_table(D)


def test_trivial_group_keeps_everything():
    table = limits.invariant_betti(THETA.presentation, ACTIONS[("theta", "trivial")], 12)
    assert table.ranks == THETA.presentation.betti(12).ranks


def test_unknown_group_name():
    with pytest.raises(InvalidInputError):
        limits.named_group(graphs.rose2(), "s3xc2")


def test_invariant_generators_checked():
    t = hgamma.theta_classes(THETA)
    action = ACTIONS[("theta", "s3xc2")]
    report = limits.check_invariant_generators(
        THETA.presentation, action, {"gamma1": t["gamma1"], "gamma2": t["gamma2"], "epsilon": t["epsilon"]}, 16
    )
    assert all(a == b for a, b in report["span"].values())
    with pytest.raises(NonInvariantError):
        limits.check_invariant_generators(THETA.presentation, action, {"u1": t["u1"]}, 4)
    with pytest.raises(SpanGapError):
        limits.check_invariant_generators(THETA.presentation, action, {"gamma1": t["gamma1"]}, 8)


action_keys = st.sampled_from(sorted(ACTIONS))


@given(action_keys, st.integers(0, 14))
def test_reynolds_is_an_idempotent_projector(key, d):
    action = ACTIONS[key]
    P = limits.reynolds_matrix(action, d)
    n = len(action.ring.graded_basis(d))
    assert linalg.matmul(P, P, n) == [list(r) for r in P]
    rank = linalg.rank(P, n) if n else 0
    assert rank == len(action.invariant_basis(d)[0])


@given(action_keys, st.data())
def test_reynolds_image_is_invariant(key, data):
    action = ACTIONS[key]
    p = action.ring
    d = data.draw(st.integers(0, 12))
    x = data.draw(ring_elements(p, degree=d))
    n = len(p.graded_basis(d))
    if not n:
        return
    P = limits.reynolds_matrix(action, d)
    v = x.coordinates(d)
    image = p.element_from_vector(d, [sum(P[i][j] * v[j] for j in range(n)) for i in range(n)])
    assert action.is_invariant(image) is None


# -- derived limits ------------------------------------------------------------------


def circle_poset():
    # two minimal and two maximal elements, each minimal below each maximal: a circle
    return ["a", "b", "c", "d"], [(0, 2), (0, 3), (1, 2), (1, 3)]


def test_constant_diagram_on_circle():
    labels, rel = circle_poset()
    table = limits.derived_limits(limits.constant_diagram(labels, rel, 2))
    assert table.lim(0) == [1, 0, 0]
    assert table.lim(1) == [1, 0, 0]


def test_constant_diagram_on_discrete_poset():
    table = limits.derived_limits(limits.constant_diagram(["x", "y", "z"], [], 0))
    assert table.lim(0) == [3] and table.depth == 0


@st.composite
def random_posets(draw):
    n = draw(st.integers(1, 6))
    rel = set()
    for x, y in itertools.combinations(range(n), 2):
        if draw(st.booleans()):
            rel.add((x, y))
    closed = True
    while closed:
        closed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                closed = True
    return [f"p{i}" for i in range(n)], sorted(rel)


def components(n, rel):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in rel:
        parent[find(a)] = find(b)
    return len({find(x) for x in range(n)})


@given(random_posets())
def test_constant_diagram_bookkeeping(poset):
    labels, rel = poset
    dg = limits.constant_diagram(labels, rel, 0)
    table = limits.derived_limits(dg)
    assert table.lim(0)[0] == components(len(labels), rel) == limits.equalizer_rank(dg, 0)
    euler_chains = sum((-1) ** p * len(dg.chains(p)) for p in range(table.depth + 1))
    euler_lims = sum((-1) ** p * table.lim(p)[0] for p in range(table.depth + 1))
    assert euler_chains == euler_lims
    assert all(table.lim(p)[0] >= 0 for p in range(table.depth + 1))


GENUS_TWO = limits.slominska_diagram(2, 0, 40)
GENUS_TWO_TABLE = limits.derived_limits(GENUS_TWO)


@given(st.integers(0, 40))
def test_genus_two_exactness_bookkeeping(d):
    dg, table = GENUS_TWO, GENUS_TWO_TABLE
    dims = [limits._coboundary(dg, p, d)[1] for p in range(table.depth + 1)]
    assert dims[0] == sum(dg.dims[x][d] for x in range(dg.size))
    assert sum((-1) ** p * c for p, c in enumerate(dims)) == sum((-1) ** p * table.lim(p)[d] for p in range(table.depth + 1))
    assert table.lim(0)[d] == limits.equalizer_rank(dg, d)
    assert table.lim(1)[d] == 0


def test_genus_two_diagram_shape():
    assert sorted(GENUS_TWO.labels) == ["R2", "Theta", "Theta -> R2"]
    GENUS_TWO.check()


def test_excluded_and_unsupported_cases():
    with pytest.raises(ExcludedCaseError):
        limits.slominska_diagram(1, 0, 4)
    with pytest.raises(FactorDataError):
        limits.slominska_diagram(1, 1, 4, factor_data=[[1, 0, 0, 0, 0]])
    with pytest.raises(InvalidInputError):
        limits.assemble_u2(-1)


def test_single_object_with_markings_collapses():
    vec = [1, 0, 0, 1, 0, 0, 0, 0]
    rep = limits.e2_page(0, 2, 7, factor_data=[vec, vec])
    assert rep.collapsed
    expected = series_product([{0: 1, 3: 1}] * 3, 7)
    assert list(rep.total_betti.ranks) == expected


# -- the genus-two assembly -------------------------------------------------------------


def test_assemble_u2_report():
    betti, report = limits.assemble_u2(16)
    assert list(betti.ranks) == u2_betti(16)
    for key in ("lim1_zero", "lim0_equals_equalizer", "mayer_vietoris_exact", "pi_star_iso", "lim0_is_full_invariants", "generators_span"):
        assert report[key] is True
    assert report["poset_size"] == 3
    assert [r["product"] for r in report["relations_checked"]] == ["epsilon^2", "gamma1*gamma2", "gamma2*epsilon", "gamma1*epsilon"]
    assert all(r["ok"] for r in report["relations_checked"])


def test_pi_star_is_an_isomorphism_on_invariants():
    mats, m, act_r, act_t = limits.pi_star_on_invariants(16)
    for d, M in mats.items():
        n = len(act_r.invariant_basis(d)[0])
        assert n == len(act_t.invariant_basis(d)[0])
        assert n == 0 or linalg.rank(M, n) == n


def test_pi_star_on_invariant_generators():
    _, m, _, _ = limits.pi_star_on_invariants(4)
    t, r = hgamma.theta_classes(THETA), hgamma.rose_classes(ROSE)
    assert m(r["alpha1"]) == t["gamma1"]
    assert m(r["eta1"]) == -t["epsilon"]
    assert m(r["alpha2"]) == t["gamma2"]
    assert m(r["nu2"]) == t["mu2"]

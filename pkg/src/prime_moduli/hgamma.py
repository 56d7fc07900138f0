"""The graded ring H*(H^Gamma_sigma) attached to a marked graph.

Generators:

* ``b1, b2, ...`` (degree 3, odd): one per basis vector of H_1(Gamma, sigma)
  from :func:`graphs.relative_homology`.
* ``c_i_j_m`` (degree 2): for each unmarked vertex v with largest half-edge
  m = m_v, the tripod classes c(i, j, m) with half-edges i < j < m at v.
  Any other tripod class is rewritten by antisymmetry and the 4-point
  relation, exactly as for configuration spaces.

Relations per unmarked vertex: the square of every tripod class equals
delta when n = 0 (delta is eliminated as the square of the last c
generator, and kept as the parser alias ``delta``), or zero when n > 0.

For n > 0 the cohomology of the prime factors enters only as formal
dimension vectors, and beta-functoriality is switched off: ring maps then
act on the even part only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import graphs, linalg
from .confcoh import reduce_triple
from .errors import FactorDataError, InvalidInputError
from .galgebra import BettiTable, GradedPresentation, RingElement, RingMap
from .graphs import GraphMorphism, MarkedGraph


@dataclass(eq=False)
class HGammaRing:
    graph: MarkedGraph
    presentation: GradedPresentation
    homology: graphs.RelativeHomology
    tops: dict[int, int]  # unmarked vertex -> its largest half-edge
    factor_data: tuple[tuple[int, ...], ...] | None = None
    _even: GradedPresentation | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def beta_names(self) -> list[str]:
        return [n for n, _ in self.presentation.odd_gens]

    def c(self, i: int, j: int, k: int) -> RingElement:
        """Tripod class of three distinct half-edges with a common unmarked root."""
        return self._c_in(self.presentation, i, j, k)

    def _c_in(self, p: GradedPresentation, i: int, j: int, k: int) -> RingElement:
        root = self.graph.graph.root
        v = root[i]
        if root[j] != v or root[k] != v:
            raise InvalidInputError(f"half-edges {i}, {j}, {k} do not share a root")
        if v not in self.tops:
            raise InvalidInputError(f"vertex {v} is marked and carries no tripod classes")
        top = self.tops[v]
        out = p.zero()
        for coeff, (a, b) in reduce_triple(i, j, k, top):
            out = out + p.gen(f"c_{a}_{b}_{top}") * coeff
        return out

    def beta(self, index: int) -> RingElement:
        """beta_index (1-based) for the index-th basis vector of H_1."""
        return self.presentation.gen(f"b{index}")

    def delta(self) -> RingElement:
        if self.n:
            raise InvalidInputError("delta is absent when n > 0")
        return self.presentation.gen("delta")

    @property
    def even_presentation(self) -> GradedPresentation:
        """The subring without the odd generators (cached, so maps can share it)."""
        if self._even is None:
            self._even = self.presentation.even_part()
            self._even.aliases.update(self.presentation.aliases)
        return self._even

    def ring_betti(self, max_degree: int) -> BettiTable:
        return self.presentation.betti(max_degree)

    def betti(self, max_degree: int) -> BettiTable:
        """Betti table including the formal prime-factor series when n > 0."""
        table = self.presentation.betti(max_degree)
        if not self.n:
            return table
        if self.factor_data is None:
            raise FactorDataError("n > 0 needs prime-factor dimension vectors")
        for vec in self.factor_data:
            if len(vec) - 1 < max_degree:
                raise FactorDataError(
                    f"factor dimension vector known to degree {len(vec) - 1}, requested {max_degree}"
                )
            table = table * BettiTable(max_degree, tuple(vec[: max_degree + 1]))
        return table

    def provenance(self) -> dict:
        """Which tripod or cycle each generator comes from."""
        out = {}
        for name, _ in self.presentation.even_gens:
            _, i, j, m = name.split("_")
            out[name] = {"tripod": [int(i), int(j), int(m)], "vertex": self.graph.graph.root[int(m)]}
        for (name, _), label, vec in zip(self.presentation.odd_gens, self.homology.labels, self.homology.basis):
            out[name] = {"kind": label[0], "index": label[1], "chain": [str(x) for x in vec]}
        return out

    def to_json(self) -> dict:
        data = self.presentation.to_json()
        data["graph"] = self.graph.to_json()
        data["provenance"] = self.provenance()
        if self.factor_data is not None:
            data["factor_data"] = [list(v) for v in self.factor_data]
        return data


def _check_factor_data(mg: MarkedGraph, factor_data) -> tuple[tuple[int, ...], ...] | None:
    if factor_data is None:
        return None
    if mg.n == 0:
        raise InvalidInputError("prime-factor data only applies when n > 0")
    data = tuple(tuple(int(x) for x in vec) for vec in factor_data)
    if len(data) != mg.n:
        raise InvalidInputError(f"expected {mg.n} factor vectors, got {len(data)}")
    for vec in data:
        if not vec or vec[0] != 1 or any(x < 0 for x in vec):
            raise InvalidInputError("factor vectors must be non-negative with rank 1 in degree 0")
    return data


@lru_cache(maxsize=None)
def _build(mg: MarkedGraph, factor_data) -> HGammaRing:
    g = mg.graph
    hom = graphs.relative_homology(mg)
    tops = {}
    even = []
    for v in mg.unmarked_vertices:
        hs = g.half_edges_at(v)
        top = max(hs)
        tops[v] = top
        rest = sorted(h for h in hs if h != top)
        even += [(f"c_{i}_{j}_{top}", 2) for i, j in itertools.combinations(rest, 2)]
    odd = [(f"b{a + 1}", 3) for a in range(hom.rank)]
    idx = {name: i for i, (name, _) in enumerate(even)}
    nv = len(even)
    aliases = {}
    if mg.n == 0:
        aliases["delta"] = f"{even[-1][0]}^2"
    relations = []
    for v in mg.unmarked_vertices:
        top = tops[v]
        for t in itertools.combinations(g.half_edges_at(v), 3):
            lin: dict[int, int] = {}
            for coeff, (a, b) in reduce_triple(*t, top):
                k = idx[f"c_{a}_{b}_{top}"]
                lin[k] = lin.get(k, 0) + coeff
            sq: dict = {}
            for (u, cu), (w, cw) in itertools.product(lin.items(), repeat=2):
                m = [0] * nv
                m[u] += 1
                m[w] += 1
                m = tuple(m)
                sq[m] = sq.get(m, 0) + Fraction(cu * cw)
            if mg.n == 0:
                z = [0] * nv
                z[-1] = 2
                z = tuple(z)
                sq[z] = sq.get(z, 0) - 1
            sq = {m: c for m, c in sq.items() if c}
            if sq:
                relations.append(sq)
    p = GradedPresentation(even, odd, relations, order="deglex", aliases=aliases)
    return HGammaRing(mg, p, hom, tops, factor_data)


def build_ring(mg: MarkedGraph, factor_data: Sequence[Sequence[int]] | None = None) -> HGammaRing:
    """The ring attached to (Gamma, sigma); cached so that equal graphs share one presentation."""
    return _build(mg, _check_factor_data(mg, factor_data))


def even_series(mg: MarkedGraph, max_degree: int) -> list[int]:
    """Independent series for the even part: prod_v P_v(t), divided by (1 - t^4) when n = 0.

    P_v = prod_{k=1}^{val(v)-2} (1 + k t^2) over unmarked vertices v.
    """
    s = [0] * (max_degree + 1)
    s[0] = 1
    for v in mg.unmarked_vertices:
        for k in range(1, mg.graph.valence(v) - 1):
            for i in range(max_degree, 1, -1):
                s[i] += k * s[i - 2]
    if mg.n == 0:
        for i in range(4, max_degree + 1):
            s[i] += s[i - 4]
    return s


# ---------------------------------------------------------------------------
# induced maps


def homology_matrix(f: GraphMorphism) -> list[list[Fraction]]:
    """Matrix of f_*: H_1(source) -> H_1(target) in the chosen bases (columns = source basis)."""
    hs = graphs.relative_homology(f.source)
    ht = graphs.relative_homology(f.target)
    chain = graphs.chain_map(f)
    cols = []
    for vec in hs.basis:
        image = [sum((row[j] * vec[j] for j in range(len(vec))), Fraction(0)) for row in chain]
        cols.append(ht.coordinates(image))
    return [[cols[j][i] for j in range(len(cols))] for i in range(ht.rank)]


def induced_map(f: GraphMorphism, factor_data=None, include_odd: bool | None = None) -> RingMap:
    """The ring map build_ring(target) -> build_ring(source) induced by f.

    c-classes pull back along the tripod map; beta_a goes to the class of
    (f_*)^{-1}(a).  When n > 0 the odd part is left out (``include_odd``
    defaults to ``n == 0``) and the map is between even presentations.
    """
    if include_odd is None:
        include_odd = f.source.n == 0
    if include_odd and f.source.n > 0:
        raise InvalidInputError("beta-functoriality is disabled for n > 0; use include_odd=False")
    src_ring = build_ring(f.source, factor_data)
    tgt_ring = build_ring(f.target, factor_data)
    src_p = src_ring.presentation if include_odd else src_ring.even_presentation
    tgt_p = tgt_ring.presentation if include_odd else tgt_ring.even_presentation
    pull = graphs.tripod_pullback(f)
    images = {}
    for name, _ in tgt_p.even_gens:
        _, i, j, m = name.split("_")
        images[name] = src_ring._c_in(src_p, *pull[(int(i), int(j), int(m))])
    if include_odd and tgt_p.odd_gens:
        M = homology_matrix(f)
        Minv = linalg.inverse(M)
        for a, (name, _) in enumerate(tgt_p.odd_gens):
            img = src_p.zero()
            for b in range(len(Minv)):
                if Minv[b][a]:
                    img = img + src_p.gen(f"b{b + 1}") * Minv[b][a]
            images[name] = img
    return RingMap(tgt_p, src_p, images)


def aut_action(ring: HGammaRing, phi: GraphMorphism, include_odd: bool | None = None) -> RingMap:
    """The automorphism of the ring for phi in Aut(Gamma, sigma).

    Sends c(i,j,k) to c(phi i, phi j, phi k) and beta_a to beta of phi_* a;
    this is induced_map(phi^{-1}), and phi -> aut_action(phi) is a left action.
    """
    if phi.source != ring.graph or phi.target != ring.graph:
        raise InvalidInputError("phi is not an automorphism of the ring's graph")
    return induced_map(phi.inverse(), ring.factor_data, include_odd)


# ---------------------------------------------------------------------------
# named classes on the two genus-2 graphs


def theta_classes(ring: HGammaRing) -> dict[str, RingElement]:
    """c1, c2, u1, u2, beta1, beta2 and the invariant generators on the theta graph."""
    if ring.graph != graphs.theta():
        raise InvalidInputError("named classes need the built-in theta graph")
    T = graphs.THETA_HALF_EDGES
    c1 = ring.c(T["h1"], T["h2"], T["h3"])
    c2 = ring.c(T["h1'"], T["h2'"], T["h3'"])
    b1, b2 = ring.beta(1), ring.beta(2)
    u1 = (c1 + c2) / 2
    u2 = (c1 - c2) / 2
    return {
        "c1": c1,
        "c2": c2,
        "u1": u1,
        "u2": u2,
        "beta1": b1,
        "beta2": b2,
        "gamma1": u1 * u1,
        "gamma2": u2 * u2,
        "epsilon": b1 * b2 * u1,
        "mu2": (b1 - b2) * u2,
    }


def rose_classes(ring: HGammaRing) -> dict[str, RingElement]:
    """w, z1, z2, beta1, beta2 and the invariant generators on the rose R2."""
    if ring.graph != graphs.rose2():
        raise InvalidInputError("named classes need the built-in rose graph")
    R = graphs.ROSE2_HALF_EDGES
    h1, h2, h3, h4 = R["h1"], R["h2"], R["h3"], R["h4"]
    w = (ring.c(h1, h2, h3) - ring.c(h1, h2, h4)) / 2
    z1 = (ring.c(h1, h2, h3) + ring.c(h1, h2, h4)) / 2
    z2 = (ring.c(h3, h4, h2) + ring.c(h3, h4, h1)) / 2
    b1, b2 = ring.beta(1), ring.beta(2)
    return {
        "w": w,
        "z1": z1,
        "z2": z2,
        "beta1": b1,
        "beta2": b2,
        "alpha1": w * w,
        "eta1": b1 * b2 * w,
        "alpha2": z1 * z1,
        "nu2": b1 * z1 + b2 * z2,
    }

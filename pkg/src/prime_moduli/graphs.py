"""Half-edge graphs, the marked graph category Gr_{g,n}, and its chain poset.

A graph is stored with dense integer ids: vertices ``0..V-1`` and half-edges
``0..H-1``.  ``root[h]`` is the vertex of ``h`` and ``involution[h]`` the
opposite half-edge of the same edge.  Everything here is immutable.

The oriented 1-chain ``[h]`` means "traverse the edge of ``h`` starting at
``root[h]``", so ``[involution[h]] == -[h]``.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from . import linalg
from .errors import (
    InvalidInputError,
    MarkingConflictError,
    NotAForestError,
    ResourceCapError,
    ValenceError,
)

DEFAULT_ISO_CLASS_CAP = 20000


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    root: tuple[int, ...]
    involution: tuple[int, ...]

    def __post_init__(self):
        if len(self.root) != len(self.involution):
            raise InvalidInputError("root and involution must have equal length")
        for h, v in enumerate(self.root):
            if not 0 <= v < self.num_vertices:
                raise InvalidInputError(f"half-edge {h} has invalid root {v}")
        for h, k in enumerate(self.involution):
            if not 0 <= k < len(self.root) or k == h or self.involution[k] != h:
                raise InvalidInputError(f"involution is not fixed-point free at {h}")

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    @property
    def half_edges(self) -> range:
        return range(len(self.root))

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as sorted half-edge pairs, ordered by their smaller half-edge."""
        return tuple((h, k) for h, k in enumerate(self.involution) if h < k)

    @cached_property
    def edge_index(self) -> tuple[int, ...]:
        idx = [0] * len(self.root)
        for e, (h, k) in enumerate(self.edges):
            idx[h] = idx[k] = e
        return tuple(idx)

    @cached_property
    def _at(self) -> tuple[tuple[int, ...], ...]:
        at: list[list[int]] = [[] for _ in self.vertices]
        for h, v in enumerate(self.root):
            at[v].append(h)
        return tuple(tuple(x) for x in at)

    def half_edges_at(self, v: int) -> tuple[int, ...]:
        return self._at[v]

    def valence(self, v: int) -> int:
        return len(self._at[v])

    def loops_at(self, v: int) -> int:
        return sum(1 for h, k in self.edges if self.root[h] == v and self.root[k] == v)

    def is_loop(self, e: int) -> bool:
        h, k = self.edges[e]
        return self.root[h] == self.root[k]

    def multiplicity(self, u: int, v: int) -> int:
        """Number of edges joining u and v (loops when u == v)."""
        a, b = min(u, v), max(u, v)
        count = 0
        for h, k in self.edges:
            x, y = sorted((self.root[h], self.root[k]))
            if (x, y) == (a, b):
                count += 1
        return count

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return False
        seen = {0}
        todo = [0]
        while todo:
            v = todo.pop()
            for h in self._at[v]:
                w = self.root[self.involution[h]]
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == self.num_vertices

    @property
    def num_edges(self) -> int:
        return len(self.root) // 2


@dataclass(frozen=True)
class MarkedGraph:
    """An object (Gamma, sigma) of Gr_{g,n}; ``marking[i-1]`` is sigma(i)."""

    graph: Graph
    marking: tuple[int, ...] = ()

    def __post_init__(self):
        g = self.graph
        if len(set(self.marking)) != len(self.marking):
            raise InvalidInputError("marking must be injective")
        for v in self.marking:
            if not 0 <= v < g.num_vertices:
                raise InvalidInputError(f"marked vertex {v} out of range")
        if not g.is_connected():
            raise InvalidInputError("graph must be connected")
        marked = set(self.marking)
        for v in g.vertices:
            if v not in marked and g.valence(v) < 3:
                raise ValenceError(f"unmarked vertex {v} has valence {g.valence(v)} < 3")

    @property
    def genus(self) -> int:
        return self.graph.num_edges - self.graph.num_vertices + 1

    @property
    def n(self) -> int:
        return len(self.marking)

    @property
    def num_edges(self) -> int:
        return self.graph.num_edges

    @property
    def num_vertices(self) -> int:
        return self.graph.num_vertices

    def is_marked(self, v: int) -> bool:
        return v in self.marking

    @property
    def unmarked_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in self.graph.vertices if v not in self.marking)

    def marking_label(self, v: int) -> int:
        """1-based marking label of v, or 0 if v is unmarked."""
        try:
            return self.marking.index(v) + 1
        except ValueError:
            return 0

    def redundant_edges(self) -> tuple[int, ...]:
        """Edges whose removal cuts off a component without marked vertices."""
        g = self.graph
        out = []
        for e, (h, k) in enumerate(g.edges):
            if g.root[h] == g.root[k]:
                continue
            side = _component_without_edge(g, g.root[h], e)
            if g.root[k] in side:
                continue
            other = set(g.vertices) - side
            if not any(v in side for v in self.marking) or not any(v in other for v in self.marking):
                out.append(e)
        return tuple(out)

    def has_redundant_edges(self) -> bool:
        return bool(self.redundant_edges())

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        g = self.graph
        return {
            "vertices": list(g.vertices),
            "half_edges": list(g.half_edges),
            "root": {str(h): v for h, v in enumerate(g.root)},
            "involution": {str(h): k for h, k in enumerate(g.involution)},
            "marking": {str(i + 1): v for i, v in enumerate(self.marking)},
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "MarkedGraph":
        if isinstance(data, str):
            data = json.loads(data)
        vids = sorted(int(v) for v in data["vertices"])
        hids = sorted(int(h) for h in data["half_edges"])
        vpos = {v: i for i, v in enumerate(vids)}
        hpos = {h: i for i, h in enumerate(hids)}
        root = [0] * len(hids)
        inv = [0] * len(hids)
        try:
            for h, v in data["root"].items():
                root[hpos[int(h)]] = vpos[int(v)]
            for h, k in data["involution"].items():
                inv[hpos[int(h)]] = hpos[int(k)]
            marking_items = sorted((int(i), vpos[int(v)]) for i, v in data.get("marking", {}).items())
        except KeyError as exc:
            raise InvalidInputError(f"unknown id {exc} in graph JSON") from None
        if [i for i, _ in marking_items] != list(range(1, len(marking_items) + 1)):
            raise InvalidInputError("marking keys must be 1..n")
        return cls(Graph(len(vids), tuple(root), tuple(inv)), tuple(v for _, v in marking_items))


def _component_without_edge(g: Graph, start: int, skip_edge: int) -> set[int]:
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for h in g.half_edges_at(v):
            if g.edge_index[h] == skip_edge:
                continue
            w = g.root[g.involution[h]]
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def make_graph(num_vertices: int, edges: Sequence[tuple[int, int]], marking: Sequence[int] = ()) -> MarkedGraph:
    """Build a marked graph from vertex pairs; edge k gets half-edges 2k (at the first vertex) and 2k+1."""
    root = []
    inv = []
    for k, (a, b) in enumerate(edges):
        root += [a, b]
        inv += [2 * k + 1, 2 * k]
    return MarkedGraph(Graph(num_vertices, tuple(root), tuple(inv)), tuple(marking))


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class GraphMorphism:
    """A morphism of Gr_{g,n}.

    ``half_edge_map[h]`` is the image half-edge, or ``None`` when h lies on a
    collapsed edge (its image is then the vertex ``vertex_map[root[h]]``).
    """

    source: MarkedGraph
    target: MarkedGraph
    vertex_map: tuple[int, ...]
    half_edge_map: tuple[int | None, ...]

    @property
    def key(self) -> tuple:
        """Sortable identity of the morphism; collapsed half-edges show as -1."""
        return (self.vertex_map, tuple(-1 if k is None else k for k in self.half_edge_map))

    def __repr__(self):
        return f"GraphMorphism(v={self.vertex_map}, h={self.half_edge_map})"

    def is_isomorphism(self) -> bool:
        return None not in self.half_edge_map and len(set(self.vertex_map)) == self.target.num_vertices

    def collapsed_edges(self) -> tuple[int, ...]:
        g = self.source.graph
        return tuple(e for e, (h, _) in enumerate(g.edges) if self.half_edge_map[h] is None)

    def then(self, other: "GraphMorphism") -> "GraphMorphism":
        """The composite ``other ∘ self``."""
        return compose(other, self)

    def inverse(self) -> "GraphMorphism":
        if not self.is_isomorphism():
            raise InvalidInputError("only isomorphisms are invertible")
        vm = [0] * len(self.vertex_map)
        for v, w in enumerate(self.vertex_map):
            vm[w] = v
        hm: list[int | None] = [0] * len(self.half_edge_map)
        for h, k in enumerate(self.half_edge_map):
            hm[k] = h
        return GraphMorphism(self.target, self.source, tuple(vm), tuple(hm))

    def validate(self) -> None:
        """Raise InvalidInputError unless all morphism axioms hold."""
        s, t = self.source.graph, self.target.graph
        if len(self.vertex_map) != s.num_vertices or len(self.half_edge_map) != len(s.root):
            raise InvalidInputError("map is not total")
        if any(not 0 <= w < t.num_vertices for w in self.vertex_map):
            raise InvalidInputError("vertex image out of range")
        hits = [0] * len(t.root)
        for h, k in enumerate(self.half_edge_map):
            kb = self.half_edge_map[s.involution[h]]
            if k is None:
                if kb is not None:
                    raise InvalidInputError(f"half-edge {h} collapsed but its partner is not")
                if self.vertex_map[s.root[h]] != self.vertex_map[s.root[s.involution[h]]]:
                    raise InvalidInputError(f"collapsed edge at {h} joins different image vertices")
                continue
            if not 0 <= k < len(t.root):
                raise InvalidInputError("half-edge image out of range")
            if kb != t.involution[k]:
                raise InvalidInputError(f"involution not respected at {h}")
            if t.root[k] != self.vertex_map[s.root[h]]:
                raise InvalidInputError(f"root not respected at {h}")
            hits[k] += 1
        if any(c != 1 for c in hits):
            raise InvalidInputError("half-edge preimages must be singletons")
        for w in t.vertices:
            pre = [v for v in s.vertices if self.vertex_map[v] == w]
            if not pre:
                raise InvalidInputError(f"vertex {w} has empty preimage")
            n_edges = sum(
                1
                for (h, _) in s.edges
                if self.half_edge_map[h] is None and self.vertex_map[s.root[h]] == w
            )
            if n_edges != len(pre) - 1 or not _collapsed_connected(self, pre):
                raise InvalidInputError(f"preimage of vertex {w} is not a tree")
        for i, (a, b) in enumerate(zip(self.source.marking, self.target.marking)):
            if self.vertex_map[a] != b:
                raise InvalidInputError(f"marking {i + 1} not respected")
        if self.source.n != self.target.n:
            raise InvalidInputError("source and target have different numbers of markings")


def _collapsed_connected(f: GraphMorphism, pre: list[int]) -> bool:
    s = f.source.graph
    seen = {pre[0]}
    todo = [pre[0]]
    while todo:
        v = todo.pop()
        for h in s.half_edges_at(v):
            if f.half_edge_map[h] is None:
                w = s.root[s.involution[h]]
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
    return seen == set(pre)


def compose(g: GraphMorphism, f: GraphMorphism) -> GraphMorphism:
    """The composite ``g ∘ f`` (apply f first)."""
    vm = tuple(g.vertex_map[w] for w in f.vertex_map)
    hm = tuple(None if k is None else g.half_edge_map[k] for k in f.half_edge_map)
    return GraphMorphism(f.source, g.target, vm, hm)


def identity(mg: MarkedGraph) -> GraphMorphism:
    return GraphMorphism(mg, mg, tuple(mg.graph.vertices), tuple(mg.graph.half_edges))


# ---------------------------------------------------------------------------
# canonical labelling and isomorphisms


def _vertex_colour(mg: MarkedGraph, v: int) -> tuple:
    g = mg.graph
    return (mg.marking_label(v), g.valence(v), g.loops_at(v))


def _refine(mg: MarkedGraph, cells: list[list[int]]) -> list[list[int]]:
    g = mg.graph
    while True:
        cell_of = {}
        for i, c in enumerate(cells):
            for v in c:
                cell_of[v] = i
        new: list[list[int]] = []
        for c in cells:
            if len(c) == 1:
                new.append(c)
                continue
            sig = {}
            for v in c:
                counts = [0] * len(cells)
                for h in g.half_edges_at(v):
                    counts[cell_of[g.root[g.involution[h]]]] += 1
                sig[v] = tuple(counts)
            for s in sorted(set(sig.values())):
                new.append(sorted(v for v in c if sig[v] == s))
        if len(new) == len(cells):
            return new
        cells = new


def _initial_partition(mg: MarkedGraph) -> list[list[int]]:
    colours = {v: _vertex_colour(mg, v) for v in mg.graph.vertices}
    return [sorted(v for v in colours if colours[v] == c) for c in sorted(set(colours.values()))]


def _leaves(mg: MarkedGraph, cells: list[list[int]]) -> Iterator[list[int]]:
    cells = _refine(mg, cells)
    if all(len(c) == 1 for c in cells):
        yield [c[0] for c in cells]
        return
    i = next(i for i, c in enumerate(cells) if len(c) > 1)
    for v in cells[i]:
        rest = [w for w in cells[i] if w != v]
        yield from _leaves(mg, cells[:i] + [[v], rest] + cells[i + 1 :])


def _encode(mg: MarkedGraph, order: list[int]) -> tuple:
    g = mg.graph
    pos = {v: i for i, v in enumerate(order)}
    edges = tuple(sorted(tuple(sorted((pos[g.root[h]], pos[g.root[k]]))) for h, k in g.edges))
    return (g.num_vertices, tuple(pos[v] for v in mg.marking), edges)


@dataclass(frozen=True)
class CanonicalForm:
    key: tuple
    graph: MarkedGraph
    iso: GraphMorphism  # from the input graph to ``graph``


@lru_cache(maxsize=None)
def canonical_form(mg: MarkedGraph) -> CanonicalForm:
    """Canonical relabelling by colour refinement plus individualisation.

    Among all leaves of the search tree the lexicographically smallest
    encoding (marking positions, sorted edge list) wins.
    """
    best_key = None
    best_order = None
    for order in _leaves(mg, _initial_partition(mg)):
        k = _encode(mg, order)
        if best_key is None or k < best_key:
            best_key, best_order = k, order
    assert best_key is not None and best_order is not None
    nv, marking, edges = best_key
    # half-edge ids grouped by root vertex
    slots = sorted((a if side == 0 else b, k, side) for k, (a, b) in enumerate(edges) for side in (0, 1))
    hid = {(k, side): i for i, (_, k, side) in enumerate(slots)}
    root = [0] * len(slots)
    inv = [0] * len(slots)
    for (v, k, side), i in zip(slots, range(len(slots))):
        root[i] = v
        inv[i] = hid[(k, 1 - side)]
    canon = MarkedGraph(Graph(nv, tuple(root), tuple(inv)), tuple(marking))
    # isomorphism input -> canonical
    g = mg.graph
    pos = {v: i for i, v in enumerate(best_order)}
    free: dict[tuple[int, int], list[int]] = {}
    for k, e in enumerate(edges):
        free.setdefault(e, []).append(k)
    hm = [0] * len(g.root)
    for h, k2 in g.edges:
        a, b = pos[g.root[h]], pos[g.root[k2]]
        k = free[(min(a, b), max(a, b))].pop(0)
        if a <= b:
            hm[h], hm[k2] = hid[(k, 0)], hid[(k, 1)]
        else:
            hm[h], hm[k2] = hid[(k, 1)], hid[(k, 0)]
    iso = GraphMorphism(mg, canon, tuple(pos[v] for v in g.vertices), tuple(hm))
    return CanonicalForm(best_key, canon, iso)


def canonical_key(mg: MarkedGraph) -> tuple:
    return canonical_form(mg).key


def is_isomorphic(a: MarkedGraph, b: MarkedGraph) -> bool:
    return canonical_key(a) == canonical_key(b)


def isomorphisms(a: MarkedGraph, b: MarkedGraph) -> list[GraphMorphism]:
    """All isomorphisms a -> b, sorted by their map tuples."""
    ga, gb = a.graph, b.graph
    if (ga.num_vertices, len(ga.root), a.n) != (gb.num_vertices, len(gb.root), b.n):
        return []
    col_a = [_vertex_colour(a, v) for v in ga.vertices]
    col_b = [_vertex_colour(b, v) for v in gb.vertices]
    mult_a = [[ga.multiplicity(u, v) for v in ga.vertices] for u in ga.vertices]
    mult_b = [[gb.multiplicity(u, v) for v in gb.vertices] for u in gb.vertices]
    out: list[GraphMorphism] = []
    phi: list[int] = []
    used: set[int] = set()

    def extend():
        v = len(phi)
        if v == ga.num_vertices:
            out.extend(_half_edge_isos(a, b, tuple(phi)))
            return
        for w in gb.vertices:
            if w in used or col_a[v] != col_b[w]:
                continue
            if any(mult_a[u][v] != mult_b[phi[u]][w] for u in range(v)):
                continue
            phi.append(w)
            used.add(w)
            extend()
            phi.pop()
            used.discard(w)

    extend()
    out.sort(key=lambda f: f.key)
    return out


def _half_edge_isos(a: MarkedGraph, b: MarkedGraph, phi: tuple[int, ...]) -> list[GraphMorphism]:
    ga, gb = a.graph, b.graph
    groups = []
    for u in ga.vertices:
        for v in range(u, ga.num_vertices):
            if u == v:
                la = [h for h, k in ga.edges if ga.root[h] == u and ga.root[k] == u]
                lb = [h for h, k in gb.edges if gb.root[h] == phi[u] and gb.root[k] == phi[u]]
                if la:
                    groups.append(("loop", la, lb))
            else:
                la = [h for h in ga.half_edges_at(u) if ga.root[ga.involution[h]] == v]
                lb = [h for h in gb.half_edges_at(phi[u]) if gb.root[gb.involution[h]] == phi[v]]
                if la:
                    groups.append(("edge", la, lb))
    choices = []
    for kind, la, lb in groups:
        opts = []
        for perm in itertools.permutations(lb):
            if kind == "edge":
                opts.append(tuple(zip(la, perm)))
            else:
                for flips in itertools.product((0, 1), repeat=len(la)):
                    opts.append(
                        tuple((h, k if f == 0 else gb.involution[k]) for h, k, f in zip(la, perm, flips))
                    )
        choices.append(opts)
    result = []
    for combo in itertools.product(*choices):
        hm = [0] * len(ga.root)
        for pairs in combo:
            for h, k in pairs:
                hm[h] = k
                hm[ga.involution[h]] = gb.involution[k]
        result.append(GraphMorphism(a, b, phi, tuple(hm)))
    return result


@lru_cache(maxsize=None)
def _automorphisms_cached(mg: MarkedGraph) -> tuple[GraphMorphism, ...]:
    return tuple(isomorphisms(mg, mg))


def automorphisms(mg: MarkedGraph) -> list[GraphMorphism]:
    """The full automorphism group, identity first."""
    return list(_automorphisms_cached(mg))


# ---------------------------------------------------------------------------
# enumeration


def _minimal_graphs(g: int, n: int) -> list[MarkedGraph]:
    if n == 0:
        if g < 2:
            return []
        return [make_graph(1, [(0, 0)] * g)]
    pairs = [(a, b) for a in range(n) for b in range(a, n)]
    out = []
    for combo in itertools.combinations_with_replacement(pairs, g + n - 1):
        root = []
        inv = []
        for k, (a, b) in enumerate(combo):
            root += [a, b]
            inv += [2 * k + 1, 2 * k]
        graph = Graph(n, tuple(root), tuple(inv))
        if graph.is_connected():
            out.append(MarkedGraph(graph, tuple(range(n))))
    return out


def _vertex_splits(mg: MarkedGraph) -> Iterator[MarkedGraph]:
    g = mg.graph
    nv = g.num_vertices
    nh = len(g.root)
    for w in g.vertices:
        hs = g.half_edges_at(w)
        marked = mg.is_marked(w)
        for r in range(2, len(hs) + 1):
            for moved in itertools.combinations(hs, r):
                if not marked and len(hs) - r < 2:
                    continue
                root = list(g.root) + [w, nv]
                for h in moved:
                    root[h] = nv
                inv = list(g.involution) + [nh + 1, nh]
                yield MarkedGraph(Graph(nv + 1, tuple(root), tuple(inv)), mg.marking)


def enumerate_graphs(g: int, n: int, no_redundant: bool = False, cap: int | None = None) -> list[MarkedGraph]:
    """Canonical representatives of the isomorphism classes of Gr_{g,n}.

    Starts from the minimal graphs (all vertices marked, g+n-1 edges) and
    repeatedly splits vertices; every non-minimal graph has a collapsible
    edge, so this reaches every class.  Sorted by decreasing edge count,
    then by canonical key.
    """
    if cap is None:
        cap = DEFAULT_ISO_CLASS_CAP
    if g < 0 or n < 0:
        raise InvalidInputError("g and n must be non-negative")
    if g + n < 1:
        raise InvalidInputError("the empty case g = n = 0 is excluded")
    seen: dict[tuple, MarkedGraph] = {}
    frontier = []
    for mg in _minimal_graphs(g, n):
        cf = canonical_form(mg)
        if cf.key not in seen:
            seen[cf.key] = cf.graph
            frontier.append(cf.graph)
    max_edges = 3 * (g - 1) + 2 * n
    while frontier:
        nxt = []
        for mg in frontier:
            if mg.num_edges >= max_edges:
                continue
            for split in _vertex_splits(mg):
                cf = canonical_form(split)
                if cf.key not in seen:
                    seen[cf.key] = cf.graph
                    nxt.append(cf.graph)
                    if len(seen) > cap:
                        raise ResourceCapError(f"more than {cap} isomorphism classes in Gr_{{{g},{n}}}")
        frontier = nxt
    graphs = list(seen.values())
    if no_redundant:
        graphs = [mg for mg in graphs if not mg.has_redundant_edges()]
    graphs.sort(key=lambda mg: (-mg.num_edges, canonical_key(mg)))
    return graphs


# ---------------------------------------------------------------------------
# contractions and hom-sets


def contract_edges(mg: MarkedGraph, edges: Iterable[int]) -> tuple[MarkedGraph, GraphMorphism]:
    """Collapse a forest of edges (given by edge index) to points.

    Surviving vertices and half-edges keep their relative order.
    """
    g = mg.graph
    F = sorted(set(edges))
    for e in F:
        if not 0 <= e < g.num_edges:
            raise InvalidInputError(f"no edge {e}")
    parent = list(g.vertices)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in F:
        h, k = g.edges[e]
        a, b = find(g.root[h]), find(g.root[k])
        if a == b:
            raise NotAForestError(f"edge {e} closes a cycle (or is a loop)")
        parent[max(a, b)] = min(a, b)
    comps = sorted({find(v) for v in g.vertices})
    new_vertex = {c: i for i, c in enumerate(comps)}
    vmap = tuple(new_vertex[find(v)] for v in g.vertices)
    marks_per = {}
    for v in mg.marking:
        c = vmap[v]
        if c in marks_per:
            raise MarkingConflictError("a collapsed tree contains two marked vertices")
        marks_per[c] = v
    collapsed = {h for e in F for h in g.edges[e]}
    survivors = [h for h in g.half_edges if h not in collapsed]
    new_h = {h: i for i, h in enumerate(survivors)}
    root = tuple(vmap[g.root[h]] for h in survivors)
    inv = tuple(new_h[g.involution[h]] for h in survivors)
    quotient_graph = Graph(len(comps), root, inv)
    marking = tuple(vmap[v] for v in mg.marking)
    for v in quotient_graph.vertices:
        if v not in marking and quotient_graph.valence(v) < 3:
            raise ValenceError(f"quotient vertex {v} has valence {quotient_graph.valence(v)}")
    quotient = MarkedGraph(quotient_graph, marking)
    hmap = tuple(new_h.get(h) for h in g.half_edges)
    return quotient, GraphMorphism(mg, quotient, vmap, hmap)


def hom_set(a: MarkedGraph, b: MarkedGraph) -> list[GraphMorphism]:
    """Every morphism a -> b (not up to isomorphism)."""
    if a.genus != b.genus or a.n != b.n:
        raise InvalidInputError("hom_set needs graphs of the same (g, n)")
    k = a.num_edges - b.num_edges
    if k < 0:
        return []
    target_key = canonical_key(b)
    non_loops = [e for e in range(a.num_edges) if not a.graph.is_loop(e)]
    out = []
    for F in itertools.combinations(non_loops, k):
        try:
            q, collapse = contract_edges(a, F)
        except InvalidInputError:
            continue
        if canonical_key(q) != target_key:
            continue
        for phi in isomorphisms(q, b):
            out.append(compose(phi, collapse))
    out.sort(key=lambda f: f.key)
    return out


# ---------------------------------------------------------------------------
# tripods


def tripods(mg: MarkedGraph) -> list[tuple[int, int, int]]:
    """Ordered triples of distinct half-edges sharing a root."""
    g = mg.graph
    return [t for v in g.vertices for t in itertools.permutations(g.half_edges_at(v), 3)]


def tripod_pullback(f: GraphMorphism) -> dict[tuple[int, int, int], tuple[int, int, int]]:
    """The map on tripod triples H^tripod(target) -> H^tripod(source)."""
    s = f.source.graph
    pre = {k: h for h, k in enumerate(f.half_edge_map) if k is not None}
    out = {}
    for triple in tripods(f.target):
        legs = [pre[x] for x in triple]
        ends = [s.root[h] for h in legs]
        paths = {}
        for i, j in ((0, 1), (0, 2), (1, 2)):
            paths[(i, j)] = _tree_path(f, ends[i], ends[j])
        common = set(v for v, _ in paths[(0, 1)]) & set(v for v, _ in paths[(0, 2)]) & set(
            v for v, _ in paths[(1, 2)]
        )
        assert len(common) == 1, "preimage of a vertex is not a tree"
        u = common.pop()
        image = []
        for h, end in zip(legs, ends):
            if end == u:
                image.append(h)
            else:
                path = _tree_path(f, u, end)
                image.append(path[0][1])
        out[triple] = tuple(image)
    return out


def _tree_path(f: GraphMorphism, a: int, b: int) -> list[tuple[int, int | None]]:
    """Vertices on the path a -> b inside a collapsed tree, each with the half-edge leaving it."""
    s = f.source.graph
    prev: dict[int, tuple[int, int] | None] = {a: None}
    todo = deque([a])
    while todo:
        v = todo.popleft()
        if v == b:
            break
        for h in s.half_edges_at(v):
            if f.half_edge_map[h] is not None:
                continue
            w = s.root[s.involution[h]]
            if w not in prev:
                prev[w] = (v, h)
                todo.append(w)
    path: list[tuple[int, int | None]] = [(b, None)]
    v = b
    while prev[v] is not None:
        u, h = prev[v]
        path.append((u, h))
        v = u
    path.reverse()
    return path


# ---------------------------------------------------------------------------
# relative homology


@dataclass(frozen=True)
class RelativeHomology:
    """Cellular chains of (Gamma, sigma) with a chosen basis of H_1(Gamma, sigma).

    Edge e is oriented by its smaller half-edge ``edges[e][0]``.  Each basis
    vector lists one coefficient per edge.
    """

    graph: MarkedGraph
    edges: tuple[tuple[int, int], ...]
    rows: tuple[int, ...]  # unmarked vertices, indexing the rows of ``boundary``
    boundary: tuple[tuple[int, ...], ...]
    tree: frozenset[int]
    basis: tuple[tuple[Fraction, ...], ...]
    labels: tuple[tuple[str, int], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def chain(self, h: int) -> list[Fraction]:
        v = [Fraction(0)] * len(self.edges)
        e = self.graph.graph.edge_index[h]
        v[e] = Fraction(1 if self.edges[e][0] == h else -1)
        return v

    def chain_of(self, half_edges: dict[int, int | Fraction]) -> list[Fraction]:
        v = [Fraction(0)] * len(self.edges)
        for h, c in half_edges.items():
            for i, x in enumerate(self.chain(h)):
                v[i] += c * x
        return v

    def is_cycle(self, vector: Sequence[Fraction | int]) -> bool:
        return all(sum(Fraction(r[j]) * vector[j] for j in range(len(vector))) == 0 for r in self.boundary)

    @cached_property
    def _solver(self) -> tuple[list[int], list[list[Fraction]]]:
        """Edge columns S on which the basis is invertible, and the inverse of that block."""
        _, cols = linalg.row_basis(self.basis, len(self.edges))
        square = [[self.basis[i][c] for c in cols] for i in range(self.rank)]
        return cols, linalg.inverse(square)

    def coordinates(self, vector: Sequence[Fraction | int]) -> list[Fraction]:
        """Coordinates of a relative cycle in ``basis``."""
        if not self.is_cycle(vector):
            raise InvalidInputError("chain is not a relative cycle")
        if not self.basis:
            return []
        cols, inv = self._solver
        vs = [Fraction(vector[c]) for c in cols]
        coords = [sum((vs[k] * inv[k][i] for k in range(len(cols))), Fraction(0)) for i in range(self.rank)]
        recon = [sum((coords[i] * self.basis[i][j] for i in range(self.rank)), Fraction(0)) for j in range(len(self.edges))]
        if recon != [Fraction(x) for x in vector]:
            raise AssertionError("cycle not in span of basis")
        return coords


@lru_cache(maxsize=None)
def relative_homology(mg: MarkedGraph) -> RelativeHomology:
    g = mg.graph
    edges = g.edges
    rows = mg.unmarked_vertices
    row_of = {v: i for i, v in enumerate(rows)}
    boundary = [[0] * len(edges) for _ in rows]
    for e, (h, k) in enumerate(edges):
        if g.root[k] in row_of:
            boundary[row_of[g.root[k]]][e] += 1
        if g.root[h] in row_of:
            boundary[row_of[g.root[h]]][e] -= 1
    # BFS spanning tree from vertex 0, half-edges in increasing id
    up: dict[int, int | None] = {0: None}
    depth = {0: 0}
    tree = set()
    todo = deque([0])
    while todo:
        v = todo.popleft()
        for h in g.half_edges_at(v):
            w = g.root[g.involution[h]]
            if w not in up:
                up[w] = g.involution[h]  # half-edge at w pointing to its parent
                depth[w] = depth[v] + 1
                tree.add(g.edge_index[h])
                todo.append(w)

    def chain(h):
        vec = [Fraction(0)] * len(edges)
        e = g.edge_index[h]
        vec[e] = Fraction(1 if edges[e][0] == h else -1)
        return vec

    def path(x, y):
        # chain of the tree path from x to y
        vec = [Fraction(0)] * len(edges)
        down = []
        while x != y:
            if depth[x] >= depth[y]:
                h = up[x]
                for i, c in enumerate(chain(h)):
                    vec[i] += c
                x = g.root[g.involution[h]]
            else:
                down.append(up[y])
                y = g.root[g.involution[up[y]]]
        for h in down:
            for i, c in enumerate(chain(g.involution[h])):
                vec[i] += c
        return vec

    basis = []
    labels = []
    for e, (h, k) in enumerate(edges):
        if e in tree:
            continue
        cyc = chain(h)
        for i, c in enumerate(path(g.root[k], g.root[h])):
            cyc[i] += c
        basis.append(tuple(cyc))
        labels.append(("cycle", e))
    for i in range(1, mg.n):
        basis.append(tuple(path(mg.marking[0], mg.marking[i])))
        labels.append(("path", i + 1))
    return RelativeHomology(
        mg,
        edges,
        rows,
        tuple(tuple(r) for r in boundary),
        frozenset(tree),
        tuple(basis),
        tuple(labels),
    )


def chain_map(f: GraphMorphism) -> list[list[Fraction]]:
    """Matrix of f_* : C_1(source) -> C_1(target) in oriented-edge coordinates (rows = target edges)."""
    s, t = f.source.graph, f.target.graph
    m = [[Fraction(0)] * s.num_edges for _ in range(t.num_edges)]
    for e, (h, _) in enumerate(s.edges):
        k = f.half_edge_map[h]
        if k is None:
            continue
        te = t.edge_index[k]
        m[te][e] = Fraction(1 if t.edges[te][0] == k else -1)
    return m


# ---------------------------------------------------------------------------
# chain poset (Slominska reduction)


def push_along(alpha: GraphMorphism, f: GraphMorphism, f2: GraphMorphism) -> GraphMorphism | None:
    """The isomorphism beta with beta ∘ f == f2 ∘ alpha, if one exists.

    ``alpha`` is an isomorphism source(f) -> source(f2); f is surjective, so
    beta is determined by the equation.
    """
    B, B2 = f.target, f2.target
    vm: list[int | None] = [None] * B.num_vertices
    for x in f.source.graph.vertices:
        y, z = f.vertex_map[x], f2.vertex_map[alpha.vertex_map[x]]
        if vm[y] is None:
            vm[y] = z
        elif vm[y] != z:
            return None
    hm: list[int | None] = [None] * len(B.graph.root)
    for h, y in enumerate(f.half_edge_map):
        z = f2.half_edge_map[alpha.half_edge_map[h]]
        if (y is None) != (z is None):
            return None
        if y is not None:
            hm[y] = z
    if None in vm or None in hm:
        return None
    if len(set(vm)) != len(vm) or len(set(hm)) != len(hm):
        return None
    return GraphMorphism(B, B2, tuple(vm), tuple(hm))  # type: ignore[arg-type]


@dataclass
class ChainClass:
    """Representative chain i_0 -> ... -> i_p of non-isomorphisms."""

    objects: tuple[int, ...]
    morphisms: tuple[GraphMorphism, ...]
    automorphisms: list[tuple[GraphMorphism, ...]]

    @property
    def length(self) -> int:
        return len(self.morphisms)

    @property
    def stabilizer(self) -> list[GraphMorphism]:
        """Automorphisms of the chain, as their (faithful) image in Aut(i_0)."""
        return [a[0] for a in self.automorphisms]


@dataclass
class Face:
    """Relation x < y: y is the subchain of x on ``retained`` positions.

    ``morphism`` goes from the first object of x to the first object of y
    (composite of the dropped prefix followed by the identifying
    automorphism).
    """

    retained: tuple[int, ...]
    morphism: GraphMorphism


@dataclass
class ChainPoset:
    g: int
    n: int
    no_redundant: bool
    objects: list[MarkedGraph]
    elements: list[ChainClass]
    faces: dict[tuple[int, int], Face] = field(default_factory=dict)

    @property
    def depth(self) -> int:
        return max((x.length for x in self.elements), default=0)

    def less(self, x: int, y: int) -> bool:
        return (x, y) in self.faces

    def covers(self) -> list[tuple[int, int]]:
        return sorted(
            (x, y) for (x, y) in self.faces if self.elements[x].length == self.elements[y].length + 1
        )

    def relations(self) -> list[tuple[int, int]]:
        return sorted(self.faces)

    def first_object(self, x: int) -> MarkedGraph:
        return self.objects[self.elements[x].objects[0]]

    def describe(self, x: int) -> str:
        c = self.elements[x]
        return " -> ".join(f"G{i}" for i in c.objects)


def chain_poset(g: int, n: int, no_redundant: bool = True, cap: int | None = None) -> ChainPoset:
    """The poset of isomorphism classes of chains of non-isomorphisms in Gr_{g,n}.

    x <= y iff y is (isomorphic to) a subchain of x obtained by dropping
    objects; lengths strictly decrease along the order, so the longest
    chains are the minimal elements.
    """
    if cap is None:
        cap = DEFAULT_ISO_CLASS_CAP
    objects = enumerate_graphs(g, n, no_redundant=no_redundant, cap=cap)
    auts = [automorphisms(o) for o in objects]
    homs: dict[tuple[int, int], list[GraphMorphism]] = {}

    def hom(i, j):
        if (i, j) not in homs:
            if objects[j].num_edges >= objects[i].num_edges:
                homs[(i, j)] = []
            else:
                homs[(i, j)] = hom_set(objects[i], objects[j])
        return homs[(i, j)]

    elements = [ChainClass((i,), (), [(a,) for a in auts[i]]) for i in range(len(objects))]
    layer = list(elements)
    while layer:
        nxt = []
        for x in layer:
            last = x.objects[-1]
            for r in range(len(objects)):
                fs = hom(last, r)
                if not fs:
                    continue
                seen = set()
                inv_last = [a[-1].inverse() for a in x.automorphisms]
                for f in fs:
                    if f.key in seen:
                        continue
                    stab = []
                    for a, ainv in zip(x.automorphisms, inv_last):
                        base = compose(f, ainv)
                        for b in auts[r]:
                            image = compose(b, base)
                            seen.add(image.key)
                            if image.key == f.key:
                                stab.append(a + (b,))
                    nxt.append(ChainClass(x.objects + (r,), x.morphisms + (f,), stab))
                    if len(elements) + len(nxt) > cap:
                        raise ResourceCapError(f"chain poset exceeds {cap} elements")
        elements.extend(nxt)
        layer = nxt
    poset = ChainPoset(g, n, no_redundant, objects, elements)
    by_objects: dict[tuple[int, ...], list[int]] = {}
    for idx, c in enumerate(elements):
        by_objects.setdefault(c.objects, []).append(idx)
    for idx, c in enumerate(elements):
        p = c.length
        for size in range(1, p + 1):
            for retained in itertools.combinations(range(p + 1), size):
                objs = tuple(c.objects[i] for i in retained)
                mors = []
                for a, b in zip(retained, retained[1:]):
                    m = c.morphisms[a]
                    for t in range(a + 1, b):
                        m = compose(c.morphisms[t], m)
                    mors.append(m)
                y, theta0 = _classify(objects, auts, elements, by_objects[objs], mors)
                prefix = identity(objects[c.objects[0]])
                for t in range(retained[0]):
                    prefix = compose(c.morphisms[t], prefix)
                poset.faces[(idx, y)] = Face(retained, compose(theta0, prefix))
    return poset


def _classify(objects, auts, elements, candidates, mors) -> tuple[int, GraphMorphism]:
    first = elements[candidates[0]].objects[0]
    for y in candidates:
        rep = elements[y]
        for a0 in auts[first]:
            a = a0
            ok = True
            for f, f2 in zip(mors, rep.morphisms):
                a = push_along(a, f, f2)
                if a is None:
                    ok = False
                    break
            if ok:
                return y, a0
    raise AssertionError("subchain matches no representative")


# ---------------------------------------------------------------------------
# the two genus-2 graphs used throughout, with the usual half-edge names


def theta() -> MarkedGraph:
    """Theta graph: v2 = vertex 0 carries h3', h1', h2' (ids 0, 1, 2);
    v1 = vertex 1 carries h3, h1, h2 (ids 3, 4, 5).

    With these ids the BFS spanning tree is the middle edge e3 and the
    cycle basis is beta_1 = [e3 - e1], beta_2 = [e3 - e2].
    """
    root = (0, 0, 0, 1, 1, 1)
    inv = (3, 4, 5, 0, 1, 2)
    return MarkedGraph(Graph(2, root, inv))


THETA_HALF_EDGES = {"h3'": 0, "h1'": 1, "h2'": 2, "h3": 3, "h1": 4, "h2": 5}
THETA_VERTICES = {"v2": 0, "v1": 1}
THETA_EDGES = {"e3": 0, "e1": 1, "e2": 2}


def rose2() -> MarkedGraph:
    """Rose with two petals: f1 = {h1, h2}, f2 = {h3, h4} with ids 0..3."""
    return MarkedGraph(Graph(1, (0, 0, 0, 0), (1, 0, 3, 2)))


ROSE2_HALF_EDGES = {"h1": 0, "h2": 1, "h3": 2, "h4": 3}
ROSE2_EDGES = {"f1": 0, "f2": 1}


def theta_to_rose() -> GraphMorphism:
    """The collapse pi of the middle edge e3:
    h1 -> h2, h2 -> h4, h1' -> h1, h2' -> h3, both vertices -> v."""
    T, R = THETA_HALF_EDGES, ROSE2_HALF_EDGES
    hm: list[int | None] = [None] * 6
    hm[T["h1"]] = R["h2"]
    hm[T["h2"]] = R["h4"]
    hm[T["h1'"]] = R["h1"]
    hm[T["h2'"]] = R["h3"]
    return GraphMorphism(theta(), rose2(), (0, 0), tuple(hm))


BUILTIN_GRAPHS = {"theta": theta, "rose2": rose2}


def resolve_graph(spec: str) -> MarkedGraph:
    """A built-in name ("theta", "rose2"), a JSON string, or a path to a JSON file."""
    if spec in BUILTIN_GRAPHS:
        return BUILTIN_GRAPHS[spec]()
    text = spec
    if not spec.lstrip().startswith("{"):
        try:
            with open(spec) as fh:
                text = fh.read()
        except OSError:
            raise InvalidInputError(f"unknown graph {spec!r}") from None
    try:
        return MarkedGraph.from_json(text)
    except (json.JSONDecodeError, TypeError, AttributeError) as exc:
        raise InvalidInputError(f"malformed graph JSON: {exc}") from None

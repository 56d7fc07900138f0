"""Cohomology rings of ordered configuration spaces of d points in S^3.

Two variants:

``plain``
    Lambda[alpha] (alpha in degree 3, present for d >= 1) tensored with
    Q[omega_ij^k] modulo antisymmetry, the 4-point relation and
    (omega_ij^k)^2 = 0.
``so4``
    The Borel construction for the SO(4)-action: classes c_ij^k of degree 2
    with the same linear relations, (c_ij^k)^2 = delta, delta in degree 4.

The linear relations are solved up front: every class is rewritten in terms
of ``x_ij^d`` with i < j < d.  For so4 and d >= 3, delta is eliminated as the
square of the last generator ``z = c_{d-2,d-1}^d``; the name ``delta`` stays
available as a parser alias.  For d < 3 no triples exist and delta is kept
as a degree-4 generator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import InvalidInputError
from .galgebra import GradedPresentation, RingElement, RingMap

VARIANTS = ("plain", "so4")


def permutation_sign(seq: Sequence[int]) -> int:
    inv = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inv % 2 else 1


def reduce_triple(i: int, j: int, k: int, top: int) -> list[tuple[int, tuple[int, int]]]:
    """Express the class of the triple (i, j, k) through x_ab^top with a < b < top.

    The class is alternating in all three indices; when the largest index is
    below ``top`` the 4-point relation x_ab^c = x_ab^top + x_bc^top - x_ac^top
    applies.  Returns (coefficient, (a, b)) pairs.
    """
    if len({i, j, k}) < 3:
        raise InvalidInputError(f"triple ({i}, {j}, {k}) has repeated indices")
    sign = permutation_sign((i, j, k))
    a, b, c = sorted((i, j, k))
    if c == top:
        return [(sign, (a, b))]
    if c > top:
        raise InvalidInputError(f"index {c} exceeds {top}")
    return [(sign, (a, b)), (sign, (b, c)), (-sign, (a, c))]


def _gen_name(prefix: str, i: int, j: int, k: int) -> str:
    return f"{prefix}_{i}_{j}_{k}"


@dataclass(frozen=True, eq=False)
class ConfRing:
    d: int
    variant: str
    presentation: GradedPresentation
    pairs: tuple[tuple[int, int], ...]  # index pairs (i, j) of the reduced generators

    @property
    def prefix(self) -> str:
        return "w" if self.variant == "plain" else "c"

    def triple(self, i: int, j: int, k: int) -> RingElement:
        """The class omega_ij^k (plain) or c_ij^k (so4)."""
        p = self.presentation
        out = p.zero()
        for coeff, (a, b) in reduce_triple(i, j, k, self.d):
            out = out + p.gen(_gen_name(self.prefix, a, b, self.d)) * coeff
        return out

    def delta(self) -> RingElement:
        if self.variant != "so4":
            raise InvalidInputError("delta exists only in the so4 variant")
        return self.presentation.gen("delta")

    def alpha(self) -> RingElement:
        if self.variant != "plain" or self.d < 1:
            raise InvalidInputError("alpha exists only in the plain variant with d >= 1")
        return self.presentation.gen("a")

    def four_point_relation(self, i: int, j: int, k: int, l: int) -> RingElement:
        """x_ij^k - x_ij^l - x_jk^l - x_ki^l, which must vanish."""
        return self.triple(i, j, k) - self.triple(i, j, l) - self.triple(j, k, l) - self.triple(k, i, l)


@lru_cache(maxsize=None)
def conf_ring(d: int, variant: str = "plain") -> ConfRing:
    if variant not in VARIANTS:
        raise InvalidInputError(f"variant must be one of {VARIANTS}")
    if d < 0:
        raise InvalidInputError("d must be non-negative")
    prefix = "w" if variant == "plain" else "c"
    pairs = tuple((i, j) for i in range(1, d) for j in range(i + 1, d))
    even = [(_gen_name(prefix, i, j, d), 2) for i, j in pairs]
    odd = [("a", 3)] if variant == "plain" and d >= 1 else []
    idx = {pr: n for n, pr in enumerate(pairs)}
    aliases = {}
    if variant == "so4" and d < 3:
        even.append(("delta", 4))
    elif variant == "so4":
        aliases["delta"] = f"{even[-1][0]}^2"
    relations = []
    nv = len(even)
    for a, b, c in itertools.combinations(range(1, d + 1), 3):
        lin = {}
        for coeff, pr in reduce_triple(a, b, c, d):
            lin[idx[pr]] = lin.get(idx[pr], 0) + coeff
        sq: dict = {}
        for (u, cu), (v, cv) in itertools.product(lin.items(), repeat=2):
            m = [0] * nv
            m[u] += 1
            m[v] += 1
            m = tuple(m)
            sq[m] = sq.get(m, 0) + Fraction(cu * cv)
        if variant == "so4":
            z = [0] * nv
            z[nv - 1] = 2
            z = tuple(z)
            sq[z] = sq.get(z, 0) - 1
        sq = {m: c for m, c in sq.items() if c}
        if sq:
            relations.append(sq)
    p = GradedPresentation(even, odd, relations, order="deglex", aliases=aliases)
    return ConfRing(d, variant, p, pairs)


def closed_form_groebner_set(d: int) -> list[dict]:
    """An explicit Groebner basis of the so4 ideal, used to show delta is a non-zero-divisor.

    For i < j < k < d: (x_ij)^2 - z^2 and x_ij x_jk - x_ij x_ik - x_jk x_ik + z^2,
    all classes with upper index d and z the last generator.  (Expanding
    (x_ij + x_jk - x_ik)^2 = delta forces the mixed term to equal -delta.)
    """
    R = conf_ring(d, "so4")
    nv = len(R.pairs)
    idx = {pr: n for n, pr in enumerate(R.pairs)}

    def mono(*gens):
        m = [0] * nv
        for g in gens:
            m[g] += 1
        return tuple(m)

    zz = mono(nv - 1, nv - 1)
    G = []
    for pr in R.pairs:
        if idx[pr] == nv - 1:
            continue
        G.append({mono(idx[pr], idx[pr]): Fraction(1), zz: Fraction(-1)})
    for i, j, k in itertools.combinations(range(1, d), 3):
        ij, jk, ik = idx[(i, j)], idx[(j, k)], idx[(i, k)]
        poly: dict = {}
        for m, c in ((mono(ij, jk), 1), (mono(ij, ik), -1), (mono(jk, ik), -1), (zz, 1)):
            poly[m] = poly.get(m, 0) + Fraction(c)
        G.append({m: c for m, c in poly.items() if c})
    return G


def _check_permutation(d: int, perm: Sequence[int]) -> tuple[int, ...]:
    perm = tuple(int(x) for x in perm)
    if sorted(perm) != list(range(1, d + 1)):
        raise InvalidInputError(f"{perm} is not a permutation of 1..{d}")
    return perm


def sym_action(d: int, variant: str, perm: Sequence[int]) -> RingMap:
    """The automorphism induced by permuting labels: x_ij^k -> x_{g(i)g(j)}^{g(k)}.

    ``perm[i-1]`` is g(i).  This is a left action: the map of g∘h equals
    sym_action(g) ∘ sym_action(h).
    """
    perm = _check_permutation(d, perm)
    R = conf_ring(d, variant)
    p = R.presentation
    images = {}
    for i, j in R.pairs:
        images[_gen_name(R.prefix, i, j, d)] = R.triple(perm[i - 1], perm[j - 1], perm[d - 1])
    for name, _ in p.even_gens + p.odd_gens:
        if name not in images:
            images[name] = p.gen(name)
    return RingMap(p, p, images)


def forget_points(d: int, subset: Sequence[int], variant: str = "plain") -> RingMap:
    """The map conf_ring(|S|) -> conf_ring(d) from the inclusion S ⊆ {1..d}.

    The k-th smallest element of S relabels index k.
    """
    S = sorted(set(int(s) for s in subset))
    if any(not 1 <= s <= d for s in S):
        raise InvalidInputError(f"subset {S} not contained in 1..{d}")
    m = len(S)
    src = conf_ring(m, variant)
    tgt = conf_ring(d, variant)
    images = {}
    for i, j in src.pairs:
        images[_gen_name(src.prefix, i, j, m)] = tgt.triple(S[i - 1], S[j - 1], S[m - 1])
    for name, _ in src.presentation.even_gens + src.presentation.odd_gens:
        if name == "delta":
            images[name] = tgt.delta()
        elif name == "a":
            images[name] = tgt.alpha()
    return RingMap(src.presentation, tgt.presentation, images)


def plain_series(d: int, max_degree: int) -> list[int]:
    """Coefficients of (1 + t^3) * prod_{k=1}^{d-2} (1 + k t^2) (d >= 1)."""
    series = [0] * (max_degree + 1)
    series[0] = 1
    for k in range(1, d - 1):
        for i in range(max_degree, 1, -1):
            series[i] += k * series[i - 2]
    if d >= 1:
        for i in range(max_degree, 2, -1):
            series[i] += series[i - 3]
    return series


def so4_series(d: int, max_degree: int) -> list[int]:
    """Coefficients of prod_{k=1}^{d-2} (1 + k t^2) / (1 - t^4)."""
    series = [0] * (max_degree + 1)
    series[0] = 1
    for k in range(1, d - 1):
        for i in range(max_degree, 1, -1):
            series[i] += k * series[i - 2]
    for i in range(4, max_degree + 1):
        series[i] += series[i - 4]
    return series

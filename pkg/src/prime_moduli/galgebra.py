"""Graded-commutative algebra over the rationals.

A :class:`GradedPresentation` has even polynomial generators, odd exterior
generators and homogeneous relations among the even generators only.  The
even part is handled by a Groebner basis (Buchberger's algorithm with exact
``Fraction`` coefficients); the odd part is a plain exterior algebra with
Koszul signs and is never fed to Buchberger.

Polynomials are dicts ``{exponent tuple: Fraction}``.  Ring elements are
dicts ``{(odd index tuple, exponent tuple): Fraction}`` with every even
monomial already reduced.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import InvalidInputError, RelationViolationError, ResourceCapError

DEFAULT_PAIR_CAP = 200000

Monomial = tuple[int, ...]
Poly = dict[Monomial, Fraction]


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """A degree-compatible or lexicographic order on even monomials.

    ``kind`` is one of ``"deglex"`` (weighted degree, then lex with the first
    generator largest), ``"grevlex"`` or ``"lex"``.
    """

    kind: str = "deglex"

    def __post_init__(self):
        if self.kind not in ("deglex", "grevlex", "lex"):
            raise InvalidInputError(f"unknown monomial order {self.kind!r}")

    def key(self, m: Monomial, weights: Sequence[int]):
        if self.kind == "lex":
            return m
        deg = sum(e * w for e, w in zip(m, weights))
        if self.kind == "deglex":
            return (deg, m)
        return (deg, tuple(-e for e in reversed(m)))


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _addto(target: Poly, m: Monomial, c: Fraction) -> None:
    v = target.get(m, 0) + c
    if v:
        target[m] = v
    else:
        target.pop(m, None)


class _Ordering:
    """Monomial order bound to a weight vector."""

    def __init__(self, order: MonomialOrder, weights: Sequence[int]):
        self.order = order
        self.weights = tuple(weights)

    def key(self, m: Monomial):
        return self.order.key(m, self.weights)

    def leading(self, p: Poly) -> Monomial:
        return max(p, key=self.key)


# ---------------------------------------------------------------------------
# Buchberger


def _reduce_full(p: Poly, basis: list[Poly], lms: list[Monomial], ordering: _Ordering) -> Poly:
    """Remainder of p on division by ``basis`` (every term reduced)."""
    p = dict(p)
    rem: Poly = {}
    while p:
        m = ordering.leading(p)
        c = p[m]
        for g, lm in zip(basis, lms):
            if _divides(lm, m):
                q = _sub(m, lm)
                f = c / g[lm]
                for gm, gc in g.items():
                    _addto(p, _add(gm, q), -f * gc)
                break
        else:
            rem[m] = c
            del p[m]
    return rem


def _monic(p: Poly, ordering: _Ordering) -> Poly:
    lc = p[ordering.leading(p)]
    return {m: c / lc for m, c in p.items()}


def _spoly(f: Poly, g: Poly, ordering: _Ordering) -> Poly:
    lf, lg = ordering.leading(f), ordering.leading(g)
    l = _lcm(lf, lg)
    out: Poly = {}
    qf, qg = _sub(l, lf), _sub(l, lg)
    for m, c in f.items():
        _addto(out, _add(m, qf), c / f[lf])
    for m, c in g.items():
        _addto(out, _add(m, qg), -c / g[lg])
    return out


def groebner(
    relations: Iterable[Poly],
    order: MonomialOrder | str = "deglex",
    weights: Sequence[int] | None = None,
    pair_cap: int | None = None,
) -> list[Poly]:
    """Reduced Groebner basis of the ideal generated by ``relations``.

    Pairs are processed by the normal selection strategy (smallest lcm
    first); pairs with coprime leading monomials are skipped.  The result is
    monic, inter-reduced and sorted by leading monomial.
    """
    if isinstance(order, str):
        order = MonomialOrder(order)
    if pair_cap is None:
        pair_cap = DEFAULT_PAIR_CAP
    rels = [dict(r) for r in relations if r]
    if not rels:
        return []
    nvars = len(next(iter(rels[0])))
    ordering = _Ordering(order, weights if weights is not None else (1,) * nvars)
    basis: list[Poly] = []
    lms: list[Monomial] = []
    for r in rels:
        r = _reduce_full(r, basis, lms, ordering)
        if r:
            r = _monic(r, ordering)
            basis.append(r)
            lms.append(ordering.leading(r))
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    processed = 0
    while pairs:
        pairs.sort(key=lambda ij: ordering.key(_lcm(lms[ij[0]], lms[ij[1]])))
        i, j = pairs.pop(0)
        if all(x == 0 or y == 0 for x, y in zip(lms[i], lms[j])):
            continue
        processed += 1
        if processed > pair_cap:
            raise ResourceCapError(f"Groebner computation exceeded {pair_cap} S-pairs")
        r = _reduce_full(_spoly(basis[i], basis[j], ordering), basis, lms, ordering)
        if r:
            r = _monic(r, ordering)
            basis.append(r)
            lms.append(ordering.leading(r))
            k = len(basis) - 1
            pairs.extend((a, k) for a in range(k))
    return _reduced(basis, ordering)


def _reduced(basis: list[Poly], ordering: _Ordering) -> list[Poly]:
    lms = [ordering.leading(g) for g in basis]
    keep = []
    for i, lm in enumerate(lms):
        if any(j != i and _divides(lms[j], lm) and (lms[j] != lm or j < i) for j in range(len(basis))):
            continue
        keep.append(i)
    minimal = [basis[i] for i in keep]
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        olms = [ordering.leading(o) for o in others]
        lm = ordering.leading(g)
        tail = {m: c for m, c in g.items() if m != lm}
        r = _reduce_full(tail, others, olms, ordering)
        r[lm] = g[lm]
        out.append(_monic(r, ordering))
    out.sort(key=lambda g: ordering.key(ordering.leading(g)))
    return out


def is_groebner(
    basis: Sequence[Poly], order: MonomialOrder | str = "deglex", weights: Sequence[int] | None = None
) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    if isinstance(order, str):
        order = MonomialOrder(order)
    basis = [b for b in basis if b]
    if not basis:
        return True
    nvars = len(next(iter(basis[0])))
    ordering = _Ordering(order, weights if weights is not None else (1,) * nvars)
    lms = [ordering.leading(g) for g in basis]
    for i, j in itertools.combinations(range(len(basis)), 2):
        if _reduce_full(_spoly(basis[i], basis[j], ordering), list(basis), lms, ordering):
            return False
    return True


# ---------------------------------------------------------------------------
# presentations


_NAME = r"[A-Za-z][A-Za-z0-9_']*"


class GradedPresentation:
    """A graded-commutative Q-algebra given by generators and even relations.

    ``aliases`` maps extra names (for instance ``delta`` after it has been
    eliminated) to text expressions in the generators; the parser resolves
    them.
    """

    def __init__(
        self,
        even_gens: Sequence[tuple[str, int]] = (),
        odd_gens: Sequence[tuple[str, int]] = (),
        relations: Sequence[Poly | str] = (),
        order: MonomialOrder | str = "deglex",
        aliases: Mapping[str, str] | None = None,
        pair_cap: int | None = None,
    ):
        self.even_gens = tuple((str(n), int(d)) for n, d in even_gens)
        self.odd_gens = tuple((str(n), int(d)) for n, d in odd_gens)
        for name, deg in self.even_gens:
            if deg <= 0 or deg % 2:
                raise InvalidInputError(f"even generator {name} needs positive even degree, got {deg}")
        for name, deg in self.odd_gens:
            if deg <= 0 or deg % 2 == 0:
                raise InvalidInputError(f"odd generator {name} needs positive odd degree, got {deg}")
        names = [n for n, _ in self.even_gens + self.odd_gens]
        if len(set(names)) != len(names):
            raise InvalidInputError("generator names must be distinct")
        for n in names:
            if not re.fullmatch(_NAME, n):
                raise InvalidInputError(f"bad generator name {n!r}")
        self.order = MonomialOrder(order) if isinstance(order, str) else order
        self.weights = tuple(d for _, d in self.even_gens)
        self._ordering = _Ordering(self.order, self.weights)
        self._even_index = {n: i for i, (n, _) in enumerate(self.even_gens)}
        self._odd_index = {n: i for i, (n, _) in enumerate(self.odd_gens)}
        self.aliases: dict[str, str] = dict(aliases or {})
        rels = []
        for r in relations:
            if isinstance(r, str):
                el = self._parse_raw(r)
                if any(odd for odd, _ in el):
                    raise InvalidInputError("relations may only involve even generators")
                r = {m: c for (_, m), c in el.items()}
            r = {tuple(m): Fraction(c) for m, c in r.items() if c}
            if r:
                degs = {self.even_degree(m) for m in r}
                if len(degs) != 1:
                    raise InvalidInputError("relations must be homogeneous")
                rels.append(r)
        self.relations = tuple(rels)
        self.groebner_basis = tuple(groebner(rels, self.order, self.weights, pair_cap)) if rels else ()
        self._lms = [self._ordering.leading(g) for g in self.groebner_basis]
        self._nf_cache: dict[Monomial, Poly] = {}
        self._standard: dict[int, list[Monomial]] = {0: [(0,) * len(self.even_gens)]}

    def __repr__(self):
        return (
            f"GradedPresentation(even={[n for n, _ in self.even_gens]}, "
            f"odd={[n for n, _ in self.odd_gens]}, relations={len(self.relations)})"
        )

    @property
    def num_even(self) -> int:
        return len(self.even_gens)

    @property
    def num_odd(self) -> int:
        return len(self.odd_gens)

    def even_degree(self, m: Monomial) -> int:
        return sum(e * w for e, w in zip(m, self.weights))

    def odd_degree(self, s: tuple[int, ...]) -> int:
        return sum(self.odd_gens[i][1] for i in s)

    def even_part(self) -> "GradedPresentation":
        return GradedPresentation(self.even_gens, (), self.relations, self.order)

    # -- normal forms ------------------------------------------------------

    def _reducer(self, m: Monomial) -> int | None:
        for i, lm in enumerate(self._lms):
            if _divides(lm, m):
                return i
        return None

    def monomial_normal_form(self, m: Monomial) -> Poly:
        """Normal form of a single even monomial (memoized)."""
        m = tuple(m)
        cached = self._nf_cache.get(m)
        if cached is not None:
            return cached
        i = self._reducer(m)
        if i is None:
            out = {m: Fraction(1)}
        else:
            g = self.groebner_basis[i]
            lm = self._lms[i]
            q = _sub(m, lm)
            out = {}
            for gm, gc in g.items():
                if gm != lm:
                    for rm, rc in self.monomial_normal_form(_add(gm, q)).items():
                        _addto(out, rm, -gc * rc)
        self._nf_cache[m] = out
        return out

    def reduce_poly(self, p: Mapping[Monomial, Fraction | int]) -> Poly:
        out: Poly = {}
        for m, c in p.items():
            if c:
                for rm, rc in self.monomial_normal_form(tuple(m)).items():
                    _addto(out, rm, Fraction(c) * rc)
        return out

    def normal_form(self, terms: Mapping) -> "RingElement":
        """Normal form of a raw element ``{(odd tuple, exps): coeff}``.

        Odd tuples may be unsorted or repeat an index; they are sorted with
        Koszul signs (a repeat gives zero).
        """
        out: dict = {}
        for (odd, m), c in terms.items():
            sign, s = _sort_odd(tuple(odd))
            if not sign or not c:
                continue
            for rm, rc in self.monomial_normal_form(tuple(m)).items():
                _addto(out, (s, rm), sign * Fraction(c) * rc)
        return RingElement(self, out)

    # -- graded bases ------------------------------------------------------

    def standard_monomials(self, d: int) -> list[Monomial]:
        """Even monomials of degree d not divisible by any leading monomial."""
        if d < 0 or d % 2:
            return []
        if d in self._standard:
            return self._standard[d]
        found = set()
        for i, (_, w) in enumerate(self.even_gens):
            for m in self.standard_monomials(d - w):
                n = list(m)
                n[i] += 1
                n = tuple(n)
                if self._reducer(n) is None:
                    found.add(n)
        out = sorted(found, key=self._ordering.key, reverse=True)
        self._standard[d] = out
        return out

    def odd_subsets(self) -> list[tuple[int, ...]]:
        return [s for r in range(self.num_odd + 1) for s in itertools.combinations(range(self.num_odd), r)]

    def graded_basis(self, d: int) -> list[tuple[tuple[int, ...], Monomial]]:
        out = []
        for s in self.odd_subsets():
            for m in self.standard_monomials(d - self.odd_degree(s)):
                out.append((s, m))
        return out

    def betti(self, max_degree: int) -> "BettiTable":
        return BettiTable(max_degree, tuple(len(self.graded_basis(d)) for d in range(max_degree + 1)))

    # -- elements ----------------------------------------------------------

    def one(self) -> "RingElement":
        return RingElement(self, {((), (0,) * self.num_even): Fraction(1)})

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def scalar(self, c) -> "RingElement":
        return self.one() * Fraction(c)

    def gen(self, name: str) -> "RingElement":
        if name in self._even_index:
            m = [0] * self.num_even
            m[self._even_index[name]] = 1
            return self.normal_form({((), tuple(m)): 1})
        if name in self._odd_index:
            return RingElement(self, {((self._odd_index[name],), (0,) * self.num_even): Fraction(1)})
        if name in self.aliases:
            return self.parse(self.aliases[name])
        raise InvalidInputError(f"unknown generator {name!r}")

    def gens(self) -> list["RingElement"]:
        return [self.gen(n) for n, _ in self.even_gens + self.odd_gens]

    def monomial(self, odd: Sequence[int], exps: Sequence[int]) -> "RingElement":
        return self.normal_form({(tuple(odd), tuple(exps)): 1})

    def element_from_vector(self, d: int, vector: Sequence[Fraction]) -> "RingElement":
        basis = self.graded_basis(d)
        return RingElement(self, {b: Fraction(c) for b, c in zip(basis, vector) if c})

    def _parse_raw(self, text: str) -> dict:
        """Parse text into a raw (un-normalized) term dict."""
        text = text.replace(" ", "")
        if not text:
            raise InvalidInputError("empty expression")
        out: dict = {}
        for sign, body in re.findall(r"([+-]?)([^+-]+)", text):
            if not body:
                raise InvalidInputError(f"cannot parse {text!r}")
            coeff = Fraction(-1 if sign == "-" else 1)
            odd: list[int] = []
            exps = [0] * self.num_even
            alias_factor = None
            for factor in body.split("*"):
                m = re.fullmatch(r"(\d+)(?:/(\d+))?", factor)
                if m:
                    coeff *= Fraction(int(m.group(1)), int(m.group(2) or 1))
                    continue
                m = re.fullmatch(rf"({_NAME})(?:\^(\d+))?", factor)
                if not m:
                    raise InvalidInputError(f"cannot parse factor {factor!r}")
                name, k = m.group(1), int(m.group(2) or 1)
                if name in self._even_index:
                    exps[self._even_index[name]] += k
                elif name in self._odd_index:
                    odd.extend([self._odd_index[name]] * k)
                elif name in self.aliases:
                    sub = self.parse(self.aliases[name]) ** k
                    alias_factor = sub if alias_factor is None else alias_factor * sub
                else:
                    raise InvalidInputError(f"unknown generator {name!r}")
            if alias_factor is not None:
                base = self.normal_form({(tuple(odd), tuple(exps)): coeff}) * alias_factor
                for key, c in base.terms.items():
                    out[key] = out.get(key, 0) + c
            else:
                key = (tuple(odd), tuple(exps))
                out[key] = out.get(key, 0) + coeff
        return out

    def parse(self, text: str) -> "RingElement":
        """Parse ``"1/2*c1^2 - b1*b2*c2"`` style text into a normal-form element."""
        return self.normal_form(self._parse_raw(text))

    def element_from_json(self, data: Mapping[str, str]) -> "RingElement":
        total = self.zero()
        for mono, coeff in data.items():
            total = total + self.parse(mono) * Fraction(coeff)
        return total

    def to_json(self) -> dict:
        return {
            "even_generators": [{"name": n, "degree": d} for n, d in self.even_gens],
            "odd_generators": [{"name": n, "degree": d} for n, d in self.odd_gens],
            "relations": [format_poly(self, r) for r in self.relations],
            "groebner_basis": [format_poly(self, g) for g in self.groebner_basis],
            "order": self.order.kind,
            "aliases": dict(sorted(self.aliases.items())),
        }


def _sort_odd(s: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign and sorted form of an exterior monomial (sign 0 if an index repeats)."""
    if len(set(s)) != len(s):
        return 0, ()
    inversions = sum(1 for i in range(len(s)) for j in range(i + 1, len(s)) if s[i] > s[j])
    return (-1 if inversions % 2 else 1), tuple(sorted(s))


def format_fraction(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def format_monomial(p: GradedPresentation, odd: tuple[int, ...], m: Monomial) -> str:
    parts = [p.odd_gens[i][0] for i in odd]
    for (name, _), e in zip(p.even_gens, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_poly(p: GradedPresentation, poly: Poly) -> str:
    return RingElement(p, {((), m): c for m, c in poly.items()}, check=False).to_text()


# ---------------------------------------------------------------------------
# elements


class RingElement:
    """An element of a graded presentation, stored in normal form."""

    __slots__ = ("presentation", "terms")

    def __init__(self, presentation: GradedPresentation, terms: Mapping, check: bool = False):
        self.presentation = presentation
        self.terms = {k: Fraction(c) for k, c in terms.items() if c}

    # arithmetic
    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.presentation is not self.presentation:
                raise InvalidInputError("elements belong to different presentations")
            return other
        if isinstance(other, (int, Fraction)):
            return self.presentation.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            _addto(out, k, c)
        return RingElement(self.presentation, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.presentation, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RingElement(self.presentation, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.presentation
        out: dict = {}
        for (s1, m1), c1 in self.terms.items():
            for (s2, m2), c2 in other.terms.items():
                sign, s = _sort_odd(s1 + s2)
                if not sign:
                    continue
                for rm, rc in p.monomial_normal_form(_add(m1, m2)).items():
                    _addto(out, (s, rm), sign * c1 * c2 * rc)
        return RingElement(p, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidInputError("negative powers are not defined")
        result = self.presentation.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.presentation.scalar(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.presentation is other.presentation and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set[int]:
        p = self.presentation
        return {p.odd_degree(s) + p.even_degree(m) for s, m in self.terms}

    def degree(self) -> int:
        """Degree of a homogeneous element (0 for zero)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise InvalidInputError("element is not homogeneous")
        return ds.pop() if ds else 0

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_part(self, d: int) -> "RingElement":
        p = self.presentation
        return RingElement(p, {k: c for k, c in self.terms.items() if p.odd_degree(k[0]) + p.even_degree(k[1]) == d})

    def coordinates(self, d: int | None = None) -> list[Fraction]:
        """Coordinates in ``graded_basis(d)``."""
        if d is None:
            d = self.degree()
        return [self.terms.get(b, Fraction(0)) for b in self.presentation.graded_basis(d)]

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        p = self.presentation
        parts = []
        for (s, m), c in sorted(self.terms.items()):
            mono = format_monomial(p, s, m)
            coeff = format_fraction(c)
            parts.append(coeff if mono == "1" else f"{coeff}*{mono}")
        return " + ".join(parts)

    def to_json(self) -> dict[str, str]:
        p = self.presentation
        return {format_monomial(p, s, m): format_fraction(c) for (s, m), c in sorted(self.terms.items())}

    def __repr__(self):
        return self.to_text()


# ---------------------------------------------------------------------------
# Betti tables


@dataclass(frozen=True)
class BettiTable:
    max_degree: int
    ranks: tuple[int, ...]

    def __getitem__(self, d: int) -> int:
        if d < 0 or d > self.max_degree:
            raise IndexError(d)
        return self.ranks[d]

    def __iter__(self):
        return iter(self.ranks)

    def __len__(self):
        return len(self.ranks)

    def to_dict(self) -> dict[int, int]:
        return {d: r for d, r in enumerate(self.ranks)}

    def nonzero(self) -> dict[int, int]:
        return {d: r for d, r in enumerate(self.ranks) if r}

    def __mul__(self, other: "BettiTable") -> "BettiTable":
        """Betti table of a tensor product (Poincare series product), truncated."""
        D = min(self.max_degree, other.max_degree)
        out = [0] * (D + 1)
        for i, a in enumerate(self.ranks[: D + 1]):
            if a:
                for j, b in enumerate(other.ranks[: D + 1 - i]):
                    out[i + j] += a * b
        return BettiTable(D, tuple(out))


def betti(p: GradedPresentation, max_degree: int) -> BettiTable:
    return p.betti(max_degree)


def graded_basis(p: GradedPresentation, d: int):
    return p.graded_basis(d)


def multiplication_matrix(x: RingElement, d: int) -> list[list[Fraction]]:
    """Matrix of y -> x*y from degree d to degree d+|x| (columns = source basis)."""
    p = x.presentation
    src = p.graded_basis(d)
    e = x.degree()
    cols = []
    for s, m in src:
        cols.append((x * RingElement(p, {(s, m): 1})).coordinates(d + e))
    tgt_dim = len(p.graded_basis(d + e))
    return [[cols[j][i] for j in range(len(src))] for i in range(tgt_dim)]


def is_injective_multiplication(p: GradedPresentation, x: RingElement, max_degree: int) -> dict[int, bool]:
    """For each degree d <= max_degree: is multiplication by x injective on degree d?"""
    if x.presentation is not p:
        raise InvalidInputError("element does not belong to the presentation")
    out = {}
    for d in range(max_degree + 1):
        n = len(p.graded_basis(d))
        if n == 0:
            out[d] = True
            continue
        if x.is_zero():
            out[d] = False
            continue
        out[d] = linalg.rank(multiplication_matrix(x, d), n) == n
    return out


# ---------------------------------------------------------------------------
# ring maps


class RingMap:
    """Algebra map given on generators; ``images`` is keyed by source generator name."""

    def __init__(self, source: GradedPresentation, target: GradedPresentation, images: Mapping[str, RingElement | str]):
        self.source = source
        self.target = target
        imgs = {}
        for name, deg in source.even_gens + source.odd_gens:
            if name not in images:
                raise InvalidInputError(f"no image given for generator {name!r}")
            im = images[name]
            if isinstance(im, str):
                im = target.parse(im)
            if im.presentation is not target:
                raise InvalidInputError(f"image of {name} lives in the wrong ring")
            if im and im.degree() != deg:
                raise InvalidInputError(f"image of {name} has degree {im.degree()}, expected {deg}")
            imgs[name] = im
        extra = set(images) - set(imgs)
        if extra:
            raise InvalidInputError(f"images given for unknown generators {sorted(extra)}")
        self.images = imgs
        self._even = [imgs[n] for n, _ in source.even_gens]
        self._odd = [imgs[n] for n, _ in source.odd_gens]
        self._cache: dict = {}
        self._powers: dict = {}

    def __repr__(self):
        return "RingMap(" + ", ".join(f"{k} -> {v}" for k, v in self.images.items()) + ")"

    def _power(self, i: int, e: int) -> RingElement:
        key = (i, e)
        if key not in self._powers:
            if e == 0:
                self._powers[key] = self.target.one()
            else:
                self._powers[key] = self._power(i, e - 1) * self._even[i]
        return self._powers[key]

    def _image_of_basis(self, s: tuple[int, ...], m: Monomial) -> RingElement:
        key = (s, m)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = self.target.one()
        for i in s:
            out = out * self._odd[i]
        for i, e in enumerate(m):
            if e:
                out = out * self._power(i, e)
        self._cache[key] = out
        return out

    def apply(self, x: RingElement) -> RingElement:
        if x.presentation is not self.source:
            raise InvalidInputError("element does not belong to the source ring")
        out: dict = {}
        for (s, m), c in x.terms.items():
            for k, v in self._image_of_basis(s, m).terms.items():
                _addto(out, k, c * v)
        return RingElement(self.target, out)

    __call__ = apply

    def compose(self, other: "RingMap") -> "RingMap":
        """``self ∘ other`` (apply other first)."""
        if other.target is not self.source:
            raise InvalidInputError("maps are not composable")
        return RingMap(other.source, self.target, {n: self.apply(im) for n, im in other.images.items()})

    def __matmul__(self, other: "RingMap") -> "RingMap":
        return self.compose(other)

    def violations(self) -> list[tuple[str, RingElement]]:
        out = []
        for r in self.source.relations:
            img = self.target.zero()
            for m, c in r.items():
                img = img + self._image_of_basis((), m) * c
            if img:
                out.append((format_poly(self.source, r), img))
        return out

    def verify(self) -> bool:
        """True if every source relation maps to zero; raises RelationViolationError otherwise."""
        for name, deg in self.source.odd_gens:
            im = self.images[name]
            if im and im.degree() % 2 == 0:
                raise InvalidInputError(f"odd generator {name} has an even image")
        bad = self.violations()
        if bad:
            raise RelationViolationError(*bad[0])
        return True

    def matrix(self, d: int) -> list[list[Fraction]]:
        """Matrix in degree d: rows = target basis, columns = source basis."""
        src = self.source.graded_basis(d)
        cols = [self._image_of_basis(s, m).coordinates(d) for s, m in src]
        n = len(self.target.graded_basis(d))
        return [[cols[j][i] for j in range(len(src))] for i in range(n)]

    def is_identity(self) -> bool:
        return self.source is self.target and all(
            self.images[n] == self.source.gen(n) for n, _ in self.source.even_gens + self.source.odd_gens
        )

    def same_as(self, other: "RingMap") -> bool:
        return (
            self.source is other.source
            and self.target is other.target
            and all(self.images[n] == other.images[n] for n in self.images)
        )

    def to_json(self) -> dict:
        return {n: im.to_json() for n, im in self.images.items()}


def identity_map(p: GradedPresentation) -> RingMap:
    return RingMap(p, p, {n: p.gen(n) for n, _ in p.even_gens + p.odd_gens})


def free_betti_oracle(even_degrees: Sequence[int], odd_degrees: Sequence[int], max_degree: int) -> list[int]:
    """Betti numbers of a free graded-commutative algebra by series expansion."""
    series = [0] * (max_degree + 1)
    series[0] = 1
    for d in odd_degrees:
        for i in range(max_degree, d - 1, -1):
            series[i] += series[i - d]
    for d in even_degrees:
        for i in range(d, max_degree + 1):
            series[i] += series[i - d]
    return series

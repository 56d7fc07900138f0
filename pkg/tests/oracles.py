"""Independent reference computations used by several test modules.

Nothing here calls the enumeration or morphism code under test; the checks
are written directly from the definitions.
"""

import itertools


def is_morphism(src, tgt, vmap, hmap) -> bool:
    """Definition check for a map of marked graphs that collapses a forest."""
    s, t = src.graph, tgt.graph
    images = [k for k in hmap if k is not None]
    if sorted(images) != list(range(len(t.root))):
        return False
    for h, k in enumerate(hmap):
        kb = hmap[s.involution[h]]
        if k is None:
            if kb is not None or vmap[s.root[h]] != vmap[s.root[s.involution[h]]]:
                return False
        elif kb != t.involution[k] or t.root[k] != vmap[s.root[h]]:
            return False
    for w in range(t.num_vertices):
        pre = {v for v in range(s.num_vertices) if vmap[v] == w}
        if not pre:
            return False
        collapsed = {frozenset((h, s.involution[h])) for h in range(len(s.root)) if hmap[h] is None and s.root[h] in pre}
        if len(collapsed) != len(pre) - 1:
            return False
        reach, todo = {min(pre)}, [min(pre)]
        while todo:
            v = todo.pop()
            for e in collapsed:
                a, b = (s.root[h] for h in e)
                for x, y in ((a, b), (b, a)):
                    if x == v and y not in reach:
                        reach.add(y)
                        todo.append(y)
        if reach != pre:
            return False
    return all(vmap[a] == b for a, b in zip(src.marking, tgt.marking)) and src.n == tgt.n


def brute_force_hom_count(src, tgt) -> int:
    """Count morphisms by trying every vertex map and every half-edge assignment."""
    s, t = src.graph, tgt.graph
    count = 0
    choices = list(range(len(t.root))) + [None]
    for vmap in itertools.product(range(t.num_vertices), repeat=s.num_vertices):
        for hmap in itertools.product(choices, repeat=len(s.root)):
            if is_morphism(src, tgt, vmap, hmap):
                count += 1
    return count


def series_product(factors, max_degree):
    """Multiply polynomials / geometric series given as dicts {degree: coeff} or ('geom', k)."""
    out = [1] + [0] * max_degree
    for f in factors:
        if isinstance(f, tuple):
            _, k = f
            for i in range(k, max_degree + 1):
                out[i] += out[i - k]
        else:
            new = [0] * (max_degree + 1)
            for i, a in enumerate(out):
                for e, c in f.items():
                    if i + e <= max_degree:
                        new[i + e] += a * c
            out = new
    return out


def plain_conf_oracle(d, D):
    """(1 + t^3) prod_{k=1}^{d-2} (1 + k t^2)."""
    factors = [{0: 1, 3: 1}] + [{0: 1, 2: k} for k in range(1, d - 1)]
    return series_product(factors, D)


def so4_conf_oracle(d, D):
    """prod_{k=1}^{d-2} (1 + k t^2) / (1 - t^4)."""
    factors = [{0: 1, 2: k} for k in range(1, d - 1)] + [("geom", 4)]
    return series_product(factors, D)


def u2_betti(D):
    """b0 = 1, b4 = 2, b_{4k} = 3 for k >= 2, zero elsewhere."""
    return [1 if d == 0 else 2 if d == 4 else 3 if d % 4 == 0 else 0 for d in range(D + 1)]


def odd_invariant_table(D):
    """The U2 table plus a one-dimensional class in each degree 4k + 1, k >= 1."""
    base = u2_betti(D)
    return [b + (1 if d % 4 == 1 and d > 1 else 0) for d, b in enumerate(base)]

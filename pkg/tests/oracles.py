"""Plain-Python reference constructions used as test oracles.

Nothing here imports the library's table code: Lukasiewicz operations come
from exact fractions, homomorphisms and congruences from brute force.
"""

from fractions import Fraction
from itertools import product as cartesian


def luk_values(n):
    return [Fraction(i, n - 1) for i in range(n)]


def _index(vals, v):
    return vals.index(v)


def luk_mv(n):
    """Tables of the n-element Lukasiewicz chain: x (+) y = min(1, x+y), neg x = 1-x."""
    v = luk_values(n)
    oplus = [[_index(v, min(Fraction(1), a + b)) for b in v] for a in v]
    neg = [_index(v, 1 - a) for a in v]
    return {"oplus": oplus, "neg": neg, "zero": 0}


def luk_hoop(n):
    """x . y = max(0, x+y-1), x -> y = min(1, 1-x+y)."""
    v = luk_values(n)
    dot = [[_index(v, max(Fraction(0), a + b - 1)) for b in v] for a in v]
    imp = [[_index(v, min(Fraction(1), 1 - a + b)) for b in v] for a in v]
    return {"dot": dot, "imp": imp, "one": n - 1}


def apply(table, args):
    t = table
    for a in args:
        t = t[a]
    return t


def arity(table):
    k = 0
    t = table
    while isinstance(t, list):
        k += 1
        t = t[0]
    return k


def as_lists(alg):
    """Library algebra -> plain nested lists (no numpy past this point)."""
    return {s: (alg.tables[s].tolist() if a else int(alg.tables[s])) for s, a in alg.signature}


def preserves(dom, cod, m):
    for s, table in dom.items():
        k = arity(table)
        for args in cartesian(range(len(m)), repeat=k):
            if m[apply(table, args)] != apply(cod[s], [m[a] for a in args]):
                return False
    return True


def all_homs(dom, cod, n_dom, n_cod):
    return [m for m in cartesian(range(n_cod), repeat=n_dom) if preserves(dom, cod, m)]


def partitions(elems):
    """All set partitions of a list, as lists of frozensets."""
    if not elems:
        yield []
        return
    first, rest = elems[0], elems[1:]
    for p in partitions(rest):
        yield [frozenset([first])] + p
        for i in range(len(p)):
            yield p[:i] + [p[i] | {first}] + p[i + 1:]


def block_map(partition, n):
    out = [None] * n
    for b in partition:
        for a in b:
            out[a] = min(b)
    return out


def compatible(tables, rep):
    n = len(rep)
    for table in tables.values():
        k = arity(table)
        if k == 0:
            continue
        for args in cartesian(range(n), repeat=k):
            for i in range(k):
                for b in range(n):
                    if rep[b] == rep[args[i]] and b != args[i]:
                        other = list(args)
                        other[i] = b
                        if rep[apply(table, args)] != rep[apply(table, other)]:
                            return False
    return True


def congruences(tables, n):
    return [block_map(p, n) for p in partitions(list(range(n))) if compatible(tables, block_map(p, n))]


def least_congruence(tables, n, pairs):
    """Intersection of every congruence containing ``pairs``."""
    cands = [c for c in congruences(tables, n) if all(c[a] == c[b] for a, b in pairs)]
    return [min(b for b in range(n) if all(c[a] == c[b] for c in cands)) for a in range(n)]


def satisfies(tables, n, lhs, rhs, nvars):
    """lhs, rhs: Python callables taking (ops, *values)."""
    return all(lhs(tables, *vs) == rhs(tables, *vs) for vs in cartesian(range(n), repeat=nvars))

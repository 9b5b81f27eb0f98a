"""Backtracking searches over finite algebras: isomorphisms, homomorphisms, models."""

from __future__ import annotations

import itertools
import math
from typing import Iterator

import numpy as np

from hoopkit.algebra import FiniteAlgebra, Homomorphism
from hoopkit.terms import App, SignatureError, Term, Theory, Var

CANONICAL_LIMIT = 7


# -- invariants ------------------------------------------------------------

def _base_profile(alg: FiniteAlgebra) -> list[tuple]:
    n = alg.size
    feats: list[list] = [[] for _ in range(n)]
    for s, a in alg.signature:
        t = alg.tables[s]
        if a == 0:
            c = int(t)
            for e in range(n):
                feats[e].append(e == c)
        elif a == 1:
            for e in range(n):
                v = int(t[e])
                feats[e].append((v == e, int(t[v]) == e))
        elif a == 2:
            for e in range(n):
                row, col = t[e], t[:, e]
                feats[e].append((int(t[e, e]) == e, int((row == e).sum()), int((col == e).sum()),
                                 int((row == np.arange(n)).sum()), int((col == np.arange(n)).sum())))
        else:
            for e in range(n):
                feats[e].append(int((t == e).sum()))
    return [tuple(f) for f in feats]


def element_profiles(alg: FiniteAlgebra) -> list[tuple]:
    """Isomorphism-invariant colour of each element, refined once through the tables."""
    base = _base_profile(alg)
    out = []
    for e in range(alg.size):
        parts: list = [base[e]]
        for s, a in alg.signature:
            t = alg.tables[s]
            if a == 1:
                parts.append(base[int(t[e])])
            elif a == 2:
                parts.append(tuple(sorted((base[y], base[int(t[e, y])], base[int(t[y, e])])
                                          for y in range(alg.size))))
        out.append(tuple(parts))
    return out


# -- map extension by propagation ------------------------------------------

def _propagate(a: FiniteAlgebra, b: FiniteAlgebra, h: np.ndarray, injective: bool,
               allowed: list[set[int]] | None) -> bool:
    """Extend partial map ``h`` (``-1`` = unset) by forced values; False on conflict."""
    changed = True
    while changed:
        changed = False
        idx = np.flatnonzero(h >= 0)
        for s, k in a.signature:
            if k == 0:
                continue
            ta, tb = a.tables[s], b.tables[s]
            res = ta[np.ix_(*([idx] * k))].ravel()
            tgt = tb[np.ix_(*([h[idx]] * k))].ravel()
            cur = h[res]
            known = cur >= 0
            if np.any(cur[known] != tgt[known]):
                return False
            for r, v in zip(res[~known].tolist(), tgt[~known].tolist()):
                if h[r] >= 0:
                    if h[r] != v:
                        return False
                    continue
                if injective and np.any(h == v):
                    return False
                if allowed is not None and v not in allowed[r]:
                    return False
                h[r] = v
                changed = True
            if changed:
                break
    return True


def _map_search(a: FiniteAlgebra, b: FiniteAlgebra, injective: bool) -> Iterator[tuple[int, ...]]:
    if not b.signature.includes(a.signature):
        raise SignatureError("codomain does not interpret the domain signature")
    n = a.size
    allowed = None
    if injective:
        if a.size != b.size:
            return
        pa, pb = element_profiles(a), element_profiles(b)
        if sorted(pa) != sorted(pb):
            return
        allowed = [{v for v in range(b.size) if pb[v] == pa[u]} for u in range(n)]
    h = np.full(n, -1, dtype=np.intp)
    for s in a.signature.constants:
        ca, cb = a.constant(s), b.constant(s)
        if h[ca] >= 0 and h[ca] != cb:
            return
        if injective and h[ca] < 0 and np.any(h == cb):
            return
        if allowed is not None and cb not in allowed[ca]:
            return
        h[ca] = cb
    if not _propagate(a, b, h, injective, allowed):
        return

    def rec(h: np.ndarray):
        free = np.flatnonzero(h < 0)
        if free.size == 0:
            yield tuple(int(v) for v in h)
            return
        u = int(free[0])
        used = set(h[h >= 0].tolist()) if injective else set()
        cands = sorted(allowed[u]) if allowed is not None else range(b.size)
        for v in cands:
            if v in used:
                continue
            h2 = h.copy()
            h2[u] = v
            if _propagate(a, b, h2, injective, allowed):
                yield from rec(h2)

    yield from rec(h)


def find_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra) -> Homomorphism | None:
    """Lex-least isomorphism ``a -> b``, or None."""
    if a.signature != b.signature:
        raise SignatureError("isomorphism search needs equal signatures")
    for m in _map_search(a, b, injective=True):
        return Homomorphism(a, b, m)
    return None


def is_isomorphic(a: FiniteAlgebra, b: FiniteAlgebra) -> bool:
    return find_isomorphism(a, b) is not None


def all_homomorphisms(a: FiniteAlgebra, b: FiniteAlgebra) -> list[Homomorphism]:
    """Every homomorphism ``a -> b`` in lexicographic order of the maps."""
    return [Homomorphism(a, b, m, check=False) for m in _map_search(a, b, injective=False)]


def automorphisms(a: FiniteAlgebra) -> list[Homomorphism]:
    return [Homomorphism(a, a, m, check=False) for m in _map_search(a, a, injective=True)]


# -- canonical forms -------------------------------------------------------

def _key_symbols(alg: FiniteAlgebra) -> list[tuple[str, int]]:
    order = {s: i for i, s in enumerate(alg.signature.names)}
    return sorted(alg.signature.symbols, key=lambda sa: (sa[1], order[sa[0]]))


def canonical_form(alg: FiniteAlgebra) -> FiniteAlgebra:
    """Relabelling with the lexicographically least table encoding.

    Tables are compared constants first, then by arity, in signature order.
    Exhausts all ``n!`` relabellings, so only used for ``n <= CANONICAL_LIMIT``.
    """
    n = alg.size
    if n > CANONICAL_LIMIT:
        raise ValueError(f"canonical form limited to size {CANONICAL_LIMIT}")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    m = len(perms)
    inv = np.argsort(perms, axis=1)
    cols = []
    for s, a in _key_symbols(alg):
        t = alg.tables[s]
        if a == 0:
            cols.append(perms[:, int(t)][:, None])
            continue
        index = tuple(inv[(slice(None),) + (None,) * i + (slice(None),) + (None,) * (a - 1 - i)]
                      for i in range(a))
        pulled = t[index].reshape(m, -1)
        cols.append(np.take_along_axis(perms, pulled, axis=1))
    keys = np.concatenate(cols, axis=1)
    best = np.lexsort(keys.T[::-1])[0]
    return alg.relabel(perms[best])


def canonical_key(alg: FiniteAlgebra) -> tuple[int, ...]:
    can = canonical_form(alg)
    return tuple(int(v) for s, _ in _key_symbols(can) for v in can.tables[s].ravel())


# -- model search ----------------------------------------------------------

class _Layout:
    """Flat cell numbering for all operation tables of a signature at size n."""

    def __init__(self, theory: Theory, n: int):
        self.n = n
        self.offsets: dict[str, int] = {}
        self.arity: dict[str, int] = {}
        cells = []
        pos = 0
        for s, a in theory.signature:
            self.offsets[s] = pos
            self.arity[s] = a
            for args in itertools.product(range(n), repeat=a):
                cells.append((s, args))
            pos += n ** a
        self.cells = cells
        self.size = pos
        width = max([a for _, a in theory.signature] + [1])
        self.cell_args = np.full((pos, width), -1, dtype=np.intp)
        for i, (_, args) in enumerate(cells):
            self.cell_args[i, :len(args)] = args
        sym_index = {s: i for i, s in enumerate(theory.signature.names)}
        self.order = sorted(range(pos), key=lambda i: (
            cells[i][1] != (), max(cells[i][1], default=-1), sym_index[cells[i][0]], cells[i][1]))


def _compile(t: Term, layout: _Layout, grids: np.ndarray):
    """Return ``f(cells) -> (values, pending_cell)`` over all assignments at once."""
    if isinstance(t, Var):
        g = grids[t.index]
        return lambda cells: (g, None)
    assert isinstance(t, App)
    off = layout.offsets[t.symbol]
    n = layout.n
    subs = [_compile(a, layout, grids) for a in t.args]
    strides = [n ** (len(subs) - 1 - i) for i in range(len(subs))]
    size = grids.shape[1]

    if not subs:
        def const(cells):
            v = np.full(size, cells[off], dtype=np.intp)
            pend = np.full(size, off if cells[off] < 0 else -1, dtype=np.intp)
            return v, pend
        return const

    def app(cells):
        idx = np.full(size, off, dtype=np.intp)
        known = np.ones(size, dtype=bool)
        for f, st in zip(subs, strides):
            v, _ = f(cells)
            known &= v >= 0
            idx += np.maximum(v, 0) * st
        val = np.where(known, cells[idx], -1)
        pend = np.where(known & (val < 0), idx, -1)
        return val, pend
    return app


def _search_models(theory: Theory, n: int) -> Iterator[np.ndarray]:
    layout = _Layout(theory, n)
    checks = []
    for eq in theory.equations:
        k = eq.nvars
        grids = np.indices((n,) * k, dtype=np.intp).reshape(k, -1) if k else np.zeros((0, 1), dtype=np.intp)
        checks.append((_compile(eq.lhs, layout, grids), _compile(eq.rhs, layout, grids)))

    def propagate(cells: np.ndarray) -> bool:
        while True:
            forced_idx, forced_val = [], []
            for lf, rf in checks:
                lv, lp = lf(cells)
                rv, rp = rf(cells)
                if np.any((lv >= 0) & (rv >= 0) & (lv != rv)):
                    return False
                if rp is not None:
                    m = (lv >= 0) & (rp >= 0)
                    if m.any():
                        forced_idx.append(rp[m])
                        forced_val.append(lv[m])
                if lp is not None:
                    m = (rv >= 0) & (lp >= 0)
                    if m.any():
                        forced_idx.append(lp[m])
                        forced_val.append(rv[m])
            if not forced_idx:
                return True
            idx = np.concatenate(forced_idx)
            val = np.concatenate(forced_val)
            order = np.argsort(idx, kind="stable")
            idx, val = idx[order], val[order]
            same = idx[1:] == idx[:-1]
            if np.any(val[1:][same] != val[:-1][same]):
                return False
            cells[idx] = val

    order = layout.order
    cell_args = layout.cell_args

    def rec(cells: np.ndarray, start: int):
        pos = start
        while pos < len(order) and cells[order[pos]] >= 0:
            pos += 1
        if pos == len(order):
            yield cells
            return
        c = order[pos]
        assigned = cells >= 0
        mentioned = set(cells[assigned].tolist())
        mentioned.update(cell_args[assigned].ravel().tolist())
        mentioned.update(cell_args[c].tolist())
        mentioned.discard(-1)
        fresh = [v for v in range(n) if v not in mentioned]
        # unmentioned values are interchangeable: try only the least one
        cands = sorted(mentioned) + fresh[:1]
        for v in cands:
            child = cells.copy()
            child[c] = v
            if propagate(child):
                yield from rec(child, pos + 1)

    cells = np.full(layout.size, -1, dtype=np.intp)
    if propagate(cells):
        yield from rec(cells, 0)


def _to_algebra(theory: Theory, n: int, cells: np.ndarray) -> FiniteAlgebra:
    tables = {}
    pos = 0
    for s, a in theory.signature:
        tables[s] = cells[pos:pos + n ** a].reshape((n,) * a)
        pos += n ** a
    return FiniteAlgebra(theory.signature, n, tables, theory=theory.name)


def find_models(theory: Theory, n: int, limit: int | None = None) -> list[FiniteAlgebra]:
    """Pairwise non-isomorphic models of ``theory`` of size ``n``.

    Depth-first table filling with propagation of every fully decided ground
    instance (including forcing the one undecided outermost cell of a side),
    a least-number symmetry heuristic on fresh elements, and deduplication up
    to isomorphism. Output is sorted by canonical table encoding.
    """
    if n < 1:
        raise ValueError("model size must be positive")
    found: dict[tuple, FiniteAlgebra] = {}
    reps: list[FiniteAlgebra] = []
    for cells in _search_models(theory, n):
        alg = _to_algebra(theory, n, cells)
        if n <= CANONICAL_LIMIT:
            can = canonical_form(alg)
            key = can.table_key()
            if key not in found:
                found[key] = can
        else:
            if any(find_isomorphism(alg, r) is not None for r in reps):
                continue
            reps.append(alg)
            found[alg.table_key()] = alg
        if limit is not None and len(found) >= limit:
            break
    models = [found[k] for k in sorted(found, key=lambda k: canonical_sort_key(found[k]))]
    return [m.renamed(f"{theory.name}{n}_{i}", theory=theory.name) for i, m in enumerate(models)]


def canonical_sort_key(alg: FiniteAlgebra) -> tuple[int, ...]:
    return tuple(int(v) for s, _ in _key_symbols(alg) for v in alg.tables[s].ravel())


def count_labelled(theory: Theory, n: int) -> int:
    """Number of models found before deduplication (search diagnostics)."""
    return sum(1 for _ in _search_models(theory, n))


def orbit_size(alg: FiniteAlgebra) -> int:
    return math.factorial(alg.size) // len(automorphisms(alg))

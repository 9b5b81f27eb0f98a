"""Finite algebras as operation tables, and the constructions built on them.

Carriers are always ``{0, ..., n-1}``. Products and pullbacks encode the pair
``(i, j)`` as ``i * |B| + j``; the decoded pairs are kept in ``labels``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping, Sequence

import numpy as np

from hoopkit.terms import Signature, SignatureError


class HomomorphismError(ValueError):
    """A map fails to preserve some operation."""


class PointError(ValueError):
    pass


def _freeze(table: Any, n: int, arity: int, name: str) -> np.ndarray:
    arr = np.array(table, dtype=np.intp)
    if arr.shape != (n,) * arity:
        raise ValueError(f"table for {name!r} has shape {arr.shape}, expected {(n,) * arity}")
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise ValueError(f"table for {name!r} has entries outside 0..{n - 1}")
    arr.setflags(write=False)
    return arr


class FiniteAlgebra:
    """An algebra on ``{0..size-1}`` with one table per operation symbol.

    ``name``, ``theory`` and ``labels`` are descriptive metadata; equality
    compares signature, size and tables only.
    """

    __slots__ = ("signature", "size", "tables", "name", "theory", "labels")

    def __init__(self, signature: Signature, size: int, tables: Mapping[str, Any],
                 name: str = "", theory: str = "", labels: Sequence[Any] | None = None):
        if size < 1:
            raise ValueError("carrier must be non-empty")
        missing = [s for s in signature.names if s not in tables]
        extra = [s for s in tables if s not in signature]
        if missing or extra:
            raise SignatureError(f"tables do not match signature (missing {missing}, extra {extra})")
        self.signature = signature
        self.size = int(size)
        self.tables = {s: _freeze(tables[s], self.size, a, s) for s, a in signature}
        self.name = name
        self.theory = theory
        if labels is not None and len(labels) != self.size:
            raise ValueError("labels must name every element")
        self.labels = tuple(labels) if labels is not None else None

    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return (self.signature == other.signature and self.size == other.size
                and all(np.array_equal(self.tables[s], other.tables[s]) for s in self.signature.names))

    def __hash__(self):
        return hash((self.signature, self.size, self.table_key()))

    def __repr__(self):
        label = self.name or "<anon>"
        return f"FiniteAlgebra({label}, size={self.size}, ops={list(self.signature.names)})"

    def __call__(self, symbol: str, *args: int) -> int:
        return int(self.tables[symbol][args])

    def __len__(self):
        return self.size

    @property
    def elements(self) -> range:
        return range(self.size)

    def constant(self, symbol: str) -> int:
        return int(self.tables[symbol][()])

    def table_key(self) -> tuple[int, ...]:
        return tuple(int(v) for s in self.signature.names for v in self.tables[s].ravel())

    def renamed(self, name: str, theory: str | None = None) -> "FiniteAlgebra":
        return FiniteAlgebra(self.signature, self.size, self.tables, name=name,
                             theory=self.theory if theory is None else theory, labels=self.labels)

    def relabel(self, perm: Sequence[int], name: str | None = None) -> "FiniteAlgebra":
        """Return the isomorphic copy in which element ``i`` is renamed ``perm[i]``."""
        perm = np.asarray(perm, dtype=np.intp)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(self.size)
        tables = {}
        for s, a in self.signature:
            t = self.tables[s]
            tables[s] = perm[t[np.ix_(*([inv] * a))]] if a else perm[t]
        labels = None
        if self.labels is not None:
            labels = [self.labels[int(i)] for i in inv]
        return FiniteAlgebra(self.signature, self.size, tables,
                             name=self.name if name is None else name, theory=self.theory, labels=labels)

    def to_json(self) -> dict[str, Any]:
        out = {
            "name": self.name,
            "theory": self.theory,
            "size": self.size,
            "ops": {s: [int(v) for v in self.tables[s].ravel()] for s in self.signature.names},
        }
        if self.labels is not None:
            out["elements"] = [_jsonable(lab) for lab in self.labels]
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, Any], signature: Signature) -> "FiniteAlgebra":
        n = int(data["size"])
        tables = {s: np.array(data["ops"][s], dtype=np.intp).reshape((n,) * a) for s, a in signature}
        labels = data.get("elements")
        if labels is not None:
            labels = [tuple(lab) if isinstance(lab, list) else lab for lab in labels]
        return cls(signature, n, tables, name=data.get("name", ""), theory=data.get("theory", ""),
                   labels=labels)


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(u) for u in v]
    return v


def trivial_algebra(signature: Signature, name: str = "trivial", theory: str = "") -> FiniteAlgebra:
    return FiniteAlgebra(signature, 1, {s: np.zeros((1,) * a, dtype=np.intp) for s, a in signature},
                         name=name, theory=theory)


def reduct(alg: FiniteAlgebra, signature: Signature) -> FiniteAlgebra:
    """Forget every operation not in ``signature``."""
    if not alg.signature.includes(signature):
        raise SignatureError("reduct signature is not contained in the algebra's")
    return FiniteAlgebra(signature, alg.size, {s: alg.tables[s] for s in signature.names},
                         name=alg.name, labels=alg.labels)


# -- homomorphisms ---------------------------------------------------------

def preservation_failure(dom: FiniteAlgebra, cod: FiniteAlgebra, mapping: Sequence[int]):
    """Return ``(symbol, args)`` for the first tuple where ``mapping`` fails, else None."""
    h = np.asarray(mapping, dtype=np.intp)
    for s, a in dom.signature:
        src = dom.tables[s]
        tgt = cod.tables[s]
        lhs = h[src]
        rhs = tgt[np.ix_(*([h] * a))] if a else tgt
        bad = lhs != rhs
        if np.any(bad):
            idx = tuple(int(i) for i in np.argwhere(bad)[0]) if a else ()
            return s, idx
    return None


class Homomorphism:
    """A structure-preserving map, validated on construction unless ``check=False``."""

    __slots__ = ("dom", "cod", "map")

    def __init__(self, dom: FiniteAlgebra, cod: FiniteAlgebra, mapping: Sequence[int], check: bool = True):
        mapping = tuple(int(v) for v in mapping)
        if len(mapping) != dom.size:
            raise HomomorphismError(f"map has {len(mapping)} entries for a carrier of size {dom.size}")
        if any(v < 0 or v >= cod.size for v in mapping):
            raise HomomorphismError("map leaves the codomain")
        if check:
            if not cod.signature.includes(dom.signature):
                raise SignatureError("codomain does not interpret the domain signature")
            fail = preservation_failure(dom, cod, mapping)
            if fail is not None:
                sym, args = fail
                raise HomomorphismError(f"map does not preserve {sym} at {args}")
        self.dom = dom
        self.cod = cod
        self.map = mapping

    def __call__(self, a: int) -> int:
        return self.map[a]

    def __eq__(self, other):
        if not isinstance(other, Homomorphism):
            return NotImplemented
        return self.map == other.map and self.dom == other.dom and self.cod == other.cod

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        return f"Homomorphism({self.dom.name or '?'} -> {self.cod.name or '?'}, {list(self.map)})"

    def is_homomorphism(self) -> bool:
        return preservation_failure(self.dom, self.cod, self.map) is None

    @classmethod
    def identity(cls, alg: FiniteAlgebra) -> "Homomorphism":
        return cls(alg, alg, range(alg.size), check=False)

    def compose(self, first: "Homomorphism") -> "Homomorphism":
        """Return ``self o first``."""
        if first.cod.size != self.dom.size:
            raise HomomorphismError("maps are not composable")
        return Homomorphism(first.dom, self.cod, [self.map[v] for v in first.map], check=False)

    def image(self) -> frozenset[int]:
        return frozenset(self.map)

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.cod.size

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "Homomorphism":
        if not self.is_bijective():
            raise HomomorphismError("map is not bijective")
        inv = [0] * self.cod.size
        for a, b in enumerate(self.map):
            inv[b] = a
        return Homomorphism(self.cod, self.dom, inv)

    def kernel_congruence(self) -> "Congruence":
        first: dict[int, int] = {}
        reps = [first.setdefault(v, a) for a, v in enumerate(self.map)]
        return Congruence(self.dom, reps)


def kernel_class(h: Homomorphism, at: int) -> frozenset[int]:
    """Preimage of the element ``at`` of the codomain."""
    if not 0 <= at < h.cod.size:
        raise ValueError(f"{at} is not an element of the codomain")
    return frozenset(a for a, v in enumerate(h.map) if v == at)


# -- congruences -----------------------------------------------------------

class UnionFind:
    """Disjoint sets over ``0..n-1``; the root of a set is always its least element."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def normal_form(self) -> tuple[int, ...]:
        return tuple(self.find(a) for a in range(len(self.parent)))


class Congruence:
    """A partition stored as the least representative of each element's block."""

    __slots__ = ("alg", "partition")

    def __init__(self, alg: FiniteAlgebra, partition: Sequence[int], check: bool = True):
        uf = UnionFind(alg.size)
        for a, r in enumerate(partition):
            uf.union(a, int(r))
        self.alg = alg
        self.partition = uf.normal_form()
        if check and not is_compatible(alg, self.partition):
            raise ValueError("partition is not compatible with the operations")

    def __eq__(self, other):
        if not isinstance(other, Congruence):
            return NotImplemented
        return self.partition == other.partition and self.alg == other.alg

    def __hash__(self):
        return hash(self.partition)

    def __repr__(self):
        return f"Congruence({self.blocks()})"

    def related(self, a: int, b: int) -> bool:
        return self.partition[a] == self.partition[b]

    def blocks(self) -> list[tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for a, r in enumerate(self.partition):
            out.setdefault(r, []).append(a)
        return [tuple(v) for _, v in sorted(out.items())]

    def block_of(self, a: int) -> frozenset[int]:
        r = self.partition[a]
        return frozenset(b for b, s in enumerate(self.partition) if s == r)

    def __le__(self, other: "Congruence") -> bool:
        return all(other.partition[a] == other.partition[r] for a, r in enumerate(self.partition))

    def meet(self, other: "Congruence") -> "Congruence":
        first: dict[tuple[int, int], int] = {}
        reps = [first.setdefault((r, s), a) for a, (r, s) in enumerate(zip(self.partition, other.partition))]
        return Congruence(self.alg, reps, check=False)

    @classmethod
    def identity(cls, alg: FiniteAlgebra) -> "Congruence":
        return cls(alg, range(alg.size), check=False)

    @classmethod
    def full(cls, alg: FiniteAlgebra) -> "Congruence":
        return cls(alg, [0] * alg.size, check=False)


def is_compatible(alg: FiniteAlgebra, partition: Sequence[int]) -> bool:
    """True when the equivalence with block labels ``partition`` respects every operation."""
    lab = np.asarray(partition, dtype=np.intp)
    rep = np.array(_representatives(lab.tolist()), dtype=np.intp)
    for s, a in alg.signature:
        if a == 0:
            continue
        out = lab[alg.tables[s]]
        # replacing one argument at a time by its block representative suffices
        for axis in range(a):
            moved = np.moveaxis(out, axis, 0)
            if not np.array_equal(moved, moved[rep]):
                return False
    return True


def generate_congruence(alg: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least congruence containing ``pairs``.

    Worklist closure: each merged pair is pushed through every operation with
    the other arguments held fixed, until nothing new merges.
    """
    n = alg.size
    uf = UnionFind(n)
    work: list[tuple[int, int]] = []
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"pair ({a}, {b}) outside the carrier")
        if uf.union(a, b):
            work.append((a, b))
    ops = [(alg.tables[s], k) for s, k in alg.signature if k > 0]
    while work:
        a, b = work.pop()
        for table, k in ops:
            for axis in range(k):
                moved = np.moveaxis(table, axis, 0)
                for c, d in zip(moved[a].ravel().tolist(), moved[b].ravel().tolist()):
                    if uf.union(c, d):
                        work.append((c, d))
    return Congruence(alg, uf.normal_form(), check=False)


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All partitions of ``0..n-1`` as restricted growth strings."""
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(labels)
            return
        for v in range(top + 2):
            labels[i] = v
            yield from rec(i + 1, max(top, v))

    labels[0] = 0
    yield from rec(1, 0)


def _representatives(labels: Sequence[int]) -> list[int]:
    first: dict[int, int] = {}
    return [first.setdefault(v, a) for a, v in enumerate(labels)]


def all_congruences(alg: FiniteAlgebra, max_size: int = 6) -> list[Congruence]:
    """Every congruence, by brute force over set partitions (sorted canonically)."""
    if alg.size > max_size:
        raise ValueError(f"brute-force congruence enumeration limited to size {max_size}")
    out = [Congruence(alg, _representatives(rgs), check=False)
           for rgs in set_partitions(alg.size) if is_compatible(alg, rgs)]
    out.sort(key=lambda c: c.partition)
    return out


def quotient(alg: FiniteAlgebra, c: Congruence) -> tuple[FiniteAlgebra, Homomorphism]:
    reps = sorted(set(c.partition))
    index = {r: i for i, r in enumerate(reps)}
    proj = np.array([index[r] for r in c.partition], dtype=np.intp)
    rep_arr = np.array(reps, dtype=np.intp)
    tables = {}
    for s, a in alg.signature:
        t = alg.tables[s]
        tables[s] = proj[t[np.ix_(*([rep_arr] * a))]] if a else proj[t]
    labels = [c.block_of(r) for r in reps]
    q = FiniteAlgebra(alg.signature, len(reps), tables, name=f"{alg.name}/~" if alg.name else "",
                      theory=alg.theory, labels=[tuple(sorted(b)) for b in labels])
    return q, Homomorphism(alg, q, proj)


# -- subalgebras, products, pullbacks --------------------------------------

def is_closed(alg: FiniteAlgebra, subset: Iterable[int]) -> bool:
    members = np.zeros(alg.size, dtype=bool)
    idx = np.fromiter(subset, dtype=np.intp)
    members[idx] = True
    for s, a in alg.signature:
        t = alg.tables[s]
        vals = t[np.ix_(*([idx] * a))] if a else t
        if not members[vals].all():
            return False
    return True


def subalgebra(alg: FiniteAlgebra, subset: Iterable[int], name: str = "") -> tuple[FiniteAlgebra, Homomorphism]:
    """Promote a closed subset to an algebra; returns it with its inclusion map.

    Elements keep their relative order; ``labels`` records the original element
    (or its label, when ``alg`` has labels).
    """
    elems = sorted(set(int(a) for a in subset))
    if not elems:
        raise ValueError("empty subset")
    if not is_closed(alg, elems):
        raise ValueError("subset is not closed under the operations")
    index = np.full(alg.size, -1, dtype=np.intp)
    index[elems] = np.arange(len(elems))
    idx = np.array(elems, dtype=np.intp)
    tables = {}
    for s, a in alg.signature:
        t = alg.tables[s]
        tables[s] = index[t[np.ix_(*([idx] * a))]] if a else index[t]
    labels = [alg.labels[e] if alg.labels is not None else e for e in elems]
    sub = FiniteAlgebra(alg.signature, len(elems), tables, name=name, theory=alg.theory, labels=labels)
    return sub, Homomorphism(sub, alg, elems)


def _pair_table(ta: np.ndarray, tb: np.ndarray, nb: int) -> np.ndarray:
    k = ta.ndim
    combined = np.add.outer(ta * nb, tb)
    order = [ax for i in range(k) for ax in (i, k + i)]
    combined = combined.transpose(order)
    na = ta.shape[0] if k else 1
    return combined.reshape((na * nb,) * k) if k else combined


def product(a: FiniteAlgebra, b: FiniteAlgebra, name: str = "") -> tuple[FiniteAlgebra, Homomorphism, Homomorphism]:
    """Direct product with its two projections; ``(i, j)`` is element ``i*|b| + j``."""
    if a.signature != b.signature:
        raise SignatureError("product of algebras with different signatures")
    nb = b.size
    tables = {s: _pair_table(a.tables[s], b.tables[s], nb) for s in a.signature.names}
    la = a.labels if a.labels is not None else range(a.size)
    lb = b.labels if b.labels is not None else range(b.size)
    labels = [(i, j) for i in la for j in lb]
    if not name and a.name and b.name:
        name = f"{a.name}x{b.name}"
    p = FiniteAlgebra(a.signature, a.size * nb, tables, name=name, theory=a.theory, labels=labels)
    p1 = Homomorphism(p, a, [i // nb for i in range(p.size)], check=False)
    p2 = Homomorphism(p, b, [i % nb for i in range(p.size)], check=False)
    return p, p1, p2


def power(a: FiniteAlgebra, k: int, name: str = "") -> FiniteAlgebra:
    if k < 1:
        raise ValueError("power needs k >= 1")
    out = a
    for _ in range(k - 1):
        out = product(out, a)[0]
    labels = list(itertools.product(range(a.size), repeat=k)) if k > 1 else None
    return FiniteAlgebra(a.signature, out.size, out.tables, name=name or out.name, theory=a.theory, labels=labels)


def pullback(f: Homomorphism, g: Homomorphism, name: str = "") -> tuple[FiniteAlgebra, Homomorphism, Homomorphism]:
    """Pullback of ``f: A -> C`` and ``g: B -> C`` as a subalgebra of ``A x B``."""
    if f.cod != g.cod:
        raise ValueError("pullback needs a common codomain")
    prod, _, _ = product(f.dom, g.dom)
    nb = g.dom.size
    members = [i * nb + j for i in range(f.dom.size) for j in range(nb) if f.map[i] == g.map[j]]
    sub, _ = subalgebra(prod, members, name=name)
    p1 = Homomorphism(sub, f.dom, [m // nb for m in members])
    p2 = Homomorphism(sub, g.dom, [m % nb for m in members])
    return sub, p1, p2


@dataclass(frozen=True)
class Point:
    """A split epimorphism ``proj: total -> base`` with chosen section ``sect``."""

    total: FiniteAlgebra
    base: FiniteAlgebra
    proj: Homomorphism
    sect: Homomorphism

    def __post_init__(self):
        if self.proj.dom != self.total or self.proj.cod != self.base:
            raise PointError("projection must go from total to base")
        if self.sect.dom != self.base or self.sect.cod != self.total:
            raise PointError("section must go from base to total")
        for j in range(self.base.size):
            if self.proj.map[self.sect.map[j]] != j:
                raise PointError(f"proj o sect differs from the identity at {j}")


def pullback_point(pt: Point, g: Homomorphism) -> Point:
    """Change of base of ``pt`` along ``g: J' -> J``."""
    if g.cod != pt.base:
        raise PointError("g must land in the base of the point")
    total, pi1, pi2 = pullback(g, pt.proj)
    lookup = {(a, b): k for k, (a, b) in enumerate(zip(pi1.map, pi2.map))}
    sect = Homomorphism(g.dom, total, [lookup[(j, pt.sect.map[g.map[j]])] for j in range(g.dom.size)])
    return Point(total, g.dom, pi1, sect)


def is_point_morphism(h: Homomorphism, src: Point, dst: Point) -> bool:
    """``h`` between totals commutes with projections and sections (over the same base)."""
    return (all(dst.proj.map[h.map[b]] == src.proj.map[b] for b in range(src.total.size))
            and all(h.map[src.sect.map[j]] == dst.sect.map[j] for j in range(src.base.size)))


def tuples(n: int, k: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(n), repeat=k)

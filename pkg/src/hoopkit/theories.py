"""Built-in theories (hoops, MV-algebras, rings, Boolean algebras) and model families.

MV-algebras use the symbols ``oplus/2, neg/1, zero/0``; hoops use
``dot/2, imp/2, one/0``; rings use ``add/2, neg/1, zero/0, mul/2`` plus
``one/0`` when unital; Boolean algebras use ``join/2, meet/2, compl/1,
bot/0, top/0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from hoopkit.algebra import FiniteAlgebra, power, product
from hoopkit.parsing import parse_theory
from hoopkit.terms import App, Equation, Term, Theory, Var, check_theory


class TheoryError(ValueError):
    """An algebra fails an axiom it is required to satisfy."""


class InconsistencyError(AssertionError):
    """Two characterisations that must agree disagree on some input."""


def _labelled(th: Theory, labels: list[str]) -> Theory:
    assert len(labels) == len(th.equations), th.name
    eqs = tuple(Equation(e.lhs, e.rhs, lab) for e, lab in zip(th.equations, labels))
    return Theory(th.name, th.signature, eqs, th.point_constant)


HOOP_TEXT = """
theory hoop {
  op dot/2, imp/2, one/0;
  point one;
  eq dot(x, y) = dot(y, x);
  eq dot(dot(x, y), z) = dot(x, dot(y, z));
  eq dot(x, one) = x;
  eq imp(x, x) = one;
  eq dot(x, imp(x, y)) = dot(y, imp(y, x));
  eq imp(dot(x, y), z) = imp(x, imp(y, z));
}
"""
_HOOP_LABELS = ["H1-comm", "H1-assoc", "H1-unit", "H2", "H3", "H4"]

MV_TEXT = """
theory mv {
  op oplus/2, neg/1, zero/0;
  point zero;
  eq oplus(x, y) = oplus(y, x);
  eq oplus(oplus(x, y), z) = oplus(x, oplus(y, z));
  eq oplus(x, zero) = x;
  eq neg(neg(x)) = x;
  eq oplus(x, neg(zero)) = neg(zero);
  eq oplus(neg(oplus(neg(x), y)), y) = oplus(neg(oplus(neg(y), x)), x);
}
"""
_MV_LABELS = ["M-comm", "M-assoc", "M-unit", "MV1", "MV2", "MV3"]

# MV signature extended by the derived operations, with their defining terms
# and the derived identities.
MV_DERIVED_TEXT = """
theory mvx {
  op oplus/2, neg/1, zero/0, one/0, odot/2, imp/2, join/2, meet/2;
  point zero;
  eq one = neg(zero);
  eq odot(x, y) = neg(oplus(neg(x), neg(y)));
  eq imp(x, y) = oplus(neg(x), y);
  eq join(x, y) = oplus(neg(oplus(neg(x), y)), y);
  eq meet(x, y) = odot(x, oplus(neg(x), y));
  eq neg(one) = zero;
  eq oplus(x, one) = one;
  eq oplus(x, neg(x)) = one;
  eq neg(x) = imp(x, zero);
}
"""
_MV_DERIVED_LABELS = ["def-one", "def-odot", "def-imp", "def-join", "def-meet",
                      "neg-one", "oplus-one", "oplus-neg", "neg-imp"]

LATTICE_TEXT = """
theory bdlat {
  op join/2, meet/2, zero/0, one/0;
  eq join(x, y) = join(y, x);
  eq meet(x, y) = meet(y, x);
  eq join(join(x, y), z) = join(x, join(y, z));
  eq meet(meet(x, y), z) = meet(x, meet(y, z));
  eq join(x, meet(x, y)) = x;
  eq meet(x, join(x, y)) = x;
  eq meet(x, join(y, z)) = join(meet(x, y), meet(x, z));
  eq join(x, zero) = x;
  eq meet(x, one) = x;
}
"""
_LATTICE_LABELS = ["join-comm", "meet-comm", "join-assoc", "meet-assoc", "absorb-1", "absorb-2",
                   "distributive", "bottom", "top"]

CRNG_TEXT = """
theory crng {
  op add/2, neg/1, zero/0, mul/2;
  point zero;
  eq add(x, y) = add(y, x);
  eq add(add(x, y), z) = add(x, add(y, z));
  eq add(x, zero) = x;
  eq add(x, neg(x)) = zero;
  eq mul(x, y) = mul(y, x);
  eq mul(mul(x, y), z) = mul(x, mul(y, z));
  eq mul(x, add(y, z)) = add(mul(x, y), mul(x, z));
}
"""
_CRNG_LABELS = ["add-comm", "add-assoc", "add-zero", "add-inverse", "mul-comm", "mul-assoc", "distributive"]

BOOALG_TEXT = """
theory booalg {
  op join/2, meet/2, compl/1, bot/0, top/0;
  point bot;
  eq join(x, y) = join(y, x);
  eq meet(x, y) = meet(y, x);
  eq join(join(x, y), z) = join(x, join(y, z));
  eq meet(meet(x, y), z) = meet(x, meet(y, z));
  eq join(x, meet(x, y)) = x;
  eq meet(x, join(x, y)) = x;
  eq meet(x, join(y, z)) = join(meet(x, y), meet(x, z));
  eq join(x, bot) = x;
  eq meet(x, top) = x;
  eq join(x, compl(x)) = top;
  eq meet(x, compl(x)) = bot;
}
"""
_BOOALG_LABELS = _LATTICE_LABELS + ["complement-join", "complement-meet"]

x, y, z = Var(0), Var(1), Var(2)

HOOP = _labelled(parse_theory(HOOP_TEXT), _HOOP_LABELS)
WHOOP = HOOP.extend("whoop", [Equation(App("imp", (App("imp", (x, y)), y)),
                                       App("imp", (App("imp", (y, x)), x)), "W")])
IDEMHOOP = HOOP.extend("idemhoop", [Equation(App("dot", (x, x)), x, "I")])
MV = _labelled(parse_theory(MV_TEXT), _MV_LABELS)
MV_DERIVED = _labelled(parse_theory(MV_DERIVED_TEXT), _MV_DERIVED_LABELS)
BOUNDED_DISTRIBUTIVE_LATTICE = _labelled(parse_theory(LATTICE_TEXT), _LATTICE_LABELS)
CRNG = _labelled(parse_theory(CRNG_TEXT), _CRNG_LABELS)
CRING = CRNG.extend("cring", [Equation(App("mul", (x, App("one"))), x, "mul-one")], [("one", 0)])
BOOLEAN_RNG = CRNG.extend("boolean_rng", [Equation(App("mul", (x, x)), x, "idempotent")])
BOORNG = CRING.extend("boorng", [Equation(App("mul", (x, x)), x, "idempotent")])
BOOALG = _labelled(parse_theory(BOOALG_TEXT), _BOOALG_LABELS)

CATALOG: dict[str, Theory] = {
    th.name: th for th in (HOOP, WHOOP, IDEMHOOP, MV, CRNG, CRING, BOOLEAN_RNG, BOORNG, BOOALG)
}
ALIASES = {"hoops": "hoop", "whoops": "whoop", "wajsberg": "whoop", "idemhoops": "idemhoop",
           "mvalg": "mv", "rng": "crng", "ring": "cring"}


def get_theory(name: str) -> Theory:
    key = ALIASES.get(name, name)
    try:
        return CATALOG[key]
    except KeyError:
        raise KeyError(f"unknown theory {name!r}; known: {sorted(CATALOG)}") from None


def require(alg: FiniteAlgebra, th: Theory) -> None:
    """Raise :class:`TheoryError` with the first counterexample if ``alg`` fails ``th``."""
    for v in check_theory(alg, th):
        if not v.ok:
            raise TheoryError(f"{alg.name or 'algebra'} fails {th.name}: {v.counterexample}")


def satisfies(alg: FiniteAlgebra, th: Theory) -> bool:
    return alg.signature.includes(th.signature) and all(v.ok for v in check_theory(alg, th))


# -- families ----------------------------------------------------------------

def lukasiewicz_chain(n: int) -> FiniteAlgebra:
    """The n-element MV-chain; element ``i`` stands for ``i/(n-1)``."""
    if n < 2:
        raise ValueError("Lukasiewicz chains need n >= 2")
    top = n - 1
    a = np.arange(n)
    oplus = np.minimum(top, a[:, None] + a[None, :])
    neg = top - a
    return FiniteAlgebra(MV.signature, n, {"oplus": oplus, "neg": neg, "zero": 0},
                         name=f"L{n}", theory="mv")


def boolean_cube(k: int) -> FiniteAlgebra:
    """``L2 ** k`` as an MV-algebra (the Boolean algebra with 2**k elements)."""
    if k < 1:
        raise ValueError("boolean_cube needs k >= 1")
    return power(lukasiewicz_chain(2), k, name=f"B{2 ** k}")


def integers_mod(m: int, unital: bool = True) -> FiniteAlgebra:
    if m < 1:
        raise ValueError("modulus must be positive")
    a = np.arange(m)
    tables = {"add": (a[:, None] + a[None, :]) % m, "neg": (-a) % m, "zero": 0,
              "mul": (a[:, None] * a[None, :]) % m}
    if unital:
        tables["one"] = 1 % m
    th = CRING if unital else CRNG
    return FiniteAlgebra(th.signature, m, tables, name=f"Z{m}", theory=th.name)


def zero_ring(n: int = 2) -> FiniteAlgebra:
    """``Z_n`` with the zero multiplication, as a rng."""
    a = np.arange(n)
    return FiniteAlgebra(CRNG.signature, n, {"add": (a[:, None] + a[None, :]) % n, "neg": (-a) % n,
                                             "zero": 0, "mul": np.zeros((n, n), dtype=np.intp)},
                         name=f"Z{n}^0", theory="crng")


def mv_product(a: FiniteAlgebra, b: FiniteAlgebra) -> FiniteAlgebra:
    return product(a, b)[0]


# -- MV derived structure ----------------------------------------------------

@dataclass(frozen=True)
class MVDerived:
    algebra: FiniteAlgebra  # MV signature extended by one, odot, imp, join, meet

    @property
    def tables(self) -> dict[str, np.ndarray]:
        return {s: self.algebra.tables[s] for s in ("one", "odot", "imp", "join", "meet")}

    def __getitem__(self, key: str) -> np.ndarray:
        return self.algebra.tables[key]


def derived_mv_ops(alg: FiniteAlgebra) -> MVDerived:
    """Tables of ``1, odot, imp, join, meet`` with the derived identities checked."""
    require(alg, MV)
    o, ng, zero = alg.tables["oplus"], alg.tables["neg"], alg.constant("zero")
    one = int(ng[zero])
    odot = ng[o[ng[:, None], ng[None, :]]]
    imp = o[ng[:, None], np.arange(alg.size)[None, :]]
    join = o[ng[imp], np.arange(alg.size)[None, :]]
    meet = odot[np.arange(alg.size)[:, None], imp]
    ext = FiniteAlgebra(MV_DERIVED.signature, alg.size,
                        {"oplus": o, "neg": ng, "zero": zero, "one": one, "odot": odot,
                         "imp": imp, "join": join, "meet": meet},
                        name=alg.name, theory="mvx", labels=alg.labels)
    require(ext, MV_DERIVED)
    lattice = FiniteAlgebra(BOUNDED_DISTRIBUTIVE_LATTICE.signature, alg.size,
                            {"join": join, "meet": meet, "zero": zero, "one": one})
    require(lattice, BOUNDED_DISTRIBUTIVE_LATTICE)
    return MVDerived(ext)


def mv_order(alg: FiniteAlgebra) -> np.ndarray:
    """Boolean matrix ``R[x, y] = (x <= y)``, cross-checked against four characterisations."""
    d = derived_mv_ops(alg)
    n = alg.size
    zero, one = alg.constant("zero"), int(d["one"])
    o1 = d["meet"] == np.arange(n)[:, None]
    o2 = np.zeros((n, n), dtype=bool)
    for a in range(n):
        o2[a, alg.tables["oplus"][a]] = True
    o3 = d["imp"] == one
    o4 = d["odot"][np.arange(n)[:, None], alg.tables["neg"][None, :]] == zero
    names = {"O1": o1, "O2": o2, "O3": o3, "O4": o4}
    keys = list(names)
    for i, p in enumerate(keys):
        for q in keys[i + 1:]:
            bad = np.argwhere(names[p] != names[q])
            if bad.size:
                a, b = (int(v) for v in bad[0])
                raise InconsistencyError(f"{p} and {q} disagree on ({a}, {b}) in {alg.name}")
    return o3


HOOP_SIGNATURE = HOOP.signature


def hoop_reduct(alg: FiniteAlgebra) -> FiniteAlgebra:
    """The Wajsberg hoop ``(A; odot, imp, 1)`` underlying an MV-algebra."""
    o, ng = alg.tables["oplus"], alg.tables["neg"]
    n = alg.size
    dot = ng[o[ng[:, None], ng[None, :]]]
    imp = o[ng[:, None], np.arange(n)[None, :]]
    one = int(ng[alg.constant("zero")])
    return FiniteAlgebra(HOOP_SIGNATURE, n, {"dot": dot, "imp": imp, "one": one},
                         name=f"U({alg.name})" if alg.name else "", theory="whoop", labels=alg.labels)


def hoop_order(alg: FiniteAlgebra) -> np.ndarray:
    """``R[x, y] = (x -> y == 1)``, checked against divisibility with witness ``y -> x``."""
    n = alg.size
    dot, imp, one = alg.tables["dot"], alg.tables["imp"], alg.constant("one")
    rel = imp == one
    elems = np.arange(n)
    divides = np.zeros((n, n), dtype=bool)
    for u in range(n):
        divides |= dot[u][None, :] == elems[:, None]  # x == u . y
    witness = dot[imp.T, elems[None, :]] == elems[:, None]  # x == (y -> x) . y
    for name, other in (("divisibility", divides), ("witness y->x", witness)):
        bad = np.argwhere(rel != other)
        if bad.size:
            a, b = (int(v) for v in bad[0])
            raise InconsistencyError(f"order and {name} disagree on ({a}, {b}) in {alg.name}")
    return rel


def top_element(alg: FiniteAlgebra) -> int:
    if "one" in alg.signature:
        return alg.constant("one")
    return int(alg.tables["neg"][alg.constant("zero")])


# -- Boolean rings vs Boolean algebras ---------------------------------------

def boolean_translation(ring: FiniteAlgebra) -> FiniteAlgebra:
    """Unital Boolean ring -> Boolean algebra via ``x v y = x+xy+y``, ``x ^ y = xy``."""
    require(ring, BOORNG)
    add, mul = ring.tables["add"], ring.tables["mul"]
    n = ring.size
    a = np.arange(n)
    join = add[add[a[:, None], mul], a[None, :]]
    compl = add[ring.constant("one"), a]
    alg = FiniteAlgebra(BOOALG.signature, n, {"join": join, "meet": mul, "compl": compl,
                                              "bot": ring.constant("zero"), "top": ring.constant("one")},
                        name=ring.name, theory="booalg", labels=ring.labels)
    require(alg, BOOALG)
    return alg


def boolean_ring_of(alg: FiniteAlgebra) -> FiniteAlgebra:
    """Boolean algebra -> unital Boolean ring via ``x+y = (x ^ -y) v (-x ^ y)``."""
    require(alg, BOOALG)
    join, meet, c = alg.tables["join"], alg.tables["meet"], alg.tables["compl"]
    n = alg.size
    a = np.arange(n)
    add = join[meet[a[:, None], c[None, :]], meet[c[:, None], a[None, :]]]
    ring = FiniteAlgebra(BOORNG.signature, n, {"add": add, "neg": a, "zero": alg.constant("bot"),
                                               "mul": meet, "one": alg.constant("top")},
                         name=alg.name, theory="boorng", labels=alg.labels)
    require(ring, BOORNG)
    return ring


# -- idempotent hoops as Brouwerian semilattices ------------------------------

@dataclass(frozen=True)
class BrouwerianView:
    meet: np.ndarray
    imp: np.ndarray
    top: int
    order: np.ndarray


def brouwerian_meet(alg: FiniteAlgebra) -> BrouwerianView:
    """Read an idempotent hoop as a meet-semilattice with relative pseudocomplement."""
    require(alg, IDEMHOOP)
    n = alg.size
    meet, imp, one = alg.tables["dot"], alg.tables["imp"], alg.constant("one")
    a = np.arange(n)
    if not np.array_equal(meet[meet[:, :, None], a[None, None, :]], meet[a[:, None, None], meet[None, :, :]]):
        raise InconsistencyError("meet is not associative")
    if not np.array_equal(meet, meet.T):
        raise InconsistencyError("meet is not commutative")
    if not np.array_equal(meet[a, a], a) or not np.array_equal(meet[:, one], a):
        raise InconsistencyError("meet is not idempotent with unit 1")
    order = meet == a[:, None]  # x <= y iff x ^ y = x
    if not np.array_equal(order, hoop_order(alg)):
        raise InconsistencyError("semilattice order differs from the hoop order")
    # x ^ y <= z  iff  x <= y -> z
    lhs = order[meet[:, :, None], a[None, None, :]]
    rhs = order[a[:, None, None], imp[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        raise InconsistencyError(f"residuation fails at {tuple(int(v) for v in bad[0])}")
    return BrouwerianView(meet, imp, one, order)


# -- term translations ---------------------------------------------------------

HOOP_IN_MV: Mapping[str, Term] = {
    "dot": App("neg", (App("oplus", (App("neg", (x,)), App("neg", (y,)))),)),
    "imp": App("oplus", (App("neg", (x,)), y)),
    "one": App("neg", (App("zero"),)),
}


def translate_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Replace each operation symbol by its defining term (arguments bound to x0, x1, ...)."""
    if isinstance(t, Var):
        return t
    assert isinstance(t, App)
    args = tuple(translate_term(a, mapping) for a in t.args)
    if t.symbol not in mapping:
        return App(t.symbol, args)
    return mapping[t.symbol].substitute(dict(enumerate(args)))


def translate_theory(th: Theory, mapping: Mapping[str, Term], target: Theory, name: str) -> Theory:
    eqs = [Equation(translate_term(e.lhs, mapping), translate_term(e.rhs, mapping), e.label)
           for e in th.equations]
    return Theory(name, target.signature, tuple(eqs), target.point_constant)


def idempotent_two_chain() -> FiniteAlgebra:
    """The 2-element hoop ``{a < 1}`` with ``a = 0`` and ``1 = 1``."""
    return hoop_reduct(lukasiewicz_chain(2)).renamed("C2", theory="idemhoop")

"""The eight exit criteria, each run end to end with its own corpus and time budget."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from hoopkit import corpus as cp
from hoopkit.algebra import (Congruence, FiniteAlgebra, Homomorphism, all_congruences, generate_congruence,
                             preservation_failure, product, pullback)
from hoopkit.equivalence import (check_bj_witness, check_maltsev, hoop_witness,
                                 points_over_l2, roundtrip_hoop, roundtrip_point)
from hoopkit.ideals import (EmptySubsetError, filter_congruence_bijection, is_filter, is_relative_u_ideal,
                            is_ring_ideal, negation_duality)
from hoopkit.search import all_homomorphisms, find_isomorphism
from hoopkit.terms import check_theory
from hoopkit.theories import (CRING, MV, WHOOP, boolean_ring_of, boolean_translation, derived_mv_ops,
                              hoop_reduct, lukasiewicz_chain, mv_order)
from hoopkit.unitalisation import (additive_exponent, check_augmentation, dorroh, dorroh_quotient,
                                   hoop_sum, mv_closure)


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    seconds: float
    budget: float | None
    failures: list[str] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    setup_seconds: float = 0.0

    @property
    def within_budget(self) -> bool:
        return self.budget is None or self.seconds < self.budget

    @property
    def passed(self) -> bool:
        return self.ok and self.within_budget

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (< {self.budget:g} s)" if self.budget is not None else ""
        if self.setup_seconds >= 0.005:
            budget += f" after {self.setup_seconds:.2f} s corpus setup"
        extra = f" [{self.failures[0]}]" if self.failures else ""
        return f"{status} criterion {self.number}: {self.title} in {self.seconds:.2f} s{budget}{extra}"

    def to_json(self) -> dict[str, Any]:
        return {"number": self.number, "title": self.title, "ok": self.passed, "seconds": round(self.seconds, 3),
                "setup_seconds": round(self.setup_seconds, 3),
                "budget": self.budget, "failures": self.failures, "counts": self.counts}


def _run(number: int, title: str, budget: float | None, body: Callable[..., None],
         setup: Callable[[], Any] | None = None) -> CriterionResult:
    """Time ``body``; ``setup`` (corpus construction) runs first and is timed separately.

    Criteria whose budget includes model search do their search inside ``body``.
    """
    failures: list[str] = []
    counts: dict[str, int] = {}
    cp.models.cache_clear()  # no criterion inherits another's model search
    t0 = time.perf_counter()
    start = t0
    try:
        if setup is None:
            body(failures, counts)
        else:
            data = setup()
            start = time.perf_counter()
            body(failures, counts, data)
    except Exception as exc:  # a crash is a failed criterion, reported with its message
        failures.append(f"{type(exc).__name__}: {exc}")
    end = time.perf_counter()
    return CriterionResult(number, title, not failures, end - start, budget, failures, counts,
                           setup_seconds=start - t0)


# -- 1 -------------------------------------------------------------------------------

def axiom_suites() -> CriterionResult:
    def body(failures, counts):
        for n in (2, 3, 4, 5):
            L = lukasiewicz_chain(n)
            for v in check_theory(hoop_reduct(L), WHOOP):
                if not v.ok:
                    failures.append(f"U(L{n}) fails {v.counterexample}")
            for v in check_theory(L, MV):
                if not v.ok:
                    failures.append(f"L{n} fails {v.counterexample}")
            derived_mv_ops(L)  # raises on any failing derived identity
            counts["chains"] = counts.get("chains", 0) + 1
    return _run(1, "axiom suites on L2..L5 and their hoop reducts", 1.0, body)


# -- 2 -------------------------------------------------------------------------------

def semi_abelian_witness() -> CriterionResult:
    def body(failures, counts):
        hoops = cp.models_upto("hoop", 4) + cp.chain_reducts(range(2, 6))
        counts["hoops"] = len(hoops)
        for check in (check_bj_witness(hoop_witness(), hoops), check_maltsev(hoops)):
            if not check.ok:
                failures.append(str(check.counterexample))
    return _run(2, "Bourn-Janelidze witness and Mal'tsev term on hoops", 30.0, body)


# -- 3 -------------------------------------------------------------------------------

def _u_ideal_agrees(B: FiniteAlgebra, subset: frozenset[int]) -> bool:
    hoop = hoop_reduct(B)
    try:
        verdict = is_relative_u_ideal(B, subset).ok
    except EmptySubsetError:
        verdict = None
    try:
        filt = is_filter(hoop, subset)
    except EmptySubsetError:
        filt = None
    return verdict == filt


def ideal_determination() -> CriterionResult:
    def setup():
        return cp.models_upto("hoop", 4), cp.models_upto("mv", 4)

    def body(failures, counts, data):
        hoops, mvs = data
        for h in hoops:
            filter_congruence_bijection(h)
        counts["hoops"] = len(hoops)
        counts["mv_algebras"] = len(mvs)
        counts["subsets"] = 0
        for B in mvs:
            for bits in range(2 ** B.size):
                subset = frozenset(i for i in range(B.size) if bits >> i & 1)
                counts["subsets"] += 1
                if not _u_ideal_agrees(B, subset):
                    failures.append(f"{B.name}: U-ideal and filter disagree on {sorted(subset)}")
    return _run(3, "filters vs congruences; U-ideals vs filters", 10.0, body, setup)


# -- 4 -------------------------------------------------------------------------------

def closure_correctness(W: FiniteAlgebra) -> list[str]:
    out = []
    cr = mv_closure(W)
    M = cr.output
    if not all(v.ok for v in check_theory(M, MV)):
        out.append(f"M({W.name}) fails MV")
    if M.size != 2 * W.size:
        out.append(f"|M({W.name})| = {M.size}")
    if not cr.unit.is_injective() or not cr.unit.is_homomorphism():
        out.append(f"unit of {W.name} is not an injective hoop homomorphism")
    tag1 = np.arange(W.size) * 2 + 1
    restricted = M.tables["oplus"][np.ix_(tag1, tag1)]
    if not np.array_equal(restricted, 2 * hoop_sum(W) + 1):
        out.append(f"oplus on tag 1 differs from the hoop sum for {W.name}")
    if not check_augmentation(cr).ok:
        out.append(f"augmentation fails for {W.name}")
    return out


def mv_closure_suite() -> CriterionResult:
    def body(failures, counts, corpus):
        counts["hoops"] = len(corpus)
        for W in corpus:
            failures.extend(closure_correctness(W))
    return _run(4, "MV-closure correctness and augmentation", 5.0, body, cp.wajsberg_corpus)


# -- 5 -------------------------------------------------------------------------------

def generated_points(max_total: int = 8):
    totals = cp.chain_products(max_total)
    totals += [mv_closure(W).output for W in cp.wajsberg_corpus() if 2 * W.size <= max_total]
    for T in totals:
        yield from points_over_l2(T)


def equivalence_round_trips() -> CriterionResult:
    def body(failures, counts, corpus):
        for W in corpus:
            if not roundtrip_hoop(W).ok:
                failures.append(f"K(M({W.name})) is not isomorphic to {W.name}")
        counts["hoops"] = len(corpus)
        counts["points"] = 0
        for pt in generated_points(8):
            counts["points"] += 1
            if not roundtrip_point(pt).ok:
                failures.append(f"point on {pt.total.name} does not round-trip")
        L2 = lukasiewicz_chain(2)
        for n in (2, 3, 4):
            L = lukasiewicz_chain(n)
            if find_isomorphism(mv_closure(hoop_reduct(L)).output, product(L, L2)[0]) is None:
                failures.append(f"M(U(L{n})) is not L{n} x L2")
    return _run(5, "kernel functor round trips", 10.0, body, cp.wajsberg_corpus)


# -- 6 -------------------------------------------------------------------------------

def mv_corpus() -> list[FiniteAlgebra]:
    return cp.models_upto("mv", 5) + cp.chain_products(8)


def duality_and_order() -> CriterionResult:
    def body(failures, counts, algs):
        counts["mv_algebras"] = len(algs)
        for A in algs:
            negation_duality(A)
            mv_order(A)
    return _run(6, "negation duality and O1-O4", 2.0, body, mv_corpus)


# -- 7 -------------------------------------------------------------------------------

def dorroh_checks(R: FiniteAlgebra, m: int) -> list[str]:
    out = []
    cr = dorroh(R, m)
    S = cr.output
    if not all(v.ok for v in check_theory(S, CRING)):
        out.append(f"D({R.name},{m}) fails unital ring axioms")
    unit = R.constant("zero") * m + 1 % m
    if S.constant("one") != unit or not np.array_equal(S.tables["mul"][unit], np.arange(S.size)):
        out.append(f"(0,1) is not the unit of D({R.name},{m})")
    if not is_ring_ideal(S, cr.unit.image()):
        out.append(f"copy of {R.name} is not an ideal")
    if dorroh_quotient(cr)[1] is None:
        out.append(f"D({R.name},{m}) / {R.name} is not Z{m}")
    return out


def dorroh_boolean() -> CriterionResult:
    def body(failures, counts):
        rngs = cp.models_upto("crng", 4)
        counts["rngs"] = len(rngs)
        counts["extensions"] = 0
        for R in rngs:
            e = additive_exponent(R)
            for m in range(1, 5):
                if m % e == 0:
                    counts["extensions"] += 1
                    failures.extend(dorroh_checks(R, m))
        rings = cp.models_upto("boorng", 4)
        counts["boolean_rings"] = len(rings)
        for R in rings:
            if boolean_ring_of(boolean_translation(R)) != R:
                failures.append(f"ring round trip changes {R.name}")
        for A in cp.models_upto("booalg", 4):
            if boolean_translation(boolean_ring_of(A)) != A:
                failures.append(f"algebra round trip changes {A.name}")
    return _run(7, "Dorroh extensions and Boolean translations", 60.0, body)


# -- 8 -------------------------------------------------------------------------------

def congruence_oracle(alg: FiniteAlgebra, pairs) -> Congruence:
    """Intersection of every congruence containing ``pairs`` (brute force)."""
    out = Congruence.full(alg)
    for c in all_congruences(alg):
        if all(c.related(a, b) for a, b in pairs):
            out = out.meet(c)
    return out


def oracle_algebras() -> list[FiniteAlgebra]:
    algs = (cp.models_upto("hoop", 4) + cp.models_upto("mv", 5) + cp.models_upto("crng", 4)
            + cp.models_upto("booalg", 4) + cp.chain_reducts(range(2, 6)))
    return [a for a in algs if a.size <= 5]


def pullback_triples(limit: int = 20) -> list[tuple[Homomorphism, Homomorphism]]:
    small = [a for a in cp.models_upto("hoop", 3)] + [lukasiewicz_chain(2), lukasiewicz_chain(3)] + \
        [a for a in cp.models_upto("mv", 4) if a.size == 4]
    triples = []
    for A, B, C in itertools.product(small, repeat=3):
        if A.signature != C.signature or B.signature != C.signature:
            continue
        for f in all_homomorphisms(A, C):
            for g in all_homomorphisms(B, C):
                triples.append((f, g))
    step = max(1, len(triples) // limit)
    return triples[::step][:limit]


def universal_property(f: Homomorphism, g: Homomorphism, tests: list[FiniteAlgebra]) -> list[str]:
    """Every cone ``(u, v)`` from a test algebra factors through the pullback exactly once."""
    P, p1, p2 = pullback(f, g)
    out = []
    for D in tests:
        if D.signature != P.signature:
            continue
        maps = [m for m in itertools.product(range(P.size), repeat=D.size)
                if preservation_failure(D, P, m) is None]
        for u in all_homomorphisms(D, f.dom):
            for v in all_homomorphisms(D, g.dom):
                if any(f.map[a] != g.map[b] for a, b in zip(u.map, v.map)):
                    continue
                mediating = [m for m in maps
                             if all(p1.map[m[d]] == u.map[d] and p2.map[m[d]] == v.map[d] for d in range(D.size))]
                if len(mediating) != 1:
                    out.append(f"{len(mediating)} mediating maps from {D.name}")
    return out


def oracle_equivalences() -> CriterionResult:
    def body(failures, counts):
        algs = oracle_algebras()
        counts["algebras"] = len(algs)
        counts["generator_sets"] = 0
        for A in algs:
            elems = range(A.size)
            single = [[(a, b)] for a in elems for b in elems if a < b]
            double = [list(p) for p in itertools.combinations([(a, b) for a in elems for b in elems if a < b], 2)]
            for pairs in [[]] + single + double:
                counts["generator_sets"] += 1
                if generate_congruence(A, pairs) != congruence_oracle(A, pairs):
                    failures.append(f"{A.name}: generated congruence differs from oracle for {pairs}")
        triples = pullback_triples(20)
        counts["pullback_triples"] = len(triples)
        tests = cp.models_upto("hoop", 2) + [lukasiewicz_chain(2), lukasiewicz_chain(3)] + \
            [a for a in cp.models_upto("hoop", 3) if a.size == 3]
        for f, g in triples:
            failures.extend(universal_property(f, g, tests))
    return _run(8, "congruence and pullback oracles", None, body)


CRITERIA: list[Callable[[], CriterionResult]] = [
    axiom_suites, semi_abelian_witness, ideal_determination, mv_closure_suite,
    equivalence_round_trips, duality_and_order, dorroh_boolean, oracle_equivalences,
]


def run_all(select: list[int] | None = None) -> list[CriterionResult]:
    return [c() for i, c in enumerate(CRITERIA, 1) if select is None or i in select]

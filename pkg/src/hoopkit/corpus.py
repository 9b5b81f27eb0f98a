"""Named collections of finite algebras used by the checks and the command line."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from hoopkit.algebra import FiniteAlgebra, product
from hoopkit.parsing import parse_document
from hoopkit.search import find_isomorphism, find_models
from hoopkit.terms import check_theory
from hoopkit.theories import get_theory, hoop_reduct, lukasiewicz_chain


class CorpusError(ValueError):
    pass


@lru_cache(maxsize=None)
def models(theory: str, n: int) -> tuple[FiniteAlgebra, ...]:
    return tuple(find_models(get_theory(theory), n))


def models_upto(theory: str, n: int) -> list[FiniteAlgebra]:
    return [m for k in range(1, n + 1) for m in models(theory, k)]


def chains(ns: Iterable[int]) -> list[FiniteAlgebra]:
    return [lukasiewicz_chain(n) for n in ns]


def chain_reducts(ns: Iterable[int]) -> list[FiniteAlgebra]:
    return [hoop_reduct(lukasiewicz_chain(n)).renamed(f"U(L{n})", theory="whoop") for n in ns]


def _factorisations(n: int, least: int = 2) -> list[tuple[int, ...]]:
    if n == 1:
        return [()]
    out = []
    for f in range(least, n + 1):
        if n % f == 0:
            out.extend((f,) + rest for rest in _factorisations(n // f, f))
    return out


def chain_products(max_size: int) -> list[FiniteAlgebra]:
    """Products of Lukasiewicz chains of total size at most ``max_size`` (one per multiset)."""
    out = []
    for n in range(2, max_size + 1):
        for factors in _factorisations(n):
            desc = factors[::-1]
            alg = lukasiewicz_chain(desc[0])
            for f in desc[1:]:
                alg = product(alg, lukasiewicz_chain(f))[0]
            name = "x".join(f"L{f}" for f in desc)
            alg = alg.renamed(name, theory="mv")
            out.append(alg)
    return out


def dedupe(algs: Sequence[FiniteAlgebra]) -> list[FiniteAlgebra]:
    """Drop algebras isomorphic to an earlier one (first occurrence wins)."""
    kept: list[FiniteAlgebra] = []
    for a in algs:
        if not any(b.size == a.size and b.signature == a.signature and find_isomorphism(a, b) is not None
                   for b in kept):
            kept.append(a)
    return kept


def wajsberg_corpus() -> list[FiniteAlgebra]:
    """Wajsberg hoops of size <= 4 from model search plus the reducts of L2..L5."""
    return models_upto("whoop", 4) + chain_reducts(range(2, 6))


def parse_range(spec: str) -> list[int]:
    """``"3"`` -> [3]; ``"2..5"`` or ``"2-5"`` -> [2, 3, 4, 5]."""
    for sep in ("..", "-"):
        if sep in spec:
            lo, hi = spec.split(sep, 1)
            return list(range(int(lo), int(hi) + 1))
    return [int(spec)]


def load_corpus(paths: Sequence[str | Path] = (), luk: Sequence[str] = (), model_specs: Sequence[str] = (),
                check: bool = True) -> tuple[dict[str, FiniteAlgebra], list[str]]:
    """Merge algebra files and built-in generators into one named corpus.

    ``luk`` entries look like ``"3"`` or ``"2..5"``; ``model_specs`` like
    ``"hoops:4"`` or ``"mv:1-4"``. Returns the corpus and a list of theory
    failures (one message per failing algebra).
    """
    corpus: dict[str, FiniteAlgebra] = {}
    failures: list[str] = []

    def add(alg: FiniteAlgebra):
        if alg.name in corpus:
            raise CorpusError(f"duplicate algebra name {alg.name!r}")
        corpus[alg.name] = alg

    for path in paths:
        text = Path(path).read_text(encoding="utf-8")
        declared, algs = parse_document(text)
        for alg in algs:
            if check and alg.theory:
                th = declared.get(alg.theory) or get_theory(alg.theory)
                bad = [v.counterexample for v in check_theory(alg, th) if not v.ok]
                if bad:
                    failures.append(f"{alg.name}: fails {th.name} {bad[0]}")
            add(alg)
    for spec in luk:
        for n in parse_range(spec):
            add(lukasiewicz_chain(n))
    for spec in model_specs:
        if ":" not in spec:
            raise CorpusError(f"model spec {spec!r} must look like THEORY:SIZE")
        th, sizes = spec.split(":", 1)
        for n in parse_range(sizes):
            for m in models(get_theory(th).name, n):
                add(m)
    return corpus, failures


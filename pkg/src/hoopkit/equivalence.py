"""The kernel functor on MV-points over L2, its inverse through the MV-closure,
and the protomodularity witnesses for hoops.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from hoopkit.algebra import (FiniteAlgebra, Homomorphism, HomomorphismError, Point, kernel_class,
                             preservation_failure, subalgebra)
from hoopkit.search import all_homomorphisms, find_isomorphism
from hoopkit.terms import App, Equation, Term, Theory, Var, Verdict, check_identity
from hoopkit.theories import (HOOP, HOOP_IN_MV, MV, WHOOP, InconsistencyError, TheoryError,
                              hoop_reduct, require, satisfies, top_element, translate_term)
from hoopkit.unitalisation import ClosureResult, mv_closure, mv_closure_map


class PreconditionError(ValueError):
    pass


# -- points over L2 ----------------------------------------------------------------

def initial_arrow(alg: FiniteAlgebra) -> Homomorphism:
    """The unique MV-homomorphism ``L2 -> alg``."""
    from hoopkit.theories import lukasiewicz_chain
    L2 = lukasiewicz_chain(2)
    return Homomorphism(L2, alg, [alg.constant("zero"), top_element(alg)])


def _check_mv_point(pt: Point) -> None:
    if not satisfies(pt.total, MV):
        raise TheoryError("total of the point is not an MV-algebra")
    base = pt.base
    if base.size != 2 or base.constant("zero") != 0 or int(base.tables["neg"][0]) != 1:
        raise PreconditionError("base of the point must be L2")


def mv_point(total: FiniteAlgebra, proj: Homomorphism) -> Point:
    """Build the point of an MV-homomorphism onto L2; the section is the initial arrow."""
    return Point(total, proj.cod, proj, initial_arrow(total))


def kernel_inclusion(pt: Point) -> Homomorphism:
    """Inclusion of ``proj^-1(1)`` as a subhoop of the hoop reduct of the total."""
    _check_mv_point(pt)
    sect = initial_arrow(pt.total)
    if sect.map != pt.sect.map:
        raise PreconditionError("section differs from the initial arrow")
    members = kernel_class(pt.proj, 1)
    hoop = hoop_reduct(pt.total)
    try:
        K, incl = subalgebra(hoop, members, name=f"K({pt.total.name})" if pt.total.name else "")
    except ValueError as exc:
        raise InconsistencyError(f"kernel is not a subhoop: {exc}") from None
    return incl


def kernel_functor(pt: Point) -> FiniteAlgebra:
    """``K(pt)``: the 1-class of the projection, as a Wajsberg hoop."""
    K = kernel_inclusion(pt).dom
    K = FiniteAlgebra(K.signature, K.size, K.tables, name=K.name, theory="whoop", labels=K.labels)
    require(K, WHOOP)
    return K


def kernel_map(g: Homomorphism, src: Point, dst: Point) -> Homomorphism:
    """``K(g)``: restriction of a morphism of points to the kernels."""
    i, j = kernel_inclusion(src), kernel_inclusion(dst)
    back = {v: k for k, v in enumerate(j.map)}
    return Homomorphism(i.dom, j.dom, [back[g.map[v]] for v in i.map])


def phi_isomorphism(pt: Point, closure: ClosureResult | None = None) -> Homomorphism:
    """``phi: M(K(pt)) -> total`` with ``phi(w, i) = (s(i) => w) . (w => s(i))``."""
    incl = kernel_inclusion(pt)
    W = incl.dom
    cr = closure or mv_closure(kernel_functor(pt))
    if cr.input.size != W.size:
        raise PreconditionError("closure does not match the kernel")
    hoop = incl.cod
    dot, imp = hoop.tables["dot"], hoop.tables["imp"]
    s = pt.sect.map
    phi = []
    for e in range(cr.output.size):
        w, i = incl.map[e >> 1], e & 1
        phi.append(int(dot[imp[s[i], w], imp[w, s[i]]]))
    fail = preservation_failure(cr.output, pt.total, phi)
    if fail is not None:
        sym, args = fail
        pairs = [(a >> 1, a & 1) for a in args]
        raise InconsistencyError(f"phi does not preserve {sym} at {pairs}")
    h = Homomorphism(cr.output, pt.total, phi, check=False)
    if [h.map[v] for v in cr.unit.map] != list(incl.map):
        raise InconsistencyError("phi does not commute with the kernels")
    if [h.map[v] for v in cr.point.sect.map] != list(pt.sect.map):
        raise InconsistencyError("phi does not commute with the sections")
    if any(pt.proj.map[h.map[e]] != cr.point.proj.map[e] for e in range(cr.output.size)):
        raise InconsistencyError("phi does not commute with the retractions")
    if not h.is_bijective():
        raise InconsistencyError("phi is not bijective")
    return h


def roundtrip_hoop(W: FiniteAlgebra) -> Verdict:
    """``K(M(W)) ~ W``, with the isomorphism as witness."""
    K = kernel_functor(mv_closure(W).point)
    iso = find_isomorphism(K, W)
    if iso is None:
        return Verdict(False, counterexample={"hoop": W.name, "kernel_size": K.size, "size": W.size})
    return Verdict(True, witness=iso, certified_on=(W.name,) if W.name else ())


def roundtrip_point(pt: Point) -> Verdict:
    """``M(K(pt)) ~ pt`` as points, established by the split short five lemma on phi."""
    W = kernel_functor(pt)
    cr = mv_closure(W)
    phi = phi_isomorphism(pt, cr)
    incl = kernel_inclusion(pt)
    v = check_split_short_five(cr.unit, incl, cr.point, pt, phi)
    if not v.ok:
        return v
    return Verdict(True, witness=phi, certified_on=(pt.total.name,) if pt.total.name else ())


def _kernel_point(base: FiniteAlgebra) -> int:
    """Hoop-side kernels are 1-classes; ring kernels are 0-classes."""
    if "oplus" in base.signature or "dot" in base.signature:
        return top_element(base)
    return base.constant("zero")


def check_split_short_five(k: Homomorphism, k2: Homomorphism, p: Point, p2: Point, phi: Homomorphism,
                           at: int | None = None) -> Verdict:
    """Given commuting kernels, sections and retractions, phi must be bijective.

    Returns the inverse as ``witness`` on success.
    """
    if p.base != p2.base:
        raise PreconditionError("points must share the base")
    if phi.dom.size != p.total.size or phi.cod.size != p2.total.size:
        raise PreconditionError("phi must go between the totals")
    at = _kernel_point(p.base) if at is None else at
    if set(k.map) != kernel_class(p.proj, at):
        raise PreconditionError("k is not the kernel inclusion of p")
    if set(k2.map) != kernel_class(p2.proj, at):
        raise PreconditionError("k' is not the kernel inclusion of p'")
    if any(p2.proj.map[phi.map[b]] != p.proj.map[b] for b in range(p.total.size)):
        raise PreconditionError("square p' o phi = p fails")
    if [phi.map[v] for v in p.sect.map] != list(p2.sect.map):
        raise PreconditionError("square phi o s = s' fails")
    if k.dom.size != k2.dom.size or [phi.map[v] for v in k.map] != list(k2.map):
        raise PreconditionError("square phi o k = k' fails")
    if not phi.is_bijective():
        return Verdict(False, counterexample={"map": list(phi.map)})
    try:
        inv = phi.inverse()
    except HomomorphismError as exc:
        return Verdict(False, counterexample={"inverse": str(exc)})
    return Verdict(True, witness=inv)


def points_over_l2(total: FiniteAlgebra) -> list[Point]:
    """Every point of an MV-algebra over L2 (one per homomorphism onto L2)."""
    from hoopkit.theories import lukasiewicz_chain
    L2 = lukasiewicz_chain(2)
    return [mv_point(total, f) for f in all_homomorphisms(total, L2)]


def point_morphisms(src: Point, dst: Point) -> list[Homomorphism]:
    """Homomorphisms between totals commuting with both projections and sections."""
    out = []
    for g in all_homomorphisms(src.total, dst.total):
        if all(dst.proj.map[g.map[b]] == src.proj.map[b] for b in range(src.total.size)) and \
                all(g.map[src.sect.map[j]] == dst.sect.map[j] for j in range(src.base.size)):
            out.append(g)
    return out


def check_phi_naturality(src: Point, dst: Point) -> Verdict:
    """``phi' o M(K(g)) = g o phi`` for every morphism of points ``g: src -> dst``."""
    cr, cr2 = mv_closure(kernel_functor(src)), mv_closure(kernel_functor(dst))
    phi, phi2 = phi_isomorphism(src, cr), phi_isomorphism(dst, cr2)
    count = 0
    for g in point_morphisms(src, dst):
        mk = mv_closure_map(kernel_map(g, src, dst), cr, cr2)
        lhs = [phi2.map[v] for v in mk.map]
        rhs = [g.map[v] for v in phi.map]
        if lhs != rhs:
            return Verdict(False, counterexample={"g": list(g.map), "lhs": lhs, "rhs": rhs})
        count += 1
    return Verdict(True, details={"morphisms": count})


# -- Bourn-Janelidze witnesses ---------------------------------------------------------

@dataclass(frozen=True)
class BJWitness:
    theory: Theory
    constants: tuple[Term, ...]
    alphas: tuple[Term, ...]  # binary terms in x, y
    theta: Term  # (n+1)-ary term in x0..xn

    def __post_init__(self):
        n = len(self.alphas)
        if n < 1 or len(self.constants) != n:
            raise ValueError("need n >= 1 alphas and as many constants")
        if any(not a.variables() <= {0, 1} for a in self.alphas):
            raise ValueError("alphas must be binary terms")
        if any(c.variables() for c in self.constants):
            raise ValueError("constants must be closed terms")
        if not self.theta.variables() <= set(range(n + 1)):
            raise ValueError(f"theta must be an {n + 1}-ary term")

    def equations(self) -> list[Equation]:
        x, y = Var(0), Var(1)
        rec = self.theta.substitute({i: a for i, a in enumerate(self.alphas)} | {len(self.alphas): y})
        eqs = [Equation(rec, x, "theta(alpha(x,y), y) = x")]
        for i, (a, e) in enumerate(zip(self.alphas, self.constants), 1):
            eqs.append(Equation(a.substitute({1: x}), e, f"alpha{i}(x,x) = e{i}"))
        return eqs

    def maltsev_term(self) -> Term:
        """``p(x, y, z) = theta(alpha_1(x, y), ..., alpha_n(x, y), z)``."""
        return self.theta.substitute({i: a for i, a in enumerate(self.alphas)} | {len(self.alphas): Var(2)})

    def translated(self, mapping, theory: Theory) -> "BJWitness":
        return BJWitness(theory, tuple(translate_term(c, mapping) for c in self.constants),
                         tuple(translate_term(a, mapping) for a in self.alphas),
                         translate_term(self.theta, mapping))


def _imp(a: Term, b: Term) -> App:
    return App("imp", (a, b))


def hoop_witness() -> BJWitness:
    """``e1 = e2 = 1``, ``alpha1 = x -> y``, ``alpha2 = ((x -> y) -> y) -> x``, ``theta = (x -> z) . y``."""
    x, y, z = Var(0), Var(1), Var(2)
    one = App("one")
    return BJWitness(HOOP, (one, one), (_imp(x, y), _imp(_imp(_imp(x, y), y), x)),
                     App("dot", (_imp(x, z), y)))


def mv_witness() -> BJWitness:
    """The hoop witness rewritten in the MV signature."""
    return hoop_witness().translated(HOOP_IN_MV, MV)


def _corpus_check(eqs: Sequence[Equation], corpus: Sequence[FiniteAlgebra]) -> Verdict:
    names = []
    for alg in corpus:
        for eq in eqs:
            v = check_identity(alg, eq)
            if not v.ok:
                return Verdict(False, counterexample=dict(v.counterexample, algebra=alg.name, equation=eq.label))
        names.append(alg.name)
    return Verdict(True, certified_on=tuple(names))


def check_bj_witness(w: BJWitness, corpus: Sequence[FiniteAlgebra]) -> Verdict:
    """Both identity schemas, exhaustively, in every corpus algebra (corpus-relative)."""
    for alg in corpus:
        if not alg.signature.includes(w.theory.signature):
            raise PreconditionError(f"{alg.name} does not interpret {w.theory.name}")
    return _corpus_check(w.equations(), corpus)


def check_maltsev(corpus: Sequence[FiniteAlgebra], witness: BJWitness | None = None) -> Verdict:
    """``p(x, y, y) = x`` and ``p(x, x, y) = y`` for the term built from the witness."""
    w = witness or hoop_witness()
    p = w.maltsev_term()
    x, y = Var(0), Var(1)
    eqs = [Equation(p.substitute({2: y}), x, "p(x,y,y) = x"),
           Equation(p.substitute({1: x, 2: y}), y, "p(x,x,y) = y")]
    return _corpus_check(eqs, corpus)

import pytest

from hoopkit.algebra import Homomorphism, Point, PointError, product, trivial_algebra
from hoopkit.corpus import chain_products, chain_reducts, models_upto
from hoopkit.equivalence import (BJWitness, PreconditionError, check_bj_witness, check_maltsev,
                                 check_phi_naturality, check_split_short_five, hoop_witness, initial_arrow,
                                 kernel_functor, kernel_inclusion, mv_point, mv_witness, phi_isomorphism,
                                 points_over_l2, roundtrip_hoop, roundtrip_point)
from hoopkit.search import find_isomorphism, find_models
from hoopkit.terms import App, Var
from hoopkit.theories import HOOP, MV, hoop_reduct, idempotent_two_chain, lukasiewicz_chain
from hoopkit.unitalisation import mv_closure

L2, L3 = lukasiewicz_chain(2), lukasiewicz_chain(3)
C2 = idempotent_two_chain()
ONE = trivial_algebra(HOOP.signature, name="1", theory="whoop")


def second_projection_point(A):
    """(A x L2, L2, second projection, a -> (1_A or 0_A, a))."""
    P, _, p2 = product(A, L2)
    return mv_point(P.renamed(f"{A.name}xL2", theory="mv"), Homomorphism(P, L2, p2.map))


def identity_point():
    return Point(L2, L2, Homomorphism.identity(L2), Homomorphism.identity(L2))


def test_initial_arrow_is_unique():
    assert initial_arrow(L3).map == (0, 2)
    assert initial_arrow(product(L2, L2)[0]).map == (0, 3)


def test_kernel_of_square_is_two_chain():
    K = kernel_functor(second_projection_point(L2))
    assert K.size == 2 and find_isomorphism(K, C2) is not None


def test_kernel_of_identity_point_is_trivial():
    assert kernel_functor(identity_point()).size == 1


def test_kernel_of_l3_times_l2():
    K = kernel_functor(second_projection_point(L3))
    assert find_isomorphism(K, hoop_reduct(L3)) is not None
    incl = kernel_inclusion(second_projection_point(L3))
    assert incl.is_injective()


def test_phi_on_identity_point_is_identity():
    phi = phi_isomorphism(identity_point())
    assert phi.map == (0, 1)


@pytest.mark.parametrize("W", [ONE, C2, hoop_reduct(lukasiewicz_chain(4))],
                         ids=lambda w: w.name)
def test_roundtrip_hoop(W):
    v = roundtrip_hoop(W)
    assert v.ok and v.witness.is_bijective()


def small_points():
    totals = [a for a in chain_products(6)] + [mv_closure(W).output for W in chain_reducts(range(2, 4))]
    return [pt for T in totals for pt in points_over_l2(T)]


def test_roundtrip_point_on_small_points():
    pts = small_points()
    assert len(pts) >= 5
    for pt in pts + [identity_point()]:
        v = roundtrip_point(pt)
        assert v.ok, pt.total.name


def test_simple_chains_have_no_points():
    assert points_over_l2(L3) == []
    assert len(points_over_l2(product(L3, L2)[0])) == 1


def test_non_point_rejected_at_construction():
    P, _, p2 = product(L2, L2)
    bad_sect = Homomorphism(L2, P, [0, 2], check=False)  # 1 -> (1,0), which projects to 0
    with pytest.raises(PointError):
        Point(P, L2, p2, bad_sect)


def test_split_short_five_with_identity():
    cr = mv_closure(C2)
    pt = cr.point
    v = check_split_short_five(cr.unit, cr.unit, pt, pt, Homomorphism.identity(pt.total))
    assert v.ok and v.witness.map == tuple(range(pt.total.size))


def test_split_short_five_checks_its_squares():
    cr = mv_closure(C2)
    pt = cr.point
    swap = [pt.total.size - 1 - e for e in range(pt.total.size)]
    with pytest.raises(PreconditionError):
        check_split_short_five(cr.unit, cr.unit, pt, pt, Homomorphism(pt.total, pt.total, swap, check=False))


def test_phi_is_natural():
    pts = [second_projection_point(A) for A in (L2, L3)] + [mv_closure(C2).point]
    for src in pts:
        for dst in pts:
            assert check_phi_naturality(src, dst).ok


def test_bj_witness_on_hoops():
    hoops = models_upto("hoop", 4) + chain_reducts(range(2, 6))
    assert check_bj_witness(hoop_witness(), hoops).ok
    assert check_maltsev(hoops).ok
    assert check_maltsev([ONE]).ok


def test_bj_witness_on_mv_corpus():
    mvs = [L2, L3, lukasiewicz_chain(5)] + find_models(MV, 4)
    assert check_bj_witness(mv_witness(), mvs).ok
    assert check_maltsev(mvs, mv_witness()).ok


def test_broken_witness_fails_on_two_chain():
    w = hoop_witness()
    broken = BJWitness(HOOP, w.constants, w.alphas, Var(1))  # theta = y
    v = check_bj_witness(broken, [C2])
    assert not v.ok and v.counterexample["algebra"] == "C2"


def test_witness_shape_is_validated():
    with pytest.raises(ValueError):
        BJWitness(HOOP, (App("one"),), (App("imp", (Var(0), Var(2))),), Var(0))


def test_maltsev_term_shape():
    p = hoop_witness().maltsev_term()
    assert p.variables() == {0, 1, 2}


def test_witness_needs_matching_signature():
    with pytest.raises(PreconditionError):
        check_bj_witness(hoop_witness(), [L3])

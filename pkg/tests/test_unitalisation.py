import numpy as np
import pytest

import oracles
from hoopkit.algebra import Homomorphism, Point, product, reduct, trivial_algebra
from hoopkit.ideals import is_ring_ideal
from hoopkit.search import all_homomorphisms, find_isomorphism, find_models
from hoopkit.terms import check_theory
from hoopkit.theories import (BOOALG, CRING, CRNG, HOOP, IDEMHOOP, MV, WHOOP, TheoryError, boolean_translation,
                              hoop_reduct, idempotent_two_chain, integers_mod, lukasiewicz_chain, satisfies,
                              zero_ring)
from hoopkit.unitalisation import (ClosureResult, additive_exponent, boolean_unitalise, check_augmentation,
                                   dorroh, dorroh_quotient, hoop_sum, mv_closure, mv_closure_map)

L2, L3 = lukasiewicz_chain(2), lukasiewicz_chain(3)
C2 = idempotent_two_chain()
ONE = trivial_algebra(HOOP.signature, name="1", theory="whoop")


def closure_oracle(W):
    """The closure tables built straight from the defining cases."""
    t = oracles.as_lists(W)
    dot, imp, one = t["dot"], t["imp"], t["one"]
    n = W.size

    def plus(a, b):
        return imp[imp[a][dot[a][b]]][b]

    def oplus(p, q):
        (a, i), (b, j) = p, q
        if i and j:
            return plus(a, b), 1
        if not i and not j:
            return dot[a][b], 0
        if not i:
            return imp[a][b], 1
        return imp[b][a], 1

    elems = [(w, i) for w in range(n) for i in (0, 1)]
    code = {e: 2 * e[0] + e[1] for e in elems}
    return {
        "oplus": [[code[oplus(p, q)] for q in elems] for p in elems],
        "neg": [code[(w, 1 - i)] for w, i in elems],
        "zero": code[(one, 0)],
    }


def wajsberg_inputs():
    hoops = [ONE, C2] + [hoop_reduct(lukasiewicz_chain(n)) for n in (3, 4, 5)] + find_models(HOOP, 4)
    return [h for h in hoops if satisfies(h, WHOOP)]


@pytest.mark.parametrize("W", wajsberg_inputs(), ids=lambda w: w.name)
def test_closure_tables_against_oracle(W):
    cr = mv_closure(W)
    assert oracles.as_lists(cr.output) == closure_oracle(W)
    assert cr.output.size == 2 * W.size
    assert all(v.ok for v in check_theory(cr.output, MV))
    assert cr.unit.is_injective() and cr.unit.is_homomorphism()
    assert check_augmentation(cr).ok


def test_closure_of_one_element_hoop_is_l2():
    cr = mv_closure(ONE)
    assert find_isomorphism(cr.output, L2) is not None
    assert check_augmentation(cr).details["kernel"] == [1]


def test_closure_of_two_chain_is_square():
    assert hoop_sum(C2)[0, 0] == 0  # a (+) a = a
    cr = mv_closure(C2)
    assert find_isomorphism(cr.output, product(L2, L2)[0]) is not None
    assert check_augmentation(cr).details["kernel"] == [1, 3]  # (a,1), (1,1)


def test_closure_of_l3_reduct():
    cr = mv_closure(hoop_reduct(L3))
    assert cr.output.size == 6
    assert find_isomorphism(cr.output, product(L3, L2)[0]) is not None


def test_corrupted_projection_is_caught():
    cr = mv_closure(C2)
    bad_proj = Homomorphism(cr.output, L2, [0, 0, 0, 1], check=False)  # (a,1) -> 0
    bad = ClosureResult(C2, cr.output, cr.unit, Point(cr.output, L2, bad_proj, cr.point.sect), kernel_at=1)
    v = check_augmentation(bad)
    assert not v.ok
    assert v.counterexample == {"element": 1, "in_image": True, "in_kernel": False}


def test_closure_needs_wajsberg():
    (idem3,) = [h for h in find_models(HOOP, 3) if satisfies(h, IDEMHOOP)]
    with pytest.raises(TheoryError):
        mv_closure(idem3)


def test_closure_is_functorial():
    A, B = hoop_reduct(L3), hoop_reduct(lukasiewicz_chain(5))
    for f in all_homomorphisms(A, B):
        Mf = mv_closure_map(f)
        assert Mf.is_homomorphism()
        assert mv_closure_map(Homomorphism.identity(A)).map == tuple(range(2 * A.size))
        for g in all_homomorphisms(B, B):
            assert mv_closure_map(g.compose(f)).map == mv_closure_map(g).compose(Mf).map


def test_sidecar_names_the_maps():
    side = mv_closure(C2).sidecar()
    assert side["unit"] == [1, 3] and side["proj"] == [0, 1, 0, 1] and side["sect"] == [2, 3]


def dorroh_oracle(R, m):
    t = oracles.as_lists(R)
    add, mul = t["add"], t["mul"]
    n = R.size

    def times(k, r):
        acc = t["zero"]
        for _ in range(k):
            acc = add[acc][r]
        return acc

    elems = [(r, k) for r in range(n) for k in range(m)]
    code = {e: e[0] * m + e[1] for e in elems}
    return [[code[(add[add[times(k2, r)][times(k, r2)]][mul[r][r2]], (k * k2) % m)] for (r2, k2) in elems]
            for (r, k) in elems]


@pytest.mark.parametrize("R", [zero_ring(2), integers_mod(2, unital=False), integers_mod(4, unital=False),
                               zero_ring(3)] + find_models(CRNG, 4)[:4], ids=lambda r: r.name)
def test_dorroh_against_formula(R):
    m = additive_exponent(R)
    cr = dorroh(R, m)
    assert cr.output.tables["mul"].tolist() == dorroh_oracle(R, m)
    assert satisfies(cr.output, CRING)
    assert cr.output.constant("one") == 1  # (0, 1)
    assert is_ring_ideal(cr.output, cr.unit.image())
    Q, iso = dorroh_quotient(cr)
    assert iso is not None and Q.size == m


def test_dorroh_of_zero_ring():
    cr = dorroh(zero_ring(2), 2)
    assert cr.output.size == 4
    Q, iso = dorroh_quotient(cr)
    assert find_isomorphism(Q, integers_mod(2)) is not None


def test_dorroh_of_z2_is_z2_squared():
    cr = dorroh(integers_mod(2, unital=False), 2)
    assert find_isomorphism(cr.output, product(integers_mod(2), integers_mod(2))[0]) is not None


def test_exponents():
    assert additive_exponent(integers_mod(4, unital=False)) == 4
    assert additive_exponent(reduct(product(integers_mod(2), integers_mod(2))[0], CRNG.signature)) == 2
    assert additive_exponent(trivial_algebra(CRNG.signature)) == 1
    with pytest.raises(ValueError):
        dorroh(integers_mod(4, unital=False), 2)
    cr = dorroh(integers_mod(2, unital=False), 4)  # any multiple of the exponent works
    assert cr.output.size == 8 and satisfies(cr.output, CRING)


def test_boolean_unitalisation():
    B = boolean_translation(boolean_unitalise(integers_mod(2, unital=False)).output)
    assert B.size == 4 and satisfies(B, BOOALG)
    join = B.tables["join"]
    assert np.all(join == join.T)
    B2 = boolean_translation(boolean_unitalise(trivial_algebra(CRNG.signature, theory="crng")).output)
    assert B2.size == 2
    with pytest.raises(TheoryError):
        boolean_unitalise(zero_ring(2))


def test_unit_must_be_injective():
    cr = mv_closure(C2)
    with pytest.raises(ValueError):
        ClosureResult(C2, cr.output, Homomorphism(C2, cr.unit.cod, [3, 3], check=False), cr.point, 1)


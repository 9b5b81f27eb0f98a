import numpy as np
import pytest

import oracles
from hoopkit.algebra import (Congruence, FiniteAlgebra, Homomorphism, HomomorphismError, Point, PointError,
                             UnionFind, all_congruences, generate_congruence, is_closed, is_point_morphism,
                             kernel_class, power, product, pullback, pullback_point, quotient, set_partitions,
                             subalgebra, trivial_algebra)
from hoopkit.search import find_isomorphism
from hoopkit.terms import check_theory
from hoopkit.theories import MV, hoop_reduct, integers_mod, lukasiewicz_chain
from hoopkit.unitalisation import mv_closure

L2, L3, L4 = (lukasiewicz_chain(n) for n in (2, 3, 4))


def b4():
    return product(L2, L2, name="B4")


def test_product_of_two_chains_is_boolean():
    B, p1, p2 = b4()
    assert B.size == 4
    assert all(v.ok for v in check_theory(B, MV))
    oplus = B.tables["oplus"]
    assert all(oplus[a, a] == a for a in range(4))  # idempotent, so Boolean
    assert p1.map == (0, 0, 1, 1) and p2.map == (0, 1, 0, 1)


def test_product_tables_against_pairs():
    P, _, _ = product(L3, L2)
    mv3, mv2 = oracles.luk_mv(3), oracles.luk_mv(2)
    pairs = [(i, j) for i in range(3) for j in range(2)]
    for a, (i, j) in enumerate(pairs):
        for b, (k, m) in enumerate(pairs):
            assert pairs[P.tables["oplus"][a, b]] == (mv3["oplus"][i][k], mv2["oplus"][j][m])


def test_power_is_iterated_product():
    assert find_isomorphism(power(L2, 3), product(b4()[0], L2)[0]) is not None


def test_pullback_along_identity():
    f = Homomorphism(L3, L3, [0, 1, 2])
    P, p1, _ = pullback(f, Homomorphism.identity(L3))
    assert P.size == 3 and find_isomorphism(P, L3) is not None
    assert p1.is_bijective()


def test_pullback_of_projections_has_eight_elements():
    B, p1, p2 = b4()
    P, q1, q2 = pullback(p1, p2)
    assert P.size == 8
    for e in range(8):
        assert p1(q1(e)) == p2(q2(e))


def test_pullback_needs_common_codomain():
    with pytest.raises(ValueError):
        pullback(Homomorphism.identity(L2), Homomorphism.identity(L3))


def test_kernel_class_examples():
    B, _, p2 = b4()
    assert kernel_class(p2, 1) == {1, 3}  # (0,1) and (1,1)
    assert kernel_class(Homomorphism.identity(L3), 1) == {1}
    T = trivial_algebra(MV.signature)
    to_t = Homomorphism(L3, T, [0, 0, 0])
    assert kernel_class(to_t, 0) == {0, 1, 2}


def test_homomorphism_validation():
    with pytest.raises(HomomorphismError):
        Homomorphism(L3, L3, [2, 1, 0])  # negation does not preserve zero
    with pytest.raises(HomomorphismError):
        Homomorphism(L3, L3, [0, 1])
    h = Homomorphism(L3, L3, [2, 1, 0], check=False)
    assert not h.is_homomorphism()


def test_inverse_and_compose():
    iso = find_isomorphism(L3, L3.relabel([2, 1, 0]))
    assert iso.map == (2, 1, 0)
    assert iso.inverse().compose(iso) == Homomorphism.identity(L3)


def test_generated_congruence_examples():
    assert generate_congruence(L3, [(1, 2)]) == Congruence.full(L3)  # L3 is simple
    for alg in (L3, L4, b4()[0]):
        assert generate_congruence(alg, []) == Congruence.identity(alg)
    theta = generate_congruence(b4()[0], [(0, 1)])
    assert theta.blocks() == [(0, 1), (2, 3)]
    assert theta == b4()[1].kernel_congruence()


@pytest.mark.parametrize("alg", [L3, L4, b4()[0], hoop_reduct(L4), integers_mod(4), integers_mod(6)],
                         ids=lambda a: a.name)
def test_congruences_against_brute_force(alg):
    tables = oracles.as_lists(alg)
    expected = sorted(tuple(c) for c in oracles.congruences(tables, alg.size))
    got = sorted(c.partition for c in all_congruences(alg))
    assert got == expected
    for a in range(alg.size):
        for b in range(alg.size):
            assert list(generate_congruence(alg, [(a, b)]).partition) == \
                oracles.least_congruence(tables, alg.size, [(a, b)])


def test_set_partitions_are_bell_numbers():
    assert [sum(1 for _ in set_partitions(n)) for n in range(1, 7)] == [1, 2, 5, 15, 52, 203]


def test_congruence_lattice_operations():
    B = b4()[0]
    a = generate_congruence(B, [(0, 1)])
    b = generate_congruence(B, [(0, 2)])
    assert a.meet(b) == Congruence.identity(B)
    assert Congruence.identity(B) <= a <= Congruence.full(B)
    assert not a <= b


def test_non_compatible_partition_rejected():
    with pytest.raises(ValueError):
        Congruence(L3, [0, 0, 2])


def test_quotients():
    Q, f = quotient(L3, Congruence.full(L3))
    assert Q.size == 1 and f.is_surjective()
    B = b4()[0]
    Q, f = quotient(B, generate_congruence(B, [(0, 1)]))
    assert Q.size == 2 and find_isomorphism(Q, L2) is not None
    assert f.kernel_congruence() == generate_congruence(B, [(0, 1)])


def test_subalgebras():
    assert is_closed(L3, [0, 2]) and not is_closed(L3, [0, 1])
    S, inc = subalgebra(L3, [0, 2])
    assert find_isomorphism(S, L2) is not None and inc.is_injective()
    with pytest.raises(ValueError):
        subalgebra(L3, [0, 1])


def test_union_find_least_root():
    uf = UnionFind(5)
    uf.union(4, 2)
    uf.union(2, 3)
    assert uf.normal_form() == (0, 1, 2, 2, 2)


def test_point_validation():
    B, _, p2 = b4()
    sect = Homomorphism(L2, B, [0, 3])  # diagonal
    pt = Point(B, L2, p2, sect)
    assert pt.proj.compose(pt.sect) == Homomorphism.identity(L2)
    with pytest.raises(PointError):
        Point(B, L2, p2, Homomorphism(L2, B, [0, 3], check=False).compose(Homomorphism(L2, L2, [1, 0], check=False)))


def test_pullback_point_along_identity():
    B, _, p2 = b4()
    pt = Point(B, L2, p2, Homomorphism(L2, B, [0, 3]))  # the diagonal is the only section
    # L2 has a single endomorphism, so change of base can only be along the identity
    assert len([m for m in oracles.all_homs(oracles.luk_mv(2), oracles.luk_mv(2), 2, 2)]) == 1
    again = pullback_point(pt, Homomorphism.identity(L2))
    assert again.total.size == 4 and find_isomorphism(again.total, B) is not None
    assert again.sect.map == pt.sect.map


def test_base_change_of_closure_point_is_itself():
    W = hoop_reduct(L3)
    pt = mv_closure(W).point
    again = pullback_point(pt, Homomorphism.identity(L2))
    total, _, pi2 = pullback(Homomorphism.identity(L2), pt.proj)
    assert total == again.total and pi2.is_bijective()
    assert is_point_morphism(pi2, again, pt)
    relabelled = again.total.relabel(pi2.map)
    assert np.array_equal(relabelled.tables["oplus"], pt.total.tables["oplus"])


def test_relabel_is_isomorphic():
    perm = [2, 0, 1, 3]
    A = L4.relabel(perm)
    h = Homomorphism(L4, A, perm)
    assert h.is_bijective()


def test_frozen_tables():
    with pytest.raises(ValueError):
        L3.tables["oplus"][0, 0] = 2


def test_equality_ignores_names():
    assert L3.renamed("other") == L3
    assert FiniteAlgebra(MV.signature, 3, {s: L3.tables[s] for s in MV.signature.names}) == L3

# # Freely adding a bottom to a Wajsberg hoop
#
# M(W) doubles the carrier: (w, i) is stored at 2*w + i. The copy with i = 1
# is W itself, the copy with i = 0 holds the negations.

from hoopkit.algebra import product
from hoopkit.equivalence import kernel_functor, points_over_l2, roundtrip_hoop, roundtrip_point
from hoopkit.search import find_isomorphism
from hoopkit.theories import hoop_reduct, idempotent_two_chain, lukasiewicz_chain
from hoopkit.unitalisation import check_augmentation, mv_closure

C2 = idempotent_two_chain()
cr = mv_closure(C2)
print(cr.output.tables["oplus"])
print("unit", cr.unit.map, "proj", cr.point.proj.map, "sect", cr.point.sect.map)

# The result is the four element Boolean algebra, and the unit lands exactly
# on the kernel of the projection to L2.

L2 = lukasiewicz_chain(2)
print(find_isomorphism(cr.output, product(L2, L2)[0]))
print(check_augmentation(cr))

# Going back: the kernel of a point over L2 is a Wajsberg hoop, and the two
# constructions undo each other up to isomorphism.

W = hoop_reduct(lukasiewicz_chain(4))
print(roundtrip_hoop(W).witness)

total = product(lukasiewicz_chain(3), L2)[0]
for pt in points_over_l2(total):
    print(kernel_functor(pt).size, roundtrip_point(pt).ok)

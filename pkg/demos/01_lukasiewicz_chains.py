# # Lukasiewicz chains as numpy tables
#
# Every finite algebra in hoopkit is a carrier {0, ..., n-1} plus one numpy
# array per operation. The chain L_n has elements 0, 1/(n-1), ..., 1.

import numpy as np

from hoopkit import theories as th
from hoopkit.ideals import enumerate_filters, enumerate_mv_ideals

L4 = th.lukasiewicz_chain(4)
print(L4.tables["oplus"])
print(L4.tables["neg"])

# Derived operations come back as arrays too. Truncated addition on one side,
# Lukasiewicz conjunction on the other:

ops = th.derived_mv_ops(L4)
print(ops["odot"])
print(ops["imp"])

# The natural order is a boolean matrix; on a chain it is upper triangular.

order = th.mv_order(L4)
print(order.astype(int))
assert np.array_equal(order, np.triu(np.ones((4, 4), dtype=bool)))

# Passing to the hoop reduct keeps the order.

H = th.hoop_reduct(L4)
assert np.array_equal(th.hoop_order(H), order)

# A finite chain is simple: only the trivial ideals and filters.

print([w.elements for w in enumerate_mv_ideals(L4)])
print([w.elements for w in enumerate_filters(H)])

# The square L2 x L2 is not simple.

B4 = th.boolean_cube(2)
print([w.elements for w in enumerate_mv_ideals(B4)])

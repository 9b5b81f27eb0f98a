# # Adjoining a unit to a ring
#
# The Dorroh extension R x Z_m, with m a multiple of the additive exponent of R,
# stores (r, k) at r*m + k. Its unit is (0, 1).

from hoopkit.theories import boolean_translation, integers_mod, satisfies, CRING
from hoopkit.unitalisation import additive_exponent, boolean_unitalise, dorroh, dorroh_quotient

R = integers_mod(4, unital=False)
m = additive_exponent(R)
cr = dorroh(R, m)
print(cr.output.size, satisfies(cr.output, CRING), cr.output.constant("one"))

# R sits inside as an ideal and the quotient is Z_m.

Q, iso = dorroh_quotient(cr)
print(Q.size, iso)

# For a Boolean ring the same idea gives a Boolean algebra.

B = boolean_translation(boolean_unitalise(integers_mod(2, unital=False)).output)
print(B.tables["join"])
print(B.tables["meet"])

# # Counting small models
#
# The model finder enumerates algebras up to isomorphism. Finite MV-algebras
# are products of chains, so their count at size n is the number of ways to
# factor n.

import time

from hoopkit.algebra import all_congruences
from hoopkit.search import find_models
from hoopkit.theories import HOOP, MV, WHOOP

for n in range(1, 6):
    t = time.perf_counter()
    mv = find_models(MV, n)
    print(f"size {n}: {len(mv)} MV-algebras, {len(find_models(WHOOP, n))} Wajsberg hoops, "
          f"{len(find_models(HOOP, n)) if n < 5 else '?'} hoops  ({time.perf_counter() - t:.2f} s)")

# Congruence lattices of the size 4 hoops. Each congruence is stored as the
# least element of every block.

for H in find_models(HOOP, 4):
    print(H.name, [c.partition for c in all_congruences(H)])

"""Free unitalisations: the MV-closure of a Wajsberg hoop and Dorroh extensions of rngs.

``M(W)`` has carrier ``W x {0, 1}`` with ``(w, i)`` encoded as ``2*w + i``.
The Dorroh extension ``R x Z_m`` encodes ``(r, k)`` as ``r*m + k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from hoopkit.algebra import (FiniteAlgebra, Homomorphism, Point, generate_congruence, kernel_class,
                             quotient, reduct)
from hoopkit.search import find_isomorphism
from hoopkit.terms import Verdict
from hoopkit.theories import (BOOLEAN_RNG, BOORNG, CRING, CRNG, MV, WHOOP, TheoryError, hoop_reduct,
                              integers_mod, lukasiewicz_chain, require, satisfies)


@dataclass(frozen=True)
class ClosureResult:
    input: FiniteAlgebra
    output: FiniteAlgebra
    unit: Homomorphism  # input -> (reduct of) output
    point: Point  # output over the initial algebra
    kernel_at: int  # element of point.base whose preimage is the kernel

    def __post_init__(self):
        if not self.unit.is_injective():
            raise ValueError("unit must be injective")

    def sidecar(self) -> dict[str, Any]:
        return {
            "unit": list(self.unit.map),
            "proj": list(self.point.proj.map),
            "sect": list(self.point.sect.map),
            "kernel_at": self.kernel_at,
            "base": self.point.base.to_json(),
        }


def hoop_sum(W: FiniteAlgebra) -> np.ndarray:
    """``w (+) w' = (w -> (w . w')) -> w'`` computed inside a Wajsberg hoop."""
    dot, imp = W.tables["dot"], W.tables["imp"]
    a = np.arange(W.size)
    return imp[imp[a[:, None], dot], a[None, :]]


def mv_closure(W: FiniteAlgebra) -> ClosureResult:
    """Freely add a bottom to a Wajsberg hoop, returning ``M(W)`` with unit and point."""
    try:
        require(W, WHOOP)
    except TheoryError as exc:
        raise TheoryError(f"mv_closure needs a Wajsberg hoop: {exc}") from None
    n = W.size
    dot, imp, one = W.tables["dot"], W.tables["imp"], W.constant("one")
    plus = hoop_sum(W)
    oplus = np.empty((2 * n, 2 * n), dtype=np.intp)
    w = np.arange(n)
    for i in (0, 1):
        for j in (0, 1):
            if i == 1 and j == 1:
                block = 2 * plus + 1
            elif i == 0 and j == 0:
                block = 2 * dot
            elif i == 0:  # (w,0) + (w',1) = (w -> w', 1)
                block = 2 * imp + 1
            else:  # (w,1) + (w',0) = (w' -> w, 1)
                block = 2 * imp.T + 1
            oplus[np.ix_(2 * w + i, 2 * w + j)] = block
    neg = np.arange(2 * n) ^ 1
    labels = [(W.labels[k] if W.labels is not None else k, i) for k in range(n) for i in (0, 1)]
    M = FiniteAlgebra(MV.signature, 2 * n, {"oplus": oplus, "neg": neg, "zero": 2 * one},
                      name=f"M({W.name})" if W.name else "", theory="mv", labels=labels)
    require(M, MV)
    unit = Homomorphism(W, hoop_reduct(M), [2 * k + 1 for k in range(n)])
    L2 = lukasiewicz_chain(2)
    proj = Homomorphism(M, L2, [e & 1 for e in range(2 * n)])
    sect = Homomorphism(L2, M, [2 * one, 2 * one + 1])
    return ClosureResult(W, M, unit, Point(M, L2, proj, sect), kernel_at=1)


def mv_closure_map(h: Homomorphism, src: ClosureResult | None = None, dst: ClosureResult | None = None
                   ) -> Homomorphism:
    """``M(h): M(W) -> M(W')`` acting as ``(w, i) -> (h(w), i)``."""
    src = src or mv_closure(h.dom)
    dst = dst or mv_closure(h.cod)
    return Homomorphism(src.output, dst.output, [2 * h.map[e >> 1] + (e & 1) for e in range(src.output.size)])


def check_augmentation(cr: ClosureResult) -> Verdict:
    """Does the image of the unit coincide with the kernel of the projection?"""
    image = cr.unit.image()
    kernel = kernel_class(cr.point.proj, cr.kernel_at)
    if image == kernel:
        return Verdict(True, details={"kernel": sorted(kernel)})
    diff = sorted(image ^ kernel)
    return Verdict(False, counterexample={
        "element": diff[0],
        "in_image": diff[0] in image,
        "in_kernel": diff[0] in kernel,
    })


# -- rings -------------------------------------------------------------------------

def additive_exponent(R: FiniteAlgebra) -> int:
    """Least ``m >= 1`` with ``m * r = 0`` for every ``r``."""
    add, zero = R.tables["add"], R.constant("zero")
    acc = np.arange(R.size)
    m = 1
    while not np.all(acc == zero):
        acc = add[acc, np.arange(R.size)]
        m += 1
    return m


def _multiples(R: FiniteAlgebra, m: int) -> np.ndarray:
    """``mult[k, r] = k * r`` (k-fold sum) for ``0 <= k < m``."""
    add, zero = R.tables["add"], R.constant("zero")
    out = np.empty((m, R.size), dtype=np.intp)
    out[0] = zero
    for k in range(1, m):
        out[k] = add[out[k - 1], np.arange(R.size)]
    return out


def dorroh(R: FiniteAlgebra, m: int) -> ClosureResult:
    """Adjoin a unit to a commutative rng over ``Z_m``: ``(r,k)(r',k') = (rk' + kr' + rr', kk')``."""
    require(R, CRNG)
    if m < 1:
        raise ValueError("exponent must be positive")
    if m % additive_exponent(R):
        raise ValueError(f"{m} is not an additive exponent of {R.name or 'the rng'}")
    n = R.size
    add, mul, neg = R.tables["add"], R.tables["mul"], R.tables["neg"]
    mult = _multiples(R, m)
    r = np.repeat(np.arange(n), m)  # element e = r*m + k
    k = np.tile(np.arange(m), n)
    R_, K_ = r[:, None], k[:, None]
    R2, K2 = r[None, :], k[None, :]
    add_t = add[R_, R2] * m + (K_ + K2) % m
    first = add[add[mult[K2, R_], mult[K_, R2]], mul[R_, R2]]
    mul_t = first * m + (K_ * K2) % m
    neg_t = neg[r] * m + (-k) % m
    zero = R.constant("zero")
    labels = [(R.labels[i] if R.labels is not None else i, j) for i in range(n) for j in range(m)]
    out = FiniteAlgebra(CRING.signature, n * m, {"add": add_t, "neg": neg_t, "zero": zero * m,
                                                 "mul": mul_t, "one": zero * m + 1 % m},
                        name=f"D({R.name},{m})" if R.name else "", theory="cring", labels=labels)
    require(out, CRING)
    unit = Homomorphism(R, reduct(out, CRNG.signature), [i * m for i in range(n)])
    Zm = integers_mod(m)
    proj = Homomorphism(out, Zm, k)
    sect = Homomorphism(Zm, out, [zero * m + j for j in range(m)])
    return ClosureResult(R, out, unit, Point(out, Zm, proj, sect), kernel_at=0)


def dorroh_quotient(cr: ClosureResult) -> tuple[FiniteAlgebra, Homomorphism | None]:
    """Quotient of the extension by the congruence collapsing the embedded rng to 0.

    Returns the quotient and an isomorphism onto ``Z_m`` when there is one.
    """
    zero = cr.output.constant("zero")
    theta = generate_congruence(cr.output, [(e, zero) for e in cr.unit.image()])
    Q, _ = quotient(cr.output, theta)
    return Q, find_isomorphism(Q, cr.point.base) if Q.size == cr.point.base.size else None


def boolean_unitalise(R: FiniteAlgebra) -> ClosureResult:
    """Dorroh extension over ``Z_2`` of a Boolean rng; the result is a unital Boolean ring."""
    try:
        require(R, BOOLEAN_RNG)
    except TheoryError as exc:
        raise TheoryError(f"boolean_unitalise needs a Boolean rng: {exc}") from None
    cr = dorroh(R, 2)
    if not satisfies(cr.output, BOORNG):
        raise TheoryError("unitalisation of a Boolean rng is not Boolean")
    return cr

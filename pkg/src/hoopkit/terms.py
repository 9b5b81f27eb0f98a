"""Signatures, terms, equations and exhaustive satisfaction on finite algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Iterable, Mapping, Sequence

import numpy as np

if TYPE_CHECKING:
    from hoopkit.algebra import FiniteAlgebra


class SignatureError(ValueError):
    """An algebra or term does not match the expected signature."""


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        symbols = tuple((str(name), int(arity)) for name, arity in self.symbols)
        object.__setattr__(self, "symbols", symbols)
        names = [name for name, _ in symbols]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate symbol names in {names}")
        for name, arity in symbols:
            if arity < 0:
                raise SignatureError(f"negative arity for {name}")

    @classmethod
    def of(cls, **arities: int) -> "Signature":
        return cls(tuple(arities.items()))

    def __contains__(self, name: object) -> bool:
        return any(name == n for n, _ in self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.symbols)

    def arity(self, name: str) -> int:
        for n, a in self.symbols:
            if n == name:
                return a
        raise SignatureError(f"unknown symbol {name!r}")

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(n for n, a in self.symbols if a == 0)

    def restrict(self, names: Iterable[str]) -> "Signature":
        keep = set(names)
        return Signature(tuple((n, a) for n, a in self.symbols if n in keep))

    def includes(self, other: "Signature") -> bool:
        return all(s in self.symbols for s in other.symbols)


class Term:
    """Base class of the two term constructors, :class:`Var` and :class:`App`."""

    __slots__ = ()

    def variables(self) -> frozenset[int]:
        raise NotImplementedError

    def symbols(self) -> frozenset[tuple[str, int]]:
        raise NotImplementedError

    def substitute(self, mapping: Mapping[int, "Term"]) -> "Term":
        raise NotImplementedError


@dataclass(frozen=True)
class Var(Term):
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("variable index must be nonnegative")

    def variables(self) -> frozenset[int]:
        return frozenset((self.index,))

    def symbols(self) -> frozenset[tuple[str, int]]:
        return frozenset()

    def substitute(self, mapping: Mapping[int, Term]) -> Term:
        return mapping.get(self.index, self)

    def __repr__(self):
        return f"Var({self.index})"


@dataclass(frozen=True)
class App(Term):
    symbol: str
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def variables(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for a in self.args:
            out |= a.variables()
        return out

    def symbols(self) -> frozenset[tuple[str, int]]:
        out = frozenset(((self.symbol, len(self.args)),))
        for a in self.args:
            out |= a.symbols()
        return out

    def substitute(self, mapping: Mapping[int, Term]) -> Term:
        return App(self.symbol, tuple(a.substitute(mapping) for a in self.args))

    def __repr__(self):
        if not self.args:
            return f"App({self.symbol!r})"
        return f"App({self.symbol!r}, {self.args!r})"


def term(symbol: str, *args: Term | int) -> App:
    """Shorthand constructor; integer arguments become variables."""
    return App(symbol, tuple(Var(a) if isinstance(a, int) else a for a in args))


x, y, z = Var(0), Var(1), Var(2)


def check_term(t: Term, sig: Signature) -> None:
    for name, arity in t.symbols():
        if name not in sig:
            raise SignatureError(f"unknown symbol {name!r}")
        if sig.arity(name) != arity:
            raise SignatureError(
                f"arity mismatch for {name!r}: expected {sig.arity(name)}, got {arity}")


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    label: str = field(default="", compare=False)

    def variables(self) -> frozenset[int]:
        return self.lhs.variables() | self.rhs.variables()

    @property
    def nvars(self) -> int:
        vs = self.variables()
        return max(vs) + 1 if vs else 0


@dataclass(frozen=True)
class Theory:
    name: str
    signature: Signature
    equations: tuple[Equation, ...] = ()
    point_constant: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        for eq in self.equations:
            check_term(eq.lhs, self.signature)
            check_term(eq.rhs, self.signature)
        if self.point_constant is not None:
            if self.point_constant not in self.signature or self.signature.arity(self.point_constant) != 0:
                raise SignatureError(
                    f"point constant {self.point_constant!r} is not a constant of the signature")

    def extend(self, name: str, equations: Iterable[Equation], symbols: Sequence[tuple[str, int]] = ()) -> "Theory":
        sig = Signature(self.signature.symbols + tuple(symbols))
        return Theory(name, sig, self.equations + tuple(equations), self.point_constant)


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exhaustive check.

    ``counterexample`` is ``None`` when ``ok``; ``certified_on`` lists the
    algebras on which a corpus-relative check was run.
    """

    ok: bool
    counterexample: dict[str, Any] | None = None
    certified_on: tuple[str, ...] = ()
    witness: Any = None
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"ok": self.ok}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.certified_on:
            out["certified_on"] = list(self.certified_on)
        if self.details:
            out["details"] = self.details
        return out


def eval_term(t: Term, alg: "FiniteAlgebra", env: Mapping[int, int] | Sequence[int]) -> int:
    """Evaluate ``t`` in ``alg`` under the assignment ``env`` (index -> element)."""
    if isinstance(t, Var):
        try:
            return int(env[t.index])
        except (KeyError, IndexError):
            raise EvaluationError(f"unbound variable x{t.index}") from None
    assert isinstance(t, App)
    try:
        table = alg.tables[t.symbol]
    except KeyError:
        raise EvaluationError(f"symbol {t.symbol!r} not interpreted") from None
    if table.ndim != len(t.args):
        raise EvaluationError(f"arity mismatch for {t.symbol!r}")
    return int(table[tuple(eval_term(a, alg, env) for a in t.args)])


def eval_grid(t: Term, alg: "FiniteAlgebra", axes: Sequence[int]) -> np.ndarray:
    """Evaluate ``t`` at every assignment of the variables listed in ``axes``.

    The result has one axis of length ``alg.size`` per entry of ``axes``, so
    C-order flattening enumerates assignments lexicographically.
    """
    n = alg.size
    shape = (n,) * len(axes)
    position = {v: i for i, v in enumerate(axes)}
    grids = np.indices(shape, dtype=np.intp) if axes else np.zeros((0,), dtype=np.intp)

    def go(s: Term) -> np.ndarray:
        if isinstance(s, Var):
            if s.index not in position:
                raise EvaluationError(f"unbound variable x{s.index}")
            return grids[position[s.index]]
        try:
            table = alg.tables[s.symbol]
        except KeyError:
            raise EvaluationError(f"symbol {s.symbol!r} not interpreted") from None
        if table.ndim != len(s.args):
            raise EvaluationError(f"arity mismatch for {s.symbol!r}")
        if not s.args:
            return np.broadcast_to(table, shape)
        return table[tuple(go(a) for a in s.args)]

    return np.broadcast_to(go(t), shape)


def _first_mismatch(lhs: np.ndarray, rhs: np.ndarray, axes: Sequence[int]) -> dict[int, int] | None:
    bad = (lhs != rhs).ravel()
    if not bad.any():
        return None
    flat = int(np.argmax(bad))
    point = np.unravel_index(flat, lhs.shape) if lhs.ndim else ()
    return {v: int(c) for v, c in zip(axes, point)}


def check_identity(alg: "FiniteAlgebra", eq: Equation) -> Verdict:
    """Decide ``alg |= lhs = rhs`` by trying all ``n**k`` assignments.

    On failure the counterexample is the lexicographically least assignment
    (variable 0 most significant).
    """
    axes = sorted(eq.variables())
    lhs = eval_grid(eq.lhs, alg, axes)
    rhs = eval_grid(eq.rhs, alg, axes)
    bad = _first_mismatch(lhs, rhs, axes)
    if bad is None:
        return Verdict(True, certified_on=(alg.name,) if alg.name else ())
    return Verdict(False, counterexample={
        "algebra": alg.name,
        "equation": eq.label,
        "assignment": bad,
        "lhs": eval_term(eq.lhs, alg, bad),
        "rhs": eval_term(eq.rhs, alg, bad),
    })


def check_theory(alg: "FiniteAlgebra", th: Theory) -> list[Verdict]:
    if not alg.signature.includes(th.signature):
        raise SignatureError(f"algebra {alg.name or '<anon>'} does not interpret theory {th.name}")
    return [check_identity(alg, eq) for eq in th.equations]


def satisfies(alg: "FiniteAlgebra", th: Theory) -> bool:
    return all(v.ok for v in check_theory(alg, th))

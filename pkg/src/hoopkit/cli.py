"""Command-line front end.

Every subcommand produces a :class:`Report`. The exit code depends on the
report alone: 0 when ok, 2 when it carries an ``error``, 1 otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from hoopkit import corpus as cp
from hoopkit.algebra import FiniteAlgebra, Homomorphism, HomomorphismError, Point, PointError, all_congruences, reduct
from hoopkit.equivalence import (BJWitness, PreconditionError, check_bj_witness, check_maltsev,
                                 check_split_short_five, hoop_witness, kernel_functor, kernel_inclusion,
                                 mv_witness, phi_isomorphism, points_over_l2, roundtrip_hoop, roundtrip_point)
from hoopkit.ideals import (EmptySubsetError, enumerate_filters, enumerate_mv_ideals, is_relative_u_ideal,
                            is_ring_ideal, _nonempty_subsets)
from hoopkit.parsing import ParseError, format_algebra, parse_algebra, parse_term
from hoopkit.search import find_models
from hoopkit.terms import SignatureError, Theory, check_theory
from hoopkit.theories import (CRNG, HOOP, MV, WHOOP, TheoryError, boolean_cube, get_theory, hoop_reduct,
                              integers_mod, lukasiewicz_chain, satisfies)
from hoopkit.unitalisation import additive_exponent, dorroh, mv_closure


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    ok: bool
    details: dict[str, Any] = field(default_factory=dict)
    corpus: list[str] = field(default_factory=list)
    duration_ms: int = 0

    @property
    def exit_code(self) -> int:
        if "error" in self.details:
            return 2
        return 0 if self.ok else 1

    def to_json(self) -> dict[str, Any]:
        return {"command": self.command, "ok": self.ok, "details": self.details, "corpus": self.corpus,
                "duration_ms": self.duration_ms}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def render(self) -> str:
        d = self.details
        if "error" in d:
            return f"error: {d['error']}\n" + (f"hint: {d['hint']}\n" if "hint" in d else "")
        lines = []
        if "text" in d:
            lines.append(d["text"].rstrip("\n"))
        rows = d.get("rows")
        if rows:
            cols = ["algebra", "check", "ok"] + sorted({k for r in rows for k in r} - {"algebra", "check", "ok"})
            cells = [[_cell(r.get(c, "")) for c in cols] for r in rows]
            widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
            lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
            lines.append("  ".join("-" * w for w in widths))
            lines.extend("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells)
        # with algebra text on stdout, keep the rest as comments so the output still parses
        prefix = "# " if "text" in d else ""
        for k in sorted(set(d) - {"text", "rows", "algebra", "criteria"}):
            lines.append(f"{prefix}{k}: {_cell(d[k])}")
        status = "OK" if self.ok else "FAIL"
        lines.append(f"{prefix}{self.command}: {status} ({len(self.corpus)} algebras, {self.duration_ms} ms)")
        return "\n".join(lines) + "\n"


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def _rows_ok(rows: list[dict[str, Any]]) -> bool:
    return all(r["ok"] for r in rows)


def _sorted_rows(rows: list[dict[str, Any]]) -> list[dict[str, Any]]:
    return sorted(rows, key=lambda r: (str(r.get("algebra", "")), str(r.get("check", ""))))


def _parallel(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- corpus --------------------------------------------------------------------------

def _corpus(args, check: bool = True) -> tuple[dict[str, FiniteAlgebra], list[str]]:
    files = list(getattr(args, "files", None) or [])
    single = getattr(args, "alg", None)
    if single:
        files.insert(0, single)
    return cp.load_corpus(files, getattr(args, "luk", None) or (), getattr(args, "models", None) or (), check=check)


def _need(corpus: dict[str, FiniteAlgebra]) -> None:
    if not corpus:
        raise UsageError("empty corpus; give algebra files or --luk 2..5 / --models hoops:4")


def _as_hoop(alg: FiniteAlgebra) -> FiniteAlgebra:
    if alg.signature.includes(HOOP.signature):
        return reduct(alg, HOOP.signature).renamed(alg.name, theory="hoop")
    if alg.signature.includes(MV.signature):
        return hoop_reduct(alg)
    raise TheoryError(f"{alg.name} is neither a hoop nor an MV-algebra")


def _subsets(ws) -> list[list[int]]:
    return [w.elements for w in ws]


# -- subcommands ---------------------------------------------------------------------

def _check_one(item: tuple[FiniteAlgebra, Theory]) -> dict[str, Any]:
    alg, th = item
    if HOOP.signature.includes(th.signature) and not alg.signature.includes(th.signature) \
            and alg.signature.includes(MV.signature):
        alg = hoop_reduct(alg).renamed(alg.name)  # hoop theories read MV-algebras through the reduct
    if not alg.signature.includes(th.signature):
        return {"algebra": alg.name, "check": th.name, "ok": False,
                "failed": ["signature"], "counterexample": f"missing symbols of {th.name}"}
    bad = [(eq.label, v.counterexample) for eq, v in zip(th.equations, check_theory(alg, th)) if not v.ok]
    row = {"algebra": alg.name, "check": th.name, "ok": not bad}
    if bad:
        row["failed"] = [label for label, _ in bad]
        row["counterexample"] = _jsonable(bad[0][1])
    return row


def cmd_check(args) -> Report:
    corpus, _ = _corpus(args, check=False)
    _need(corpus)
    items = []
    for alg in corpus.values():
        name = args.theory or alg.theory
        if not name:
            raise UsageError(f"{alg.name} declares no theory; pass --theory")
        items.append((alg, get_theory(name)))
    rows = _sorted_rows(_parallel(_check_one, items, args.jobs))
    return Report("check", _rows_ok(rows), {"rows": rows}, sorted(corpus))


def cmd_gen(args) -> Report:
    family, n = args.family, args.n
    if family == "lukasiewicz":
        alg = lukasiewicz_chain(n)
    elif family == "boolean":
        alg = boolean_cube(n)
    elif family == "zmod":
        alg = integers_mod(n, unital=not args.rng)
    else:  # argparse restricts the choices
        raise UsageError(f"unknown family {family}")
    return Report("gen", True, {"text": format_algebra(alg), "algebra": alg.to_json()}, [alg.name])


def cmd_filters(args) -> Report:
    corpus, failures = _corpus(args)
    _need(corpus)
    out = {name: _subsets(enumerate_filters(_as_hoop(alg))) for name, alg in sorted(corpus.items())}
    return Report("filters", not failures, _with_failures({"filters": out}, failures), sorted(corpus))


def _ring_ideals(alg: FiniteAlgebra) -> list[list[int]]:
    found = [s for s in _nonempty_subsets(alg.size) if is_ring_ideal(alg, s)]
    return [sorted(s) for s in sorted(found, key=lambda s: (len(s), sorted(s)))]


def cmd_ideals(args) -> Report:
    corpus, failures = _corpus(args)
    _need(corpus)
    out = {}
    for name, alg in sorted(corpus.items()):
        if alg.signature.includes(MV.signature):
            out[name] = _subsets(enumerate_mv_ideals(alg))
        elif alg.signature.includes(CRNG.signature):
            out[name] = _ring_ideals(alg)
        else:
            out[name] = _subsets(enumerate_filters(_as_hoop(alg)))
    return Report("ideals", not failures, _with_failures({"ideals": out}, failures), sorted(corpus))


def _parse_subset(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--subset expects comma separated integers, got {text!r}") from None


def cmd_u_ideal(args) -> Report:
    corpus, failures = _corpus(args)
    _need(corpus)
    if args.subset is None and args.sample is None:
        raise UsageError("give --subset 0,2 or --sample K")
    rows = []
    for name, B in sorted(corpus.items()):
        if args.subset is not None:
            subsets = [_parse_subset(args.subset)]
        else:
            rng = np.random.default_rng(args.seed)
            subsets = []
            for _ in range(args.sample):
                mask = rng.integers(0, 2, B.size).astype(bool)
                mask[rng.integers(B.size)] = True
                subsets.append(np.flatnonzero(mask).tolist())
        for s in subsets:
            try:
                v = is_relative_u_ideal(B, s)
            except EmptySubsetError as exc:
                raise UsageError(str(exc)) from None
            row = {"algebra": name, "check": ",".join(map(str, sorted(set(s)))), "ok": v.ok}
            if v.ok:
                row["witness"] = list(v.witness.map)
            else:
                row["counterexample"] = v.counterexample
            rows.append(row)
    rows = _sorted_rows(rows)
    return Report("u-ideal", _rows_ok(rows) and not failures, _with_failures({"rows": rows}, failures), sorted(corpus))


def cmd_congruences(args) -> Report:
    corpus, failures = _corpus(args)
    _need(corpus)
    out = {}
    for name, alg in sorted(corpus.items()):
        if alg.size > args.max_size:
            raise UsageError(f"{name} has {alg.size} elements; raise --max-size to enumerate")
        out[name] = [[sorted(b) for b in c.blocks()] for c in all_congruences(alg, max_size=args.max_size)]
    return Report("congruences", not failures, _with_failures({"congruences": out}, failures), sorted(corpus))


def _single(args) -> FiniteAlgebra:
    corpus, failures = _corpus(args)
    if failures:
        raise TheoryError(failures[0])
    if len(corpus) != 1:
        raise UsageError(f"expected one algebra, found {len(corpus)}")
    return next(iter(corpus.values()))


def _emit_closure(command: str, args, alg: FiniteAlgebra, cr) -> Report:
    side = cr.sidecar()
    if args.sidecar:
        Path(args.sidecar).write_text(json.dumps(side, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    details = {"text": format_algebra(cr.output), "sidecar": side}
    return Report(command, True, details, [alg.name])


def cmd_mv_closure(args) -> Report:
    W = _as_hoop(_single(args))
    if not satisfies(W, WHOOP):
        raise TheoryError(f"{W.name} is not a Wajsberg hoop")
    return _emit_closure("mv-closure", args, W, mv_closure(W))


def cmd_dorroh(args) -> Report:
    R = _single(args)
    if not R.signature.includes(CRNG.signature):
        raise TheoryError(f"{R.name} is not a commutative rng")
    R = reduct(R, CRNG.signature).renamed(R.name, theory="crng")
    m = args.exponent if args.exponent is not None else additive_exponent(R)
    return _emit_closure("dorroh", args, R, dorroh(R, m))


def cmd_roundtrip(args) -> Report:
    rows = []
    names: list[str] = []
    if args.all:
        from hoopkit.suite import generated_points
        hoops = cp.wajsberg_corpus()
        totals: dict[str, list[Point]] = {}
        for pt in generated_points(args.max_total):
            totals.setdefault(pt.total.name, []).append(pt)
    else:
        corpus, failures = _corpus(args)
        _need(corpus)
        if failures:
            raise TheoryError(failures[0])
        hoops, totals = [], {}
        for alg in corpus.values():
            if alg.signature.includes(MV.signature):
                totals[alg.name] = points_over_l2(alg)
            else:
                hoops.append(_as_hoop(alg))
    for W in hoops:
        v = roundtrip_hoop(W)
        row = {"algebra": W.name, "check": "K(M(W)) = W", "ok": v.ok}
        if v.ok:
            row["witness_iso"] = list(v.witness.map)
        else:
            row["counterexample"] = v.counterexample
        rows.append(row)
        names.append(W.name)
    for name, pts in totals.items():
        for i, pt in enumerate(pts):
            v = roundtrip_point(pt)
            row = {"algebra": name, "check": f"M(K(p)) = p #{i}", "ok": v.ok}
            if v.ok:
                row["witness_iso"] = list(v.witness.map)
            else:
                row["counterexample"] = v.counterexample
            rows.append(row)
        names.append(name)
    details = {"rows": _sorted_rows(rows), "points": {name: len(pts) for name, pts in sorted(totals.items())}}
    return Report("roundtrip", _rows_ok(rows), details, sorted(set(names)))


def _default_bj_corpus(theory: str) -> list[FiniteAlgebra]:
    if theory == "mv":
        return cp.dedupe(cp.chains(range(2, 6)) + cp.models_upto("mv", 5))
    return cp.models_upto("hoop", 4) + cp.chain_reducts(range(2, 6))


def _load_witness(spec: str, theory: Theory) -> BJWitness:
    if spec == "builtin":
        return mv_witness() if theory.name == "mv" else hoop_witness()
    data = json.loads(Path(spec).read_text(encoding="utf-8"))
    sig = theory.signature
    return BJWitness(theory, tuple(parse_term(t, sig) for t in data["constants"]),
                     tuple(parse_term(t, sig) for t in data["alphas"]), parse_term(data["theta"], sig))


def _bj_inputs(args) -> tuple[Theory, list[FiniteAlgebra]]:
    th = get_theory(args.theory)
    if th.name not in ("hoop", "whoop", "mv"):
        raise UsageError("--theory must be hoops or mv")
    if th.name == "whoop":
        th = HOOP
    corpus, failures = _corpus(args)
    if failures:
        raise TheoryError(failures[0])
    algs = list(corpus.values()) or _default_bj_corpus(th.name)
    if th.name == "hoop":
        algs = [a if a.signature.includes(HOOP.signature) else _as_hoop(a) for a in algs]
    return th, algs


def cmd_bj_check(args) -> Report:
    th, algs = _bj_inputs(args)
    w = _load_witness(args.witness, th)
    v = check_bj_witness(w, algs)
    return Report("bj-check", v.ok, _verdict_details(v), sorted(a.name for a in algs))


def cmd_maltsev(args) -> Report:
    th, algs = _bj_inputs(args)
    v = check_maltsev(algs, _load_witness(args.witness, th))
    return Report("maltsev", v.ok, _verdict_details(v), sorted(a.name for a in algs))


def _load_point(path: str) -> Point:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    for key in ("total", "base", "proj", "sect"):
        if key not in data:
            raise UsageError(f"point file lacks {key!r}")

    def alg(v) -> FiniteAlgebra:
        if isinstance(v, str):
            return parse_algebra(v)
        return FiniteAlgebra.from_json(v, get_theory(v.get("theory") or "mv").signature)

    total, base = alg(data["total"]), alg(data["base"])
    return Point(total, base, Homomorphism(total, base, data["proj"]), Homomorphism(base, total, data["sect"]))


def cmd_ssfl(args) -> Report:
    pt = _load_point(args.pointfile)
    W = kernel_functor(pt)
    cr = mv_closure(W)
    phi = phi_isomorphism(pt, cr)
    v = check_split_short_five(cr.unit, kernel_inclusion(pt), cr.point, pt, phi)
    details = {"ok": v.ok}
    if v.ok:
        details["witness_iso"] = list(phi.map)
        details["inverse"] = list(v.witness.map)
    else:
        details["counterexample"] = v.counterexample
    return Report("ssfl", v.ok, details, [pt.total.name])


def cmd_find_models(args) -> Report:
    th = get_theory(args.theory)
    models = find_models(th, args.size, limit=args.limit)
    text = "".join(format_algebra(m) for m in models)
    return Report("find-models", True, {"text": text, "count": len(models), "theory": th.name, "size": args.size},
                  [m.name for m in models])


def _criterion(i: int):
    from hoopkit.suite import CRITERIA
    return CRITERIA[i - 1]()


QUICK = [1, 3, 4, 5, 6]


def cmd_suite(args) -> Report:
    from hoopkit.suite import CRITERIA
    if args.criterion:
        select = sorted(set(args.criterion))
        if any(not 1 <= i <= len(CRITERIA) for i in select):
            raise UsageError(f"criteria are numbered 1..{len(CRITERIA)}")
    else:
        select = list(range(1, len(CRITERIA) + 1)) if args.full else QUICK
    results = _parallel(_criterion, select, args.jobs)
    rows = [{"algebra": f"criterion {r.number}", "check": r.title, "ok": r.passed,
             "seconds": round(r.seconds, 2), "budget": "-" if r.budget is None else r.budget,
             "setup": round(r.setup_seconds, 2), "failures": len(r.failures)} for r in results]
    details = {"rows": rows, "criteria": [r.to_json() for r in results]}
    ok = all(r.passed for r in results)
    return Report("suite", ok, details, [])


# -- plumbing ------------------------------------------------------------------------

def _jsonable(v: Any) -> Any:
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        items = sorted(v) if isinstance(v, (set, frozenset)) else v
        return [_jsonable(x) for x in items]
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, FiniteAlgebra):
        return v.name
    return v


def _verdict_details(v) -> dict[str, Any]:
    return _jsonable(v.to_json())


def _with_failures(details: dict[str, Any], failures: list[str]) -> dict[str, Any]:
    if failures:
        details["theory_failures"] = failures
    return details


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _corpus_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--luk", action="append", metavar="N|A..B", help="add Lukasiewicz chains")
    p.add_argument("--models", action="append", metavar="THEORY:N", help="add model-search results")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes for corpus checks")
    common.add_argument("--seed", type=int, default=0, metavar="N", help="seed for sampled subset checks")

    p = _Parser(prog="hoopkit", description="Finite hoops, MV-algebras and rings.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        q = sub.add_parser(name, help=help_, parents=[common])
        q.set_defaults(fn=fn)
        return q

    q = add("check", cmd_check, "check algebras against a theory")
    q.add_argument("files", nargs="*")
    q.add_argument("--theory")
    _corpus_flags(q)

    q = add("gen", cmd_gen, "print a built-in algebra")
    q.add_argument("family", choices=["lukasiewicz", "boolean", "zmod"])
    q.add_argument("n", type=int)
    q.add_argument("--rng", action="store_true", help="zmod without the unit")

    for name, fn, help_ in (("filters", cmd_filters, "list the filters of hoops"),
                            ("ideals", cmd_ideals, "list MV-ideals or ring ideals"),
                            ("congruences", cmd_congruences, "list all congruences")):
        q = add(name, fn, help_)
        q.add_argument("files", nargs="*")
        _corpus_flags(q)
        if name == "congruences":
            q.add_argument("--max-size", type=int, default=6)

    q = add("u-ideal", cmd_u_ideal, "decide relative U-ideals of MV-algebras")
    q.add_argument("files", nargs="*")
    q.add_argument("--subset")
    q.add_argument("--sample", type=int, metavar="K", help="test K random subsets (uses --seed)")
    _corpus_flags(q)

    q = add("mv-closure", cmd_mv_closure, "MV-closure of a Wajsberg hoop")
    q.add_argument("alg")
    q.add_argument("--sidecar", metavar="PATH", help="write unit/proj/sect maps as JSON")

    q = add("dorroh", cmd_dorroh, "unitalise a commutative rng")
    q.add_argument("alg")
    q.add_argument("--exponent", type=int)
    q.add_argument("--sidecar", metavar="PATH")

    q = add("roundtrip", cmd_roundtrip, "kernel functor round trips")
    q.add_argument("files", nargs="*")
    q.add_argument("--all", action="store_true", help="built-in hoop and point corpus")
    q.add_argument("--max-total", type=int, default=8)
    _corpus_flags(q)

    for name, fn in (("bj-check", cmd_bj_check), ("maltsev", cmd_maltsev)):
        q = add(name, fn, "check the subtraction witness" if name == "bj-check" else "check the Mal'tsev term")
        q.add_argument("files", nargs="*")
        q.add_argument("--theory", default="hoops")
        q.add_argument("--witness", default="builtin", help="'builtin' or a JSON file of terms")
        _corpus_flags(q)

    q = add("ssfl", cmd_ssfl, "split short five lemma on a point over L2")
    q.add_argument("pointfile")

    q = add("find-models", cmd_find_models, "enumerate models up to isomorphism")
    q.add_argument("theory")
    q.add_argument("--size", type=int, required=True)
    q.add_argument("--limit", type=int)

    q = add("suite", cmd_suite, "run the acceptance criteria")
    q.add_argument("--full", action="store_true", help="all criteria (default: the quick ones)")
    q.add_argument("--criterion", type=int, action="append", metavar="N")
    return p


_INPUT_ERRORS = (UsageError, ParseError, OSError, KeyError, json.JSONDecodeError, SignatureError, TheoryError,
                 HomomorphismError, PointError, PreconditionError, cp.CorpusError, ValueError)


def run(argv: Sequence[str]) -> Report:
    start = time.perf_counter()
    command = argv[0] if argv else ""
    try:
        args = build_parser().parse_args(list(argv))
        command = args.command
        report = args.fn(args)
    except _INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        details = {"error": f"{type(exc).__name__}: {msg}"}
        if isinstance(exc, UsageError) and "empty corpus" in str(exc):
            details["hint"] = "hoopkit check --luk 2..5 --theory mv"
        report = Report(command, False, details)
    report.details = _jsonable(report.details)
    report.duration_ms = int(round((time.perf_counter() - start) * 1000))
    return report


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] in ("-h", "--help"):
        build_parser().print_help()
        return 0 if argv else 2
    want_json = "--json" in argv
    report = run(argv)
    out = report.dumps() + "\n" if want_json else report.render()
    sys.stdout.write(out)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())

import json

import pytest

from hoopkit.algebra import product
from hoopkit.cli import main, run
from hoopkit.parsing import format_algebra, parse_algebra
from hoopkit.search import is_isomorphic
from hoopkit.theories import idempotent_two_chain, lukasiewicz_chain
from hoopkit.unitalisation import mv_closure

L2, L3 = lukasiewicz_chain(2), lukasiewicz_chain(3)


@pytest.fixture
def l3_file(tmp_path):
    f = tmp_path / "l3.alg"
    f.write_text(format_algebra(L3, theory="mv"))
    return str(f)


@pytest.fixture
def bad_file(tmp_path):
    f = tmp_path / "bad.alg"
    f.write_text(format_algebra(L3, name="Bad", theory="mv").replace("[2, 1, 0]", "[2, 0, 1]"))
    return str(f)


def test_check_exit_codes(l3_file, bad_file, tmp_path):
    assert main(["check", l3_file, "--theory", "mv"]) == 0
    assert main(["check", bad_file, "--theory", "mv"]) == 1
    assert main(["check", str(tmp_path / "missing.alg")]) == 2
    assert main(["check"]) == 2  # empty corpus
    assert main(["check", l3_file, "--theory", "groups"]) == 2


def test_hoop_theory_checks_the_reduct(l3_file):
    r = run(["check", l3_file, "--theory", "whoop"])
    assert r.ok and r.details["rows"][0]["check"] == "whoop"


def test_empty_corpus_gives_hint(capsys):
    assert main(["ideals"]) == 2
    out = capsys.readouterr().out
    assert "empty corpus" in out and "hint:" in out


def test_help():
    assert main([]) == 2
    assert main(["--help"]) == 0


def test_json_round_trips_byte_identically(l3_file, capsys):
    main(["filters", l3_file, "--luk", "2", "--json"])
    out = capsys.readouterr().out
    data = json.loads(out)
    assert json.dumps(data, sort_keys=True, indent=2) + "\n" == out
    assert set(data) == {"command", "ok", "details", "corpus", "duration_ms"}
    assert data["corpus"] == ["L2", "L3"]


def test_gen_output_parses_back(capsys):
    for argv, expect in ((["gen", "lukasiewicz", "4"], lukasiewicz_chain(4)),
                         (["gen", "boolean", "2"], product(L2, L2)[0])):
        assert main(argv) == 0
        assert is_isomorphic(parse_algebra(capsys.readouterr().out), expect)
    assert main(["gen", "zmod", "6", "--rng"]) == 0
    assert parse_algebra(capsys.readouterr().out).size == 6


def test_ideals_and_congruences(l3_file):
    r = run(["ideals", l3_file])
    assert r.ok and r.details["ideals"] == {"L3": [[0], [0, 1, 2]]}
    r = run(["congruences", "--luk", "2..3"])
    assert r.ok and r.corpus == ["L2", "L3"]


def test_u_ideal(l3_file):
    assert run(["u-ideal", l3_file, "--subset", "2"]).ok
    assert not run(["u-ideal", l3_file, "--subset", "1,2"]).ok
    assert run(["u-ideal", l3_file, "--sample", "5", "--seed", "3"]).details["rows"]
    assert run(["u-ideal", l3_file, "--subset", ""]).exit_code == 2
    assert run(["u-ideal", l3_file]).exit_code == 2


def test_mv_closure_and_sidecar(tmp_path, capsys):
    f = tmp_path / "c2.alg"
    f.write_text(format_algebra(idempotent_two_chain(), theory="whoop"))
    side = tmp_path / "side.json"
    assert main(["mv-closure", str(f), "--sidecar", str(side)]) == 0
    out = parse_algebra(capsys.readouterr().out)
    assert is_isomorphic(out, mv_closure(idempotent_two_chain()).output)
    assert json.loads(side.read_text())["sect"] == [2, 3]


def test_dorroh(tmp_path):
    f = tmp_path / "z2.alg"
    assert main(["gen", "zmod", "2", "--rng"]) == 0
    from hoopkit.theories import integers_mod
    f.write_text(format_algebra(integers_mod(2, unital=False), name="Z2", theory="crng"))
    r = run(["dorroh", str(f)])
    assert r.ok and r.exit_code == 0
    assert run(["dorroh", str(f), "--exponent", "3"]).exit_code == 2


def test_roundtrip_and_witness_commands(l3_file):
    r = run(["roundtrip", "--all", "--max-total", "6"])
    assert r.ok and r.details["points"]
    assert run(["roundtrip", l3_file]).details["points"] == {"L3": 0}
    assert run(["bj-check"]).ok
    assert run(["bj-check", "--theory", "mv"]).ok
    assert run(["maltsev", "--theory", "mv"]).ok


def test_ssfl(tmp_path):
    pt = mv_closure(idempotent_two_chain()).point
    doc = {"total": format_algebra(pt.total, theory="mv"), "base": format_algebra(pt.base, theory="mv"),
           "proj": list(pt.proj.map), "sect": list(pt.sect.map)}
    f = tmp_path / "point.json"
    f.write_text(json.dumps(doc))
    r = run(["ssfl", str(f)])
    assert r.ok and sorted(r.details["witness_iso"]) == list(range(4))
    del doc["sect"]
    f.write_text(json.dumps(doc))
    assert run(["ssfl", str(f)]).exit_code == 2


def test_find_models():
    r = run(["find-models", "mv", "--size", "4"])
    assert r.ok and r.details["count"] == 2


def test_suite_single_criterion():
    r = run(["suite", "--criterion", "1"])
    assert r.ok and [c["number"] for c in r.details["criteria"]] == [1]
    assert run(["suite", "--criterion", "9"]).exit_code == 2

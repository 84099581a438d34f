import json

from catbench.cli import main
from catbench.harness import bundled_path, check_bound_over_domain
from catbench.programs import GCD_P_SRC
from catbench.registry import default_registry
from catbench.semantics import TestBudget
from catbench.syntax import Num, parse


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_bundled_gcd_application(capsys):
    code, out, _ = run(["eval", "gcd_app_2_4", "--mode", "seq"], capsys)
    assert code == 0
    assert "value: 2" in out
    steps = int(out.split("steps: ")[1].split()[0])
    assert steps <= 25


def test_eval_zero(capsys):
    code, out, _ = run(["eval", "zero", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "0" and doc["steps"] == 0


def test_eval_fib_span(capsys):
    code, out, _ = run(["eval", "fib_app_2", "--mode", "par"], capsys)
    assert code == 0
    assert "value: 1" in out
    span = int(out.split("span: ")[1].split()[0])
    assert span <= 25


def test_eval_trace_flag(capsys):
    code, out, _ = run(["eval", "gcd_app_2_4", "--trace", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert len(doc["trace"]) == doc["steps"]


def test_exit_code_parse_error(tmp_path, capsys):
    f = tmp_path / "bad.cat"
    f.write_text("(fst zero")
    code, _, err = run(["eval", str(f)], capsys)
    assert code == 1 and "parse error" in err


def test_exit_code_stuck(tmp_path, capsys):
    f = tmp_path / "stuck.cat"
    f.write_text("(fst zero)")
    code, _, err = run(["eval", str(f)], capsys)
    assert code == 2 and "stuck" in err


def test_exit_code_fuel(tmp_path, capsys):
    f = tmp_path / "loop.cat"
    f.write_text("(ap (fun f a (ap f a)) zero)")
    code, _, err = run(["eval", str(f), "--fuel", "100"], capsys)
    assert code == 3 and "fuel" in err


def test_exit_code_schema(tmp_path, capsys):
    f = tmp_path / "bad.deriv.json"
    f.write_text("{}")
    code, _, err = run(["check-derivation", str(f)], capsys)
    assert code == 4 and "schema" in err


def test_check_bound_gcd_passes(capsys):
    code, out, _ = run([
        "check-bound", "--program", "gcd", "--bound", "gcd.P",
        "--domain", "gcd.A", "--samples", "32", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "pass" and len(doc["samples"]) == 32


def test_check_bound_weakened_bound_fails(tmp_path, capsys):
    shrunk = tmp_path / "bad_bound.cat"
    shrunk.write_text(f"(cff2 - {GCD_P_SRC.strip()} 1)")
    code, out, _ = run([
        "check-bound", "--program", "gcd", "--bound", str(shrunk),
        "--domain", "gcd.A", "--samples", "24", "--json"], capsys)
    assert code == 5
    doc = json.loads(out)
    assert any(s["verdict"] == "fail" for s in doc["samples"])


def test_check_derivation_bundled(capsys):
    for name in ("countdown", "gcd", "fib"):
        code, out, _ = run(["check-derivation", name], capsys)
        assert code == 0, out
        assert "holds" in out


def test_seed_env_var_overrides(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CCTT_SEED", "99")
    code, out1, _ = run([
        "check-bound", "--program", "gcd", "--bound", "gcd.P",
        "--domain", "gcd.A", "--samples", "8", "--json"], capsys)
    assert code == 0
    assert json.loads(out1)["seed"] == 99


def test_fib_exhaustive_bound_via_api(reg):
    fib = parse(bundled_path("fib", "program").read_text())
    p = parse(bundled_path("fib.P", "program").read_text())
    budget = TestBudget(mode="par")
    report = check_bound_over_domain(
        fib, p, "n", parse("nat"), reg, budget,
        arguments=[Num(n) for n in range(11)])
    assert report.passed and len(report.samples) == 11


def test_check_bound_small_word_size(reg):
    from catbench.programs import gcd_bound, gcd_domain, gcd_term
    from catbench.syntax import Fst, Snd, as_numeral
    from catbench.evaluation import eval_seq
    from catbench.registry import EvalConfig
    budget = TestBudget(word_size=8, samples=32)
    report = check_bound_over_domain(
        gcd_term(), gcd_bound(), "a", gcd_domain(8),
        default_registry(), budget)
    assert report.passed
    cfg = EvalConfig()
    for s in report.samples:
        arg = parse(s.argument)
        assert as_numeral(eval_seq(Fst(arg), default_registry(), cfg).value) < 8
        assert as_numeral(eval_seq(Snd(arg), default_registry(), cfg).value) < 8


def test_suite_json_output(capsys):
    code, out, _ = run(["suite", "--json", "--samples", "32"], capsys)
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 10
    assert all(r["verdict"] == "pass" for r in rows)
    assert {"criterion", "verdict", "detail", "seconds", "seed"} <= set(rows[0])

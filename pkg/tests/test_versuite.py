"""Case format, verifier wiring, suite exit codes, and the CLI."""

import json
from pathlib import Path

import pytest

from resweil import MPoly, PrimeField, weil_restrict
from resweil.errors import CaseSyntaxError, NonPrime, UndeclaredVariable
from resweil.versuite import (
    ambient_degree,
    main,
    parse_case,
    parse_poly,
    render_case,
    run_suite,
    verify_case,
    verify_lemma_local,
    verify_theorem,
)

CASES = Path(__file__).resolve().parent.parent / "cases"

DUAL = """\
case "dual-numbers-etale"
field p = 7
algebra A : vars eps ; rels eps^2
scheme X : vars y ; rels y^2 - y - eps
expect S = 1
expect pi0_res = 2
checks theorem, lemma-local, adjunction(1,2,3), cover(y, y-1)
"""


def corpus(name):
    return str(CASES / (name + ".case"))


# ---------------------------------------------------------------- parsing

def test_parse_example_case():
    case = parse_case(DUAL)
    assert case.name == "dual-numbers-etale"
    assert case.p == 7
    assert case.algebra.dimension == 2
    assert case.algebra_blocks[0][0] == "A"
    assert case.scheme_vars == ("y",)
    assert case.product is None
    assert [k for k, _ in case.expects] == ["S", "pi0_res"]
    assert case.checks[0] == ("theorem",)
    assert case.checks[1] == ("lemma-local",)
    assert case.checks[2] == ("adjunction", (1, 2, 3))
    assert case.checks[3][0] == "cover" and len(case.checks[3][1]) == 2


def test_comments_and_blank_lines_ignored():
    text = DUAL.replace('field p = 7', '# leading remark\n\nfield p = 7  # inline')
    assert parse_case(text) == parse_case(DUAL)


def test_round_trip_every_corpus_file():
    files = sorted(CASES.glob("*.case"))
    assert len(files) == 15
    for path in files:
        case = parse_case(path.read_text())
        again = parse_case(render_case(case))
        assert again == case, path.name


def test_render_normalizes_coefficients():
    rendered = render_case(parse_case(DUAL))
    assert "rels y^2 + 6*eps + 6*y" in rendered
    assert "cover(y, y + 6)" in rendered


def test_undeclared_variable_carries_position():
    text = DUAL.replace("y^2 - y - eps", "y^2 - u")
    with pytest.raises(UndeclaredVariable) as ei:
        parse_case(text)
    line = text.splitlines()[3]
    assert "line 4, col %d" % (line.index("u") + 1) in str(ei.value)
    assert "'u'" in str(ei.value)


def test_nonprime_characteristic_rejected():
    with pytest.raises(NonPrime):
        parse_case(DUAL.replace("p = 7", "p = 9"))
    with pytest.raises(NonPrime):
        parse_case(DUAL.replace("p = 7", "p = 2"))


def test_syntax_error_positions():
    text = 'case "x"\nfield p = 7\nalgebra A :\nscheme X : vars y ; rels y^'
    with pytest.raises(CaseSyntaxError) as ei:
        parse_case(text)
    assert (ei.value.line, ei.value.col) == (4, len(text.splitlines()[3]) + 1)

    with pytest.raises(CaseSyntaxError) as ei:
        parse_case('case "oops')
    assert (ei.value.line, ei.value.col) == (1, 6)

    with pytest.raises(CaseSyntaxError) as ei:
        parse_case('case "x"\nfrobble 3\n')
    assert (ei.value.line, ei.value.col) == (2, 1)


def _reject(text, fragment):
    with pytest.raises(CaseSyntaxError) as ei:
        parse_case(text)
    assert fragment in str(ei.value), str(ei.value)


def test_structural_rules():
    _reject("field p = 7\n", "field before case")
    _reject('case "a"\ncase "b"\n', "duplicate case")
    _reject('case "a"\nalgebra A :\n', "algebra before field")
    _reject('case "a"\nfield p = 7\nscheme X : vars y\n',
            "scheme before any algebra")
    _reject('case "a"\nfield p = 7\nalgebra A :\nalgebra B :\n'
            'algebra C :\nscheme X :\n', "at most two")
    _reject('case "a"\nfield p = 7\nexpect S = 1\n', "expect before scheme")
    _reject('case "a"\nfield p = 7\n', "missing")
    _reject('case "a"\nfield p = 7\nalgebra A : vars t t\nscheme X :\n',
            "declared twice")
    _reject('case "a"\nfield p = 7\nalgebra A : vars t\n'
            'scheme X : vars t\n', "already in use")
    _reject('case "a"\nfield p = 7\nalgebra A :\nscheme X :\n'
            'expect bogus = 1\n', "unknown expectation")
    _reject('case "a"\nfield p = 7\nalgebra A :\nscheme X :\n'
            'expect S = 1\nexpect S = 1\n', "duplicate expectation")
    _reject('case "a"\nfield p = 7\nalgebra A :\nscheme X :\n'
            'checks wiggle\n', "unknown check")
    _reject('case "a"\nfield p = 7\nalgebra A :\nscheme X :\n'
            'checks theorem(1)\n', "takes no arguments")
    _reject('case "a"\nfield p = 7\nalgebra A :\nscheme X :\n'
            'checks product\n', "needs two algebra blocks")
    _reject('case "a"\nfield p = 7\nalgebra A :\nscheme X :\n'
            'checks adjunction(0)\n', "must be positive")


def test_parse_poly_matches_constructed():
    F = PrimeField(7)
    ctx = ("t", "y")
    t = MPoly.variable(F, ctx, "t")
    y = MPoly.variable(F, ctx, "y")
    one = MPoly.constant(F, ctx, 1)
    got = parse_poly("(y - 1)^2 + 2*t*y", F, ctx)
    assert got == (y - one) ** 2 + t * y * 2
    assert parse_poly("3", F, ctx) == MPoly.constant(F, ctx, 3)
    with pytest.raises(CaseSyntaxError):
        parse_poly("y + ;", F, ctx)
    with pytest.raises(CaseSyntaxError):
        parse_poly("y y", F, ctx)


def test_product_case_parses_to_product_base():
    case = parse_case(Path(corpus("split-pair-quadratic")).read_text())
    assert case.product is not None
    assert case.algebra.dimension == 2
    assert case.algebra.vars == ("w",)
    assert len(case.algebra_blocks) == 2


def test_hyphenated_check_names():
    text = ('case "a"\nfield p = 7\nalgebra A : vars eps ; rels eps^2\n'
            'scheme X : rels eps\nchecks lemma-local, non-smooth\n')
    case = parse_case(text)
    assert case.checks == (("lemma-local",), ("non-smooth",))


# ------------------------------------------------------------ verification

def test_verify_quadratic_case():
    case = parse_case(Path(corpus("quadratic-field-cover")).read_text())
    rep = verify_case(case)
    assert rep.ok()
    assert rep.S["count"] == 2
    assert rep.pi0_left["count"] == 4
    assert rep.pi0_right["count"] == 4
    assert rep.cycle_types == {"left": [4], "right": [4], "equal": True}
    assert rep.psi_witness["bijective"] and rep.psi_witness["equivariant"]
    assert len(rep.psi_witness["pairs"]) == 4
    assert [c.name for c in rep.checks] == [
        "expect S", "expect pi0_res", "expect fibers",
        "expect cycle_type", "theorem", "adjunction"]


def test_verify_negative_control():
    rep = verify_case(parse_case(Path(corpus("nilpotent-collapse")).read_text()))
    assert rep.ok()
    assert rep.restriction["groebner"] == ["1"]
    assert rep.restriction["empty"] is True
    assert rep.pi0_left["count"] == 0
    assert rep.pi0_right["count"] == 1
    assert rep.cycle_types["equal"] is False
    assert rep.psi_witness["bijective"] is False


def test_verify_theorem_forced_on_negative_case():
    case = parse_case(Path(corpus("nilpotent-collapse")).read_text())
    rep = verify_theorem(case)
    thm = [c for c in rep.checks if c.name == "theorem"]
    assert len(thm) == 1 and not thm[0].ok
    assert "precheck" in thm[0].detail
    assert not rep.ok()


def test_verify_lemma_local_needs_rational_residue():
    # the whole-field base is local with residue degree 2, so the direct
    # reduction must refuse rather than produce a junk comparison
    case = parse_case(Path(corpus("tensor-mixed-base")).read_text())
    rep = verify_lemma_local(case)
    lem = [c for c in rep.checks if c.name == "lemma-local"]
    assert len(lem) == 1 and not lem[0].ok
    assert "local base" in lem[0].detail


def test_ambient_degree_values():
    expected = {"dual-numbers-etale": 1, "quadratic-field-cover": 4,
                "cubic-field-pair": 2, "split-pair-cubic": 3,
                "quartic-tower": 4}
    for name, deg in expected.items():
        case = parse_case(Path(corpus(name)).read_text())
        R = weil_restrict(case.algebra, case.scheme)
        assert ambient_degree(case.algebra, case.scheme, R) == deg, name


def test_report_object_shape():
    rep = verify_case(parse_case(DUAL))
    obj = rep.to_obj()
    assert list(obj.keys()) == [
        "case", "inputs", "dims", "S", "fibers", "restriction",
        "pi0_left", "pi0_right", "cycle_types", "psi_witness",
        "checks", "timings_ms", "seed"]
    assert obj["timings_ms"] is None
    assert rep.timings_ms["total"] > 0
    json.dumps(obj)  # everything must be serializable as-is


def test_report_objects_deterministic():
    a = verify_case(parse_case(DUAL), seed=42).to_obj()
    b = verify_case(parse_case(DUAL), seed=42).to_obj()
    assert json.dumps(a) == json.dumps(b)


# ------------------------------------------------------------- the suite

def test_suite_runs_in_name_order():
    paths = [corpus("triple-split-line"), corpus("dual-numbers-etale"),
             corpus("cubic-dual-lift")]
    result = run_suite(paths)
    assert result.exit_code == 0
    assert [r.case for r in result.reports] == [
        "cubic-dual-lift", "dual-numbers-etale", "triple-split-line"]


def test_wrong_expectation_exits_1(tmp_path):
    bad = tmp_path / "wrong.case"
    bad.write_text(DUAL.replace("expect pi0_res = 2", "expect pi0_res = 5"))
    result = run_suite([str(bad)])
    assert result.exit_code == 1
    mism = [c for c in result.reports[0].checks if c.name == "expect pi0_res"]
    assert not mism[0].ok and "expected 5" in mism[0].detail


def test_corrupted_file_exits_2(tmp_path):
    broken = tmp_path / "broken.case"
    broken.write_text('case "broken"\nfield p = \n')
    result = run_suite([str(broken), corpus("dual-numbers-etale")])
    assert result.exit_code == 2
    assert [r.case for r in result.reports] == ["dual-numbers-etale"]
    (path, kind, message) = result.problems[0]
    assert kind == "input" and "line 2" in message


def test_missing_file_exits_2(tmp_path):
    result = run_suite([str(tmp_path / "nope.case")])
    assert result.exit_code == 2
    assert result.problems[0][1] == "input"


def test_guard_stop_exits_3():
    result = run_suite([corpus("quadratic-field-cover")], guard=3)
    assert result.exit_code == 3
    assert result.problems[0][1] == "guard"
    assert not result.reports


def test_input_error_outranks_guard(tmp_path):
    broken = tmp_path / "broken.case"
    broken.write_text("????")
    result = run_suite([str(broken), corpus("quadratic-field-cover")], guard=3)
    assert result.exit_code == 2


# ------------------------------------------------------------------- CLI

def test_cli_restrict(capsys):
    assert main(["restrict", corpus("dual-numbers-etale")]) == 0
    out = capsys.readouterr().out
    assert "variables: y0 y1" in out
    assert "groebner:" in out
    assert "empty: no" in out


def test_cli_pi0(capsys):
    assert main(["pi0", corpus("dual-numbers-etale")]) == 0
    out = capsys.readouterr().out
    assert "components: 2" in out
    assert "cycle type: (1, 1)" in out


def test_cli_points_at_stages(capsys):
    assert main(["points", corpus("quadratic-field-cover"), "--ext", "4"]) == 0
    assert "points: 4" in capsys.readouterr().out
    assert main(["points", corpus("quadratic-field-cover")]) == 0
    assert "points: 0" in capsys.readouterr().out
    assert main(["points", corpus("quadratic-field-cover"), "--ext", "0"]) == 2


def test_cli_verify_human(capsys):
    rc = main(["verify", corpus("dual-numbers-etale"),
               corpus("nilpotent-collapse")])
    out = capsys.readouterr().out
    assert rc == 0
    assert "case dual-numbers-etale: pass" in out
    assert "case nilpotent-collapse: pass" in out
    assert "[ok ] theorem:" in out


def test_cli_verify_json_is_deterministic(capsys):
    files = [corpus("dual-numbers-etale"), corpus("nilpotent-collapse"),
             corpus("norm-one-pair")]
    assert main(["verify", "--json", "--seed", "42"] + files) == 0
    first = capsys.readouterr().out
    assert main(["verify", "--json", "--seed", "42"] + files) == 0
    second = capsys.readouterr().out
    assert first == second
    reports = json.loads(first)
    assert [r["case"] for r in reports] == [
        "dual-numbers-etale", "nilpotent-collapse", "norm-one-pair"]
    assert all(r["seed"] == 42 for r in reports)
    assert all(r["timings_ms"] is None for r in reports)


def test_cli_exit_codes(tmp_path, capsys):
    broken = tmp_path / "broken.case"
    broken.write_text('case "broken"\n?')
    assert main(["verify", str(broken)]) == 2
    assert "input error" in capsys.readouterr().err

    wrong = tmp_path / "wrong.case"
    wrong.write_text(DUAL.replace("expect S = 1", "expect S = 3"))
    assert main(["verify", str(wrong)]) == 1
    capsys.readouterr()

    assert main(["restrict", str(tmp_path / "absent.case")]) == 2
    assert main(["pi0", str(broken)]) == 2
    capsys.readouterr()


def test_cli_requires_subcommand():
    with pytest.raises(SystemExit) as ei:
        main([])
    assert ei.value.code == 2

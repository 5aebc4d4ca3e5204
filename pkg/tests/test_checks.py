import json

from boardhdl.compiler import compile_source

from conftest import DESIGNS


def test_blinky_check_ids(blinky_source):
    report = compile_source(blinky_source, "Blinky").report
    assert [r.id for r in report.results] == sorted(r.id for r in report.results)
    ids = {r.id for r in report.results}
    assert "blinky.digital0_net.voltage@blinky.led.io" in ids
    assert "blinky.digital0_net.threshold@blinky.led.io" in ids
    assert "blinky.digital0_net.current" in ids
    assert "blinky.led.led_current" in ids
    assert report.summary == {"pass": 6, "fail": 0, "unresolved": 0}


def test_overvoltage_single_fail():
    report = compile_source((DESIGNS / "overvoltage.bhdl").read_text(), "Overvoltage").report
    assert report.summary == {"pass": 1, "fail": 1, "unresolved": 0}
    fail = report.by_id("overvoltage.out_net.voltage@overvoltage.load.pwr")
    assert fail.status == "fail"
    assert report.summary_line() == "checks: 1 pass, 1 fail, 0 unresolved"


def test_report_json_layout():
    report = compile_source((DESIGNS / "overvoltage.bhdl").read_text(), "Overvoltage").report
    doc = json.loads(report.to_json())
    assert list(doc) == ["summary", "checks"]
    assert set(doc["checks"][0]) == {"id", "kind", "status", "expr", "observed"}


def test_user_check_fails_and_unresolved():
    src = """
    block B {
      param a: interval = range(1V, 2V)
      param b: interval = range(0V, 1.5V)
      param e: interval = intersect(range(0V, 1V), range(2V, 3V))
      check(subset_of(a, b))
      check(subset_of(e, b))
      check(subset_of(b, range(0V, 5V)))
    }
    """
    report = compile_source(src, "B").report
    assert [(r.id, r.status) for r in report.results] == [
        ("b.check1", "fail"),
        ("b.check2", "unresolved"),
        ("b.check3", "pass"),
    ]


def test_buck_checks_pass_with_both_controllers():
    from boardhdl.cli import load_refinements

    src = (DESIGNS / "buck_demo.bhdl").read_text()
    for cfg in ("buck_tps.json", "buck_lmr.json"):
        report = compile_source(src, "BuckDemo", load_refinements(str(DESIGNS / cfg))).report
        assert report.summary["fail"] == 0 and report.summary["unresolved"] == 0
        assert any(r.id.endswith("input_rating") for r in report.results)

import json
import os

import pytest

from speclap.cli import main as cli_main
from speclap.reporting import (
    CheckSpec,
    ConfigError,
    ExperimentConfig,
    SuiteReport,
    _plan,
    default_config,
    emit_plotdata,
    emit_report,
    parse_config,
    parse_config_file,
    run_suite,
    suite_from_json,
    validate_config,
)

HEADER = "check,domain,grid,params,measured,target,tolerance,status"

MINI = """
domain = interval:60

[check]
name = partition

[check]
name = multiplier_scaling
s = 1
r = 2
p = 2
"""

FAILING = """
domain = square:24

[check]
name = partition

[check]
name = multiplier_scaling
s = 0
r = 2
p = 2
"""


# ---------------------------------------------------------------------------
# config parsing and validation


def test_parse_round_trip():
    cfg = parse_config(MINI)
    assert cfg.domains == ("interval:60",)
    assert [c.name for c in cfg.checks] == ["partition", "multiplier_scaling"]
    assert cfg.checks[1].params == {"s": "1", "r": "2", "p": "2"}


def test_parse_rejects_unknown_top_level_key():
    with pytest.raises(ConfigError, match="unknown"):
        parse_config("domain = interval:60\nfrobnicate = yes\n\n[check]\nname = partition\n")


def test_parse_rejects_unknown_section():
    with pytest.raises(ConfigError):
        parse_config("domain = interval:60\n\n[wat]\nname = partition\n")


def test_parse_rejects_empty_suite():
    with pytest.raises(ConfigError, match="check"):
        parse_config("domain = interval:60\n")


def test_parse_rejects_domain_without_size():
    with pytest.raises(ConfigError):
        parse_config("domain = interval\n\n[check]\nname = partition\n")


def test_validation_catches_unknown_check_at_parse_time():
    # parse_config validates eagerly: nothing runs before the name check
    with pytest.raises(ConfigError, match="wibble"):
        parse_config("domain = interval:60\n\n[check]\nname = wibble\n")


def test_validation_catches_bad_param_value():
    with pytest.raises(ConfigError):
        parse_config(
            "domain = interval:60\n\n[check]\nname = sobolev_embedding\np = zzz\n"
        )


def test_validation_catches_unknown_param_name():
    with pytest.raises(ConfigError):
        parse_config(
            "domain = interval:60\n\n[check]\nname = partition\nwhatever = 3\n"
        )


def test_validate_config_is_also_callable_directly():
    cfg = ExperimentConfig(
        domains=("interval:60",),
        checks=(CheckSpec(name="wibble", domains=(), params={}),),
    )
    with pytest.raises(ConfigError, match="wibble"):
        validate_config(cfg)


def test_shipped_default_config_matches_builtin():
    here = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    shipped = parse_config_file(os.path.join(here, "configs", "default_suite.cfg"))
    assert _plan(shipped) == _plan(default_config())


# ---------------------------------------------------------------------------
# running suites


@pytest.fixture(scope="module")
def mini_suite():
    return run_suite(parse_config(MINI))


def test_counts_add_up(mini_suite):
    c = mini_suite.counts()
    assert c["pass"] + c["fail"] + c["inconclusive"] == c["total"] == 2
    assert c["fail"] == 0


def test_rows_are_sorted(mini_suite):
    names = [r.check for r in mini_suite.rows]
    assert names == sorted(names)


def test_errors_become_fail_rows_and_the_suite_continues():
    # 24 x 24 has too few dyadic blocks for a slope fit; that check errors
    # out but the partition row still runs
    suite = run_suite(parse_config(FAILING))
    by_check = {r.check: r for r in suite.rows}
    assert by_check["partition"].status == "pass"
    bad = by_check["multiplier_scaling"]
    assert bad.status == "fail"
    assert bad.measured is None
    assert "ValueError" in bad.notes
    assert suite.counts()["fail"] == 1
    assert len(suite.failures()) == 1


def test_suite_seed_feeds_ensemble_checks():
    text = "domain = interval:60\nseed = 99\n\n[check]\nname = besov_sandwich\ncount = 2\n"
    a = run_suite(parse_config(text))
    b = run_suite(parse_config(text))
    assert a.rows[0].measured == b.rows[0].measured


# ---------------------------------------------------------------------------
# emission


def test_csv_layout(mini_suite, tmp_path):
    paths = emit_report(mini_suite, str(tmp_path), formats=("csv",))
    text = open(paths["csv"]).read()
    lines = text.splitlines()
    assert lines[0] == HEADER
    assert len(lines) == 3
    for line in lines[1:]:
        assert line.count(",") == 7


def test_empty_suite_writes_header_only_csv(tmp_path):
    empty = SuiteReport(config={}, environment={}, rows=[], wall_clock=[])
    paths = emit_report(empty, str(tmp_path), formats=("csv",))
    assert open(paths["csv"]).read().strip() == HEADER


def test_csv_is_byte_stable(tmp_path):
    cfg = parse_config(MINI)
    a = emit_report(run_suite(cfg), str(tmp_path / "a"), formats=("csv",))
    b = emit_report(run_suite(cfg), str(tmp_path / "b"), formats=("csv",))
    assert open(a["csv"], "rb").read() == open(b["csv"], "rb").read()


def test_json_round_trip(mini_suite, tmp_path):
    paths = emit_report(mini_suite, str(tmp_path), formats=("json",))
    loaded = suite_from_json(paths["json"])
    assert [r.check for r in loaded.rows] == [r.check for r in mini_suite.rows]
    assert [r.measured for r in loaded.rows] == [r.measured for r in mini_suite.rows]
    assert loaded.counts() == mini_suite.counts()


def test_json_carries_more_than_the_csv(mini_suite, tmp_path):
    paths = emit_report(mini_suite, str(tmp_path), formats=("json",))
    doc = json.load(open(paths["json"]))
    assert "environment" in doc
    assert "diagnostics" in doc["rows"][0]


def test_plotdata_written_for_fit_checks(mini_suite, tmp_path):
    written = emit_plotdata(mini_suite, str(tmp_path), svg=True)
    dats = [p for p in written if p.endswith(".dat")]
    svgs = [p for p in written if p.endswith(".svg")]
    assert len(dats) == 1 and len(svgs) == 1
    body = open(dats[0]).read()
    assert "slope" in body
    data_lines = [ln for ln in body.splitlines() if ln and not ln.startswith("#")]
    assert all(len(ln.split()) == 2 for ln in data_lines)
    assert open(svgs[0]).read().startswith("<svg")


def test_no_plotdata_for_checks_without_a_fit(tmp_path):
    suite = run_suite(parse_config("domain = interval:60\n\n[check]\nname = partition\n"))
    assert emit_plotdata(suite, str(tmp_path)) == []


def test_out_dir_env_override(tmp_path, monkeypatch):
    target = tmp_path / "redirected"
    monkeypatch.setenv("SPECLAP_OUT", str(target))
    cfg = parse_config(MINI)
    run_suite(cfg)
    assert (target / "suite.csv").exists()


# ---------------------------------------------------------------------------
# command line


def test_cli_run_ok(tmp_path):
    cfg = tmp_path / "suite.cfg"
    cfg.write_text(MINI)
    code = cli_main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert code == 0
    assert (tmp_path / "out" / "suite.csv").exists()


def test_cli_run_failing_suite_exits_one(tmp_path):
    cfg = tmp_path / "suite.cfg"
    cfg.write_text(FAILING)
    code = cli_main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert code == 1


def test_cli_run_missing_config_exits_two(tmp_path):
    code = cli_main(["run", "--config", str(tmp_path / "missing.cfg")])
    assert code == 2


def test_cli_check_single(tmp_path):
    code = cli_main(["check", "partition", "--domain", "interval:60"])
    assert code == 0


def test_cli_check_unknown_exits_two():
    assert cli_main(["check", "wibble", "--domain", "interval:60"]) == 2


def test_cli_check_with_params():
    code = cli_main([
        "check", "multiplier_scaling", "--domain", "interval:60",
        "--s", "1", "--r", "2", "--p", "2",
    ])
    assert code == 0


def test_cli_domain_summary(capsys):
    code = cli_main(["domain", "--shape", "interval", "--size", "30",
                     "--print-spectrum", "3"])
    assert code == 0
    out = capsys.readouterr().out
    assert "interval" in out


def test_cli_domain_unknown_shape_exits_two():
    assert cli_main(["domain", "--shape", "pretzel", "--size", "10"]) == 2

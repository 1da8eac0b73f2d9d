import json
import os

import pytest

from helpers import abs_instance, two_parabolas, uinstance
from polysel import io
from polysel.cli import main
from polysel.poly import Instance, Polynomial


@pytest.fixture
def parab_path(tmp_path):
    path = tmp_path / "parab.json"
    io.save_instance(two_parabolas(), str(path))
    return str(path)


@pytest.fixture
def abs_path(tmp_path):
    path = tmp_path / "abs.json"
    io.save_instance(abs_instance(), str(path))
    return str(path)


def _payload(path):
    with open(path, "r", encoding="utf-8") as fh:
        return io.split_payload(fh.read())


def _grep(payload, key):
    for line in payload.splitlines():
        if line.startswith(key + ":"):
            return line.split(":", 1)[1].strip()
    raise KeyError(key)


def test_selections_counts(abs_path, tmp_path):
    out = str(tmp_path / "sel.txt")
    assert main(["selections", "--instance", abs_path, "--out", out]) == 0
    payload = _payload(out)
    assert _grep(payload, "count") == "4"
    assert _grep(payload, "truncated") == "false"


def test_selections_cap(abs_path, tmp_path):
    out = str(tmp_path / "sel.txt")
    assert main(["selections", "--instance", abs_path, "--cap", "2",
                 "--out", out]) == 0
    payload = _payload(out)
    assert _grep(payload, "count") == "4"
    assert _grep(payload, "truncated") == "true"


def test_selections_rejects_multivariate(tmp_path, capsys):
    f1 = Polynomial.from_dict(2, {(2, 0): 1.0})
    path = tmp_path / "nd.json"
    io.save_instance(Instance(2, 2, (f1,)), str(path))
    assert main(["selections", "--instance", str(path)]) == 2
    assert "n=1" in capsys.readouterr().err


def test_malformed_instance(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["critical", "--instance", str(path)]) == 2
    assert "error" in capsys.readouterr().err


def test_critical_payload(parab_path, tmp_path):
    out = str(tmp_path / "crit.txt")
    assert main(["critical", "--instance", parab_path, "--out", out]) == 0
    payload = _payload(out)
    assert _grep(payload, "count") == "3"
    assert _grep(payload, "critical_point_bound") == "467"
    assert "0.5\t0.25\t1,2" in payload


def test_critical_subset_guard(tmp_path, capsys):
    inst = uinstance(1, *[[float(i), 1.0] for i in range(13)])
    path = tmp_path / "big.json"
    io.save_instance(inst, str(path))
    assert main(["critical", "--instance", str(path)]) == 2


def test_genericity_exit_codes(parab_path, tmp_path):
    out = str(tmp_path / "gen.txt")
    assert main(["genericity", "--instance", parab_path, "--out", out]) == 0
    assert main(["genericity", "--instance", parab_path, "--strict",
                 "--out", out]) == 1
    payload = _payload(out)
    assert _grep(payload, "overall") == "FAIL"
    assert "distinct_critical_values\tfalse" in payload
    # exact certificates are included for univariate instances
    assert "table pair_certificates" in payload


def test_genericity_pass_instance(tmp_path):
    path = tmp_path / "ok.json"
    io.save_instance(two_parabolas(shift=0.1), str(path))
    assert main(["genericity", "--instance", str(path), "--strict"]) == 0


def test_bounds_values(tmp_path, capsys):
    assert main(["bounds", "--n", "1", "--d", "2", "--r", "2"]) == 0
    text = capsys.readouterr().out
    assert "critical_point_bound: 467" in text
    assert "lojasiewicz_exponent: 18" in text
    assert main(["bounds", "--n", "0", "--d", "2", "--r", "2"]) == 2


def test_loja_command(tmp_path, capsys):
    path = tmp_path / "sq.json"
    io.save_instance(uinstance(2, (0, 0, 1)), str(path))
    assert main(["loja", "--instance", str(path), "--selection", "index:1",
                 "--center", "0", "--strict"]) == 0
    text = capsys.readouterr().out
    assert "verdict: positive-bounded-below" in text


def test_loja_auto_center(abs_path):
    assert main(["loja", "--instance", abs_path, "--selection", "max"]) == 0


def test_loja_bad_center(parab_path, capsys):
    rc = main(["loja", "--instance", parab_path, "--selection", "max",
               "--center", "0"])
    assert rc == 2
    assert "not 0" in capsys.readouterr().err


def test_errorbound_command(tmp_path, capsys):
    path = tmp_path / "p.json"
    io.save_instance(uinstance(2, (-1, 0, 1)), str(path))
    assert main(["errorbound", "--instance", str(path), "--selection", "index:1",
                 "--grid=-3:3:0.01", "--strict"]) == 0
    text = capsys.readouterr().out
    assert "verdict: positive" in text


def test_goodness_command(abs_path, capsys):
    assert main(["goodness", "--instance", abs_path, "--selection", "max",
                 "--strict"]) == 0
    assert "good_at_infinity: true" in capsys.readouterr().out


def test_coercivity_command(tmp_path, capsys):
    path = tmp_path / "vee.json"
    io.save_instance(uinstance(2, (0, 1, 1), (0, -1, 1)), str(path))
    assert main(["coercivity", "--instance", str(path), "--selection", "max",
                 "--strict"]) == 0
    text = capsys.readouterr().out
    assert "coercive: true" in text


def test_random_determinism(tmp_path):
    a = str(tmp_path / "a.json")
    b = str(tmp_path / "b.json")
    assert main(["random", "--n", "1", "--d", "2", "--r", "2", "--seed", "7",
                 "--out", a]) == 0
    assert main(["random", "--n", "1", "--d", "2", "--r", "2", "--seed", "7",
                 "--out", b]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()
    data = json.load(open(a))
    assert data["n"] == 1 and data["d"] == 2 and len(data["polys"]) == 2


def test_report_payloads_are_deterministic(parab_path, tmp_path):
    for command, extra in [
        (["selections"], []),
        (["critical"], []),
        (["genericity"], []),
        (["loja", "--selection", "min", "--center", "0", "--seed", "5"], []),
        (["errorbound", "--selection", "index:1"], []),
        (["coercivity", "--selection", "max"], []),
        (["goodness", "--selection", "max", "--seed", "2"], []),
    ]:
        out1 = str(tmp_path / "r1.txt")
        out2 = str(tmp_path / "r2.txt")
        argv = command + ["--instance", parab_path] + extra
        assert main(argv + ["--out", out1]) == 0
        assert main(argv + ["--out", out2]) == 0
        assert _payload(out1) == _payload(out2), command


def test_plot_writes_figure(parab_path, tmp_path):
    out = str(tmp_path / "crit.txt")
    assert main(["critical", "--instance", parab_path, "--out", out,
                 "--plot"]) == 0
    assert os.path.exists(str(tmp_path / "crit.png"))


def test_plot_requires_out(parab_path, capsys):
    assert main(["critical", "--instance", parab_path, "--plot"]) == 2
    assert "--out" in capsys.readouterr().err


def test_selection_spec_errors(parab_path, capsys):
    assert main(["loja", "--instance", parab_path, "--selection", "index:9",
                 "--center", "0"]) == 2


def test_bad_radii_order(abs_path, capsys):
    rc = main(["loja", "--instance", abs_path, "--selection", "max",
               "--center", "0", "--radii", "0.1,0.2"])
    assert rc == 2
    assert "decreasing" in capsys.readouterr().err


def test_cli_collapses_duplicates(tmp_path):
    inst = uinstance(2, (0, 0, 1), (0, 0, 1), (0, 1))
    path = str(tmp_path / "dup.json")
    io.save_instance(inst, path)
    out = str(tmp_path / "out.txt")
    assert main(["selections", "--instance", path, "--out", out]) == 0
    payload = _payload(out)
    assert _grep(payload, "r") == "2"
    assert _grep(payload, "duplicates_collapsed") == "1,2"

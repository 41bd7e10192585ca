import json
import math
import os

import pytest

from disciter.cli import load_config, main
from disciter.errors import ConfigError


def _write(tmp_path, text, name="exp.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


BASIC = """
[map]
name = koebe
start = 0

[grid]
n_max = 1000
"""


class TestConfig:
    def test_round_trip(self, tmp_path):
        cfg = load_config(_write(tmp_path, BASIC))
        assert cfg["map"]["name"] == "koebe"

    def test_unknown_key_rejected(self, tmp_path):
        bad = BASIC + "\n[rate]\nbananas = 7\n"
        with pytest.raises(ConfigError):
            load_config(_write(tmp_path, bad))

    def test_unknown_section_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(_write(tmp_path, BASIC + "\n[nonsense]\nx = 1\n"))

    def test_parse_error_carries_line_number(self, tmp_path):
        with pytest.raises(ConfigError) as err:
            load_config(_write(tmp_path, "[map]\nname koebe\n"))
        assert "line" in str(err.value)


class TestSubcommands:
    def test_orbit_quad_first_points(self, tmp_path):
        cfg = _write(tmp_path, "[map]\nname = quad\nstart = 0\n"
                               "[grid]\ninclude = 0,1,2,3\n")
        out = tmp_path / "out"
        assert main(["orbit", "--config", cfg, "--out", str(out)]) == 0
        rows = (out / "orbit.csv").read_text().strip().splitlines()
        assert rows[0] == "n,re,im,saturated"
        values = [float(r.split(",")[1]) for r in rows[1:]]
        assert values == [0.0, 0.5, 0.625, 0.6953125]

    def test_rate_csv_koebe_column(self, tmp_path):
        cfg = _write(tmp_path, BASIC)
        out = tmp_path / "out"
        assert main(["rate", "--config", cfg, "--out", str(out)]) == 0
        rows = (out / "rate.csv").read_text().strip().splitlines()
        header = rows[0].split(",")
        assert header == ["n", "d", "one_minus_mod", "dist_to_tau", "step"]
        n, d = rows[-1].split(",")[:2]
        assert float(d) == pytest.approx(0.25 * math.log(float(n) + 1.0), abs=1e-12)

    def test_empty_grid_is_usage_error(self, tmp_path):
        cfg = _write(tmp_path, "[map]\nname = koebe\n[grid]\nn_max = 0\n")
        out = tmp_path / "out"
        assert main(["rate", "--config", cfg, "--out", str(out)]) == 2
        assert not (out / "rate.csv").exists()

    def test_reproducible_bytes(self, tmp_path):
        cfg = _write(tmp_path, "[map]\nname = koebe\nstart = 0\n[grid]\nn_max = 50\n"
                               "[hm]\nmode = tail\n[wos]\nwalks = 2000\n")
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            code = main(["hm", "--config", cfg, "--out", str(out), "--seed", "5",
                         "--format", "csv"])
            assert code == 0
        assert (out_a / "hm.csv").read_bytes() == (out_b / "hm.csv").read_bytes()

    def test_json_and_svg_outputs(self, tmp_path):
        cfg = _write(tmp_path, BASIC)
        out = tmp_path / "out"
        assert main(["slope", "--config", cfg, "--out", str(out),
                     "--format", "json"]) == 0
        payload = json.loads((out / "slope.json").read_text())
        assert payload["schema"].startswith("disciter/")
        assert payload["verdict"] == "non-tangential"
        assert main(["slope", "--config", cfg, "--out", str(out),
                     "--format", "svg"]) == 0
        svg = (out / "slope.svg").read_text()
        assert svg.startswith("<svg") and "polyline" in svg

    def test_qg_json(self, tmp_path):
        # the box (A <= 10, B <= 1000) only fails past m ~ 2300 for this map,
        # so the default m_max = 1e4 is what exhibits the refutation
        cfg = _write(tmp_path, "[map]\nname = parab-aut\nstart = 0\n"
                               "[qg]\nm_max = 10000\n")
        out = tmp_path / "out"
        assert main(["qg", "--config", cfg, "--out", str(out), "--format", "json"]) == 0
        payload = json.loads((out / "qg.json").read_text())
        assert payload["verdict"] == "refuted"
        assert payload["box"] == {"a_max": 10.0, "b_max": 1000.0}

    def test_semiflow_rejects_quad(self, tmp_path):
        cfg = _write(tmp_path, "[map]\nname = quad\nstart = 0\n")
        assert main(["semiflow", "--config", cfg, "--out", str(tmp_path / "o")]) == 2

    def test_opnorm_csv(self, tmp_path):
        cfg = _write(tmp_path, "[map]\nname = hyp:2\n[grid]\nn_max = 100\n"
                               "[opnorm]\np = 2\nalpha = 0\n")
        out = tmp_path / "out"
        assert main(["opnorm", "--config", cfg, "--out", str(out)]) == 0
        header = (out / "opnorm.csv").read_text().splitlines()[0]
        assert header == "n,mod_f0,hardy_lo,hardy_hi,bergman_lo,bergman_hi"

    def test_custom_map(self, tmp_path):
        cfg = _write(tmp_path, "[map]\nname = custom\ncustom_expr = (1 + z*z)/2\n"
                               "[grid]\ninclude = 0,1,2\n")
        out = tmp_path / "out"
        assert main(["orbit", "--config", cfg, "--out", str(out)]) == 0
        rows = (out / "orbit.csv").read_text().strip().splitlines()
        assert float(rows[2].split(",")[1]) == 0.5


class TestHmModes:
    def test_arc_mode(self, tmp_path):
        cfg = _write(tmp_path, "[hm]\nmode = arc\nz = 0\ntheta1 = 0\n"
                               f"theta2 = {math.pi}\n")
        out = tmp_path / "out"
        assert main(["hm", "--config", cfg, "--out", str(out), "--format", "json"]) == 0
        payload = json.loads((out / "hm.json").read_text())
        assert payload["value"] == pytest.approx(0.5, abs=1e-10)
        assert payload["method"] == "poisson-quadrature"

    def test_wos_mode(self, tmp_path):
        cfg = _write(tmp_path, "[hm]\nmode = wos\nz = 0\nslit = 0.4, 0.8\n"
                               "target = slit\n[wos]\nwalks = 4000\n")
        out = tmp_path / "out"
        assert main(["hm", "--config", cfg, "--out", str(out), "--seed", "9",
                     "--format", "json"]) == 0
        payload = json.loads((out / "hm.json").read_text())
        assert 0.0 < payload["value"] < 1.0
        assert payload["method"] == "wos-monte-carlo"
        assert payload["se"] > 0.0

    def test_unknown_mode_rejected(self, tmp_path):
        cfg = _write(tmp_path, "[hm]\nmode = banana\n")
        assert main(["hm", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


class TestCustomFromFile:
    def test_custom_map_config_file(self, tmp_path):
        sub = _write(tmp_path, "[map]\ncustom_expr = (1 + z*z)/2\n"
                               "custom_tau_angle = 0.0\ncustom_fprime_tau = 1.0\n",
                     name="mymap.ini")
        cfg = _write(tmp_path, f"[map]\nname = custom:{sub}\nstart = 0\n"
                               "[grid]\ninclude = 0,1,2,3\n")
        out = tmp_path / "out"
        assert main(["orbit", "--config", cfg, "--out", str(out)]) == 0
        rows = (out / "orbit.csv").read_text().strip().splitlines()
        assert float(rows[-1].split(",")[1]) == 0.6953125


class TestAccept:
    def test_accept_runs_green_and_writes_report(self, tmp_path, capsys):
        out = tmp_path / "acc"
        assert main(["accept", "--out", str(out)]) == 0
        lines = [ln for ln in capsys.readouterr().out.splitlines() if ln]
        assert len(lines) == 11
        assert all(ln.startswith("PASS criterion-") for ln in lines)
        payload = json.loads((out / "acceptance.json").read_text())
        assert payload["schema"] == "disciter/acceptance/v1"
        assert len(payload["results"]) == 11

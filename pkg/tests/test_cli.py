import json
import math

import pytest

from corevol.cli import main, parse_config, config_to_dict, ConfigError

BTZ_CONFIG = {
    "mode": "fuchsian_group",
    "name": "btz",
    "generators": [{"p": -1.0, "q": 1.0, "length": 2.0}],
    "convention": "both",
}

G2_CONFIG = {
    "mode": "fuchsian_group",
    "name": "g2_adjacent",
    "circles": [
        {"center": -3.0, "radius": 0.4},
        {"center": -1.0, "radius": 0.4},
        {"center": 1.0, "radius": 0.4},
        {"center": 3.0, "radius": 0.4},
    ],
    "pairings": [],  # filled below
}

WEDGE_CONFIG = {
    "mode": "pleated_core",
    "name": "one_leaf",
    "core_volume": 5.0,
    "leaves": [{"length": 2.0, "theta": math.pi / 2.0}],
    "boundary_genus": 2,
}

ANOMALY_CONFIG = {
    "mode": "anomaly_check",
    "name": "cyl",
    "mesh": {"tag": "hyperbolic_cylinder", "t_extent": 2.0,
             "circumference": 2.0 * math.pi, "n_t": 65, "n_theta": 32},
    "field": {"kind": "theta_mode", "k": 1, "amplitude": 0.2},
}


def _fill_g2():
    from corevol.schottky import Circle, pairing_from_circles

    circles = [Circle(c["center"], c["radius"]) for c in G2_CONFIG["circles"]]
    pairs = []
    for i, j in [(0, 1), (2, 3)]:
        m = pairing_from_circles(circles[i], circles[j])
        pairs.append({"source": i, "target": j, "matrix": [m.a, m.b, m.c, m.d]})
    G2_CONFIG["pairings"] = pairs


_fill_g2()


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def report_dict(text):
    out = {}
    for line in text.strip().splitlines():
        key, _, value = line.partition(" = ")
        out[key] = value
    return out


def test_validate_command(tmp_path, capsys):
    code = main(["validate", "--config", write_config(tmp_path, BTZ_CONFIG)])
    assert code == 0
    report = report_dict(capsys.readouterr().out)
    assert report["valid"] == "true"
    assert report["group.genus_handlebody"] == "1"


def test_validate_reports_overlap_as_json(tmp_path, capsys):
    bad = {
        "mode": "fuchsian_group",
        "circles": [{"center": -1.0, "radius": 1.5}, {"center": 1.0, "radius": 1.5}],
        "pairings": [{"source": 0, "target": 1, "matrix": [1.0, 0.0, 0.0, 1.0]}],
    }
    code = main(["validate", "--config", write_config(tmp_path, bad)])
    assert code == 2
    payload = json.loads(capsys.readouterr().out)
    assert payload["error"]["kind"] == "overlapping_disks"
    assert payload["error"]["circles"] == [0, 1]


def test_surface_info_command(tmp_path, capsys):
    code = main(["surface-info", "--config", write_config(tmp_path, G2_CONFIG)])
    assert code == 0
    report = report_dict(capsys.readouterr().out)
    assert report["surface.ends"] == "3"
    assert report["surface.genus"] == "0"


def test_renvol_pipeline_report(tmp_path, capsys):
    code = main([
        "renvol", "--config", write_config(tmp_path, BTZ_CONFIG),
        "--out", str(tmp_path / "out"), "--csv",
    ])
    assert code == 0
    report = report_dict(capsys.readouterr().out)
    assert float(report["closed.paper.V"]) == pytest.approx(-2.0 * math.pi)
    assert float(report["closed.derived.V"]) == pytest.approx(-math.pi)
    assert float(report["fit.V"]) == pytest.approx(-math.pi, abs=1e-4)
    assert "warning.1" in report
    out = tmp_path / "out"
    assert (out / "report.txt").exists()
    csv_text = (out / "profile_quadrature.csv").read_text()
    assert csv_text.splitlines()[0] == "epsilon,lambda,vol,provenance"
    assert csv_text.count("quadrature") == 12


def test_renvol_single_convention_flag(tmp_path, capsys):
    code = main([
        "renvol", "--config", write_config(tmp_path, BTZ_CONFIG),
        "--convention", "derived",
    ])
    assert code == 0
    report = report_dict(capsys.readouterr().out)
    assert "closed.derived.V" in report
    assert "closed.paper.V" not in report


def test_wedge_flat_leaf_returns_core_volume(tmp_path, capsys):
    config = {
        "mode": "pleated_core",
        "name": "flat",
        "core_volume": 5.0,
        "leaves": [{"length": 2.0, "theta": math.pi}],
        "boundary_genus": 2,
    }
    code = main(["wedge", "--config", write_config(tmp_path, config)])
    assert code == 0
    report = report_dict(capsys.readouterr().out)
    assert float(report["closed.paper.V"]) == pytest.approx(5.0)
    assert float(report["closed.derived.V"]) == pytest.approx(5.0)
    assert float(report["leaf.0.wedge_quadrature_at_eps_check"]) == 0.0


def test_wedge_worked_example(tmp_path, capsys):
    code = main(["wedge", "--config", write_config(tmp_path, WEDGE_CONFIG)])
    assert code == 0
    report = report_dict(capsys.readouterr().out)
    assert float(report["closed.paper.V"]) == pytest.approx(5.0 - math.pi / 2.0)
    assert float(report["closed.derived.V"]) == pytest.approx(5.0 - math.pi / 4.0)
    quad = float(report["leaf.0.wedge_quadrature_at_eps_check"])
    derived = float(report["leaf.0.wedge_derived_at_eps_check"])
    assert quad == pytest.approx(derived, rel=1e-5)


def test_anomaly_command(tmp_path, capsys):
    code = main(["anomaly", "--config", write_config(tmp_path, ANOMALY_CONFIG)])
    assert code == 0
    report = report_dict(capsys.readouterr().out)
    assert float(report["integration_by_parts_defect"]) <= 1e-8
    assert float(report["mesh.area"]) == pytest.approx(
        float(report["mesh.analytic_area"]), rel=1e-3
    )
    assert float(report["jensen_energy_normalized"]) >= -1e-8


def test_rerun_is_byte_identical(tmp_path, capsys):
    config = write_config(tmp_path, BTZ_CONFIG)
    outputs = []
    for name in ("a", "b"):
        code = main(["renvol", "--config", config, "--out",
                     str(tmp_path / name), "--csv"])
        assert code == 0
        capsys.readouterr()
    for fname in ("report.txt", "profile_quadrature.csv",
                  "profile_closed_form_paper.csv", "profile_closed_form_derived.csv"):
        a = (tmp_path / "a" / fname).read_bytes()
        b = (tmp_path / "b" / fname).read_bytes()
        assert a == b, fname


def test_echo_config_roundtrip(tmp_path, capsys):
    code = main(["renvol", "--config", write_config(tmp_path, G2_CONFIG),
                 "--echo-config"])
    assert code == 0
    echoed = json.loads(capsys.readouterr().out)
    reparsed = parse_config(echoed)
    assert config_to_dict(reparsed) == echoed


def test_flag_overrides_apply(tmp_path, capsys):
    code = main(["renvol", "--config", write_config(tmp_path, BTZ_CONFIG),
                 "--eps-min", "0.002", "--eps-max", "0.25", "--eps-count", "9",
                 "--quad-tol", "1e-8", "--echo-config"])
    assert code == 0
    echoed = json.loads(capsys.readouterr().out)
    assert echoed["epsilon_grid"] == {"min": 0.002, "max": 0.25, "count": 9}
    assert echoed["quadrature_tol"] == 1e-8


def test_parse_errors_are_positioned(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"mode": "fuchsian_group",}', encoding="utf-8")
    code = main(["validate", "--config", str(path)])
    assert code == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["error"]["kind"] == "parse"
    assert "broken.json:1:" in payload["error"]["message"]


@pytest.mark.parametrize(
    "mutate, fragment",
    [
        (lambda c: c.update(mode="weird"), "unknown mode"),
        (lambda c: c.update(epsilon_grid={"min": 0.5, "max": 0.3}), "min < max"),
        (lambda c: c.update(epsilon_grid={"count": 4}), "at least 8"),
        (lambda c: c.update(convention="mine"), "paper, derived or both"),
    ],
)
def test_config_validation_messages(tmp_path, capsys, mutate, fragment):
    config = json.loads(json.dumps(BTZ_CONFIG))
    mutate(config)
    code = main(["validate", "--config", write_config(tmp_path, config)])
    assert code == 1
    payload = json.loads(capsys.readouterr().out)
    assert fragment in payload["error"]["message"]


def test_missing_key_is_path_annotated():
    with pytest.raises(ConfigError, match=r"generators\[0\].*length"):
        parse_config({
            "mode": "fuchsian_group",
            "generators": [{"p": -1.0, "q": 1.0}],
        })

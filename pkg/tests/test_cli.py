"""Command-line interface: subcommands, exit codes, file formats."""

import json

import pytest

from fanonet import PiLatticeSpec, build_pi_lattice
from fanonet.cli import main


def pi_graph_file(tmp_path, n0, length, leads, name="graph.json"):
    lattice = build_pi_lattice(PiLatticeSpec(n0, length, leads=leads))
    spec = {
        "sites": lattice.graph.site_count,
        "hoppings": [[i, j, s] for i, j, s in lattice.graph.hoppings],
        "partition": list(lattice.partition.assignment),
    }
    path = tmp_path / name
    path.write_text(json.dumps(spec))
    return path


def test_trap_reports_certificates(tmp_path, capsys):
    path = pi_graph_file(tmp_path, 3, 5, leads=8)
    out = tmp_path / "certs.json"
    code = main(["trap", str(path), "--subgraph", "1", "--out", str(out)])
    assert code == 0
    stdout = capsys.readouterr().out
    assert "3 found" in stdout
    payload = json.loads(out.read_text())
    assert len(payload) == 3
    assert all(entry["residual"] < 1e-10 for entry in payload)


def test_trap_exit_three_when_nothing_trapped(tmp_path):
    # no side chains: a plain cut chain traps nothing
    spec = {
        "sites": 6,
        "hoppings": [[i, i + 1, 1.0] for i in range(5)],
        "partition": [0, 0, 0, 1, 1, 1],
    }
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(spec))
    assert main(["trap", str(path), "--subgraph", "0"]) == 3


def test_trap_disconnected_partition_warns(tmp_path, capsys):
    spec = {
        "sites": 4,
        "hoppings": [[0, 1, 1.0], [2, 3, 1.0]],
        "partition": [0, 0, 1, 1],
    }
    path = tmp_path / "split.json"
    path.write_text(json.dumps(spec))
    assert main(["trap", str(path), "--subgraph", "0"]) == 0
    assert "vacuously" in capsys.readouterr().err


def test_trap_malformed_json_exits_two(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"sites": 4, "hoppings": [[0, 1')
    assert main(["trap", str(path)]) == 2
    err = capsys.readouterr().err
    assert "parse failure" in err and "line" in err


def test_trap_missing_file_exits_two(tmp_path):
    assert main(["trap", str(tmp_path / "nope.json")]) == 2


def test_evolve_series_and_classification(tmp_path):
    out = tmp_path / "survival.csv"
    code = main(
        ["evolve", "--n0", "2", "--len", "4", "--m", "40", "--steps", "60",
         "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("#")
    assert lines[1] == "N0,L,n,t,P,classification"
    rows = [line.split(",") for line in lines[2:]]
    assert len(rows) == 8 * 60
    by_mode = {int(r[2]): r[5] for r in rows}
    assert by_mode[3] == "unitary"
    assert by_mode[6] == "unitary"
    assert by_mode[1] == "drop_to_plateau"


def test_evolve_single_time_point(tmp_path):
    out = tmp_path / "zero.csv"
    code = main(
        ["evolve", "--n0", "2", "--len", "4", "--m", "10", "--steps", "2",
         "--t-max", "0", "--modes", "1,2", "--out", str(out)]
    )
    assert code == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[2:]]
    assert len(rows) == 4
    assert all(float(r[4]) == pytest.approx(1.0, abs=1e-12) for r in rows)


def test_evolve_horizon_guard(tmp_path):
    args = ["evolve", "--n0", "2", "--len", "4", "--m", "10", "--steps", "60",
            "--t-max", "100", "--modes", "1", "--out", str(tmp_path / "x.csv")]
    assert main(args) == 4
    assert main(args + ["--allow-reflections"]) == 0


def test_bound_report(tmp_path, capsys):
    out = tmp_path / "states.json"
    code = main(["bound", "--n0", "3", "--len", "5", "--out", str(out)])
    assert code == 0
    assert "3 resonant, 4 evanescent" in capsys.readouterr().out
    payload = json.loads(out.read_text())
    assert len(payload["states"]) == 7
    kinds = {s["kind"] for s in payload["states"]}
    assert kinds == {"resonant", "evanescent"}


def test_bound_long_time(tmp_path, capsys):
    code = main(["bound", "--n0", "2", "--len", "4", "--long-time", "1"])
    assert code == 0
    stdout = capsys.readouterr().out
    value = float(stdout.rsplit(":", 1)[1])
    assert value == pytest.approx(0.5032, abs=0.01)


def test_bound_no_resonant_states(capsys):
    assert main(["bound", "--n0", "2", "--len", "5"]) == 0
    assert "0 resonant" in capsys.readouterr().out


def test_transmit_sweep_and_sidecar(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(
        ["transmit", "--n0", "2", "--len", "5", "--compare", "6",
         "--steps", "40", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "k,E,T,R,re_t,im_t"
    assert len(lines) == 2 + 40
    paired = (tmp_path / "sweep_L6.csv").read_text().splitlines()
    assert paired[1] == "k,E,T,R,re_t,im_t"
    assert len(paired) == 2 + 40
    sidecar = json.loads((tmp_path / "sweep.csv.zeros.json").read_text())
    assert {z["provenance"] for z in sidecar["k_min"]} == {"common-alpha"}
    assert {z["provenance"] for z in sidecar["k_max"]} == {"common-beta"}
    assert sidecar["k0"]["5"] and sidecar["k0"]["6"]
    dips = [e for e in sidecar["peak_dip"] if e["dip_energy"] < 0]
    assert dips[0]["straddle"] is True


def test_transmit_steps_rows_exact(tmp_path):
    out = tmp_path / "two.csv"
    assert main(["transmit", "--n0", "3", "--len", "5", "--steps", "2",
                 "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 4


def test_transmit_band_guard(tmp_path):
    code = main(["transmit", "--n0", "2", "--len", "5", "--e-min", "-3",
                 "--e-max", "0", "--out", str(tmp_path / "x.csv")])
    assert code == 4


def test_transmit_deterministic_output(tmp_path):
    args = ["transmit", "--n0", "2", "--len", "5", "--steps", "25"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.csv.zeros.json").read_bytes() == (
        tmp_path / "b.csv.zeros.json"
    ).read_bytes()


def test_config_file_equivalent_to_flags(tmp_path):
    config = {
        "subcommand": "transmit",
        "n0": 2,
        "length": 5,
        "steps": 20,
        "out": str(tmp_path / "from_config.csv"),
    }
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps(config))
    assert main(["--config", str(cfg)]) == 0
    assert main(["transmit", "--n0", "2", "--len", "5", "--steps", "20",
                 "--out", str(tmp_path / "from_flags.csv")]) == 0
    assert (tmp_path / "from_config.csv").read_bytes() == (
        tmp_path / "from_flags.csv"
    ).read_bytes()


def test_config_before_subcommand(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"n0": 2, "length": 5, "steps": 10}))
    out = tmp_path / "o.csv"
    assert main(["--config", str(cfg), "transmit", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 2 + 10


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"n0": 2, "length": 5, "steps": 20}))
    out = tmp_path / "o.csv"
    assert main(["transmit", "--config", str(cfg), "--steps", "4",
                 "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 2 + 4


def test_invalid_parameters_exit_two(tmp_path):
    assert main(["bound", "--n0", "0", "--len", "5"]) == 2
    assert main(["evolve", "--n0", "2", "--len", "4"]) == 2  # missing --m
    assert main([]) == 2

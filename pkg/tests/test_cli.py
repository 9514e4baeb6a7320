import math

import pytest

from slhnet.cli import fmt12, main
from slhnet.netlist import parse_netlist, serialize_netlist

SWITCH_DOC = """\
version: 1
components:
  - {name: ph, kind: phase, phi: pi}
  - {name: wire, kind: identity, ports: 1}
  - {name: b1, kind: beamsplitter, theta: pi/4}
  - {name: b2, kind: beamsplitter, theta: -pi/4}
circuit:
  - {name: arm, op: concat, of: [ph, wire]}
  - {name: switch, op: series, of: [b2, arm, b1]}
"""


def test_fmt12():
    assert fmt12(0.0) == "0"
    assert fmt12(1.8000000000000002) == "1.8"
    assert fmt12(math.pi) == "3.14159265359"


def test_compile_vector(capsys):
    assert main(["compile", "011"]) == 0
    assert capsys.readouterr().out == "control: [0, pi, 0]\ntail: pi\n"
    assert main(["compile", "101"]) == 0
    assert capsys.readouterr().out == "control: [pi, pi, pi]\ntail: pi\n"


def test_compile_matrix(capsys):
    assert main(["compile", "--matrix", "01;11;10"]) == 0
    assert capsys.readouterr().out == (
        "control:\n"
        "  - [0, pi]\n"
        "  - [pi, 0]\n"
        "  - [0, pi]\n"
        "tail: [pi, 0]\n"
    )


def test_compile_rejects_non_bits(capsys):
    assert main(["compile", "012"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def _eval_lines(capsys, argv):
    assert main(argv) == 0
    out = capsys.readouterr().out.splitlines()
    return {line.split(":")[0]: line.split(": ", 1)[1] for line in out}


def test_eval_selector(capsys):
    got = _eval_lines(capsys, ["eval", "--mu", "0.3,0.7,1.1", "--selector", "011"])
    assert got["output_phase"] == "1.8"
    assert float(got["residual_off_port_power"]) < 1e-20


def test_eval_explicit_schedule(capsys):
    got = _eval_lines(capsys, ["eval", "--mu", "0.3,0.7,1.1", "--phi", "0,pi,0"])
    assert got["output_phase"] == "1.8"  # tail derived from the schedule
    got = _eval_lines(
        capsys, ["eval", "--mu", "0.3,0.7,1.1", "--phi", "0,pi,0", "--tail", "pi"]
    )
    assert got["output_phase"] == "1.8"


def test_eval_scales_with_drive(capsys):
    got = _eval_lines(
        capsys, ["eval", "--mu", "0.5,1.2", "--selector", "11", "--drive", "2.0"]
    )
    assert got["output_phase"] == "1.7"
    amp = complex(got["amplitude[1]"].replace("j", "J"))
    assert abs(amp - 2.0 * complex(math.cos(1.7), math.sin(1.7))) < 1e-10


def test_eval_matrix(capsys):
    assert main([
        "eval",
        "--mu-matrix", "0.2,0.4;0.6,0.8",
        "--selector-matrix", "10;11",
    ]) == 0
    assert capsys.readouterr().out == "m_out[1]: 0.8 0.6\nm_out[2]: 1.2 0.8\n"


def test_eval_bad_inputs(capsys):
    assert main(["eval", "--selector", "011"]) == 2  # no --mu
    assert main(["eval", "--mu", "0.3", "--selector", "011"]) == 2  # length clash
    assert main(["eval", "--mu", "0.3", "--phi", "0.5"]) == 2  # non-binary schedule
    assert main(["eval", "--mu-matrix", "0.2"]) == 2  # matrix needs both flags
    assert main(["eval", "--mu", "0.3"]) == 2  # neither bits nor schedule
    capsys.readouterr()


def test_sweep_csv(tmp_path, capsys):
    target = tmp_path / "curve.csv"
    argv = ["sweep", "--phi", "pi/2,pi", "--points", "5", "-o", str(target)]
    assert main(argv) == 0
    text = target.read_text()
    lines = text.splitlines()
    assert lines[0] == "phi,mu,mu_out"
    assert len(lines) == 11
    rows = [tuple(float(tok) for tok in line.split(",")) for line in lines[1:]]
    half, collapse = rows[:5], rows[5:]
    assert all(phi == pytest.approx(math.pi / 2, abs=1e-11) for phi, _, _ in half)
    assert all(out == pytest.approx(mu, abs=1e-12) for _, mu, out in half)
    # complex division leaves ~1e-17 of imaginary dust in z/z, so the
    # collapse column is tiny rather than literally zero
    assert all(abs(out) <= 1e-12 for _, _, out in collapse)
    mus = [mu for _, mu, _ in half]
    assert mus == sorted(mus) and mus[0] > -math.pi and mus[-1] < math.pi

    # byte-identical on repeat
    again = tmp_path / "curve2.csv"
    assert main(["sweep", "--phi", "pi/2,pi", "--points", "5", "-o", str(again)]) == 0
    assert again.read_bytes() == target.read_bytes()
    capsys.readouterr()


def test_sweep_stdout(capsys):
    assert main(["sweep", "--phi", "pi", "--points", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "phi,mu,mu_out" and len(out) == 4


def test_sweep_default_grid_avoids_singular_edge(capsys):
    # default range is the open interval (-pi, pi): phi = pi stays regular
    assert main(["sweep", "--points", "11"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 1 + 4 * 11


def test_sweep_singular_grid_point(capsys):
    argv = ["sweep", "--phi", "pi", "--mu-min", "0", "--mu-max", "2pi", "--points", "1"]
    assert main(argv) == 3
    assert "singular set" in capsys.readouterr().err


def test_sweep_bad_ranges(capsys):
    assert main(["sweep", "--points", "0"]) == 2
    assert main(["sweep", "--mu-min", "1", "--mu-max", "1"]) == 2
    capsys.readouterr()


def test_verify_small_battery(capsys):
    argv = ["verify", "--exhaustive", "3", "--compositions", "25", "--grid", "10"]
    assert main(argv) == 0
    out = capsys.readouterr().out.splitlines()
    assert all(line.startswith("PASS") for line in out[:-1])
    assert out[-1].endswith("passed, 0 failed")


def test_netlist_elaborate(tmp_path, capsys):
    path = tmp_path / "switch.yaml"
    path.write_text(SWITCH_DOC)
    assert main(["netlist", "elaborate", str(path)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "ports: 2"
    rows = [[complex(tok) for tok in line.split(": ", 1)[1].split()] for line in out[1:3]]
    for got, want in zip(rows, [[0, 1], [1, 0]]):
        for g, w in zip(got, want):
            assert abs(g - w) < 1e-12
    assert out[3] == "coupling: 0+0j 0+0j"
    assert out[4] == "hamiltonian: 0"


def test_netlist_print_is_canonical(tmp_path, capsys):
    path = tmp_path / "switch.yaml"
    path.write_text(SWITCH_DOC)
    assert main(["netlist", "print", str(path)]) == 0
    assert capsys.readouterr().out == serialize_netlist(parse_netlist(SWITCH_DOC))


def test_netlist_errors(tmp_path, capsys):
    assert main(["netlist", "elaborate", str(tmp_path / "missing.yaml")]) == 2
    bad = tmp_path / "bad.yaml"
    bad.write_text("version: 9\ncomponents: []\n")
    assert main(["netlist", "elaborate", str(bad)]) == 2
    capsys.readouterr()


def test_argparse_rejects_unknown_command():
    with pytest.raises(SystemExit) as info:
        main(["polish"])
    assert info.value.code == 2

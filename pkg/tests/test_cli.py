import subprocess
import sys

from nilorbit.cli import main

RUN = [sys.executable, "-m", "nilorbit"]


def run_cli(args):
    return subprocess.run(
        RUN + args, capture_output=True, text=True, timeout=600
    )


def test_validate_family(capsys):
    assert main(["validate", "--family", "heisenberg", "--p", "3"]) == 0
    out = capsys.readouterr().out
    assert "valid True" in out and "class 2" in out


def test_validate_file_error(tmp_path):
    f = tmp_path / "bad.ring"
    f.write_text("liering p=5 dim=3\nbracket 1 2 = 3:1\nbracket 1 3 = 1:1\n")
    assert main(["validate", "--file", str(f)]) == 2


def test_chartable_with_oracle(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code = main(
        ["chartable", "--family", "heisenberg", "--p", "3", "--oracle", "--out", str(out)]
    )
    assert code == 0
    text = out.read_text()
    assert text.startswith("rep,")
    assert len(text.strip().split("\n")) == 2 + 11  # two headers + 11 rows


def test_chartable_ul_oracle_11_rows(tmp_path):
    out = tmp_path / "ul.csv"
    code = main(
        [
            "chartable",
            "--family",
            "ul",
            "--n",
            "3",
            "--q",
            "3",
            "--oracle",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    assert len(out.read_text().strip().split("\n")) == 13


def test_orbits_census(capsys):
    assert main(["orbits", "--family", "heisenberg", "--p", "3"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0].startswith("orbit_id,")
    assert len(lines) == 1 + 11


def test_packets_cli(capsys):
    assert main(["packets", "--family", "fakeheis", "--p", "3", "--s", "1"]) == 0
    out = capsys.readouterr().out
    assert "packet_id" in out
    sizes = [int(line.split(",")[5]) for line in out.strip().split("\n")[1:]]
    assert max(sizes) == 3


def test_polarize_cli(capsys):
    assert main(["polarize", "--family", "h2", "--p", "5", "--f", "0,0,0,1"]) == 0
    out = capsys.readouterr().out
    assert "vergne_dim 3" in out


def test_spas_family(tmp_path, capsys):
    from nilorbit import families, ringio

    A, S = families.usp4_flag_algebra(2)
    alg_file = tmp_path / "flag.alg"
    sig_file = tmp_path / "sigma.mat"
    alg_file.write_text(ringio.emit_algebra(A))
    sig_file.write_text(ringio.emit_matrix(S))
    assert (
        main(["validate", "--family", "spas", "--file", str(alg_file), "--sigma", str(sig_file)])
        == 0
    )
    assert "group ok order=16" in capsys.readouterr().out
    assert (
        main(["chartable", "--family", "spas", "--file", str(alg_file), "--sigma", str(sig_file)])
        == 0
    )
    out = capsys.readouterr().out
    assert out.startswith("rep,") and len(out.strip().split("\n")) >= 3


def test_golden_q2(capsys):
    assert main(["golden", "--q", "2", "--oracle"]) == 0
    out = capsys.readouterr().out
    assert "oracle_match True" in out


def test_golden_q3_odd(capsys):
    assert main(["golden", "--q", "3"]) == 0
    out = capsys.readouterr().out
    assert "powers_of_q True" in out


def test_counterexamples_battery(capsys):
    assert main(["counterexamples", "--p", "5"]) == 0
    out = capsys.readouterr().out
    for line in (
        "statement1_multiple_of_rho REFUTED",
        "statement2_extends_to_polarization REFUTED",
        "statement3_6_module_property REFUTED",
        "statement7_perm_vs_tensor_class4 REFUTED",
        "parabola_fibers_equal True",
        "veronese_images_equal REFUTED",
    ):
        assert line in out


def test_deterministic_output():
    r1 = run_cli(["chartable", "--family", "heisenberg", "--p", "3"])
    r2 = run_cli(["chartable", "--family", "heisenberg", "--p", "3"])
    assert r1.returncode == 0 and r1.stdout == r2.stdout
    b1 = run_cli(["packets", "--family", "fakeheis", "--p", "3", "--s", "1"])
    b2 = run_cli(["packets", "--family", "fakeheis", "--p", "3", "--s", "1"])
    assert b1.returncode == 0 and b1.stdout == b2.stdout


def test_exit_codes():
    assert main(["validate", "--family", "ul", "--n", "4", "--q", "3"]) in (0,)
    # input error: missing family and file
    assert main(["chartable"]) == 2
    # verification failure path: class >= p ring through chartable
    assert main(["chartable", "--family", "ul", "--n", "4", "--q", "3"]) == 2

import json

import numpy as np
import pytest

from rdcontrol import binary_entropy
from rdcontrol.cli import fmt, main


def write_scenario(tmp_path, doc, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def solver_doc(caps=(10.0,), max_iters=20_000):
    return {
        "sources": [
            {
                "kind": "binary",
                "s": 1.0,
                "p": 0.5,
                "V": {"kind": "log_linear", "K": 1.0},
                "U": {"kind": "log_rate", "w": 1.0},
            }
            for _ in caps
        ],
        "region": {"kind": "box", "caps": list(caps)},
        "solver": {
            "step": {"kind": "diminishing", "gamma0": 0.3},
            "max_iters": max_iters,
            "caps": {"alpha_max": 50.0, "c_max": 50.0, "c_min": 1e-9},
        },
    }


def mac_doc(P=(3.0, 3.0), deltas=(2.0, 1.0)):
    return {
        "sources": [
            {"kind": "binary", "s": 1.0, "p": 0.5,
             "V": {"kind": "linear_entropy_penalty", "delta": deltas[0]}},
            {"kind": "binary", "s": 1.0, "p": 0.5,
             "V": {"kind": "linear_entropy_penalty", "delta": deltas[1]}},
        ],
        "region": {"kind": "mac", "powers": list(P), "noise": 1.0},
    }


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


# -------------------------------------------------------------------- solve

def test_solve_exit_zero_and_trace(tmp_path, capsys):
    scn = write_scenario(tmp_path, solver_doc(caps=(2.0, 0.6)))
    out = tmp_path / "trace.csv"
    code = main(["solve", scn, "--out", str(out)])
    assert code == 0
    stdout = capsys.readouterr().out
    assert "converged: yes" in stdout
    header, rows = read_csv(out)
    assert header[:5] == ["iter", "mu_0", "mu_1", "lambda_0", "lambda_1"]
    assert header[-3:] == ["primal_obj", "dual_obj", "max_violation"]
    assert 1 <= len(rows) <= 20_000


def test_solve_max_iters_one_exits_two(tmp_path):
    scn = write_scenario(tmp_path, solver_doc())
    out = tmp_path / "trace.csv"
    code = main(["solve", scn, "--out", str(out), "--max-iters", "1"])
    assert code == 2
    _, rows = read_csv(out)
    assert len(rows) == 1


def test_solve_schema_error_exit_one_names_field(tmp_path, capsys):
    doc = solver_doc()
    doc["region"] = {"kind": "mac", "powers": [-3.0], "noise": 1.0}
    scn = write_scenario(tmp_path, doc)
    code = main(["solve", scn, "--out", str(tmp_path / "x.csv")])
    assert code == 1
    assert "region.powers[0]" in capsys.readouterr().err


def test_solve_invalid_json_exit_one(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{ not json")
    code = main(["solve", str(path), "--out", str(tmp_path / "x.csv")])
    assert code == 1
    assert "line" in capsys.readouterr().err  # json's line/column diagnostics


def test_missing_file_exit_one(tmp_path):
    assert main(["solve", str(tmp_path / "nope.json"), "--out", str(tmp_path / "x.csv")]) == 1


def test_usage_error_exit_one(tmp_path, capsys):
    assert main(["solve"]) == 1  # missing scenario and --out
    capsys.readouterr()


# -------------------------------------------------------------------- verify

def test_verify_agrees_with_oracle(tmp_path, capsys):
    scn = write_scenario(tmp_path, solver_doc(caps=(10.0,)))
    code = main(["verify", scn, "--steps", "500"])
    assert code == 0
    assert "verdict: ok" in capsys.readouterr().out


# --------------------------------------------------------------------- fig1

def test_fig1_rows_and_breakpoint(tmp_path):
    out = tmp_path / "fig.csv"
    code = main(["fig1", "--K", "1", "--p", "0.5", "--c-min", "0.1",
                 "--c-max", "2.0", "--steps", "64", "--out", str(out)])
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["c", "alpha_star", "D", "s_eff"]
    cs = [float(r[0]) for r in rows]
    assert 1.0 in cs  # breakpoint c = 1/K on the grid exactly
    for r in rows:
        c, alpha, d, s_eff = map(float, r)
        if c >= 1.0:
            assert d == 0.0
            assert alpha == c
        else:
            assert binary_entropy(d) == pytest.approx(1.0 - c, abs=1e-9)


def test_fig1_entropy_slope(tmp_path):
    out = tmp_path / "fig.csv"
    K, p = 2.0, 0.3
    main(["fig1", "--K", str(K), "--p", str(p), "--c-min", "0.01",
          "--c-max", "1.0", "--steps", "200", "--out", str(out)])
    _, rows = read_csv(out)
    hp = binary_entropy(p)
    below = [(float(r[0]), float(r[2])) for r in rows if float(r[0]) < 1.0 / K]
    hs = [binary_entropy(d) for _, d in below]
    # finite differences of H(D) against the c spacing recover -K*H(p)
    for (c0, _), (c1, _), h0, h1 in zip(below, below[1:], hs, hs[1:]):
        slope = (h1 - h0) / (c1 - c0)
        assert slope == pytest.approx(-K * hp, abs=1e-6)


@pytest.mark.parametrize(
    "args",
    [
        ["--K", "0", "--p", "0.5", "--c-min", "0.1", "--c-max", "1.0"],
        ["--K", "1", "--p", "1.0", "--c-min", "0.1", "--c-max", "1.0"],
        ["--K", "1", "--p", "0.5", "--c-min", "1.0", "--c-max", "1.0"],
        ["--K", "1", "--p", "0.5", "--c-min", "0.1", "--c-max", "1.0", "--steps", "1"],
    ],
)
def test_fig1_domain_violations_exit_one(tmp_path, args, capsys):
    code = main(["fig1", *args, "--out", str(tmp_path / "x.csv")])
    assert code == 1
    capsys.readouterr()


# ---------------------------------------------------------------------- mac

def test_mac_case_a(tmp_path, capsys):
    scn = write_scenario(tmp_path, mac_doc(P=(15.0, 15.0)))
    out = tmp_path / "mac.csv"
    code = main(["mac", scn, "--out", str(out)])
    assert code == 0
    stdout = capsys.readouterr().out
    assert "case: A" in stdout
    assert "D: [0, 0]" in stdout
    header, rows = read_csv(out)
    assert header == ["label", "rate_1", "rate_2"]
    labels = [r[0] for r in rows]
    assert labels.count("entropy_point") == 1
    assert labels.count("chosen_corner") == 1
    assert sum(1 for l in labels if l.startswith("region_vertex")) == 5


def test_mac_case_b_on_sum_face(tmp_path, capsys):
    scn = write_scenario(tmp_path, mac_doc(P=(3.0, 3.0), deltas=(2.0, 1.0)))
    out = tmp_path / "mac.csv"
    code = main(["mac", scn, "--out", str(out)])
    assert code == 0
    assert "case: B" in capsys.readouterr().out
    _, rows = read_csv(out)
    chosen = next(r for r in rows if r[0] == "chosen_corner")
    r1, r2 = float(chosen[1]), float(chosen[2])
    # the chosen compressed-rate point exhausts the sum capacity
    assert r1 + r2 == pytest.approx(0.5 * np.log2(7.0), abs=1e-9)


def test_mac_oracle_mismatch_exits_three(tmp_path, monkeypatch, capsys):
    import rdcontrol.cli as cli_mod

    scn = write_scenario(tmp_path, mac_doc())
    real = cli_mod.mac_mod.solve_corner

    def broken(s):
        sol = real(s)
        return type(sol)(sol.case, sol.D, sol.x, sol.objective + 1.0)

    monkeypatch.setattr(cli_mod.mac_mod, "solve_corner", broken)
    code = main(["mac", scn, "--out", str(tmp_path / "m.csv")])
    assert code == 3
    assert "MISMATCH" in capsys.readouterr().err


# ------------------------------------------------------------- determinism

def run_twice(tmp_path, argv_fn):
    outs = []
    for tag in ("a", "b"):
        out = tmp_path / f"{tag}.csv"
        assert main(argv_fn(str(out))) in (0, 2)
        outs.append(out.read_bytes())
    return outs


def test_csv_outputs_byte_identical(tmp_path):
    scn = write_scenario(tmp_path, solver_doc(caps=(2.0, 0.6), max_iters=2000))
    macscn = write_scenario(tmp_path, mac_doc(), name="mac.json")
    a, b = run_twice(tmp_path, lambda o: ["solve", scn, "--out", o])
    assert a == b
    a, b = run_twice(
        tmp_path,
        lambda o: ["fig1", "--K", "1.7", "--p", "0.4", "--c-min", "0.05",
                   "--c-max", "2.0", "--steps", "99", "--out", o],
    )
    assert a == b
    a, b = run_twice(tmp_path, lambda o: ["mac", macscn, "--out", o])
    assert a == b


def test_csv_round_trip_reemission(tmp_path):
    out = tmp_path / "fig.csv"
    main(["fig1", "--K", "0.9", "--p", "0.21", "--c-min", "0.03",
          "--c-max", "3.0", "--steps", "151", "--out", str(out)])
    text = out.read_text()
    lines = text.splitlines()
    rebuilt = [lines[0]]
    for line in lines[1:]:
        rebuilt.append(",".join(fmt(float(cell)) for cell in line.split(",")))
    assert "\n".join(rebuilt) + "\n" == text


def test_fmt_is_stable_under_parse():
    values = [0.1, 1 / 3, 1e-9, 123456.789, 5.0, 2.0 ** -40, np.pi]
    for v in values:
        s = fmt(v)
        assert fmt(float(s)) == s

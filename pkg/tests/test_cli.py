import json

from sdmimo.cli import main


def run(tmp_path, args, name="out"):
    path = tmp_path / name
    code = main(args + ["-o", str(path)])
    return code, path.read_bytes() if path.exists() else b""


def test_rate_roundtrip_byte_identical(tmp_path):
    args = ["rate", "--alpha", "1", "--beta", "0.5", "--tau0", "0",
            "--signaling", "gauss", "--sigma-theta2", "0", "--snr-db", "6",
            "--tau-nodes", "8", "--mu-nodes", "8"]
    code1, out1 = run(tmp_path, args, "a.csv")
    code2, out2 = run(tmp_path, args, "b.csv")
    assert code1 == code2 == 0
    assert out1 == out2
    lines = out1.decode().splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    assert any("sdmimo" in ln for ln in header)
    assert any("beta = 0.5" in ln for ln in header)
    data = [ln for ln in lines if not ln.startswith("#")]
    assert data[0] == "snr_db,rate"
    snr, rate = data[1].split(",")
    assert float(snr) == 6.0 and 0 < float(rate) < 2


def test_json_format_mirrors_schema(tmp_path):
    code, out = run(tmp_path, ["lowsnr", "--points", "5", "--format", "json"],
                    "low.json")
    assert code == 0
    payload = json.loads(out)
    assert payload["columns"] == ["s", "rate", "eb_n0_db", "is_argmin"]
    assert len(payload["rows"]) == 6  # 5 grid rows + argmin summary
    assert all(row[2] > -1.59 for row in payload["rows"])


def test_simulate_rows(tmp_path):
    code, out = run(tmp_path, ["simulate", "--trials", "20", "--seed", "7",
                               "--snr-db", "0", "6"], "sim.csv")
    assert code == 0
    data = [ln for ln in out.decode().splitlines() if not ln.startswith("#")]
    assert data[0].startswith("snr_db,normalized_mse,stderr,prediction")
    assert len(data) == 3
    code2, out2 = run(tmp_path, ["simulate", "--trials", "20", "--seed", "7",
                                 "--snr-db", "0", "6"], "sim2.csv")
    assert out2 == out


def test_config_error_exit_code(tmp_path, capsys):
    assert main(["estimator", "--alpha", "-1"]) == 2
    assert "error: config" in capsys.readouterr().err
    assert main(["rate", "--snr-db", "6", "0"]) == 2  # unsorted axis
    assert main(["sweep", "--quantity", "rate", "--axis", "bogus",
                 "--values", "1"]) == 2


def test_bad_flag_exit_code(capsys):
    assert main(["rate", "--snr-db", "nan"]) == 2
    capsys.readouterr()


def test_detector_and_hh_commands(tmp_path):
    code, out = run(tmp_path, ["detector", "--signaling", "qpsk", "--mu", "0.5",
                               "--snr-db", "6"], "det.csv")
    assert code == 0 and b"n_candidates" in out
    code, out = run(tmp_path, ["hh", "--beta", "0.5", "--snr-db", "0", "6",
                               "--optimize-tau0"], "hh.csv")
    assert code == 0
    rows = [ln for ln in out.decode().splitlines() if not ln.startswith("#")][1:]
    rates = [float(r.split(",")[1]) for r in rows]
    assert rates[0] < rates[1]


def test_sweep_command(tmp_path):
    code, out = run(tmp_path, ["sweep", "--quantity", "rate", "--axis",
                               "sigma_theta2", "--values", "0,0.2",
                               "--tau-nodes", "8", "--mu-nodes", "8"], "sw.csv")
    assert code == 0
    rows = [ln for ln in out.decode().splitlines() if not ln.startswith("#")][1:]
    assert len(rows) == 2
    r0, r1 = (float(r.split(",")[1]) for r in rows)
    assert r0 > r1  # bias reduces the rate

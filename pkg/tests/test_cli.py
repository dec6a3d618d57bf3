import csv
import io

import numpy as np
import pytest

from wavphase.cli import (
    EXIT_CONFIG,
    EXIT_FAIL,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    RunConfig,
    ConfigError,
    main,
    parse_config_file,
)
from wavphase.corpus import tone
from wavphase.io import load_grid, read_wav, write_wav

RATE = 16000


def run(argv, capsys):
    try:
        code = main([str(a) for a in argv])
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def tone_wav(tmp_path):
    path = tmp_path / "tone.wav"
    write_wav(path, 0.5 * tone(440.9, 9000, RATE), RATE)
    return path


def test_analyze_paper_tuple(tone_wav, tmp_path, capsys):
    out = tmp_path / "g.dcwt"
    code, text, _ = run(["analyze", tone_wav, "--out", out, "--alpha", 300, "--decimation", 12,
                         "--channels", 240], capsys)
    assert code == EXIT_OK
    assert "redundancy=20" in text and "frame_bound_ratio=" in text
    grid, params = load_grid(out)
    assert grid.magnitude.shape == (241, 750)
    assert params.alpha == 300


def test_analyze_rejects_bad_decimation(tone_wav, tmp_path, capsys):
    code, _, err = run(["analyze", tone_wav, "--out", tmp_path / "g", "--decimation", 7], capsys)
    assert code == EXIT_CONFIG and "does not divide" in err
    assert not (tmp_path / "g").exists()


def test_missing_input(tmp_path, capsys):
    code, _, _ = run(["analyze", tmp_path / "nope.wav", "--out", tmp_path / "g"], capsys)
    assert code == EXIT_IO
    code, _, _ = run(["reconstruct", tmp_path / "nope.dcwt", "--out", tmp_path / "o.wav"], capsys)
    assert code == EXIT_IO


def test_corrupt_grid_is_io_error(tmp_path, capsys):
    (tmp_path / "bad.dcwt").write_bytes(b"DCWT\x01")
    code, _, _ = run(["synth", tmp_path / "bad.dcwt", "--out", tmp_path / "o.wav"], capsys)
    assert code == EXIT_IO


def test_analyze_synth_round_trip(tone_wav, tmp_path, capsys):
    g = tmp_path / "g.dcwt"
    assert run(["analyze", tone_wav, "--out", g, "--alpha", 30, "--decimation", 5, "--channels", 100],
               capsys)[0] == EXIT_OK
    for method in ("cg", "direct"):
        assert run(["synth", g, "--out", tmp_path / "o.wav", "--synthesis", method], capsys)[0] == EXIT_OK
        s, _ = read_wav(tone_wav)
        r, rate = read_wav(tmp_path / "o.wav")
        assert rate == RATE and np.max(np.abs(r - s)) < 1e-6


@pytest.mark.parametrize("method", ["wpghi", "rfglim", "wfglim"])
def test_reconstruct_methods(tone_wav, tmp_path, capsys, method):
    g = tmp_path / "g.dcwt"
    run(["analyze", tone_wav, "--out", g, "--alpha", 30, "--decimation", 5, "--channels", 100], capsys)
    code, text, _ = run(["reconstruct", g, "--method", method, "--out", tmp_path / "o.wav",
                         "--max-iter", 10], capsys)
    assert code == EXIT_OK
    (row,) = rows(text)
    assert row["method"] == method and row["signal_id"] == "g"
    assert int(row["a_d"]) == 5 and int(row["K"]) == 100
    if method == "wpghi":
        assert float(row["sc_db"]) <= -25
    assert read_wav(tmp_path / "o.wav")[0].shape == (9000,)


def test_reconstruct_from_wav_with_report(tone_wav, tmp_path, capsys):
    rep = tmp_path / "r.csv"
    code, _, _ = run(["reconstruct", tone_wav, "--out", tmp_path / "o.wav", "--report", rep,
                      "--alpha", 30, "--decimation", 5, "--channels", 100], capsys)
    assert code == EXIT_OK
    assert float(rows(rep.read_text())[0]["sc_db"]) <= -25


def test_unknown_method_is_usage_error(tone_wav, tmp_path, capsys):
    code, _, _ = run(["reconstruct", tone_wav, "--method", "pghi", "--out", tmp_path / "o.wav"], capsys)
    assert code == EXIT_USAGE


def test_deterministic_reports(tone_wav, tmp_path, capsys):
    args = ["reconstruct", tone_wav, "--method", "rfglim", "--out", tmp_path / "o.wav", "--max-iter", 5,
            "--alpha", 30, "--decimation", 5, "--channels", 100, "--seed", 9]
    a = rows(run(args, capsys)[1])[0]
    b = rows(run(args, capsys)[1])[0]
    a.pop("runtime_ms"), b.pop("runtime_ms")
    assert a == b


def _corpus(tmp_path, L=1800):
    d = tmp_path / "corpus"
    d.mkdir()
    t = np.arange(L) / RATE
    write_wav(d / "a.wav", 0.5 * np.cos(2 * np.pi * 500 * t), RATE)
    write_wav(d / "b.wav", 0.5 * np.cos(2 * np.pi * (200 * t + 3000 * t ** 2)) * np.hanning(L), RATE)
    return d


def test_evaluate_rows_and_summary(tmp_path, capsys):
    d = _corpus(tmp_path)
    code, text, _ = run(["evaluate", d, "--tuples", "30,5,100", "--max-iter", 3], capsys)
    assert code == EXIT_OK
    r = rows(text)
    per_signal = [x for x in r if not x["signal_id"].startswith("__")]
    summary = [x for x in r if x["signal_id"].startswith("__")]
    assert len(per_signal) == 2 * 3
    assert len(summary) == 3 * 2
    means = {x["method"]: float(x["sc_db"]) for x in summary if x["signal_id"] == "__mean__"}
    for m, v in means.items():
        assert v == pytest.approx(np.mean([float(x["sc_db"]) for x in per_signal if x["method"] == m]))


def test_evaluate_redundancy_sweep_groups(tmp_path, capsys):
    d = _corpus(tmp_path)
    rep = tmp_path / "t.csv"
    code, _, _ = run(["evaluate", d, "--methods", "wpghi", "--report", rep, "--workers", 2,
                      "--tuples", "1000,30,90;1000,25,125;1000,18,180;1000,10,300"], capsys)
    assert code == EXIT_OK
    means = [x for x in rows(rep.read_text()) if x["signal_id"] == "__mean__"]
    assert [int(x["K"]) // int(x["a_d"]) for x in means] == [3, 5, 10, 30]


def test_evaluate_errors(tmp_path, capsys):
    (tmp_path / "empty").mkdir()
    assert run(["evaluate", tmp_path / "empty"], capsys)[0] == EXIT_CONFIG
    assert run(["evaluate", tmp_path / "missing"], capsys)[0] == EXIT_IO
    d = _corpus(tmp_path)
    assert run(["evaluate", d, "--tuples", "30,5"], capsys)[0] == EXIT_CONFIG
    assert run(["evaluate", d, "--methods", "wpghi,nope"], capsys)[0] == EXIT_CONFIG
    # a tuple that does not fit the corpus fails per signal; the run continues
    code, text, _ = run(["evaluate", d, "--methods", "wpghi", "--tuples", "30,7,100;30,5,100"], capsys)
    assert code == EXIT_FAIL
    assert len([x for x in rows(text) if not x["signal_id"].startswith("__")]) == 2


def test_verify_cr_refinement(capsys):
    code, text, _ = run(["verify", "cr", "--alpha", 100, "--refine", 3], capsys)
    assert code == EXIT_OK
    r = rows(text)
    assert len(r) == 3 and [x["check"] for x in r] == ["cr"] * 3
    rms = [float(x["rms_residual"]) for x in r]
    assert rms[0] > rms[1] > rms[2]


def test_verify_ridge_controls(capsys):
    code, _, err = run(["verify", "ridge", "--wavelet", "cauchy"], capsys)
    assert code == EXIT_OK and "coincide" in err
    code, _, err = run(["verify", "ridge", "--wavelet", "twopeak"], capsys)
    assert code == EXIT_OK and "diverge" in err


def test_verify_bad_check(capsys):
    assert run(["verify", "nope"], capsys)[0] == EXIT_USAGE


@pytest.mark.parametrize("check", ["derivative", "laplacian", "reassign", "gabor"])
def test_verify_other_checks(check, tmp_path, capsys):
    rep = tmp_path / "v.csv"
    assert run(["verify", check, "--report", rep, "--refine", 2], capsys)[0] == EXIT_OK
    assert rows(rep.read_text())


def test_reassign_command(tmp_path, capsys):
    path = tmp_path / "t.wav"
    write_wav(path, 0.5 * tone(1000.0, 800, RATE), RATE)
    out = tmp_path / "r.csv"
    code, _, _ = run(["reassign", path, "--out", out, "--alpha", 100, "--channels", 120], capsys)
    assert code == EXIT_OK
    r = rows(out.read_text())
    assert r and set(r[0]) == {"k", "n", "xi", "x", "magnitude", "xi_hat", "x_hat"}
    strong = max(r, key=lambda x: float(x["magnitude"]))
    assert float(strong["xi_hat"]) == pytest.approx(1000.0, rel=1e-2)


def test_config_file_and_flag_precedence(tone_wav, tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nalpha = 30\nchannels=100\ndecimation = 5\nmomentum=0.5\n")
    assert parse_config_file(cfg) == {"alpha": 30.0, "K": 100, "a_d": 5, "momentum": 0.5}
    g = tmp_path / "g.dcwt"
    code, text, _ = run(["analyze", tone_wav, "--out", g, "--config", cfg, "--decimation", 4], capsys)
    assert code == EXIT_OK and "redundancy=25" in text
    assert load_grid(g)[1].alpha == 30


def test_config_errors(tmp_path, tone_wav, capsys):
    for body in ("alpha\n", "nonsense = 3\n", "K = abc\n"):
        (tmp_path / "bad.cfg").write_text(body)
        with pytest.raises(ConfigError):
            parse_config_file(tmp_path / "bad.cfg")
        assert run(["analyze", tone_wav, "--out", tmp_path / "g", "--config", tmp_path / "bad.cfg"],
                   capsys)[0] == EXIT_CONFIG
    with pytest.raises(ConfigError):
        RunConfig(momentum=1.0).validate()
    with pytest.raises(ConfigError):
        RunConfig(alpha=-1).validate()
    assert run(["reconstruct", tone_wav, "--out", tmp_path / "o.wav", "--tol", 2], capsys)[0] == EXIT_CONFIG

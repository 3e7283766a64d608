"""Tests for the command-line surface, run in-process through main()."""

import numpy as np
import pytest

import hsakit as hk
from hsakit.cli import main
from hsakit.io import read_signal, read_spectrum

FS = 8000.0


def _write_tone(path, freq=100.0, n=2000, amp=1.0):
    t = np.arange(n) / FS
    x = hk.SampledSignal(amp * np.cos(2 * np.pi * freq * t), FS)
    from hsakit.io import write_signal_csv

    write_signal_csv(x, path)
    return x


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip()


def test_no_arguments_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_synth_triangle_signal(tmp_path):
    out = tmp_path / "tri.csv"
    rc = main(
        ["synth", "triangle", "--f0", "25", "--rate", "8000",
         "--duration", "0.5", "-o", str(out)]
    )
    assert rc == 0
    sig = read_signal(out)
    ref = hk.gen_triangle(
        hk.TriangleParams(amplitude=1.0, omega0=2 * np.pi * 25.0), 4000, FS
    )
    assert sig.sample_rate == pytest.approx(FS, rel=1e-9)
    assert np.allclose(sig.samples, ref.samples, atol=1e-12)


def test_synth_triangle_solution_spectrum(tmp_path):
    out = tmp_path / "hc.json"
    rc = main(
        ["synth", "triangle", "--f0", "25", "--rate", "8000", "--duration", "0.25",
         "--solution", "hc", "-o", str(out)]
    )
    assert rc == 0
    sf = read_spectrum(out)
    assert len(sf.components) == 1
    assert sf.metadata["config"]["solution"] == "hc"
    spec = sf.to_spectrum()
    assert spec.components[0].is_demodulated


def test_synth_example_with_truth_table(tmp_path):
    out = tmp_path / "ex1.csv"
    truth = tmp_path / "truth.csv"
    rc = main(
        ["synth", "example1", "--rate", "8000", "--duration", "0.25",
         "--truth", str(truth), "-o", str(out)]
    )
    assert rc == 0
    lines = truth.read_text().splitlines()
    assert lines[0] == "t,ia,if_hz"
    assert len(lines) == 2001
    first = lines[1].split(",")
    # Gaussian envelope at t=0 and carrier+message at t=0
    assert float(first[1]) == pytest.approx(np.exp(-0.25 / 25.0), rel=1e-12)
    assert float(first[2]) == pytest.approx(3000.0, rel=1e-9)


def test_emd_table_is_complete(tmp_path):
    src = tmp_path / "twotone.csv"
    rc = main(
        ["synth", "twotone", "--fa", "40", "--fb", "400", "--rate", "8000",
         "--duration", "0.5", "-o", str(src)]
    )
    assert rc == 0
    out = tmp_path / "imfs.csv"
    assert main(["emd", str(src), "-o", str(out)]) == 0
    rows = out.read_text().splitlines()
    header = rows[0].split(",")
    assert header[0] == "t" and header[-1] == "residual"
    table = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    x = read_signal(src)
    total = table[:, 1:].sum(axis=1)
    assert np.max(np.abs(total - x.samples)) <= 1e-9 * np.max(np.abs(x.samples))


def test_missing_input_is_exit_2(tmp_path):
    assert main(["emd", str(tmp_path / "ghost.csv"), "-o", str(tmp_path / "o.csv")]) == 2


def test_nonuniform_grid_is_exit_2(tmp_path):
    bad = tmp_path / "bad.csv"
    rows = ["t,x"] + [f"{0.001 * i * (1.01 if i % 2 else 1.0)},{i}" for i in range(50)]
    bad.write_text("\n".join(rows))
    assert main(["emd", str(bad), "-o", str(tmp_path / "o.csv")]) == 2


def test_demod_writes_spectrum_and_csv(tmp_path):
    src = tmp_path / "tone.csv"
    _write_tone(src)
    out = tmp_path / "comp.json"
    side = tmp_path / "comp.csv"
    rc = main(["demod", "imf", str(src), "-o", str(out), "--csv", str(side)])
    assert rc == 0
    sf = read_spectrum(out)
    assert len(sf.components) == 1
    omega = np.asarray(sf.components[0]["omega_hz"])
    assert abs(np.median(omega) - 100.0) <= 1.0
    assert side.read_text().splitlines()[0] == "t,a,omega_hz,s"


def test_demod_numeric_failure_is_exit_3(tmp_path):
    ramp = tmp_path / "ramp.csv"
    rows = ["x"] + [str(0.001 * i) for i in range(64)]
    ramp.write_text("\n".join(rows))
    rc = main(["demod", "imf", str(ramp), "--rate", "8000", "-o", str(tmp_path / "o.json")])
    assert rc == 3


@pytest.mark.parametrize("sub", ["eemd", "ceemd", "hsa"])
def test_noisy_variants_require_seed(sub, tmp_path):
    src = tmp_path / "tone.csv"
    _write_tone(src)
    with pytest.raises(SystemExit) as exc:
        main([sub, str(src), "-o", str(tmp_path / "out")])
    assert exc.value.code == 2


def test_hsa_deterministic_output(tmp_path):
    src = tmp_path / "mix.csv"
    t = np.arange(2000) / FS
    mix = np.cos(2 * np.pi * 1000 * t) + 0.8 * np.cos(2 * np.pi * 60 * t)
    from hsakit.io import write_signal_csv

    write_signal_csv(hk.SampledSignal(mix, FS), src)
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    args = ["hsa", str(src), "--seed", "7", "-I", "4", "--beta", "0.2"]
    assert main(args + ["-o", str(out1)]) == 0
    assert main(args + ["-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    sf = read_spectrum(out1)
    assert sf.metadata["config"]["seed"] == 7
    assert len(sf.components) >= 1


def test_stft_grid(tmp_path):
    src = tmp_path / "tone.csv"
    _write_tone(src)
    out = tmp_path / "grid.csv"
    rc = main(["stft", str(src), "--window", "256", "--hop", "128", "-o", str(out)])
    assert rc == 0
    rows = out.read_text().splitlines()
    n_frames = (2000 - 256) // 128 + 1
    assert len(rows) == n_frames + 1
    assert len(rows[1].split(",")) == 130


def test_info_summary(tmp_path, capsys):
    src = tmp_path / "tone.csv"
    _write_tone(src, n=2000)
    assert main(["info", str(src)]) == 0
    text = capsys.readouterr().out
    assert "samples:        2000" in text
    assert "8000 Hz" in text
    assert "zero crossings:" in text

"""CLI behavior: subcommand flows, exit codes, emitted files."""

import pytest

from wbsnsec.cli import EXIT_ALARM, EXIT_DATA, EXIT_OK, EXIT_USAGE, run_cli
from wbsnsec.crt_codec import decode_image, encode_image
from wbsnsec.imaging import read_pgm, synth_image, write_pgm
from wbsnsec.metrics import rows_from_csv
from wbsnsec.pipeline import read_key_bundle, report_from_json


@pytest.fixture
def keyfile(tmp_path):
    path = tmp_path / "key.txt"
    assert run_cli(["keygen", "--k", "4", "--order", "256", "--seed", "77",
                    "--out", str(path)]) == EXIT_OK
    return path


def test_keygen_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run_cli(["keygen", "--seed", "5", "--out", str(a)])
    run_cli(["keygen", "--seed", "5", "--out", str(b)])
    assert a.read_text() == b.read_text()


def test_encode_decode_pgm_byte_identical(tmp_path, keyfile):
    img_path = tmp_path / "img.pgm"
    write_pgm(synth_image("blocks", 48, 48, seed=2), img_path)
    payload_path = tmp_path / "payload.bin"
    out_path = tmp_path / "back.pgm"
    assert run_cli(["encode", "--image", str(img_path), "--key", str(keyfile),
                    "--out", str(payload_path)]) == EXIT_OK
    assert run_cli(["decode", "--in", str(payload_path), "--key", str(keyfile),
                    "--out", str(out_path)]) == EXIT_OK
    assert out_path.read_bytes() == img_path.read_bytes()


def test_decode_garbage_is_data_error(tmp_path, keyfile):
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"not a payload")
    assert run_cli(["decode", "--in", str(bad), "--key", str(keyfile),
                    "--out", str(tmp_path / "x.pgm")]) == EXIT_DATA


def test_usage_error_exit_code(capsys):
    assert run_cli(["decode", "--in", "x"]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "--key" in err or "--out" in err


def test_unknown_command_exit_code():
    assert run_cli(["frobnicate"]) == EXIT_USAGE


def test_ecg_sim_hrv_auth_flow(tmp_path):
    ecg_a = tmp_path / "a.csv"
    ecg_b = tmp_path / "b.csv"
    assert run_cli(["ecg-sim", "--bpm", "72", "--duration", "10", "--seed", "1",
                    "--out", str(ecg_a)]) == EXIT_OK
    assert run_cli(["ecg-sim", "--bpm", "60", "--duration", "10", "--seed", "2",
                    "--out", str(ecg_b)]) == EXIT_OK
    sig_a, sig_b = tmp_path / "a.hex", tmp_path / "b.hex"
    assert run_cli(["hrv", "--ecg", str(ecg_a), "--out", str(sig_a)]) == EXIT_OK
    assert run_cli(["hrv", "--ecg", str(ecg_b), "--out", str(sig_b)]) == EXIT_OK
    assert run_cli(["auth", "--sig-a", str(sig_a), "--sig-b", str(sig_a)]) == EXIT_OK
    assert run_cli(["auth", "--sig-a", str(sig_a), "--sig-b", str(sig_b)]) == EXIT_ALARM


def test_auth_identical_prints_zero_distance(tmp_path, capsys):
    ecg = tmp_path / "a.csv"
    run_cli(["ecg-sim", "--bpm", "72", "--out", str(ecg)])
    sig = tmp_path / "a.hex"
    run_cli(["hrv", "--ecg", str(ecg), "--out", str(sig)])
    capsys.readouterr()
    run_cli(["auth", "--sig-a", str(sig), "--sig-b", str(sig)])
    out = capsys.readouterr().out
    assert "accepted=True" in out and "hamming_distance=0" in out


def test_encrypt_decrypt_files(tmp_path, keyfile):
    src = tmp_path / "data.bin"
    src.write_bytes(bytes(range(256)) * 3)
    enc = tmp_path / "data.enc"
    dec = tmp_path / "data.dec"
    assert run_cli(["encrypt", "--in", str(src), "--key", str(keyfile),
                    "--out", str(enc)]) == EXIT_OK
    assert enc.read_bytes() != src.read_bytes()
    assert run_cli(["decrypt", "--in", str(enc), "--key", str(keyfile),
                    "--out", str(dec)]) == EXIT_OK
    assert dec.read_bytes() == src.read_bytes()


def test_pipeline_intruder_exits_alarm(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    code = run_cli(["pipeline", "--scenario", "intruder", "--seed", "3",
                    "--report", "json", "--out", str(report_path)])
    assert code == EXIT_ALARM
    report = report_from_json(report_path.read_text())
    assert not report.verdict.accepted


def test_pipeline_same_subject_ok(tmp_path):
    code = run_cli(["pipeline", "--scenario", "same_subject", "--seed", "3",
                    "--report", "csv", "--out", str(tmp_path / "r.csv")])
    assert code == EXIT_OK


def test_pipeline_tamper_exits_data_error(tmp_path):
    code = run_cli(["pipeline", "--scenario", "tamper", "--seed", "3",
                    "--out", str(tmp_path / "r.json")])
    assert code == EXIT_DATA


def test_pipeline_plot_dir_renders_figures(tmp_path):
    plot_dir = tmp_path / "figs"
    code = run_cli(["pipeline", "--scenario", "same_subject", "--seed", "4",
                    "--out", str(tmp_path / "r.json"), "--plot-dir", str(plot_dir)])
    assert code == EXIT_OK
    ecg_fig = plot_dir / "same_subject_ecg.png"
    byte_fig = plot_dir / "same_subject_bytes.png"
    assert ecg_fig.exists() and ecg_fig.stat().st_size > 0
    assert byte_fig.exists() and byte_fig.stat().st_size > 0


def test_entropy_command(tmp_path, capsys):
    path = tmp_path / "u.bin"
    path.write_bytes(bytes(range(256)))
    assert run_cli(["entropy", "--in", str(path)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "8.0"


def test_bench_csv_and_plots(tmp_path, keyfile):
    images = tmp_path / "imgs"
    images.mkdir()
    for kind in ("flat", "blocks", "noise"):
        write_pgm(synth_image(kind, 64, 64, seed=1), images / f"{kind}.pgm")
    stream = tmp_path / "stream.bin"
    stream.write_bytes(bytes(range(256)) * 8)
    out = tmp_path / "bench.csv"
    plot_dir = tmp_path / "figs"
    code = run_cli(["bench", "--images", str(images), "--key", str(keyfile),
                    "--report", "csv", "--out", str(out),
                    "--plot-dir", str(plot_dir),
                    "--entropy-stream", f"external={stream}"])
    assert code == EXIT_OK
    rows = rows_from_csv(out.read_text())
    assert len(rows) == 4
    by_image = {r.image: r for r in rows if r.image}
    # noise is the honest negative control, flat the best case
    assert by_image["noise.pgm"].compression_ratio <= 1.1
    assert by_image["flat.pgm"].compression_ratio > 10
    external = [r for r in rows if r.algorithm_label == "external"][0]
    assert external.compression_ratio is None
    assert external.ciphertext_entropy == 8.0
    assert (plot_dir / "bench_metrics.png").stat().st_size > 0


def test_bench_ratio_matches_recomputation(tmp_path, keyfile):
    images = tmp_path / "imgs"
    images.mkdir()
    write_pgm(synth_image("blocks", 64, 64, seed=5), images / "b.pgm")
    out = tmp_path / "bench.csv"
    assert run_cli(["bench", "--images", str(images), "--key", str(keyfile),
                    "--out", str(out)]) == EXIT_OK
    row = rows_from_csv(out.read_text())[0]
    assert row.compression_ratio_with_header == row.bytes_original / row.bytes_encoded


def test_ecg_sim_plot_file(tmp_path):
    fig = tmp_path / "trace.png"
    assert run_cli(["ecg-sim", "--bpm", "72", "--duration", "5",
                    "--out", str(tmp_path / "t.csv"), "--plot", str(fig)]) == EXIT_OK
    assert fig.stat().st_size > 0


def test_synth_image_blocks_distinct_block_bound(tmp_path, keyfile):
    # 4 tiles of 8x8 over k=4 gives at most 4 * 16 distinct quotient blocks
    img_path = tmp_path / "img.pgm"
    assert run_cli(["synth-image", "--kind", "blocks", "--width", "64",
                    "--height", "64", "--seed", "9", "--out", str(img_path)]) == EXIT_OK
    img = read_pgm(img_path)
    bundle = read_key_bundle(keyfile)
    payload = encode_image(img, bundle.crt)
    k = bundle.crt.k
    quotients = [p >> 4 for p in img.pixels]
    distinct_blocks = {
        tuple(quotients[i : i + k]) for i in range(0, len(quotients), k)
    }
    assert len(payload.tr_table) == len(distinct_blocks)
    assert len(payload.tr_table) <= 4 * (8 * 8 // k)
    assert decode_image(payload, bundle.crt) == img

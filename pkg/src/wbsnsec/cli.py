"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error, 3 authentication alarm.
Report paths (`pipeline`, `bench`, `ecg-sim`) can render figures next to
their CSV/JSON output via --plot-dir / --plot.
"""

from __future__ import annotations

import argparse
import secrets
import sys
import time
from pathlib import Path

from . import pipeline as pl
from .crt_codec import decode_image, encode_image
from .ecg import (
    HrvSignature,
    authenticate,
    detect_r_peaks,
    hrv_from_peaks,
    load_ecg,
    save_ecg,
    synth_ecg,
)
from .errors import WbsnError
from .imaging import SYNTH_KINDS, read_pgm, synth_image, write_pgm
from .metrics import MetricsRow, compression_ratio, rows_to_csv, rows_to_json, shannon_entropy

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ALARM = 3


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


# --- subcommand handlers ------------------------------------------------------

def _cmd_keygen(args) -> int:
    seed = args.seed if args.seed is not None else secrets.randbits(32)
    mode, block_len = "chain", None
    if args.mode != "chain":
        if not args.mode.startswith("block:"):
            raise WbsnError(f"mode must be chain or block:<B>, got {args.mode!r}")
        mode, block_len = "block", int(args.mode.split(":", 1)[1])
    bundle = pl.generate_key_bundle(seed, k=args.k, order=args.order,
                                    mode=mode, block_len=block_len)
    pl.write_key_bundle(bundle, args.out)
    print(f"wrote key {bundle.key_id:08x} (k={args.k}, order={args.order}, "
          f"mode={args.mode}, seed={seed}) to {args.out}")
    return EXIT_OK


def _cmd_encode(args) -> int:
    bundle = pl.read_key_bundle(args.key)
    img = read_pgm(args.image)
    payload = encode_image(img, bundle.crt)
    blob = pl.serialize_payload(payload)
    Path(args.out).write_bytes(blob)
    ratio = compression_ratio(len(img.pixels), len(blob))
    print(f"{args.image}: {len(img.pixels)} -> {len(blob)} bytes "
          f"(ratio {ratio:.4f}) -> {args.out}")
    return EXIT_OK


def _cmd_decode(args) -> int:
    bundle = pl.read_key_bundle(args.key)
    payload = pl.parse_payload(Path(args.infile).read_bytes())
    img = decode_image(payload, bundle.crt)
    write_pgm(img, args.out)
    print(f"{args.infile}: decoded {img.width}x{img.height} image -> {args.out}")
    return EXIT_OK


def _cmd_ecg_sim(args) -> int:
    trace = synth_ecg(args.bpm, args.duration, args.rate,
                      noise_amplitude=args.noise, seed=args.seed,
                      subject_id=args.subject)
    save_ecg(trace, args.out)
    print(f"wrote {len(trace.samples)} samples ({args.bpm} bpm, "
          f"{args.duration:g} s at {args.rate:g} Hz) to {args.out}")
    if args.plot:
        from .plots import save_ecg_figure

        peaks = detect_r_peaks(trace)
        save_ecg_figure([(trace, peaks, f"{args.bpm:g} bpm synthetic ECG")], args.plot)
        print(f"wrote figure to {args.plot}")
    return EXIT_OK


def _cmd_hrv(args) -> int:
    trace = load_ecg(args.ecg)
    signature = hrv_from_peaks(detect_r_peaks(trace))
    rr = [1.0 / v for v in signature.hrv_values]
    mean_rr = sum(rr) / len(rr)
    mean_hrv = sum(signature.hrv_values) / len(signature.hrv_values)
    print(f"peaks={len(signature.hrv_values) + 1} mean_rr={mean_rr:.4f}s "
          f"mean_hrv={mean_hrv:.4f} bits={len(signature.bits)}")
    if args.out:
        Path(args.out).write_text(signature.to_hex() + "\n", encoding="ascii")
        print(f"wrote signature to {args.out}")
    return EXIT_OK


def _cmd_auth(args) -> int:
    sig_a = HrvSignature.from_hex(Path(args.sig_a).read_text(encoding="ascii"))
    sig_b = HrvSignature.from_hex(Path(args.sig_b).read_text(encoding="ascii"))
    verdict = authenticate(sig_a, sig_b, args.threshold)
    accepted = verdict.accepted
    note = ""
    if args.hamming_gate is not None and verdict.hamming_distance > args.hamming_gate:
        accepted = False
        note = f" hamming_gate={args.hamming_gate} exceeded"
    print(f"accepted={accepted} mean_hrv_difference={verdict.mean_hrv_difference:.4f} "
          f"hamming_distance={verdict.hamming_distance} "
          f"threshold={verdict.threshold_used:g}{note}")
    return EXIT_OK if accepted else EXIT_ALARM


def _cmd_encrypt(args, decrypt: bool = False) -> int:
    bundle = pl.read_key_bundle(args.key)
    data = Path(args.infile).read_bytes()
    out = pl.decrypt_body(bundle, data) if decrypt else pl.encrypt_body(bundle, data)
    Path(args.out).write_bytes(out)
    print(f"{'decrypted' if decrypt else 'encrypted'} {len(data)} bytes -> {args.out}")
    return EXIT_OK


def _cmd_pipeline(args) -> int:
    setup = pl.build_scenario(args.scenario, args.seed)
    msg = pl.seal_message(setup.image, setup.node_ecg, setup.keys)
    if setup.tamper_seed is not None:
        msg = pl.tamper_message(msg, setup.tamper_seed)
    report = pl.open_message(msg, setup.sink_ecg, setup.keys, args.threshold,
                             original=setup.image, strict=False)
    report.scenario = args.scenario
    text = (pl.report_to_csv(report) if args.report == "csv"
            else pl.report_to_json(report) + "\n")
    _write_or_print(text, args.out)

    if args.plot_dir:
        from .plots import save_byte_histogram_figure, save_ecg_figure

        plot_dir = Path(args.plot_dir)
        plot_dir.mkdir(parents=True, exist_ok=True)
        panels = [
            (setup.node_ecg, detect_r_peaks(setup.node_ecg),
             f"node sensor ({setup.node_ecg.subject_id})"),
            (setup.sink_ecg, detect_r_peaks(setup.sink_ecg),
             f"sink sensor ({setup.sink_ecg.subject_id})"),
        ]
        save_ecg_figure(panels, plot_dir / f"{args.scenario}_ecg.png")
        plain = pl.serialize_payload(encode_image(setup.image, setup.keys.crt))
        save_byte_histogram_figure(
            [("encoded payload", plain), ("encrypted body", msg.encrypted_body)],
            plot_dir / f"{args.scenario}_bytes.png",
        )
        print(f"wrote figures to {plot_dir}", file=sys.stderr)

    if not report.verdict.accepted:
        return EXIT_ALARM
    if not report.image_recovered:
        return EXIT_DATA
    return EXIT_OK


def _cmd_entropy(args) -> int:
    data = Path(args.infile).read_bytes()
    print(f"{shannon_entropy(data)!r}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    bundle = pl.read_key_bundle(args.key)
    images = sorted(Path(args.images).glob("*.pgm"))
    if not images:
        raise WbsnError(f"no .pgm images found in {args.images}")
    rows = []
    for path in images:
        img = read_pgm(path)
        started = time.perf_counter()
        payload = encode_image(img, bundle.crt)
        elapsed = time.perf_counter() - started
        blob = pl.serialize_payload(payload)
        body = pl.encrypt_body(bundle, blob)
        original = len(img.pixels)
        rows.append(MetricsRow(
            algorithm_label=f"crt-k{bundle.crt.k}",
            image=path.name,
            bytes_original=original,
            bytes_encoded=len(blob),
            execution_time=elapsed,
            compression_ratio=compression_ratio(
                original, len(blob) - pl.PAYLOAD_HEADER_LEN),
            compression_ratio_with_header=compression_ratio(original, len(blob)),
            payload_entropy=shannon_entropy(blob),
            ciphertext_entropy=shannon_entropy(body),
            mod_multiplications=2 * payload.block_count * payload.k,
            table_lookups=len(blob),
        ))
    for entry in args.entropy_stream or []:
        if "=" not in entry:
            raise WbsnError(f"--entropy-stream wants LABEL=FILE, got {entry!r}")
        label, path = entry.split("=", 1)
        rows.append(MetricsRow(
            algorithm_label=label,
            ciphertext_entropy=shannon_entropy(Path(path).read_bytes()),
        ))
    text = rows_to_csv(rows) if args.report == "csv" else rows_to_json(rows) + "\n"
    _write_or_print(text, args.out)
    if args.plot_dir:
        from .plots import save_bench_figure

        plot_dir = Path(args.plot_dir)
        plot_dir.mkdir(parents=True, exist_ok=True)
        save_bench_figure(rows, plot_dir / "bench_metrics.png")
        print(f"wrote figures to {plot_dir}", file=sys.stderr)
    return EXIT_OK


def _cmd_synth_image(args) -> int:
    img = synth_image(args.kind, args.width, args.height, seed=args.seed)
    write_pgm(img, args.out)
    print(f"wrote {args.kind} {args.width}x{args.height} image to {args.out}")
    return EXIT_OK


# --- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wbsnsec",
                     description="Sensor-to-sink security pipeline: CRT codec, "
                                 "quasigroup cipher, HRV authentication.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("keygen", help="generate a key bundle file")
    p.add_argument("--k", type=int, default=4, help="codec block length (half-pixels)")
    p.add_argument("--order", type=int, default=256, choices=(2, 4, 16, 256),
                   help="quasigroup order")
    p.add_argument("--seed", type=int, default=None, help="32-bit generation seed")
    p.add_argument("--mode", default="chain", help="chain or block:<B>")
    p.add_argument("--out", required=True, help="key file to write")
    p.set_defaults(func=_cmd_keygen)

    p = sub.add_parser("encode", help="compress/encode a PGM image")
    p.add_argument("--image", required=True, help="input PGM (P5)")
    p.add_argument("--key", required=True, help="key bundle file")
    p.add_argument("--out", required=True, help="payload file to write")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="decode a payload back to PGM")
    p.add_argument("--in", dest="infile", required=True, help="payload file")
    p.add_argument("--key", required=True, help="key bundle file")
    p.add_argument("--out", required=True, help="PGM file to write")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("ecg-sim", help="synthesize an ECG trace")
    p.add_argument("--bpm", type=float, default=72.0)
    p.add_argument("--duration", type=float, default=10.0, help="seconds")
    p.add_argument("--rate", type=float, default=250.0, help="Hz")
    p.add_argument("--noise", type=float, default=0.0, help="mV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subject", default="sim")
    p.add_argument("--out", required=True, help="trace CSV to write")
    p.add_argument("--plot", default=None, help="also render the trace to this file")
    p.set_defaults(func=_cmd_ecg_sim)

    p = sub.add_parser("hrv", help="derive an HRV signature from a trace")
    p.add_argument("--ecg", required=True, help="trace CSV")
    p.add_argument("--out", default=None, help="hex signature file to write")
    p.set_defaults(func=_cmd_hrv)

    p = sub.add_parser("auth", help="compare two HRV signature files")
    p.add_argument("--sig-a", required=True)
    p.add_argument("--sig-b", required=True)
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("--hamming-gate", type=int, default=None,
                   help="also require Hamming distance <= this many bits")
    p.set_defaults(func=_cmd_auth)

    p = sub.add_parser("encrypt", help="quasigroup-encrypt a file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=lambda a: _cmd_encrypt(a, decrypt=False))

    p = sub.add_parser("decrypt", help="quasigroup-decrypt a file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=lambda a: _cmd_encrypt(a, decrypt=True))

    p = sub.add_parser("pipeline", help="run a full node-to-sink scenario")
    p.add_argument("--scenario", required=True, choices=pl.SCENARIOS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("--report", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--plot-dir", default=None,
                   help="render ECG and byte-distribution figures into this directory")
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("entropy", help="Shannon entropy of a file, bits/byte")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("bench", help="encode every PGM in a directory, report metrics")
    p.add_argument("--images", required=True, help="directory of .pgm files")
    p.add_argument("--key", required=True)
    p.add_argument("--report", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--plot-dir", default=None,
                   help="render ratio/entropy bars into this directory")
    p.add_argument("--entropy-stream", action="append", metavar="LABEL=FILE",
                   help="extra entropy-only row from an external byte stream")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("synth-image", help="write a deterministic test PGM")
    p.add_argument("--kind", choices=SYNTH_KINDS, default="blocks")
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth_image)

    return parser


def run_cli(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except WbsnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main(argv: list[str] | None = None) -> int:
    return run_cli(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

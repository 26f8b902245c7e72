"""Acceptance criteria, one test per criterion, at the stated tolerances.

Each test prints a [PASS]/[FAIL] line (run pytest with -s to see them all).
Expected values come from independent oracles computed here, never from
the code paths under test.
"""

import functools
import random
import time

import pytest

from wbsnsec.crt_codec import (
    build_key,
    encode_block,
    encode_image,
    decode_image,
    generate_moduli,
)
from wbsnsec.ecg import (
    authenticate,
    detect_r_peaks,
    hamming_distance,
    hrv_from_peaks,
    synth_ecg,
)
from wbsnsec.errors import WbsnError
from wbsnsec.imaging import ImageGrid, synth_image
from wbsnsec.metrics import shannon_entropy
from wbsnsec.pipeline import (
    DataMessage,
    PAYLOAD_HEADER_LEN,
    generate_key_bundle,
    parse_payload,
    seal_message,
    serialize_payload,
    simulate_session,
)
from wbsnsec.quasigroup import (
    decrypt_blocks,
    decrypt_chain,
    encrypt_blocks,
    encrypt_chain,
    generate_quasigroup,
)


def criterion(label):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[FAIL] {label}")
                raise
            print(f"[PASS] {label}")
        return wrapper
    return decorate


@criterion("1. codec roundtrip: 200 random images x k in {2,4,8}, bit-exact, < 30 s")
def test_criterion_1_codec_roundtrip():
    started = time.perf_counter()
    for seed in range(200):
        rng = random.Random(seed)
        width, height = rng.randint(1, 64), rng.randint(1, 64)
        img = ImageGrid(width, height, rng.randbytes(width * height))
        for k in (2, 4, 8):
            moduli = generate_moduli(k, seed=rng.getrandbits(32))
            assert all(m >= 17 for m in moduli)
            key = build_key(moduli)
            assert decode_image(encode_image(img, key), key) == img
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"took {elapsed:.1f} s"


@criterion("2. block combination equals brute-force congruence scan, exact")
def test_criterion_2_oracle_equivalence():
    pool = [16, 17, 19, 21, 23]
    rng = random.Random(0)
    for i in range(len(pool)):
        for j in range(i + 1, len(pool)):
            moduli = [pool[i], pool[j]]
            key = build_key(moduli)
            assert key.product <= 10**6
            solutions = {}
            for x in range(key.product):
                solutions.setdefault((x % moduli[0], x % moduli[1]), x)
            for _ in range(1000):
                halves = (rng.randrange(16), rng.randrange(16))
                assert encode_block(halves, key) == solutions[halves]


@criterion('3. Hamming distance of the two 10-bit strings is exactly 9')
def test_criterion_3_hamming_reference():
    assert hamming_distance("0100101000", "1011010101") == 9


@criterion("4. HRV values: 72 bpm ~ (0.84 s, 1.19); 60 bpm ~ (1.0 s, 1.0); gap ~ 0.19")
def test_criterion_4_hrv_reference_values():
    fast = hrv_from_peaks(detect_r_peaks(synth_ecg(72, 10, 250, noise_amplitude=0)))
    slow = hrv_from_peaks(detect_r_peaks(synth_ecg(60, 10, 250, noise_amplitude=0)))

    fast_rr = [1.0 / v for v in fast.hrv_values]
    assert 0.82 <= sum(fast_rr) / len(fast_rr) <= 0.85
    fast_hrv = sum(fast.hrv_values) / len(fast.hrv_values)
    assert 1.18 <= fast_hrv <= 1.22

    slow_rr = [1.0 / v for v in slow.hrv_values]
    assert 0.98 <= sum(slow_rr) / len(slow_rr) <= 1.02
    slow_hrv = sum(slow.hrv_values) / len(slow.hrv_values)
    assert 0.98 <= slow_hrv <= 1.02

    verdict = authenticate(fast, slow, threshold=0.1)
    assert 0.17 <= verdict.mean_hrv_difference <= 0.21


@criterion("5. same_subject accepts >= 99/100 seeds; intruder rejects 100/100")
def test_criterion_5_authentication_outcomes():
    accepted = sum(
        simulate_session("same_subject", seed).verdict.accepted for seed in range(100)
    )
    assert accepted >= 99, f"same_subject accepted only {accepted}/100"
    rejected = sum(
        not simulate_session("intruder", seed).verdict.accepted for seed in range(100)
    )
    assert rejected == 100, f"intruder rejected only {rejected}/100"


@criterion("6. cipher roundtrip: 10k symbols, orders {2,4,16,256}, both modes, 50 keys")
def test_criterion_6_cipher_roundtrip():
    rng = random.Random(6)
    for order in (2, 4, 16, 256):
        for key_index in range(50):
            q = generate_quasigroup(order, seed=rng.getrandbits(32))
            message = [rng.randrange(order) for _ in range(10_000)]
            assert decrypt_chain(q, encrypt_chain(q, message)) == message
            assert decrypt_blocks(q, encrypt_blocks(q, message, 64), 64) == message


@criterion("7. locality: block mode confines corruption to <= 16 symbols; "
           "chain first hit <= flip index")
def test_criterion_7_error_locality():
    rng = random.Random(7)
    q = generate_quasigroup(256, seed=71)
    for _ in range(100):
        message = [rng.randrange(256) for _ in range(rng.randrange(64, 512))]
        cipher = encrypt_blocks(q, message, 16)
        pos = rng.randrange(len(cipher))
        cipher[pos] = (cipher[pos] + rng.randrange(1, 256)) % 256
        decoded = decrypt_blocks(q, cipher, 16)
        changed = [i for i, (a, b) in enumerate(zip(decoded, message)) if a != b]
        assert changed and len(changed) <= 16
    for _ in range(100):
        message = [rng.randrange(256) for _ in range(rng.randrange(64, 512))]
        cipher = encrypt_chain(q, message)
        pos = rng.randrange(len(cipher))
        cipher[pos] = (cipher[pos] + rng.randrange(1, 256)) % 256
        decoded = decrypt_chain(q, cipher)
        changed = [i for i, (a, b) in enumerate(zip(decoded, message)) if a != b]
        assert changed and changed[0] <= pos


@criterion("8. ciphertext entropy >= payload entropy - 0.05 bits/byte, 20 keys, >= 64 KiB")
def test_criterion_8_entropy_preservation():
    key = build_key(generate_moduli(4, seed=8))
    img = synth_image("blocks", 512, 512, seed=88)
    plain = serialize_payload(encode_image(img, key))
    assert len(plain) >= 64 * 1024, f"payload only {len(plain)} bytes"
    plain_entropy = shannon_entropy(plain)
    rng = random.Random(80)
    for _ in range(20):
        q = generate_quasigroup(256, seed=rng.getrandbits(32))
        cipher_entropy = shannon_entropy(bytes(encrypt_chain(q, plain)))
        assert cipher_entropy >= plain_entropy - 0.05, (
            f"cipher {cipher_entropy:.4f} vs plain {plain_entropy:.4f}"
        )


@criterion("9. blocks image ratio >= 2.0 (without header); noise image <= 1.1")
def test_criterion_9_compression_behavior():
    key = build_key(generate_moduli(4, seed=9))

    blocks_img = synth_image("blocks", 128, 128, seed=99, tiles=4)
    blocks_payload = serialize_payload(encode_image(blocks_img, key))
    blocks_ratio = len(blocks_img.pixels) / (len(blocks_payload) - PAYLOAD_HEADER_LEN)
    assert blocks_ratio >= 2.0, f"blocks ratio {blocks_ratio:.3f}"

    noise_img = synth_image("noise", 128, 128, seed=99)
    noise_payload = serialize_payload(encode_image(noise_img, key))
    noise_ratio = len(noise_img.pixels) / (len(noise_payload) - PAYLOAD_HEADER_LEN)
    assert noise_ratio <= 1.1, f"noise ratio {noise_ratio:.3f}"


@criterion("10. parse/serialize identity on 500 payloads; every container "
           "truncation rejected")
def test_criterion_10_serialization():
    rng = random.Random(10)
    for _ in range(500):
        k = rng.choice([2, 3, 4])
        key = build_key(generate_moduli(k, seed=rng.getrandbits(32)))
        w, h = rng.randint(1, 10), rng.randint(1, 10)
        payload = encode_image(ImageGrid(w, h, rng.randbytes(w * h)), key)
        assert parse_payload(serialize_payload(payload)) == payload

    keys = generate_key_bundle(101)
    img = synth_image("blocks", 16, 16, seed=1)
    ecg = synth_ecg(72, 10, 250, noise_amplitude=0.01, seed=2)
    container = seal_message(img, ecg, keys).to_bytes()
    assert DataMessage.from_bytes(container)  # sanity: the full bytes parse
    for cut in range(len(container)):
        with pytest.raises(WbsnError):
            DataMessage.from_bytes(container[:cut])

"""Two-level security pipeline for wireless body sensor networks.

Level one compresses and key-encodes images with a residue-number codec;
level two encrypts the serialized payload with a Latin-square stream
cipher; sensors authenticate to the sink by comparing HRV signatures
derived from simultaneously captured ECG.
"""

from .crt_codec import (
    CrtKeySet,
    NticePayload,
    build_code_table,
    build_key,
    decode_block,
    decode_image,
    encode_block,
    encode_image,
    generate_moduli,
    modular_inverse,
    reconstruct_pixel,
    split_pixel,
)
from .ecg import (
    AuthVerdict,
    EcgTrace,
    HrvSignature,
    RPeakList,
    authenticate,
    beat_instants,
    detect_r_peaks,
    hamming_distance,
    hrv_from_peaks,
    load_ecg,
    save_ecg,
    synth_ecg,
)
from .errors import WbsnError
from .imaging import ImageGrid, read_pgm, synth_image, write_pgm
from .metrics import MetricsRow, compression_ratio, shannon_entropy
from .pipeline import (
    DataMessage,
    KeyBundle,
    SessionReport,
    build_scenario,
    generate_key_bundle,
    open_message,
    parse_payload,
    read_key_bundle,
    seal_message,
    serialize_payload,
    simulate_session,
    write_key_bundle,
)
from .quasigroup import (
    LeftDivisionTable,
    Quasigroup,
    decrypt_blocks,
    decrypt_chain,
    encrypt_blocks,
    encrypt_chain,
    generate_quasigroup,
    left_division,
    validate_latin_square,
)

__version__ = "0.1.0"

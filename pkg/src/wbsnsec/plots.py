"""Figure rendering for report outputs.

Everything here writes image files next to the delimited reports; the Agg
backend keeps it headless-safe.
"""

from __future__ import annotations

from collections import Counter

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .ecg import EcgTrace, RPeakList  # noqa: E402
from .metrics import MetricsRow, shannon_entropy  # noqa: E402


def save_ecg_figure(panels: list[tuple[EcgTrace, RPeakList | None, str]],
                    path) -> None:
    """Stacked trace panels with detected R peaks marked."""
    fig, axes = plt.subplots(len(panels), 1, figsize=(10, 2.6 * len(panels)),
                             squeeze=False, sharex=True)
    for ax, (trace, peaks, label) in zip(axes[:, 0], panels):
        t = trace.start_time + np.arange(len(trace.samples)) / trace.sample_rate
        ax.plot(t, trace.samples, lw=0.8, color="tab:blue")
        if peaks is not None:
            idx = [int(round((pt - trace.start_time) * trace.sample_rate))
                   for pt in peaks.times]
            ax.plot([t[i] for i in idx], [trace.samples[i] for i in idx],
                    "v", color="tab:red", ms=6, label="R peaks")
            ax.legend(loc="upper right", fontsize=8)
        ax.set_ylabel("mV")
        ax.set_title(label, fontsize=10)
        ax.grid(alpha=0.3)
    axes[-1, 0].set_xlabel("time (s)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_byte_histogram_figure(datasets: list[tuple[str, bytes]], path) -> None:
    """Byte-value frequency per stream, entropy in the legend."""
    fig, ax = plt.subplots(figsize=(9, 4))
    for label, data in datasets:
        counts = Counter(data)
        freq = np.array([counts.get(b, 0) for b in range(256)]) / max(1, len(data))
        ax.plot(range(256), freq, lw=0.9,
                label=f"{label} ({shannon_entropy(data):.3f} bits/byte)")
    ax.set_xlabel("byte value")
    ax.set_ylabel("frequency")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_bench_figure(rows: list[MetricsRow], path) -> None:
    """Compression ratio and entropy bars per benchmarked input."""
    labeled = [r for r in rows if r.compression_ratio is not None]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(12, 4))
    names = [r.image or r.algorithm_label for r in labeled]
    x = np.arange(len(labeled))
    ax1.bar(x, [r.compression_ratio for r in labeled], color="tab:blue")
    ax1.axhline(1.0, color="gray", lw=0.8, ls="--")
    ax1.set_xticks(x, names, rotation=45, ha="right", fontsize=8)
    ax1.set_ylabel("compression ratio")
    entro = [(r.image or r.algorithm_label, r.ciphertext_entropy) for r in rows
             if r.ciphertext_entropy is not None]
    if entro:
        xe = np.arange(len(entro))
        ax2.bar(xe, [e for _, e in entro], color="tab:orange")
        ax2.set_xticks(xe, [n for n, _ in entro], rotation=45, ha="right", fontsize=8)
    ax2.set_ylim(0, 8.2)
    ax2.set_ylabel("ciphertext entropy (bits/byte)")
    for ax in (ax1, ax2):
        ax.grid(alpha=0.3, axis="y")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

"""Figure rendering for report CSVs.  Every plot lands next to its CSV."""
from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _read_csv(path: str):
    rows = []
    with open(path) as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(reader)
        for row in reader:
            rows.append(dict(zip(header, row)))
    return rows


def png_path_for(csv_path: str) -> str:
    stem = csv_path[:-4] if csv_path.endswith(".csv") else csv_path
    return stem + ".png"


def plot_ber(csv_path: str, png_path: str | None = None) -> str:
    rows = _read_csv(csv_path)
    png_path = png_path or png_path_for(csv_path)
    x = [float(r["ebn0_db"]) for r in rows]
    y = [float(r["ber"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.semilogy(x, y, "o-")
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("BER")
    ax.grid(True, which="both", alpha=0.4)
    fig.tight_layout()
    fig.savefig(png_path, dpi=140)
    plt.close(fig)
    return png_path


def plot_bound(csv_path: str, png_path: str | None = None) -> str:
    rows = _read_csv(csv_path)
    png_path = png_path or png_path_for(csv_path)
    x = [float(r["ebn0_db"]) for r in rows]
    y = [float(r["ber_bound"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.semilogy(x, y, "k--", label="genie-aided bound")
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("BER")
    ax.legend()
    ax.grid(True, which="both", alpha=0.4)
    fig.tight_layout()
    fig.savefig(png_path, dpi=140)
    plt.close(fig)
    return png_path


def plot_compare(csv_path: str, png_path: str | None = None) -> str:
    rows = _read_csv(csv_path)
    png_path = png_path or png_path_for(csv_path)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    labels = []
    for r in rows:
        if r["candidate"] not in labels:
            labels.append(r["candidate"])
    for label in labels:
        pts = [(float(r["ebn0_db"]), float(r["ber"]))
               for r in rows if r["candidate"] == label]
        ax.semilogy([p[0] for p in pts], [p[1] for p in pts], "o-", label=label)
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("BER")
    ax.legend()
    ax.grid(True, which="both", alpha=0.4)
    fig.tight_layout()
    fig.savefig(png_path, dpi=140)
    plt.close(fig)
    return png_path

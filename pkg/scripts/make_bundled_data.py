#!/usr/bin/env python3
"""Regenerate the bundled example datasets (deterministic)."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from renyi_select.data import save_csv
from renyi_select.synthetic import make_waveform

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "renyi_select" / "datasets"

if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    waveform = make_waveform(n=600, seed=7)
    save_csv(waveform, OUT / "waveform.csv")
    print(f"wrote {OUT / 'waveform.csv'} ({waveform.n} rows, {waveform.F} features)")

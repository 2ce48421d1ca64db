"""IQ binary files (little-endian interleaved float32 I,Q) plus the text
sidecar header describing the stream."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HEADER_KEYS = ("sample_rate_hz", "samples_per_symbol", "frames", "pad_bits",
               "pilot_seed")


@dataclass(frozen=True)
class StreamHeader:
    sample_rate_hz: float
    samples_per_symbol: int
    frames: int
    pad_bits: int
    pilot_seed: int

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"sample_rate_hz = {self.sample_rate_hz!r}\n")
            fh.write(f"samples_per_symbol = {self.samples_per_symbol}\n")
            fh.write(f"frames = {self.frames}\n")
            fh.write(f"pad_bits = {self.pad_bits}\n")
            fh.write(f"pilot_seed = {self.pilot_seed}\n")

    @classmethod
    def read(cls, path) -> "StreamHeader":
        vals = {}
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, _, val = line.partition("=")
                vals[key.strip()] = val.strip()
        missing = [k for k in HEADER_KEYS if k not in vals]
        if missing:
            raise ValueError(f"header {path} missing keys: {missing}")
        return cls(
            sample_rate_hz=float(vals["sample_rate_hz"]),
            samples_per_symbol=int(vals["samples_per_symbol"]),
            frames=int(vals["frames"]),
            pad_bits=int(vals["pad_bits"]),
            pilot_seed=int(vals["pilot_seed"]),
        )


def write_iq(path, samples) -> None:
    s = np.asarray(samples)
    out = np.empty(2 * s.size, dtype="<f4")
    out[0::2] = s.real
    out[1::2] = s.imag
    out.tofile(path)


def read_iq(path) -> np.ndarray:
    raw = np.fromfile(path, dtype="<f4")
    if raw.size % 2:
        raise ValueError(f"{path}: odd float count, not an I/Q stream")
    return raw[0::2].astype(np.float64) + 1j * raw[1::2].astype(np.float64)

"""Line-oriented `key = value` config files and experiment construction."""

from __future__ import annotations

import math

from .circuit import (CircuitParams, VaractorModel, build_gamma_lut,
                      default_gamma_lut, select_control_voltages,
                      DEFAULT_FREQUENCY, DEFAULT_TARGET_PHASES,
                      DEFAULT_VOLTAGE_GRID)
from .harness import ExperimentConfig
from .surface import ArrayConfig
from .txchain import metasurface_constellation


def parse_config(path) -> dict:
    """Read `key = value` lines; '#' starts a comment; keys lower_snake_case."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            out[key.strip()] = val.strip()
    return out


def _floats(text: str) -> tuple:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _complexes(text: str) -> tuple:
    return tuple(complex(v.strip()) for v in text.split(",") if v.strip())


def circuit_from_dict(d: dict) -> tuple[CircuitParams, VaractorModel]:
    params = CircuitParams(
        r_series=float(d.get("r_series", 12.0)),
        l_top=float(d.get("l_top", 0.5e-9)),
        l_bottom=float(d.get("l_bottom", 5.0e-9)),
        z_air=float(d.get("z_air", CircuitParams().z_air)),
    )
    model = VaractorModel(
        c_zero=float(d.get("c_zero", 1.2e-12)),
        v_junction=float(d.get("v_junction", 2.0)),
        exponent=float(d.get("exponent", 1.0)),
        c_min=float(d.get("c_min", 0.2e-12)),
    )
    return params, model


def experiment_from_dict(d: dict, **overrides) -> ExperimentConfig:
    """Build an ExperimentConfig from parsed config text plus CLI overrides
    (overrides win)."""
    merged = dict(d)
    for key, val in overrides.items():
        if val is not None:
            merged[key] = val

    def get(key, default=None):
        return merged.get(key, default)

    mode = str(get("mode", "conventional"))
    snr = get("snr_list", get("snr", (2.0, 4.0, 6.0, 8.0, 10.0)))
    if isinstance(snr, str):
        snr = _floats(snr)
    snr = tuple(math.inf if s == math.inf else float(s) for s in snr)

    array = ArrayConfig(
        rows=int(get("rows", 8)),
        cols=int(get("cols", 16)),
        mask=get("mask", "full"),
        gamma_static=complex(str(get("gamma_static", "0"))),
    )

    constellation = None
    if mode == "metasurface":
        targets = get("target_phases", DEFAULT_TARGET_PHASES)
        if isinstance(targets, str):
            targets = _floats(targets)
        if any(k in merged for k in
               ("r_series", "l_top", "l_bottom", "z_air", "c_zero",
                "v_junction", "exponent", "c_min", "frequency")):
            params, model = circuit_from_dict(merged)
            lut = build_gamma_lut(model, params,
                                  float(get("frequency", DEFAULT_FREQUENCY)),
                                  DEFAULT_VOLTAGE_GRID)
        else:
            lut = default_gamma_lut()
        volts, _ = select_control_voltages(lut, targets)
        constellation = metasurface_constellation(lut, volts, normalize=False)

    sps = get("sps")
    fir = get("fir_taps", (1.0 + 0.0j,))
    if isinstance(fir, str):
        fir = _complexes(fir)
    return ExperimentConfig(
        mode=mode,
        snr_list=snr,
        frames_per_point=int(get("frames_per_point", get("frames", 100))),
        base_seed=int(get("base_seed", get("seed", 0))),
        sps=None if sps is None else int(sps),
        constellation=constellation,
        array=array,
        cfo_normalized=float(get("cfo_normalized", 0.0)),
        timing_offset=int(get("timing_offset", 0)),
        complex_gain=complex(str(get("complex_gain", "1"))),
        fir_taps=tuple(fir),
        pilot_seed=int(get("pilot_seed", 1)),
        est_taps=None if get("est_taps") is None else int(get("est_taps")),
    )

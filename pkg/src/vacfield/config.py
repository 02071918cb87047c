"""Flat ``key=value`` run configuration with ``#`` comments.

Units live in key names (``lambda_nm``, ``lc_um``, ``bin_s``).  Unknown keys
and malformed values raise :class:`ConfigError` naming the key.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

from .scan_engine import U64_MAX, CountingConfig, ScanConfig, ScanType


class ConfigError(ValueError):
    def __init__(self, key: str | None, message: str):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


REQUIRED = object()


def _finite_float(text: str) -> float:
    x = float(text)
    if not math.isfinite(x):
        raise ValueError("must be finite")
    return x


def _complex(text: str) -> complex:
    z = complex(text.replace(" ", ""))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("must be finite")
    return z


def _int(text: str) -> int:
    return int(text)


def _u64(text: str) -> int:
    n = int(text)
    if not 0 <= n <= U64_MAX:
        raise ValueError("must be an unsigned 64-bit integer")
    return n


def _choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return text
    return parse


def format_value(value: Any) -> str:
    if isinstance(value, complex):
        return repr(value).strip("()")
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class Key:
    parse: Callable[[str], Any]
    default: Any = REQUIRED
    help: str = ""


SCHEMAS: dict[str, dict[str, Key]] = {
    "scan": {
        "type": Key(_choice("signal", "idler", "pump"), help="delayed field"),
        "lambda_nm": Key(_finite_float, help="wavelength of the delayed field"),
        "lc_um": Key(_finite_float, help="coherence length (envelope HWHM)"),
        "delay_start_um": Key(_finite_float),
        "delay_stop_um": Key(_finite_float),
        "points": Key(_int),
        "alpha": Key(_complex, 1 + 0j, "pump amplitude ratio C2/C1"),
        "baseline_hz": Key(_finite_float, 1000.0, "fringe-mean coincidence rate"),
        "bin_s": Key(_finite_float, 1.0),
        "accidentals_hz": Key(_finite_float, 0.0),
        "seed": Key(_u64, 0),
        "counts": Key(_choice("yes", "no"), "yes", "simulate photon counts"),
    },
    "hom": {
        "r": Key(_complex, 0.7071067811865476j),
        "t": Key(_complex, 0.7071067811865476 + 0j),
        "sweep_points": Key(_int, 0, "if > 0, sweep |t|^2 over [0, 1] instead of using r, t"),
        "gain": Key(_complex, 0.1 + 0j),
    },
    "point": {
        "gain": Key(_complex, 0.1 + 0j),
        "alpha": Key(_complex, 1 + 0j),
        "phi1_rad": Key(_finite_float, 0.0),
        "phi2_rad": Key(_finite_float, 0.0),
        "r": Key(_complex, 0.7071067811865476j),
        "t": Key(_complex, 0.7071067811865476 + 0j),
    },
    "verify": {
        "cases": Key(_int, 500, "random cases for the fuzz suites"),
        "seed": Key(_u64, 20240917),
    },
}


def parse_pairs(pairs: dict[str, str], command: str) -> dict[str, Any]:
    schema = SCHEMAS[command]
    out: dict[str, Any] = {}
    for key, text in pairs.items():
        if key not in schema:
            raise ConfigError(key, f"unknown key for '{command}'")
        try:
            out[key] = schema[key].parse(text.strip())
        except ValueError as exc:
            raise ConfigError(key, f"bad value {text!r} ({exc})") from None
    return out


def split_assignment(item: str) -> tuple[str, str]:
    key, sep, value = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(None, f"expected key=value, got {item!r}")
    return key, value.strip()


def read_text(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, value = split_assignment(line)
        if key in pairs:
            raise ConfigError(key, "duplicate key")
        pairs[key] = value
    return pairs


def parse_text(text: str, command: str) -> dict[str, Any]:
    return parse_pairs(read_text(text), command)


def emit(values: dict[str, Any]) -> str:
    return "".join(f"{k}={format_value(v)}\n" for k, v in values.items())


def resolve(values: dict[str, Any], command: str) -> dict[str, Any]:
    """Fill defaults and fail on missing required keys."""
    schema = SCHEMAS[command]
    full = {}
    for key, spec in schema.items():
        if key in values:
            full[key] = values[key]
        elif spec.default is REQUIRED:
            raise ConfigError(key, "missing required key")
        else:
            full[key] = spec.default
    return full


def scan_configs(values: dict[str, Any]) -> tuple[ScanConfig, CountingConfig | None]:
    v = resolve(values, "scan")
    try:
        cfg = ScanConfig(
            scan_type=ScanType(v["type"]),
            wavelength_nm=v["lambda_nm"],
            coherence_length_um=v["lc_um"],
            delay_start_um=v["delay_start_um"],
            delay_stop_um=v["delay_stop_um"],
            points=v["points"],
            alpha=v["alpha"],
            baseline_rate_hz=v["baseline_hz"],
        )
    except ValueError as exc:
        raise ConfigError(_blame(str(exc)), str(exc)) from None
    try:
        cc = CountingConfig(bin_s=v["bin_s"], accidentals_hz=v["accidentals_hz"], seed=v["seed"])
    except ValueError as exc:
        raise ConfigError(_blame(str(exc)), str(exc)) from None
    return cfg, (cc if v["counts"] == "yes" else None)


_FIELD_TO_KEY = {
    "wavelength_nm": "lambda_nm",
    "coherence_length_um": "lc_um",
    "delay_start_um": "delay_start_um",
    "points": "points",
    "baseline_rate_hz": "baseline_hz",
    "bin_s": "bin_s",
    "accidentals_hz": "accidentals_hz",
    "seed": "seed",
}


def _blame(message: str) -> str | None:
    for name, key in _FIELD_TO_KEY.items():
        if message.startswith(name):
            return key
    return None

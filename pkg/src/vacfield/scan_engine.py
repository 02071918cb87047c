"""Delay scans, shot-noise simulation and visibility estimation.

Delays are in micrometres, wavelengths in nanometres, rates in pairs per
second.  The fringe shape comes from the Heisenberg coincidence rate of the
two-crystal interferometer; a Gaussian envelope (half width at half maximum
equal to the coherence length) models the finite coherence of the delayed
field.

Photon counts use numpy's ``Philox`` (Philox4x64-10) bit generator keyed by
``(seed, point_index)``, so each scan point owns an independent, platform
stable substream and the output does not depend on evaluation order.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, replace
from typing import TextIO

import numpy as np

from .correlations import coincidence_rate, visibility_distinguishability
from .spdc_model import BeamSplitter, CrystalParams, PathDelay, two_crystal_detector_fields

LN2 = math.log(2.0)
WINDOW_ENVELOPE = 0.9
U64_MAX = 2**64 - 1

# Internal gain used when building fields; every output is normalised by the
# fringe mean, so its value cancels.
_REFERENCE_GAIN = 0.1


class InsufficientFringes(ValueError):
    pass


class ScanType(enum.Enum):
    SIGNAL = "signal"
    IDLER = "idler"
    PUMP = "pump"


DEFAULT_WAVELENGTH_NM = {ScanType.SIGNAL: 808.0, ScanType.IDLER: 632.0, ScanType.PUMP: 355.0}


@dataclass(frozen=True)
class ScanConfig:
    scan_type: ScanType
    wavelength_nm: float
    coherence_length_um: float
    delay_start_um: float
    delay_stop_um: float
    points: int
    alpha: complex = 1.0
    baseline_rate_hz: float = 1000.0

    def __post_init__(self):
        if not isinstance(self.scan_type, ScanType):
            object.__setattr__(self, "scan_type", ScanType(self.scan_type))
        if not self.wavelength_nm > 0:
            raise ValueError(f"wavelength_nm must be > 0, got {self.wavelength_nm}")
        if not self.coherence_length_um > 0:
            raise ValueError(f"coherence_length_um must be > 0, got {self.coherence_length_um}")
        if not self.delay_start_um < self.delay_stop_um:
            raise ValueError("delay_start_um must be < delay_stop_um")
        if int(self.points) != self.points or self.points < 2:
            raise ValueError(f"points must be an integer >= 2, got {self.points}")
        if not self.baseline_rate_hz >= 0:
            raise ValueError(f"baseline_rate_hz must be >= 0, got {self.baseline_rate_hz}")

    def delays(self) -> np.ndarray:
        return np.linspace(self.delay_start_um, self.delay_stop_um, int(self.points))


@dataclass(frozen=True)
class CountingConfig:
    bin_s: float = 1.0
    accidentals_hz: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.bin_s > 0:
            raise ValueError(f"bin_s must be > 0, got {self.bin_s}")
        if not self.accidentals_hz >= 0:
            raise ValueError(f"accidentals_hz must be >= 0, got {self.accidentals_hz}")
        if not 0 <= self.seed <= U64_MAX:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass(frozen=True, eq=False)
class ScanResult:
    delays: np.ndarray
    ideal_rate: np.ndarray
    counts: np.ndarray | None = None
    fitted_v: float | None = None
    fitted_v_stderr: float | None = None
    config: ScanConfig | None = None

    def __post_init__(self):
        if len(self.delays) != len(self.ideal_rate):
            raise ValueError("delays and ideal_rate differ in length")
        if self.counts is not None and len(self.counts) != len(self.delays):
            raise ValueError("counts and delays differ in length")
        if np.any(self.ideal_rate < 0):
            raise ValueError("ideal_rate must be nonnegative")


def phase_from_delay(delta, wavelength):
    """``2 pi delta / wavelength``; both arguments in the same length unit."""
    if not np.all(np.asarray(wavelength) > 0):
        raise ValueError("wavelength must be > 0")
    return 2 * np.pi * np.asarray(delta, dtype=float) / wavelength


def envelope(delta, coherence_length):
    if not coherence_length > 0:
        raise ValueError("coherence_length must be > 0")
    x = np.asarray(delta, dtype=float) / coherence_length
    return np.exp(-x * x * LN2)


def _fields_at_phase(scan_type: ScanType, alpha: complex, p: float):
    bs = BeamSplitter.balanced()
    g = _REFERENCE_GAIN
    phi1 = phi2 = 0.0
    pump1 = 1.0 + 0j
    if scan_type is ScanType.SIGNAL:
        phi1 = p
    elif scan_type is ScanType.IDLER:
        phi2 = p
    else:
        pump1 = complex(math.cos(p), math.sin(p))
    c1 = CrystalParams(g, pump1, "s1", "i1")
    c2 = CrystalParams(g, alpha, "s2", "i2")
    return two_crystal_detector_fields(c1, c2, bs, bs, PathDelay(phi1), PathDelay(phi2))


def fringe_coefficients(scan_type: ScanType, alpha: complex) -> tuple[float, complex]:
    """Mean ``m`` and complex amplitude ``c`` with ``R(p) = m + Re(c e^{ip})``.

    At lowest order the coincidence rate is a first-harmonic trigonometric
    polynomial in the delay phase ``p``, so three Heisenberg evaluations fix
    it exactly.
    """
    r0, r90, r180 = (coincidence_rate(*_fields_at_phase(scan_type, alpha, p)).value
                     for p in (0.0, math.pi / 2, math.pi))
    mean = 0.5 * (r0 + r180)
    return mean, complex(0.5 * (r0 - r180), mean - r90)


def ideal_scan(cfg: ScanConfig) -> ScanResult:
    delays = cfg.delays()
    p = phase_from_delay(delays * 1e3, cfg.wavelength_nm)
    mean, amp = fringe_coefficients(cfg.scan_type, complex(cfg.alpha))
    if mean <= 0:
        raise ArithmeticError("fringe mean is not positive")
    modulation = np.real(amp * np.exp(1j * p)) / mean
    rate = cfg.baseline_rate_hz * (1 + envelope(delays, cfg.coherence_length_um) * modulation)
    return ScanResult(delays, np.clip(rate, 0.0, None), config=cfg)


def ideal_visibility(cfg: ScanConfig) -> float:
    return visibility_distinguishability(cfg.alpha).visibility


def point_generator(seed: int, index: int) -> np.random.Generator:
    key = np.array([int(seed), int(index)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def simulate_counts(sr: ScanResult, cc: CountingConfig) -> ScanResult:
    lam = cc.bin_s * (np.asarray(sr.ideal_rate, dtype=float) + cc.accidentals_hz)
    counts = np.array([point_generator(cc.seed, k).poisson(x) for k, x in enumerate(lam)],
                      dtype=np.int64)
    return replace(sr, counts=counts)


def _fit_window(delays, wavelength_um, coherence_length, window):
    if window is None and coherence_length is not None:
        half = coherence_length * math.sqrt(math.log(1 / WINDOW_ENVELOPE) / LN2)
        window = (-half, half)
    mask = np.ones(len(delays), bool) if window is None else (
        (delays >= window[0]) & (delays <= window[1]))
    if mask.sum() < 3:
        raise InsufficientFringes("fewer than 3 points inside the fit window")
    span = delays[mask].max() - delays[mask].min()
    if span < 2 * wavelength_um:
        raise InsufficientFringes(
            f"fit window spans {span:.4g} um, less than two periods of {wavelength_um:.4g} um")
    return mask


def estimate_visibility(sr: ScanResult, wavelength_nm: float, *,
                        coherence_length_um: float | None = None,
                        window: tuple[float, float] | None = None,
                        envelope_corrected: bool = True) -> tuple[float, float]:
    """Fit ``A [1 + V env(d) cos(2 pi d / wavelength + psi)]`` to the counts.

    The window defaults to where the envelope stays above 0.9.  With
    ``envelope_corrected`` the known envelope enters the model so ``V`` is
    the zero-delay visibility; otherwise a plain sinusoid is fitted.  Fitting
    is iteratively reweighted least squares with Poisson variances from the
    fitted mean; the standard error follows by the delta method.
    """
    if coherence_length_um is None and sr.config is not None:
        coherence_length_um = sr.config.coherence_length_um
    delays = np.asarray(sr.delays, dtype=float)
    y = np.asarray(sr.counts if sr.counts is not None else sr.ideal_rate, dtype=float)
    mask = _fit_window(delays, wavelength_nm * 1e-3, coherence_length_um, window)
    d, y = delays[mask], y[mask]
    p = phase_from_delay(d * 1e3, wavelength_nm)
    env = (envelope(d, coherence_length_um)
           if envelope_corrected and coherence_length_um is not None else np.ones_like(d))
    X = np.column_stack([np.ones_like(d), env * np.cos(p), env * np.sin(p)])

    var = np.ones_like(y)
    for _ in range(3):
        sw = 1 / np.sqrt(var)
        beta, *_ = np.linalg.lstsq(X * sw[:, None], y * sw, rcond=None)
        var = np.maximum(X @ beta, 1.0)
    cov = np.linalg.pinv((X / var[:, None]).T @ X)

    a, b, c = beta
    if a <= 0:
        raise ArithmeticError("fitted mean count is not positive")
    amp = math.hypot(b, c)
    v = amp / a
    if amp > 0:
        grad = np.array([-v / a, b / (a * amp), c / (a * amp)])
        stderr = math.sqrt(max(grad @ cov @ grad, 0.0))
    else:
        stderr = math.sqrt(max(cov[1, 1] + cov[2, 2], 0.0)) / a
    return float(min(max(v, 0.0), 1.0)), float(stderr)


def with_fit(sr: ScanResult, wavelength_nm: float, **kw) -> ScanResult:
    v, se = estimate_visibility(sr, wavelength_nm, **kw)
    return replace(sr, fitted_v=v, fitted_v_stderr=se)


def dominant_period_nm(delays_um, values) -> tuple[float, float]:
    """Fringe period from the DFT peak and the spatial-frequency bin width (1/nm)."""
    delays_um = np.asarray(delays_um, dtype=float)
    step_nm = (delays_um[1] - delays_um[0]) * 1e3
    y = np.asarray(values, dtype=float)
    spec = np.abs(np.fft.rfft(y - y.mean()))
    freqs = np.fft.rfftfreq(len(y), d=step_nm)
    k = int(np.argmax(spec[1:]) + 1)
    return 1 / freqs[k], freqs[1]


def run_scan(cfg: ScanConfig, cc: CountingConfig | None = None) -> ScanResult:
    """Ideal scan, optional counting noise and visibility fit (if fringes allow)."""
    sr = ideal_scan(cfg)
    if cc is not None:
        sr = simulate_counts(sr, cc)
    try:
        sr = with_fit(sr, cfg.wavelength_nm)
    except InsufficientFringes:
        pass
    return sr


# -- CSV ----------------------------------------------------------------------

CSV_HEADER = "delay_um,ideal_rate_hz,counts"


def write_csv(sr: ScanResult, out: TextIO | str, metadata: dict | None = None) -> None:
    if isinstance(out, str):
        with open(out, "w", newline="") as fh:
            write_csv(sr, fh, metadata)
        return
    for key, value in (metadata or {}).items():
        out.write(f"# {key}={value}\n")
    out.write(CSV_HEADER + "\n")
    counts = sr.counts if sr.counts is not None else [None] * len(sr.delays)
    for d, r, c in zip(sr.delays, sr.ideal_rate, counts):
        out.write(f"{d:.6f},{r:.6f},{'' if c is None else int(c)}\n")


def csv_text(sr: ScanResult, metadata: dict | None = None) -> str:
    buf = io.StringIO()
    write_csv(sr, buf, metadata)
    return buf.getvalue()


def read_csv(src: TextIO | str) -> tuple[dict[str, str], ScanResult]:
    if isinstance(src, str):
        with open(src) as fh:
            return read_csv(fh)
    meta: dict[str, str] = {}
    rows = []
    header_seen = False
    for line in src:
        line = line.rstrip("\n")
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif not header_seen:
            if line != CSV_HEADER:
                raise ValueError(f"unexpected CSV header {line!r}")
            header_seen = True
        elif line:
            rows.append(line.split(","))
    delays = np.array([float(r[0]) for r in rows])
    rate = np.array([float(r[1]) for r in rows])
    counts = None
    if rows and all(r[2] for r in rows):
        counts = np.array([int(r[2]) for r in rows], dtype=np.int64)
    return meta, ScanResult(delays, rate, counts)


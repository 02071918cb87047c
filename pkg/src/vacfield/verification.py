"""Property suites shared by the ``verify`` command and the test suite."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .correlations import (
    amplitude_method_rate,
    coincidence_rate,
    perturbative_state,
    state_coincidence_rate,
    visibility_distinguishability,
)
from .fock_algebra import Kind, LadderOp, OperatorPoly, vacuum_expectation
from .oracle import FockOracle
from .spdc_model import BeamSplitter, CrystalParams, PathDelay, two_crystal_detector_fields


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    worst: float
    tol: float
    cases: int

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.cases} cases, worst deviation {self.worst:.3e} (tol {self.tol:.0e})"


def random_poly(rng: np.random.Generator, n_modes: int = 4, max_len: int = 8,
                max_terms: int = 4) -> OperatorPoly:
    modes = [f"m{k}" for k in range(rng.integers(1, n_modes + 1))]
    terms = []
    for _ in range(rng.integers(1, max_terms + 1)):
        length = int(rng.integers(0, max_len + 1))
        word = tuple(LadderOp(modes[rng.integers(len(modes))], Kind(int(rng.integers(2))))
                     for _ in range(length))
        coeff = complex(rng.normal(), rng.normal())
        degree = (int(rng.integers(2)), int(rng.integers(2)))
        terms.append(((degree, word), coeff))
    return OperatorPoly(terms)


def two_crystal_fields(gain: complex, alpha: complex, phi1: float, phi2: float,
                       bs: BeamSplitter | None = None):
    bs = bs or BeamSplitter.balanced()
    c1 = CrystalParams(gain, 1.0, "s1", "i1")
    c2 = CrystalParams(gain, alpha, "s2", "i2")
    return two_crystal_detector_fields(c1, c2, bs, bs, PathDelay(phi1), PathDelay(phi2))


def oracle_equivalence(cases: int = 500, seed: int = 0, tol: float = 1e-10) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        p = random_poly(rng)
        ref = FockOracle.for_poly(p).expectation(p)
        worst = max(worst, abs(vacuum_expectation(p) - ref))
    return SuiteResult("oracle-equivalence", worst <= tol, worst, tol, cases)


def harmonic_visibility(theta: np.ndarray, rates: np.ndarray) -> float:
    """Visibility of ``m + b cos(theta) + c sin(theta)`` fitted exactly to samples."""
    X = np.column_stack([np.ones_like(theta), np.cos(theta), np.sin(theta)])
    (m, b, c), *_ = np.linalg.lstsq(X, rates, rcond=None)
    # (max - min) / (max + min) of the fitted sinusoid.
    return math.hypot(b, c) / m


def complementarity(cases: int = 1000, seed: int = 1, tol: float = 1e-12,
                    scan_tol: float = 1e-9, scan_points: int = 8) -> SuiteResult:
    rng = np.random.default_rng(seed)
    theta = 2 * np.pi * np.arange(scan_points) / scan_points
    worst_kv = worst_scan = 0.0
    for _ in range(cases):
        alpha = cmath.rect(rng.uniform(0, 3), rng.uniform(-np.pi, np.pi))
        pair = visibility_distinguishability(alpha)
        worst_kv = max(worst_kv, abs(pair.K**2 + pair.V**2 - 1))
        rates = np.array([coincidence_rate(*two_crystal_fields(0.1, alpha, th, 0.0)).value
                          for th in theta])
        worst_scan = max(worst_scan, abs(harmonic_visibility(theta, rates) - pair.V))
    passed = worst_kv <= tol and worst_scan <= scan_tol
    return SuiteResult("complementarity", passed, max(worst_kv, worst_scan), scan_tol, cases)


def method_triangle(n_theta: int = 10, n_alpha: int = 10, tol: float = 1e-10,
                    gain: complex = 0.1) -> SuiteResult:
    bs = BeamSplitter.balanced()
    rows = []
    for theta in np.linspace(0, 2 * np.pi, n_theta, endpoint=False):
        for a in np.linspace(0.1, 1.0, n_alpha):
            heis = coincidence_rate(*two_crystal_fields(gain, a, theta, 0.0)).value
            amp = amplitude_method_rate(1.0, a, theta, 0.0, bs.r, bs.t)
            state = state_coincidence_rate(perturbative_state(1.0, a), bs, bs, theta, 0.0)
            rows.append((heis, amp, state))
    rows = np.array(rows)
    norm = rows / rows[0]
    # Deviations relative to the fringe peak, so exact interference zeros
    # on the grid do not divide by zero.
    peak = np.max(np.abs(norm[:, 0]))
    dev = float(np.max(np.abs(norm[:, 1:] - norm[:, :1])) / peak)
    return SuiteResult("method-triangle", bool(dev <= tol), float(dev), tol, len(rows))


def ordering_equivalence(cases: int = 200, seed: int = 2, tol: float = 1e-12) -> SuiteResult:
    """Both quartic orderings, and the closed form ``|rt|^2 |D1 e^{i phi1} + D2 e^{i phi2}|^2``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        gain = cmath.rect(rng.uniform(0.01, 0.3), rng.uniform(-np.pi, np.pi))
        alpha = cmath.rect(rng.uniform(0, 2), rng.uniform(-np.pi, np.pi))
        phi1, phi2 = rng.uniform(-np.pi, np.pi, 2)
        bs = BeamSplitter.symmetric(rng.uniform(0, 1))
        e_a, e_b = two_crystal_fields(gain, alpha, phi1, phi2, bs)
        ab = coincidence_rate(e_a, e_b).value
        ba = coincidence_rate(e_a, e_b, ordering="BA").value
        closed = amplitude_method_rate(gain, gain * alpha, phi1, phi2, bs.r, bs.t)
        worst = max(worst, abs(ab - ba), abs(ab - closed))
    return SuiteResult("ordering-equivalence", worst <= tol, worst, tol, cases)


def run_all(cases: int = 500, seed: int = 0) -> list[SuiteResult]:
    return [
        oracle_equivalence(cases, seed),
        complementarity(1000, seed + 1),
        method_triangle(),
        ordering_equivalence(max(cases // 2, 10), seed + 2),
    ]

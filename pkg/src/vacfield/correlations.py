"""Coincidence rates, first-order correlations and complementarity.

Three routes to the same coincidence rate are kept deliberately separate:

* Heisenberg: quartic vacuum expectation of detector fields, normal-ordered
  symbolically (:func:`coincidence_rate`).
* Amplitudes: closed-form sum of the two indistinguishable pair paths
  (:func:`amplitude_method_rate`).
* State vector: first-order perturbative state in a truncated Fock basis,
  projected with bare detector operators (:func:`state_coincidence_rate`).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .fock_algebra import OperatorPoly, product_expectation, vacuum_expectation
from .oracle import FockOracle
from .spdc_model import (
    BeamSplitter,
    CrystalParams,
    DetectorField,
    PathDelay,
    field_component_split,
    two_crystal_detector_fields,
)

IMAG_TOL = 1e-12
NEG_TOL = 1e-12
LOWEST_ORDER = 2

TWO_CRYSTAL_MODES = ("s1", "i1", "s2", "i2")


class NonHermitianResidue(ArithmeticError):
    pass


class NotSingleCrystal(ValueError):
    pass


@dataclass(frozen=True)
class RateResult:
    value: float
    order: int | None = LOWEST_ORDER
    imag_residue: float = 0.0

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class ComplementarityPair:
    visibility: float
    distinguishability: float
    alpha: complex

    @property
    def V(self) -> float:
        return self.visibility

    @property
    def K(self) -> float:
        return self.distinguishability


def _as_rate(z: complex, order: int | None) -> RateResult:
    if abs(z.imag) > IMAG_TOL:
        raise NonHermitianResidue(f"rate has imaginary part {z.imag!r}")
    if z.real < -NEG_TOL:
        raise NonHermitianResidue(f"rate is negative: {z.real!r}")
    return RateResult(max(z.real, 0.0), order, z.imag)


def coincidence_rate(e_a: DetectorField, e_b: DetectorField, *, ordering: str = "AB",
                     order: int | None = LOWEST_ORDER) -> RateResult:
    """``<E_A^- E_B^- E_B^+ E_A^+>`` kept at total gain degree ``order``.

    ``ordering="BA"`` evaluates ``<E_B^- E_A^- E_A^+ E_B^+>`` instead; the two
    agree whenever the positive-frequency fields commute.  ``order=None``
    keeps every degree.
    """
    if ordering == "AB":
        right = e_b.expr * e_a.expr
    elif ordering == "BA":
        right = e_a.expr * e_b.expr
    else:
        raise ValueError(f"ordering must be 'AB' or 'BA', got {ordering!r}")
    return _as_rate(product_expectation(right.adjoint(), right, order), order)


def first_order_correlation(e_a: DetectorField, e_b: DetectorField) -> complex:
    """``<E_B^- E_A^+>`` with no degree filtering."""
    return product_expectation(e_b.minus, e_a.expr)


def singles_rate(e: DetectorField, order: int | None = LOWEST_ORDER) -> RateResult:
    return _as_rate(product_expectation(e.minus, e.expr, order), order)


def amplitude_method_rate(c1: complex, c2: complex, phi1: float, phi2: float,
                          r: complex, t: complex) -> float:
    return abs(r * t) ** 2 * abs(c1 * cmath.exp(1j * phi1) + c2 * cmath.exp(1j * phi2)) ** 2


def two_crystal_oracle() -> FockOracle:
    return FockOracle(cutoff=1, modes=TWO_CRYSTAL_MODES)


def perturbative_state(c1: complex, c2: complex, state_scale: complex = 1.0) -> np.ndarray:
    """Unnormalised first-order state over modes ``(s1, i1, s2, i2)``, cutoff 1.

    ``state_scale`` multiplies both pair components; its value never matters
    for rates normalised at a reference point.
    """
    oracle = two_crystal_oracle()
    psi = oracle.vacuum()
    psi[1, 1, 0, 0] = state_scale * c1
    psi[0, 0, 1, 1] = state_scale * c2
    return psi


def transition_amplitude(p: OperatorPoly, psi: np.ndarray, oracle: FockOracle) -> complex:
    """``<vac| p |psi>``."""
    return complex(np.vdot(oracle.vacuum(), oracle.apply(p, psi)))


def bare_detector_fields(bs1: BeamSplitter, bs2: BeamSplitter, phi1: float,
                         phi2: float) -> tuple[DetectorField, DetectorField]:
    """Detector annihilation operators with the pump off (gain zero)."""
    c1 = CrystalParams(0, signal_mode="s1", idler_mode="i1")
    c2 = CrystalParams(0, signal_mode="s2", idler_mode="i2")
    return two_crystal_detector_fields(c1, c2, bs1, bs2, PathDelay(phi1), PathDelay(phi2))


def state_coincidence_rate(psi: np.ndarray, bs1: BeamSplitter, bs2: BeamSplitter,
                           phi1: float, phi2: float) -> float:
    """``|<vac| E_B E_A |psi>|^2`` using pump-off detector operators."""
    e_a, e_b = bare_detector_fields(bs1, bs2, phi1, phi2)
    amp = transition_amplitude(e_b.expr * e_a.expr, psi, two_crystal_oracle())
    return abs(amp) ** 2


HOM_BASIS = ("vacuum", "pair_at_A", "pair_at_B")


def hom_perturbative_state(gain: complex, r: complex, t: complex) -> np.ndarray:
    """Amplitudes on ``HOM_BASIS``: ``(1, D t^2, D r^2)``."""
    return np.array([1.0, gain * t**2, gain * r**2], dtype=complex)


def hom_state_coincidence_rate(psi: np.ndarray) -> float:
    # Both pair components are indistinguishable routes to one A-B coincidence.
    return abs(psi[1] + psi[2]) ** 2


def visibility_distinguishability(alpha: complex) -> ComplementarityPair:
    a2 = abs(alpha) ** 2
    return ComplementarityPair(
        visibility=2 * abs(alpha) / (1 + a2),
        distinguishability=(1 - a2) / (1 + a2),
        alpha=complex(alpha),
    )


def alpha_for_visibility(v: float) -> float:
    """Smallest ``|alpha| <= 1`` with ``2|alpha|/(1+|alpha|^2) = v``."""
    if not 0 <= v <= 1:
        raise ValueError(f"visibility must lie in [0, 1], got {v}")
    if v == 0:
        return 0.0
    return (1 - math.sqrt(1 - v * v)) / v


def vacuum_decomposition_rate(e_a: DetectorField, e_b: DetectorField) -> RateResult:
    """Rate from the generated signal at A against the vacuum idler at B."""
    generated_a, _ = field_component_split(e_a)
    _, vacuum_b = field_component_split(e_b)
    generated_b, _ = field_component_split(e_b)
    pumped = {op.mode for (_, w), _ in generated_a for op in w}
    pumped |= {op.mode for (_, w), _ in generated_b for op in w}
    # Generated parts carry a^dag of the partner mode of each pumped crystal.
    if len(pumped) > 2:
        raise NotSingleCrystal(f"generated fields involve modes {sorted(pumped)}")
    right = vacuum_b * generated_a
    return _as_rate(vacuum_expectation(right.adjoint() * right), LOWEST_ORDER)

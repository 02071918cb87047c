"""Positive-frequency detector fields built from element-level transforms.

A pumped crystal maps its input (vacuum) modes to first order in the gain::

    signal = a_s + D a_i^dag        idler = a_i + D a_s^dag

Beam splitters and path delays then act linearly on these operator
expressions.  Time-phase factors ``exp(-i w t)`` are dropped: they cancel
in every equal-time correlator evaluated downstream.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .fock_algebra import OperatorPoly, annihilate, commutator, create

GENERATED: tuple[int, int] = (1, 0)
VACUUM: tuple[int, int] = (0, 0)


class ModeCollision(ValueError):
    pass


@dataclass(frozen=True)
class CrystalParams:
    """One down-conversion crystal.

    ``gain`` is the coupling per unit pump amplitude; the gain that enters
    the fields is ``gain * pump_amp``, so identical crystals with pump
    amplitudes ``C1, C2`` get effective gains in the ratio ``C1 / C2``.
    """

    gain: complex
    pump_amp: complex = 1.0
    signal_mode: str = "s"
    idler_mode: str = "i"

    def __post_init__(self):
        if self.signal_mode == self.idler_mode:
            raise ModeCollision(f"signal and idler share mode {self.signal_mode!r}")
        if not abs(self.effective_gain) < 1:
            raise ValueError(f"|gain| must be < 1 (perturbative), got {abs(self.effective_gain)}")

    @property
    def effective_gain(self) -> complex:
        return complex(self.gain) * complex(self.pump_amp)

    @property
    def modes(self) -> tuple[str, str]:
        return (self.signal_mode, self.idler_mode)


@dataclass(frozen=True)
class BeamSplitter:
    r: complex
    t: complex
    tol: float = 1e-12

    def __post_init__(self):
        r, t = complex(self.r), complex(self.t)
        norm = abs(r) ** 2 + abs(t) ** 2
        if abs(norm - 1) > self.tol:
            raise ValueError(f"|r|^2 + |t|^2 = {norm!r}, expected 1")
        # Lossless 2x2 [[r, t], [t, r]] also needs Re(r t*) = 0.
        if abs((r * t.conjugate()).real) > self.tol:
            raise ValueError(f"Re(r t*) = {(r * t.conjugate()).real!r}, beam splitter is not lossless")

    @classmethod
    def symmetric(cls, transmittance: float = 0.5) -> "BeamSplitter":
        """Real ``t >= 0`` and ``r = i |r|`` (``r = t e^{i pi/2}`` when balanced)."""
        if not 0 <= transmittance <= 1:
            raise ValueError(f"transmittance must lie in [0, 1], got {transmittance}")
        return cls(r=1j * math.sqrt(1 - transmittance), t=math.sqrt(transmittance))

    @classmethod
    def balanced(cls) -> "BeamSplitter":
        return cls.symmetric(0.5)


@dataclass(frozen=True)
class PathDelay:
    phase: float

    def __post_init__(self):
        if not math.isfinite(self.phase):
            raise ValueError(f"phase must be finite, got {self.phase}")


class Detector(enum.Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class DetectorField:
    expr: OperatorPoly
    detector: Detector

    def __post_init__(self):
        bad = self.expr.degrees() - {GENERATED, VACUUM}
        if bad:
            raise ValueError(f"detector field has gain degrees {sorted(bad)}; only (0,0) and (1,0) allowed")

    @property
    def minus(self) -> OperatorPoly:
        """Negative-frequency part ``E^(-)``."""
        return self.expr.adjoint()


def spdc_output_fields(c: CrystalParams) -> tuple[OperatorPoly, OperatorPoly]:
    d = c.effective_gain
    s, i = c.signal_mode, c.idler_mode
    signal = annihilate(s) + create(i).scale(d, GENERATED)
    idler = annihilate(i) + create(s).scale(d, GENERATED)
    return signal, idler


def apply_beamsplitter(in1: OperatorPoly, in2: OperatorPoly,
                       bs: BeamSplitter) -> tuple[OperatorPoly, OperatorPoly]:
    r, t = complex(bs.r), complex(bs.t)
    return in1 * r + in2 * t, in1 * t + in2 * r


def apply_phase(f: OperatorPoly, d: PathDelay) -> OperatorPoly:
    return f * cmath.exp(1j * d.phase)


def two_crystal_detector_fields(c1: CrystalParams, c2: CrystalParams,
                                bs1: BeamSplitter, bs2: BeamSplitter,
                                phi1: PathDelay, phi2: PathDelay,
                                ) -> tuple[DetectorField, DetectorField]:
    """Fields at A (signals of both crystals) and B (idlers of both crystals).

    The signal of crystal 1 is reflected at ``bs1`` after a delay ``phi1``;
    the idler of crystal 2 is reflected at ``bs2`` after a delay ``phi2``.
    """
    shared = set(c1.modes) & set(c2.modes)
    if shared:
        raise ModeCollision(f"crystals share modes {sorted(shared)}")
    s1, i1 = spdc_output_fields(c1)
    s2, i2 = spdc_output_fields(c2)
    e_a, _ = apply_beamsplitter(apply_phase(s1, phi1), s2, bs1)
    _, e_b = apply_beamsplitter(i1, apply_phase(i2, phi2), bs2)
    return DetectorField(e_a, Detector.A), DetectorField(e_b, Detector.B)


def hom_detector_fields(c: CrystalParams, bs: BeamSplitter) -> tuple[DetectorField, DetectorField]:
    # Signal and idler travel equal distances to the beam splitter.
    s, i = spdc_output_fields(c)
    e_a, e_b = apply_beamsplitter(s, i, bs)
    return DetectorField(e_a, Detector.A), DetectorField(e_b, Detector.B)


def field_component_split(f: DetectorField) -> tuple[OperatorPoly, OperatorPoly]:
    """Split into the down-converted part and the propagated vacuum part."""
    return f.expr.degree_part(GENERATED), f.expr.degree_part(VACUUM)


def field_commutator(e_a: DetectorField, e_b: DetectorField) -> OperatorPoly:
    return commutator(e_a.expr, e_b.expr)


def crystal_modes(n: int) -> tuple[str, str]:
    """Standard (signal, idler) labels for crystal ``n`` of the two-crystal setup."""
    return f"s{n}", f"i{n}"

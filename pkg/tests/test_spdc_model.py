import cmath
import math
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from vacfield.fock_algebra import OperatorPoly, adjoint, annihilate, commutator, create, normal_order, serialize
from vacfield.correlations import coincidence_rate
from vacfield.spdc_model import (
    BeamSplitter,
    CrystalParams,
    Detector,
    DetectorField,
    ModeCollision,
    PathDelay,
    apply_beamsplitter,
    apply_phase,
    field_commutator,
    field_component_split,
    hom_detector_fields,
    spdc_output_fields,
    two_crystal_detector_fields,
)

a = annihilate
ad = create
GOLDEN = Path(__file__).parent / "golden" / "two_crystal_field_A.txt"


def crystals(d1=0.1, d2=0.1):
    return CrystalParams(d1, 1, "s1", "i1"), CrystalParams(d2, 1, "s2", "i2")


transmittances = st.floats(0, 1, allow_nan=False)
phases = st.floats(-10, 10, allow_nan=False)
gains = st.builds(cmath.rect, st.floats(0, 0.5), st.floats(-math.pi, math.pi))


# -- crystals ------------------------------------------------------------------


def test_crystal_output_fields():
    s, i = spdc_output_fields(CrystalParams(0.1, 1, "s1", "i1"))
    assert s == a("s1") + ad("i1").scale(0.1, (1, 0))
    assert i == a("i1") + ad("s1").scale(0.1, (1, 0))


def test_pump_off_gives_bare_vacuum_fields():
    s, i = spdc_output_fields(CrystalParams(0, 1, "s1", "i1"))
    assert s == a("s1") and i == a("i1")


def test_signal_field_adjoint():
    d = 0.1 + 0.05j
    s, _ = spdc_output_fields(CrystalParams(d, 1, "s1", "i1"))
    assert adjoint(s) == ad("s1") + a("i1").scale(d.conjugate(), (0, 1))


def test_pump_amplitude_scales_gain():
    c = CrystalParams(0.1, 0.5j, "s2", "i2")
    assert c.effective_gain == pytest.approx(0.05j)


@pytest.mark.parametrize("kwargs", [
    dict(gain=1.0),
    dict(gain=0.5, pump_amp=3),
    dict(gain=0.1, signal_mode="x", idler_mode="x"),
])
def test_crystal_invariants(kwargs):
    with pytest.raises(ValueError):
        CrystalParams(**kwargs)


# -- beam splitters and phases --------------------------------------------------


def test_symmetric_convention():
    bs = BeamSplitter.balanced()
    assert bs.t == pytest.approx(1 / math.sqrt(2))
    assert bs.r == pytest.approx(bs.t * cmath.exp(1j * math.pi / 2))


@pytest.mark.parametrize("r, t", [(0.7, 0.7), (0.6, 0.8), (1, 1)])
def test_lossy_or_unphysical_splitters_rejected(r, t):
    with pytest.raises(ValueError):
        BeamSplitter(r, t)


def test_pure_reflection():
    out1, out2 = apply_beamsplitter(a("x"), a("y"), BeamSplitter(1, 0))
    assert out1 == a("x") and out2 == a("y")


def test_balanced_splitter_on_two_modes():
    out1, _ = apply_beamsplitter(a("s"), a("i"), BeamSplitter.balanced())
    assert out1.allclose((a("s") * 1j + a("i")) * (1 / math.sqrt(2)), atol=1e-15)


@given(transmittances, st.floats(-math.pi, math.pi))
def test_beamsplitter_preserves_commutators(big_t, phase):
    bs = BeamSplitter.symmetric(big_t)
    # A common phase on both amplitudes keeps the splitter lossless.
    bs = BeamSplitter(bs.r * cmath.exp(1j * phase), bs.t * cmath.exp(1j * phase))
    out1, out2 = apply_beamsplitter(a("x"), a("y"), bs)
    assert commutator(out1, adjoint(out1)).allclose(OperatorPoly.identity(), 1e-12)
    assert commutator(out2, adjoint(out2)).allclose(OperatorPoly.identity(), 1e-12)
    assert commutator(out1, adjoint(out2)).allclose(OperatorPoly.zero(), 1e-12)


def test_phase_delays():
    f = a("s") + ad("i").scale(0.2, (1, 0))
    assert apply_phase(f, PathDelay(0)) == f
    assert apply_phase(f, PathDelay(math.pi)).allclose(-f, 1e-15)
    twice = apply_phase(apply_phase(f, PathDelay(math.pi / 2)), PathDelay(math.pi / 2))
    assert twice.allclose(apply_phase(f, PathDelay(math.pi)), 1e-15)


def test_path_delay_must_be_finite():
    with pytest.raises(ValueError):
        PathDelay(float("inf"))


# -- two-crystal fields ---------------------------------------------------------


def test_two_crystal_fields_term_for_term():
    d = 0.1
    bs = BeamSplitter.balanced()
    r, t = bs.r, bs.t
    phi1, phi2 = 0.7, -0.3
    e_a, e_b = two_crystal_detector_fields(*crystals(d, d), bs, bs, PathDelay(phi1), PathDelay(phi2))
    g = (1, 0)
    want_a = (a("s1") + ad("i1").scale(d, g)) * (r * cmath.exp(1j * phi1)) + (a("s2") + ad("i2").scale(d, g)) * t
    want_b = (a("i1") + ad("s1").scale(d, g)) * t + (a("i2") + ad("s2").scale(d, g)) * (r * cmath.exp(1j * phi2))
    assert e_a.expr.allclose(want_a, 1e-15) and e_b.expr.allclose(want_b, 1e-15)
    assert e_a.detector is Detector.A and e_b.detector is Detector.B


def test_identical_crystals_zero_phase():
    bs = BeamSplitter.balanced()
    e_a, _ = two_crystal_detector_fields(*crystals(), bs, bs, PathDelay(0), PathDelay(0))
    assert len(e_a.expr) == 4
    assert e_a.expr.max_gain_degree() == 1


def test_unpumped_second_crystal_leaves_one_generated_term():
    bs = BeamSplitter.balanced()
    e_a, _ = two_crystal_detector_fields(*crystals(0.1, 0), bs, bs, PathDelay(0), PathDelay(0))
    generated, vacuum = field_component_split(e_a)
    assert len(generated) == 1 and len(vacuum) == 2


def test_mode_collision():
    bs = BeamSplitter.balanced()
    c1 = CrystalParams(0.1, 1, "s1", "i1")
    c2 = CrystalParams(0.1, 1, "s1", "i2")
    with pytest.raises(ModeCollision):
        two_crystal_detector_fields(c1, c2, bs, bs, PathDelay(0), PathDelay(0))


def test_golden_field_a():
    bs = BeamSplitter.balanced()
    e_a, e_b = two_crystal_detector_fields(*crystals(), bs, bs, PathDelay(math.pi / 3), PathDelay(0))
    assert serialize(normal_order(e_a.expr)) == GOLDEN.read_text()
    # Frozen after checking the rate: 2 |D|^2 |rt|^2 (1 + cos(pi/3)).
    assert coincidence_rate(e_a, e_b).value == pytest.approx(0.0075, abs=1e-15)


@given(gains, gains, phases, phases, transmittances)
def test_two_crystal_fields_commute(d1, d2, phi1, phi2, big_t):
    bs = BeamSplitter.symmetric(big_t)
    e_a, e_b = two_crystal_detector_fields(*crystals(d1, d2), bs, bs, PathDelay(phi1), PathDelay(phi2))
    assert field_commutator(e_a, e_b).allclose(OperatorPoly.zero(), 1e-12)
    for f in (e_a, e_b):
        assert f.expr.max_gain_degree() <= 1


def test_pump_off_coincidence_is_zero():
    bs = BeamSplitter.balanced()
    e_a, e_b = two_crystal_detector_fields(*crystals(0, 0), bs, bs, PathDelay(0.3), PathDelay(0))
    assert coincidence_rate(e_a, e_b, order=None).value == 0


# -- HOM fields -----------------------------------------------------------------


def test_hom_fields_match_closed_form():
    d = 0.1
    bs = BeamSplitter.balanced()
    e_a, e_b = hom_detector_fields(CrystalParams(d), bs)
    s = a("s") + ad("i").scale(d, (1, 0))
    i = a("i") + ad("s").scale(d, (1, 0))
    assert e_a.expr.allclose(s * bs.r + i * bs.t, 1e-15)
    assert e_b.expr.allclose(s * bs.t + i * bs.r, 1e-15)
    assert len(e_a.expr) == 4 and len(e_b.expr) == 4


def test_hom_full_transmission_is_idler_channel():
    e_a, _ = hom_detector_fields(CrystalParams(0.1), BeamSplitter(0, 1))
    assert e_a.expr == a("i") + ad("s").scale(0.1, (1, 0))


@given(gains, transmittances)
def test_hom_fields_commute(d, big_t):
    e_a, e_b = hom_detector_fields(CrystalParams(d), BeamSplitter.symmetric(big_t))
    assert field_commutator(e_a, e_b).allclose(OperatorPoly.zero(), 1e-12)


# -- component split -------------------------------------------------------------


def test_split_single_path():
    bs = BeamSplitter.balanced()
    d, phi1 = 0.1, 0.4
    e_a, _ = two_crystal_detector_fields(*crystals(d, 0), bs, bs, PathDelay(phi1), PathDelay(0))
    generated, vacuum = field_component_split(e_a)
    amp = bs.r * cmath.exp(1j * phi1)
    assert generated.allclose(ad("i1").scale(d * amp, (1, 0)), 1e-15)
    assert vacuum.allclose(a("s1") * amp + a("s2") * bs.t, 1e-15)


def test_split_without_gain():
    f = DetectorField(a("s") * 0.5, Detector.A)
    generated, vacuum = field_component_split(f)
    assert generated == OperatorPoly.zero() and vacuum == f.expr


@given(gains, gains, phases, transmittances)
def test_split_recombines(d1, d2, phi, big_t):
    bs = BeamSplitter.symmetric(big_t)
    for f in two_crystal_detector_fields(*crystals(d1, d2), bs, bs, PathDelay(phi), PathDelay(0)):
        generated, vacuum = field_component_split(f)
        assert generated + vacuum == f.expr


def test_detector_field_rejects_higher_degree():
    with pytest.raises(ValueError):
        DetectorField(a("s").scale(0.1, (0, 1)), Detector.A)

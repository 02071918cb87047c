"""Heisenberg-picture vacuum-field calculus for two-crystal SPDC and HOM interference."""

from .correlations import (
    ComplementarityPair,
    RateResult,
    amplitude_method_rate,
    coincidence_rate,
    first_order_correlation,
    hom_perturbative_state,
    perturbative_state,
    vacuum_decomposition_rate,
    visibility_distinguishability,
)
from .fock_algebra import (
    Kind,
    LadderOp,
    OperatorPoly,
    adjoint,
    annihilate,
    create,
    multiply,
    normal_order,
    vacuum_expectation,
)
from .oracle import CutoffTooSmall, FockOracle, oracle_expectation
from .scan_engine import (
    CountingConfig,
    ScanConfig,
    ScanResult,
    ScanType,
    estimate_visibility,
    ideal_scan,
    simulate_counts,
)
from .spdc_model import (
    BeamSplitter,
    CrystalParams,
    DetectorField,
    PathDelay,
    hom_detector_fields,
    two_crystal_detector_fields,
)

__version__ = "0.1.0"

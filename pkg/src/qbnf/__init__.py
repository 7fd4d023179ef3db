"""Quad-band notch filter (QBNF) design and analysis toolkit.

Frequency-domain two-port analysis of a microstrip through line loaded
with an open-ended extended-CRLH stub, plus synthesis of the eight
lumped element values that place transmission notches at four arbitrary
target frequencies.
"""

__version__ = "0.1.0"

from .ecrlh import (
    DispersionPoint,
    ElementSet,
    ResonanceSet,
    UnitCell,
    bloch_gamma,
    bloch_impedance,
    bloch_impedance_approx,
    resonant_frequencies,
    series_impedance,
    shunt_admittance,
    stub_input_impedance,
    unit_cell_abcd,
)
from .errors import (
    ConfigError,
    ConvergenceFailureError,
    DegeneratePlanError,
    InfeasibleTargetsError,
    LossyCellError,
    NonphysicalSolutionError,
    PoleSingularityError,
    QbnfError,
    ShortCircuitError,
    SingularConversionError,
    StopbandPhaseError,
    UnboundedImpedanceError,
)
from .fileio import JobConfig, load_config, read_csv, read_touchstone, write_csv, write_touchstone
from .filters import (
    FilterTopology,
    NotchReport,
    SweepGrid,
    assemble,
    dispersion_sweep,
    locate_notches,
    notch_report,
    phase_shift,
    sparams_at,
    sweep_sparams,
)
from .synthesis import (
    FrequencyPlan,
    SynthesisResult,
    SynthesisSpec,
    ValidationReport,
    branch_reactance_fit,
    branch_susceptance_fit,
    frequency_plan,
    synthesize,
    validate,
)
from .twoport import (
    IDENTITY,
    OPEN,
    SParameterPoint,
    TwoPortMatrix,
    abcd_to_s,
    cascade,
    input_impedance,
    series_element,
    shunt_element,
    tline_section,
)

__all__ = [name for name in dir() if not name.startswith("_")]

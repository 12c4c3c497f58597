"""Stable inversion of discrete-time periodic state-space plants.

The plant is rewritten as its cycled LTI equivalent, inverted with LTI
formulas, and the periodic inverse is read back off the block structure.
The closed-form result is exposed directly by :func:`invert`; the dense
route is kept as :func:`oracle_invert_cycled` for validation.
"""
from .analysis import (
    StabilityReport,
    ZeroCheck,
    check_minimum_phase,
    stability_report,
    verify_zeros_pencil,
)
from .core import InverseSystem, LptvSystem, PhaseSequence, monodromy, transition_product
from .cyclic import (
    CycledSignalFrame,
    CycledSystem,
    ShiftBlockCirculant,
    build_cycled,
    cycle_signal,
    extract_blocks,
    shift_matrix,
    spectral_radius_cycled,
    structured_product,
)
from .errors import *  # noqa: F401,F403
from .inversion import invert, invert_rd0, invert_rdr, oracle_invert_cycled, unified_inverse
from .io import load_example, parse_system, serialize_system
from .markov import (
    MarkovTable,
    RelativeDegreeKind,
    RelativeDegreeResult,
    detect_relative_degree,
    markov_factorization,
    markov_table,
    periodic_markov,
)
from .simulation import SignalSpec, SimulationTrace, reconstruct, simulate_inverse, simulate_plant

__version__ = "0.1.0"

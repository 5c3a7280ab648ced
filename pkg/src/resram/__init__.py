"""resram: series-resonant energy-recycling SRAM bitline modeling.

Library layout mirrors the physics: ``circuit`` holds the lumped loop and
its derived scalars, ``waveforms`` the closed forms, ``transient`` the
switched write-cycle simulator (also the brute-force oracle for the
closed forms), ``array`` the SRAM-organization mapping, ``energy`` the
per-cycle ledger, ``sizing`` the inductor optimizer and design-space
sweep, and ``config``/``cli``/``report``/``plotting`` the tool surface.
"""

__version__ = "0.1.0"

from .circuit import DerivedResonance, RBreakdown, RlcParams, derive_resonance, min_inductance
from .waveforms import (
    SwingReport,
    WaveformVariant,
    cap_voltage,
    inductor_current,
    q_for_swing_fraction,
    swing,
    swing_fraction_for_q,
)
from .transient import (
    BoosterConfig,
    ControlWaveforms,
    PhaseConfig,
    PhaseModel,
    PulseSchedule,
    WaveformTrace,
    build_control,
    find_current_zero,
    integrate_phase,
    simulate_write_cycle,
)
from .array import (
    ArrayGeometry,
    discharge_time_vs_rows,
    effective_params,
    mux_timing_table,
)
from .energy import (
    EnergyReport,
    conventional_energy,
    resonant_energy,
    tuned_cycle_savings,
)
from .sizing import (
    Corner,
    SizingResult,
    SizingSpec,
    SweepResult,
    apply_corner,
    inductance_vs_bits,
    size_inductor,
    sweep_design_space,
)
from .config import RunConfig, parse_config, resolve, serialize_config

__all__ = [name for name in dir() if not name.startswith("_")]

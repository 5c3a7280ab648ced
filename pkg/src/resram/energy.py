"""Per-cycle energy accounting: conventional switching versus recycling.

A conventional full write cycle burns C * v_dd**2 — half per transition.
The recycling cycle instead parks the discharge energy behind the bias
node and pulls it back during recovery, so the rails only pay for what
the series resistance ate.  ``resonant_energy`` builds that ledger from a
simulated trace by trapezoidal integration and refuses to return one
that does not close.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import RlcParams
from .exceptions import LedgerError, ParameterError
from .transient import (
    PHASE_DISCHARGE,
    PHASE_PULLDOWN,
    PHASE_PULLUP,
    PHASE_RECOVERY,
    PhaseConfig,
    WaveformTrace,
)

# Relative ledger-closure tolerance, normalized by the conventional energy.
LEDGER_TOLERANCE = 1.0e-3

# A trace must end this close to the rail to count as one complete cycle.
COMPLETE_CYCLE_TOLERANCE = 0.02


def conventional_energy(c_total: float, v_dd: float) -> float:
    """Supply energy of one conventional full-swing write cycle: C * v_dd**2."""
    if not (math.isfinite(c_total) and c_total > 0.0):
        raise ParameterError(f"c_total must be finite and > 0, got {c_total!r}")
    if not (math.isfinite(v_dd) and v_dd >= 0.0):
        raise ParameterError(f"v_dd must be finite and >= 0, got {v_dd!r}")
    return c_total * v_dd * v_dd


def tuned_cycle_savings(swing_fraction: float) -> float:
    """Closed-form savings of a perfectly tuned cycle at half-rail bias.

    The bias node nets to zero, so the rail only tops off the recovery
    overshoot: it pays C*v_dd**2*(1-k)/2 of the conventional C*v_dd**2,
    i.e. savings = (1 + k)/2 for swing fraction k.  Cross-checked against
    trace integration in the test suite.
    """
    if not (0.0 <= swing_fraction <= 1.0):
        raise ParameterError(f"swing fraction must lie in [0, 1], got {swing_fraction!r}")
    return (1.0 + swing_fraction) / 2.0


@dataclass(frozen=True)
class DissipationBreakdown:
    series_r: float
    pulldown: float
    pullup: float
    clamp: float

    def total(self) -> float:
        return self.series_r + self.pulldown + self.pullup + self.clamp


@dataclass(frozen=True)
class EnergyReport:
    """Supply draw, loss breakdown and savings for one write cycle.

    ``e_from_bias_net`` is signed: negative while the bias node absorbs
    discharge energy, positive while it sources the recovery.  A tuned
    cycle nets it to (almost) zero.  ``q_bias_net`` is the matching net
    charge drawn from the bias node.
    """

    e_from_vdd: float
    e_from_bias_net: float
    e_dissipated: DissipationBreakdown
    e_conventional: float
    savings_fraction: float
    q_bias_net: float
    delta_stored: float
    closure_error: float


def resonant_energy(trace: WaveformTrace, params: RlcParams, phases: PhaseConfig) -> EnergyReport:
    """Integrate the supply and loss ledger of one simulated write cycle.

    Per-source energies are trapezoidal integrals of v_source * i_source
    over the trace; the ledger must close against the dissipation
    breakdown plus the (near-zero) stored-energy change, within
    ``LEDGER_TOLERANCE`` of the conventional reference.
    """
    v = trace.v_c
    i = trace.i_l
    t = trace.t
    v_dd, v_bias = params.v_dd, params.v_bias
    if abs(v[-1] - v_dd) > COMPLETE_CYCLE_TOLERANCE * v_dd:
        raise LedgerError(
            f"trace does not cover a complete cycle: final v_c = {v[-1]:.6g} V, rail = {v_dd:.6g} V"
        )

    r_series = params.r_total + phases.series_switch_on_resistance
    e_series = 0.0
    e_pulldown = 0.0
    e_pullup = 0.0
    e_vdd = 0.0
    e_bias = 0.0
    q_bias = 0.0
    for label, a, b in trace.phase_runs():
        sl = slice(a, b + 1)
        if label in (PHASE_DISCHARGE, PHASE_RECOVERY):
            e_series += np.trapezoid(i[sl] * i[sl] * r_series, t[sl])
            drawn = -i[sl]  # positive i_l pushes charge into the bias node
            e_bias += np.trapezoid(v_bias * drawn, t[sl])
            q_bias += np.trapezoid(drawn, t[sl])
        elif label == PHASE_PULLDOWN:
            e_pulldown += np.trapezoid(v[sl] * v[sl] / phases.pulldown_resistance, t[sl])
        elif label == PHASE_PULLUP:
            i_up = (v_dd - v[sl]) / phases.pullup_resistance
            e_pullup += np.trapezoid(i_up * i_up * phases.pullup_resistance, t[sl])
            e_vdd += np.trapezoid(v_dd * i_up, t[sl])

    breakdown = DissipationBreakdown(
        series_r=float(e_series),
        pulldown=float(e_pulldown),
        pullup=float(e_pullup),
        clamp=trace.clamp_energy,
    )
    delta_stored = 0.5 * params.capacitance * (v[-1] ** 2 - v[0] ** 2) + 0.5 * params.inductance * (
        i[-1] ** 2 - i[0] ** 2
    )
    e_conv = conventional_energy(params.capacitance, v_dd)
    supplied = float(e_vdd + e_bias)
    closure = supplied - (breakdown.total() + delta_stored)
    if abs(closure) > LEDGER_TOLERANCE * e_conv:
        raise LedgerError(
            f"energy ledger does not close: residual {closure:.6g} J against "
            f"conventional {e_conv:.6g} J"
        )
    return EnergyReport(
        e_from_vdd=float(e_vdd),
        e_from_bias_net=float(e_bias),
        e_dissipated=breakdown,
        e_conventional=e_conv,
        savings_fraction=1.0 - supplied / e_conv,
        q_bias_net=float(q_bias),
        delta_stored=float(delta_stored),
        closure_error=float(closure),
    )

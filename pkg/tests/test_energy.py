import numpy as np
import pytest

from resram import (
    PhaseConfig,
    PulseSchedule,
    RlcParams,
    build_control,
    conventional_energy,
    derive_resonance,
    resonant_energy,
    simulate_write_cycle,
    swing,
    tuned_cycle_savings,
)
from resram.exceptions import LedgerError, ParameterError
from resram.transient import ControlWaveforms

REF = RlcParams(r_total=0.5227, inductance=0.621e-9, capacitance=10.10e-12, v_dd=0.9)
RAILS = PhaseConfig(pulldown_resistance=0.52, pullup_resistance=0.52)


def tuned_cycle(params, rails=RAILS):
    d = derive_resonance(params)
    sched = PulseSchedule(clock_period=1e-9, s_rise=0.0, s_fall=0.5e-9,
                          delay_code=0, base_delay=d.t_r_half, delay_step=0.0)
    return simulate_write_cycle(params, rails, build_control(sched))


def test_conventional_energy_values():
    # hand computation: 10.10 pF * (0.9 V)^2 = 8.181 pJ
    assert conventional_energy(10.10e-12, 0.9) == pytest.approx(8.181e-12, rel=1e-12)
    assert conventional_energy(10.10e-12, 0.0) == 0.0
    assert conventional_energy(1e-12, 2.0) == pytest.approx(4.0 * conventional_energy(1e-12, 1.0), rel=1e-12)
    with pytest.raises(ParameterError):
        conventional_energy(-1e-12, 1.0)
    with pytest.raises(ParameterError):
        conventional_energy(1e-12, -1.0)


def test_tuned_reference_cycle_ledger():
    trace = tuned_cycle(REF)
    report = resonant_energy(trace, REF, RAILS)
    assert report.e_conventional == conventional_energy(REF.capacitance, REF.v_dd)
    assert abs(report.closure_error) < 1e-3 * report.e_conventional
    assert abs(report.e_from_bias_net) < 1e-3 * report.e_conventional
    assert abs(report.q_bias_net) < 1e-3 * REF.capacitance * REF.v_dd
    # rails only top off the recovery overshoot
    k = swing(REF).swing_fraction
    assert report.savings_fraction == pytest.approx(tuned_cycle_savings(k), abs=1e-3)
    assert report.e_from_vdd == pytest.approx(
        REF.capacitance * REF.v_dd**2 * (1.0 - k) / 2.0, rel=1e-2
    )
    bd = report.e_dissipated
    assert bd.series_r > 0 and bd.pulldown > 0 and bd.pullup > 0
    assert bd.clamp < 1e-6 * report.e_conventional
    assert abs(report.delta_stored) < 1e-6 * report.e_conventional


def test_lossless_limit_recycles_everything():
    p = RlcParams(r_total=1e-9, inductance=0.621e-9, capacitance=10.10e-12, v_dd=0.9)
    report = resonant_energy(tuned_cycle(p), p, RAILS)
    assert report.savings_fraction > 1.0 - 1e-6


def test_mistuned_cycle_saves_less():
    d = derive_resonance(REF)
    tuned = resonant_energy(tuned_cycle(REF), REF, RAILS)
    sched = PulseSchedule(clock_period=1e-9, s_rise=0.0, s_fall=0.5e-9,
                          delay_code=0, base_delay=d.t_r_half / 2.0, delay_step=0.0)
    mistuned_trace = simulate_write_cycle(REF, RAILS, build_control(sched))
    mistuned = resonant_energy(mistuned_trace, REF, RAILS)
    assert mistuned.e_dissipated.clamp > 0.0
    assert mistuned.savings_fraction < tuned.savings_fraction - 0.01


def test_savings_increase_with_q():
    # R-sweep at fixed L and C is a q_f sweep; recycled fraction must climb
    savings = []
    for r in np.geomspace(2.6, 0.26, 7):
        p = RlcParams(r_total=float(r), inductance=0.621e-9, capacitance=10.10e-12, v_dd=0.9)
        savings.append(resonant_energy(tuned_cycle(p), p, RAILS).savings_fraction)
    assert all(b > a for a, b in zip(savings, savings[1:]))


def test_trace_savings_match_closed_form_across_q():
    for r in (2.6139, 1.0, 0.5227):
        p = RlcParams(r_total=r, inductance=0.621e-9, capacitance=10.10e-12, v_dd=0.9)
        report = resonant_energy(tuned_cycle(p), p, RAILS)
        k = swing(p).swing_fraction
        assert report.savings_fraction == pytest.approx(tuned_cycle_savings(k), abs=2e-3)


def test_incomplete_cycle_rejected():
    d = derive_resonance(REF)
    ctrl = ControlWaveforms(clock_period=1e-9, vsr_windows=((0.0, d.t_r_half),),
                            vdn_windows=(), pullup_windows=())
    trace = simulate_write_cycle(REF, RAILS, ctrl)
    with pytest.raises(LedgerError):
        resonant_energy(trace, REF, RAILS)


def test_tuned_cycle_savings_validation():
    assert tuned_cycle_savings(0.0) == 0.5
    assert tuned_cycle_savings(1.0) == 1.0
    with pytest.raises(ParameterError):
        tuned_cycle_savings(1.5)

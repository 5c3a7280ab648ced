import math
from dataclasses import replace

import numpy as np
import pytest

from resram import (
    ArrayGeometry,
    Corner,
    RlcParams,
    SizingSpec,
    apply_corner,
    derive_resonance,
    inductance_vs_bits,
    min_inductance,
    q_for_swing_fraction,
    size_inductor,
    sweep_design_space,
    swing_fraction_for_q,
)
from resram.exceptions import InfeasibleSizingError, ParameterError
from resram.sizing import DEFAULT_CORNERS


def geometry(**overrides):
    base = dict(
        rows=256,
        columns=256,
        mux_factor=1,
        cap_per_column=39.45e-15,
        cap_per_row_increment=0.10e-15,
        driver_resistance_per_bit=133.8,
        shared_inductance=0.621e-9,
        inductor_parasitic_resistance=0.0,
    )
    base.update(overrides)
    return ArrayGeometry(**base)


def test_swing_bound_inverts_q_definition():
    # minimal L for a 2/3 swing equals (q* R)^2 C with q* from the exact
    # inversion; the search must land within its 0.1% resolution
    geom = geometry()
    spec = SizingSpec(target_swing_fraction=2.0 / 3.0, max_t_r_half=math.inf,
                      f_op_range=(200e6, 1e9), bits_connected=256)
    result = size_inductor(geom, spec)
    r_t = 133.8 / 256
    c = 256 * 39.45e-15
    l_star = (q_for_swing_fraction(2.0 / 3.0) * r_t) ** 2 * c
    assert result.inductance == pytest.approx(l_star, rel=2e-3)
    assert result.inductance >= l_star
    assert result.binding_constraint == "target_swing_fraction"
    assert result.swing_fraction >= 2.0 / 3.0
    assert result.r_total == pytest.approx(r_t, rel=1e-12)
    assert result.capacitance == pytest.approx(c, rel=1e-12)


def test_sizing_soundness_one_percent_down_violates():
    geom = geometry()
    result = size_inductor(geom, SizingSpec())
    d = derive_resonance(
        RlcParams(r_total=result.r_total, inductance=result.inductance,
                  capacitance=result.capacitance, v_dd=0.9)
    )
    assert d.underdamped
    assert swing_fraction_for_q(d.q_f) >= SizingSpec().target_swing_fraction
    assert result.t_r_half <= SizingSpec().max_t_r_half
    assert 2.0 * result.t_r_half <= 1.0 / SizingSpec().f_op_range[1]
    shrunk = derive_resonance(
        RlcParams(r_total=result.r_total, inductance=0.99 * result.inductance,
                  capacitance=result.capacitance, v_dd=0.9)
    )
    assert swing_fraction_for_q(shrunk.q_f) < SizingSpec().target_swing_fraction


def test_coupled_scaling_halves_inductance():
    geom = geometry()
    spec = SizingSpec()
    results = dict(inductance_vs_bits(geom, spec, [128, 256]))
    assert results[128].inductance == pytest.approx(2.0 * results[256].inductance, rel=1e-12)
    assert results[128].swing_fraction == pytest.approx(results[256].swing_fraction, rel=1e-12)


def test_inductance_vs_bits_trend():
    geom = geometry()
    out = inductance_vs_bits(geom, SizingSpec(), [32, 64, 128, 256])
    inductances = [r.inductance for _, r in out]
    swings = [r.swing_fraction for _, r in out]
    halves = [r.t_r_half for _, r in out]
    assert all(b < a for a, b in zip(inductances, inductances[1:]))
    assert max(swings) - min(swings) <= 1e-6
    assert max(halves) - min(halves) <= 1e-6 * max(halves)


def test_infeasible_time_budget_names_constraint():
    geom = geometry()
    with pytest.raises(InfeasibleSizingError) as err:
        size_inductor(geom, SizingSpec(max_t_r_half=1e-15))
    assert err.value.binding_constraint == "max_t_r_half"


def test_infeasible_clock_fit_names_f_op_range():
    geom = geometry()
    with pytest.raises(InfeasibleSizingError) as err:
        size_inductor(geom, SizingSpec(max_t_r_half=math.inf, f_op_range=(1e12, 1e13)))
    assert err.value.binding_constraint == "f_op_range"


def test_low_swing_target_on_falling_branch():
    # For targets under exp(-pi) the swing bound sits below q = 1/sqrt(2),
    # where the half-period still falls with L; the time budget can then
    # become the binding lower bound.
    geom = geometry()
    r_t = 133.8 / 256
    c = 256 * 39.45e-15
    target = 0.02
    l_swing = (q_for_swing_fraction(target) * r_t) ** 2 * c
    t_at_swing = derive_resonance(
        RlcParams(r_total=r_t, inductance=l_swing, capacitance=c, v_dd=1.0)
    ).t_r_half
    l_valley = r_t * r_t * c / 2.0
    t_valley = derive_resonance(
        RlcParams(r_total=r_t, inductance=l_valley, capacitance=c, v_dd=1.0)
    ).t_r_half
    t_cap = 0.5 * (t_at_swing + t_valley)
    spec = SizingSpec(target_swing_fraction=target, max_t_r_half=t_cap,
                      f_op_range=(200e6, 1e9), bits_connected=256)
    result = size_inductor(geom, spec)
    assert result.binding_constraint == "max_t_r_half"
    assert result.t_r_half <= t_cap
    assert result.swing_fraction >= target
    tighter = derive_resonance(
        RlcParams(r_total=r_t, inductance=0.99 * result.inductance, capacitance=c, v_dd=1.0)
    )
    assert tighter.t_r_half > t_cap  # shrinking L violates the budget here


def test_sizing_spec_validation():
    with pytest.raises(ParameterError):
        SizingSpec(target_swing_fraction=1.0)
    with pytest.raises(ParameterError):
        SizingSpec(max_t_r_half=0.0)
    with pytest.raises(ParameterError):
        SizingSpec(f_op_range=(1e9, 2e8))
    with pytest.raises(ParameterError):
        SizingSpec(bits_connected=0)


def test_apply_corner_scales_elements():
    p = RlcParams(r_total=0.5, inductance=0.621e-9, capacitance=10.10e-12, v_dd=0.9)
    ss = apply_corner(p, DEFAULT_CORNERS["SS"])
    assert ss.r_total == pytest.approx(0.5 * 1.25, rel=1e-12)
    assert ss.capacitance == pytest.approx(10.10e-12 * 1.05, rel=1e-12)
    assert derive_resonance(ss).q_f < derive_resonance(p).q_f
    with pytest.raises(ParameterError):
        Corner(r_multiplier=0.0, c_multiplier=1.0)


def test_sweep_single_point_matches_direct():
    geom = geometry()
    result = sweep_design_space(geom, 0.9, inductances=[0.621e-9])
    assert len(result.rows) == 1
    row = result.rows[0]
    direct = derive_resonance(
        RlcParams(r_total=133.8 / 256, inductance=0.621e-9, capacitance=256 * 39.45e-15, v_dd=0.9)
    )
    assert row["q_f"] == pytest.approx(direct.q_f, rel=1e-12)
    assert row["t_r_half"] == pytest.approx(direct.t_r_half, rel=1e-12)
    assert row["underdamped"] is True
    assert "l_min" not in result.columns


def test_sweep_flips_underdamped_exactly_at_boundary():
    geom = geometry()
    r_t = 133.8 / 256
    c = 256 * 39.45e-15
    boundary = min_inductance(r_t, c)
    result = sweep_design_space(geom, 0.9,
                                inductances=[0.999 * boundary, boundary, 1.001 * boundary])
    flags = [row["underdamped"] for row in result.rows]
    assert flags == [False, False, True]
    assert result.rows[0]["swing_fraction"] is None
    assert result.rows[2]["swing_fraction"] is not None


def test_sweep_bits_resizes_each_point():
    geom = geometry()
    result = sweep_design_space(geom, 0.9, bits=[32, 64, 128, 256], sizing_spec=SizingSpec())
    assert result.columns[0] == "bits"
    assert "l_min" in result.columns
    l_min = [row["l_min"] for row in result.rows]
    assert all(b < a for a, b in zip(l_min, l_min[1:]))
    swings = [row["swing_fraction"] for row in result.rows]
    assert max(swings) - min(swings) <= 1e-6


def test_sweep_corner_ordering_and_determinism():
    geom = geometry()
    kwargs = dict(v_dds=[0.9, 1.1], corners=["typ", "FF", "SS"])
    a = sweep_design_space(geom, 0.9, **kwargs)
    b = sweep_design_space(geom, 0.9, **kwargs)
    assert a == b
    assert [row["corner"] for row in a.rows[:3]] == ["typ", "FF", "SS"]
    by_corner = {row["corner"]: row["q_f"] for row in a.rows[:3]}
    assert by_corner["FF"] > by_corner["typ"] > by_corner["SS"]


def test_sweep_records_per_point_failures_in_row():
    geom = geometry(cap_per_row_increment=0.2e-15)
    result = sweep_design_space(geom, 0.9, rows=[1, 256])
    first = result.rows[0]  # extrapolated capacitance goes negative
    assert first["q_f"] is None and first["underdamped"] is None
    second = result.rows[1]
    assert second["underdamped"] is True

"""Switched multi-phase write-cycle simulator.

One write cycle of the recycling bitline walks through five switch
topologies: resonant discharge through the shared inductor, rail
pull-down to ground, a hold at ground, a resonant recovery ring, and a
rail pull-up that completes the transition to v_dd.  The control pulses
come from an internal signal S and its delayed copy SD:

    VSR = S xor SD   -- two pulses per period, one per S edge, each as
                        wide as the SD delay; gates the inductor path
    VDN = S and SD   -- completes the discharge to ground

Integration is fixed-step classical RK4 on the piecewise-affine state
equations, state (v_c, i_l) with positive i_l flowing from the bitline
into the bias node.  Phase boundaries snap to the sample grid; events in
between (current zero crossings) are located by linear interpolation.
When the series switch opens with current still flowing, the residual
inductor energy is dumped into a clamp bucket and logged, so mistuning
costs show up in the ledger instead of silently vanishing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import RlcParams, derive_resonance
from .exceptions import (
    DegenerateScheduleError,
    DivergenceError,
    ParameterError,
    ScheduleError,
    StepSizeError,
)

PHASE_DISCHARGE = "resonant_discharge"
PHASE_PULLDOWN = "rail_pulldown"
PHASE_HOLD = "hold"
PHASE_RECOVERY = "resonant_recovery"
PHASE_PULLUP = "rail_pullup"

RESONANT_PHASES = (PHASE_DISCHARGE, PHASE_RECOVERY)

Window = tuple[float, float]


@dataclass(frozen=True)
class PulseSchedule:
    """Timing of the internal S signal and the 4-bit delay register.

    The SD delay is ``base_delay + delay_code * delay_step``.  Pulses must
    fit inside one clock period, and the delay may not exceed the S pulse
    width (otherwise the two VSR pulses would no longer equal the delay).
    """

    clock_period: float
    s_rise: float
    s_fall: float
    delay_code: int = 0
    base_delay: float = 0.0
    delay_step: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.clock_period) and self.clock_period > 0.0):
            raise ScheduleError(f"clock_period must be > 0, got {self.clock_period!r}")
        if not (0.0 <= self.s_rise < self.s_fall < self.clock_period):
            raise ScheduleError(
                f"need 0 <= s_rise < s_fall < clock_period, got "
                f"({self.s_rise!r}, {self.s_fall!r}, {self.clock_period!r})"
            )
        if not isinstance(self.delay_code, int) or not (0 <= self.delay_code <= 15):
            raise ScheduleError(f"delay_code must be an integer in 0..15, got {self.delay_code!r}")
        if self.base_delay < 0.0 or self.delay_step < 0.0:
            raise ScheduleError("base_delay and delay_step must be >= 0")
        delay = self.sd_delay
        if self.s_fall + delay > self.clock_period:
            raise ScheduleError(
                f"pulses do not fit in the period: s_fall + delay = {self.s_fall + delay!r} "
                f"> clock_period = {self.clock_period!r}"
            )
        if delay > self.s_fall - self.s_rise:
            raise ScheduleError(
                f"SD delay {delay!r} exceeds the S pulse width {self.s_fall - self.s_rise!r}"
            )

    @property
    def sd_delay(self) -> float:
        return self.base_delay + self.delay_code * self.delay_step


@dataclass(frozen=True)
class ControlWaveforms:
    """High intervals of the derived control signals within one period."""

    clock_period: float
    vsr_windows: tuple[Window, ...]
    vdn_windows: tuple[Window, ...]
    pullup_windows: tuple[Window, ...]

    def __post_init__(self):
        for name in ("vsr_windows", "vdn_windows", "pullup_windows"):
            windows = getattr(self, name)
            object.__setattr__(self, name, tuple((float(a), float(b)) for a, b in windows))
            previous_end = -math.inf
            for a, b in getattr(self, name):
                if not (0.0 <= a < b <= self.clock_period):
                    raise ScheduleError(f"{name} entry ({a!r}, {b!r}) outside [0, period]")
                if a < previous_end:
                    raise ScheduleError(f"{name} must be sorted and disjoint")
                previous_end = b


@dataclass(frozen=True)
class BoosterConfig:
    """Second, independent tank that bumps the write-driver gate voltage."""

    inductance: float
    gate_capacitance: float
    series_resistance: float

    def __post_init__(self):
        for name in ("inductance", "gate_capacitance", "series_resistance"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ParameterError(f"booster {name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class PhaseConfig:
    """Per-phase switch path properties.

    ``series_switch_on_resistance`` is added to the circuit's r_total while
    the inductor path conducts; leave it at 0 when the transmission-gate
    resistance is already counted inside r_total (the usual convention for
    the series-path breakdown).
    """

    pulldown_resistance: float
    pullup_resistance: float
    series_switch_on_resistance: float = 0.0
    booster: BoosterConfig | None = None

    def __post_init__(self):
        for name in ("pulldown_resistance", "pullup_resistance"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ParameterError(f"{name} must be finite and > 0, got {value!r}")
        if not (
            math.isfinite(self.series_switch_on_resistance)
            and self.series_switch_on_resistance >= 0.0
        ):
            raise ParameterError("series_switch_on_resistance must be finite and >= 0")


@dataclass(frozen=True)
class Event:
    time: float
    kind: str  # "phase", "clamp" or "i_l_zero"
    label: str = ""
    value: float = 0.0


@dataclass(frozen=True)
class BoosterTrace:
    v_gate: np.ndarray
    peak_voltage: float
    energy_dissipated: float
    t_half: float | None


@dataclass
class WaveformTrace:
    """Uniformly sampled (t, v_c, i_l) records plus per-interval phase tags.

    ``phase[k]`` labels the interval [t[k], t[k+1]); the final sample keeps
    the label of the last interval.  ``clamp_energy`` totals the inductor
    energy dumped whenever the series switch opened on nonzero current.
    """

    t: np.ndarray
    v_c: np.ndarray
    i_l: np.ndarray
    phase: np.ndarray
    events: list[Event] = field(default_factory=list)
    clamp_energy: float = 0.0
    dt: float = 0.0
    clock_period: float = 0.0
    booster: BoosterTrace | None = None

    def phase_runs(self):
        """Yield (label, first_index, last_index) for contiguous phase runs."""
        labels = self.phase
        start = 0
        for k in range(1, len(labels)):
            if labels[k] != labels[start]:
                yield str(labels[start]), start, k
                start = k
        yield str(labels[start]), start, len(labels) - 1


def build_control(schedule: PulseSchedule, *, strict: bool = False) -> ControlWaveforms:
    """Derive VSR/VDN windows from S and its delayed copy SD.

    With delay d and S high on [s_rise, s_fall): VSR is high on
    [s_rise, s_rise+d) and [s_fall, s_fall+d), VDN on [s_rise+d, s_fall).
    The rail pull-up window opens when the recovery VSR pulse ends and
    runs to the end of the period (schedule convention, not physics).
    """
    d = schedule.sd_delay
    if d == 0.0:
        if strict:
            raise DegenerateScheduleError(
                "SD delay is zero: VSR = S xor SD vanishes and no resonant transfer happens"
            )
        return ControlWaveforms(
            clock_period=schedule.clock_period,
            vsr_windows=(),
            vdn_windows=((schedule.s_rise, schedule.s_fall),),
            pullup_windows=((schedule.s_fall, schedule.clock_period),),
        )
    vsr = ((schedule.s_rise, schedule.s_rise + d), (schedule.s_fall, schedule.s_fall + d))
    vdn_start, vdn_end = schedule.s_rise + d, schedule.s_fall
    vdn = ((vdn_start, vdn_end),) if vdn_start < vdn_end else ()
    pull_start = schedule.s_fall + d
    pullup = ((pull_start, schedule.clock_period),) if pull_start < schedule.clock_period else ()
    return ControlWaveforms(
        clock_period=schedule.clock_period,
        vsr_windows=vsr,
        vdn_windows=vdn,
        pullup_windows=pullup,
    )


@dataclass(frozen=True)
class PhaseModel:
    """Affine dynamics d/dt (v_c, i_l) = a @ (v_c, i_l) + b of one topology."""

    a: tuple[tuple[float, float], tuple[float, float]]
    b: tuple[float, float]

    @classmethod
    def resonant(cls, params: RlcParams, extra_series_r: float = 0.0) -> "PhaseModel":
        r = params.r_total + extra_series_r
        l, c = params.inductance, params.capacitance
        return cls(
            a=((0.0, -1.0 / c), (1.0 / l, -r / l)),
            b=(0.0, -params.v_bias / l),
        )

    @classmethod
    def rail(cls, resistance: float, capacitance: float, target_voltage: float) -> "PhaseModel":
        rc = resistance * capacitance
        return cls(a=((-1.0 / rc, 0.0), (0.0, 0.0)), b=(target_voltage / rc, 0.0))

    @classmethod
    def hold(cls) -> "PhaseModel":
        return cls(a=((0.0, 0.0), (0.0, 0.0)), b=(0.0, 0.0))


def _rk4_propagator(model: PhaseModel, h: float):
    """Classical RK4 one-step map for an affine system: x1 = phi @ x0 + psi.

    For x' = a x + b the four-stage update collapses exactly to
    phi = I + h a + (h a)^2/2 + (h a)^3/6 + (h a)^4/24 and
    psi = h (I + h a/2 + (h a)^2/6 + (h a)^3/24) b.
    """
    a = np.asarray(model.a, dtype=float)
    b = np.asarray(model.b, dtype=float)
    ha = h * a
    ha2 = ha @ ha
    ha3 = ha2 @ ha
    ha4 = ha3 @ ha
    eye = np.eye(2)
    phi = eye + ha + ha2 / 2.0 + ha3 / 6.0 + ha4 / 24.0
    psi = h * ((eye + ha / 2.0 + ha2 / 6.0 + ha3 / 24.0) @ b)
    return phi, psi


def integrate_phase(state, model: PhaseModel, duration: float, dt: float):
    """Fixed-step RK4 trajectory of one topology from ``state``.

    Returns (times, states) with ``states[k] == (v_c, i_l)`` at
    ``times[k]``; the step is ``duration / round(duration / dt)`` so the
    trajectory lands exactly on ``duration``.  A zero duration returns the
    initial state unchanged.
    """
    if duration < 0.0 or not math.isfinite(duration):
        raise ParameterError(f"duration must be finite and >= 0, got {duration!r}")
    if dt <= 0.0 or not math.isfinite(dt):
        raise ParameterError(f"dt must be finite and > 0, got {dt!r}")
    v0, i0 = float(state[0]), float(state[1])
    if duration == 0.0:
        return np.zeros(1), np.array([[v0, i0]])
    n = max(1, round(duration / dt))
    h = duration / n
    phi, psi = _rk4_propagator(model, h)
    out = np.empty((n + 1, 2))
    out[0] = (v0, i0)
    (p00, p01), (p10, p11) = phi.tolist()
    q0, q1 = psi.tolist()
    v, i = v0, i0
    for k in range(1, n + 1):
        v, i = p00 * v + p01 * i + q0, p10 * v + p11 * i + q1
        out[k, 0] = v
        out[k, 1] = i
    if not np.isfinite(out[-1]).all():
        raise DivergenceError("integration produced a non-finite state")
    return np.arange(n + 1) * h, out


def _snap_windows(windows, h: float, n: int):
    snapped = []
    for a, b in windows:
        ia, ib = round(a / h), round(b / h)
        ia, ib = max(0, min(n, ia)), max(0, min(n, ib))
        if ib > ia:
            snapped.append((ia, ib))
    return snapped


def default_dt(params: RlcParams) -> float:
    """Default integration step: 1e-4 of the natural oscillation period."""
    derived = derive_resonance(params)
    if derived.underdamped:
        return derived.t_r / 1.0e4
    return 2.0 * params.inductance / params.r_total / 1.0e4


def simulate_write_cycle(
    params: RlcParams,
    phases: PhaseConfig,
    control: ControlWaveforms,
    dt: float | None = None,
) -> WaveformTrace:
    """Simulate one full write cycle from v_c = v_dd, i_l = 0.

    The first VSR window is the resonant discharge, any later VSR window a
    resonant recovery; VDN windows pull the bitline to ground and pull-up
    windows complete it to v_dd.  Gaps are holds.  Windows snap to the
    sample grid and must not overlap after snapping.
    """
    derived = derive_resonance(params)
    if derived.underdamped:
        tau = derived.t_r
    else:
        tau = 2.0 * params.inductance / params.r_total
    if dt is None:
        dt = tau / 1.0e4
    if not (0.0 < dt <= tau / 1.0e3):
        raise StepSizeError(
            f"dt = {dt!r} too coarse for oscillation period {tau!r} (need dt <= period/1000)"
        )
    period = control.clock_period
    n = round(period / dt)
    if n < 10:
        raise StepSizeError("clock period spans fewer than 10 samples")
    h = period / n

    labels = np.full(n, PHASE_HOLD, dtype=object)

    def assign(windows, make_label):
        for w_index, (ia, ib) in enumerate(_snap_windows(windows, h, n)):
            label = make_label(w_index)
            taken = labels[ia:ib] != PHASE_HOLD
            if taken.any():
                raise ScheduleError(
                    f"control windows overlap around t = {(ia + int(np.argmax(taken))) * h!r} s"
                )
            labels[ia:ib] = label

    assign(control.vsr_windows, lambda k: PHASE_DISCHARGE if k == 0 else PHASE_RECOVERY)
    assign(control.vdn_windows, lambda k: PHASE_PULLDOWN)
    assign(control.pullup_windows, lambda k: PHASE_PULLUP)

    t = np.arange(n + 1) * h
    v = np.empty(n + 1)
    i = np.empty(n + 1)
    sample_phase = np.empty(n + 1, dtype=object)
    sample_phase[:n] = labels
    sample_phase[n] = labels[-1]

    models = {
        PHASE_DISCHARGE: PhaseModel.resonant(params, phases.series_switch_on_resistance),
        PHASE_RECOVERY: PhaseModel.resonant(params, phases.series_switch_on_resistance),
        PHASE_PULLDOWN: PhaseModel.rail(phases.pulldown_resistance, params.capacitance, 0.0),
        PHASE_PULLUP: PhaseModel.rail(phases.pullup_resistance, params.capacitance, params.v_dd),
        PHASE_HOLD: PhaseModel.hold(),
    }

    events: list[Event] = []
    clamp_total = 0.0
    v[0], i[0] = params.v_dd, 0.0
    state_v, state_i = params.v_dd, 0.0
    for label, a_idx, b_idx in _runs(labels):
        events.append(Event(time=a_idx * h, kind="phase", label=label))
        phi, psi = _rk4_propagator(models[label], h)
        (p00, p01), (p10, p11) = phi.tolist()
        q0, q1 = psi.tolist()
        for k in range(a_idx, b_idx):
            state_v, state_i = (
                p00 * state_v + p01 * state_i + q0,
                p10 * state_v + p11 * state_i + q1,
            )
            v[k + 1] = state_v
            i[k + 1] = state_i
        if label in RESONANT_PHASES and state_i != 0.0:
            # Trace keeps the pre-opening current; the clamp acts on the state.
            energy = 0.5 * params.inductance * state_i * state_i
            clamp_total += energy
            events.append(Event(time=b_idx * h, kind="clamp", label=label, value=energy))
            state_i = 0.0
    if not (np.isfinite(v).all() and np.isfinite(i).all()):
        raise DivergenceError("simulation produced a non-finite state")

    trace = WaveformTrace(
        t=t,
        v_c=v,
        i_l=i,
        phase=sample_phase,
        events=events,
        clamp_energy=clamp_total,
        dt=h,
        clock_period=period,
    )
    for crossing, _window_start in _current_zero_crossings(trace):
        events.append(Event(time=crossing, kind="i_l_zero"))
    events.sort(key=lambda e: (e.time, e.kind))
    if phases.booster is not None:
        trace.booster = _simulate_booster(params, phases.booster, labels, h, n)
    return trace


def _runs(labels):
    start = 0
    for k in range(1, len(labels)):
        if labels[k] != labels[start]:
            yield str(labels[start]), start, k
            start = k
    yield str(labels[start]), start, len(labels)


def _current_zero_crossings(trace: WaveformTrace):
    """(crossing time, window start) pairs inside resonant windows, in order.

    A crossing is a strict sign change between consecutive samples (located
    by linear interpolation) or an exact zero following a nonzero sample;
    the zero initial condition at a window start is not a crossing.
    """
    crossings = []
    i = trace.i_l
    t = trace.t
    for label, a_idx, b_idx in trace.phase_runs():
        if label not in RESONANT_PHASES:
            continue
        for k in range(a_idx, b_idx):
            if i[k] == 0.0:
                continue
            if i[k] * i[k + 1] < 0.0:
                crossings.append((t[k] + (t[k + 1] - t[k]) * i[k] / (i[k] - i[k + 1]), t[a_idx]))
            elif i[k + 1] == 0.0:
                crossings.append((t[k + 1], t[a_idx]))
    return crossings


def find_current_zero(trace: WaveformTrace) -> float | None:
    """Elapsed time from window start to the first i_l zero crossing.

    This is the natural series-switch opening instant, i.e. the width the
    VSR pulse should be tuned to.  Returns ``None`` when no resonant window
    contains a crossing (mistuned-short or overdamped trace).
    """
    crossings = _current_zero_crossings(trace)
    if not crossings:
        return None
    crossing, window_start = crossings[0]
    return crossing - window_start


def _simulate_booster(params: RlcParams, booster: BoosterConfig, labels, h: float, n: int):
    """One-way booster tank: rings the lumped gate capacitance during each
    VSR window from a discharged start, reporting the bump it produces.

    The booster does not feed back into the main tank; its losses are
    reported separately and stay outside the write-cycle energy ledger.
    """
    tank = RlcParams(
        r_total=booster.series_resistance,
        inductance=booster.inductance,
        capacitance=booster.gate_capacitance,
        v_dd=params.v_dd,
        v_bias=params.v_dd,
    )
    model = PhaseModel.resonant(tank)
    phi, psi = _rk4_propagator(model, h)
    (p00, p01), (p10, p11) = phi.tolist()
    q0, q1 = psi.tolist()
    v_gate = np.zeros(n + 1)
    dissipated = 0.0
    gv = gi = 0.0
    active = False
    for k in range(n):
        in_window = labels[k] in RESONANT_PHASES
        if in_window and not active:
            gv, gi = 0.0, 0.0  # gate node starts discharged at each pulse
            active = True
        elif not in_window and active:
            dissipated += 0.5 * booster.inductance * gi * gi
            gv, gi = 0.0, 0.0
            active = False
        if active:
            new_gv = p00 * gv + p01 * gi + q0
            new_gi = p10 * gv + p11 * gi + q1
            dissipated += (
                0.5 * (gi * gi + new_gi * new_gi) * booster.series_resistance * h
            )
            gv, gi = new_gv, new_gi
            v_gate[k + 1] = gv
    if active and gi != 0.0:
        dissipated += 0.5 * booster.inductance * gi * gi
    derived = derive_resonance(tank)
    return BoosterTrace(
        v_gate=v_gate,
        peak_voltage=float(v_gate.max()),
        energy_dissipated=dissipated,
        t_half=derived.t_r_half,
    )

"""Inductor sizing against swing and discharge-time constraints, plus the
design-space sweep that drives the trend studies.

The swing target puts a lower bound on the inductance (bigger L raises
q_f and the recycled fraction), while the discharge-time budget and the
fastest clock period cap it from above.  The optimizer brackets the
feasible boundary geometrically and bisects it to 0.1% resolution, then
names the constraint that binds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

from .array import ArrayGeometry
from .circuit import RBreakdown, RlcParams, derive_resonance, min_inductance
from .exceptions import InfeasibleSizingError, ParameterError, ResramError
from .waveforms import swing_fraction_for_q

from .energy import tuned_cycle_savings

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class SizingSpec:
    """Targets for the inductor search.

    ``max_t_r_half`` may be ``inf`` to drop the discharge-time budget; the
    fastest operating frequency still requires both resonant pulses to fit
    in one clock period (2 * t_r_half <= 1 / f_max).
    """

    target_swing_fraction: float = 2.0 / 3.0
    max_t_r_half: float = 100e-12
    f_op_range: tuple[float, float] = (200e6, 1e9)
    bits_connected: int = 256

    def __post_init__(self):
        if not (0.0 < self.target_swing_fraction < 1.0):
            raise ParameterError(
                f"target_swing_fraction must lie in (0, 1), got {self.target_swing_fraction!r}"
            )
        if math.isnan(self.max_t_r_half) or self.max_t_r_half <= 0.0:
            raise ParameterError(f"max_t_r_half must be > 0, got {self.max_t_r_half!r}")
        f_lo, f_hi = self.f_op_range
        if not (math.isfinite(f_lo) and math.isfinite(f_hi) and 0.0 < f_lo < f_hi):
            raise ParameterError(f"f_op_range must be ordered and positive, got {self.f_op_range!r}")
        if not isinstance(self.bits_connected, int) or self.bits_connected < 1:
            raise ParameterError(f"bits_connected must be an integer >= 1, got {self.bits_connected!r}")


@dataclass(frozen=True)
class SizingResult:
    inductance: float
    t_r_half: float
    swing_fraction: float
    q_f: float
    binding_constraint: str
    r_total: float
    capacitance: float


def _metrics(l: float, r_t: float, c: float):
    derived = derive_resonance(RlcParams(r_total=r_t, inductance=l, capacitance=c, v_dd=1.0))
    if not derived.underdamped:
        return None
    return derived.q_f, swing_fraction_for_q(derived.q_f), derived.t_r_half


def size_inductor(geometry: ArrayGeometry, spec: SizingSpec) -> SizingResult:
    """Smallest inductance meeting the swing target and timing caps.

    The connected bits fix r_total = driver/bits + parasitic and
    c = bits * cap_per_column.  Swing grows monotonically with L, so the
    swing boundary is bracketed by doubling and bisected to 0.1%;
    the timing caps are then checked (and, for very small swing targets,
    may themselves set the lower boundary on the falling branch of the
    half-period curve).
    """
    n = spec.bits_connected
    r_t = geometry.driver_resistance_per_bit / n + geometry.inductor_parasitic_resistance
    c = n * geometry.cap_per_column
    t_cap = min(spec.max_t_r_half, 0.5 / spec.f_op_range[1])
    time_name = "max_t_r_half" if spec.max_t_r_half <= 0.5 / spec.f_op_range[1] else "f_op_range"

    def swing_at(l: float) -> float:
        m = _metrics(l, r_t, c)
        return m[1] if m else 0.0

    def t_half_at(l: float) -> float:
        m = _metrics(l, r_t, c)
        return m[2] if m else math.inf

    l_floor = min_inductance(r_t, c)
    lo = l_floor * (1.0 + 1e-9)
    hi = lo
    for _ in range(300):
        if swing_at(hi) >= spec.target_swing_fraction:
            break
        hi *= 2.0
    else:  # pragma: no cover - target < 1 is always reachable
        raise InfeasibleSizingError(
            "swing target unreachable", binding_constraint="target_swing_fraction"
        )
    while hi - lo > 1e-3 * hi:
        mid = (lo + hi) / 2.0
        if swing_at(mid) >= spec.target_swing_fraction:
            hi = mid
        else:
            lo = mid
    l_swing = hi

    if t_half_at(l_swing) <= t_cap:
        chosen, binding = l_swing, "target_swing_fraction"
    else:
        q_here = math.sqrt(l_swing / c) / r_t
        l_t_min = r_t * r_t * c / 2.0  # q_f = 1/sqrt(2), bottom of the half-period curve
        if q_here >= _INV_SQRT2 or t_half_at(l_t_min) > t_cap:
            raise InfeasibleSizingError(
                f"no inductance meets t_r_half <= {t_cap:.6g} s once the swing "
                f"target {spec.target_swing_fraction:.6g} is satisfied",
                binding_constraint=time_name,
            )
        lo_t, hi_t = l_swing, l_t_min  # half-period falls with L on this branch
        while hi_t - lo_t > 1e-3 * hi_t:
            mid = (lo_t + hi_t) / 2.0
            if t_half_at(mid) <= t_cap:
                hi_t = mid
            else:
                lo_t = mid
        chosen, binding = hi_t, time_name

    q_f, swing, t_half = _metrics(chosen, r_t, c)
    return SizingResult(
        inductance=chosen,
        t_r_half=t_half,
        swing_fraction=swing,
        q_f=q_f,
        binding_constraint=binding,
        r_total=r_t,
        capacitance=c,
    )


def inductance_vs_bits(geometry: ArrayGeometry, spec: SizingSpec, bits_list) -> list[tuple[int, SizingResult]]:
    """Minimal inductance trend under coupled scaling: every added bit
    contributes its column capacitance and another parallel driver."""
    out = []
    for bits in bits_list:
        out.append((bits, size_inductor(geometry, replace(spec, bits_connected=bits))))
    return out


@dataclass(frozen=True)
class Corner:
    """Process/voltage/temperature corner as plain R and C multipliers."""

    r_multiplier: float
    c_multiplier: float

    def __post_init__(self):
        for name in ("r_multiplier", "c_multiplier"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ParameterError(f"{name} must be finite and > 0, got {value!r}")


# Documented assumptions, not extracted corner data.
DEFAULT_CORNERS = {
    "typ": Corner(1.0, 1.0),
    "FF": Corner(0.85, 0.95),
    "SS": Corner(1.25, 1.05),
}


def apply_corner(params: RlcParams, corner: Corner) -> RlcParams:
    breakdown = params.r_breakdown
    if breakdown is not None:
        breakdown = RBreakdown(
            r_mos=breakdown.r_mos * corner.r_multiplier,
            r_wire=breakdown.r_wire * corner.r_multiplier,
            r_inductor=breakdown.r_inductor * corner.r_multiplier,
        )
    return replace(
        params,
        r_total=params.r_total * corner.r_multiplier,
        capacitance=params.capacitance * corner.c_multiplier,
        r_breakdown=breakdown,
    )


METRIC_COLUMNS = ("f_r", "t_r_half", "swing_fraction", "q_f", "savings_fraction", "underdamped")

AXIS_ORDER = ("bits", "rows", "inductance", "v_dd", "corner")


@dataclass(frozen=True)
class SweepResult:
    columns: tuple[str, ...]
    rows: tuple[dict, ...]


def sweep_design_space(
    geometry: ArrayGeometry,
    v_dd: float,
    *,
    bits=None,
    rows=None,
    inductances=None,
    v_dds=None,
    corners=None,
    corner_set=None,
    sizing_spec: SizingSpec | None = None,
) -> SweepResult:
    """Cartesian sweep over array size, inductance, supply and corners.

    One output row per combination, in deterministic product order over
    the fixed axis order (bits, rows, inductance, v_dd, corner).  When
    bits are swept without an explicit inductance axis, each point is
    re-sized (``l_min`` column); per-point failures leave the metric
    cells empty instead of aborting the sweep.
    """
    corner_set = dict(DEFAULT_CORNERS) if corner_set is None else corner_set
    axes: list[tuple[str, list]] = []
    provided = {
        "bits": bits,
        "rows": rows,
        "inductance": inductances,
        "v_dd": v_dds,
        "corner": corners,
    }
    for name in AXIS_ORDER:
        values = provided[name]
        if values is not None:
            values = list(values)
            if not values:
                raise ParameterError(f"sweep axis {name!r} has no values")
            axes.append((name, values))
    if not axes:
        axes.append(("v_dd", [v_dd]))
    sized = provided["bits"] is not None and provided["inductance"] is None
    if sized and sizing_spec is None:
        sizing_spec = SizingSpec()

    columns = [name for name, _ in axes]
    if sized:
        columns.append("l_min")
    columns.extend(METRIC_COLUMNS)

    out_rows = []
    for combo in itertools.product(*(values for _, values in axes)):
        point = dict(zip((name for name, _ in axes), combo))
        row = dict(point)
        try:
            corner = corner_set[point["corner"]] if "corner" in point else Corner(1.0, 1.0)
            n = int(point.get("bits", geometry.columns_connected))
            cap_col = geometry.cap_per_column
            if "rows" in point:
                cap_col += (int(point["rows"]) - geometry.rows) * geometry.cap_per_row_increment
                if cap_col <= 0.0:
                    raise ParameterError("extrapolated column capacitance is not positive")
            r_t = (
                geometry.driver_resistance_per_bit * corner.r_multiplier / n
                + geometry.inductor_parasitic_resistance * corner.r_multiplier
            )
            c = n * cap_col * corner.c_multiplier
            if sized:
                sized_geom = replace(
                    geometry,
                    driver_resistance_per_bit=geometry.driver_resistance_per_bit
                    * corner.r_multiplier,
                    cap_per_column=cap_col * corner.c_multiplier,
                    inductor_parasitic_resistance=geometry.inductor_parasitic_resistance
                    * corner.r_multiplier,
                )
                result = size_inductor(sized_geom, replace(sizing_spec, bits_connected=n))
                l = result.inductance
                row["l_min"] = l
            else:
                l = float(point.get("inductance", geometry.shared_inductance))
            derived = derive_resonance(
                RlcParams(
                    r_total=r_t,
                    inductance=l,
                    capacitance=c,
                    v_dd=float(point.get("v_dd", v_dd)),
                )
            )
            row["q_f"] = derived.q_f
            row["underdamped"] = derived.underdamped
            row["f_r"] = derived.f_r
            row["t_r_half"] = derived.t_r_half
            if derived.underdamped:
                k = swing_fraction_for_q(derived.q_f)
                row["swing_fraction"] = k
                row["savings_fraction"] = tuned_cycle_savings(k)
            else:
                row["swing_fraction"] = None
                row["savings_fraction"] = None
        except ResramError:
            for name in METRIC_COLUMNS:
                row.setdefault(name, None)
            if sized:
                row.setdefault("l_min", None)
        out_rows.append({name: row.get(name) for name in columns})
    return SweepResult(columns=tuple(columns), rows=tuple(out_rows))

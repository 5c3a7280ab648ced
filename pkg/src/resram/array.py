"""Maps SRAM array organization onto the lumped series-resonance circuit.

Connecting N write drivers to the shared inductor node multiplies the
load capacitance by N and divides the effective driver resistance by N,
which leaves the quality factor (and hence the achievable swing)
unchanged — the scaling argument behind sharing one inductor across a
whole data word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import DerivedResonance, RBreakdown, RlcParams, derive_resonance
from .exceptions import GeometryError

# Assumption, not a measured value: sets q_f close to 15 for the reference
# 256-column / 0.621 nH / 10.10 pF configuration.  Flagged in every report.
DEFAULT_DRIVER_RESISTANCE_PER_BIT = 133.8

# Reference half-period table: (mux_factor, columns, total capacitance).
DEFAULT_MUX_TABLE = (
    (1, 256, 10.10e-12),
    (2, 126, 5.07e-12),
    (4, 64, 2.53e-12),
)


@dataclass(frozen=True)
class ArrayGeometry:
    """Array organization plus the per-bit lumped element values.

    ``cap_per_column`` is the lumped bitline capacitance of one column at
    the configured row count; ``cap_per_row_increment`` is the marginal
    capacitance a row adds, used for row sweeps.
    """

    rows: int
    columns: int
    mux_factor: int
    cap_per_column: float
    cap_per_row_increment: float
    driver_resistance_per_bit: float
    shared_inductance: float
    inductor_parasitic_resistance: float = 0.0

    def __post_init__(self):
        for name in ("rows", "columns", "mux_factor"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise GeometryError(f"{name} must be an integer >= 1, got {value!r}")
        for name in (
            "cap_per_column",
            "cap_per_row_increment",
            "driver_resistance_per_bit",
            "shared_inductance",
        ):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise GeometryError(f"{name} must be finite and > 0, got {value!r}")
        if not (
            math.isfinite(self.inductor_parasitic_resistance)
            and self.inductor_parasitic_resistance >= 0.0
        ):
            raise GeometryError("inductor_parasitic_resistance must be finite and >= 0")

    @property
    def mux_exact(self) -> bool:
        return self.columns % self.mux_factor == 0

    @property
    def columns_connected(self) -> int:
        """Columns active on the shared node for one operation.

        When the mux factor does not divide the column count the result is
        rounded and the configured capacitance stays authoritative; the
        count is then informational only.
        """
        n = round(self.columns / self.mux_factor)
        if n < 1:
            raise GeometryError(
                f"no connected columns: columns={self.columns}, mux_factor={self.mux_factor}"
            )
        return n


def effective_params(geometry: ArrayGeometry, v_dd: float) -> RlcParams:
    """Collapse the connected columns into one series RLC loop.

    C is the connected-column capacitance sum; the parallel write drivers
    divide their per-bit resistance by the connected count, and the
    inductor parasitic adds on top.
    """
    n = geometry.columns_connected
    r_driver = geometry.driver_resistance_per_bit / n
    return RlcParams(
        r_total=r_driver + geometry.inductor_parasitic_resistance,
        inductance=geometry.shared_inductance,
        capacitance=n * geometry.cap_per_column,
        v_dd=v_dd,
        r_breakdown=RBreakdown(
            r_mos=r_driver,
            r_wire=0.0,
            r_inductor=geometry.inductor_parasitic_resistance,
        ),
    )


@dataclass(frozen=True)
class MuxTimingRow:
    mux_factor: int
    columns: int
    capacitance: float
    inductance: float
    r_total: float
    t_r_half: float | None
    underdamped: bool


def mux_timing_table(
    inductance: float,
    table: tuple = DEFAULT_MUX_TABLE,
    *,
    driver_resistance_per_bit: float = DEFAULT_DRIVER_RESISTANCE_PER_BIT,
    inductor_parasitic_resistance: float = 0.0,
    v_dd: float = 0.9,
) -> list[MuxTimingRow]:
    """Half-period versus mux factor for a fixed shared inductor.

    Each input row supplies (mux_factor, columns, total capacitance); the
    configured capacitance is authoritative.  With a small series
    resistance the half-period approaches pi * sqrt(L C).
    """
    rows = []
    for mux, columns, cap in table:
        r_total = driver_resistance_per_bit / columns + inductor_parasitic_resistance
        derived = derive_resonance(
            RlcParams(r_total=r_total, inductance=inductance, capacitance=cap, v_dd=v_dd)
        )
        rows.append(
            MuxTimingRow(
                mux_factor=mux,
                columns=columns,
                capacitance=cap,
                inductance=inductance,
                r_total=r_total,
                t_r_half=derived.t_r_half,
                underdamped=derived.underdamped,
            )
        )
    return rows


@dataclass(frozen=True)
class RowTiming:
    rows: int
    t_r_half: float | None
    underdamped: bool


def discharge_time_vs_rows(geometry: ArrayGeometry, rows_list) -> list[RowTiming]:
    """Half-period trend as the bitline grows: capacitance per column is
    extrapolated from the configured row count by the marginal row
    increment.  Overdamped points are flagged, not fatal.
    """
    rows_list = list(rows_list)
    if not rows_list:
        raise GeometryError("rows_list must be nonempty")
    if any(b <= a for a, b in zip(rows_list, rows_list[1:])):
        raise GeometryError("rows_list must be strictly increasing")
    out = []
    for rows in rows_list:
        if not isinstance(rows, int) or rows < 1:
            raise GeometryError(f"row counts must be integers >= 1, got {rows!r}")
        cap_col = geometry.cap_per_column + (rows - geometry.rows) * geometry.cap_per_row_increment
        if cap_col <= 0.0:
            raise GeometryError(
                f"extrapolated per-column capacitance is not positive at rows={rows}"
            )
        n = geometry.columns_connected
        derived: DerivedResonance = derive_resonance(
            RlcParams(
                r_total=geometry.driver_resistance_per_bit / n
                + geometry.inductor_parasitic_resistance,
                inductance=geometry.shared_inductance,
                capacitance=n * cap_col,
                v_dd=1.0,
            )
        )
        out.append(RowTiming(rows=rows, t_r_half=derived.t_r_half, underdamped=derived.underdamped))
    return out

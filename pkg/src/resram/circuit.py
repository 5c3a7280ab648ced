"""Lumped series-resonance circuit model and its derived scalar quantities.

The write path of an energy-recycling bitline reduces to one series loop:
a bias supply (nominally half the rail), the shared inductor, the total
series resistance of the conducting path, and the lumped bitline
capacitance.  Everything downstream (waveforms, transient simulation,
sizing) consumes the two value types defined here.

All quantities are SI base units; engineering notation exists only at the
configuration boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import ParameterError

TWO_PI = 2.0 * math.pi


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParameterError(f"{name} must be a real number, got {value!r}")
        if not math.isfinite(value) or value <= 0.0:
            raise ParameterError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class RBreakdown:
    """Optional split of the series resistance into its physical parts."""

    r_mos: float = 0.0
    r_wire: float = 0.0
    r_inductor: float = 0.0

    def total(self) -> float:
        return self.r_mos + self.r_wire + self.r_inductor


@dataclass(frozen=True)
class RlcParams:
    """Series-loop parameters: total resistance, inductance, capacitance, rails.

    ``v_bias`` is the inductor bias supply and defaults to exactly half of
    ``v_dd`` when left unset.  If ``r_breakdown`` is given, its components
    must sum to ``r_total`` (1e-12 relative).
    """

    r_total: float
    inductance: float
    capacitance: float
    v_dd: float
    v_bias: float | None = None
    r_breakdown: RBreakdown | None = None

    def __post_init__(self):
        _require_positive(
            r_total=self.r_total,
            inductance=self.inductance,
            capacitance=self.capacitance,
            v_dd=self.v_dd,
        )
        if self.v_bias is None:
            object.__setattr__(self, "v_bias", self.v_dd / 2.0)
        elif not math.isfinite(self.v_bias) or self.v_bias < 0.0:
            raise ParameterError(f"v_bias must be finite and >= 0, got {self.v_bias!r}")
        if self.r_breakdown is not None:
            for part in ("r_mos", "r_wire", "r_inductor"):
                value = getattr(self.r_breakdown, part)
                if not math.isfinite(value) or value < 0.0:
                    raise ParameterError(f"{part} must be finite and >= 0, got {value!r}")
            total = self.r_breakdown.total()
            if abs(total - self.r_total) > 1e-12 * abs(self.r_total):
                raise ParameterError(
                    f"resistance breakdown sums to {total!r}, expected r_total={self.r_total!r}"
                )


@dataclass(frozen=True)
class DerivedResonance:
    """Scalar quantities derived from one :class:`RlcParams`.

    For a non-oscillatory (overdamped or critically damped) loop the
    frequency-domain fields are ``None`` and ``underdamped`` is False;
    that is a reportable state, not an error, so sweeps can probe the
    infeasible region.
    """

    alpha: float
    q_f: float
    underdamped: bool
    omega_d: float | None = None
    f_r: float | None = None
    t_r: float | None = None
    t_r_half: float | None = None


def min_inductance(r_total: float, capacitance: float) -> float:
    """Smallest inductance at which the series loop stops being overdamped.

    Any inductance strictly greater than ``r_total**2 * capacitance / 4``
    yields an oscillatory (underdamped) loop.
    """
    _require_positive(r_total=r_total, capacitance=capacitance)
    return r_total * r_total * capacitance / 4.0


def derive_resonance(params: RlcParams) -> DerivedResonance:
    """Damping rate, damped frequency, half-period and quality factor.

    alpha   = R / (2 L)                 (decay rate of the envelope)
    omega_d = sqrt(1/(L C) - alpha**2)  (damped angular frequency)
    q_f     = sqrt(L / C) / R
    t_r_half = pi / omega_d             (the discharge / ring-down window)
    """
    r, l, c = params.r_total, params.inductance, params.capacitance
    alpha = r / (2.0 * l)
    q_f = math.sqrt(l / c) / r
    l_min = min_inductance(r, c)
    # Factored form keeps the sign decision identical to the l > l_min test.
    omega_sq = (1.0 - l_min / l) / (l * c)
    if not (l > l_min and omega_sq > 0.0):
        return DerivedResonance(alpha=alpha, q_f=q_f, underdamped=False)
    omega_d = math.sqrt(omega_sq)
    f_r = omega_d / TWO_PI
    return DerivedResonance(
        alpha=alpha,
        q_f=q_f,
        underdamped=True,
        omega_d=omega_d,
        f_r=f_r,
        t_r=1.0 / f_r,
        t_r_half=math.pi / omega_d,
    )

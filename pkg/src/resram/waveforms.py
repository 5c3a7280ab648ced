"""Closed-form waveforms of the underdamped series loop.

Covers the two phase archetypes the architecture actually uses: a
discharge ring that starts with the bitline charged to the rail, and the
symmetric recovery ring that starts from ground.  The extrema of those
rings define the resonant swing before the rail-completion switches
finish the transition.

Two capacitor-voltage variants are provided.  The widely printed closed
form repeats the cosine inside its damping-correction term; that
expression does not satisfy the series-loop equation at the stated
initial conditions.  ``ODE_CONSISTENT`` (the default, and the only form
used by downstream energy and sizing math) carries the sine correction
required by the differential equation; ``PUBLISHED`` evaluates the
printed expression verbatim so the two can be compared and plotted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .circuit import DerivedResonance, RlcParams, derive_resonance
from .exceptions import ParameterError, UnsupportedRegimeError


class WaveformVariant(Enum):
    ODE_CONSISTENT = "ode_consistent"
    PUBLISHED = "published"


@dataclass(frozen=True)
class SwingReport:
    """Resonant swing extrema: low after discharge, high after recovery."""

    v_ol: float
    v_oh: float
    v_rsw: float
    swing_fraction: float


def _underdamped(params: RlcParams) -> DerivedResonance:
    derived = derive_resonance(params)
    if not derived.underdamped:
        raise UnsupportedRegimeError(
            "analytic waveforms exist only for underdamped parameters "
            f"(need L > {params.r_total**2 * params.capacitance / 4.0:.6g} H)"
        )
    return derived


def _as_time(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or not np.all(np.isfinite(t)):
        raise ParameterError("time samples must be finite and >= 0")
    return t


def inductor_current(params: RlcParams, t):
    """Discharge-phase inductor current at time ``t`` (scalar or array).

    Initial state: capacitor at v_dd, zero current, bias source at v_bias.
    Positive current flows from the bitline through the inductor into the
    bias node.  Equals

        (v_dd - v_bias) / (L * omega_d) * exp(-alpha t) * sin(omega_d t)

    where L * omega_d == sqrt(L/C) * sqrt(1 - 1/(4 q_f**2)).
    """
    derived = _underdamped(params)
    t = _as_time(t)
    amp = (params.v_dd - params.v_bias) / (params.inductance * derived.omega_d)
    out = amp * np.exp(-derived.alpha * t) * np.sin(derived.omega_d * t)
    return float(out) if out.ndim == 0 else out


def cap_voltage(params: RlcParams, t, variant: WaveformVariant = WaveformVariant.ODE_CONSISTENT):
    """Capacitor (bitline) voltage during the discharge ring.

    ODE_CONSISTENT satisfies the loop equation with v(0) = v_dd, i(0) = 0:

        v_bias + (v_dd - v_bias) * exp(-alpha t)
               * (cos(omega_d t) + alpha/omega_d * sin(omega_d t))

    PUBLISHED evaluates the printed form verbatim (both trailing terms use
    the cosine, the correction enters with factor -1/(2 q_f), and the
    coefficients are fixed at v_dd/2 regardless of the configured bias):

        v_dd/2 + (1 - 1/(2 q_f)) * v_dd/2 * exp(-alpha t) * cos(omega_d t)
    """
    derived = _underdamped(params)
    t = _as_time(t)
    envelope = np.exp(-derived.alpha * t)
    if variant is WaveformVariant.ODE_CONSISTENT:
        ring = np.cos(derived.omega_d * t) + (derived.alpha / derived.omega_d) * np.sin(
            derived.omega_d * t
        )
        out = params.v_bias + (params.v_dd - params.v_bias) * envelope * ring
    elif variant is WaveformVariant.PUBLISHED:
        half = params.v_dd / 2.0
        cos_term = envelope * np.cos(derived.omega_d * t)
        out = half + half * cos_term - (1.0 / (2.0 * derived.q_f)) * half * cos_term
    else:  # pragma: no cover - enum is closed
        raise ParameterError(f"unknown waveform variant {variant!r}")
    return float(out) if out.ndim == 0 else out


def swing_fraction_for_q(q_f: float) -> float:
    """Fraction of the rail the tank swings on its own: exp(-pi*alpha/omega_d).

    In terms of the quality factor alone this is exp(-pi / sqrt(4 q_f**2 - 1)),
    defined for q_f > 1/2 (the oscillatory region).
    """
    if not math.isfinite(q_f) or q_f <= 0.5:
        raise UnsupportedRegimeError(f"swing fraction requires q_f > 1/2, got {q_f!r}")
    return math.exp(-math.pi / math.sqrt(4.0 * q_f * q_f - 1.0))


def q_for_swing_fraction(fraction: float) -> float:
    """Quality factor at which the resonant swing equals ``fraction`` of v_dd.

    Exact inversion of :func:`swing_fraction_for_q`:
    q = sqrt(1 + (pi / ln(1/fraction))**2) / 2.
    """
    if not (0.0 < fraction < 1.0):
        raise ParameterError(f"swing fraction must lie in (0, 1), got {fraction!r}")
    x = math.pi / math.log(1.0 / fraction)
    return math.sqrt(1.0 + x * x) / 2.0


def swing(params: RlcParams) -> SwingReport:
    """Swing extrema of a full discharge + recovery pair of rings.

    The low extremum is the discharge ring sampled at its half period;
    the high extremum is the symmetric recovery ring (from ground toward
    the bias) sampled at the same phase.  The difference is v_dd times
    the swing fraction for any bias level.
    """
    derived = _underdamped(params)
    k = math.exp(-math.pi * derived.alpha / derived.omega_d)
    v_ol = params.v_bias - (params.v_dd - params.v_bias) * k
    v_oh = params.v_bias * (1.0 + k)
    # v_oh - v_ol collapses to v_dd * k for any bias; computing it that way
    # keeps tiny swings (barely underdamped loops) from cancelling to zero.
    return SwingReport(v_ol=v_ol, v_oh=v_oh, v_rsw=params.v_dd * k, swing_fraction=k)

"""Figure rendering for the CLI report path (written next to the data files).

matplotlib is imported lazily with the Agg backend so that data-only runs
never pay for it.
"""

from __future__ import annotations

import numpy as np

from .circuit import RlcParams, derive_resonance
from .sizing import SweepResult
from .transient import (
    PHASE_DISCHARGE,
    PHASE_PULLDOWN,
    PHASE_PULLUP,
    PHASE_RECOVERY,
    PhaseModel,
    WaveformTrace,
    integrate_phase,
)
from .waveforms import WaveformVariant, cap_voltage

_PHASE_COLORS = {
    PHASE_DISCHARGE: "#cfe8ff",
    PHASE_PULLDOWN: "#ffe0cc",
    PHASE_RECOVERY: "#d6f5d6",
    PHASE_PULLUP: "#f0d9ff",
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def waveform_figure(trace: WaveformTrace, path: str, title: str = "write cycle") -> None:
    """Bitline voltage and inductor current with phase shading."""
    plt = _pyplot()
    fig, (ax_v, ax_i) = plt.subplots(2, 1, sharex=True, figsize=(8, 5))
    t_ns = trace.t * 1e9
    for label, a, b in trace.phase_runs():
        color = _PHASE_COLORS.get(label)
        if color:
            for ax in (ax_v, ax_i):
                ax.axvspan(t_ns[a], t_ns[b], color=color, lw=0)
    ax_v.plot(t_ns, trace.v_c, "k-", lw=1.2, label="v_c")
    if trace.booster is not None:
        ax_v.plot(t_ns, trace.booster.v_gate, "b--", lw=0.9, label="booster gate")
    ax_v.set_ylabel("voltage (V)")
    ax_v.legend(loc="upper right", fontsize=8)
    ax_v.set_title(title)
    ax_i.plot(t_ns, trace.i_l * 1e3, "r-", lw=1.2)
    ax_i.set_ylabel("i_l (mA)")
    ax_i.set_xlabel("time (ns)")
    for ax in (ax_v, ax_i):
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def timing_table_figure(rows, path: str) -> None:
    """Half-period versus connected columns for a fixed inductor."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    columns = [row.columns for row in rows]
    t_half = [row.t_r_half * 1e12 if row.t_r_half else float("nan") for row in rows]
    ax.plot(columns, t_half, "o-", color="tab:blue")
    for row, x, y in zip(rows, columns, t_half):
        ax.annotate(f"mux {row.mux_factor}", (x, y), textcoords="offset points", xytext=(6, 4), fontsize=8)
    ax.set_xlabel("connected columns")
    ax.set_ylabel("half period (ps)")
    ax.set_title(f"discharge window vs columns, L = {rows[0].inductance * 1e9:.3g} nH")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def sweep_figure(result: SweepResult, path: str) -> None:
    """Swept metrics against the first sweep axis."""
    plt = _pyplot()
    x_name = result.columns[0]
    xs = [row[x_name] for row in result.rows]
    numeric_x = all(isinstance(x, (int, float)) for x in xs)
    panels = [
        name
        for name in ("l_min", "t_r_half", "swing_fraction", "savings_fraction", "f_r")
        if name in result.columns and any(row[name] is not None for row in result.rows)
    ]
    if not panels:
        panels = ["q_f"]
    fig, axes = plt.subplots(len(panels), 1, sharex=True, figsize=(6.5, 2.4 * len(panels)))
    if len(panels) == 1:
        axes = [axes]
    plot_x = xs if numeric_x else range(len(xs))
    for ax, name in zip(axes, panels):
        ys = [row[name] if row[name] is not None else float("nan") for row in result.rows]
        ax.plot(plot_x, ys, "o-", color="tab:blue", ms=4)
        ax.set_ylabel(name)
        ax.grid(True, alpha=0.3)
        if name == "l_min":
            ax.set_yscale("log")
    axes[-1].set_xlabel(x_name)
    if not numeric_x:
        axes[-1].set_xticks(list(plot_x), [str(x) for x in xs])
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def variant_comparison_figure(params: RlcParams, path: str) -> None:
    """Both capacitor-voltage closed forms against the RK4 reference.

    Makes the printed-form discrepancy visible: its correction term uses
    the cosine, so it misses the initial condition by v_dd/(4 q_f) and
    drifts from the integrated waveform everywhere in between.
    """
    plt = _pyplot()
    derived = derive_resonance(params)
    t_end = 2.0 * derived.t_r
    t, states = integrate_phase(
        (params.v_dd, 0.0), PhaseModel.resonant(params), t_end, derived.t_r / 1e4
    )
    grid = np.linspace(0.0, t_end, 1200)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(t * 1e12, states[:, 0], "k-", lw=2.0, alpha=0.35, label="integrated reference")
    ax.plot(
        grid * 1e12,
        cap_voltage(params, grid, WaveformVariant.ODE_CONSISTENT),
        "b--",
        lw=1.1,
        label="closed form (ode consistent)",
    )
    ax.plot(
        grid * 1e12,
        cap_voltage(params, grid, WaveformVariant.PUBLISHED),
        "r:",
        lw=1.3,
        label="closed form (published)",
    )
    ax.set_xlabel("time (ps)")
    ax.set_ylabel("v_c (V)")
    ax.set_title("capacitor-voltage closed forms vs integration")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

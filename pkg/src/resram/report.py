"""Artifact emission: delimited files, JSON reports and aligned text tables.

Data values are printed at six significant digits so repeated runs diff
cleanly; the embedded configuration echo keeps full precision because it
is the reproduction recipe for the file it heads.  Nothing here writes
timestamps into data files.
"""

from __future__ import annotations

import io
import json

from . import __version__
from .circuit import DerivedResonance
from .energy import EnergyReport
from .sizing import SizingResult, SweepResult
from .transient import WaveformTrace


def fmt6(value) -> str:
    """Fixed six-significant-digit rendering for data cells."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return f"{value:.6g}"


def _round6(value):
    if isinstance(value, bool) or not isinstance(value, float):
        return value
    return float(f"{value:.6g}")


def _round_tree(obj):
    if isinstance(obj, dict):
        return {k: _round_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_tree(v) for v in obj]
    return _round6(obj)


def config_comment_lines(echo: dict, warnings: list[str]) -> list[str]:
    lines = [f"# {key} = {value}" for key, value in echo.items()]
    lines.extend(f"# warning: {w}" for w in warnings)
    return lines


def derived_dict(derived: DerivedResonance) -> dict:
    return {
        "alpha_per_second": derived.alpha,
        "omega_d_rad_per_second": derived.omega_d,
        "f_r_hertz": derived.f_r,
        "t_r_second": derived.t_r,
        "t_r_half_second": derived.t_r_half,
        "q_f": derived.q_f,
        "underdamped": derived.underdamped,
    }


def energy_dict(report: EnergyReport) -> dict:
    return {
        "e_from_vdd_joule": report.e_from_vdd,
        "e_from_bias_net_joule": report.e_from_bias_net,
        "e_dissipated_joule": {
            "series_r": report.e_dissipated.series_r,
            "pulldown": report.e_dissipated.pulldown,
            "pullup": report.e_dissipated.pullup,
            "clamp": report.e_dissipated.clamp,
            "total": report.e_dissipated.total(),
        },
        "e_conventional_joule": report.e_conventional,
        "savings_fraction": report.savings_fraction,
        "q_bias_net_coulomb": report.q_bias_net,
        "delta_stored_joule": report.delta_stored,
        "closure_error_joule": report.closure_error,
    }


def sizing_dict(result: SizingResult) -> dict:
    return {
        "inductance_henry": result.inductance,
        "t_r_half_second": result.t_r_half,
        "swing_fraction": result.swing_fraction,
        "q_f": result.q_f,
        "binding_constraint": result.binding_constraint,
        "r_total_ohm": result.r_total,
        "capacitance_farad": result.capacitance,
    }


def json_report(
    echo: dict,
    warnings: list[str],
    *,
    derived: dict | None = None,
    energy: dict | None = None,
    booster: dict | None = None,
    sizing: dict | None = None,
    table: list | None = None,
    include_meta: bool = True,
) -> str:
    """Assemble the machine-readable report; key order is fixed."""
    report: dict = {}
    if include_meta:
        report["meta"] = {"tool": "resram", "version": __version__}
    report["config"] = dict(echo)
    report["derived"] = _round_tree(derived)
    report["energy"] = _round_tree(energy)
    report["booster"] = _round_tree(booster)
    report["sizing"] = _round_tree(sizing)
    report["table"] = _round_tree(table)
    report["warnings"] = list(warnings)
    return json.dumps(report, indent=2) + "\n"


def trace_csv(trace: WaveformTrace, echo: dict, warnings: list[str]) -> str:
    """Waveform trace as ``t,v_c,i_l,phase`` rows under a config header."""
    out = io.StringIO()
    for line in config_comment_lines(echo, warnings):
        out.write(line + "\n")
    out.write("t,v_c,i_l,phase\n")
    for k in range(len(trace.t)):
        out.write(
            f"{fmt6(trace.t[k])},{fmt6(trace.v_c[k])},{fmt6(trace.i_l[k])},{trace.phase[k]}\n"
        )
    return out.getvalue()


def sweep_csv(result: SweepResult, echo: dict, warnings: list[str]) -> str:
    out = io.StringIO()
    for line in config_comment_lines(echo, warnings):
        out.write(line + "\n")
    out.write(",".join(result.columns) + "\n")
    for row in result.rows:
        out.write(",".join(fmt6(row[c]) if not isinstance(row[c], str) else row[c] for c in result.columns) + "\n")
    return out.getvalue()


def table_csv(headers: list[str], rows: list[list], echo: dict, warnings: list[str]) -> str:
    out = io.StringIO()
    for line in config_comment_lines(echo, warnings):
        out.write(line + "\n")
    out.write(",".join(headers) + "\n")
    for row in rows:
        out.write(",".join(cell if isinstance(cell, str) else fmt6(cell) for cell in row) + "\n")
    return out.getvalue()


def render_table(headers: list[str], rows: list[list]) -> str:
    """Plain aligned text table (honors NO_COLOR trivially: never colored)."""
    cells = [[cell if isinstance(cell, str) else fmt6(cell) for cell in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for idx, cell in enumerate(row):
            widths[idx] = max(widths[idx], len(cell))
    lines = [
        "  ".join(h.ljust(widths[idx]) for idx, h in enumerate(headers)).rstrip(),
        "  ".join("-" * widths[idx] for idx in range(len(headers))).rstrip(),
    ]
    for row in cells:
        lines.append("  ".join(cell.ljust(widths[idx]) for idx, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"

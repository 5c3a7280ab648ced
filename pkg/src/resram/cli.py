"""Command-line entry points: derive | table1 | simulate | size | sweep.

Exit codes: 0 success, 2 configuration or usage problem, 3 infeasible
sizing, 4 file I/O failure, 1 anything unexpected.  Errors print one
machine-parsable line to stderr: ``resram: <category>: <message>``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .circuit import derive_resonance
from .array import mux_timing_table
from .config import (
    RunConfig,
    parse_config,
    parse_quantity,
    resolve,
    with_overrides,
)
from .energy import resonant_energy
from .exceptions import ConfigError, InfeasibleSizingError, ResramError
from .report import (
    derived_dict,
    energy_dict,
    fmt6,
    json_report,
    render_table,
    sizing_dict,
    sweep_csv,
    table_csv,
    trace_csv,
)
from .sizing import size_inductor, sweep_design_space
from .transient import PulseSchedule, build_control, find_current_zero, simulate_write_cycle

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


_GLOBAL_DEFAULTS = {
    "config": None,
    "overrides": [],
    "output": None,
    "format": None,
    "quiet": False,
    "plot": False,
    "no_meta": False,
}


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand's unset flags from clobbering values the
    # top-level parser already collected; defaults land in main().
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", metavar="PATH", help="configuration file")
    common.add_argument(
        "--set",
        metavar="KEY=VALUE",
        action="append",
        dest="overrides",
        help="override one config entry (repeatable)",
    )
    common.add_argument("--output", metavar="PATH", help="write the artifact here instead of stdout")
    common.add_argument("--format", choices=("csv", "json", "table"), help="output format")
    common.add_argument("--quiet", action="store_true", help="suppress informational messages")
    common.add_argument(
        "--plot", action="store_true", help="render a figure next to the output file"
    )
    common.add_argument(
        "--no-meta", action="store_true", help="omit the tool/version block from JSON reports"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(
        prog="resram",
        description="Series-resonant energy-recycling SRAM bitline modeling tool",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("derive", parents=[common], help="print the derived resonance quantities")
    sub.add_parser(
        "table1", parents=[common], help="half-period versus mux factor for the fixed inductor"
    )
    sim = sub.add_parser("simulate", parents=[common], help="simulate one write cycle")
    sim.add_argument("--dry-run", action="store_true", default=False, help="validate the config and exit")
    sim.add_argument(
        "--auto-tune",
        action="store_true",
        default=False,
        help="set the SD delay to the analytic half period instead of the register value",
    )
    sim.add_argument("--dt", metavar="SECONDS", default=None,
                     help="integration step (engineering units allowed)")
    sub.add_parser("size", parents=[common], help="minimal inductor for the sizing spec")
    swp = sub.add_parser("sweep", parents=[common], help="design-space sweep to CSV")
    swp.add_argument("--bits", metavar="LIST", default=None, help="comma list of connected-bit counts")
    swp.add_argument("--rows", metavar="LIST", default=None, help="comma list of row counts")
    swp.add_argument("--inductance", metavar="LIST", default=None,
                     help="comma list of inductances (units ok)")
    swp.add_argument("--vdd", metavar="LIST", default=None, help="comma list of supply voltages")
    swp.add_argument("--corners", metavar="LIST", default=None, help="comma list of corner names")
    return parser


def _load_config(args) -> RunConfig:
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as error:
            raise error
        config = parse_config(text)
    else:
        config = RunConfig()
    overrides = list(args.overrides)
    if args.output:
        overrides.append(f"output.path={args.output}")
    if args.format:
        overrides.append(f"output.format={args.format}")
    return with_overrides(config, overrides)


def _emit(text: str, path: str | None, quiet: bool) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
        if not quiet:
            print(f"wrote {path}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _figure_path(out_path: str | None, command: str) -> str:
    if not out_path:
        raise ConfigError(f"{command}: --plot needs --output (the figure lands next to it)")
    return str(Path(out_path).with_suffix(".png"))


def _kv_rows(payload: dict) -> list[list]:
    return [[key, value if value is not None else ""] for key, value in payload.items()]


def _cmd_derive(resolved, args) -> int:
    derived = derive_resonance(resolved.params)
    payload = derived_dict(derived)
    fmt = args.format or resolved.output_format
    if fmt == "json":
        text = json_report(
            resolved.echo, resolved.warnings, derived=payload, include_meta=not args.no_meta
        )
    elif fmt == "csv":
        text = table_csv(
            ["quantity", "value"],
            [[k, v] for k, v in payload.items()],
            resolved.echo,
            resolved.warnings,
        )
    else:
        text = render_table(["quantity", "value"], _kv_rows(payload))
    _emit(text, resolved.output_path, args.quiet)
    if args.plot:
        from .plotting import variant_comparison_figure

        variant_comparison_figure(resolved.params, _figure_path(resolved.output_path, "derive"))
    return EXIT_OK


_TABLE_HEADERS = [
    "mux_factor",
    "columns",
    "capacitance_farad",
    "inductance_henry",
    "t_r_half_second",
]


def _cmd_table1(resolved, args) -> int:
    rows = mux_timing_table(
        resolved.params.inductance,
        driver_resistance_per_bit=resolved.geometry.driver_resistance_per_bit,
        inductor_parasitic_resistance=resolved.geometry.inductor_parasitic_resistance,
        v_dd=resolved.params.v_dd,
    )
    cells = [[r.mux_factor, r.columns, r.capacitance, r.inductance, r.t_r_half] for r in rows]
    fmt = args.format or resolved.output_format
    if fmt == "json":
        table = [
            dict(zip(_TABLE_HEADERS, row), underdamped=rows[idx].underdamped)
            for idx, row in enumerate(cells)
        ]
        text = json_report(
            resolved.echo, resolved.warnings, table=table, include_meta=not args.no_meta
        )
    elif fmt == "csv":
        text = table_csv(_TABLE_HEADERS, cells, resolved.echo, resolved.warnings)
    else:
        text = render_table(_TABLE_HEADERS, cells)
    _emit(text, resolved.output_path, args.quiet)
    if args.plot:
        from .plotting import timing_table_figure

        timing_table_figure(rows, _figure_path(resolved.output_path, "table1"))
    return EXIT_OK


def _cmd_simulate(resolved, args) -> int:
    params = resolved.params
    schedule = resolved.schedule
    if args.auto_tune or resolved.auto_tune:
        derived = derive_resonance(params)
        if not derived.underdamped:
            raise ConfigError("simulate: cannot auto-tune an overdamped configuration")
        schedule = PulseSchedule(
            clock_period=schedule.clock_period,
            s_rise=schedule.s_rise,
            s_fall=schedule.s_fall,
            delay_code=0,
            base_delay=derived.t_r_half,
            delay_step=0.0,
        )
    control = build_control(schedule, strict=True)
    if args.dry_run:
        return EXIT_OK
    out_path = resolved.output_path
    if not out_path:
        raise ConfigError("simulate: an output path is required (--output or output.path)")
    dt = parse_quantity(args.dt, "second", "--dt") if args.dt else resolved.sim_dt
    trace = simulate_write_cycle(params, resolved.phases, control, dt)
    energy = resonant_energy(trace, params, resolved.phases)
    derived_payload = derived_dict(derive_resonance(params))
    derived_payload["i_l_first_zero_second"] = find_current_zero(trace)
    booster_payload = None
    if trace.booster is not None:
        booster_payload = {
            "peak_gate_voltage_volt": trace.booster.peak_voltage,
            "energy_dissipated_joule": trace.booster.energy_dissipated,
            "t_half_second": trace.booster.t_half,
        }
    _emit(trace_csv(trace, resolved.echo, resolved.warnings), out_path, args.quiet)
    json_path = str(Path(out_path).with_suffix(".energy.json"))
    _emit(
        json_report(
            resolved.echo,
            resolved.warnings,
            derived=derived_payload,
            energy=energy_dict(energy),
            booster=booster_payload,
            include_meta=not args.no_meta,
        ),
        json_path,
        args.quiet,
    )
    if args.plot:
        from .plotting import waveform_figure

        waveform_figure(trace, _figure_path(out_path, "simulate"))
    return EXIT_OK


def _cmd_size(resolved, args) -> int:
    result = size_inductor(resolved.geometry, resolved.sizing)
    payload = sizing_dict(result)
    fmt = args.format or resolved.output_format
    if fmt == "json":
        text = json_report(
            resolved.echo, resolved.warnings, sizing=payload, include_meta=not args.no_meta
        )
    elif fmt == "csv":
        text = table_csv(
            ["quantity", "value"],
            [[k, v] for k, v in payload.items()],
            resolved.echo,
            resolved.warnings,
        )
    else:
        text = render_table(["quantity", "value"], _kv_rows(payload))
    _emit(text, resolved.output_path, args.quiet)
    return EXIT_OK


def _parse_list(raw: str | None, kind: str, flag: str):
    if raw is None:
        return None
    items = [item.strip() for item in raw.split(",") if item.strip()]
    if not items:
        raise ConfigError(f"{flag}: empty list")
    if kind == "int":
        return [int(parse_quantity(item, "int", flag)) for item in items]
    if kind == "str":
        return items
    return [parse_quantity(item, kind, flag) for item in items]


def _cmd_sweep(resolved, args) -> int:
    bits = _parse_list(args.bits, "int", "--bits")
    rows = _parse_list(args.rows, "int", "--rows")
    inductances = _parse_list(args.inductance, "henry", "--inductance")
    v_dds = _parse_list(args.vdd, "volt", "--vdd")
    corners = _parse_list(args.corners, "str", "--corners")
    if all(axis is None for axis in (bits, rows, inductances, v_dds, corners)):
        raise ConfigError("sweep: give at least one axis (--bits/--rows/--inductance/--vdd/--corners)")
    if corners:
        unknown = [name for name in corners if name not in resolved.corners]
        if unknown:
            raise ConfigError(f"--corners: unknown corner {unknown[0]!r}")
    result = sweep_design_space(
        resolved.geometry,
        resolved.params.v_dd,
        bits=bits,
        rows=rows,
        inductances=inductances,
        v_dds=v_dds,
        corners=corners,
        corner_set=resolved.corners,
        sizing_spec=resolved.sizing,
    )
    fmt = args.format or resolved.output_format
    if fmt == "json":
        text = json_report(
            resolved.echo,
            resolved.warnings,
            table=[dict(row) for row in result.rows],
            include_meta=not args.no_meta,
        )
    elif fmt == "table":
        text = render_table(
            list(result.columns),
            [["" if row[c] is None else row[c] for c in result.columns] for row in result.rows],
        )
    else:
        text = sweep_csv(result, resolved.echo, resolved.warnings)
    _emit(text, resolved.output_path, args.quiet)
    if args.plot:
        from .plotting import sweep_figure

        sweep_figure(result, _figure_path(resolved.output_path, "sweep"))
    return EXIT_OK


_COMMANDS = {
    "derive": _cmd_derive,
    "table1": _cmd_table1,
    "simulate": _cmd_simulate,
    "size": _cmd_size,
    "sweep": _cmd_sweep,
}


def _fail(category: str, message: str, code: int) -> int:
    one_line = " ".join(str(message).split())
    print(f"resram: {category}: {one_line}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name, default in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        resolved = resolve(_load_config(args))
        return _COMMANDS[args.command](resolved, args)
    except ConfigError as error:
        return _fail("config", str(error), EXIT_CONFIG)
    except InfeasibleSizingError as error:
        return _fail("infeasible", f"{error} [binding: {error.binding_constraint}]", EXIT_INFEASIBLE)
    except OSError as error:
        return _fail("io", str(error), EXIT_IO)
    except ResramError as error:
        return _fail("error", str(error), EXIT_CONFIG)
    except Exception as error:  # pragma: no cover - defensive
        return _fail("internal", f"{type(error).__name__}: {error}", EXIT_INTERNAL)


if __name__ == "__main__":
    raise SystemExit(main())

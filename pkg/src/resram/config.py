"""Flat dotted-key configuration with engineering-notation units.

Format: one ``key = value`` per line, blank lines and ``#`` comment lines
ignored.  Values are SI base units, optionally written with an
engineering suffix that must match the key's dimension: ``0.621nH``,
``10.10pF``, ``248ps``, ``1GHz``, ``450mV``, ``0.52ohm``.  Unknown keys,
unit mismatches and out-of-range values are rejected with the offending
key named.

Sections: ``circuit`` (lumped loop overrides), ``geometry`` (array
organization), ``schedule`` (S/SD timing and the 4-bit delay register),
``phases`` (completion switches and optional booster tank), ``sizing``,
``corners.<name>`` (R/C multiplier pairs), ``sim`` and ``output``.
Anything left unset falls back to the library defaults; the fully
resolved set is echoed into every report so any output can be reproduced
from its own header.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .array import DEFAULT_DRIVER_RESISTANCE_PER_BIT, ArrayGeometry, effective_params
from .circuit import RBreakdown, RlcParams
from .exceptions import ConfigError, ResramError
from .sizing import DEFAULT_CORNERS, Corner, SizingSpec
from .transient import BoosterConfig, PhaseConfig, PulseSchedule

_UNSET = object()

_UNIT_BY_KIND = {
    "ohm": "ohm",
    "henry": "H",
    "farad": "F",
    "second": "s",
    "hertz": "Hz",
    "volt": "V",
}

_PREFIXES = {
    "f": 1e-15,
    "p": 1e-12,
    "n": 1e-9,
    "u": 1e-6,
    "m": 1e-3,
    "k": 1e3,
    "M": 1e6,
    "G": 1e9,
    "T": 1e12,
}

_NUMBER_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([A-Za-z]*)$")


@dataclass(frozen=True)
class _Field:
    kind: str  # dimension name, "number", "int", "bool" or "str"
    default: object = _UNSET
    check: str | None = None
    choices: tuple[str, ...] | None = None


_SCHEMA: dict[str, _Field] = {
    "circuit.r_total": _Field("ohm", check="pos"),
    "circuit.r_mos": _Field("ohm", check="nonneg"),
    "circuit.r_wire": _Field("ohm", check="nonneg"),
    "circuit.r_inductor": _Field("ohm", check="nonneg"),
    "circuit.inductance": _Field("henry", check="pos"),
    "circuit.capacitance": _Field("farad", check="pos"),
    "circuit.v_dd": _Field("volt", 0.9, check="pos"),
    "circuit.v_bias": _Field("volt", check="nonneg"),
    "geometry.rows": _Field("int", 256, check="ge1"),
    "geometry.columns": _Field("int", 256, check="ge1"),
    "geometry.mux_factor": _Field("int", 1, check="ge1"),
    "geometry.cap_per_column": _Field("farad", 39.45e-15, check="pos"),
    "geometry.cap_per_row_increment": _Field("farad", 0.10e-15, check="pos"),
    "geometry.driver_resistance_per_bit": _Field("ohm", check="pos"),
    "geometry.shared_inductance": _Field("henry", 0.621e-9, check="pos"),
    "geometry.inductor_parasitic_resistance": _Field("ohm", 0.0, check="nonneg"),
    "schedule.clock_period": _Field("second", 1e-9, check="pos"),
    "schedule.s_rise": _Field("second", 0.0, check="nonneg"),
    "schedule.s_fall": _Field("second", 0.5e-9, check="pos"),
    "schedule.delay_code": _Field("int", 15, check="code4"),
    "schedule.base_delay": _Field("second", 100e-12, check="nonneg"),
    "schedule.delay_step": _Field("second", 10e-12, check="nonneg"),
    "schedule.auto_tune": _Field("bool", False),
    "phases.series_switch_on_resistance": _Field("ohm", 0.0, check="nonneg"),
    "phases.pulldown_resistance": _Field("ohm", check="pos"),
    "phases.pullup_resistance": _Field("ohm", check="pos"),
    "phases.booster_inductance": _Field("henry", check="pos"),
    "phases.booster_gate_capacitance": _Field("farad", check="pos"),
    "phases.booster_series_resistance": _Field("ohm", check="pos"),
    "sizing.target_swing_fraction": _Field("number", 2.0 / 3.0, check="frac01"),
    "sizing.max_t_r_half": _Field("second", 100e-12, check="pos"),
    "sizing.f_op_min": _Field("hertz", 200e6, check="pos"),
    "sizing.f_op_max": _Field("hertz", 1e9, check="pos"),
    "sizing.bits_connected": _Field("int", check="ge1"),
    "sim.dt": _Field("second", check="pos"),
    "output.format": _Field("str", "table", choices=("csv", "json", "table")),
    "output.path": _Field("str"),
}

_CORNER_KEY_RE = re.compile(r"^corners\.([A-Za-z0-9_]+)\.(r_multiplier|c_multiplier)$")


def _run_check(key: str, check: str | None, value) -> None:
    if check is None:
        return
    ok = {
        "pos": lambda x: x > 0,
        "nonneg": lambda x: x >= 0,
        "ge1": lambda x: x >= 1,
        "code4": lambda x: 0 <= x <= 15,
        "frac01": lambda x: 0 < x < 1,
    }[check](value)
    if not ok:
        bounds = {
            "pos": "> 0",
            "nonneg": ">= 0",
            "ge1": ">= 1",
            "code4": "in 0..15",
            "frac01": "in (0, 1)",
        }[check]
        raise ConfigError(f"{key}: value {value!r} out of range (must be {bounds})", key=key)


def parse_quantity(text: str, kind: str, key: str = "<value>"):
    """Parse one value of the given dimension, accepting unit suffixes."""
    text = text.strip()
    if kind == "str":
        if not text:
            raise ConfigError(f"{key}: empty value", key=key)
        return text
    if kind == "bool":
        if text in ("true", "false"):
            return text == "true"
        raise ConfigError(f"{key}: expected true or false, got {text!r}", key=key)
    match = _NUMBER_RE.match(text)
    if not match:
        raise ConfigError(f"{key}: cannot parse number from {text!r}", key=key)
    number, suffix = match.groups()
    if kind == "int":
        if suffix:
            raise ConfigError(f"{key}: integer value may not carry a unit, got {text!r}", key=key)
        value = float(number)
        if value != int(value):
            raise ConfigError(f"{key}: expected an integer, got {text!r}", key=key)
        return int(value)
    if kind == "number":
        if suffix:
            raise ConfigError(f"{key}: dimensionless value may not carry a unit, got {text!r}", key=key)
        return float(number)
    unit = _UNIT_BY_KIND[kind]
    if not suffix:
        scale = 1.0
    elif suffix == unit:
        scale = 1.0
    elif len(suffix) > len(unit) and suffix[0] in _PREFIXES and suffix[1:] == unit:
        scale = _PREFIXES[suffix[0]]
    else:
        raise ConfigError(
            f"{key}: unit mismatch, expected {unit} (optionally prefixed), got {suffix!r}",
            key=key,
        )
    value = float(number) * scale
    if not math.isfinite(value):
        raise ConfigError(f"{key}: value {text!r} is not finite", key=key)
    return value


@dataclass(frozen=True)
class RunConfig:
    """Explicitly set configuration entries (resolution applies defaults)."""

    values: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.values.get(key, default)


def _parse_entry(key: str, raw: str):
    spec = _SCHEMA.get(key)
    if spec is None:
        corner = _CORNER_KEY_RE.match(key)
        if corner is None:
            raise ConfigError(f"unknown key {key!r}", key=key)
        value = parse_quantity(raw, "number", key)
        _run_check(key, "pos", value)
        return value
    value = parse_quantity(raw, spec.kind, key)
    if spec.choices is not None and value not in spec.choices:
        raise ConfigError(f"{key}: must be one of {', '.join(spec.choices)}", key=key)
    _run_check(key, spec.check, value)
    return value


def with_overrides(config: RunConfig, assignments) -> RunConfig:
    """Apply ``key=value`` override strings (CLI flags beat file values)."""
    values = dict(config.values)
    for item in assignments:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, _, raw = item.partition("=")
        key = key.strip()
        values[key] = _parse_entry(key, raw.strip())
    return RunConfig(values=values)


def parse_config(text: str) -> RunConfig:
    """Parse config text; rejects unknown keys and malformed values."""
    values: dict = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", key=key)
        values[key] = _parse_entry(key, raw.strip())
    return RunConfig(values=values)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(config: RunConfig) -> str:
    """Canonical text form; parses back to an identical config."""
    lines = []
    for key in _SCHEMA:
        if key in config.values:
            lines.append(f"{key} = {_format_value(config.values[key])}")
    for key in sorted(k for k in config.values if k not in _SCHEMA):
        lines.append(f"{key} = {_format_value(config.values[key])}")
    return "\n".join(lines) + "\n"


@dataclass
class ResolvedConfig:
    """All module inputs with defaults applied, plus the echo and warnings."""

    geometry: ArrayGeometry
    params: RlcParams
    schedule: PulseSchedule
    phases: PhaseConfig
    sizing: SizingSpec
    corners: dict
    output_format: str
    output_path: str | None
    sim_dt: float | None
    auto_tune: bool
    warnings: list[str]
    echo: dict


def _section(error: ResramError, section: str) -> ConfigError:
    return ConfigError(f"{section}: {error}", key=section)


def resolve(config: RunConfig) -> ResolvedConfig:
    """Build every module input from the config, applying and recording
    the documented defaults.  Raises field-path-qualified ConfigError."""
    get = config.values.get
    warnings: list[str] = []

    driver_r = get("geometry.driver_resistance_per_bit")
    if driver_r is None:
        driver_r = DEFAULT_DRIVER_RESISTANCE_PER_BIT
        warnings.append(
            "geometry.driver_resistance_per_bit defaulted to "
            f"{DEFAULT_DRIVER_RESISTANCE_PER_BIT} ohm (assumption: q_f near 15 "
            "for 256 columns at 0.621 nH / 10.10 pF)"
        )
    try:
        geometry = ArrayGeometry(
            rows=get("geometry.rows", 256),
            columns=get("geometry.columns", 256),
            mux_factor=get("geometry.mux_factor", 1),
            cap_per_column=get("geometry.cap_per_column", 39.45e-15),
            cap_per_row_increment=get("geometry.cap_per_row_increment", 0.10e-15),
            driver_resistance_per_bit=driver_r,
            shared_inductance=get("geometry.shared_inductance", 0.621e-9),
            inductor_parasitic_resistance=get("geometry.inductor_parasitic_resistance", 0.0),
        )
    except ResramError as error:
        raise _section(error, "geometry") from error
    if not geometry.mux_exact:
        warnings.append(
            f"geometry.mux_factor {geometry.mux_factor} does not divide "
            f"{geometry.columns} columns; configured capacitance is authoritative "
            "and the connected-column count is informational"
        )
    n_connected = geometry.columns_connected

    v_dd = get("circuit.v_dd", 0.9)
    try:
        base = effective_params(geometry, v_dd)
        breakdown_keys = ("circuit.r_mos", "circuit.r_wire", "circuit.r_inductor")
        breakdown = None
        if any(k in config.values for k in breakdown_keys):
            breakdown = RBreakdown(
                r_mos=get("circuit.r_mos", 0.0),
                r_wire=get("circuit.r_wire", 0.0),
                r_inductor=get("circuit.r_inductor", 0.0),
            )
        r_total = get("circuit.r_total")
        if r_total is None:
            r_total = breakdown.total() if breakdown is not None else base.r_total
        if breakdown is None and r_total == base.r_total:
            breakdown = base.r_breakdown
        params = RlcParams(
            r_total=r_total,
            inductance=get("circuit.inductance", base.inductance),
            capacitance=get("circuit.capacitance", base.capacitance),
            v_dd=v_dd,
            v_bias=get("circuit.v_bias"),
            r_breakdown=breakdown,
        )
    except ResramError as error:
        raise _section(error, "circuit") from error

    try:
        schedule = PulseSchedule(
            clock_period=get("schedule.clock_period", 1e-9),
            s_rise=get("schedule.s_rise", 0.0),
            s_fall=get("schedule.s_fall", 0.5e-9),
            delay_code=get("schedule.delay_code", 15),
            base_delay=get("schedule.base_delay", 100e-12),
            delay_step=get("schedule.delay_step", 10e-12),
        )
    except ResramError as error:
        raise _section(error, "schedule") from error

    completion_default = geometry.driver_resistance_per_bit / n_connected
    pulldown = get("phases.pulldown_resistance")
    pullup = get("phases.pullup_resistance")
    if pulldown is None:
        pulldown = completion_default
        warnings.append(
            f"phases.pulldown_resistance defaulted to {completion_default:.6g} ohm "
            "(driver_resistance_per_bit across the connected columns; assumption)"
        )
    if pullup is None:
        pullup = completion_default
        warnings.append(
            f"phases.pullup_resistance defaulted to {completion_default:.6g} ohm "
            "(driver_resistance_per_bit across the connected columns; assumption)"
        )
    booster_keys = (
        "phases.booster_inductance",
        "phases.booster_gate_capacitance",
        "phases.booster_series_resistance",
    )
    booster = None
    if any(k in config.values for k in booster_keys):
        missing = [k for k in booster_keys if k not in config.values]
        if missing:
            raise ConfigError(
                f"{missing[0]}: booster needs all of inductance, gate_capacitance "
                "and series_resistance",
                key=missing[0],
            )
        booster = BoosterConfig(
            inductance=get("phases.booster_inductance"),
            gate_capacitance=get("phases.booster_gate_capacitance"),
            series_resistance=get("phases.booster_series_resistance"),
        )
    try:
        phases = PhaseConfig(
            pulldown_resistance=pulldown,
            pullup_resistance=pullup,
            series_switch_on_resistance=get("phases.series_switch_on_resistance", 0.0),
            booster=booster,
        )
    except ResramError as error:
        raise _section(error, "phases") from error

    try:
        sizing = SizingSpec(
            target_swing_fraction=get("sizing.target_swing_fraction", 2.0 / 3.0),
            max_t_r_half=get("sizing.max_t_r_half", 100e-12),
            f_op_range=(get("sizing.f_op_min", 200e6), get("sizing.f_op_max", 1e9)),
            bits_connected=get("sizing.bits_connected", n_connected),
        )
    except ResramError as error:
        raise _section(error, "sizing") from error

    corners = dict(DEFAULT_CORNERS)
    corner_names = sorted(
        {m.group(1) for k in config.values if (m := _CORNER_KEY_RE.match(k)) is not None}
    )
    for name in corner_names:
        r_key, c_key = f"corners.{name}.r_multiplier", f"corners.{name}.c_multiplier"
        if r_key not in config.values or c_key not in config.values:
            missing = r_key if r_key not in config.values else c_key
            raise ConfigError(f"{missing}: corner {name!r} needs both multipliers", key=missing)
        corners[name] = Corner(r_multiplier=get(r_key), c_multiplier=get(c_key))

    echo: dict = {}
    for key in _SCHEMA:
        section, _, name = key.partition(".")
        if key == "geometry.driver_resistance_per_bit":
            echo[key] = geometry.driver_resistance_per_bit
        elif section == "geometry":
            echo[key] = getattr(geometry, name)
        elif key == "circuit.r_total":
            echo[key] = params.r_total
        elif key in ("circuit.r_mos", "circuit.r_wire", "circuit.r_inductor"):
            if params.r_breakdown is not None:
                echo[key] = getattr(params.r_breakdown, name)
        elif key == "circuit.inductance":
            echo[key] = params.inductance
        elif key == "circuit.capacitance":
            echo[key] = params.capacitance
        elif key == "circuit.v_dd":
            echo[key] = params.v_dd
        elif key == "circuit.v_bias":
            echo[key] = params.v_bias
        elif section == "schedule" and name != "auto_tune":
            echo[key] = getattr(schedule, name)
        elif key == "schedule.auto_tune":
            echo[key] = get("schedule.auto_tune", False)
        elif key == "phases.pulldown_resistance":
            echo[key] = phases.pulldown_resistance
        elif key == "phases.pullup_resistance":
            echo[key] = phases.pullup_resistance
        elif key == "phases.series_switch_on_resistance":
            echo[key] = phases.series_switch_on_resistance
        elif key.startswith("phases.booster_"):
            if booster is not None:
                echo[key] = getattr(booster, name.removeprefix("booster_"))
        elif key == "sizing.target_swing_fraction":
            echo[key] = sizing.target_swing_fraction
        elif key == "sizing.max_t_r_half":
            echo[key] = sizing.max_t_r_half
        elif key == "sizing.f_op_min":
            echo[key] = sizing.f_op_range[0]
        elif key == "sizing.f_op_max":
            echo[key] = sizing.f_op_range[1]
        elif key == "sizing.bits_connected":
            echo[key] = sizing.bits_connected
        elif key == "sim.dt":
            if "sim.dt" in config.values:
                echo[key] = get("sim.dt")
        elif key == "output.format":
            echo[key] = get("output.format", "table")
        elif key == "output.path":
            if "output.path" in config.values:
                echo[key] = get("output.path")
    for name in sorted(corners):
        echo[f"corners.{name}.r_multiplier"] = corners[name].r_multiplier
        echo[f"corners.{name}.c_multiplier"] = corners[name].c_multiplier

    return ResolvedConfig(
        geometry=geometry,
        params=params,
        schedule=schedule,
        phases=phases,
        sizing=sizing,
        corners=corners,
        output_format=get("output.format", "table"),
        output_path=get("output.path"),
        sim_dt=get("sim.dt"),
        auto_tune=get("schedule.auto_tune", False),
        warnings=warnings,
        echo=echo,
    )

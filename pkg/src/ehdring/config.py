"""Plain-text ``key = value`` run configuration.

Every key is optional; missing keys take the value from the packaged
reference file (``data/reference.cfg``).  ``j1_kgm2``, ``j2_kgm2`` and
``l_c_m`` are the exception: when absent from a user file they are derived
from that file's masses and radii (thin ring, point mass, ``l_c = r2``) so a
changed geometry stays self-consistent.
"""

import math
from dataclasses import dataclass, field
from importlib import resources

from .drive import DriveSignal
from .dynamics.model import SimOptions
from .errors import ConfigError, EHDError
from .harness import HarnessSettings
from .pump import PumpModel
from .statics import EQ17_VOLTAGE_MODES, RobotParams

# key -> (type, section, field)
KEYS = {
    "v_max_kv": (float, "signal", "v_max"),
    "v_min_kv": (float, "signal", "v_min"),
    "duty": (float, "signal", "duty"),
    "frequency_hz": (float, "signal", "frequency"),
    "phase_s": (float, "signal", "phase"),
    "m1_kg": (float, "robot", "m1"),
    "m2_kg": (float, "robot", "m2"),
    "r1_m": (float, "robot", "r1"),
    "r2_m": (float, "robot", "r2"),
    "j1_kgm2": (float, "robot", "j1"),
    "j2_kgm2": (float, "robot", "j2"),
    "area_m2": (float, "robot", "area"),
    "g_ms2": (float, "robot", "g"),
    "k1": (float, "robot", "k1"),
    "xi_m1": (float, "robot", "xi_m1"),
    "xi_m2": (float, "robot", "xi_m2"),
    "l_c_m": (float, "robot", "l_c"),
    "a_p": (float, "pump", "a_p"),
    "b_p": (float, "pump", "b_p"),
    "a_q": (float, "pump", "a_q"),
    "b_q": (float, "pump", "b_q"),
    "c_p": (float, "pump", "c_p"),
    "c_q": (float, "pump", "c_q"),
    "pressure_scale": (float, "pump", "pressure_scale"),
    "flow_scale": (float, "pump", "flow_scale"),
    "eq17_voltage": (str, "settings", "eq17_voltage"),
    "dt_s": (float, "options", "dt"),
    "t_end_s": (float, "options", "t_end"),
    "dry_friction": (bool, "options", "dry_friction"),
    "sign_epsilon_rads": (float, "options", "sign_epsilon"),
    "det_floor": (float, "options", "det_floor"),
    "steady_window_periods": (int, "settings", "window"),
    "settle_rel_tol": (float, "settings", "rel_tol"),
    "theta_still_rad": (float, "settings", "theta_still"),
    "omega_roll_rads": (float, "settings", "omega_roll"),
    "calib_max_iter": (int, "top", "calib_max_iter"),
    "out_dir": (str, "top", "out_dir"),
}

_SECTIONS = [
    ("drive", ["v_max_kv", "v_min_kv", "duty", "frequency_hz", "phase_s"]),
    ("robot", ["m1_kg", "m2_kg", "r1_m", "r2_m", "j1_kgm2", "j2_kgm2", "area_m2",
               "g_ms2", "k1", "xi_m1", "xi_m2", "l_c_m"]),
    ("pump", ["a_p", "b_p", "a_q", "b_q", "c_p", "c_q", "pressure_scale", "flow_scale"]),
    ("statics", ["eq17_voltage"]),
    ("dynamics", ["dt_s", "t_end_s", "dry_friction", "sign_epsilon_rads", "det_floor"]),
    ("harness", ["steady_window_periods", "settle_rel_tol", "theta_still_rad",
                 "omega_roll_rads"]),
    ("calibration", ["calib_max_iter"]),
    ("output", ["out_dir"]),
]

_DERIVED = {"j1_kgm2", "j2_kgm2", "l_c_m"}
_TRUE = ("true", "yes", "on", "1")
_FALSE = ("false", "no", "off", "0")


@dataclass(frozen=True)
class RunConfig:
    robot: RobotParams
    pump: PumpModel
    signal: DriveSignal
    options: SimOptions
    settings: HarnessSettings = field(default_factory=HarnessSettings)
    calib_max_iter: int = 60
    out_dir: str = "out"


def _convert(key, raw, line, source):
    kind = KEYS[key][0]
    text = raw.strip()
    if kind is float:
        try:
            value = float(text)
        except ValueError:
            raise ConfigError(f"expected a number, got {text!r}", key=key, line=line, source=source) from None
        if not math.isfinite(value):
            raise ConfigError("value must be finite", key=key, line=line, source=source)
        return value
    if kind is int:
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"expected an integer, got {text!r}", key=key, line=line, source=source) from None
    if kind is bool:
        low = text.lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise ConfigError(f"expected true or false, got {text!r}", key=key, line=line, source=source)
    if not text:
        raise ConfigError("value must not be empty", key=key, line=line, source=source)
    return text


def parse_text(text, source="<config>"):
    """Parse config text into a ``{key: value}`` dict (no defaults applied)."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError("expected 'key = value'", line=lineno, source=source)
        key, raw = body.split("=", 1)
        key = key.strip()
        if key not in KEYS:
            raise ConfigError("unknown key", key=key or "<empty>", line=lineno, source=source)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno, source=source)
        values[key] = _convert(key, raw, lineno, source)
    return values


def reference_values():
    text = resources.files("ehdring").joinpath("data/reference.cfg").read_text()
    return parse_text(text, "reference.cfg")


def _build(values):
    groups = {"signal": {}, "robot": {}, "pump": {}, "options": {}, "settings": {}, "top": {}}
    for key, value in values.items():
        _, section, name = KEYS[key]
        groups[section][name] = value
    owner = {(section, name): key for key, (_, section, name) in KEYS.items()}

    def make(section, cls):
        try:
            return cls(**groups[section])
        except EHDError as exc:
            msg = str(exc)
            name = msg.split(" ", 1)[0]
            key = owner.get((section, name), section)
            raise ConfigError(msg, key=key) from None

    signal = make("signal", DriveSignal)
    robot = make("robot", RobotParams)
    pump = make("pump", PumpModel)
    options = make("options", SimOptions)
    settings = groups["settings"]
    if settings["eq17_voltage"] not in EQ17_VOLTAGE_MODES:
        raise ConfigError(f"must be one of {', '.join(EQ17_VOLTAGE_MODES)}", key="eq17_voltage")
    if settings["window"] < 1:
        raise ConfigError("must be >= 1", key="steady_window_periods")
    for name, key in (("rel_tol", "settle_rel_tol"), ("theta_still", "theta_still_rad"),
                      ("omega_roll", "omega_roll_rads")):
        if not settings[name] > 0:
            raise ConfigError("must be > 0", key=key)
    if groups["top"]["calib_max_iter"] < 1:
        raise ConfigError("must be >= 1", key="calib_max_iter")
    return RunConfig(robot, pump, signal, options, HarnessSettings(**settings),
                     groups["top"]["calib_max_iter"], groups["top"]["out_dir"])


def config_from_values(user):
    """Overlay ``user`` values on the reference defaults and validate."""
    values = reference_values()
    for key in _DERIVED:
        if key not in user:
            del values[key]
    values.update(user)
    values.setdefault("j1_kgm2", values["m1_kg"] * values["r1_m"] ** 2)
    values.setdefault("j2_kgm2", values["m2_kg"] * values["r2_m"] ** 2)
    values.setdefault("l_c_m", values["r2_m"])
    return _build(values)


def load_config(path=None):
    """Read a config file; ``None`` gives the reference configuration.

    Raises
    ------
    ConfigError
        On a malformed line (with its number), an unknown key, or a value
        that breaks an invariant (naming the key).
    """
    if path is None:
        return config_from_values({})
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return config_from_values(parse_text(text, str(path)))


def config_values(cfg):
    """Flat ``{key: value}`` view of a RunConfig."""
    sources = {"signal": cfg.signal, "robot": cfg.robot, "pump": cfg.pump,
               "options": cfg.options, "settings": cfg.settings, "top": cfg}
    return {key: getattr(sources[section], name) for key, (_, section, name) in KEYS.items()}


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_config(cfg):
    values = config_values(cfg)
    lines = []
    for title, keys in _SECTIONS:
        if lines:
            lines.append("")
        lines.append(f"# --- {title} ---")
        lines.extend(f"{key} = {_format(values[key])}" for key in keys)
    return "\n".join(lines) + "\n"


def save_config(cfg, path):
    """Write every key explicitly; ``load_config`` reads it back unchanged."""
    with open(path, "w") as fh:
        fh.write(dump_config(cfg))

"""
Scenario configuration: parsing, validation and file loading.

Scenarios are TOML tables (JSON with the same structure is accepted)::

    name = "perfect_knowledge_60deg"

    [plant]
    J = [0.02, 0.02, 0.04, 0.0, 0.0, 0.0]   # Jxx, Jyy, Jzz, Jxy, Jxz, Jyz
    c = 0.0
    tau = [0.0, 0.0, 0.0]
    r_body = [0.0, 0.0, 1.0]

    [model]
    J_hat = [0.022, 0.022, 0.044, 0.0, 0.0, 0.0]

    [gains]
    Lambda = 1.0
    eta = 1.0
    gamma1 = 1.0
    gamma2 = 2.0
    gamma4 = 2.0
    gamma5 = 1.0

    [envelope]
    wd_max = 0.5
    wd_dot_max = 1.0
    w_max = 2.0

    [reference]
    kind = "sinusoid"
    axis = [1.0, 0.0, 0.0]
    amplitude = 0.5
    frequency = 0.2

    [initial]
    axis = [1.0, 0.0, 0.0]
    angle_deg = 60.0

    [integration]
    dt = 1e-3
    duration = 10.0

All six gains and the envelope keys wd_max, wd_dot_max and w_max are required;
gamma3, gamma and kappa are always derived.
"""

import json
import math
import os
import re
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from s2track.certification.bounds import DEFAULT_SAMPLES, DEFAULT_SEED, SAFETY_FACTOR, Envelope
from s2track.certification.conditions import PSI_GRID
from s2track.core.errors import (
    ConfigParseError,
    ConfigValidationError,
    InvalidGainStructureError,
    SingularInertiaError,
)
from s2track.core.parameters import Gains, InertiaModel
from s2track.sim.dynamics import MAX_DT
from s2track.sim.reference import KINDS, ReferenceProfile
from s2track.utils.rotations import E1, E3, exp_rodrigues

SEED_ENV = "S2TRACK_SEED"
DEFAULT_DT = 1e-3
DEFAULT_DURATION = 10.0

_GAIN_KEYS = ("Lambda", "eta", "gamma1", "gamma2", "gamma4", "gamma5")
_DERIVED_GAINS = ("gamma3", "gamma", "kappa")
_TABLES = (
    "plant",
    "model",
    "gains",
    "envelope",
    "certification",
    "reference",
    "initial",
    "integration",
    "output",
)
_REQUIRED = object()


@dataclass(frozen=True)
class InitialCondition:
    """Initial attitude as a rotation of the reference about ``axis``, plus the initial rate."""

    axis: np.ndarray = field(default_factory=lambda: E1.copy())
    angle: float = 0.0
    w_b: np.ndarray = field(default_factory=lambda: np.zeros(3))


@dataclass(frozen=True)
class IntegrationSettings:
    dt: float = DEFAULT_DT
    duration: float = DEFAULT_DURATION
    zero_order_hold: bool = True


@dataclass(frozen=True)
class CertificationSettings:
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    safety_factor: float = SAFETY_FACTOR
    psi_grid: int = PSI_GRID


@dataclass(frozen=True)
class OutputSettings:
    dir: Path = Path(".")
    name: str = "scenario"


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    """A fully validated scenario."""

    name: str
    model: InertiaModel
    gains: Gains
    envelope: Envelope
    reference: ReferenceProfile
    initial: InitialCondition
    integration: IntegrationSettings = field(default_factory=IntegrationSettings)
    certification: CertificationSettings = field(default_factory=CertificationSettings)
    output: OutputSettings = field(default_factory=OutputSettings)
    r_body: np.ndarray = field(default_factory=lambda: E3.copy())

    def with_overrides(
        self, dt: Optional[float] = None, duration: Optional[float] = None
    ) -> "ScenarioConfig":
        """Copy with the integration step and/or duration replaced (both validated)."""
        integration = self.integration
        if dt is not None:
            integration = replace(integration, dt=_check_dt(dt, "integration.dt"))
        if duration is not None:
            integration = replace(
                integration, duration=_check_positive(duration, "integration.duration")
            )
        return replace(self, integration=integration)


def _check_dt(value: float, path: str) -> float:
    if not (math.isfinite(value) and 0.0 < value <= MAX_DT):
        raise ConfigValidationError(path, f"must lie in (0, {MAX_DT}] s, got {value!r}")
    return float(value)


def _check_positive(value: float, path: str) -> float:
    if not (math.isfinite(value) and value > 0):
        raise ConfigValidationError(path, f"must be finite and positive, got {value!r}")
    return float(value)


class _Table:
    """Typed access to one table of the raw document, with dotted-path diagnostics."""

    def __init__(self, data: Any, path: str):
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigValidationError(path, "expected a table")
        self.data = data
        self.path = path
        self.used = set()

    def _key(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def has(self, key: str) -> bool:
        return key in self.data

    def raw(self, key: str, default: Any = _REQUIRED) -> Any:
        self.used.add(key)
        if key not in self.data:
            if default is _REQUIRED:
                raise ConfigParseError(f"Missing required key '{self._key(key)}'")
            return default
        return self.data[key]

    def number(self, key: str, default: Any = _REQUIRED) -> float:
        value = self.raw(key, default)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigValidationError(self._key(key), f"expected a number, got {value!r}")
        if not math.isfinite(value):
            raise ConfigValidationError(self._key(key), f"must be finite, got {value!r}")
        return float(value)

    def integer(self, key: str, default: Any = _REQUIRED) -> int:
        value = self.raw(key, default)
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigValidationError(self._key(key), f"expected an integer, got {value!r}")
        return int(value)

    def boolean(self, key: str, default: Any = _REQUIRED) -> bool:
        value = self.raw(key, default)
        if not isinstance(value, bool):
            raise ConfigValidationError(self._key(key), f"expected true or false, got {value!r}")
        return value

    def string(self, key: str, default: Any = _REQUIRED) -> str:
        value = self.raw(key, default)
        if not isinstance(value, str):
            raise ConfigValidationError(self._key(key), f"expected a string, got {value!r}")
        return value

    def vector(self, key: str, size: int, default: Any = _REQUIRED) -> np.ndarray:
        value = self.raw(key, default)
        if isinstance(value, np.ndarray):
            return value.astype(float)
        if (
            not isinstance(value, list)
            or len(value) != size
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
        ):
            raise ConfigValidationError(
                self._key(key), f"expected a list of {size} numbers, got {value!r}"
            )
        out = np.array(value, dtype=float)
        if not np.all(np.isfinite(out)):
            raise ConfigValidationError(self._key(key), f"must be finite, got {value!r}")
        return out

    def angle(self, key: str, default: float = 0.0) -> float:
        """An angle given either as ``key`` (radians) or ``key_deg`` (degrees)."""
        deg_key = f"{key}_deg"
        if self.has(key) and self.has(deg_key):
            raise ConfigValidationError(self._key(key), f"give either '{key}' or '{deg_key}', not both")
        if self.has(deg_key):
            return math.radians(self.number(deg_key))
        return self.number(key, default)

    def warn_unused(self) -> None:
        for key in sorted(set(self.data) - self.used):
            warnings.warn(f"Ignoring unknown key '{self._key(key)}'")


def _inertia(entries: np.ndarray) -> np.ndarray:
    Jxx, Jyy, Jzz, Jxy, Jxz, Jyz = entries
    return np.array([[Jxx, Jxy, Jxz], [Jxy, Jyy, Jyz], [Jxz, Jyz, Jzz]])


def _unit_vector(table: _Table, key: str, default: np.ndarray) -> np.ndarray:
    v = table.vector(key, 3, default)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ConfigValidationError(table._key(key), "must be a nonzero vector")
    return v / n


def resolve_seed(configured: Optional[int] = None) -> int:
    """Sampling seed: ``S2TRACK_SEED`` if set, else the configured value, else 42."""
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise ConfigValidationError(SEED_ENV, f"expected an integer, got {env!r}")
    return DEFAULT_SEED if configured is None else configured


def _model(plant: _Table, model: _Table) -> InertiaModel:
    J = _inertia(plant.vector("J", 6))
    c = plant.number("c", 0.0)
    if c < 0:
        raise ConfigValidationError("plant.c", f"must be nonnegative, got {c!r}")
    tau = plant.vector("tau", 3, np.zeros(3))
    J_hat = _inertia(model.vector("J_hat", 6)) if model.has("J_hat") else J
    tau_hat = model.vector("tau_hat", 3, tau)

    try:
        plant_side = InertiaModel(J=J, J_hat=J, c=c, tau=tau)
    except SingularInertiaError as exc:
        raise ConfigValidationError("plant.J", str(exc))
    try:
        InertiaModel(J=J_hat, J_hat=J_hat, c=c, tau=tau_hat)
    except SingularInertiaError as exc:
        raise ConfigValidationError("model.J_hat", str(exc))
    return InertiaModel(J=plant_side.J, J_hat=J_hat, c=c, tau=tau, tau_hat=tau_hat)


def _gains(table: _Table) -> Gains:
    for key in _DERIVED_GAINS:
        if table.has(key):
            raise ConfigValidationError(
                f"gains.{key}", "is derived from the other gains and cannot be supplied"
            )
    values = {key: table.number(key) for key in _GAIN_KEYS}
    for key, value in values.items():
        if not value > 0:
            raise ConfigValidationError(f"gains.{key}", f"must be positive, got {value!r}")
    try:
        return Gains(**values)
    except InvalidGainStructureError as exc:
        raise ConfigValidationError("gains", str(exc))


def _reference(table: _Table) -> ReferenceProfile:
    kind = table.string("kind", "constant_spin")
    if kind not in KINDS:
        raise ConfigValidationError("reference.kind", f"must be one of {', '.join(KINDS)}, got {kind!r}")
    Qd0 = exp_rodrigues(_unit_vector(table, "Qd0_axis", E3), table.angle("Qd0_angle"))
    try:
        return ReferenceProfile(
            kind=kind,
            axis=_unit_vector(table, "axis", E3),
            Qd0=Qd0,
            rate=table.number("rate", 0.0),
            amplitude=table.number("amplitude", 0.0),
            frequency=table.number("frequency", 0.0),
            ramp_time=table.number("ramp_time", 0.0),
        )
    except ValueError as exc:
        raise ConfigValidationError("reference", str(exc))


def _envelope(table: _Table) -> Envelope:
    wd_max = table.number("wd_max")
    wd_dot_max = table.number("wd_dot_max")
    w_max = table.number("w_max")
    psi_max = table.number("psi_max", 2.0)
    f_max = table.number("f_max") if table.has("f_max") else None
    for key, value in (("wd_max", wd_max), ("wd_dot_max", wd_dot_max), ("w_max", w_max)):
        if value < 0:
            raise ConfigValidationError(f"envelope.{key}", f"must be nonnegative, got {value!r}")
    if not 0.0 < psi_max <= 2.0:
        raise ConfigValidationError("envelope.psi_max", f"must lie in (0, 2], got {psi_max!r}")
    if f_max is not None and f_max < 0:
        raise ConfigValidationError("envelope.f_max", f"must be nonnegative, got {f_max!r}")
    return Envelope(wd_max=wd_max, wd_dot_max=wd_dot_max, w_max=w_max, psi_max=psi_max, f_max=f_max)


def _certification(table: _Table, envelope: _Table) -> CertificationSettings:
    samples = envelope.integer("samples", DEFAULT_SAMPLES)
    if samples < 1:
        raise ConfigValidationError("envelope.samples", f"must be positive, got {samples!r}")
    safety = table.number("safety_factor", SAFETY_FACTOR)
    if safety < 1.0:
        raise ConfigValidationError(
            "certification.safety_factor", f"must be at least 1, got {safety!r}"
        )
    psi_grid = table.integer("psi_grid", PSI_GRID)
    if psi_grid < 2:
        raise ConfigValidationError("certification.psi_grid", f"must be at least 2, got {psi_grid!r}")
    seed = table.integer("seed", DEFAULT_SEED) if table.has("seed") else None
    return CertificationSettings(
        samples=samples, seed=resolve_seed(seed), safety_factor=safety, psi_grid=psi_grid
    )


def build_config(document: Dict[str, Any], name: str = "scenario") -> ScenarioConfig:
    """
    Validate a parsed document and build the scenario.

    Raises:
        ConfigParseError: If a required key is missing
        ConfigValidationError: If a value violates its constraint
    """
    root = _Table(document, "")
    tables = {key: _Table(root.raw(key, {}), key) for key in _TABLES}
    name = root.string("name", name)

    plant = tables["plant"]
    model = _model(plant, tables["model"])
    r_body = _unit_vector(plant, "r_body", E3)
    gains = _gains(tables["gains"])
    reference = _reference(tables["reference"])

    init = tables["initial"]
    initial = InitialCondition(
        axis=_unit_vector(init, "axis", E1),
        angle=init.angle("angle"),
        w_b=init.vector("w_b", 3, np.zeros(3)),
    )

    env_table = tables["envelope"]
    envelope = _envelope(env_table)
    certification = _certification(tables["certification"], env_table)

    integ = tables["integration"]
    integration = IntegrationSettings(
        dt=_check_dt(integ.number("dt", DEFAULT_DT), "integration.dt"),
        duration=_check_positive(integ.number("duration", DEFAULT_DURATION), "integration.duration"),
        zero_order_hold=integ.boolean("zero_order_hold", True),
    )

    out = tables["output"]
    output = OutputSettings(dir=Path(out.string("dir", ".")), name=out.string("name", name))

    for table in (root, *tables.values()):
        table.warn_unused()

    return ScenarioConfig(
        name=name,
        model=model,
        gains=gains,
        envelope=envelope,
        reference=reference,
        initial=initial,
        integration=integration,
        certification=certification,
        output=output,
        r_body=r_body,
    )


_TOML_POSITION = re.compile(r"line (\d+), column (\d+)")


def parse_config(text: str, fmt: str = "toml", name: str = "scenario") -> ScenarioConfig:
    """
    Parse scenario text.

    Args:
        text: Document text
        fmt: 'toml' or 'json'
        name: Scenario name used when the document does not set one

    Returns:
        Validated ScenarioConfig

    Raises:
        ConfigParseError: On a syntax error (with line and column) or a missing required key
        ConfigValidationError: On a constraint violation, naming the field
    """
    if fmt == "toml":
        try:
            document = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            match = _TOML_POSITION.search(str(exc))
            line, column = (int(match.group(1)), int(match.group(2))) if match else (None, None)
            raise ConfigParseError(f"Invalid TOML: {exc}", line, column)
    elif fmt == "json":
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigParseError(f"Invalid JSON: {exc.msg}", exc.lineno, exc.colno)
        if not isinstance(document, dict):
            raise ConfigParseError("A JSON scenario must be an object at the top level")
    else:
        raise ValueError(f"Unsupported config format: '{fmt}'. Supported formats: toml, json")
    return build_config(document, name)


def load_config(filepath: Union[str, Path], fmt: Optional[str] = None) -> ScenarioConfig:
    """
    Load a scenario file, detecting the format from its suffix.

    Args:
        filepath: Path to a .toml or .json scenario
        fmt: Force a format ('toml' or 'json'); detected from the suffix if None

    Returns:
        Validated ScenarioConfig named after the file stem unless the file sets ``name``

    Raises:
        FileNotFoundError: If the file doesn't exist
        ValueError: If the format cannot be determined
    """
    filepath = Path(filepath)
    if not filepath.exists():
        raise FileNotFoundError(f"File not found: {filepath}")

    if fmt is None:
        suffix = filepath.suffix.lower()
        if suffix == ".toml":
            fmt = "toml"
        elif suffix == ".json":
            fmt = "json"
        else:
            raise ValueError(
                f"Could not determine config format for '{filepath}'. "
                f"Supported suffixes: .toml, .json"
            )

    try:
        text = filepath.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigParseError(f"Scenario file is not valid UTF-8: {exc}")
    return parse_config(text, fmt=fmt, name=filepath.stem)

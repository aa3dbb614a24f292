"""
Run configuration: a line-oriented ``key = value`` text with ``[section]``
headers and ``#`` comments, or the same keys in a YAML file.

    [scheme]
    m = 1
    [grid]
    sigma = 0.9
    h = 0.01

Keys given before any section header may belong to any section.
"""
import logging
import math
import os.path as osp
from dataclasses import asdict, dataclass, replace
from typing import Optional

import yaml

from lib.dispersion.grid import DispersionBackend, GridSpec
from lib.errors import ConfigError
from lib.wavepacket.packets import crossing_config

logger = logging.getLogger(__name__)

# section -> {key: type}; defaults live on RunConfig, (float, None) marks an optional value
SECTIONS = {
    "scheme": {"m": int},
    "grid": {"sigma": float, "c": float, "h": float},
    "dispersion": {
        "backend": str,
        "phi_samples": int,
        "scan_points": int,
        "bisect_tol": float,
        "classify_step": float,
    },
    "algebra": {"theta_samples": int, "joint_tol": float},
    "experiment": {
        "alpha": float,
        "x0_1": (float, None),
        "x0_2": (float, None),
        "v1": float,
        "v2": float,
        "carrier_phi_c": float,
        "delta_k": float,
        "separation": (float, None),
        "t_final": (float, None),
        "nt": int,
        "field_nx": int,
        "field_nt": int,
    },
    "simulation": {"sim_nx": int, "steps": int, "growth_cap": float},
    "output": {"out_dir": str},
}
REQUIRED = ("m", "sigma", "h")
KEY_SECTION = {key: section for section, keys in SECTIONS.items() for key in keys}
KEY_TYPE = {key: kind for keys in SECTIONS.values() for key, kind in keys.items()}


@dataclass(frozen=True)
class RunConfig:
    m: int = 1
    sigma: float = 0.9
    c: float = 1.0
    h: float = 0.01
    backend: str = "general"
    phi_samples: int = 1001
    scan_points: int = 4096
    bisect_tol: float = 1e-12
    classify_step: float = 1e-4
    theta_samples: int = 4096
    joint_tol: float = 1e-8
    alpha: float = 0.0005
    x0_1: Optional[float] = None
    x0_2: Optional[float] = None
    v1: float = -2.68381
    v2: float = -2.51381
    carrier_phi_c: float = 0.0
    delta_k: float = 0.05
    separation: Optional[float] = None
    t_final: Optional[float] = None
    nt: int = 401
    field_nx: int = 2001
    field_nt: int = 201
    sim_nx: int = 131072
    steps: int = 50
    growth_cap: float = 1e6
    out_dir: str = "out"

    def __post_init__(self):
        problems = constraint_errors(asdict(self))
        if problems:
            raise ConfigError([f"{key}: {msg}" for key, msg in problems])

    def with_overrides(self, **changes):
        """Copy with the non-None entries of ``changes`` applied (and validated)."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    @property
    def grid(self):
        return GridSpec(c=self.c, h=self.h, sigma=self.sigma)

    @property
    def dispersion_backend(self):
        return DispersionBackend.from_name(self.backend)

    def error_model(self, **changes):
        """Two-packet error-model configuration from the [experiment] keys."""
        params = dict(
            alpha=self.alpha, h=self.h, v1=self.v1, v2=self.v2, c=self.c,
            carrier_phi_c=self.carrier_phi_c, delta_k=self.delta_k, separation=self.separation,
            x0_1=self.x0_1, x0_2=self.x0_2, t_final=self.t_final, nt=self.nt,
            field_nx=self.field_nx, field_nt=self.field_nt,
        )
        params.update(changes)
        return crossing_config(**params)

    def to_dict(self):
        return asdict(self)


def constraint_errors(values):
    """(key, message) for every value violating its constraint."""
    problems = []

    def need(key, ok, msg):
        if key in values and values[key] is not None and not ok(values[key]):
            problems.append((key, msg))

    for key, value in values.items():
        if isinstance(value, float) and not math.isfinite(value):
            problems.append((key, "must be finite"))
    need("m", lambda v: v >= 1, "must be >= 1")
    need("sigma", lambda v: v > 0, "must be > 0")
    need("h", lambda v: v > 0, "must be > 0")
    need("c", lambda v: v != 0, "must be nonzero")
    need("backend", lambda v: v in {b.value for b in DispersionBackend}, "must be 'general' or 'threepoint'")
    need("phi_samples", lambda v: v >= 2, "must be >= 2")
    need("scan_points", lambda v: v >= 3, "must be >= 3")
    for key in ("bisect_tol", "classify_step", "joint_tol", "alpha", "delta_k", "separation", "t_final"):
        need(key, lambda v: v > 0, "must be > 0")
    for key in ("theta_samples", "nt", "field_nx", "field_nt"):
        need(key, lambda v: v >= 2, "must be >= 2")
    need("steps", lambda v: v >= 1, "must be >= 1")
    need("growth_cap", lambda v: v > 1, "must be > 1")
    need("out_dir", lambda v: len(v) > 0, "must not be empty")
    m = values.get("m")
    if isinstance(m, int) and m >= 1:
        need("sim_nx", lambda v: v > 2 * m, f"must exceed 2m = {2 * m}")
        need("backend", lambda v: v != "threepoint" or m == 1, "threepoint backend needs m = 1")
    return problems


def coerce(raw):
    """int, then float, then bool, then str."""
    text = raw.strip()
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    return text


def _type_error(key, value):
    expected = KEY_TYPE[key]
    allowed = expected if isinstance(expected, tuple) else (expected,)
    if value is None:
        return None if None in allowed else "value required"
    if isinstance(value, bool):
        return f"expected {allowed[0].__name__}, got bool"
    if float in allowed and isinstance(value, (int, float)):
        return None
    if int in allowed and isinstance(value, int):
        return None
    if str in allowed and isinstance(value, str):
        return None
    return f"expected {allowed[0].__name__}, got {type(value).__name__} {value!r}"


def _build(entries, errors):
    """entries: (section or None, key, value, line or None)."""
    values, lines = {}, {}

    def where(line):
        return f"line {line}: " if line is not None else ""

    for section, key, value, line in entries:
        if key not in KEY_SECTION:
            errors.append(f"{where(line)}unknown key '{key}'")
            continue
        if section is not None and KEY_SECTION[key] != section:
            errors.append(f"{where(line)}key '{key}' does not belong to section [{section}]")
            continue
        if key in values:
            errors.append(f"{where(line)}duplicate key '{key}' (first set at line {lines[key]})")
            continue
        problem = _type_error(key, value)
        if problem:
            errors.append(f"{where(line)}{key}: {problem}")
            continue
        values[key] = float(value) if KEY_TYPE[key] in (float, (float, None)) and value is not None else value
        lines[key] = line
    seen = {key for _, key, _, _ in entries}
    for key in REQUIRED:
        if key not in seen:
            errors.append(f"missing required key '{key}'")
    for key, msg in constraint_errors(values):
        errors.append(f"{where(lines.get(key))}{key}: {msg}")
    if errors:
        raise ConfigError(errors)
    return RunConfig(**values)


def parse_config(text):
    """Parse and validate a configuration text; every problem is reported at once."""
    entries, errors = [], []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                errors.append(f"line {lineno}: malformed section header {line!r}")
                continue
            name = line[1:-1].strip()
            if name not in SECTIONS:
                errors.append(f"line {lineno}: unknown section [{name}]")
            section = name
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {line!r}")
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if section is not None and section not in SECTIONS:
            continue
        entries.append((section, key, coerce(value), lineno))
    return _build(entries, errors)


def load_config(path):
    """Read a configuration file; .yaml / .yml files use YAML, anything else the text format."""
    with open(path) as f:
        text = f.read()
    logger.debug(f"loading configuration from {path}")
    if osp.splitext(path)[1].lower() not in (".yaml", ".yml"):
        return parse_config(text)
    params = yaml.safe_load(text) or {}
    if not isinstance(params, dict):
        raise ConfigError([f"{path}: expected a mapping at the top level"])
    entries, errors = [], []
    for key, value in params.items():
        if isinstance(value, dict):
            if key not in SECTIONS:
                errors.append(f"unknown section [{key}]")
                continue
            entries.extend((key, k, v, None) for k, v in value.items())
        else:
            entries.append((None, key, value, None))
    return _build(entries, errors)


def default_config():
    return RunConfig()

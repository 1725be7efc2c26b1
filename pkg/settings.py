"""
settings.py

Run defaults from ``entpower.yml`` with ``ENTPOWER_*`` environment overrides.

Precedence (lowest first): the YAML defaults file (``ENTPOWER_CONFIG`` points
at an alternate one), the environment, an overlay mapping (the CLI's
``--config`` file) and finally explicit command-line flags, which the CLI
applies itself.
"""

import logging
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import yaml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = Path(__file__).parent / "entpower.yml"

ENV_KEYS = {
    "ENTPOWER_SEED": ("seed", int),
    "ENTPOWER_WORKERS": ("workers", int),
    "ENTPOWER_ASSISTED_TRACE_CAP": ("assisted_trace_cap", int),
    "ENTPOWER_LOG_LEVEL": ("log_level", str),
    "ENTPOWER_LOG_DIR": ("log_dir", str),
}


@dataclass(frozen=True)
class Settings:
    exact_tol: float = 1e-12
    numeric_tol: float = 1e-10
    assisted_trace_cap: int = 3
    assisted_trace_hard_cap: int = 4
    theta_grid_points: int = 2001
    mc_samples: int = 20000
    mc_chunk_size: int = 256
    workers: int = 1
    max_restarts: int = 4
    max_iterations: int = 200
    asymptotics_d_max: int = 64
    seed: Optional[int] = None
    log_level: str = "WARNING"
    log_dir: Optional[str] = None

    def __post_init__(self):
        if self.assisted_trace_hard_cap > 4:
            raise ValueError(
                f"assisted_trace_hard_cap above 4 is not supported, got {self.assisted_trace_hard_cap}"
            )
        if not 2 <= self.assisted_trace_cap <= self.assisted_trace_hard_cap:
            raise ValueError(
                f"assisted_trace_cap must lie in [2, {self.assisted_trace_hard_cap}], "
                f"got {self.assisted_trace_cap}"
            )
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.mc_chunk_size < 1:
            raise ValueError(f"mc_chunk_size must be >= 1, got {self.mc_chunk_size}")
        if self.mc_samples < 2:
            raise ValueError(f"mc_samples must be >= 2, got {self.mc_samples}")
        if self.theta_grid_points < 3:
            raise ValueError(f"theta_grid_points must be >= 3, got {self.theta_grid_points}")
        if self.seed is not None and self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if not 0.0 < self.exact_tol <= self.numeric_tol:
            raise ValueError("tolerances must satisfy 0 < exact <= numeric")

    def with_overrides(self, **overrides) -> "Settings":
        """Copy with the non-None overrides applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _flatten(data: Dict[str, Any], source: str) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key, value in (data or {}).items():
        if key == "tolerances":
            for name, tol in (value or {}).items():
                out[f"{name}_tol"] = tol
        else:
            out[key] = value
    known = {f.name for f in fields(Settings)}
    unknown = sorted(set(out) - known)
    if unknown:
        raise ValueError(f"{source}: unknown setting(s) {', '.join(unknown)}")
    return out


def read_config_file(path) -> Dict[str, Any]:
    """A YAML mapping of setting names (``tolerances`` nested)."""
    p = Path(path)
    if not p.exists():
        raise ValueError(f"config file not found: {path}")
    data = yaml.safe_load(p.read_text(encoding="utf-8"))
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping at the top level")
    return _flatten(data, str(path))


def _from_env() -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for env, (name, cast) in ENV_KEYS.items():
        raw = os.environ.get(env)
        if raw is None or raw.strip() == "":
            continue
        try:
            out[name] = cast(raw.strip())
        except ValueError:
            raise ValueError(f"{env}={raw!r} is not a valid {cast.__name__}") from None
    return out


def load_settings(overlay_path: Optional[str] = None) -> Settings:
    base_path = os.environ.get("ENTPOWER_CONFIG") or DEFAULT_CONFIG
    values = read_config_file(base_path)
    values.update(_from_env())
    if overlay_path:
        values.update(read_config_file(overlay_path))
    logger.debug("Settings from %s%s", base_path, f" + {overlay_path}" if overlay_path else "")
    return Settings(**values)


def new_seed() -> int:
    """Fresh 63-bit seed from OS entropy."""
    return int(np.random.SeedSequence().entropy) & (2**63 - 1)


__all__ = ["DEFAULT_CONFIG", "ENV_KEYS", "Settings", "load_settings", "new_seed", "read_config_file"]

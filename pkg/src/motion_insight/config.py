"""One structure for every tunable threshold, shared by CLI and service.

Values load from a JSON file and can be overridden field-by-field (CLI
flags take precedence over the file, the file over built-in defaults).
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import SchemaError


@dataclass(frozen=True)
class AnalysisConfig:
    # pelvis-frame conventions
    forward_flip: bool = False      # negate the forward axis for opposite-chirality rigs
    weight_literal: bool = False    # same-side numerator in the weight ratio
    fallback_frames: int = 5        # reuse last good axes across gaps up to this long
    sanity_bound_m: float = 2.0     # displacement beyond this flags the frame suspect

    # freeze detection
    delta_feet_m: float = 0.15
    min_freeze_s: float = 1.0

    # event filters
    min_duration_s: float = 5.0
    trunk_p95_deg: float = 25.0
    arm_ratio: float = 2.0
    weight_dev: float = 0.15

    # statistics and display
    weight_balanced_band: float = 0.05
    weight_strong_band: float = 0.15
    distribution_bins: int = 64
    simplify_scope: str = "selection"
    max_points: int = 2000

    def __post_init__(self):
        for name in ("sanity_bound_m", "delta_feet_m", "min_freeze_s", "min_duration_s",
                     "trunk_p95_deg", "arm_ratio", "weight_dev"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise SchemaError(f"config: {name} must be finite and > 0, got {value!r}")
        if not 0 < self.weight_balanced_band <= self.weight_strong_band <= 0.5:
            raise SchemaError("config: weight bands must satisfy 0 < balanced <= strong <= 0.5")
        if self.fallback_frames < 0:
            raise SchemaError("config: fallback_frames must be >= 0")
        if self.distribution_bins < 1:
            raise SchemaError("config: distribution_bins must be >= 1")
        if self.max_points < 2:
            raise SchemaError("config: max_points must be >= 2")
        if self.simplify_scope not in ("selection", "global"):
            raise SchemaError(
                f'config: simplify_scope must be "selection" or "global", got {self.simplify_scope!r}'
            )

    def replace(self, **overrides) -> "AnalysisConfig":
        """New config with the given fields changed (None values ignored)."""
        changed = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **changed) if changed else self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT_CONFIG = AnalysisConfig()

_FIELD_NAMES = {f.name for f in dataclasses.fields(AnalysisConfig)}


def load_config(path: str | Path) -> AnalysisConfig:
    """Read a JSON threshold file; unknown keys are rejected."""
    try:
        obj = json.loads(Path(path).read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config {path}: not valid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise SchemaError(f"config {path}: top level must be an object")
    unknown = sorted(set(obj) - _FIELD_NAMES)
    if unknown:
        raise SchemaError(f"config {path}: unknown keys {', '.join(unknown)}")
    return AnalysisConfig(**obj)

"""Analytics backend for long-horizon clinical motion-capture review.

Layers: model (files and datasets), kinematics (pelvis-local body
variables), events (actions, freezes, filters), aggregate (binning and
statistics), synthgen (ground-truthed synthetic data), analysis
(dataset orchestration), service (HTTP API), cli (batch entry points).
"""

from .config import DEFAULT_CONFIG, AnalysisConfig, load_config
from .errors import MotionInsightError
from .model import (
    ACTIONS,
    CANONICAL_JOINTS,
    ActionLabel,
    Capture,
    Dataset,
    Event,
    Segment,
    load_dataset,
    parse_capture,
    parse_labels,
    parse_manifest,
    serialize_capture,
    serialize_labels,
    serialize_manifest,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIONS",
    "CANONICAL_JOINTS",
    "ActionLabel",
    "AnalysisConfig",
    "Capture",
    "DEFAULT_CONFIG",
    "Dataset",
    "Event",
    "MotionInsightError",
    "Segment",
    "__version__",
    "load_config",
    "load_dataset",
    "parse_capture",
    "parse_labels",
    "parse_manifest",
    "serialize_capture",
    "serialize_labels",
    "serialize_manifest",
]

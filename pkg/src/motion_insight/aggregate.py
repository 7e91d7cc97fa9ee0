"""Display-oriented reductions: outlier-preserving binning, downsampling,
value distributions, and the per-event / whole-dataset statistics panels.

Everything here is pure and deterministic; rerunning any reduction on the
same inputs yields identical output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, AnalysisConfig
from .errors import EmptyScope, EmptySlice, NoValidFrames
from .events import EventSet
from .kinematics import VARIABLES, BodyVariableSeries
from .model import ACTIONS, Dataset, Event


@dataclass(frozen=True)
class BinnedSeries:
    """Variable-width bins tiling the valid frames of one slice.

    Frames within one standard deviation of the population mean fall in
    mean-class bins, the rest in outlier bins; each bin's value is the
    mean of its frames. Invalid frames separate bins without occupying
    width. Frame indices are absolute when a frame_offset was supplied.
    """

    variable: str
    mu: float
    sigma: float
    starts: np.ndarray
    ends: np.ndarray
    values: np.ndarray
    is_outlier: np.ndarray

    def __len__(self) -> int:
        return self.starts.shape[0]

    @property
    def widths(self) -> np.ndarray:
        return self.ends - self.starts


def simplify(
    values: np.ndarray,
    valid: np.ndarray,
    population: np.ndarray | None = None,
    variable: str = "",
    frame_offset: int = 0,
) -> BinnedSeries:
    """Collapse a slice into maximal same-class runs.

    population supplies the values from which mu and sigma are taken
    (e.g. all frames of the selected events of one action); it defaults
    to the valid values of the slice itself.
    """
    values = np.asarray(values, dtype=np.float64)
    valid = np.asarray(valid, dtype=bool)
    if values.shape[0] == 0:
        raise EmptySlice("cannot simplify an empty slice")
    pop = population if population is not None else values[valid]
    pop = np.asarray(pop, dtype=np.float64)
    pop = pop[np.isfinite(pop)]
    if pop.size == 0:
        raise EmptySlice("no valid frames available to set the binning scale")
    mu = float(np.mean(pop))
    sigma = float(np.std(pop))

    with np.errstate(invalid="ignore"):
        outlier = np.abs(values - mu) > sigma
    # 0 splits runs without forming a bin
    cls = np.where(valid, np.where(outlier, 2, 1), 0).astype(np.int8)
    cuts = np.flatnonzero(np.diff(cls)) + 1
    starts = np.concatenate(([0], cuts))
    ends = np.concatenate((cuts, [values.shape[0]]))
    run_cls = cls[starts]
    keep = run_cls > 0

    starts, ends, run_cls = starts[keep], ends[keep], run_cls[keep]
    if starts.size:
        # invalid frames between kept runs contribute zero to each segment
        # sum, so summing from one kept start to the next is exact
        sums = np.add.reduceat(np.where(valid, values, 0.0), starts)
        means = sums / (ends - starts)
    else:
        means = np.empty(0, dtype=np.float64)

    return BinnedSeries(
        variable=variable,
        mu=mu,
        sigma=sigma,
        starts=starts + frame_offset,
        ends=ends + frame_offset,
        values=means,
        is_outlier=run_cls == 2,
    )


def coarsen_bins(binned: BinnedSeries, max_points: int) -> BinnedSeries:
    """Merge adjacent bins until at most max_points remain.

    Merged values are width-weighted means, so conservation holds; a
    merged bin is an outlier bin when any member was, so outliers stay
    visible at coarse zoom.
    """
    n = len(binned)
    if n <= max_points:
        return binned
    edges = (np.arange(max_points + 1) * n) // max_points
    group_starts = edges[:-1]
    widths = binned.widths.astype(np.float64)
    weighted = np.add.reduceat(widths * binned.values, group_starts)
    total = np.add.reduceat(widths, group_starts)
    any_outlier = np.add.reduceat(binned.is_outlier.astype(np.int64), group_starts) > 0
    return BinnedSeries(
        variable=binned.variable,
        mu=binned.mu,
        sigma=binned.sigma,
        starts=binned.starts[group_starts],
        ends=binned.ends[edges[1:] - 1],
        values=weighted / total,
        is_outlier=any_outlier,
    )


@dataclass(frozen=True)
class DownsampledSeries:
    """Bucketed view of a slice for pixel-bounded rendering.

    Per bucket: representative frame (bucket start), mean over valid
    frames, and the bucket min/max so extremes survive reduction.
    """

    frames: np.ndarray
    values: np.ndarray
    mins: np.ndarray
    maxs: np.ndarray


def downsample(
    values: np.ndarray,
    valid: np.ndarray,
    max_points: int,
    frame_offset: int = 0,
) -> DownsampledSeries:
    """Reduce a slice to at most max_points buckets (valid frames only)."""
    values = np.asarray(values, dtype=np.float64)
    valid = np.asarray(valid, dtype=bool)
    n = values.shape[0]
    if int(valid.sum()) <= max_points:
        frames = np.flatnonzero(valid) + frame_offset
        picked = values[valid]
        return DownsampledSeries(frames=frames, values=picked,
                                 mins=picked.copy(), maxs=picked.copy())
    edges = (np.arange(max_points + 1, dtype=np.int64) * n) // max_points
    starts = edges[:-1]
    counts = np.add.reduceat(valid.astype(np.int64), starts)
    sums = np.add.reduceat(np.where(valid, values, 0.0), starts)
    mins = np.minimum.reduceat(np.where(valid, values, np.inf), starts)
    maxs = np.maximum.reduceat(np.where(valid, values, -np.inf), starts)
    keep = counts > 0
    with np.errstate(invalid="ignore"):
        means = sums[keep] / counts[keep]
    return DownsampledSeries(
        frames=starts[keep] + frame_offset,
        values=means,
        mins=mins[keep],
        maxs=maxs[keep],
    )


@dataclass(frozen=True)
class Distribution:
    """Histogram of one variable over a scope, on a shared range when paired."""

    variable: str
    edges: np.ndarray
    counts: np.ndarray
    paired: bool = False


def robust_range(population: np.ndarray, lo_pct: float = 0.5, hi_pct: float = 99.5):
    """Percentile range for histogram edges; degenerate ranges get padded."""
    lo, hi = np.percentile(population, [lo_pct, hi_pct])
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return float(lo), float(hi)


def distribution(
    variable: str,
    values: np.ndarray,
    valid: np.ndarray | None = None,
    bins: int = DEFAULT_CONFIG.distribution_bins,
    value_range: tuple[float, float] | None = None,
    paired: bool = False,
) -> Distribution:
    """Histogram the valid values of a scope into uniform bins.

    value_range overrides the robust range, letting left/right variable
    pairs share edges computed from their combined population.
    """
    values = np.asarray(values, dtype=np.float64)
    picked = values[np.asarray(valid, dtype=bool)] if valid is not None else values
    picked = picked[np.isfinite(picked)]
    if picked.size == 0:
        raise EmptyScope(f"no valid frames in scope for {variable or 'variable'}")
    lo, hi = value_range if value_range is not None else robust_range(picked)
    counts, edges = np.histogram(picked, bins=bins, range=(lo, hi))
    return Distribution(variable=variable, edges=edges, counts=counts, paired=paired)


@dataclass(frozen=True)
class EventStats:
    """Detail-panel numbers for one event."""

    duration_s: float
    weight_mean_l: float
    weight_text: str
    variables: dict[str, dict[str, float]]


def weight_text_label(mean_l: float, config: AnalysisConfig = DEFAULT_CONFIG) -> str:
    dev = mean_l - 0.5
    if abs(dev) <= config.weight_balanced_band:
        return "balanced"
    side = "left" if dev > 0 else "right"
    strength = "slight" if abs(dev) <= config.weight_strong_band else "strong"
    return f"{strength}_{side}"


def event_stats(
    event: Event,
    series: BodyVariableSeries,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> EventStats:
    """Duration, weight-shift text, and per-variable min/mean/max."""
    lo, hi = event.start_frame, event.end_frame
    valid = series.valid[lo:hi]
    if not valid.any():
        raise NoValidFrames(f"event {event.id} has no valid frames")
    variables = {}
    for name in VARIABLES:
        picked = series.values(name)[lo:hi][valid]
        variables[name] = {
            "min": float(np.min(picked)),
            "mean": float(np.mean(picked)),
            "max": float(np.max(picked)),
        }
    mean_l = variables["weight_l"]["mean"]
    return EventStats(
        duration_s=event.duration_s,
        weight_mean_l=mean_l,
        weight_text=weight_text_label(mean_l, config),
        variables=variables,
    )


@dataclass(frozen=True)
class GlobalStats:
    """Whole-dataset summary: sitting share, per-action totals, span."""

    percent_sitting: float
    action_totals_s: dict[str, float]
    span_s: float
    total_frames: int


def global_stats(dataset: Dataset, event_set: EventSet) -> GlobalStats:
    total_frames = dataset.total_frames
    totals = {action: 0.0 for action in ACTIONS}
    sitting_frames = 0
    for event in event_set:
        totals[event.action] += event.duration_s
        if event.action == "sitting":
            sitting_frames += event.n_frames
    return GlobalStats(
        percent_sitting=(sitting_frames / total_frames) if total_frames else 0.0,
        action_totals_s=totals,
        span_s=dataset.span_s,
        total_frames=total_frames,
    )

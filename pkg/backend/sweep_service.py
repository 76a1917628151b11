"""
Sweep service: parameter sweeps, sudden-change detection and
table output.
"""

import json
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence

import pandas as pd

from agents import SweepAgent
from config import Settings, get_settings
from measure_service import measure_all
from models.params import ModelParams
from models.results import Measure, MeasureResult, Method
from models.sweep import MEASURE_COLUMNS, OUTPUT_COLUMNS, SuddenChangePoint, SweepRow, SweepSpec
from utils.directory_utils import ensure_parent_directory

logger = logging.getLogger(__name__)

BISECTION_STEPS = 8
_FLAT = 1e-12

PRESETS = {
    "dm": dict(vary="D", start=0.0, stop=6.0, steps=601, fixed=ModelParams(J=1.0, T=0.5),
            family_param="B", family_values=[0.0, 0.5, 1.0, 1.5, 2.0, 3.0]),
    "field": dict(vary="B", start=0.0, stop=6.0, steps=601, fixed=ModelParams(J=1.0, T=0.5),
            family_param="D", family_values=[0.0, 0.5, 1.0, 1.5, 2.0, 3.0]),
    "field-hot": dict(vary="B", start=0.0, stop=6.0, steps=601, fixed=ModelParams(J=1.0, T=1.5),
            family_param="D", family_values=[0.0, 0.5, 1.0, 1.5, 2.0, 3.0]),
    "temperature": dict(vary="T", start=0.01, stop=5.0, steps=500, fixed=ModelParams(J=1.0, B=1.5),
            family_param="D", family_values=[0.0, 0.5, math.sqrt(5.0) / 2.0, 1.5, 2.0, 3.0]),
}


def preset_spec(name: str, **overrides) -> SweepSpec:
    """SweepSpec of a named preset, with field overrides (e.g. steps, measures)."""
    if name not in PRESETS:
        raise KeyError(f"Unknown preset '{name}', expected one of {sorted(PRESETS)}")
    fields = {**PRESETS[name], **{k: v for k, v in overrides.items() if v is not None}}
    return SweepSpec(**fields)


def method_label(results: Dict[Measure, MeasureResult]) -> str:
    """Single method tag when all measures agree, otherwise measure=method pairs joined by ';'."""
    labels = {measure: result.method_label for measure, result in results.items()}
    if len(set(labels.values())) == 1:
        return next(iter(labels.values()))
    return ";".join(f"{measure.value}={label}" for measure, label in labels.items())


def evaluate_point(
    params: ModelParams,
    measures: Sequence[Measure],
    method: Optional[Method] = None,
    paper_verbatim: bool = False,
    settings: Optional[Settings] = None,
) -> SweepRow:
    """One output row for one model point."""
    results = measure_all(params, measures, method, paper_verbatim, settings)
    values = {MEASURE_COLUMNS[measure]: result.value for measure, result in results.items()}
    return SweepRow(
        **params.to_dict(),
        **values,
        method=method_label(results),
        branches={measure.value: result.branch for measure, result in results.items()},
    )


def run_sweep(spec: SweepSpec, settings: Optional[Settings] = None) -> List[SweepRow]:
    """
    Evaluate every grid point of ``spec``.

    Rows come back ordered by family, then by the swept parameter,
    whatever order the workers finish in.
    """
    settings = settings or get_settings()
    points = spec.points()
    logger.info(
        f"Sweep over {spec.vary} in [{spec.start}, {spec.stop}] ({spec.steps} steps, "
        f"{len(spec.families())} series, {len(points)} points)"
    )

    def task(params: ModelParams) -> SweepRow:
        return evaluate_point(params, spec.measures, spec.method, spec.paper_verbatim, settings)

    with SweepAgent(max_workers=settings.sweep_workers, progress=settings.sweep_progress) as agent:
        rows = agent.map(task, points, description=f"sweep {spec.vary}")

    logger.info(f"Sweep finished: {len(rows)} rows")
    return rows


# --- sudden changes -------------------------------------------------------


def _vertex(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Abscissa of the parabola through three points; the middle point if they are collinear."""
    (x0, x1, x2), (y0, y1, y2) = xs, ys
    denominator = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denominator
    b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denominator
    if abs(a) < _FLAT:
        return x1
    return min(max(-b / (2.0 * a), x0), x2)


def detect_sudden_change(
    xs: Sequence[float],
    values: Sequence[float],
    tags: Optional[Sequence[str]] = None,
    classify: Optional[Callable[[float], str]] = None,
    series: str = "",
) -> List[SuddenChangePoint]:
    """
    Locate branch switches and the turning points that follow them.

    A tag change between neighbours is an argmax switch, bisected
    BISECTION_STEPS times with ``classify`` (x -> tag) when one is given and
    reported at the interval midpoint as a non-smooth kink otherwise. After
    the first switch, interior local extrema whose two neighbours carry the
    same tag are reported as turning points at the parabolic vertex.
    Untagged series have a single analytic branch and yield nothing.
    """
    if not tags or not any(tags):
        return []

    points: List[SuddenChangePoint] = []
    switch_indices = [i for i in range(len(xs) - 1) if tags[i] != tags[i + 1]]

    for i in switch_indices:
        lo, hi = float(xs[i]), float(xs[i + 1])
        if classify is None:
            points.append(SuddenChangePoint(location=0.5 * (lo + hi), kind="non-smooth-kink", series=series))
            continue
        left_tag = tags[i]
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            if classify(mid) == left_tag:
                lo = mid
            else:
                hi = mid
        points.append(SuddenChangePoint(location=0.5 * (lo + hi), kind="argmax-switch", series=series))

    if switch_indices:
        for i in range(switch_indices[0] + 1, len(xs) - 1):
            if not tags[i - 1] == tags[i] == tags[i + 1]:
                continue
            left, middle, right = values[i - 1], values[i], values[i + 1]
            is_min = middle < left - _FLAT and middle < right - _FLAT
            is_max = middle > left + _FLAT and middle > right + _FLAT
            if is_min or is_max:
                location = _vertex(xs[i - 1:i + 2], values[i - 1:i + 2])
                points.append(SuddenChangePoint(location=location, kind="turning-point", series=series, value=middle))

    points.sort(key=lambda point: point.location)
    if points:
        logger.info(f"Detected {len(points)} sudden-change points in {series or 'series'}")
    return points


def branch_classifier(
    base: ModelParams,
    vary: str,
    measure: Measure,
    method: Optional[Method] = None,
    settings: Optional[Settings] = None,
) -> Callable[[float], str]:
    """x -> branch tag of ``measure`` at ``base`` with ``vary`` set to x."""

    def classify(x: float) -> str:
        results = measure_all(base.replace(**{vary: x}), [measure], method, settings=settings)
        return results[measure].branch

    return classify


def detect_for_sweep(
    spec: SweepSpec, rows: List[SweepRow], settings: Optional[Settings] = None
) -> List[SuddenChangePoint]:
    """Sudden-change points of every measure series in a finished sweep."""
    detected = []
    for family_index, family_value in enumerate(spec.families()):
        chunk = rows[family_index * spec.steps:(family_index + 1) * spec.steps]
        base = spec.fixed
        label = ""
        if family_value is not None:
            base = base.replace(**{spec.family_param: family_value})
            label = f"[{spec.family_param}={family_value:g}]"
        xs = [getattr(row, spec.vary) for row in chunk]
        for measure in spec.measures:
            column = MEASURE_COLUMNS[measure]
            tags = [row.branches.get(measure.value, "") for row in chunk]
            classify = branch_classifier(base, spec.vary, measure, spec.method, settings)
            detected.extend(detect_sudden_change(
                xs, [getattr(row, column) for row in chunk], tags, classify, series=f"{column}{label}"
            ))
    return detected


# --- output ---------------------------------------------------------------


def rows_to_frame(rows: List[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.to_record() for row in rows], columns=OUTPUT_COLUMNS)


def _round_significant(value, digits: int):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    if isinstance(value, float):
        return float(f"{value:.{digits}g}")
    return value


def format_table(rows: List[SweepRow], fmt: str = "csv", settings: Optional[Settings] = None) -> str:
    """
    Render rows as CSV (header J,B,D,T,Q_T,Q_H,Q_B,method, empty cells for
    unrequested measures) or as a JSON array of objects with the same keys.
    """
    settings = settings or get_settings()
    digits = settings.float_digits
    frame = rows_to_frame(rows)
    if fmt == "csv":
        return frame.to_csv(index=False, float_format=f"%.{digits}g", na_rep="", lineterminator="\n")
    if fmt == "json":
        records = [
            {key: _round_significant(value, digits) for key, value in row.to_record().items()}
            for row in rows
        ]
        return json.dumps(records, indent=2) + "\n"
    raise ValueError(f"Unknown output format '{fmt}'")


def write_table(
    rows: List[SweepRow], path: Optional[str], fmt: str = "csv", settings: Optional[Settings] = None
) -> str:
    """Render the table and write it to ``path`` (nothing is written when path is None)."""
    text = format_table(rows, fmt, settings)
    if path:
        target = ensure_parent_directory(path)
        with open(target, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info(f"Wrote {len(rows)} rows to {target}")
    return text


def read_table(path: str) -> pd.DataFrame:
    """Load a CSV written by write_table."""
    return pd.read_csv(path, keep_default_na=True, float_precision="round_trip")

"""Listener-rating analysis: Fleiss' kappa, intended-vs-perceived confusion, UAR.

Ratings arrive as one CSV row per (stimulus, rater) with a three-level ordinal
judgment per dimension. Every individual rating counts; no majority vote or
label fusion happens anywhere.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DataError, KappaUndefinedError, UsageError
from .experiment import ManifestRow
from .rules import METHODS

AROUSAL_CLASSES = ("low", "mid", "high")
VALENCE_CLASSES = ("negative", "neutral", "positive")
DIMENSIONS = ("arousal", "valence")

RATINGS_COLUMNS = ("sample_id", "rater_id", "arousal_rating", "valence_rating")

POOLED_LABEL = "all"

_CLASS_ORDER = {"arousal": AROUSAL_CLASSES, "valence": VALENCE_CLASSES}
_LEVEL_INDEX = {0.1: 0, 0.5: 1, 0.9: 2}


def classes_for(dimension: str) -> tuple[str, str, str]:
    try:
        return _CLASS_ORDER[dimension]
    except KeyError:
        raise UsageError(f"unknown dimension {dimension!r}; expected one of {DIMENSIONS}") from None


def level_to_class(level: float, dimension: str) -> str:
    """Intended ordinal class of a stimulus level: 0.1 -> low/negative, 0.5 -> mid/neutral, 0.9 -> high/positive."""
    classes = classes_for(dimension)
    index = _LEVEL_INDEX.get(level)
    if index is None:
        raise UsageError(f"level {level!r} is not one of {sorted(_LEVEL_INDEX)}")
    return classes[index]


@dataclass(frozen=True)
class RatingRecord:
    """One listener's judgment of one stimulus on both dimensions."""

    sample_id: str
    rater_id: str
    arousal_rating: str
    valence_rating: str


def read_ratings(path: str | Path) -> list[RatingRecord]:
    """Read and validate a ratings CSV."""
    file = Path(path)
    if not file.is_file():
        raise UsageError(f"ratings file not found: {file}")
    records = []
    seen = set()
    with open(file, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{file}: empty ratings file") from None
        if tuple(header) != RATINGS_COLUMNS:
            raise DataError(f"{file}: bad header {header!r}; expected {list(RATINGS_COLUMNS)}")
        for record in reader:
            lineno = reader.line_num
            if len(record) != len(RATINGS_COLUMNS):
                raise DataError(f"{file}:{lineno}: expected {len(RATINGS_COLUMNS)} fields, got {len(record)}")
            sample_id, rater_id, arousal_rating, valence_rating = record
            if arousal_rating not in AROUSAL_CLASSES:
                raise DataError(f"{file}:{lineno}: arousal rating {arousal_rating!r} not in {AROUSAL_CLASSES}")
            if valence_rating not in VALENCE_CLASSES:
                raise DataError(f"{file}:{lineno}: valence rating {valence_rating!r} not in {VALENCE_CLASSES}")
            key = (sample_id, rater_id)
            if key in seen:
                raise DataError(f"{file}:{lineno}: duplicate rating for {key}")
            seen.add(key)
            records.append(RatingRecord(sample_id, rater_id, arousal_rating, valence_rating))
    return records


def write_ratings(records: Iterable[RatingRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RATINGS_COLUMNS)
        for record in records:
            writer.writerow([record.sample_id, record.rater_id, record.arousal_rating, record.valence_rating])


@dataclass
class ConfusionMatrix:
    """Square count table, rows = intended class, columns = perceived class."""

    classes: tuple[str, ...]
    counts: list[list[int]]

    @classmethod
    def empty(cls, classes: Sequence[str]) -> "ConfusionMatrix":
        size = len(classes)
        return cls(tuple(classes), [[0] * size for _ in range(size)])

    def add(self, intended: str, perceived: str) -> None:
        self.counts[self.classes.index(intended)][self.classes.index(perceived)] += 1

    def total(self) -> int:
        return sum(sum(row) for row in self.counts)


def fleiss_kappa(item_category_counts: Sequence[Sequence[int]], item_labels: Sequence[str] | None = None) -> float:
    """Fleiss' kappa over a table of per-item category counts.

              P_bar - P_e
    kappa = --------------
               1 - P_e

    where the per-item agreement P_i = (sum_j n_ij^2 - n) / (n (n - 1)) for n
    ratings per item, P_bar is the mean P_i, and the chance agreement
    P_e = sum_j p_j^2 uses marginal category proportions p_j over all ratings.

    Every item must carry the same number of ratings n >= 2. When all ratings
    fall into a single category P_e is 1 and kappa is undefined, which raises
    KappaUndefinedError rather than returning a misleading number.
    """
    table = [list(row) for row in item_category_counts]
    if not table:
        raise UsageError("kappa needs at least one item")
    category_count = len(table[0])
    if category_count < 2:
        raise UsageError(f"kappa needs at least 2 categories, got {category_count}")
    labels = list(item_labels) if item_labels is not None else [str(i) for i in range(len(table))]
    if len(labels) != len(table):
        raise UsageError(f"{len(labels)} item labels for {len(table)} items")

    for label, row in zip(labels, table):
        if len(row) != category_count:
            raise DataError(f"item {label}: {len(row)} categories, expected {category_count}")
        if any(count < 0 for count in row):
            raise DataError(f"item {label}: negative count in {row}")
    raters = sum(table[0])
    uneven = [label for label, row in zip(labels, table) if sum(row) != raters]
    if uneven:
        raise DataError(
            f"every item needs the same rater count ({raters} on the first item); "
            f"items with a different count: {', '.join(uneven)}"
        )
    if raters < 2:
        raise UsageError(f"kappa needs at least 2 ratings per item, got {raters}")

    items = len(table)
    per_item_agreement = [(sum(count * count for count in row) - raters) / (raters * (raters - 1)) for row in table]
    observed = sum(per_item_agreement) / items
    marginals = [sum(row[j] for row in table) / (items * raters) for j in range(category_count)]
    expected = sum(p * p for p in marginals)
    if 1.0 - expected == 0.0:
        raise KappaUndefinedError("all ratings fall into a single category; kappa is undefined")
    return (observed - expected) / (1.0 - expected)


def confusion_from_ratings(
    ratings: Iterable[RatingRecord],
    manifest_rows: Sequence[ManifestRow],
    dimension: str,
    method: str | None = None,
    drop_unknown: bool = False,
) -> ConfusionMatrix:
    """Count every individual rating at (intended, perceived) for one dimension.

    The intended class comes from the stimulus level via the manifest join; a
    rating whose sample_id is missing from the manifest is an error unless
    ``drop_unknown`` is set (then it is silently ignored, which is how
    practice/acquaintance stimuli outside the manifest drop out).
    """
    classes = classes_for(dimension)
    specs = {row.spec.sample_id: row.spec for row in manifest_rows}
    matrix = ConfusionMatrix.empty(classes)
    for rating in ratings:
        spec = specs.get(rating.sample_id)
        if spec is None:
            if drop_unknown:
                continue
            raise DataError(f"rating references sample_id {rating.sample_id!r} not present in the manifest")
        if method is not None and spec.method != method:
            continue
        level = spec.arousal_level if dimension == "arousal" else spec.valence_level
        perceived = rating.arousal_rating if dimension == "arousal" else rating.valence_rating
        if perceived not in classes:
            raise DataError(f"rating for {rating.sample_id!r} has malformed class {perceived!r}")
        matrix.add(level_to_class(level, dimension), perceived)
    return matrix


def uar(matrix: ConfusionMatrix) -> float:
    """Unweighted average recall: mean over intended classes of diagonal / row sum."""
    recalls = []
    for index, row in enumerate(matrix.counts):
        row_sum = sum(row)
        if row_sum == 0:
            raise DataError(f"intended class {matrix.classes[index]!r} has no ratings; UAR is undefined")
        recalls.append(row[index] / row_sum)
    return sum(recalls) / len(recalls)


def _kappa_table(
    ratings: Sequence[RatingRecord],
    manifest_rows: Sequence[ManifestRow],
    dimension: str,
    method: str | None,
) -> tuple[list[list[int]], list[str]]:
    classes = classes_for(dimension)
    rows = [row for row in manifest_rows if method is None or row.spec.method == method]
    counts = {row.spec.sample_id: [0] * len(classes) for row in rows}
    for rating in ratings:
        item = counts.get(rating.sample_id)
        if item is None:
            continue
        perceived = rating.arousal_rating if dimension == "arousal" else rating.valence_rating
        item[classes.index(perceived)] += 1
    labels = [row.spec.sample_id for row in rows]
    return [counts[label] for label in labels], labels


def evaluate(
    ratings: Sequence[RatingRecord],
    manifest_rows: Sequence[ManifestRow],
    drop_unknown: bool = False,
) -> dict:
    """Compute the full report: kappa per method and pooled, UAR and confusion per method.

    Returns a JSON-ready dict; kappa cells are null when undefined (never
    reported as 0), with the reason listed under ``undefined``.
    """
    if not manifest_rows:
        raise DataError("empty manifest")
    known = {row.spec.sample_id for row in manifest_rows}
    orphans = sorted({r.sample_id for r in ratings if r.sample_id not in known})
    if orphans and not drop_unknown:
        raise DataError(f"ratings reference sample_ids not present in the manifest: {', '.join(orphans)}")
    joined = [r for r in ratings if r.sample_id in known]

    kappa_section: dict[str, dict[str, float | None]] = {}
    undefined: list[dict[str, str]] = []
    for method in (*METHODS, None):
        row_label = method if method is not None else POOLED_LABEL
        cells: dict[str, float | None] = {}
        for dimension in DIMENSIONS:
            table, labels = _kappa_table(joined, manifest_rows, dimension, method)
            try:
                cells[dimension] = fleiss_kappa(table, labels)
            except KappaUndefinedError as exc:
                cells[dimension] = None
                undefined.append({"statistic": "fleiss_kappa", "method": row_label, "dimension": dimension, "reason": str(exc)})
        kappa_section[row_label] = cells

    uar_section: dict[str, dict[str, float]] = {}
    confusion_section: dict[str, dict[str, dict]] = {}
    for method in METHODS:
        uar_section[method] = {}
        confusion_section[method] = {}
        for dimension in DIMENSIONS:
            matrix = confusion_from_ratings(joined, manifest_rows, dimension, method=method)
            uar_section[method][dimension] = uar(matrix)
            confusion_section[method][dimension] = {"classes": list(matrix.classes), "counts": matrix.counts}

    return {
        "counts": {
            "stimuli": len(manifest_rows),
            "raters": len({r.rater_id for r in joined}),
            "ratings": len(joined),
            "dropped_unknown": len(ratings) - len(joined),
        },
        "fleiss_kappa": kappa_section,
        "uar": uar_section,
        "confusion": confusion_section,
        "undefined": undefined,
    }


def _format_cell(value: float | None) -> str:
    return "undef." if value is None else f"{value:.3f}"


def render_report_text(report: Mapping) -> str:
    """Human-readable tables: agreement, UAR, and the four confusion matrices."""
    lines = []
    width = 12

    lines.append(f"{'Fleiss kappa':<{width}}{'Arousal':>10}{'Valence':>10}")
    for method in (*METHODS, POOLED_LABEL):
        row = report["fleiss_kappa"][method]
        label = method.capitalize() if method != POOLED_LABEL else "All"
        lines.append(f"{label:<{width}}{_format_cell(row['arousal']):>10}{_format_cell(row['valence']):>10}")
    lines.append("")

    lines.append(f"{'UAR':<{width}}{'Arousal':>10}{'Valence':>10}")
    for method in METHODS:
        row = report["uar"][method]
        lines.append(f"{method.capitalize():<{width}}{_format_cell(row['arousal']):>10}{_format_cell(row['valence']):>10}")
    lines.append("")

    for dimension in DIMENSIONS:
        for method in METHODS:
            cell = report["confusion"][method][dimension]
            lines.append(f"Confusion {dimension} / {method.capitalize()} (rows intended, columns perceived)")
            header = "".join(f"{c:>10}" for c in cell["classes"])
            lines.append(f"{'':<{width}}{header}")
            for class_name, counts in zip(cell["classes"], cell["counts"]):
                values = "".join(f"{count:>10}" for count in counts)
                lines.append(f"{class_name:<{width}}{values}")
            lines.append("")

    if report["undefined"]:
        lines.append("Undefined statistics:")
        for entry in report["undefined"]:
            lines.append(f"  {entry['statistic']} {entry['method']}/{entry['dimension']}: {entry['reason']}")
        lines.append("")
    return "\n".join(lines)


def write_report(report: Mapping, out_dir: str | Path) -> tuple[Path, Path]:
    """Write report.json (full precision) and report.txt; returns both paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / "report.json"
    text_path = out / "report.txt"
    json_path.write_bytes((json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode("utf-8"))
    text_path.write_bytes(render_report_text(report).encode("utf-8"))
    return json_path, text_path

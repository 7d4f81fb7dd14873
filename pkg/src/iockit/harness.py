"""Majority-vote accuracy comparison of indicator-extraction tools.

For every document and every indicator reported by at least one tool, the
tools that support the indicator's type are split into a found set and a
missed set. The larger set is assumed correct: the found tools earn TPs
and the missed tools FNs when found outnumbers missed, FPs and TNs when
missed outnumbers found. Exact ties are skipped. A tool that crashed on a
document contributes an empty found set and therefore lands in the missed
set for every indicator of the types it supports.
"""
from __future__ import annotations

import csv
import io
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import DuplicateOutputError, UnknownToolError
from .types import Indicator, IndicatorType


@dataclass(frozen=True)
class ToolProfile:
    """A tool's name and the set of indicator types it can extract."""

    name: str
    supported_types: frozenset[IndicatorType]

    def supports(self, type: IndicatorType) -> bool:
        return type in self.supported_types


@dataclass(frozen=True)
class ToolOutput:
    """Deduplicated, normalized indicators one tool extracted from one doc.

    ``error=True`` marks a crash: the tool produced no usable output for
    the document and is treated exactly like an empty extraction.
    """

    tool: str
    doc_id: str
    indicators: frozenset[Indicator] = frozenset()
    error: bool = False


@dataclass
class Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def add(self, other: "Counts") -> None:
        self.tp += other.tp
        self.fp += other.fp
        self.fn += other.fn
        self.tn += other.tn


@dataclass
class AccuracyCounters:
    """Per (tool, type) tallies plus the per-type majority-positive counts
    (the "Count" column of the per-type report)."""

    cells: dict[tuple[str, IndicatorType], Counts] = field(
        default_factory=lambda: defaultdict(Counts)
    )
    positives: Counter = field(default_factory=Counter)

    def cell(self, tool: str, type: IndicatorType) -> Counts:
        return self.cells[(tool, type)]

    def merge(self, other: "AccuracyCounters") -> None:
        for key, counts in other.cells.items():
            self.cells[key].add(counts)
        self.positives += other.positives

    def total_increments(self) -> int:
        return sum(c.tp + c.fp + c.fn + c.tn for c in self.cells.values())


def compare(
    profiles: Sequence[ToolProfile],
    outputs: Sequence[ToolOutput],
    docs: Sequence[str],
) -> AccuracyCounters:
    """Run the majority vote over every (document, indicator) pair.

    Outputs must already be normalized. A missing (tool, doc) output means
    the tool found nothing there; outputs for documents absent from
    ``docs`` are ignored. The result is independent of the order of
    ``docs`` and ``outputs``.
    """
    by_name = {p.name: p for p in profiles}
    if len(by_name) != len(profiles):
        raise ValueError("duplicate tool profile names")
    per_doc: dict[str, dict[str, frozenset[Indicator]]] = defaultdict(dict)
    for output in outputs:
        if output.tool not in by_name:
            raise UnknownToolError(f"no profile for tool {output.tool!r}")
        doc_outputs = per_doc[output.doc_id]
        if output.tool in doc_outputs:
            raise DuplicateOutputError(output.tool, output.doc_id)
        doc_outputs[output.tool] = frozenset() if output.error else output.indicators

    supported_by_type: dict[IndicatorType, frozenset[str]] = {
        t: frozenset(p.name for p in profiles if p.supports(t)) for t in IndicatorType
    }

    counters = AccuracyCounters()
    for doc_id in docs:
        doc_outputs = per_doc.get(doc_id, {})
        found_by: dict[Indicator, set[str]] = defaultdict(set)
        for tool, indicators in doc_outputs.items():
            for indicator in indicators:
                found_by[indicator].add(tool)
        for indicator, found in found_by.items():
            supported = supported_by_type[indicator.type]
            missed = supported - found
            if len(found) > len(missed):
                counters.positives[indicator.type] += 1
                for tool in found:
                    counters.cell(tool, indicator.type).tp += 1
                for tool in missed:
                    counters.cell(tool, indicator.type).fn += 1
            elif len(missed) > len(found):
                for tool in found:
                    counters.cell(tool, indicator.type).fp += 1
                for tool in missed:
                    counters.cell(tool, indicator.type).tn += 1
            # equal sizes: no majority, skip
    return counters


def _ratio(numerator: int, denominator: int) -> float | None:
    if denominator == 0:
        return None
    return numerator / denominator


def _cell_metrics(counts: Counts) -> dict:
    precision = _ratio(counts.tp, counts.tp + counts.fp)
    recall = _ratio(counts.tp, counts.tp + counts.fn)
    if precision is None or recall is None:
        f1 = None
    elif precision + recall == 0:
        f1 = 0.0
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return {
        "tp": counts.tp,
        "fp": counts.fp,
        "fn": counts.fn,
        "tn": counts.tn,
        "precision": precision,
        "recall": recall,
        "f1": f1,
    }


def metrics(
    counters: AccuracyCounters,
    profiles: Sequence[ToolProfile] | None = None,
) -> dict[str, dict]:
    """Per (tool, type) and per-tool overall precision/recall/F1.

    Cells with an undefined ratio report None. The overall row sums the
    tool's counters over the types it supports (all recorded types when no
    profiles are given).
    """
    supported: Mapping[str, frozenset[IndicatorType]] = {}
    if profiles is not None:
        supported = {p.name: p.supported_types for p in profiles}
    tools = sorted({tool for tool, _ in counters.cells} | set(supported))
    report: dict[str, dict] = {}
    for tool in tools:
        per_type = {}
        overall = Counts()
        for (cell_tool, ind_type), counts in counters.cells.items():
            if cell_tool != tool:
                continue
            per_type[ind_type.value] = _cell_metrics(counts)
            if tool not in supported or ind_type in supported[tool]:
                overall.add(counts)
        report[tool] = {
            "types": dict(sorted(per_type.items())),
            "overall": _cell_metrics(overall),
        }
    return report


def build_report(
    counters: AccuracyCounters,
    profiles: Sequence[ToolProfile],
    min_tool_support: int = 1,
) -> dict:
    """JSON-ready report keyed by tool, with per-type and overall cells.

    ``min_tool_support`` drops indicator types supported by fewer tools
    from the report; at 2, single-tool types (where a majority vote is
    meaningless) disappear.
    """
    support_count = {
        t: sum(1 for p in profiles if p.supports(t)) for t in IndicatorType
    }
    visible = {t for t, n in support_count.items() if n >= min_tool_support}
    filtered = AccuracyCounters()
    for (tool, ind_type), counts in counters.cells.items():
        if ind_type in visible:
            filtered.cells[(tool, ind_type)].add(counts)
    for ind_type, count in counters.positives.items():
        if ind_type in visible:
            filtered.positives[ind_type] = count
    report = metrics(filtered, profiles)
    return {
        "tools": report,
        "type_counts": {
            t.value: filtered.positives.get(t, 0)
            for t in sorted(visible, key=lambda t: t.value)
        },
    }


def render_csv(report: dict) -> str:
    """CSV table mirroring the per-type comparison layout: one row per
    indicator type plus an overall row, P/R/F1 columns per tool."""
    tools = sorted(report["tools"])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["indicator", "count"]
    for tool in tools:
        header += [f"{tool}_precision", f"{tool}_recall", f"{tool}_f1"]
    writer.writerow(header)

    def fmt(value: float | None) -> str:
        return "-" if value is None else f"{value:.2f}"

    for type_name, count in report["type_counts"].items():
        row = [type_name, count]
        for tool in tools:
            cell = report["tools"][tool]["types"].get(type_name)
            if cell is None:
                row += ["-", "-", "-"]
            else:
                row += [fmt(cell["precision"]), fmt(cell["recall"]), fmt(cell["f1"])]
        writer.writerow(row)
    row = ["ALL", sum(report["type_counts"].values())]
    for tool in tools:
        overall = report["tools"][tool]["overall"]
        row += [fmt(overall["precision"]), fmt(overall["recall"]), fmt(overall["f1"])]
    writer.writerow(row)
    return buf.getvalue()


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)

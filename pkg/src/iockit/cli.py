"""Command-line front end: extract indicators from a corpus, build and
apply the dynamic-blocklist filter, and compare tool outputs.

Data goes to stdout (or --out) as JSON lines; diagnostics go to stderr.
Exit codes: 0 success, 1 per-document errors (processing continued),
2 unusable inputs.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import corpus, filtering, harness
from .errors import IockitError, UnknownTypeError
from .extractor import Extractor, default_catalog_path, default_tld_path, load_catalog
from .normalize import normalize
from .types import Indicator, normalize_type_name

_DEFAULT_TRANCO = "tranco_snapshot.csv"


def _err(message: str) -> None:
    print(f"iockit: {message}", file=sys.stderr)


def _open_out(path: str | None):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _document_text(record: corpus.DocumentRecord) -> str:
    text = record.read_text()
    if record.format == "html":
        return corpus.extract_text(text)
    return text


def _build_extractor(args) -> Extractor:
    catalog = args.catalog or default_catalog_path()
    tld_file = args.tld_file or default_tld_path()
    extractor = load_catalog(catalog, tld_file)
    if args.types:
        wanted = [normalize_type_name(name) for name in args.types.split(",")]
        extractor = extractor.restrict(wanted)
    return extractor


def _extract_lines(extractor: Extractor, record: corpus.DocumentRecord, raw: bool) -> list[str]:
    text = _document_text(record)
    lines = []
    if raw:
        for m in extractor.extract_raw(text):
            lines.append(
                json.dumps(
                    {
                        "doc_id": record.doc_id,
                        "type": m.type.value,
                        "value": m.rearmed,
                        "start": m.start,
                        "raw": m.raw,
                    }
                )
            )
    else:
        for ind in extractor.extract(text):
            lines.append(
                json.dumps(
                    {"doc_id": record.doc_id, "type": ind.type.value, "value": ind.value}
                )
            )
    return lines


_WORKER_EXTRACTOR: Extractor | None = None
_WORKER_ARGS = None


def _worker_init(catalog, tld_file, types):
    global _WORKER_EXTRACTOR
    ns = argparse.Namespace(catalog=catalog, tld_file=tld_file, types=types)
    _WORKER_EXTRACTOR = _build_extractor(ns)


def _worker_extract(payload):
    record, raw = payload
    return _extract_lines(_WORKER_EXTRACTOR, record, raw)


def cmd_extract(args) -> int:
    try:
        extractor = _build_extractor(args)
        records, errors = corpus.load_manifest(args.manifest, strict=False)
    except (IockitError, OSError) as exc:
        _err(str(exc))
        return 2
    had_doc_error = bool(errors)
    for exc in errors:
        _err(str(exc))

    out, close_out = _open_out(args.out)
    try:
        if args.jobs and args.jobs > 1:
            with ProcessPoolExecutor(
                max_workers=args.jobs,
                initializer=_worker_init,
                initargs=(args.catalog, args.tld_file, args.types),
            ) as pool:
                futures = [
                    (record, pool.submit(_worker_extract, (record, args.raw)))
                    for record in records
                ]
                for record, future in futures:
                    try:
                        lines = future.result()
                    except OSError as exc:
                        _err(f"{record.doc_id}: {exc}")
                        had_doc_error = True
                        continue
                    for line in lines:
                        print(line, file=out)
        else:
            for record in records:
                try:
                    lines = _extract_lines(extractor, record, args.raw)
                except OSError as exc:
                    _err(f"{record.doc_id}: {exc}")
                    had_doc_error = True
                    continue
                for line in lines:
                    print(line, file=out)
    finally:
        if close_out:
            out.close()
    return 1 if had_doc_error else 0


def _read_indicator_lines(path: str):
    """Yield (doc_id, Indicator) pairs from a JSON-lines file, normalizing
    type names and values; unknown types are skipped with a warning."""
    stream = sys.stdin if path in (None, "-") else open(path, encoding="utf-8")
    warned: set[str] = set()
    try:
        for line in stream:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            try:
                ind_type = normalize_type_name(obj["type"])
            except UnknownTypeError:
                if obj["type"] not in warned:
                    warned.add(obj["type"])
                    _err(f"skipping unsupported indicator type {obj['type']!r}")
                continue
            yield obj["doc_id"].lower(), Indicator(ind_type, normalize(ind_type, obj["value"]))
    finally:
        if stream is not sys.stdin:
            stream.close()


def cmd_filter(args) -> int:
    try:
        records = corpus.load_manifest(args.manifest)
        by_doc: dict[str, set[Indicator]] = defaultdict(set)
        known = {record.doc_id for record in records}
        for doc_id, indicator in _read_indicator_lines(args.indicators):
            if doc_id not in known:
                _err(f"indicator references unknown doc {doc_id}; skipped")
                continue
            by_doc[doc_id].add(indicator)

        stats = filtering.CorpusStats()
        for record in records:
            stats.add_document(record.origins, by_doc.get(record.doc_id, set()))
        blocklist = filtering.build_blocklist(
            stats,
            args.tranco,
            min_origin_docs=args.min_origin_docs,
            doc_freq_threshold=args.doc_freq_threshold,
        )
    except (IockitError, OSError, ValueError, KeyError, TypeError) as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return 2

    rule_counts: Counter = Counter()
    totals = Counter()
    ioc_out, close_ioc = _open_out(args.out)
    generic_out, close_generic = _open_out(args.generic_out)
    try:
        for record in records:
            indicators = sorted(by_doc.get(record.doc_id, set()), key=Indicator.sort_key)
            for indicator in indicators:
                rule = filtering.blocking_rule(indicator, blocklist)
                line = json.dumps(
                    {
                        "doc_id": record.doc_id,
                        "type": indicator.type.value,
                        "value": indicator.value,
                    }
                )
                totals["total"] += 1
                if rule is None:
                    totals["iocs"] += 1
                    print(line, file=ioc_out)
                else:
                    totals["generic"] += 1
                    rule_counts[rule] += 1
                    print(line, file=generic_out)
    finally:
        if close_ioc:
            ioc_out.close()
        if close_generic:
            generic_out.close()
    summary = (
        f"total={totals['total']} iocs={totals['iocs']} generic={totals['generic']} "
        + " ".join(f"{name}={rule_counts[name]}" for name in filtering.RULE_NAMES)
    )
    print(summary, file=sys.stderr)
    return 0


def _load_tool_outputs(directory: Path):
    """Read every *.jsonl/*.json file in the directory into ToolOutput
    objects, grouped by (tool, doc). Lines with an "error" field mark a
    tool crash on that document."""
    indicator_sets: dict[tuple[str, str], set[Indicator]] = defaultdict(set)
    errored: set[tuple[str, str]] = set()
    warned: set[str] = set()
    paths = sorted(
        p for p in directory.iterdir() if p.suffix in (".jsonl", ".json") and p.is_file()
    )
    for path in paths:
        for line in path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            tool, doc_id = obj["tool"], obj["doc_id"].lower()
            if obj.get("error"):
                errored.add((tool, doc_id))
                indicator_sets.setdefault((tool, doc_id), set())
                continue
            try:
                ind_type = normalize_type_name(obj["type"])
            except UnknownTypeError:
                if obj["type"] not in warned:
                    warned.add(obj["type"])
                    _err(f"skipping unsupported indicator type {obj['type']!r}")
                continue
            indicator_sets[(tool, doc_id)].add(
                Indicator(ind_type, normalize(ind_type, obj["value"]))
            )
    outputs = [
        harness.ToolOutput(
            tool, doc_id, frozenset(indicators), error=(tool, doc_id) in errored
        )
        for (tool, doc_id), indicators in sorted(indicator_sets.items())
    ]
    return outputs


def _load_profiles(path: str) -> list[harness.ToolProfile]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        harness.ToolProfile(
            name, frozenset(normalize_type_name(t) for t in type_names)
        )
        for name, type_names in data.items()
    ]


def cmd_compare(args) -> int:
    directory = Path(args.outputs_dir)
    try:
        if not directory.is_dir():
            raise IockitError(f"not a directory: {directory}")
        outputs = _load_tool_outputs(directory)
        profiles = _load_profiles(args.profiles)
        tools_seen = {o.tool for o in outputs}
        if len(tools_seen) < 2:
            _err(f"need outputs from at least 2 tools, found {len(tools_seen)}")
            return 2
        missing = tools_seen - {p.name for p in profiles}
        if missing:
            _err(f"profiles missing for tools: {', '.join(sorted(missing))}")
            return 2
        docs = sorted({o.doc_id for o in outputs})
        counters = harness.compare(profiles, outputs, docs)
        report = harness.build_report(
            counters, profiles, min_tool_support=args.min_tool_support
        )
    except (IockitError, OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return 2

    out, close_out = _open_out(args.out)
    try:
        print(harness.report_to_json(report), file=out)
    finally:
        if close_out:
            out.close()
    if args.csv:
        Path(args.csv).write_text(harness.render_csv(report), encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iockit",
        description="Extract, filter, and compare threat-intelligence indicators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="extract indicators from a corpus")
    p_extract.add_argument("--manifest", required=True, help="corpus manifest (TSV)")
    p_extract.add_argument("--catalog", help="pattern catalog file (default: built-in)")
    p_extract.add_argument("--tld-file", help="TLD snapshot file (default: built-in)")
    p_extract.add_argument("--types", help="comma-separated type subset to extract")
    p_extract.add_argument(
        "--raw", action="store_true", help="raw API: include offsets and raw values"
    )
    p_extract.add_argument("--out", help="output file (default: stdout)")
    p_extract.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p_extract.set_defaults(func=cmd_extract)

    p_filter = sub.add_parser("filter", help="split indicators into IOCs and generic")
    p_filter.add_argument(
        "--indicators", default="-", help="JSON-lines indicators (default: stdin)"
    )
    p_filter.add_argument("--manifest", required=True, help="corpus manifest (TSV)")
    p_filter.add_argument("--tranco", required=True, help="popularity snapshot (rank,domain CSV)")
    p_filter.add_argument(
        "--min-origin-docs",
        type=int,
        default=filtering.DEFAULT_MIN_ORIGIN_DOCS,
        help="per-origin document threshold for rule 2 (default: 20)",
    )
    p_filter.add_argument(
        "--doc-freq-threshold",
        type=float,
        default=filtering.DEFAULT_DOC_FREQ_THRESHOLD,
        help="document-frequency threshold for rule 4 (default: 0.90)",
    )
    p_filter.add_argument("--out", help="IOC output file (default: stdout)")
    p_filter.add_argument(
        "--generic-out", default="generic.jsonl", help="generic-indicator output file"
    )
    p_filter.set_defaults(func=cmd_filter)

    p_compare = sub.add_parser("compare", help="majority-vote tool comparison")
    p_compare.add_argument(
        "--outputs-dir", required=True, help="directory of per-tool JSON-lines files"
    )
    p_compare.add_argument(
        "--profiles", required=True, help="JSON file: tool name -> supported types"
    )
    p_compare.add_argument(
        "--min-tool-support",
        type=int,
        default=1,
        help="hide types supported by fewer tools from the report",
    )
    p_compare.add_argument("--out", help="JSON report file (default: stdout)")
    p_compare.add_argument("--csv", help="also write a CSV table to this path")
    p_compare.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Match-and-validate extraction engine with raw and deduplicated APIs."""
from __future__ import annotations

import re
from importlib.resources import files
from pathlib import Path
from typing import Iterable, Sequence

from .defang import DEFAULT_CATALOG, DefangCatalog
from .errors import CatalogParseError, MissingFileError
from .normalize import normalize
from .patterns import PatternEntry, default_entries
from .types import Indicator, IndicatorType, RawMatch
from .validators import DEFAULT_TLDS, load_tlds, validate

#: Types whose matches may pick up trailing prose punctuation that is
#: stripped before rearming (span is shrunk accordingly, never grown).
_TRIMMED_TYPES = frozenset({IndicatorType.URL, IndicatorType.REGKEY})
_TRIM_PLAIN = ".,;:!?'\"`"
_TRIM_CLOSERS = {")": "(", "]": "[", "}": "{", ">": "<"}


def _trim_trailing(raw: str) -> str:
    while raw:
        ch = raw[-1]
        if ch in _TRIM_PLAIN:
            raw = raw[:-1]
        elif ch in _TRIM_CLOSERS and raw.count(_TRIM_CLOSERS[ch]) < raw.count(ch):
            raw = raw[:-1]
        else:
            break
    return raw


class Extractor:
    """Immutable extraction handle; safe to share across workers.

    Holds the compiled pattern catalog, the TLD snapshot used by lookup
    validators, and the defang rule catalog used to rearm matches.
    """

    def __init__(
        self,
        entries: Sequence[PatternEntry],
        tlds: frozenset[str] = DEFAULT_TLDS,
        defang_catalog: DefangCatalog = DEFAULT_CATALOG,
        validation: bool = True,
    ):
        self._entries = tuple(sorted(entries, key=lambda e: e.priority))
        self._compiled = tuple(
            (entry, re.compile(entry.expression)) for entry in self._entries
        )
        self._tlds = frozenset(tlds)
        self._defang = defang_catalog
        self._validation = validation

    @classmethod
    def default(cls, validation: bool = True, defanged: bool = True) -> "Extractor":
        """Built-in catalog over all supported types.

        ``defanged=False`` drops the defang broadening from the patterns
        (the extractor then only sees armed indicators); ``validation=False``
        skips the per-type validation functions.
        """
        return cls(default_entries(defanged=defanged), validation=validation)

    @property
    def types(self) -> frozenset[IndicatorType]:
        return frozenset(entry.type for entry in self._entries)

    @property
    def entries(self) -> tuple[PatternEntry, ...]:
        return self._entries

    @property
    def tlds(self) -> frozenset[str]:
        return self._tlds

    def restrict(self, types: Iterable[IndicatorType]) -> "Extractor":
        """A new handle extracting only the given subset of types."""
        wanted = set(types)
        kept = [e for e in self._entries if e.type in wanted]
        return Extractor(kept, self._tlds, self._defang, self._validation)

    def validate(self, type: IndicatorType, rearmed: str) -> bool:
        return validate(type, rearmed, self._tlds)

    def extract_raw(self, text: str) -> list[RawMatch]:
        """Every validated match, duplicates included, ordered by (start, type).

        Validation runs on the rearmed value. Within one type matches never
        overlap (leftmost-longest wins); across types overlaps are all
        reported, e.g. a URL and the domain embedded in it.
        """
        per_type: dict[IndicatorType, list[RawMatch]] = {}
        for entry, compiled in self._compiled:
            bucket = per_type.setdefault(entry.type, [])
            for m in compiled.finditer(text):
                raw = m.group(0)
                if entry.type in _TRIMMED_TYPES:
                    raw = _trim_trailing(raw)
                    if not raw:
                        continue
                rearmed = self._defang.rearm(raw, entry.type)
                if self._validation and not validate(entry.type, rearmed, self._tlds):
                    continue
                bucket.append(RawMatch(entry.type, m.start(), raw, rearmed))
        results: list[RawMatch] = []
        for matches in per_type.values():
            results.extend(_drop_same_type_overlaps(matches))
        results.sort(key=lambda r: (r.start, r.type.value))
        return results

    def extract(self, text: str) -> list[Indicator]:
        """Deduplicated projection of extract_raw by (type, normalized value),
        ordered by type name then value."""
        seen: set[tuple[IndicatorType, str]] = set()
        out: list[Indicator] = []
        for match in self.extract_raw(text):
            value = normalize(match.type, match.rearmed)
            key = (match.type, value)
            if key not in seen:
                seen.add(key)
                out.append(Indicator(match.type, value))
        out.sort(key=Indicator.sort_key)
        return out


def _drop_same_type_overlaps(matches: list[RawMatch]) -> list[RawMatch]:
    """Keep leftmost-longest matches; needed when one type has several patterns."""
    matches = sorted(matches, key=lambda r: (r.start, -len(r.raw)))
    kept: list[RawMatch] = []
    last_end = -1
    for m in matches:
        if m.start >= last_end:
            kept.append(m)
            last_end = m.end
    return kept


def parse_catalog(text: str) -> list[PatternEntry]:
    """Parse catalog lines ``type<TAB>regex``; '#' comments and blanks allowed."""
    entries: list[PatternEntry] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        type_name, sep, expression = line.partition("\t")
        if not sep or not expression.strip():
            raise CatalogParseError(line_no, f"expected 'type<TAB>regex', got {line!r}")
        try:
            ind_type = IndicatorType(type_name.strip())
        except ValueError:
            raise CatalogParseError(
                line_no, f"unknown indicator type {type_name.strip()!r}"
            ) from None
        try:
            re.compile(expression)
        except re.error as exc:
            raise CatalogParseError(line_no, f"bad regex: {exc}") from None
        entries.append(PatternEntry(ind_type, expression, line_no))
    return entries


def load_catalog(pattern_file: str | Path, tld_file: str | Path) -> Extractor:
    """Build a reusable extractor from a pattern catalog and a TLD snapshot."""
    pattern_file = Path(pattern_file)
    if not pattern_file.is_file():
        raise MissingFileError(pattern_file)
    entries = parse_catalog(pattern_file.read_text(encoding="utf-8"))
    return Extractor(entries, tlds=load_tlds(tld_file))


def default_catalog_path() -> Path:
    return Path(str(files("iockit").joinpath("data", "patterns.tsv")))


def default_tld_path() -> Path:
    return Path(str(files("iockit").joinpath("data", "tlds.txt")))


def extract_raw(text: str) -> list[RawMatch]:
    """extract_raw with the default catalog."""
    return _default().extract_raw(text)


def extract(text: str) -> list[Indicator]:
    """extract with the default catalog."""
    return _default().extract(text)


_DEFAULT_INSTANCE: Extractor | None = None


def _default() -> Extractor:
    global _DEFAULT_INSTANCE
    if _DEFAULT_INSTANCE is None:
        _DEFAULT_INSTANCE = Extractor.default()
    return _DEFAULT_INSTANCE

"""Local-corpus ingestion: document manifests and HTML-to-text extraction."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from html.parser import HTMLParser
from pathlib import Path

from .errors import HashMismatchError, MalformedLineError, MissingFileError

FORMATS = ("text", "html")

#: Elements whose content is not visible text.
_SUPPRESSED = frozenset({"script", "style", "template", "title"})
#: Elements that separate blocks of text with a newline.
_BLOCK = frozenset(
    {
        "address", "article", "aside", "blockquote", "br", "caption", "dd",
        "div", "dl", "dt", "fieldset", "figure", "footer", "form", "h1",
        "h2", "h3", "h4", "h5", "h6", "header", "hr", "li", "main", "nav",
        "ol", "p", "pre", "section", "table", "td", "th", "tr", "ul",
    }
)


@dataclass(frozen=True)
class DocumentRecord:
    """One corpus document; ``doc_id`` is the SHA256 hex of the file bytes.

    Duplicate documents collected through several channels are collapsed
    to one record carrying every ``source:origin`` string.
    """

    doc_id: str
    path: Path
    origins: tuple[str, ...]
    format: str

    def read_text(self) -> str:
        """Decode the document as UTF-8 (lossy on invalid bytes)."""
        return self.path.read_bytes().decode("utf-8", errors="replace")


def load_manifest(path: str | Path, strict: bool = True):
    """Read a manifest of ``doc_id<TAB>path<TAB>origin<TAB>format`` lines.

    Records come back in file order, with duplicate doc_ids collapsed into
    one record with merged origins. Each file is re-hashed on load; a
    mismatch raises HashMismatchError (strict mode) or is returned in the
    error list (``strict=False`` returns ``(records, errors)``).
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(path)
    base = path.parent
    by_id: dict[str, DocumentRecord] = {}
    order: list[str] = []
    errors: list[Exception] = []

    def fail(exc: Exception):
        if strict:
            raise exc
        errors.append(exc)

    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            fail(MalformedLineError(line_no, f"expected 4 tab-separated fields, got {len(fields)}"))
            continue
        doc_id, rel_path, origin, fmt = (f.strip() for f in fields)
        doc_id = doc_id.lower()
        if fmt not in FORMATS:
            fail(MalformedLineError(line_no, f"unknown format {fmt!r}"))
            continue
        doc_path = (base / rel_path).resolve() if not Path(rel_path).is_absolute() else Path(rel_path)
        if doc_id in by_id:
            existing = by_id[doc_id]
            if origin not in existing.origins:
                by_id[doc_id] = DocumentRecord(
                    doc_id, existing.path, existing.origins + (origin,), existing.format
                )
            continue
        if not doc_path.is_file():
            fail(MissingFileError(doc_path))
            continue
        digest = hashlib.sha256(doc_path.read_bytes()).hexdigest()
        if digest != doc_id:
            fail(HashMismatchError(doc_id, str(doc_path)))
            continue
        by_id[doc_id] = DocumentRecord(doc_id, doc_path, (origin,), fmt)
        order.append(doc_id)

    records = [by_id[d] for d in order]
    if strict:
        return records
    return records, errors


class _TextExtractor(HTMLParser):
    """Collects visible text; block boundaries become single newlines,
    emitted lazily so the output never gains leading/trailing separators."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self._chunks: list[str] = []
        self._suppress = 0
        self._pending_break = False

    def handle_starttag(self, tag, attrs):
        if tag in _SUPPRESSED:
            self._suppress += 1
        elif tag in _BLOCK:
            self._pending_break = True

    def handle_endtag(self, tag):
        if tag in _SUPPRESSED:
            self._suppress = max(0, self._suppress - 1)
        elif tag in _BLOCK:
            self._pending_break = True

    def handle_startendtag(self, tag, attrs):
        if tag in _BLOCK:
            self._pending_break = True

    def handle_data(self, data):
        if self._suppress or not data:
            return
        if self._pending_break:
            if self._chunks and not self._chunks[-1].endswith("\n"):
                self._chunks.append("\n")
            self._pending_break = False
        self._chunks.append(data)

    def text(self) -> str:
        return "".join(self._chunks)


def extract_text(html: str) -> str:
    """Visible text of an HTML document, best-effort.

    Script/style contents are dropped, tags removed, entities decoded, and
    block elements separated by newlines. Text node content is emitted
    verbatim so indicators contiguous in the source are never split;
    markup-free input passes through unchanged.
    """
    parser = _TextExtractor()
    parser.feed(html)
    parser.close()
    return parser.text()

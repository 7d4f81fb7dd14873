"""Registrable-domain extraction backed by a pinned public-suffix snapshot.

Follows the publicsuffix.org matching algorithm (longest rule wins,
``*.`` wildcards, ``!`` exceptions, implicit ``*`` default) over the
subset shipped in ``data/public_suffixes.dat``. Users can point at a
full Public Suffix List file; the plain-suffix line format is the same.
"""
from __future__ import annotations

from importlib.resources import files
from pathlib import Path

from .errors import MissingFileError

_DEFAULT_RESOURCE = "public_suffixes.dat"


class SuffixRules:
    """Parsed suffix rules: plain, wildcard, and exception entries."""

    def __init__(self, plain: set[str], wildcard: set[str], exception: set[str]):
        self.plain = frozenset(plain)
        self.wildcard = frozenset(wildcard)  # stored without the "*." prefix
        self.exception = frozenset(exception)

    @classmethod
    def parse(cls, text: str) -> "SuffixRules":
        plain, wildcard, exception = set(), set(), set()
        for line in text.splitlines():
            line = line.strip().lower()
            if not line or line.startswith("//") or line.startswith("#"):
                continue
            if line.startswith("!"):
                exception.add(line[1:])
            elif line.startswith("*."):
                wildcard.add(line[2:])
            else:
                plain.add(line)
        return cls(plain, wildcard, exception)

    @classmethod
    def load(cls, path: str | Path) -> "SuffixRules":
        path = Path(path)
        if not path.is_file():
            raise MissingFileError(path)
        return cls.parse(path.read_text(encoding="utf-8"))

    def suffix_length(self, labels: list[str]) -> int:
        """Number of trailing labels that form the public suffix."""
        best = 1  # implicit "*" default rule
        for take in range(1, len(labels) + 1):
            candidate = ".".join(labels[-take:])
            if candidate in self.exception:
                # An exception rule makes the matched name registrable itself.
                best = max(best, take - 1)
            elif candidate in self.plain:
                best = max(best, take)
            elif take >= 2 and ".".join(labels[-take + 1 :]) in self.wildcard:
                best = max(best, take)
        return best

    def registrable_domain(self, host: str) -> str | None:
        """The registered (public-suffix + 1 label) domain of ``host``.

        Returns None when ``host`` is empty, has no dot, or is itself a
        public suffix.
        """
        host = host.strip().strip(".").lower()
        if not host or "." not in host:
            return None
        labels = host.split(".")
        if any(not lbl for lbl in labels):
            return None
        n = self.suffix_length(labels)
        if n >= len(labels):
            return None
        return ".".join(labels[-(n + 1) :])


def _load_default() -> SuffixRules:
    text = files("iockit").joinpath("data", _DEFAULT_RESOURCE).read_text(encoding="utf-8")
    return SuffixRules.parse(text)


DEFAULT_RULES = _load_default()


def registrable_domain(host: str, rules: SuffixRules | None = None) -> str | None:
    """Registrable domain of ``host`` under ``rules`` (default: pinned snapshot)."""
    return (rules or DEFAULT_RULES).registrable_domain(host)

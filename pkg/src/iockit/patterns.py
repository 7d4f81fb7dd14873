"""Default regex catalog, one defang-broadened expression per indicator type.

Every expression follows the same discipline so matching stays linear on
adversarial input under a backtracking engine:

* repetition is always bounded (labels <= 63 chars, <= 126 labels, ...);
* a cheap one-character negative lookbehind guards the start, so interior
  positions of a long token fail in O(1);
* alternations never overlap with their following element.

Nested unbounded quantifiers and lookbehind-heavy forms are avoided; the
test suite enforces a time budget on adversarial inputs for every entry.
The URL backslash obfuscation is deliberately unsupported.
"""
from __future__ import annotations

from dataclasses import dataclass

from .types import IndicatorType

_T = IndicatorType

# Armed-or-defanged separators. The plain variants are used when defang
# support is disabled.
_DOT = r"(?:\.|\[\.\]|\(\.\)|\[dot\]|\(dot\))"
_PLAIN_DOT = r"\."
_AT = r"(?:@|\[at\]|\(at\)|_at_)"
_PLAIN_AT = "@"
_SCHEME = r"(?:h(?:tt|xx)ps?|ftps?)"
_PLAIN_SCHEME = r"(?:https?|ftps?)"
_SEP = r"(?::|\[:\])//"
_PLAIN_SEP = "://"

_LABEL = r"[A-Za-z0-9_](?:[A-Za-z0-9_-]{0,61}[A-Za-z0-9_])?"
_TLD = r"(?:[A-Za-z]{2,63}|[Xx][Nn]--[A-Za-z0-9-]{1,59})"
_HEX_GUARD_L = r"(?<![A-Za-z0-9])"
_HEX_GUARD_R = r"(?![A-Za-z0-9])"
_B58 = r"[1-9A-HJ-NP-Za-km-z]"

_REGKEY_HIVE = (
    r"(?:HKEY_(?:LOCAL_MACHINE|CURRENT_USER|CLASSES_ROOT|USERS|"
    r"CURRENT_CONFIG|PERFORMANCE_DATA)|HKLM|HKCU|HKCR|HKU|HKCC)"
)
_REGKEY_SEGMENT = r"[A-Za-z0-9_.\-{}()@~#$%^&+=!']{1,128}"


def _sources(dot: str, at: str, scheme: str, sep: str) -> dict[IndicatorType, str]:
    domain_body = rf"(?:{_LABEL}{dot}){{1,126}}{_TLD}"
    local = rf"(?:[A-Za-z0-9!#$%&'*+/=?^_`{{|}}~\-]|{dot}){{1,64}}"
    host = rf"(?:[A-Za-z0-9_\-]{{1,63}}(?:{dot}[A-Za-z0-9_\-]{{1,63}}){{0,126}}|\[[0-9A-Fa-f:.]{{2,45}}\])"
    return {
        _T.IP4: (
            rf"(?<![\w.\])])\d{{1,3}}(?:{dot}\d{{1,3}}){{3}}(?!\w)(?!{dot}\d)"
        ),
        _T.IP4CIDR: r"(?<![\w.\])])\d{1,3}(?:\.\d{1,3}){3}/\d{1,2}(?!\w)",
        _T.IP6: (
            r"(?<![\w:.])(?:[0-9A-Fa-f]{0,4}:){2,7}"
            r"(?:[0-9A-Fa-f]{1,4}|(?:\d{1,3}\.){3}\d{1,3})?(?![\w:])(?!\.\d)"
        ),
        _T.FQDN: rf"(?<![\w.\-\])]){domain_body}(?!\w)",
        _T.URL: (
            rf"(?<![\w.\-@]){scheme}{sep}{host}(?::\d{{1,5}})?(?:[/?#][^\s<>\"'`]*)?"
        ),
        _T.EMAIL: (
            rf"(?<![A-Za-z0-9!#$%&'*+/=?^_`{{|}}~.\-]){local}{at}{domain_body}(?!\w)"
        ),
        _T.MD5: rf"{_HEX_GUARD_L}[0-9a-fA-F]{{32}}{_HEX_GUARD_R}",
        _T.SHA1: rf"{_HEX_GUARD_L}[0-9a-fA-F]{{40}}{_HEX_GUARD_R}",
        _T.SHA256: rf"{_HEX_GUARD_L}[0-9a-fA-F]{{64}}{_HEX_GUARD_R}",
        _T.SHA512: rf"{_HEX_GUARD_L}[0-9a-fA-F]{{128}}{_HEX_GUARD_R}",
        _T.SSDEEP: (
            r"(?<![A-Za-z0-9:/+])\d{1,18}:[A-Za-z0-9/+]{6,}:[A-Za-z0-9/+]{6,}"
            r"(?![A-Za-z0-9:/+])"
        ),
        _T.CVE: r"(?<![\w-])(?i:CVE)-\d{4}-\d{4,7}(?![\w-])",
        _T.ASN: r"(?<![\w-])(?i:ASN?)\d{1,10}(?![\w-])",
        _T.BITCOIN: rf"{_HEX_GUARD_L}[13]{_B58}{{25,34}}{_HEX_GUARD_R}",
        _T.ETHEREUM: rf"{_HEX_GUARD_L}0x[0-9a-fA-F]{{40}}{_HEX_GUARD_R}",
        _T.MONERO: rf"{_HEX_GUARD_L}[48]{_B58}{{94}}{_HEX_GUARD_R}",
        _T.ONION_ADDRESS: (
            r"(?<![A-Za-z0-9.\-])[a-z2-7]{16}(?:[a-z2-7]{40})?\.onion"
            r"(?![A-Za-z0-9\-])"
        ),
        _T.IBAN: rf"{_HEX_GUARD_L}[A-Z]{{2}}\d{{2}}[A-Z0-9]{{11,30}}{_HEX_GUARD_R}",
        _T.MAC_ADDRESS: (
            r"(?<![A-Za-z0-9:])(?:[0-9A-Fa-f]{2}[:-]){5}[0-9A-Fa-f]{2}"
            r"(?![A-Za-z0-9:-])"
        ),
        _T.REGKEY: rf"(?i:{_REGKEY_HIVE})(?:\\{_REGKEY_SEGMENT}){{1,64}}",
        _T.GOOGLE_ADSENSE: r"(?<![\w-])(?i:(?:ca-)?pub-)\d{16}(?![\w-])",
        _T.GOOGLE_ANALYTICS: r"(?<![\w-])(?i:UA)-\d{4,10}(?:-\d{1,4})?(?![\w-])",
    }


@dataclass(frozen=True)
class PatternEntry:
    """A catalog entry: indicator type, regex source, iteration priority."""

    type: IndicatorType
    expression: str
    priority: int


def default_entries(defanged: bool = True) -> list[PatternEntry]:
    """The built-in catalog, broadened for defang transformations by default."""
    if defanged:
        sources = _sources(_DOT, _AT, _SCHEME, _SEP)
    else:
        sources = _sources(_PLAIN_DOT, _PLAIN_AT, _PLAIN_SCHEME, _PLAIN_SEP)
    return [
        PatternEntry(t, sources[t], priority)
        for priority, t in enumerate(sorted(sources, key=lambda t: t.value))
    ]

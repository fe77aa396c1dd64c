"""
Message and codeword files

    # agfft message descriptor=<fingerprint> lambda=<lambda> k=<k>
    <one field element per line>

Lines starting with '#' are comments; the first one may carry the header
fields, which are validated against the active curve when present.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from utils.exceptions import InputFormatError
from utils.logger import get_logger

logger = get_logger(__name__)

MESSAGE = "message"
CODEWORD = "codeword"


@dataclass
class Codeword:
    """Evaluation vector, index-aligned with the point set"""
    values: List[int]
    fingerprint: str = ""
    lam: int = -1

    @property
    def N(self) -> int:
        return len(self.values)

    def weight(self) -> int:
        return sum(1 for v in self.values if v)

    def __eq__(self, other):
        if not isinstance(other, Codeword):
            return NotImplemented
        return list(self.values) == list(other.values)


def _header(kind: str, fingerprint: str, lam: int, size_key: str, size: int) -> str:
    return f"# agfft {kind} descriptor={fingerprint} lambda={lam} {size_key}={size}"


def format_vector(kind: str, values: Sequence[int], fingerprint: str, lam: int) -> str:
    size_key = "k" if kind == MESSAGE else "N"
    lines = [_header(kind, fingerprint, lam, size_key, len(values))]
    lines.extend(str(int(v)) for v in values)
    return "\n".join(lines) + "\n"


def _parse_header(line: str) -> Tuple[Optional[str], Dict[str, str]]:
    tokens = line.lstrip("#").split()
    if len(tokens) < 2 or tokens[0] != "agfft":
        return None, {}
    fields = {}
    for token in tokens[2:]:
        key, sep, value = token.partition("=")
        if sep:
            fields[key] = value
    return tokens[1], fields


def parse_vector(text: str, kind: str, expected: int, q: int,
                 fingerprint: Optional[str] = None, lam: Optional[int] = None) -> List[int]:
    """Read exactly ``expected`` elements of GF(q)"""
    values: List[int] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            header_kind, fields = _parse_header(line)
            if header_kind is None:
                continue
            if header_kind != kind:
                raise InputFormatError(f"expected a {kind} file, found {header_kind}", lineno)
            if fingerprint and fields.get("descriptor") not in (None, fingerprint):
                raise InputFormatError(f"file belongs to descriptor {fields['descriptor']}, not {fingerprint}", lineno)
            if lam is not None and "lambda" in fields and fields["lambda"] != str(lam):
                raise InputFormatError(f"file was written for lambda={fields['lambda']}, not {lam}", lineno)
            continue
        line = line.split("#", 1)[0].strip()
        try:
            value = int(line)
        except ValueError:
            raise InputFormatError(f"not an integer: {line!r}", lineno)
        if not 0 <= value < q:
            raise InputFormatError(f"{value} is not an element of GF({q})", lineno)
        if len(values) == expected:
            raise InputFormatError(f"more than {expected} values", lineno)
        values.append(value)
    if len(values) < expected:
        raise InputFormatError(f"truncated input: expected {expected} values, found {len(values)}",
                               last_line + 1)
    return values


def read_vector(path, kind: str, expected: int, q: int,
                fingerprint: Optional[str] = None, lam: Optional[int] = None) -> List[int]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputFormatError(f"cannot read {path}: {e}")
    return parse_vector(text, kind, expected, q, fingerprint, lam)


def write_vector(path, kind: str, values: Sequence[int], fingerprint: str, lam: int):
    Path(path).write_text(format_vector(kind, values, fingerprint, lam))
    logger.debug(f"wrote {len(values)} values to {path}")

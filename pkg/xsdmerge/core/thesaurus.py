"""
File-backed thesaurus of lexical synonymies.

Format: UTF-8 text, one pair per line as ``term_a<TAB>term_b``; lines starting with ``#`` and
blank lines are skipped. Terms are trimmed and lowercased; the relation is the symmetric closure
of the listed pairs (no transitive closure). Identical names are always synonymous.
"""

import logging
from pathlib import Path
from typing import Iterable, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from xsdmerge.core.errors import FormatError, ThesaurusIOError

logger = logging.getLogger(__name__)


def _normalize(term: str) -> str:
    return term.strip().lower()


class Thesaurus(BaseModel):
    model_config = ConfigDict(frozen=True)

    pairs: frozenset[tuple[str, str]] = Field(default_factory=frozenset)
    source: Optional[str] = None

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]], source: Optional[str] = None) -> "Thesaurus":
        closed = set()
        for a, b in pairs:
            a, b = _normalize(a), _normalize(b)
            closed.add((a, b))
            closed.add((b, a))
        return cls(pairs=frozenset(closed), source=source)

    def related(self, a: str, b: str) -> bool:
        a, b = _normalize(a), _normalize(b)
        return a == b or (a, b) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)


def parse_thesaurus(text: str, source: Optional[str] = None) -> Thesaurus:
    pairs = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.count("\t") != 1:
            raise FormatError(line_number, line)
        a, b = line.split("\t")
        if not a.strip() or not b.strip():
            raise FormatError(line_number, line)
        pairs.append((a, b))
    return Thesaurus.from_pairs(pairs, source=source)


def load_thesaurus(path: Union[str, Path]) -> Thesaurus:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ThesaurusIOError(f"Cannot read thesaurus '{path}': {e}") from e
    thesaurus = parse_thesaurus(text, source=str(path))
    logger.info(f"Loaded thesaurus '{path}' with {len(thesaurus) // 2} pair(s)")
    return thesaurus


def lexical_synonym(t: Thesaurus, a: str, b: str) -> bool:
    return t.related(a, b)

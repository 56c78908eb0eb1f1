"""Document object model shared by every pipeline stage.

Coordinates follow the usual PDF-to-XML emitter convention: the origin is
the top-left corner of the page and y grows downward, so "lower half of the
page" means y > page.height / 2.  All types are frozen dataclasses and safe
to share between concurrently processed documents.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class EmptyChunkError(ValueError):
    """Raised when chunk statistics are requested for an empty token list."""


@dataclass(frozen=True)
class Token:
    """One visual word with position, size and style attributes."""

    text: str
    page_no: int
    x: float
    y: float
    width: float
    height: float
    font_size: float
    bold: bool = False
    italic: bool = False
    font_name: str = ""
    sup_flag: bool = False

    def __post_init__(self):
        if not self.text:
            raise ValueError("token text must be non-empty")
        if self.page_no < 1:
            raise ValueError("page_no must be >= 1")
        if self.width < 0 or self.height < 0:
            raise ValueError("token extents must be non-negative")
        if self.font_size <= 0:
            raise ValueError("font_size must be positive")

    @property
    def baseline_y(self) -> float:
        return self.y + self.height


@dataclass(frozen=True)
class Line:
    """Tokens sharing one visual line, ordered by ascending x."""

    tokens: tuple[Token, ...]
    baseline_y: float

    @property
    def text(self) -> str:
        return " ".join(t.text for t in self.tokens)

    @property
    def x(self) -> float:
        return self.tokens[0].x if self.tokens else 0.0


@dataclass(frozen=True)
class Page:
    number: int
    width: float
    height: float
    lines: tuple[Line, ...] = ()

    def tokens(self):
        for line in self.lines:
            yield from line.tokens


@dataclass(frozen=True)
class Document:
    source_id: str
    pages: tuple[Page, ...] = ()


@dataclass(frozen=True)
class Chunk:
    """A contiguous, visually coherent token group."""

    tokens: tuple[Token, ...]
    page_no: int
    avg_font_size: float
    avg_boldness: float
    bbox: tuple[float, float, float, float]

    @property
    def text(self) -> str:
        return " ".join(t.text for t in self.tokens)


def token_stream(doc: Document) -> list[Token]:
    """Flatten a document in reading order: pages, then lines by y, tokens by x."""
    out: list[Token] = []
    for page in doc.pages:
        for line in page.lines:
            out.extend(line.tokens)
    return out


def chunk_stats(tokens) -> tuple[float, float, tuple[float, float, float, float]]:
    """Mean font size, bold fraction and tight bounding box of a token group."""
    tokens = list(tokens)
    if not tokens:
        raise EmptyChunkError("empty chunk")
    n = len(tokens)
    avg_font = sum(t.font_size for t in tokens) / n
    avg_bold = sum(1 for t in tokens if t.bold) / n
    bbox = (
        min(t.x for t in tokens),
        min(t.y for t in tokens),
        max(t.x + t.width for t in tokens),
        max(t.y + t.height for t in tokens),
    )
    return avg_font, avg_bold, bbox


def make_chunk(tokens) -> Chunk:
    """Build a Chunk with derived statistics from a non-empty token list."""
    tokens = tuple(tokens)
    avg_font, avg_bold, bbox = chunk_stats(tokens)
    return Chunk(
        tokens=tokens,
        page_no=tokens[0].page_no,
        avg_font_size=avg_font,
        avg_boldness=avg_bold,
        bbox=bbox,
    )

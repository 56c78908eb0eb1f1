"""Section headings and body mapping, URLs, footnotes, figure/table headings."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .crf import CrfModel, viterbi_decode
from .features import (body_font_size, enumeration_kind,
                       footnote_chunk_features, heading_chunk_features)
from .model import Chunk, Document, Page

HEADING_LABEL = "HEADING"
FOOTNOTE_LABEL = "FOOTNOTE"
OTHER_LABEL = "OTHER"

FIGURE_KEYWORDS = ("FIGURE", "Figure", "FIG.", "Fig.")
TABLE_KEYWORDS = ("Table", "TABLE")

# URL pattern: scheme plus one or more characters from the letter, digit,
# "$"-to-"_" range, bang/star/paren/comma classes, or a percent escape.
URL_PATTERN = re.compile(
    r"https?://(?:[a-zA-Z0-9]|[$-_@.&+]|[!*(),]|%[0-9a-fA-F]{2})+")

ROMAN_VALUES = {"I": 1, "V": 5, "X": 10, "L": 50, "C": 100, "D": 500, "M": 1000}

SUPERSCRIPT_TO_ASCII = str.maketrans("¹²³⁴⁵⁶⁷⁸⁹⁰", "1234567890")
MARKER_GLYPHS = "¹²³⁴⁵⁶⁷⁸⁹⁰*†‡§"


@dataclass(frozen=True)
class SectionHeading:
    text: str
    enumeration: tuple[str, str] | None  # (kind, value) or None
    chunk_index: int
    level: int = 1


@dataclass(frozen=True)
class Section:
    heading: SectionHeading | None
    body_chunks: tuple[Chunk, ...]

    @property
    def body_text(self) -> str:
        return " ".join(c.text for c in self.body_chunks)


@dataclass(frozen=True)
class Footnote:
    marker: str | None
    text: str
    page_no: int


@dataclass(frozen=True)
class CaptionHeading:
    kind: str  # "figure" or "table"
    label: str
    text: str
    source_text: str = ""  # heading text with the original label tokens

    @property
    def full(self) -> str:
        return self.source_text or f"{self.label} {self.text}".strip()


def _roman_to_int(s: str) -> int:
    total = 0
    for ch, nxt in zip(s, s[1:] + " "):
        v = ROMAN_VALUES[ch]
        total += -v if nxt in ROMAN_VALUES and ROMAN_VALUES[nxt] > v else v
    return total


def parse_enumeration(first_token: str):
    """(kind, value, level) of a heading's leading token, or None."""
    kind = enumeration_kind(first_token)
    if kind == "none":
        return None
    stripped = first_token.rstrip(".")
    if kind == "arabic":
        parts = stripped.split(".")
        return "arabic", stripped, len(parts)
    if kind == "roman":
        return "roman", str(_roman_to_int(stripped)), 1
    parts = stripped.split(".")
    return "alpha", stripped, len(parts)


def label_headings(chunks: list[Chunk], heading_model: CrfModel,
                   body_font: float | None = None) -> list[SectionHeading]:
    """Chunks the heading labeler marks, with parsed enumeration and level."""
    if not chunks:
        return []
    if body_font is None:
        sizes = sorted(c.avg_font_size for c in chunks for _ in c.tokens)
        body_font = sizes[len(sizes) // 2]
    feats = heading_chunk_features(chunks, body_font)
    labels = viterbi_decode(heading_model, feats)
    out = []
    for i, (chunk, lab) in enumerate(zip(chunks, labels)):
        if lab != HEADING_LABEL:
            continue
        parsed = parse_enumeration(chunk.tokens[0].text)
        if parsed is None:
            out.append(SectionHeading(text=chunk.text, enumeration=None,
                                      chunk_index=i, level=1))
        else:
            kind, value, level = parsed
            out.append(SectionHeading(text=chunk.text,
                                      enumeration=(kind, value),
                                      chunk_index=i, level=level))
    return out


def map_sections(chunks: list[Chunk],
                 headings: list[SectionHeading]) -> list[Section]:
    """Assign every non-heading chunk to the section opened by the last heading."""
    heading_at = {h.chunk_index: h for h in headings}
    sections: list[Section] = []
    front: list[Chunk] = []
    current: SectionHeading | None = None
    body: list[Chunk] = []
    for i, chunk in enumerate(chunks):
        if i in heading_at:
            if current is not None:
                sections.append(Section(heading=current, body_chunks=tuple(body)))
            current = heading_at[i]
            body = []
        elif current is None:
            front.append(chunk)
        else:
            body.append(chunk)
    if current is not None:
        sections.append(Section(heading=current, body_chunks=tuple(body)))
    return [Section(heading=None, body_chunks=tuple(front))] + sections


def extract_urls(text: str) -> list[str]:
    """Non-overlapping URL matches with trailing punctuation stripped."""
    out = []
    for m in URL_PATTERN.finditer(text):
        url = m.group(0)
        while url and url[-1] in ".,":
            url = url[:-1]
        while url.endswith(")") and url.count(")") > url.count("("):
            url = url[:-1]
        while url and url[-1] in ".,":
            url = url[:-1]
        if url:
            out.append(url)
    return out


def _page_chunks(chunks: list[Chunk], page_no: int) -> list[Chunk]:
    return [c for c in chunks if c.page_no == page_no]


def extract_footnotes(pages: list[Page], chunks: list[Chunk],
                      footnote_model: CrfModel) -> list[Footnote]:
    """Footnote-labeled chunks from the lower half of each page."""
    out = []
    for page in pages:
        page_chunks = _page_chunks(chunks, page.number)
        if not page_chunks:
            continue
        body_font = body_font_size(page)
        feats = footnote_chunk_features(page_chunks, page, body_font)
        labels = viterbi_decode(footnote_model, feats)
        for chunk, lab in zip(page_chunks, labels):
            if lab != FOOTNOTE_LABEL:
                continue
            if chunk.bbox[1] <= page.height / 2:
                continue
            out.extend(_split_footnote_chunk(chunk, page.number))
    return out


def _is_marker(tok) -> bool:
    return tok.sup_flag or tok.text[0] in MARKER_GLYPHS


def _split_footnote_chunk(chunk: Chunk, page_no: int) -> list[Footnote]:
    """One Footnote per raised marker; a markerless chunk yields one note."""
    groups: list[tuple[str | None, list]] = []
    for tok in chunk.tokens:
        if _is_marker(tok) or not groups:
            marker = None
            body: list = []
            if _is_marker(tok):
                marker = tok.text.translate(SUPERSCRIPT_TO_ASCII)
            else:
                body.append(tok)
            groups.append((marker, body))
        else:
            groups[-1][1].append(tok)
    return [Footnote(marker=marker, text=" ".join(t.text for t in body),
                     page_no=page_no)
            for marker, body in groups if body]


def extract_caption_headings(chunks: list[Chunk]) -> list[CaptionHeading]:
    """Chunks starting with a figure/table keyword, classified by kind."""
    out = []
    for chunk in chunks:
        lead = chunk.tokens[0].text
        if lead in FIGURE_KEYWORDS:
            kind = "figure"
        elif lead in TABLE_KEYWORDS:
            kind = "table"
        else:
            continue
        tokens = list(chunk.tokens)
        label_toks = [tokens[0]]
        rest = tokens[1:]
        if rest and re.match(r"^\d+[.:]?$", rest[0].text):
            label_toks.append(rest[0])
            rest = rest[1:]
        if kind == "table" and any(t.bold for t in rest) and not all(t.bold for t in rest):
            # Table chunks often mix caption and cell text; keep the bold part.
            rest = [t for t in rest if t.bold]
        label = " ".join(t.text.rstrip(".:") for t in label_toks)
        source = " ".join(t.text for t in label_toks + list(rest))
        out.append(CaptionHeading(kind=kind, label=label,
                                  text=" ".join(t.text for t in rest),
                                  source_text=source))
    return out

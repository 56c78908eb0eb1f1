"""End-to-end extraction: document in, ExtractionResult out.

Stages run in a fixed order: chunking, title, authors, e-mails,
affiliations, section headings, section mapping, footnotes, captions,
reference splitting, citation-instance extraction per section, and
citation-reference linking.  Every stage is deterministic, so equal inputs
produce equal results.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .bibliography import (NoReferenceSectionError, extract_citations,
                           locate_reference_section,
                           map_citations_to_references, split_references)
from .chunker import ChunkParams, chunk_document
from .crf import CrfModel, load_model
from .features import body_font_size
from .metadata import (extract_affiliations, extract_author_names,
                       extract_emails, extract_title, map_authors_to_emails,
                       title_fallback)
from .model import Chunk, Document
from .structure import (extract_caption_headings, extract_footnotes,
                        extract_urls, label_headings, map_sections)
from .tei import ExtractionResult

MODEL_FILES = {
    "title": "title.crf",
    "author": "author.crf",
    "heading": "heading.crf",
    "footnote": "footnote.crf",
}


@dataclass
class PipelineModels:
    title: CrfModel
    author: CrfModel
    heading: CrfModel
    footnote: CrfModel


def load_models_from_dir(directory) -> PipelineModels:
    directory = Path(directory)
    loaded = {task: load_model((directory / name).read_bytes())
              for task, name in MODEL_FILES.items()}
    return PipelineModels(**loaded)


def load_default_models() -> PipelineModels:
    """The pretrained models bundled with the package."""
    root = resources.files("scholarparse.data").joinpath("models")
    loaded = {task: load_model(root.joinpath(name).read_bytes())
              for task, name in MODEL_FILES.items()}
    return PipelineModels(**loaded)


def chunk_to_lines(chunk: Chunk) -> list[tuple[str, float]]:
    """(text, x-origin) per visual line of a chunk, split on baseline jumps."""
    lines: list[list] = []
    current: list = []
    for tok in chunk.tokens:
        if current and abs(tok.baseline_y - current[-1].baseline_y) > 0.5:
            lines.append(current)
            current = []
        current.append(tok)
    if current:
        lines.append(current)
    return [(" ".join(t.text for t in line), line[0].x) for line in lines]


def _attach_affiliations(records, affiliations):
    if not affiliations:
        return
    if len(affiliations) == 1:
        for rec in records:
            rec.affiliation = affiliations[0]
        return
    for rec, aff in zip(records, affiliations):
        rec.affiliation = aff


def extract_document(doc: Document, models: PipelineModels,
                     params: ChunkParams = ChunkParams()) -> ExtractionResult:
    """Run the full extraction pipeline over one parsed document."""
    chunks = chunk_document(doc, params)
    result = ExtractionResult(source_id=doc.source_id)
    if not chunks:
        return result

    title_span = extract_title(doc, chunks, models.title)
    if not title_span:
        title_span = title_fallback(chunks)
    result.title = " ".join(t.text for t in title_span)

    names = extract_author_names(doc, chunks, title_span, models.author)
    emails = extract_emails(doc, chunks)
    records = map_authors_to_emails(names, emails)
    _attach_affiliations(records, extract_affiliations(doc, chunks))
    result.authors = records

    headings = label_headings(chunks, models.heading, body_font_size(doc))
    sections = map_sections(chunks, headings)
    result.footnotes = extract_footnotes(list(doc.pages), chunks,
                                         models.footnote)
    result.captions = extract_caption_headings(chunks)

    try:
        ref_section, remainder = locate_reference_section(sections)
    except NoReferenceSectionError:
        ref_section, remainder = None, sections

    references = []
    if ref_section is not None:
        lines = [pair for chunk in ref_section.body_chunks
                 for pair in chunk_to_lines(chunk)]
        if lines:
            references = split_references(lines)
    result.references = references

    citations = []
    for section in remainder:
        heading_text = None if section.heading is None else section.heading.text
        for cit in extract_citations(section.body_text):
            citations.append(dataclasses.replace(
                cit, section_heading=heading_text))
    result.citations = map_citations_to_references(citations, references)

    result.sections = remainder + ([ref_section] if ref_section else [])

    seen = set()
    urls = []
    for chunk in chunks:
        for url in extract_urls(chunk.text):
            if url not in seen:
                seen.add(url)
                urls.append(url)
    result.urls = urls
    return result

"""Training-set construction and model fitting for the four labeling tasks.

Each builder turns (Document, GroundTruth) pairs into LabeledSequence lists
using exactly the feature code the extractors run at decode time, so a
trained model sees the same indicator space in both directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .chunker import ChunkParams, chunk_document
from .crf import CrfModel, LabeledSequence, TrainConfig, train
from .evaluate import GroundTruth, ground_truth_from_text
from .features import (FOOTNOTE_TEMPLATES, HEADING_TEMPLATES, TOKEN_TEMPLATES,
                       body_font_size, footnote_chunk_features,
                       heading_chunk_features, token_features)
from .ingest import parse_rich_xml
from .metadata import (AUTHOR_LABEL, OTHER_LABEL, TITLE_LABEL,
                       author_candidate_window)
from .model import Chunk, Document
from .structure import FOOTNOTE_LABEL, HEADING_LABEL

TASKS = ("title", "author", "heading", "footnote")


@dataclass
class TrainingPair:
    document: Document
    truth: GroundTruth


def load_corpus(directory) -> list[TrainingPair]:
    """Pairs of X.xml and X.gt.txt files found under a directory, sorted."""
    directory = Path(directory)
    pairs = []
    for xml_path in sorted(directory.glob("*.xml")):
        gt_path = xml_path.parent / (xml_path.stem + ".gt.txt")
        if not gt_path.exists():
            continue
        doc, _report = parse_rich_xml(xml_path.read_bytes(),
                                      source_id=xml_path.stem)
        truth = ground_truth_from_text(gt_path.read_text("utf-8"))
        pairs.append(TrainingPair(document=doc, truth=truth))
    if not pairs:
        raise ValueError(f"no xml/gt pairs under {directory}")
    return pairs


def _doc_positions(chunks: list[Chunk]) -> dict[int, int]:
    pos = {}
    i = 0
    for chunk in chunks:
        for tok in chunk.tokens:
            pos[id(tok)] = i
            i += 1
    return pos


def _gold_title_tokens(chunks: list[Chunk], truth: GroundTruth):
    """First-chunk tokens matched greedily against the gold title words."""
    if not chunks:
        return []
    remaining = list(truth.title.split())
    out = []
    for tok in chunks[0].tokens:
        if remaining and tok.text == remaining[0]:
            out.append(tok)
            remaining.pop(0)
    return out


def build_title_sequences(pairs, params: ChunkParams = ChunkParams()):
    """One sequence per document: the tokens of the first chunk."""
    sequences = []
    for pair in pairs:
        chunks = chunk_document(pair.document, params)
        if not chunks:
            continue
        first = chunks[0]
        gold = {id(t) for t in _gold_title_tokens(chunks, pair.truth)}
        positions = _doc_positions(chunks)
        feats = token_features(list(first.tokens),
                               [positions[id(t)] for t in first.tokens],
                               len(positions), body_font_size(pair.document))
        labels = [TITLE_LABEL if id(t) in gold else OTHER_LABEL
                  for t in first.tokens]
        sequences.append(LabeledSequence(items=list(zip(feats, labels))))
    return sequences


def build_author_sequences(pairs, params: ChunkParams = ChunkParams()):
    """One sequence per document over the author candidate window."""
    sequences = []
    for pair in pairs:
        chunks = chunk_document(pair.document, params)
        if not chunks:
            continue
        title_span = _gold_title_tokens(chunks, pair.truth)
        candidates = author_candidate_window(chunks, title_span)
        if not candidates:
            continue
        name_parts = {p for first, middle, last in pair.truth.authors
                      for p in (first, middle, last) if p}
        title_ids = {id(t) for t in title_span}
        positions = _doc_positions(chunks)
        feats = token_features(candidates,
                               [positions[id(t)] for t in candidates],
                               len(positions), body_font_size(pair.document))
        labels = [AUTHOR_LABEL
                  if tok.text.rstrip(",") in name_parts and id(tok) not in title_ids
                  else OTHER_LABEL
                  for tok in candidates]
        sequences.append(LabeledSequence(items=list(zip(feats, labels))))
    return sequences


def build_heading_sequences(pairs, params: ChunkParams = ChunkParams()):
    """One sequence per document over all chunks."""
    sequences = []
    for pair in pairs:
        chunks = chunk_document(pair.document, params)
        if not chunks:
            continue
        gold = set(pair.truth.section_headings)
        feats = heading_chunk_features(chunks, body_font_size(pair.document))
        labels = [HEADING_LABEL if c.text in gold else OTHER_LABEL
                  for c in chunks]
        sequences.append(LabeledSequence(items=list(zip(feats, labels))))
    return sequences


def _strip_marker(text: str) -> str:
    words = text.split()
    return " ".join(words[1:]) if len(words) > 1 else text


def build_footnote_sequences(pairs, params: ChunkParams = ChunkParams()):
    """One sequence per page over that page's chunks."""
    sequences = []
    for pair in pairs:
        chunks = chunk_document(pair.document, params)
        gold = set(pair.truth.footnotes)
        for page in pair.document.pages:
            page_chunks = [c for c in chunks if c.page_no == page.number]
            if not page_chunks:
                continue
            feats = footnote_chunk_features(page_chunks, page,
                                            body_font_size(page))
            labels = [FOOTNOTE_LABEL
                      if c.text in gold or _strip_marker(c.text) in gold
                      else OTHER_LABEL
                      for c in page_chunks]
            sequences.append(LabeledSequence(items=list(zip(feats, labels))))
    return sequences


_BUILDERS = {
    "title": (build_title_sequences, (OTHER_LABEL, TITLE_LABEL), TOKEN_TEMPLATES),
    "author": (build_author_sequences, (OTHER_LABEL, AUTHOR_LABEL), TOKEN_TEMPLATES),
    "heading": (build_heading_sequences, (OTHER_LABEL, HEADING_LABEL), HEADING_TEMPLATES),
    "footnote": (build_footnote_sequences, (OTHER_LABEL, FOOTNOTE_LABEL), FOOTNOTE_TEMPLATES),
}


def train_task(task: str, pairs, config: TrainConfig = TrainConfig(),
               params: ChunkParams = ChunkParams()) -> CrfModel:
    """Fit the CRF for one task name on (Document, GroundTruth) pairs."""
    if task not in _BUILDERS:
        raise ValueError(f"unknown task {task!r}")
    builder, labels, templates = _BUILDERS[task]
    dataset = builder(pairs, params)
    return train(dataset, labels, templates, config, task_name=task)


def train_all(pairs, config: TrainConfig = TrainConfig(),
              params: ChunkParams = ChunkParams()) -> dict[str, CrfModel]:
    """All four task models, keyed by task name."""
    return {task: train_task(task, pairs, config, params) for task in TASKS}

"""Token-level scoring, micro-averaging, corpus splitting, ground-truth IO.

Token comparison is case-insensitive multiset overlap over whitespace
tokens.  Mapping pairs (author-email, citation-reference) are scored as
single composite tokens so a pair is either right or wrong.
"""

from __future__ import annotations

import math
import random
import re
from collections import Counter
from dataclasses import dataclass, field

from .tei import ExtractionResult

# Report rows, in the order the subtask accuracy table is presented.
REPORT_FIELDS = [
    "title",
    "author_first",
    "author_middle",
    "author_last",
    "email",
    "affiliation",
    "section_headings",
    "figure_headings",
    "table_headings",
    "urls",
    "footnotes",
    "author_email",
    "citations",
    "references",
    "cite_ref",
]


@dataclass
class GroundTruth:
    title: str = ""
    authors: list[tuple[str, str, str]] = field(default_factory=list)
    emails: list[str] = field(default_factory=list)
    affiliations: list[str] = field(default_factory=list)
    section_headings: list[str] = field(default_factory=list)
    figure_headings: list[str] = field(default_factory=list)
    table_headings: list[str] = field(default_factory=list)
    urls: list[str] = field(default_factory=list)
    footnotes: list[str] = field(default_factory=list)
    references: list[str] = field(default_factory=list)
    citations: list[str] = field(default_factory=list)
    author_email: list[tuple[str, str]] = field(default_factory=list)
    cite_ref: list[tuple[str, str]] = field(default_factory=list)


@dataclass(frozen=True)
class TokenMetrics:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f_score(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


def _tokens(text: str) -> Counter:
    return Counter(text.lower().split())


def token_score(predicted: str, gold: str) -> TokenMetrics:
    """Multiset token overlap between a predicted and a gold string."""
    pred, gld = _tokens(predicted), _tokens(gold)
    tp = sum((pred & gld).values())
    return TokenMetrics(tp=tp, fp=sum(pred.values()) - tp,
                        fn=sum(gld.values()) - tp)


def micro_average(metrics) -> TokenMetrics:
    """Sum counts across documents, then compute precision/recall once."""
    tp = sum(m.tp for m in metrics)
    fp = sum(m.fp for m in metrics)
    fn = sum(m.fn for m in metrics)
    return TokenMetrics(tp=tp, fp=fp, fn=fn)


def split_corpus(doc_ids, train_fraction: float, seed: int):
    """Deterministic shuffle; first ceil(fraction * n) ids form the train set."""
    doc_ids = list(doc_ids)
    if not doc_ids:
        raise ValueError("empty corpus")
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must lie in (0, 1)")
    rng = random.Random(seed)
    rng.shuffle(doc_ids)
    n_train = math.ceil(train_fraction * len(doc_ids))
    return doc_ids[:n_train], doc_ids[n_train:]


def _pair_token(*parts: str) -> str:
    return "=".join(re.sub(r"\s+", "_", p.strip().lower()) for p in parts)


def predicted_field_strings(result: ExtractionResult) -> dict[str, str]:
    """Flatten an ExtractionResult into one comparable string per field."""
    ordinals = {}
    for i, ref in enumerate(result.references):
        ordinals[id(ref)] = str(ref.index if ref.index is not None else i + 1)
    cite_ref_tokens = [
        _pair_token(link.citation.matched_text, ordinals[id(link.reference)])
        for link in result.citations if link.reference is not None
    ]
    author_email_tokens = [
        _pair_token(rec.name.full, rec.email.address)
        for rec in result.authors if rec.email is not None
    ]
    return {
        "title": result.title,
        "author_first": " ".join(r.name.first for r in result.authors),
        "author_middle": " ".join(r.name.middle for r in result.authors if r.name.middle),
        "author_last": " ".join(r.name.last for r in result.authors),
        "email": " ".join(r.email.address for r in result.authors if r.email),
        "affiliation": " ".join(a.text for a in
                                {id(r.affiliation): r.affiliation
                                 for r in result.authors
                                 if r.affiliation is not None}.values()),
        "section_headings": " ".join(s.heading.text for s in result.sections
                                     if s.heading is not None),
        "figure_headings": " ".join(c.full for c in result.captions
                                    if c.kind == "figure"),
        "table_headings": " ".join(c.full for c in result.captions
                                   if c.kind == "table"),
        "urls": " ".join(result.urls),
        "footnotes": " ".join(f.text for f in result.footnotes),
        "author_email": " ".join(author_email_tokens),
        "citations": " ".join(l.citation.matched_text for l in result.citations),
        "references": " ".join(r.raw_text for r in result.references),
        "cite_ref": " ".join(cite_ref_tokens),
    }


def gold_field_strings(gt: GroundTruth) -> dict[str, str]:
    author_email_tokens = [_pair_token(name, email)
                           for name, email in gt.author_email]
    cite_ref_tokens = [_pair_token(text, ordinal)
                       for text, ordinal in gt.cite_ref]
    return {
        "title": gt.title,
        "author_first": " ".join(a[0] for a in gt.authors),
        "author_middle": " ".join(a[1] for a in gt.authors if a[1]),
        "author_last": " ".join(a[2] for a in gt.authors),
        "email": " ".join(gt.emails),
        "affiliation": " ".join(gt.affiliations),
        "section_headings": " ".join(gt.section_headings),
        "figure_headings": " ".join(gt.figure_headings),
        "table_headings": " ".join(gt.table_headings),
        "urls": " ".join(gt.urls),
        "footnotes": " ".join(gt.footnotes),
        "author_email": " ".join(author_email_tokens),
        "citations": " ".join(gt.citations),
        "references": " ".join(gt.references),
        "cite_ref": " ".join(cite_ref_tokens),
    }


def evaluate_extraction(result: ExtractionResult,
                        gt: GroundTruth) -> dict[str, TokenMetrics]:
    """Per-field token metrics for one document."""
    pred = predicted_field_strings(result)
    gold = gold_field_strings(gt)
    return {f: token_score(pred[f], gold[f]) for f in REPORT_FIELDS}


def aggregate(per_doc: list[dict[str, TokenMetrics]]) -> dict[str, TokenMetrics]:
    """Micro-average per-field metrics across documents."""
    return {f: micro_average([doc[f] for doc in per_doc])
            for f in REPORT_FIELDS}


def render_report(metrics: dict[str, TokenMetrics]) -> str:
    """Aligned plain-text table followed by machine-readable key-value lines."""
    lines = [f"{'field':<18} {'P':>6} {'R':>6} {'F':>6} {'tp':>6} {'fp':>6} {'fn':>6}"]
    for name in REPORT_FIELDS:
        m = metrics[name]
        lines.append(f"{name:<18} {m.precision:6.3f} {m.recall:6.3f} "
                     f"{m.f_score:6.3f} {m.tp:6d} {m.fp:6d} {m.fn:6d}")
    lines.append("")
    for name in REPORT_FIELDS:
        m = metrics[name]
        lines.append(f"{name}.precision={m.precision:.6f}")
        lines.append(f"{name}.recall={m.recall:.6f}")
        lines.append(f"{name}.f={m.f_score:.6f}")
    return "\n".join(lines) + "\n"


# Ground-truth file IO: "FIELD<TAB>value" records, UTF-8.

def ground_truth_to_text(gt: GroundTruth) -> str:
    lines = []
    if gt.title:
        lines.append(f"TITLE\t{gt.title}")
    for first, middle, last in gt.authors:
        lines.append(f"AUTHOR\t{first}|{middle}|{last}")
    for value in gt.emails:
        lines.append(f"EMAIL\t{value}")
    for value in gt.affiliations:
        lines.append(f"AFFILIATION\t{value}")
    for value in gt.section_headings:
        lines.append(f"SECTION_HEADING\t{value}")
    for value in gt.figure_headings:
        lines.append(f"FIGURE_HEADING\t{value}")
    for value in gt.table_headings:
        lines.append(f"TABLE_HEADING\t{value}")
    for value in gt.urls:
        lines.append(f"URL\t{value}")
    for value in gt.footnotes:
        lines.append(f"FOOTNOTE\t{value}")
    for value in gt.references:
        lines.append(f"REFERENCE\t{value}")
    for value in gt.citations:
        lines.append(f"CITATION\t{value}")
    for name, email in gt.author_email:
        lines.append(f"AUTHOR_EMAIL\t{name}\t{email}")
    for text, ordinal in gt.cite_ref:
        lines.append(f"CITE_REF\t{text}\t{ordinal}")
    return "\n".join(lines) + "\n"


def ground_truth_from_text(text: str) -> GroundTruth:
    gt = GroundTruth()
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = line.split("\t")
        kind, rest = parts[0], parts[1:]
        if kind == "TITLE":
            gt.title = rest[0]
        elif kind == "AUTHOR":
            first, middle, last = (rest[0].split("|") + ["", ""])[:3]
            gt.authors.append((first, middle, last))
        elif kind == "EMAIL":
            gt.emails.append(rest[0])
        elif kind == "AFFILIATION":
            gt.affiliations.append(rest[0])
        elif kind == "SECTION_HEADING":
            gt.section_headings.append(rest[0])
        elif kind == "FIGURE_HEADING":
            gt.figure_headings.append(rest[0])
        elif kind == "TABLE_HEADING":
            gt.table_headings.append(rest[0])
        elif kind == "URL":
            gt.urls.append(rest[0])
        elif kind == "FOOTNOTE":
            gt.footnotes.append(rest[0])
        elif kind == "REFERENCE":
            gt.references.append(rest[0])
        elif kind == "CITATION":
            gt.citations.append(rest[0])
        elif kind == "AUTHOR_EMAIL":
            gt.author_email.append((rest[0], rest[1]))
        elif kind == "CITE_REF":
            gt.cite_ref.append((rest[0], rest[1]))
        else:
            raise ValueError(f"unknown ground-truth field {kind!r}")
    return gt

"""Title, author names, e-mails, affiliations, and the author-email mapping."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from .crf import CrfModel, viterbi_decode
from .features import body_font_size, token_features
from .model import Chunk, Document, Token

TITLE_LABEL = "TITLE"
AUTHOR_LABEL = "AUTHOR"
OTHER_LABEL = "OTHER"

# Candidate tokens for author names must fall in the first chunk region or
# within this many tokens after the title.
AUTHOR_WINDOW = 120
MAX_AUTHOR_RUN = 5

# Function words that never occur inside a person name; stands in for the
# POS-tag false-positive filter without a tagger dependency.
NAME_STOPWORDS = frozenset("""
a an and are at by for from in is of on or the to with university institute
department college research laboratories corporation email abstract
""".split())

NAME_TOKEN = re.compile(r"^[A-Z][A-Za-z'\-]*$")

SUPERSCRIPT_TO_ASCII = str.maketrans("¹²³⁴⁵⁶⁷⁸⁹⁰", "1234567890")
SUPERSCRIPT_MARKS = "¹²³⁴⁵⁶⁷⁸⁹⁰*†‡§"


@dataclass(frozen=True)
class AuthorName:
    first: str
    middle: str
    last: str
    source_tokens: tuple[Token, ...] = ()

    @property
    def full(self) -> str:
        return " ".join(p for p in (self.first, self.middle, self.last) if p)


@dataclass(frozen=True)
class EmailAddress:
    user: str
    domain: str
    raw: str

    @property
    def address(self) -> str:
        return f"{self.user}@{self.domain}"


@dataclass(frozen=True)
class Affiliation:
    text: str
    marker: str | None = None
    matched_cues: tuple[str, ...] = ()


@dataclass
class AuthorRecord:
    name: AuthorName
    email: EmailAddress | None = None
    affiliation: Affiliation | None = None


def load_lexicon(name: str) -> list[str]:
    """Bundled lexicon: UTF-8, one entry per line, '#' comments."""
    text = resources.files("scholarparse.data").joinpath(name).read_text("utf-8")
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line)
    return entries


def _doc_positions(chunks: list[Chunk]) -> dict[int, int]:
    pos = {}
    i = 0
    for chunk in chunks:
        for tok in chunk.tokens:
            pos[id(tok)] = i
            i += 1
    return pos


def extract_title(doc: Document, chunks: list[Chunk],
                  title_model: CrfModel) -> list[Token]:
    """Tokens the title labeler marks in the first chunk; may be empty."""
    if not chunks:
        return []
    first = chunks[0]
    positions = _doc_positions(chunks)
    total = len(positions)
    body_font = body_font_size(doc)
    feats = token_features(list(first.tokens),
                           [positions[id(t)] for t in first.tokens],
                           total, body_font)
    labels = viterbi_decode(title_model, feats)
    return [t for t, lab in zip(first.tokens, labels) if lab == TITLE_LABEL]


def title_fallback(chunks: list[Chunk]) -> list[Token]:
    """Largest-font chunk on page 1, used when the labeler returns nothing."""
    page1 = [c for c in chunks if c.page_no == 1]
    if not page1:
        return []
    best = max(page1, key=lambda c: c.avg_font_size)
    return list(best.tokens)


def _lower_quartile(values):
    values = sorted(values)
    return values[len(values) // 4] if values else 0.0


def _split_runs(tokens: list[Token]) -> list[list[Token]]:
    """Split a consecutive labeled run into per-author groups.

    The reference gap is the lower quartile of same-row gaps rather than the
    median: separator gaps between adjacent authors can make up half of all
    gaps, which would drag the median up to the separator width itself.
    """
    if not tokens:
        return []
    gaps = []
    for a, b in zip(tokens, tokens[1:]):
        if abs(a.baseline_y - b.baseline_y) < 1.0:
            gaps.append(b.x - (a.x + a.width))
    word_gap = _lower_quartile([g for g in gaps if g > 0])
    runs: list[list[Token]] = [[tokens[0]]]
    for a, b in zip(tokens, tokens[1:]):
        new_row = abs(a.baseline_y - b.baseline_y) >= 1.0
        wide = word_gap > 0 and (b.x - (a.x + a.width)) > 2 * word_gap
        if new_row or wide or a.text.endswith(","):
            runs.append([b])
        else:
            runs[-1].append(b)
    # Separator tokens ("and", "&") split rather than join names.
    split_runs: list[list[Token]] = []
    for run in runs:
        current: list[Token] = []
        for tok in run:
            if tok.text.strip(",").lower() in {"and", "&", ","}:
                if current:
                    split_runs.append(current)
                current = []
            else:
                current.append(tok)
        if current:
            split_runs.append(current)
    return split_runs


def _run_to_name(run: list[Token]) -> AuthorName | None:
    words = [t.text.rstrip(",") for t in run]
    if not words or len(words) > MAX_AUTHOR_RUN:
        return None
    for w in words:
        if not NAME_TOKEN.match(w) or w.lower() in NAME_STOPWORDS:
            return None
    if len(words) == 1:
        return AuthorName(first=words[0], middle="", last=words[0],
                          source_tokens=tuple(run))
    return AuthorName(first=words[0], middle=" ".join(words[1:-1]),
                      last=words[-1], source_tokens=tuple(run))


def author_candidate_window(chunks: list[Chunk], title_span,
                            window: int = AUTHOR_WINDOW) -> list[Token]:
    """First-chunk region plus the tokens within `window` after the title."""
    if not chunks:
        return []
    stream = [t for c in chunks if c.page_no == 1 for t in c.tokens]
    title_ids = {id(t) for t in title_span}
    title_end = 0
    for i, tok in enumerate(stream):
        if id(tok) in title_ids:
            title_end = i + 1
    window_ids = {id(t) for t in chunks[0].tokens}
    window_ids.update(id(t) for t in stream[title_end: title_end + window])
    return [t for t in stream if id(t) in window_ids]


def extract_author_names(doc: Document, chunks: list[Chunk],
                         title_span: list[Token],
                         author_model: CrfModel,
                         window: int = AUTHOR_WINDOW) -> list[AuthorName]:
    """Author names from the first-chunk region and the post-title window."""
    candidates = author_candidate_window(chunks, title_span, window)
    if not candidates:
        return []
    title_ids = {id(t) for t in title_span}

    positions = _doc_positions(chunks)
    total = len(positions)
    body_font = body_font_size(doc)
    feats = token_features(candidates,
                           [positions[id(t)] for t in candidates],
                           total, body_font)
    labels = viterbi_decode(author_model, feats)

    names: list[AuthorName] = []
    run: list[Token] = []
    for tok, lab in zip(candidates, labels):
        if lab == AUTHOR_LABEL and id(tok) not in title_ids:
            run.append(tok)
        elif run:
            names.extend(n for r in _split_runs(run)
                         if (n := _run_to_name(r)) is not None)
            run = []
    if run:
        names.extend(n for r in _split_runs(run)
                     if (n := _run_to_name(r)) is not None)
    return names


# E-mail group patterns.  Group-with-subdomains must run before the plain
# bracket group, and both bracket/brace groups before the plain address.
_P_SUBDOMAIN_GROUP = re.compile(r"\[([^\[\]]*@[^\[\]]*)\]\s*\.\s*([A-Za-z0-9.-]+)")
_P_BRACE_GROUP = re.compile(r"\{([^{}@]*)\}\s*@\s*([A-Za-z0-9.-]+)")
_P_BRACKET_GROUP = re.compile(r"\[([^\[\]@]*)\]\s*@\s*([A-Za-z0-9.-]+)")
_P_PLAIN = re.compile(r"([A-Za-z0-9._%+-]+)@([A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)+)")


def expand_email_group(text: str) -> list[EmailAddress]:
    """Expand the four observed e-mail writing patterns into addresses."""
    results: list[tuple[int, EmailAddress]] = []
    remaining = text

    def consume(pattern, builder):
        nonlocal remaining
        out = []
        for m in pattern.finditer(remaining):
            out.extend((m.start(), e) for e in builder(m))
        remaining = pattern.sub(lambda m: " " * len(m.group(0)), remaining)
        results.extend(out)

    consume(_P_SUBDOMAIN_GROUP, _expand_subdomain_group)
    consume(_P_BRACE_GROUP, _expand_plain_group)
    consume(_P_BRACKET_GROUP, _expand_plain_group)
    consume(_P_PLAIN, lambda m: [EmailAddress(m.group(1), m.group(2),
                                              f"{m.group(1)}@{m.group(2)}")])
    results.sort(key=lambda pair: pair[0])
    return [e for _, e in results]


def _expand_plain_group(m) -> list[EmailAddress]:
    domain = m.group(2).strip(".")
    out = []
    for user in m.group(1).split(","):
        user = user.strip()
        if user:
            out.append(EmailAddress(user, domain, f"{user}@{domain}"))
    return out


def _expand_subdomain_group(m) -> list[EmailAddress]:
    suffix = m.group(2).strip(".")
    out = []
    for entry in m.group(1).split(","):
        entry = entry.strip()
        if "@" not in entry:
            continue
        user, sub = entry.split("@", 1)
        domain = f"{sub.strip()}.{suffix}" if sub.strip() else suffix
        out.append(EmailAddress(user.strip(), domain,
                                f"{user.strip()}@{domain}"))
    return out


def extract_emails(doc: Document,
                   chunks: list[Chunk] | None = None) -> list[EmailAddress]:
    """All addresses found on page 1, de-duplicated in occurrence order.

    When chunks are given, each page-1 chunk is scanned as one text so that
    bracket groups wrapped over several lines still expand; otherwise the
    scan is per line.
    """
    if not doc.pages:
        return []
    if chunks is not None:
        texts = [c.text for c in chunks if c.page_no == 1]
    else:
        texts = [line.text for line in doc.pages[0].lines]
    seen = set()
    out = []
    for text in texts:
        if "@" not in text:
            continue
        for email in expand_email_group(text):
            if email.address not in seen:
                seen.add(email.address)
                out.append(email)
    return out


def extract_affiliations(doc: Document, chunks: list[Chunk],
                         cues: list[str] | None = None,
                         countries: list[str] | None = None,
                         header_limit: int | None = None) -> list[Affiliation]:
    """Header-region chunks on page 1 carrying an institution or country cue."""
    if cues is None:
        cues = load_lexicon("affiliation_cues.txt")
    if countries is None:
        countries = load_lexicon("countries.txt")
    cue_set = {c.lower() for c in cues} | {c.lower() for c in countries}

    out = []
    for i, chunk in enumerate(chunks):
        if chunk.page_no != 1:
            break
        if header_limit is not None and i >= header_limit:
            break
        words = [t.text.strip(",.;") for t in chunk.tokens]
        matched = sorted({w for w in words if w.lower() in cue_set},
                         key=lambda w: words.index(w))
        if not matched:
            continue
        marker = None
        text_tokens = chunk.tokens
        lead = chunk.tokens[0]
        if lead.sup_flag or lead.text[0] in SUPERSCRIPT_MARKS:
            marker = lead.text.translate(SUPERSCRIPT_TO_ASCII).strip()
            if len(lead.text) == 1 or lead.sup_flag:
                text_tokens = chunk.tokens[1:]
            else:
                marker = lead.text[0].translate(SUPERSCRIPT_TO_ASCII)
        out.append(Affiliation(
            text=" ".join(t.text for t in text_tokens),
            marker=marker,
            matched_cues=tuple(matched)))
    return out


def _initials(name: AuthorName) -> str:
    parts = [name.first] + name.middle.split()
    return "".join(p[0] for p in parts if p)


def map_authors_to_emails(names: list[AuthorName],
                          emails: list[EmailAddress]) -> list[AuthorRecord]:
    """Pair authors with e-mails: substring, abbreviation, then position."""
    records = [AuthorRecord(name=n) for n in names]
    taken: set[int] = set()

    def clean(s: str) -> str:
        return re.sub(r"[^a-z]", "", s.lower())

    # Rule 1: substring match between username and first/last name.
    for rec in records:
        first, last = clean(rec.name.first), clean(rec.name.last)
        for j, email in enumerate(emails):
            if j in taken:
                continue
            user = clean(email.user)
            hit = any(
                (len(part) >= 4 and part in user) or (len(user) >= 4 and user in part)
                for part in (first, last))
            if hit:
                rec.email = email
                taken.add(j)
                break

    # Rule 2: abbreviated full name as username.
    for rec in records:
        if rec.email is not None:
            continue
        first, last = clean(rec.name.first), clean(rec.name.last)
        forms = {first[:1] + last, clean(_initials(rec.name)) + last}
        for j, email in enumerate(emails):
            if j in taken:
                continue
            if clean(email.user) in forms:
                rec.email = email
                taken.add(j)
                break

    # Rule 3: leftovers paired by order of occurrence.
    leftover_emails = [j for j in range(len(emails)) if j not in taken]
    leftover_recs = [rec for rec in records if rec.email is None]
    for rec, j in zip(leftover_recs, leftover_emails):
        rec.email = emails[j]
        taken.add(j)
    return records

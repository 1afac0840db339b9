"""Web of Science export ingestion.

Reads the two export formats WoS offers for offline use (field-tagged plain
text and tab-delimited), merges corpora from several files and computes the
descriptive statistics usually reported as the first table of a bibliometric
study.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

YEAR_MIN, YEAR_MAX = 1900, 2100

TAB_COLUMNS = ("PT", "AU", "TI", "SO", "DT", "DE", "ID", "PY", "UT")

class ParseError(ValueError):
    """Base class for export parse failures; carries the 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None, source: str = "<bytes>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


class MalformedHeader(ParseError):
    pass


class UnterminatedRecord(ParseError):
    pass


class DecodeError(ParseError):
    pass


class MissingHeader(ParseError):
    pass


class RaggedRow(ParseError):
    pass


@dataclass(frozen=True)
class Record:
    title: str = ""
    authors: tuple[str, ...] = ()
    source: str = ""
    pub_year: Optional[int] = None
    doc_type: str = ""
    author_keywords: tuple[str, ...] = ()
    keywords_plus: tuple[str, ...] = ()
    accession_id: Optional[str] = None


@dataclass(frozen=True)
class Provenance:
    source: str
    record_count: int
    encoding: str = "utf-8"


@dataclass(frozen=True)
class Corpus:
    records: tuple[Record, ...] = ()
    provenance: tuple[Provenance, ...] = ()

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class CorpusStats:
    document_count: int
    source_count: int
    year_span: Optional[tuple[int, int]]
    per_year_counts: dict[int, int] = field(default_factory=dict)
    author_keyword_count: int = 0
    keywords_plus_count: int = 0
    annual_growth_rate_pct: Optional[float] = None


def _decode(data: bytes, source: str, fallback: bool) -> tuple[str, str]:
    try:
        return data.decode("utf-8-sig"), "utf-8"
    except UnicodeDecodeError as exc:
        if not fallback:
            line = data[: exc.start].count(b"\n") + 1
            raise DecodeError("input is not valid UTF-8", line, source) from exc
        return data.decode("latin-1"), "latin-1"


def _lines(text: str) -> list[str]:
    # str.splitlines would also break on form feeds and unicode separators
    lines = [ln.removesuffix("\r") for ln in text.split("\n")]
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def split_keywords(cell: str) -> tuple[str, ...]:
    """Split a DE/ID cell on "; ", tolerating a trailing ";"."""
    cell = cell.strip()
    if cell.endswith(";"):
        cell = cell[:-1].rstrip()
    if not cell:
        return ()
    return tuple(t.strip() for t in cell.split("; ") if t.strip())


def parse_year(value: str) -> Optional[int]:
    value = value.strip()
    if len(value) != 4 or not value.isdigit():
        return None
    year = int(value)
    return year if YEAR_MIN <= year <= YEAR_MAX else None


def _record_from_fields(fields: dict[str, list[str]]) -> Record:
    def text(tag: str) -> str:
        return " ".join(fields.get(tag, [])).strip()

    return Record(
        title=text("TI"),
        authors=tuple(a for a in (s.strip() for s in fields.get("AU", [])) if a),
        source=text("SO"),
        pub_year=parse_year(text("PY")),
        doc_type=text("DT"),
        author_keywords=split_keywords(text("DE")),
        keywords_plus=split_keywords(text("ID")),
        accession_id=text("UT") or None,
    )


def _dedupe(records: Iterable[Record]) -> list[Record]:
    seen: set[str] = set()
    out = []
    for rec in records:
        if rec.accession_id is not None:
            if rec.accession_id in seen:
                continue
            seen.add(rec.accession_id)
        out.append(rec)
    return out


def parse_wos_plaintext(data: bytes, source: str = "<bytes>", *, fallback: bool = True) -> Corpus:
    """Parse a field-tagged WoS export (``FN``/``VR`` header, ``PT``..``ER`` blocks).

    Unknown tags are ignored. Raises :class:`MalformedHeader` when the first
    non-blank line is not ``FN`` and :class:`UnterminatedRecord` when a
    ``PT`` block is not closed by ``ER``.
    """
    text, encoding = _decode(data, source, fallback)
    lines = _lines(text)

    first = next((i for i, ln in enumerate(lines) if ln.strip()), None)
    if first is None or not lines[first].startswith("FN"):
        raise MalformedHeader("export must begin with an FN line", (first or 0) + 1, source)

    records: list[Record] = []
    current: Optional[dict[str, list[str]]] = None
    start_line = 0
    last_tag: Optional[str] = None

    for lineno, line in enumerate(lines[first + 1 :], start=first + 2):
        if not line.strip():
            continue
        if line.startswith("   "):
            if current is not None and last_tag is not None:
                current[last_tag].append(line.strip())
            continue
        tag, value = line[:2], line[3:].rstrip()
        if tag == "EF":
            break
        if tag == "PT":
            if current is not None:
                raise UnterminatedRecord("PT before ER of the previous record", start_line, source)
            current, start_line, last_tag = {"PT": [value]}, lineno, "PT"
            continue
        if current is None:
            # VR and anything else outside a record
            continue
        if tag == "ER":
            records.append(_record_from_fields(current))
            current, last_tag = None, None
            continue
        current.setdefault(tag, []).append(value)
        last_tag = tag

    if current is not None:
        raise UnterminatedRecord("record has no ER before end of file", start_line, source)

    records = _dedupe(records)
    return Corpus(tuple(records), (Provenance(source, len(records), encoding),))


def parse_wos_tabdelimited(data: bytes, source: str = "<bytes>", *, fallback: bool = True) -> Corpus:
    """Parse a tab-delimited WoS export: a header row, then one record per line."""
    text, encoding = _decode(data, source, fallback)
    lines = _lines(text)
    if not lines or not lines[0].strip():
        raise MissingHeader("missing header row", 1, source)
    header = [h.strip() for h in lines[0].split("\t")]
    if not set(header) & set(TAB_COLUMNS):
        raise MissingHeader("header has none of the known WoS columns", 1, source)

    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) > len(header):
            raise RaggedRow(f"row has {len(cells)} cells but header has {len(header)}", lineno, source)
        row = dict(zip(header, cells))

        def cell(tag: str) -> str:
            return row.get(tag, "").strip()

        records.append(
            Record(
                title=cell("TI"),
                authors=split_keywords(cell("AU")),
                source=cell("SO"),
                pub_year=parse_year(cell("PY")),
                doc_type=cell("DT"),
                author_keywords=split_keywords(cell("DE")),
                keywords_plus=split_keywords(cell("ID")),
                accession_id=cell("UT") or None,
            )
        )

    records = _dedupe(records)
    return Corpus(tuple(records), (Provenance(source, len(records), encoding),))


def to_tabdelimited(corpus: Corpus) -> bytes:
    """Serialize a corpus to the tab-delimited export layout."""
    out = ["\t".join(TAB_COLUMNS)]
    for rec in corpus.records:
        cells = {
            "PT": "J",
            "AU": "; ".join(rec.authors),
            "TI": rec.title,
            "SO": rec.source,
            "DT": rec.doc_type,
            "DE": "; ".join(rec.author_keywords),
            "ID": "; ".join(rec.keywords_plus),
            "PY": "" if rec.pub_year is None else str(rec.pub_year),
            "UT": rec.accession_id or "",
        }
        out.append("\t".join(cells[c] for c in TAB_COLUMNS))
    return ("\n".join(out) + "\n").encode("utf-8")


def sniff_format(data: bytes) -> str:
    head = data.removeprefix(b"\xef\xbb\xbf").lstrip()
    return "plaintext" if head[:2] == b"FN" and head[2:3] in (b" ", b"\n", b"\r", b"") else "tabdelimited"


def parse_wos(data: bytes, source: str = "<bytes>", fmt: str = "auto") -> Corpus:
    if fmt == "auto":
        fmt = sniff_format(data)
    if fmt == "plaintext":
        return parse_wos_plaintext(data, source)
    if fmt == "tabdelimited":
        return parse_wos_tabdelimited(data, source)
    raise ValueError(f"unknown input format {fmt!r}")


def merge_corpora(corpora: Iterable[Corpus]) -> Corpus:
    """Concatenate corpora in the given order, keeping the first record per accession id."""
    corpora = list(corpora)
    records = _dedupe(r for c in corpora for r in c.records)
    provenance = tuple(p for c in corpora for p in c.provenance)
    return Corpus(tuple(records), provenance)


def annual_growth_rate(per_year_counts: dict[int, int]) -> Optional[float]:
    """Compound annual growth (percent) between the first and last years with output."""
    years = sorted(y for y, n in per_year_counts.items() if n > 0)
    if len(years) < 2:
        return None
    first, last = years[0], years[-1]
    span = last - first
    ratio = per_year_counts[last] / per_year_counts[first]
    return 100.0 * (ratio ** (1.0 / span) - 1.0)


def corpus_stats(corpus: Corpus) -> CorpusStats:
    per_year = Counter(r.pub_year for r in corpus.records if r.pub_year is not None)
    years = sorted(per_year)
    return CorpusStats(
        document_count=len(corpus.records),
        source_count=len({r.source for r in corpus.records if r.source}),
        year_span=(years[0], years[-1]) if years else None,
        per_year_counts=dict(sorted(per_year.items())),
        author_keyword_count=len({k for r in corpus.records for k in r.author_keywords}),
        keywords_plus_count=len({k for r in corpus.records for k in r.keywords_plus}),
        annual_growth_rate_pct=annual_growth_rate(per_year),
    )

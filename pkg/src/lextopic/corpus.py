"""Law-record corpora: loading, validation, filtering, dates, synthesis.

Records carry Solar Hijri publication dates as the source of truth; the
Gregorian year is derived once at construction so every downstream trend
table can key on it without re-converting.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from html.parser import HTMLParser
from pathlib import Path

import numpy as np

from .errors import (
    DuplicateId,
    EmptyContent,
    InvalidConfig,
    MalformedDate,
    MissingField,
    MissingYear,
    StructureMismatch,
    UnknownLawType,
)
from .jalali import jalali_to_gregorian_year, validate_jalali
from .trends import PER_YEAR, TrendTable, build_trend_table

__all__ = [
    "LawType",
    "RecordDate",
    "LawRecord",
    "Corpus",
    "SynthConfig",
    "GroundTruth",
    "load_corpus",
    "save_corpus",
    "parse_html_record",
    "filter_by_type",
    "jalali_to_gregorian_year",
    "type_counts_by_year",
    "length_ratio",
    "generate_synthetic_corpus",
]


class LawType(Enum):
    NEWS = "News"
    DRAFT = "Draft"
    VOTE = "Vote"
    PLAN = "Plan"
    LAW = "Law"
    BILL = "Bill"
    PARLIAMENT_DELIBERATION = "ParliamentDeliberation"
    REGULATION = "Regulation"
    OPINION = "Opinion"


# Lookup by squashed lowercase form; accepts the plural spellings that
# appear in source pages ("Parliament deliberations", "Regulations news"
# style type cells) without opening the enum itself.
_LAW_TYPE_LOOKUP = {}
for _t in LawType:
    _key = _t.value.lower()
    _LAW_TYPE_LOOKUP[_key] = _t
    if not _key.endswith("s"):
        _LAW_TYPE_LOOKUP[_key + "s"] = _t


def parse_law_type(value: str, row: int | None = None) -> LawType:
    squashed = re.sub(r"[\s_-]+", "", str(value).strip()).lower()
    try:
        return _LAW_TYPE_LOOKUP[squashed]
    except KeyError:
        raise UnknownLawType(value, row) from None


@dataclass(frozen=True)
class RecordDate:
    """A publication date: Jalali components plus the derived Gregorian year."""

    raw: str
    jalali_year: int
    jalali_month: int
    jalali_day: int
    gregorian_year: int

    @classmethod
    def from_jalali(cls, raw: str, year: int, month: int, day: int) -> "RecordDate":
        validate_jalali(year, month, day)
        return cls(raw, year, month, day, jalali_to_gregorian_year(year, month, day))


# Dotic pages translate Jalali month names positionally into English
# month names (Farvardin -> April, ... Esfand -> March), so the English
# name in a date string denotes the Jalali month at that position.
_MONTH_NAME_TO_JALALI = {
    "april": 1,
    "may": 2,
    "june": 3,
    "july": 4,
    "august": 5,
    "september": 6,
    "october": 7,
    "november": 8,
    "december": 9,
    "january": 10,
    "february": 11,
    "march": 12,
}

_YMD = re.compile(r"(\d{4})[/-](\d{1,2})[/-](\d{1,2})$")
_MDY = re.compile(r"(\d{1,2})[/-](\d{1,2})[/-](\d{4})$")
_NAMED = re.compile(r"(?:[A-Za-z]+,\s*)?([A-Za-z]+)\s+(\d{1,2}),\s*(\d{4})$")


def parse_record_date(value, row: int | None = None) -> RecordDate:
    """Build a RecordDate from serialized dict or published string forms.

    Accepted strings: "1402/04/06" (year first), "04/06/1402" (year
    last), and "Saturday, July 10, 1402" where the weekday is ignored
    and the month name indexes the Jalali month.
    """
    if isinstance(value, RecordDate):
        return value
    try:
        if isinstance(value, dict):
            try:
                y = int(value["year"])
                m = int(value["month"])
                d = int(value["day"])
            except (KeyError, TypeError, ValueError):
                raise MalformedDate(value) from None
            raw = str(value.get("raw", f"{y:04d}/{m:02d}/{d:02d}"))
            return RecordDate.from_jalali(raw, y, m, d)
        if isinstance(value, str):
            text = value.strip()
            match = _YMD.match(text)
            if match:
                y, m, d = map(int, match.groups())
                return RecordDate.from_jalali(text, y, m, d)
            match = _MDY.match(text)
            if match:
                m, d, y = map(int, match.groups())
                return RecordDate.from_jalali(text, y, m, d)
            match = _NAMED.match(text)
            if match:
                name = match.group(1).lower()
                if name in _MONTH_NAME_TO_JALALI:
                    return RecordDate.from_jalali(
                        text,
                        int(match.group(3)),
                        _MONTH_NAME_TO_JALALI[name],
                        int(match.group(2)),
                    )
            raise MalformedDate(value)
        raise MalformedDate(value)
    except MalformedDate as exc:
        if row is not None and exc.row is None:
            raise MalformedDate(exc.raw, row) from None
        raise


@dataclass
class LawRecord:
    id: str
    title: str
    content: str
    law_type: LawType
    date: RecordDate | None = None
    lead: str = ""
    tags: list[str] = field(default_factory=list)
    classes: list[str] = field(default_factory=list)
    category: str = ""


@dataclass
class Corpus:
    records: list[LawRecord]
    source_description: str = ""

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


# On-disk field names; "type"/"categories" are the header spellings used
# by the upstream sample tables and are accepted as aliases on load.
_FIELD_ORDER = ("id", "title", "content", "lead", "tags", "classes", "law_type", "category", "date")
_ALIASES = {"law_type": ("law_type", "type"), "category": ("category", "categories")}
_REQUIRED = ("id", "title", "content", "law_type", "date")


def _pick(mapping: dict, name: str):
    for key in _ALIASES.get(name, (name,)):
        if key in mapping and mapping[key] is not None:
            return mapping[key]
    return None


def _as_string_list(value, row: int, name: str) -> list[str]:
    if value is None or value == "":
        return []
    if isinstance(value, str):
        text = value.strip()
        if text.startswith("["):
            try:
                value = json.loads(text)
            except json.JSONDecodeError:
                raise MissingField(row, name) from None
        else:
            return [part.strip() for part in text.split(",") if part.strip()]
    if not isinstance(value, list) or not all(isinstance(item, str) for item in value):
        raise MissingField(row, name)
    return list(value)


def _record_from_mapping(mapping: dict, row: int, seen_ids: set) -> LawRecord:
    values = {}
    for name in _REQUIRED:
        value = _pick(mapping, name)
        if value is None:
            raise MissingField(row, name)
        values[name] = value
    # Trim only to test emptiness; stored values stay byte-exact so that
    # save -> load round-trips.
    record_id = str(values["id"])
    title = str(values["title"])
    if not record_id.strip():
        raise MissingField(row, "id")
    if not title.strip():
        raise MissingField(row, "title")
    if record_id in seen_ids:
        raise DuplicateId(record_id, row)
    seen_ids.add(record_id)

    date_value = values["date"]
    if isinstance(date_value, str) and date_value.strip().startswith("{"):
        try:
            date_value = json.loads(date_value)
        except json.JSONDecodeError:
            raise MalformedDate(date_value, row) from None
    return LawRecord(
        id=record_id,
        title=title,
        content=str(values["content"]),
        law_type=parse_law_type(str(values["law_type"]), row),
        date=parse_record_date(date_value, row),
        lead=str(_pick(mapping, "lead") or ""),
        tags=_as_string_list(_pick(mapping, "tags"), row, "tags"),
        classes=_as_string_list(_pick(mapping, "classes"), row, "classes"),
        category=str(_pick(mapping, "category") or ""),
    )


def load_corpus(path, format: str = "jsonl") -> Corpus:
    """Read law records from a JSONL or CSV file, validating every row.

    Row numbers in errors are 1-based over data rows (the CSV header is
    not counted).
    """
    path = Path(path)
    records: list[LawRecord] = []
    seen_ids: set = set()
    if format == "jsonl":
        with path.open(encoding="utf-8") as handle:
            row = 0
            for line in handle:
                if not line.strip():
                    continue
                row += 1
                records.append(_record_from_mapping(json.loads(line), row, seen_ids))
    elif format == "csv":
        with path.open(encoding="utf-8", newline="") as handle:
            for row, mapping in enumerate(csv.DictReader(handle), start=1):
                records.append(_record_from_mapping(mapping, row, seen_ids))
    else:
        raise ValueError(f"unknown corpus format {format!r}")
    return Corpus(records, source_description=str(path))


def _date_payload(date: RecordDate | None):
    if date is None:
        return None
    return {
        "raw": date.raw,
        "year": date.jalali_year,
        "month": date.jalali_month,
        "day": date.jalali_day,
    }


def save_corpus(corpus: Corpus, path, format: str = "jsonl") -> None:
    """Serialize with the stable field order id..date; lists stay JSON."""
    path = Path(path)
    rows = []
    for record in corpus.records:
        rows.append(
            {
                "id": record.id,
                "title": record.title,
                "content": record.content,
                "lead": record.lead,
                "tags": record.tags,
                "classes": record.classes,
                "law_type": record.law_type.value,
                "category": record.category,
                "date": _date_payload(record.date),
            }
        )
    if format == "jsonl":
        with path.open("w", encoding="utf-8") as handle:
            for payload in rows:
                handle.write(json.dumps(payload, ensure_ascii=False) + "\n")
    elif format == "csv":
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(_FIELD_ORDER))
            writer.writeheader()
            for payload in rows:
                for name in ("tags", "classes", "date"):
                    payload[name] = json.dumps(payload[name], ensure_ascii=False)
                writer.writerow(payload)
    else:
        raise ValueError(f"unknown corpus format {format!r}")


# --- saved detail pages ----------------------------------------------------

_REGIONS = ("id", "title", "content", "lead", "tags", "classes", "type", "category", "date")


class _RegionExtractor(HTMLParser):
    """Collect text chunks per law-* region; list items become entries."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self._stack: list[tuple[str, str | None]] = []
        self.chunks: dict[str, list[str]] = {}
        self.items: dict[str, list[str]] = {}
        self._open_item: str | None = None

    def _active_region(self) -> str | None:
        for _, region in reversed(self._stack):
            if region is not None:
                return region
        return None

    def handle_starttag(self, tag, attrs):
        region = None
        for name, value in attrs:
            if name == "class" and value:
                for token in value.split():
                    if token.startswith("law-") and token[4:] in _REGIONS:
                        region = token[4:]
        self._stack.append((tag, region))
        if region is not None and region not in self.chunks:
            self.chunks[region] = []
        if tag == "li" and self._active_region() in ("tags", "classes"):
            self._open_item = self._active_region()
            self.items.setdefault(self._open_item, []).append("")

    def handle_endtag(self, tag):
        if tag == "li" and self._open_item is not None:
            self._open_item = None
        for index in range(len(self._stack) - 1, -1, -1):
            if self._stack[index][0] == tag:
                del self._stack[index:]
                break

    def handle_data(self, data):
        region = self._active_region()
        if region is None or not data.strip():
            return
        if self._open_item is not None:
            self.items[self._open_item][-1] += " " + data
        else:
            self.chunks[region].append(data)


def _joined(chunks: list[str]) -> str:
    return " ".join(" ".join(chunks).split())


def parse_html_record(html: str) -> LawRecord:
    """Extract a LawRecord from a saved detail page.

    Regions are located by class names law-id, law-title, law-content,
    law-lead, law-tags, law-classes, law-type, law-category, law-date.
    Markup inside a region is stripped; text fragments join with single
    spaces.
    """
    extractor = _RegionExtractor()
    extractor.feed(html)
    extractor.close()

    def text_of(region: str, required: bool = True) -> str:
        if region not in extractor.chunks and region not in extractor.items:
            if required:
                raise StructureMismatch(region)
            return ""
        return _joined(extractor.chunks.get(region, []))

    def list_of(region: str) -> list[str]:
        if region not in extractor.chunks and region not in extractor.items:
            raise StructureMismatch(region)
        items = [" ".join(item.split()) for item in extractor.items.get(region, [])]
        items = [item for item in items if item]
        if items:
            return items
        joined = _joined(extractor.chunks.get(region, []))
        return [part.strip() for part in joined.split(",") if part.strip()]

    return LawRecord(
        id=text_of("id"),
        title=text_of("title"),
        content=text_of("content"),
        law_type=parse_law_type(text_of("type")),
        date=parse_record_date(text_of("date")),
        lead=text_of("lead", required=False),
        tags=list_of("tags"),
        classes=list_of("classes"),
        category=text_of("category"),
    )


# --- filtering and per-record measures --------------------------------------

def filter_by_type(corpus: Corpus, law_type: LawType) -> Corpus:
    kept = [record for record in corpus.records if record.law_type is law_type]
    return Corpus(kept, source_description=corpus.source_description)


def type_counts_by_year(corpus: Corpus) -> TrendTable:
    """Count records per (law type, Gregorian year); shares are per year."""
    for record in corpus.records:
        if record.date is None:
            raise MissingYear(record.id)
    if not corpus.records:
        return build_trend_table([], [], [], normalization=PER_YEAR)
    present = {record.law_type for record in corpus.records}
    row_types = [law_type for law_type in LawType if law_type in present]
    years = sorted({record.date.gregorian_year for record in corpus.records})
    year_index = {year: j for j, year in enumerate(years)}
    type_index = {law_type: i for i, law_type in enumerate(row_types)}
    counts = [[0] * len(years) for _ in row_types]
    for record in corpus.records:
        counts[type_index[record.law_type]][year_index[record.date.gregorian_year]] += 1
    return build_trend_table(
        [law_type.value for law_type in row_types], years, counts, normalization=PER_YEAR
    )


def length_ratio(record: LawRecord) -> float:
    """Title length over content length, in characters after trimming."""
    content_length = len(record.content.strip())
    if content_length == 0:
        raise EmptyContent(record.id)
    return len(record.title.strip()) / content_length


# --- synthetic corpora -------------------------------------------------------

@dataclass
class SynthConfig:
    n_docs: int
    n_topics: int
    vocab_size: int
    doc_length: int
    alpha: float = 1.0
    beta: float = 0.1
    years: tuple[int, ...] = (2020,)
    seed: int = 0

    def __post_init__(self):
        for name in ("n_docs", "n_topics", "vocab_size", "doc_length"):
            if getattr(self, name) < 1:
                raise InvalidConfig(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.alpha <= 0 or self.beta <= 0:
            raise InvalidConfig("alpha and beta must be positive")
        if not self.years:
            raise InvalidConfig("years must be non-empty")


@dataclass
class GroundTruth:
    doc_topic: np.ndarray
    topic_word: np.ndarray


def _synthetic_date(gregorian_year: int) -> RecordDate:
    # Jalali month 7 starts in late September, safely inside the target
    # Gregorian year for the whole study era.
    jalali_year = gregorian_year - 621
    return RecordDate.from_jalali(f"{jalali_year:04d}/07/01", jalali_year, 7, 1)


def generate_synthetic_corpus(config: SynthConfig) -> tuple[Corpus, GroundTruth]:
    """Sample documents from the mixture generative process.

    Each document draws a topic-share vector from Dirichlet(alpha); each
    topic draws a word distribution from Dirichlet(beta); every token
    picks a topic then a word. Deterministic under config.seed.
    """
    rng = np.random.default_rng(config.seed)
    topic_word = rng.dirichlet([config.beta] * config.vocab_size, size=config.n_topics)
    doc_topic = rng.dirichlet([config.alpha] * config.n_topics, size=config.n_docs)
    width = max(3, len(str(config.vocab_size - 1)))
    words = [f"w{term:0{width}d}" for term in range(config.vocab_size)]

    records = []
    for doc in range(config.n_docs):
        assignments = rng.choice(config.n_topics, size=config.doc_length, p=doc_topic[doc])
        token_ids = np.empty(config.doc_length, dtype=np.int64)
        for topic in np.unique(assignments):
            positions = assignments == topic
            token_ids[positions] = rng.choice(
                config.vocab_size, size=int(positions.sum()), p=topic_word[topic]
            )
        records.append(
            LawRecord(
                id=f"synth-{doc:05d}",
                title=f"synthetic law {doc:05d}",
                content=" ".join(words[token] for token in token_ids),
                law_type=LawType.REGULATION,
                date=_synthetic_date(config.years[doc % len(config.years)]),
            )
        )
    corpus = Corpus(records, source_description=f"synthetic corpus seed={config.seed}")
    return corpus, GroundTruth(doc_topic=doc_topic, topic_word=topic_word)

"""Text cleaning pipeline.

Five stages in fixed order: normalize, remove punctuation, tokenize,
remove stopwords, lemmatize. Each stage is idempotent on its own output,
so the composed pipeline is stable under re-runs.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .corpus import Corpus, LawRecord
from .errors import EmptyDocument, MissingYear

__all__ = [
    "PreprocessConfig",
    "LemmaRules",
    "Document",
    "ValidationReport",
    "normalize",
    "remove_punctuation",
    "tokenize",
    "remove_stopwords",
    "lemmatize",
    "preprocess_document",
    "preprocess_corpus",
    "validate_nonempty",
    "load_stopwords",
    "load_lemma_rules",
    "default_config",
]

# Arabic-codepoint variants folded to the Persian letters, Arabic-Indic
# and extended digits to Latin digits, elongation and half-space removed.
DEFAULT_NORMALIZE_CHARS: dict[str, str] = {
    "ي": "ی",  # Arabic Yeh -> Persian Yeh
    "ك": "ک",  # Arabic Kaf -> Persian Kaf
    "ة": "ه",  # Teh Marbuta -> Heh
    "أ": "ا",  # Alef with hamza above -> Alef
    "إ": "ا",  # Alef with hamza below -> Alef
    "ـ": "",        # tatweel (kashida) elongation
    "‌": "",        # zero-width non-joiner: rejoin half-spaced morphemes
}
for _offset in range(10):
    DEFAULT_NORMALIZE_CHARS[chr(0x0660 + _offset)] = str(_offset)
    DEFAULT_NORMALIZE_CHARS[chr(0x06F0 + _offset)] = str(_offset)

DEFAULT_PUNCTUATION: frozenset = frozenset(string.punctuation) | frozenset(
    "،؛؟«»٪٫٬…“”‘’—–×÷·"
)

_DEFAULT_TABLE = str.maketrans(DEFAULT_NORMALIZE_CHARS)


@dataclass
class LemmaRules:
    """Exception lexicon plus ordered suffix-strip rules.

    apply() runs to a fixed point, so a second pass never changes the
    token again. A suffix rule fires only when the rewritten token is
    non-empty and strictly shorter, which bounds the loop; exception
    hops carry a seen-set so lexicon cycles cannot hang.
    """

    exceptions: dict[str, str] = field(default_factory=dict)
    suffix_rules: list[tuple[str, str]] = field(default_factory=list)

    def apply(self, token: str) -> str:
        seen = {token}
        while True:
            replacement = self.exceptions.get(token, "")
            if replacement and replacement != token and replacement not in seen:
                token = replacement
                seen.add(token)
                continue
            best: tuple[str, str] | None = None
            for suffix, stem_tail in self.suffix_rules:
                if not token.endswith(suffix):
                    continue
                candidate = token[: len(token) - len(suffix)] + stem_tail
                if not candidate or len(candidate) >= len(token):
                    continue
                if best is None or len(suffix) > len(best[0]):
                    best = (suffix, candidate)
            if best is None:
                return token
            token = best[1]
            seen.add(token)


@dataclass
class PreprocessConfig:
    stopword_list: set[str] = field(default_factory=set)
    punctuation_set: frozenset = DEFAULT_PUNCTUATION
    lemma_rules: LemmaRules = field(default_factory=LemmaRules)
    min_token_length: int = 2
    normalize_chars: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_NORMALIZE_CHARS))


@dataclass
class Document:
    record_id: str
    tokens: list[str]
    gregorian_year: int


@dataclass
class ValidationReport:
    null_fields: list[str]
    empty_after_preprocess: list[str]

    def model_ready(self) -> bool:
        return not self.null_fields and not self.empty_after_preprocess


def normalize(text: str, normalize_chars: dict[str, str] | None = None) -> str:
    """Fold character variants, lowercase, and collapse whitespace runs.

    Lowercasing keeps Latin-alphabet material (loanwords, test fixtures)
    on one casing; Persian script has no case so it is a no-op there.
    """
    if normalize_chars is None:
        table = _DEFAULT_TABLE
    else:
        table = str.maketrans(normalize_chars)
    return " ".join(text.translate(table).lower().split())


def remove_punctuation(text: str, punctuation_set=None) -> str:
    marks = DEFAULT_PUNCTUATION if punctuation_set is None else punctuation_set
    return text.translate({ord(mark): " " for mark in marks})


def tokenize(text: str, min_token_length: int = 1) -> list[str]:
    return [token for token in text.split() if len(token) >= min_token_length]


def remove_stopwords(tokens: list[str], stopword_list) -> list[str]:
    return [token for token in tokens if token not in stopword_list]


def lemmatize(tokens: list[str], lemma_rules: LemmaRules) -> list[str]:
    return [lemma_rules.apply(token) for token in tokens]


def load_stopwords(path, normalize_chars: dict[str, str] | None = None) -> set[str]:
    """One token per line; blank lines and '#' comment lines skipped.

    Entries are normalized on load so that normalizing a stopword is
    always a no-op at match time.
    """
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(normalize(line, normalize_chars))
    return words


def _parse_lemma_rules(text: str, normalize_chars: dict[str, str] | None = None) -> LemmaRules:
    rules = LemmaRules()
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) >= 3 and parts[1].strip() == "=":
            word = normalize(parts[0], normalize_chars)
            lemma = normalize(parts[2], normalize_chars)
            rules.exceptions[word] = lemma
        else:
            suffix = normalize(parts[0], normalize_chars)
            replacement = normalize(parts[1], normalize_chars) if len(parts) > 1 else ""
            if suffix:
                rules.suffix_rules.append((suffix, replacement))
    return rules


def load_lemma_rules(path, normalize_chars: dict[str, str] | None = None) -> LemmaRules:
    return _parse_lemma_rules(Path(path).read_text(encoding="utf-8"), normalize_chars)


@lru_cache(maxsize=1)
def default_config() -> PreprocessConfig:
    """Config backed by the bundled Persian stopword and lemma-rule files."""
    data = resources.files("lextopic").joinpath("data")
    config = PreprocessConfig()
    config.stopword_list = {
        normalize(line.strip(), config.normalize_chars)
        for line in data.joinpath("stopwords_fa.txt").read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.strip().startswith("#")
    }
    config.lemma_rules = _parse_lemma_rules(
        data.joinpath("lemma_rules_fa.txt").read_text(encoding="utf-8"), config.normalize_chars
    )
    return config


def preprocess_document(record: LawRecord, config: PreprocessConfig | None = None) -> Document:
    """Run the full pipeline over title + " " + content.

    A lemma can land on a stopword or shrink below the length floor, so
    the stopword and length filters are re-checked on the lemmatized
    tokens; the output is then a fixed point of every stage.
    """
    if config is None:
        config = default_config()
    if record.date is None:
        raise MissingYear(record.id)
    text = normalize(f"{record.title} {record.content}", config.normalize_chars)
    text = remove_punctuation(text, config.punctuation_set)
    tokens = tokenize(text, config.min_token_length)
    tokens = remove_stopwords(tokens, config.stopword_list)
    tokens = lemmatize(tokens, config.lemma_rules)
    tokens = [
        token
        for token in tokens
        if len(token) >= config.min_token_length and token not in config.stopword_list
    ]
    if not tokens:
        raise EmptyDocument(record.id)
    return Document(record.id, tokens, record.date.gregorian_year)


def preprocess_corpus(
    corpus: Corpus, config: PreprocessConfig | None = None, on_empty: str = "error"
) -> list[Document]:
    """Preprocess every record; on_empty is "error" (raise) or "drop"."""
    if on_empty not in ("error", "drop"):
        raise ValueError(f"on_empty must be 'error' or 'drop', got {on_empty!r}")
    documents = []
    for record in corpus.records:
        try:
            documents.append(preprocess_document(record, config))
        except EmptyDocument:
            if on_empty == "error":
                raise
    return documents


def validate_nonempty(corpus: Corpus, config: PreprocessConfig | None = None) -> ValidationReport:
    """Report record ids with null-ish required fields or empty pipelines."""
    null_fields: list[str] = []
    empty_after: list[str] = []
    for record in corpus.records:
        if (
            not record.id.strip()
            or not record.title.strip()
            or not record.content.strip()
            or record.date is None
        ):
            null_fields.append(record.id)
            continue
        try:
            preprocess_document(record, config)
        except EmptyDocument:
            empty_after.append(record.id)
    return ValidationReport(null_fields=null_fields, empty_after_preprocess=empty_after)

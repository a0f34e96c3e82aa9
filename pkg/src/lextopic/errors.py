"""Exception hierarchy.

Every error names the pipeline stage it originated from via the class
attribute ``module``, so the CLI can report module-qualified failures.
"""

from __future__ import annotations


class LextopicError(Exception):
    """Base class for all package errors."""

    module = "lextopic"


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

class CorpusError(LextopicError):
    module = "corpus"


class MissingField(CorpusError):
    def __init__(self, row: int, field: str):
        self.row = row
        self.field = field
        super().__init__(f"row {row}: missing or empty required field {field!r}")


class DuplicateId(CorpusError):
    def __init__(self, record_id: str, row: int | None = None):
        self.record_id = record_id
        self.row = row
        where = f"row {row}: " if row is not None else ""
        super().__init__(f"{where}duplicate record id {record_id!r}")


class UnknownLawType(CorpusError):
    def __init__(self, value: str, row: int | None = None):
        self.value = value
        self.row = row
        where = f"row {row}: " if row is not None else ""
        super().__init__(f"{where}unknown law type {value!r}")


class MalformedDate(CorpusError):
    def __init__(self, raw: object, row: int | None = None):
        self.raw = raw
        self.row = row
        where = f"row {row}: " if row is not None else ""
        super().__init__(f"{where}malformed date {raw!r}")


class StructureMismatch(CorpusError):
    def __init__(self, selector: str):
        self.selector = selector
        super().__init__(f"required page region {selector!r} not found")


class EmptyContent(CorpusError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"record {record_id!r} has empty content")


class InvalidConfig(LextopicError):
    module = "config"

    def __init__(self, message: str):
        super().__init__(message)


# ---------------------------------------------------------------------------
# preprocess
# ---------------------------------------------------------------------------

class PreprocessError(LextopicError):
    module = "preprocess"


class EmptyDocument(PreprocessError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"record {record_id!r} yields no tokens after preprocessing")


# ---------------------------------------------------------------------------
# vectorize
# ---------------------------------------------------------------------------

class VectorizeError(LextopicError):
    module = "vectorize"


class EmptyVocabulary(VectorizeError):
    def __init__(self):
        super().__init__("no term survives the document-frequency filters")


class AllZero(VectorizeError):
    def __init__(self, scale: float):
        self.scale = scale
        super().__init__(f"every pseudo-count rounds to zero at scale {scale}")


# ---------------------------------------------------------------------------
# lda
# ---------------------------------------------------------------------------

class LdaError(LextopicError):
    module = "lda"


class EmptyMatrix(LdaError):
    def __init__(self):
        super().__init__("document-term matrix contains no tokens")


class TooLarge(LdaError):
    def __init__(self, n_states: int, bound: int):
        super().__init__(f"enumeration of {n_states} assignment vectors exceeds bound {bound}")


class VocabularyMismatch(LdaError):
    def __init__(self, detail: str):
        super().__init__(f"model vocabulary does not match: {detail}")


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

class AnalyzeError(LextopicError):
    module = "analyze"


class AlignmentMismatch(AnalyzeError):
    def __init__(self, detail: str):
        super().__init__(f"model documents do not align with corpus records: {detail}")


class MissingYear(AnalyzeError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"record {record_id!r} has no derivable year")


class UnknownTopicId(AnalyzeError):
    def __init__(self, topic_id: int):
        self.topic_id = topic_id
        super().__init__(f"label references topic id {topic_id} outside the model")

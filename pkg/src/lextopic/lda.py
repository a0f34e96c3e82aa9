"""Topic model fitting by collapsed Gibbs sampling, plus model scoring.

The sampler keeps integer count tables as plain nested lists because the
per-token resampling loop is pure Python; numpy enters only for the
per-sweep estimator averages and log-likelihood trace, where it works on
whole tables at once.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from .errors import EmptyMatrix, InvalidConfig, TooLarge, VocabularyMismatch
from .vectorize import DocTermMatrix, Vocabulary

__all__ = [
    "LdaConfig",
    "SamplerState",
    "LdaModel",
    "init_assignments",
    "gibbs_conditional",
    "gibbs_sweep",
    "fit",
    "exact_posterior",
    "collapsed_log_joint",
    "perplexity",
    "coherence_umass",
    "save_model",
    "load_model",
]

MODEL_FORMAT = "lextopic-model"
MODEL_VERSION = 1
_ENUMERATION_BOUND = 10**6


@dataclass
class LdaConfig:
    n_topics: int = 10
    alpha: float | None = None
    beta: float = 0.01
    sweeps: int = 1000
    burn_in: int = 500
    seed: int = 0
    input_mode: str = "counts"

    def __post_init__(self):
        if self.n_topics < 1:
            raise InvalidConfig(f"n_topics must be >= 1, got {self.n_topics}")
        if self.alpha is None:
            # Classic heuristic: total document-topic mass of 50.
            self.alpha = 50.0 / self.n_topics
        if self.alpha <= 0 or self.beta <= 0:
            raise InvalidConfig("alpha and beta must be positive")
        if self.sweeps < 1:
            raise InvalidConfig(f"sweeps must be >= 1, got {self.sweeps}")
        if not 0 <= self.burn_in < self.sweeps:
            raise InvalidConfig(
                f"burn_in must satisfy 0 <= burn_in < sweeps, got {self.burn_in}/{self.sweeps}"
            )
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidConfig(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if self.input_mode not in ("counts", "tfidf-pseudo"):
            raise InvalidConfig(f"input_mode must be 'counts' or 'tfidf-pseudo', got {self.input_mode!r}")


@dataclass
class SamplerState:
    """Per-token topic assignments with their running count tables.

    doc_tokens holds the term index of every token slot, expanded from
    the sparse matrix in (doc, term-sorted) order, so sweep order is
    deterministic. n_dk, n_kw, n_k, n_d are exact tallies of the
    assignments at all times.
    """

    doc_tokens: list[list[int]]
    assignments: list[list[int]]
    n_dk: list[list[int]]
    n_kw: list[list[int]]
    n_k: list[int]
    n_d: list[int]
    rng: np.random.Generator

    def recount(self) -> tuple[list[list[int]], list[list[int]], list[int], list[int]]:
        """Rebuild all four tables from assignments alone."""
        n_topics = len(self.n_k)
        n_terms = len(self.n_kw[0]) if self.n_kw else 0
        n_dk = [[0] * n_topics for _ in self.doc_tokens]
        n_kw = [[0] * n_terms for _ in range(n_topics)]
        n_k = [0] * n_topics
        n_d = [0] * len(self.doc_tokens)
        for doc, tokens in enumerate(self.doc_tokens):
            for slot, term in enumerate(tokens):
                topic = self.assignments[doc][slot]
                n_dk[doc][topic] += 1
                n_kw[topic][term] += 1
                n_k[topic] += 1
                n_d[doc] += 1
        return n_dk, n_kw, n_k, n_d


@dataclass
class LdaModel:
    config: LdaConfig
    doc_topic: np.ndarray
    topic_word: np.ndarray
    doc_ids: list[str]
    log_likelihood: list[float]
    vocab: Vocabulary | None = None

    def top_term_indices(self, topic: int, top_m: int) -> list[int]:
        """Term indices of the topic's top_m words, ties broken by index."""
        row = self.topic_word[topic]
        order = np.argsort(-row, kind="stable")
        return [int(term) for term in order[:top_m]]


def _expand_tokens(matrix: DocTermMatrix) -> list[list[int]]:
    doc_tokens = []
    for row in matrix.rows():
        tokens: list[int] = []
        for term, count in row:
            tokens.extend([term] * count)
        doc_tokens.append(tokens)
    return doc_tokens


def init_assignments(matrix: DocTermMatrix, config: LdaConfig) -> SamplerState:
    """Assign every token slot a uniform random topic; tally the tables."""
    if not matrix.counts:
        raise EmptyMatrix()
    rng = np.random.default_rng(config.seed)
    doc_tokens = _expand_tokens(matrix)
    n_topics = config.n_topics
    n_dk = [[0] * n_topics for _ in doc_tokens]
    n_kw = [[0] * matrix.n_terms for _ in range(n_topics)]
    n_k = [0] * n_topics
    n_d = [0] * len(doc_tokens)
    assignments = []
    for doc, tokens in enumerate(doc_tokens):
        z_doc = rng.integers(0, n_topics, size=len(tokens)).tolist()
        assignments.append(z_doc)
        for slot, term in enumerate(tokens):
            topic = z_doc[slot]
            n_dk[doc][topic] += 1
            n_kw[topic][term] += 1
            n_k[topic] += 1
            n_d[doc] += 1
    return SamplerState(doc_tokens, assignments, n_dk, n_kw, n_k, n_d, rng)


def gibbs_conditional(
    state: SamplerState, doc: int, slot: int, term: int, config: LdaConfig
) -> np.ndarray:
    """Collapsed resampling distribution for one token slot.

    p(topic = k) is proportional to
    (n_dk - i + alpha) * (n_kw - i + beta) / (n_k - i + V*beta),
    where -i removes the slot's current assignment from each table.
    Pure: the state is read, never written.
    """
    n_topics = config.n_topics
    n_terms = len(state.n_kw[0])
    vbeta = n_terms * config.beta
    current = state.assignments[doc][slot]
    weights = np.empty(n_topics)
    for k in range(n_topics):
        drop = 1 if k == current else 0
        weights[k] = (
            (state.n_dk[doc][k] - drop + config.alpha)
            * (state.n_kw[k][term] - drop + config.beta)
            / (state.n_k[k] - drop + vbeta)
        )
    return weights / weights.sum()


def gibbs_sweep(state: SamplerState, config: LdaConfig) -> SamplerState:
    """Resample every token slot once, in (doc, slot) order, in place.

    Matches gibbs_conditional exactly; the arithmetic is inlined because
    this loop dominates runtime. One uniform draw per slot comes from a
    single per-document generator call, keeping the stream deterministic.
    """
    n_topics = config.n_topics
    alpha = config.alpha
    beta = config.beta
    vbeta = len(state.n_kw[0]) * beta
    n_kw = state.n_kw
    n_k = state.n_k
    weights = [0.0] * n_topics
    for doc, tokens in enumerate(state.doc_tokens):
        if not tokens:
            continue
        z_doc = state.assignments[doc]
        nd = state.n_dk[doc]
        uniforms = state.rng.random(len(tokens)).tolist()
        for slot, term in enumerate(tokens):
            old = z_doc[slot]
            nd[old] -= 1
            n_kw[old][term] -= 1
            n_k[old] -= 1
            total = 0.0
            for k in range(n_topics):
                value = (nd[k] + alpha) * (n_kw[k][term] + beta) / (n_k[k] + vbeta)
                weights[k] = value
                total += value
            threshold = uniforms[slot] * total
            cumulative = 0.0
            new = n_topics - 1
            for k in range(n_topics):
                cumulative += weights[k]
                if cumulative > threshold:
                    new = k
                    break
            z_doc[slot] = new
            nd[new] += 1
            n_kw[new][term] += 1
            n_k[new] += 1
    return state


def _doc_topic_estimate(n_dk: np.ndarray, n_d: np.ndarray, alpha: float) -> np.ndarray:
    return (n_dk + alpha) / (n_d[:, None] + n_dk.shape[1] * alpha)


def _topic_word_estimate(n_kw: np.ndarray, n_k: np.ndarray, beta: float) -> np.ndarray:
    return (n_kw + beta) / (n_k[:, None] + n_kw.shape[1] * beta)


def _entry_arrays(matrix: DocTermMatrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    entries = sorted(matrix.counts.items())
    docs = np.array([key[0] for key, _ in entries], dtype=np.int64)
    terms = np.array([key[1] for key, _ in entries], dtype=np.int64)
    counts = np.array([count for _, count in entries], dtype=np.float64)
    return docs, terms, counts


def _log_likelihood(
    docs: np.ndarray,
    terms: np.ndarray,
    counts: np.ndarray,
    doc_topic: np.ndarray,
    topic_word: np.ndarray,
) -> float:
    token_probs = np.einsum("ek,ek->e", doc_topic[docs], topic_word[:, terms].T)
    return float(np.dot(counts, np.log(token_probs)))


def fit(
    matrix: DocTermMatrix,
    config: LdaConfig,
    vocab: Vocabulary | None = None,
    n_chains: int = 1,
):
    """Run the Gibbs sampler and average estimators past burn-in.

    Returns one LdaModel, or a list of per-chain models (chain c uses
    seed + c) when n_chains > 1; chains are independent and topic labels
    are not comparable across them.
    """
    if n_chains < 1:
        raise InvalidConfig(f"n_chains must be >= 1, got {n_chains}")
    if n_chains > 1:
        models = []
        for chain in range(n_chains):
            chain_config = LdaConfig(
                n_topics=config.n_topics,
                alpha=config.alpha,
                beta=config.beta,
                sweeps=config.sweeps,
                burn_in=config.burn_in,
                seed=config.seed + chain,
                input_mode=config.input_mode,
            )
            models.append(fit(matrix, chain_config, vocab))
        return models

    if not matrix.counts:
        raise EmptyMatrix()
    state = init_assignments(matrix, config)
    docs, terms, counts = _entry_arrays(matrix)
    doc_topic_sum = np.zeros((matrix.n_docs, config.n_topics))
    topic_word_sum = np.zeros((config.n_topics, matrix.n_terms))
    trace: list[float] = []
    samples = 0
    for sweep in range(config.sweeps):
        gibbs_sweep(state, config)
        n_dk = np.asarray(state.n_dk, dtype=np.float64)
        n_d = np.asarray(state.n_d, dtype=np.float64)
        n_kw = np.asarray(state.n_kw, dtype=np.float64)
        n_k = np.asarray(state.n_k, dtype=np.float64)
        doc_topic = _doc_topic_estimate(n_dk, n_d, config.alpha)
        topic_word = _topic_word_estimate(n_kw, n_k, config.beta)
        trace.append(_log_likelihood(docs, terms, counts, doc_topic, topic_word))
        if sweep >= config.burn_in:
            doc_topic_sum += doc_topic
            topic_word_sum += topic_word
            samples += 1
    return LdaModel(
        config=config,
        doc_topic=doc_topic_sum / samples,
        topic_word=topic_word_sum / samples,
        doc_ids=list(matrix.doc_ids),
        log_likelihood=trace,
        vocab=vocab,
    )


def collapsed_log_joint(
    doc_tokens: list[list[int]],
    assignments: list[list[int]],
    n_topics: int,
    n_terms: int,
    alpha: float,
    beta: float,
) -> float:
    """log p(words, assignments) with the mixing weights integrated out.

    Symmetric-prior Polya urn form: a product of gamma-function ratios
    over the count tables. Invariant under topic relabeling.
    """
    lgamma = math.lgamma
    n_kw = [[0] * n_terms for _ in range(n_topics)]
    n_k = [0] * n_topics
    log_p = 0.0
    for tokens, z_doc in zip(doc_tokens, assignments):
        n_dk = [0] * n_topics
        for term, topic in zip(tokens, z_doc):
            n_dk[topic] += 1
            n_kw[topic][term] += 1
            n_k[topic] += 1
        log_p += lgamma(n_topics * alpha) - lgamma(len(tokens) + n_topics * alpha)
        for count in n_dk:
            log_p += lgamma(count + alpha) - lgamma(alpha)
    for topic in range(n_topics):
        log_p += lgamma(n_terms * beta) - lgamma(n_k[topic] + n_terms * beta)
        for count in n_kw[topic]:
            log_p += lgamma(count + beta) - lgamma(beta)
    return log_p


def exact_posterior(matrix: DocTermMatrix, config: LdaConfig) -> tuple[np.ndarray, np.ndarray]:
    """Posterior means by brute-force enumeration of every assignment.

    Test oracle only: weights each of the K^N assignment vectors by its
    collapsed joint probability and averages the smoothed estimators.
    """
    doc_tokens = _expand_tokens(matrix)
    slots = [(doc, term) for doc, tokens in enumerate(doc_tokens) for term in tokens]
    n_slots = len(slots)
    n_states = config.n_topics**n_slots
    if n_states > _ENUMERATION_BOUND:
        raise TooLarge(n_states, _ENUMERATION_BOUND)
    n_topics = config.n_topics
    n_terms = matrix.n_terms
    n_docs = matrix.n_docs
    doc_lengths = [len(tokens) for tokens in doc_tokens]

    log_weights = np.empty(n_states)
    flat_states = product(range(n_topics), repeat=n_slots)
    slot_offsets = []
    offset = 0
    for length in doc_lengths:
        slot_offsets.append(offset)
        offset += length

    def tables_for(flat: tuple) -> tuple[list[list[int]], list[list[int]], list[int]]:
        n_dk = [[0] * n_topics for _ in range(n_docs)]
        n_kw = [[0] * n_terms for _ in range(n_topics)]
        n_k = [0] * n_topics
        for (doc, term), topic in zip(slots, flat):
            n_dk[doc][topic] += 1
            n_kw[topic][term] += 1
            n_k[topic] += 1
        return n_dk, n_kw, n_k

    for index, flat in enumerate(flat_states):
        per_doc = [
            list(flat[slot_offsets[doc]: slot_offsets[doc] + doc_lengths[doc]])
            for doc in range(n_docs)
        ]
        log_weights[index] = collapsed_log_joint(
            doc_tokens, per_doc, n_topics, n_terms, config.alpha, config.beta
        )
    log_weights -= log_weights.max()
    weights = np.exp(log_weights)
    weights /= weights.sum()

    doc_topic_mean = np.zeros((n_docs, n_topics))
    topic_word_mean = np.zeros((n_topics, n_terms))
    for weight, flat in zip(weights, product(range(n_topics), repeat=n_slots)):
        n_dk, n_kw, n_k = tables_for(flat)
        doc_topic = _doc_topic_estimate(
            np.asarray(n_dk, dtype=np.float64),
            np.asarray(doc_lengths, dtype=np.float64),
            config.alpha,
        )
        topic_word = _topic_word_estimate(
            np.asarray(n_kw, dtype=np.float64),
            np.asarray(n_k, dtype=np.float64),
            config.beta,
        )
        doc_topic_mean += weight * doc_topic
        topic_word_mean += weight * topic_word
    return doc_topic_mean, topic_word_mean


def perplexity(model: LdaModel, matrix: DocTermMatrix) -> float:
    """exp of the negative mean per-token log-likelihood under the model."""
    if matrix.n_terms != model.topic_word.shape[1]:
        raise VocabularyMismatch(
            f"matrix has {matrix.n_terms} terms, model expects {model.topic_word.shape[1]}"
        )
    if matrix.n_docs != model.doc_topic.shape[0]:
        raise VocabularyMismatch(
            f"matrix has {matrix.n_docs} documents, model expects {model.doc_topic.shape[0]}"
        )
    if not matrix.counts:
        raise EmptyMatrix()
    docs, terms, counts = _entry_arrays(matrix)
    total = counts.sum()
    log_lik = _log_likelihood(docs, terms, counts, model.doc_topic, model.topic_word)
    return float(np.exp(-log_lik / total))


def coherence_umass(model: LdaModel, matrix: DocTermMatrix, top_m: int = 10) -> list[float]:
    """Per-topic co-occurrence coherence over each topic's top_m words.

    Pairs are ordered by topic rank; each contributes
    ln((codoc(w_i, w_j) + 1) / codoc(w_j)) where codoc counts documents
    and w_j is the lower-ranked word. Higher is more coherent.
    """
    if top_m < 2:
        raise ValueError(f"top_m must be >= 2, got {top_m}")
    term_docs: dict[int, set] = {}
    for doc, term in matrix.counts:
        term_docs.setdefault(term, set()).add(doc)
    scores = []
    for topic in range(model.topic_word.shape[0]):
        top_terms = model.top_term_indices(topic, top_m)
        score = 0.0
        for j in range(1, len(top_terms)):
            docs_j = term_docs.get(top_terms[j], set())
            if not docs_j:
                raise ValueError(
                    f"topic {topic} top word (term {top_terms[j]}) occurs in no document"
                )
            for i in range(j):
                docs_i = term_docs.get(top_terms[i], set())
                score += math.log((len(docs_i & docs_j) + 1) / len(docs_j))
        scores.append(score)
    return scores


def _vocab_hash(vocab: Vocabulary | None, n_terms: int) -> str:
    if vocab is None:
        payload = f"anonymous:{n_terms}"
    else:
        payload = "\n".join(vocab.terms)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def save_model(model: LdaModel, path) -> None:
    """Versioned JSON dump; float repr round-trips, so reload is exact."""
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "config": {
            "n_topics": model.config.n_topics,
            "alpha": model.config.alpha,
            "beta": model.config.beta,
            "sweeps": model.config.sweeps,
            "burn_in": model.config.burn_in,
            "seed": model.config.seed,
            "input_mode": model.config.input_mode,
        },
        "vocabulary_hash": _vocab_hash(model.vocab, model.topic_word.shape[1]),
        "vocabulary": None
        if model.vocab is None
        else {"terms": model.vocab.terms, "df": model.vocab.df},
        "doc_ids": model.doc_ids,
        "doc_topic": [[float(x) for x in row] for row in model.doc_topic],
        "topic_word": [[float(x) for x in row] for row in model.topic_word],
        "log_likelihood": [float(x) for x in model.log_likelihood],
    }
    with Path(path).open("w", encoding="utf-8") as handle:
        json.dump(payload, handle, ensure_ascii=False)
        handle.write("\n")


def load_model(path) -> LdaModel:
    with Path(path).open(encoding="utf-8") as handle:
        payload = json.load(handle)
    if payload.get("format") != MODEL_FORMAT or payload.get("version") != MODEL_VERSION:
        raise VocabularyMismatch(
            f"not a {MODEL_FORMAT} v{MODEL_VERSION} file: "
            f"{payload.get('format')!r} v{payload.get('version')!r}"
        )
    vocab = None
    if payload["vocabulary"] is not None:
        terms = payload["vocabulary"]["terms"]
        vocab = Vocabulary(
            terms=terms,
            index={term: position for position, term in enumerate(terms)},
            df=payload["vocabulary"]["df"],
        )
    topic_word = np.array(payload["topic_word"], dtype=np.float64)
    expected = _vocab_hash(vocab, topic_word.shape[1])
    if payload["vocabulary_hash"] != expected:
        raise VocabularyMismatch("stored vocabulary hash does not match stored vocabulary")
    return LdaModel(
        config=LdaConfig(**payload["config"]),
        doc_topic=np.array(payload["doc_topic"], dtype=np.float64),
        topic_word=topic_word,
        doc_ids=payload["doc_ids"],
        log_likelihood=payload["log_likelihood"],
        vocab=vocab,
    )

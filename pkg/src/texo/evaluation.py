"""Corpus measurements: token lengths, UNK rate, curated/base compression,
and sequence-level agreement between predictions and references."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from texo.bpe import BaseTokenizer, BaseTokenizerError
from texo.catalog import UNK, CuratedVocabulary
from texo.normalizer import NormalizationError, NormalizationRuleset, normalize
from texo.tokenizer import LexError, encode

log = logging.getLogger(__name__)



@dataclass
class CorpusStats:
    sample_count: int = 0
    mean_token_length: float = 0.0
    max_token_length: int = 0
    unk_rate: float = 0.0
    compression_ratio: float | None = None
    base_mean_token_length: float | None = None
    skipped: int = 0
    errors: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.compression_ratio is None:
            del d["compression_ratio"]
            del d["base_mean_token_length"]
        return d


def read_corpus(path: str | Path) -> list[tuple[int, str]]:
    """Non-blank lines of a corpus file with their 1-based line numbers."""
    text = Path(path).read_text(encoding="utf-8")
    return [(n, line) for n, line in enumerate(text.splitlines(), 1) if line.strip()]


def base_encode_line(base: BaseTokenizer, text: str) -> list[int]:
    """Encode a whitespace-separated line word by word, each word carrying the boundary marker."""
    ids: list[int] = []
    for word in text.split():
        ids.extend(base.encode(base.boundary_marker + word))
    return ids


# worker state, set once per process
_state: dict = {}


def _init_worker(vocab, rules, base):
    _state["vocab"] = vocab
    _state["rules"] = rules
    _state["base"] = base


def _measure_chunk(chunk: Sequence[tuple[int, str]]):
    vocab, rules, base = _state["vocab"], _state["rules"], _state["base"]
    out = []
    for lineno, line in chunk:
        try:
            text = normalize(line, rules)
            ids = encode(vocab, text)
            unk = sum(1 for i in ids if i == UNK)
            base_len = None
            if base is not None:
                base_len = len(base_encode_line(base, text))
            out.append((lineno, len(ids), unk, base_len, None))
        except (NormalizationError, LexError, BaseTokenizerError) as exc:
            out.append((lineno, 0, 0, None, f"line {lineno}: {exc}"))
    return out


def _measure(lines, vocab, rules, base, jobs):
    size = max(1, math.ceil(len(lines) / (max(jobs, 1) * 4)))
    chunks = [lines[i:i + size] for i in range(0, len(lines), size)]
    if jobs <= 1 or len(chunks) <= 1:
        _init_worker(vocab, rules, base)
        results = [_measure_chunk(c) for c in chunks]
    else:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(vocab, rules, base)) as ex:
            results = list(ex.map(_measure_chunk, chunks))
    return [row for chunk in results for row in chunk]


def _aggregate(rows, with_base: bool) -> CorpusStats:
    stats = CorpusStats()
    total = unk = base_total = 0
    for lineno, length, n_unk, base_len, err in rows:
        if err is not None:
            stats.skipped += 1
            stats.errors.append(err)
            log.warning("skipping %s", err)
            continue
        stats.sample_count += 1
        total += length
        unk += n_unk
        stats.max_token_length = max(stats.max_token_length, length)
        if base_len is not None:
            base_total += base_len
    if stats.sample_count:
        stats.mean_token_length = total / stats.sample_count
    if total:
        stats.unk_rate = unk / total
    if with_base:
        base_mean = base_total / stats.sample_count if stats.sample_count else 0.0
        stats.base_mean_token_length = base_mean
        stats.compression_ratio = stats.mean_token_length / base_mean if base_mean else 0.0
    return stats


def token_length_stats(
    vocab: CuratedVocabulary,
    corpus: str | Path,
    normalizer: NormalizationRuleset | None = None,
    jobs: int = 1,
) -> CorpusStats:
    rules = normalizer if normalizer is not None else NormalizationRuleset.default()
    return _aggregate(_measure(read_corpus(corpus), vocab, rules, None, jobs), with_base=False)


def compare_tokenizers(
    curated: CuratedVocabulary,
    base: BaseTokenizer,
    corpus: str | Path,
    normalizer: NormalizationRuleset | None = None,
    jobs: int = 1,
) -> CorpusStats:
    rules = normalizer if normalizer is not None else NormalizationRuleset.default()
    return _aggregate(_measure(read_corpus(corpus), curated, rules, base, jobs), with_base=True)


def edit_distance(a: Sequence, b: Sequence) -> int:
    """Levenshtein distance with unit costs."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def normalized_edit_distance(a: Sequence, b: Sequence) -> float:
    return edit_distance(a, b) / max(len(a), len(b), 1)


def _ids_for_metrics(vocab, text, rules):
    try:
        text = normalize(text, rules)
    except NormalizationError:
        pass
    return encode(vocab, text)


def sequence_metrics(
    pred: str | Path,
    ref: str | Path,
    vocab: CuratedVocabulary,
    normalizer: NormalizationRuleset | None = None,
) -> dict:
    rules = normalizer if normalizer is not None else NormalizationRuleset.default()
    pred_lines = Path(pred).read_text(encoding="utf-8").splitlines()
    ref_lines = Path(ref).read_text(encoding="utf-8").splitlines()
    if len(pred_lines) != len(ref_lines):
        raise ValueError(f"line count mismatch: {len(pred_lines)} predictions vs {len(ref_lines)} references")
    return compare_sequences(pred_lines, ref_lines, vocab, rules)


def compare_sequences(
    preds: Iterable[str], refs: Iterable[str], vocab: CuratedVocabulary, rules: NormalizationRuleset
) -> dict:
    exact, dists, errors = [], [], []
    for n, (p, r) in enumerate(zip(preds, refs), 1):
        try:
            pi = _ids_for_metrics(vocab, p, rules)
            ri = _ids_for_metrics(vocab, r, rules)
        except LexError as exc:
            errors.append(f"line {n}: {exc}")
            exact.append(0.0)
            dists.append(1.0)
            continue
        exact.append(1.0 if pi == ri else 0.0)
        dists.append(normalized_edit_distance(pi, ri))
    count = len(exact)
    return {
        "sample_count": count,
        "exact_match": sum(exact) / count if count else 0.0,
        "edit_distance": sum(dists) / count if count else 0.0,
        "per_line": [{"exact_match": e, "edit_distance": d} for e, d in zip(exact, dists)],
        "errors": errors,
    }

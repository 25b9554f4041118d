"""Vocabulary transfer: re-map base embeddings onto the curated vocabulary.

Each curated token is tokenized by the base BPE (preferring the
word-initial ``marker + token`` form when both it and the bare token are base
tokens), and its new embedding row is the mean of the base rows it maps to.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from texo.bpe import BaseTokenizer, OutOfVocabularyError
from texo.catalog import BOS, EOS, PAD, UNK, CuratedVocabulary
from texo.tensor_io import EmbeddingMatrix

_SPECIAL_BY_ID = {PAD: "pad", BOS: "bos", EOS: "eos", UNK: "unk"}


class MappingError(ValueError):
    pass


@dataclass(frozen=True)
class TokenMapping:
    """``entries[i]`` lists the base ids whose rows are pooled into curated row ``i``."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for i, ids in enumerate(self.entries):
            if not ids:
                raise MappingError(f"curated id {i} maps to no base ids")
            if any(b < 0 for b in ids):
                raise MappingError(f"curated id {i} maps to a negative base id")

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def check_against(self, base_rows: int) -> None:
        for i, ids in enumerate(self.entries):
            bad = [b for b in ids if b >= base_rows]
            if bad:
                raise MappingError(f"curated id {i} maps to base ids {bad} >= {base_rows}")


def _special_entry(base: BaseTokenizer, name: str) -> tuple[int, ...]:
    sid = base.special_id(name)
    if sid is None:
        sid = base.special_id("unk")
    if sid is None:
        # no specials at all: start from the average base embedding
        return tuple(sorted(base.id_to_token))
    return (sid,)


def build_mapping(base: BaseTokenizer, curated: CuratedVocabulary) -> TokenMapping:
    entries: list[tuple[int, ...]] = []
    failed: list[str] = []
    marker = base.boundary_marker
    for i, tok in enumerate(curated.tokens):
        if i in _SPECIAL_BY_ID:
            entries.append(_special_entry(base, _SPECIAL_BY_ID[i]))
            continue
        if tok in base and marker + tok in base:
            # the word-initial form is itself a base token: use it whole
            entries.append((base.token_to_id[marker + tok],))
            continue
        try:
            entries.append(tuple(base.encode(tok)))
        except OutOfVocabularyError:
            failed.append(tok)
            entries.append(())
    if failed:
        raise MappingError(f"curated tokens not encodable by the base tokenizer: {failed}")
    return TokenMapping(tuple(entries))


def transfer_embeddings(E: EmbeddingMatrix, mapping: TokenMapping, target_rows: int) -> EmbeddingMatrix:
    if target_rows != len(mapping):
        raise MappingError(f"target_rows={target_rows} but mapping covers {len(mapping)} ids")
    mapping.check_against(E.rows)
    src = E.data.astype(np.float64)
    out = np.empty((target_rows, E.dim), dtype=np.float64)
    for i, ids in enumerate(mapping.entries):
        # sorted() only fixes the summation order; duplicates keep their weight
        out[i] = src[sorted(ids)].sum(axis=0) / len(ids)
    return EmbeddingMatrix(out.astype(np.float32))


def transfer_pair(
    E_in: EmbeddingMatrix,
    E_out: EmbeddingMatrix | None,
    mapping: TokenMapping,
    tied: bool = False,
) -> tuple[EmbeddingMatrix, EmbeddingMatrix]:
    """Transfer input and output tables; with ``tied`` the output reuses the input result."""
    new_in = transfer_embeddings(E_in, mapping, len(mapping))
    if tied:
        return new_in, new_in
    if E_out is None:
        raise MappingError("untied transfer needs an output projection matrix")
    return new_in, transfer_embeddings(E_out, mapping, len(mapping))


def embedding_param_count(vocab_size: int, dim: int, tied: bool = False) -> int:
    if vocab_size <= 0 or dim <= 0:
        raise ValueError("vocab_size and dim must be positive")
    n = vocab_size * dim
    return n if tied else 2 * n


def format_report(mapping: TokenMapping, curated: CuratedVocabulary) -> str:
    lines = []
    for i, ids in enumerate(mapping.entries):
        lines.append("\t".join([str(i), curated.tokens[i], *map(str, ids)]))
    return "\n".join(lines) + "\n"


def write_report(path: str | Path, mapping: TokenMapping, curated: CuratedVocabulary) -> None:
    Path(path).write_text(format_report(mapping, curated), encoding="utf-8")


def base_pieces(base: BaseTokenizer, ids: Sequence[int]) -> list[str]:
    return [base.id_to_token[i] for i in ids]

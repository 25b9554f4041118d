"""Character-level BPE over a published vocab/merges pair.

Only the merge loop is implemented; byte-level pre-tokenization and merge
training are not. Word-boundary markers are data: callers prepend
``boundary_marker`` themselves.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

METASPACE = "\u2581"

SPECIAL_TOKEN_NAMES = frozenset({"<pad>", "<s>", "</s>", "<unk>", "<mask>", "<|endoftext|>"})

_SPECIAL_NAMES = {
    "pad": ("<pad>",),
    "bos": ("<s>", "<|endoftext|>"),
    "eos": ("</s>", "<|endoftext|>"),
    "unk": ("<unk>", "<|endoftext|>"),
}


class BaseTokenizerError(ValueError):
    pass


class MissingMergeResultError(BaseTokenizerError):
    pass


class DuplicateIdError(BaseTokenizerError):
    pass


class ClosureError(BaseTokenizerError):
    pass


class OutOfVocabularyError(BaseTokenizerError):
    pass


@dataclass(frozen=True, eq=False)
class BaseTokenizer:
    token_to_id: dict[str, int]
    merges: tuple[tuple[str, str], ...] = ()
    boundary_marker: str = METASPACE
    id_to_token: dict[int, str] = field(init=False, repr=False)
    merge_ranks: dict[tuple[str, str], int] = field(init=False, repr=False)

    def __post_init__(self):
        inverse: dict[int, str] = {}
        for tok, i in self.token_to_id.items():
            if i in inverse:
                raise DuplicateIdError(f"id {i} assigned to both {inverse[i]!r} and {tok!r}")
            inverse[i] = tok
        ranks: dict[tuple[str, str], int] = {}
        for rank, (a, b) in enumerate(self.merges):
            if a + b not in self.token_to_id:
                raise MissingMergeResultError(
                    f"merge #{rank} ({a!r}, {b!r}) produces {a + b!r}, which is not in the vocabulary"
                )
            ranks.setdefault((a, b), rank)
        chars = {ch for tok in self.token_to_id if tok not in SPECIAL_TOKEN_NAMES for ch in tok}
        missing = sorted(chars - self.token_to_id.keys())
        if missing:
            raise ClosureError(f"characters used in tokens but absent as tokens: {missing[:20]!r}")
        object.__setattr__(self, "id_to_token", inverse)
        object.__setattr__(self, "merge_ranks", ranks)
        object.__setattr__(self, "_encode_cached", lru_cache(maxsize=65536)(self._encode))

    def __getstate__(self):
        state = dict(self.__dict__)
        state.pop("_encode_cached", None)
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        object.__setattr__(self, "_encode_cached", lru_cache(maxsize=65536)(self._encode))

    def __len__(self) -> int:
        return len(self.token_to_id)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def special_id(self, name: str) -> int | None:
        for tok in _SPECIAL_NAMES[name]:
            if tok in self.token_to_id:
                return self.token_to_id[tok]
        return None

    def bpe(self, word: str) -> list[str]:
        """Return the merged symbols of ``word``."""
        return list(self._encode_cached(word))

    def encode(self, word: str) -> list[int]:
        return [self.token_to_id[s] for s in self._encode_cached(word)]

    def decode(self, ids) -> str:
        return "".join(self.id_to_token[i] for i in ids)

    def _encode(self, word: str) -> tuple[str, ...]:
        for ch in word:
            if ch not in self.token_to_id:
                raise OutOfVocabularyError(f"character {ch!r} of {word!r} is not a base token")
        symbols = list(word)
        n = len(symbols)
        if n < 2:
            return tuple(symbols)
        ranks = self.merge_ranks
        nxt = list(range(1, n)) + [-1]
        prv = list(range(-1, n - 1))
        alive = [True] * n
        # (rank, left position, left symbol, right symbol); ties go to the leftmost pair
        heap = []
        for i in range(n - 1):
            r = ranks.get((symbols[i], symbols[i + 1]))
            if r is not None:
                heap.append((r, i, symbols[i], symbols[i + 1]))
        heapq.heapify(heap)
        while heap:
            r, i, a, b = heapq.heappop(heap)
            j = nxt[i]
            if not alive[i] or j < 0 or symbols[i] != a or symbols[j] != b:
                continue
            symbols[i] = a + b
            alive[j] = False
            nxt[i] = nxt[j]
            if nxt[j] >= 0:
                prv[nxt[j]] = i
            p = prv[i]
            if p >= 0:
                rp = ranks.get((symbols[p], symbols[i]))
                if rp is not None:
                    heapq.heappush(heap, (rp, p, symbols[p], symbols[i]))
            q = nxt[i]
            if q >= 0:
                rq = ranks.get((symbols[i], symbols[q]))
                if rq is not None:
                    heapq.heappush(heap, (rq, i, symbols[i], symbols[q]))
        return tuple(s for s, ok in zip(symbols, alive) if ok)


def _read_vocab(path: Path) -> dict[str, int]:
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        def no_duplicates(pairs):
            vocab = {}
            for tok, i in pairs:
                if tok in vocab:
                    raise DuplicateIdError(f"{path}: token {tok!r} listed twice")
                vocab[tok] = i
            return vocab

        return {tok: int(i) for tok, i in json.loads(text, object_pairs_hook=no_duplicates).items()}
    vocab = {}
    for lineno, line in enumerate(text.split("\n"), 1):
        if not line:
            continue
        tok, sep, i = line.rpartition("\t")
        if not sep:
            raise BaseTokenizerError(f"{path}:{lineno}: expected 'token<TAB>id'")
        if tok in vocab:
            raise DuplicateIdError(f"{path}:{lineno}: token {tok!r} listed twice")
        vocab[tok] = int(i)
    return vocab


def _read_merges(path: Path) -> list[tuple[str, str]]:
    merges = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").split("\n"), 1):
        if not line or line.startswith("#version"):
            continue
        parts = line.split(" ")
        if len(parts) != 2:
            raise BaseTokenizerError(f"{path}:{lineno}: expected 'left right'")
        merges.append((parts[0], parts[1]))
    return merges


def load_base(vocab_path: str | Path, merges_path: str | Path, marker: str = METASPACE) -> BaseTokenizer:
    vocab = _read_vocab(Path(vocab_path))
    merges = _read_merges(Path(merges_path))
    return BaseTokenizer(vocab, tuple(merges), marker)


def bpe_encode(base: BaseTokenizer, word: str) -> list[int]:
    return base.encode(word)

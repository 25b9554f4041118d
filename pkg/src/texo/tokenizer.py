"""Rule-based LaTeX tokenizer over a curated vocabulary.

Whitespace is lexed but never encoded. Decoding re-inserts the minimum amount
of whitespace needed for the output to lex back to the same ids.
"""

from __future__ import annotations

import re
from typing import AbstractSet, Iterable, Sequence

from texo.catalog import BOS, EOS, PAD, UNK, CuratedVocabulary

UNK_LITERAL = "<unk>"

_FUSED_ENV_RE = re.compile(r"\\(begin|end)\{([A-Za-z*]+)\}")
_CONTROL_WORD_RE = re.compile(r"\\[A-Za-z]+")
_WHITESPACE_RE = re.compile(r"\s+")


class LexError(ValueError):
    pass


def is_whitespace(lexeme: str) -> bool:
    return lexeme.isspace()


def lex(text: str, environments: AbstractSet[str] = frozenset()) -> list[str]:
    """Split ``text`` into lexemes whose concatenation is ``text``.

    At each position the first matching rule wins: fused ``\\begin{env}`` /
    ``\\end{env}`` for known environments, control word, control symbol,
    whitespace run, single character. The literal ``<unk>`` (what
    :func:`decode` prints for unknown tokens) is kept as one lexeme.
    """
    out: list[str] = []
    pos, n = 0, len(text)
    while pos < n:
        ch = text[pos]
        if ch == "\\":
            if pos + 1 >= n:
                raise LexError(f"lone backslash at end of input (position {pos})")
            m = _FUSED_ENV_RE.match(text, pos)
            if m and m.group(2) in environments:
                out.append(m.group(0))
                pos = m.end()
                continue
            m = _CONTROL_WORD_RE.match(text, pos)
            if m:
                out.append(m.group(0))
                pos = m.end()
            else:
                out.append(text[pos:pos + 2])
                pos += 2
        elif ch.isspace():
            m = _WHITESPACE_RE.match(text, pos)
            out.append(m.group(0))
            pos = m.end()
        elif ch == "<" and text.startswith(UNK_LITERAL, pos):
            out.append(UNK_LITERAL)
            pos += len(UNK_LITERAL)
        else:
            out.append(ch)
            pos += 1
    return out


def encode(vocab: CuratedVocabulary, text: str) -> list[int]:
    ids = []
    for lexeme in lex(text, vocab.environments):
        if lexeme.isspace():
            continue
        ids.append(vocab.token_to_id.get(lexeme, UNK))
    return ids


def encode_tokens(vocab: CuratedVocabulary, text: str) -> list[str]:
    """Like :func:`encode` but returns token strings (``<unk>`` for misses)."""
    return [vocab.tokens[i] for i in encode(vocab, text)]


def _is_control_word(token: str) -> bool:
    return _CONTROL_WORD_RE.fullmatch(token) is not None


def _needs_space(prev: str, nxt: str, environments: AbstractSet[str]) -> bool:
    if not _is_control_word(prev):
        return False
    if nxt[:1].isascii() and nxt[:1].isalpha():
        return True
    # keep a bare \begin + "{env}" from fusing on re-lex
    return prev in ("\\begin", "\\end") and nxt == "{" and bool(environments)


def decode(vocab: CuratedVocabulary, ids: Iterable[int]) -> str:
    size = len(vocab)
    pieces: list[str] = []
    for i in ids:
        if not 0 <= i < size:
            raise IndexError(f"token id {i} out of range for vocabulary of size {size}")
        if i in (PAD, BOS, EOS):
            continue
        tok = UNK_LITERAL if i == UNK else vocab.tokens[i]
        if pieces and _needs_space(pieces[-1], tok, vocab.environments):
            pieces.append(" ")
        pieces.append(tok)
    return "".join(pieces)


def decode_tokens(vocab: CuratedVocabulary, tokens: Sequence[str]) -> str:
    return decode(vocab, [vocab.id_of(t) for t in tokens])

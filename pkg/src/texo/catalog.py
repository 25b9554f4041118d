"""Macro catalog ingestion and curated vocabulary construction.

The curated vocabulary is laid out as::

    <pad> <s> </s> <unk> | 94 printable ASCII chars | sorted macros | fused envs

so that ids are stable across builds of the same catalog.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

PAD, BOS, EOS, UNK = 0, 1, 2, 3
SPECIAL_TOKENS = ("<pad>", "<s>", "</s>", "<unk>")

# printable ASCII minus space: "!" .. "~"
ASCII_SINGLES = tuple(chr(c) for c in range(33, 127))

CONTROL_WORD_RE = re.compile(r"\\[A-Za-z]+")
ENV_NAME_RE = re.compile(r"[A-Za-z*]+")


class CatalogError(ValueError):
    pass


def _is_control_word(s: str) -> bool:
    return CONTROL_WORD_RE.fullmatch(s) is not None


def _is_control_symbol(s: str) -> bool:
    return (
        len(s) == 2
        and s[0] == "\\"
        and s[1] not in string.ascii_letters
        and not s[1].isspace()
    )


@dataclass(frozen=True)
class MacroCatalog:
    control_words: frozenset[str] = frozenset()
    control_symbols: frozenset[str] = frozenset()
    environments: frozenset[str] = frozenset()

    def __post_init__(self):
        for w in self.control_words:
            if not _is_control_word(w):
                raise CatalogError(f"not a control word: {w!r}")
        for s in self.control_symbols:
            if not _is_control_symbol(s):
                raise CatalogError(f"not a control symbol: {s!r}")
        for e in self.environments:
            if not ENV_NAME_RE.fullmatch(e):
                raise CatalogError(f"bad environment name: {e!r}")

    @classmethod
    def from_entries(cls, commands: Iterable[str] = (), environments: Iterable[str] = ()):
        words, symbols = set(), set()
        for c in commands:
            (words if _is_control_word(c) else symbols).add(c)
        return cls(frozenset(words), frozenset(symbols), frozenset(environments))


def load_catalog(path: str | Path) -> MacroCatalog:
    """Read a line-oriented catalog file.

    Lines starting with ``\\`` are commands, ``env:<name>`` lines are
    environments; blank lines and ``#`` comments are skipped. Anything else
    raises :class:`CatalogError` carrying the 1-based line number.
    """
    words: set[str] = set()
    symbols: set[str] = set()
    envs: set[str] = set()
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("env:"):
            name = line[4:].strip()
            if not ENV_NAME_RE.fullmatch(name):
                raise CatalogError(f"line {lineno}: bad environment name {name!r}")
            envs.add(name)
        elif _is_control_word(line):
            words.add(line)
        elif _is_control_symbol(line):
            symbols.add(line)
        else:
            raise CatalogError(f"line {lineno}: malformed catalog entry {line!r}")
    return MacroCatalog(frozenset(words), frozenset(symbols), frozenset(envs))


def bundled_catalog_path() -> Path:
    return Path(str(resources.files("texo") / "data" / "katex_catalog.txt"))


def load_bundled_catalog() -> MacroCatalog:
    return load_catalog(bundled_catalog_path())


@dataclass(frozen=True)
class CuratedVocabulary:
    """Distilled token list; a token's id is its index in ``tokens``."""

    tokens: tuple[str, ...]
    token_to_id: dict[str, int] = field(init=False, repr=False, compare=False)
    environments: frozenset[str] = frozenset()

    def __post_init__(self):
        if tuple(self.tokens[:4]) != SPECIAL_TOKENS:
            raise CatalogError("vocabulary must start with <pad>, <s>, </s>, <unk>")
        mapping: dict[str, int] = {}
        for i, tok in enumerate(self.tokens):
            if not tok or any(ch.isspace() for ch in tok):
                raise CatalogError(f"token {i} is empty or contains whitespace: {tok!r}")
            if tok in mapping:
                raise CatalogError(f"duplicate token {tok!r} at ids {mapping[tok]} and {i}")
            mapping[tok] = i
        object.__setattr__(self, "token_to_id", mapping)
        if not self.environments:
            # recover fused environments so the lexer can use them
            envs = {
                tok[len("\\begin{"):-1]
                for tok in self.tokens
                if tok.startswith("\\begin{") and tok.endswith("}")
            }
            object.__setattr__(self, "environments", frozenset(envs))

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def id_of(self, token: str) -> int:
        return self.token_to_id.get(token, UNK)

    def save(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.tokens) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "CuratedVocabulary":
        lines = Path(path).read_text(encoding="utf-8").split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        return cls(tuple(lines))


def build_vocab(catalog: MacroCatalog, fuse_environments: bool = True) -> CuratedVocabulary:
    tokens: list[str] = list(SPECIAL_TOKENS)
    tokens.extend(ASCII_SINGLES)
    tokens.extend(sorted(catalog.control_words | catalog.control_symbols))
    envs: Sequence[str] = sorted(catalog.environments) if fuse_environments else ()
    for env in envs:
        tokens.append(f"\\begin{{{env}}}")
        tokens.append(f"\\end{{{env}}}")
    return CuratedVocabulary(tuple(tokens), environments=frozenset(envs))

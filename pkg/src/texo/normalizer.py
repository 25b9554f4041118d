"""LaTeX formula canonicalization applied before tokenization.

Steps run in a fixed order (comments, whitespace, synonyms, braces, scripts);
that order is what makes :func:`normalize` idempotent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping

from texo.tokenizer import LexError, lex

_CONTROL_WORD_RE = re.compile(r"\\[A-Za-z]+")
_WS_RE = re.compile(r"\s+")


class NormalizationError(ValueError):
    pass


def _single_lexeme(s: str) -> bool:
    try:
        return len(lex(s)) == 1 and not s.isspace()
    except LexError:
        return False


def load_synonyms(path: str | Path) -> dict[str, str]:
    table: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise NormalizationError(f"{path}:{lineno}: expected '<src>\\t<dst>'")
        table[parts[0].strip()] = parts[1].strip()
    return table


def default_synonyms_path() -> Path:
    return Path(str(resources.files("texo") / "data" / "synonyms.tsv"))


@dataclass(frozen=True)
class NormalizationRuleset:
    synonym_table: Mapping[str, str] = field(default_factory=dict)
    strip_comments: bool = True
    reduce_braces: bool = True
    canonicalize_scripts: bool = True

    def __post_init__(self):
        for src, dst in self.synonym_table.items():
            if not _single_lexeme(src) or not _single_lexeme(dst):
                raise NormalizationError(f"synonym {src!r} -> {dst!r} is not lexeme-to-lexeme")
            if dst in self.synonym_table:
                raise NormalizationError(f"synonym chain through {dst!r}")
        object.__setattr__(self, "synonym_table", dict(self.synonym_table))

    @classmethod
    def from_file(cls, path: str | Path, **flags) -> "NormalizationRuleset":
        return cls(load_synonyms(path), **flags)

    @classmethod
    def default(cls) -> "NormalizationRuleset":
        """Bundled synonym table with every step enabled."""
        return _default_rules()


@lru_cache(maxsize=1)
def _default_rules() -> NormalizationRuleset:
    return NormalizationRuleset.from_file(default_synonyms_path())


def strip_comments(text: str) -> str:
    """Drop ``%`` comments up to (not including) the newline; ``\\%`` is kept."""
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\\":
            out.append(text[i:i + 2])
            i += 2
        elif ch == "%":
            j = text.find("\n", i)
            i = n if j < 0 else j
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def collapse_whitespace(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


def replace_synonyms(text: str, table: Mapping[str, str]) -> str:
    if not table:
        return text
    lexemes = lex(text)
    out: list[str] = []
    for k, lx in enumerate(lexemes):
        rep = table.get(lx)
        if rep is None:
            out.append(lx)
            continue
        if out and _CONTROL_WORD_RE.fullmatch(out[-1]) and rep[:1].isascii() and rep[:1].isalpha():
            out.append(" ")
        out.append(rep)
        nxt = lexemes[k + 1] if k + 1 < len(lexemes) else ""
        if _CONTROL_WORD_RE.fullmatch(rep) and nxt[:1].isascii() and nxt[:1].isalpha():
            out.append(" ")
    return "".join(out)


def _parse_groups(lexemes: list[str]) -> list:
    """Nest lexemes into lists at ``{``/``}``; raises on imbalance."""
    root: list = []
    stack = [root]
    opened: list[int] = []
    offset = 0
    for lx in lexemes:
        if lx == "{":
            group: list = []
            stack[-1].append(group)
            stack.append(group)
            opened.append(offset)
        elif lx == "}":
            if len(stack) == 1:
                raise NormalizationError(f"unmatched '}}' at position {offset}")
            stack.pop()
            opened.pop()
        else:
            stack[-1].append(lx)
        offset += len(lx)
    if opened:
        raise NormalizationError(f"unclosed '{{' at position {opened[-1]}")
    return root


def _render(nodes: list, collapse: bool) -> str:
    parts = []
    for node in nodes:
        if isinstance(node, list):
            if collapse:
                while True:
                    inner = [c for c in node if not (isinstance(c, str) and c.isspace())]
                    if len(inner) == 1 and isinstance(inner[0], list):
                        node = inner[0]
                    else:
                        break
            parts.append("{" + _render(node, collapse) + "}")
        else:
            parts.append(node)
    return "".join(parts)


def strip_redundant_braces(text: str) -> str:
    """Collapse ``{{...}}`` wrappers: a group holding exactly one group becomes that group."""
    return _render(_parse_groups(lex(text)), collapse=True)


def check_balanced(text: str) -> None:
    _parse_groups(lex(text))


def canonicalize_scripts(text: str) -> str:
    """Brace single-lexeme super/subscripts: ``x^2`` -> ``x^{2}``."""
    lexemes = lex(text)
    _parse_groups(lexemes)
    out: list[str] = []
    i, n = 0, len(lexemes)
    while i < n:
        lx = lexemes[i]
        out.append(lx)
        i += 1
        if lx not in ("^", "_"):
            continue
        j = i
        while j < n and lexemes[j].isspace():
            j += 1
        if j >= n:
            raise NormalizationError(f"'{lx}' at end of input")
        arg = lexemes[j]
        if arg == "{":
            continue
        if arg in ("}", "^", "_"):
            raise NormalizationError(f"'{lx}' has no argument (found {arg!r})")
        out.append("{" + arg + "}")
        i = j + 1
    return "".join(out)


def normalize(text: str, rules: NormalizationRuleset | None = None) -> str:
    if rules is None:
        rules = NormalizationRuleset.default()
    if rules.strip_comments:
        text = strip_comments(text)
    text = collapse_whitespace(text)
    text = replace_synonyms(text, rules.synonym_table)
    if rules.reduce_braces:
        text = strip_redundant_braces(text)
    if rules.canonicalize_scripts:
        text = canonicalize_scripts(text)
    return text

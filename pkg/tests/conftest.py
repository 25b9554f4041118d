import json
from pathlib import Path

import pytest

from texo.bpe import BaseTokenizer, load_base
from texo.catalog import build_vocab, load_bundled_catalog
from texo.normalizer import NormalizationRuleset

DATA = Path(__file__).resolve().parents[1] / "src" / "texo" / "data"
SAMPLE_CORPUS = DATA / "sample_corpus.txt"
GPT2_VOCAB = DATA / "base" / "vocab.json"
GPT2_MERGES = DATA / "base" / "merges.txt"
GPT2_MARKER = "Ġ"

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def vocab():
    return build_vocab(load_bundled_catalog())


@pytest.fixture(scope="session")
def rules():
    return NormalizationRuleset.default()


@pytest.fixture(scope="session")
def gpt2():
    return load_base(GPT2_VOCAB, GPT2_MERGES, GPT2_MARKER)


@pytest.fixture
def tiny_base():
    return BaseTokenizer({"a": 0, "b": 1, "ab": 2, "▁ab": 3, "▁": 4}, (("a", "b"),))


@pytest.fixture
def write(tmp_path):
    def _write(name, content):
        path = tmp_path / name
        if isinstance(content, bytes):
            path.write_bytes(content)
        elif isinstance(content, (dict, list)):
            path.write_text(json.dumps(content, ensure_ascii=False), encoding="utf-8")
        else:
            path.write_text(content, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def acceptance_report():
    def _record(number, passed, detail):
        _acceptance_lines.append(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)

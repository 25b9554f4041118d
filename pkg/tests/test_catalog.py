import pytest

from texo.catalog import (
    ASCII_SINGLES,
    SPECIAL_TOKENS,
    CatalogError,
    CuratedVocabulary,
    MacroCatalog,
    build_vocab,
    load_bundled_catalog,
    load_catalog,
)


def test_load_single_control_word(write):
    cat = load_catalog(write("c.txt", "\\leftarrow\n"))
    assert cat.control_words == {"\\leftarrow"}
    assert not cat.control_symbols and not cat.environments


def test_load_empty_file(write):
    cat = load_catalog(write("c.txt", ""))
    assert cat == MacroCatalog()


def test_control_symbol(write):
    cat = load_catalog(write("c.txt", "\\,\n"))
    assert cat.control_symbols == {"\\,"}
    assert not cat.control_words


def test_comments_blank_lines_and_envs(write):
    cat = load_catalog(write("c.txt", "# header\n\n\\alpha\nenv:matrix\nenv:align*\n\\{\n"))
    assert cat.control_words == {"\\alpha"}
    assert cat.control_symbols == {"\\{"}
    assert cat.environments == {"matrix", "align*"}


@pytest.mark.parametrize("bad", ["alpha", "\\al pha", "env:", "env:bad name", "\\a1"])
def test_malformed_line_reports_line_number(write, bad):
    path = write("c.txt", "\\alpha\n# ok\n" + bad + "\n")
    with pytest.raises(CatalogError, match="line 3"):
        load_catalog(path)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_catalog(tmp_path / "nope.txt")


def test_empty_catalog_vocab_size():
    vocab = build_vocab(MacroCatalog())
    assert len(vocab) == 98
    assert vocab.tokens[:4] == SPECIAL_TOKENS
    assert vocab.tokens[4:] == ASCII_SINGLES
    assert " " not in vocab


def test_fused_environment_tokens():
    vocab = build_vocab(MacroCatalog.from_entries(environments=["matrix"]))
    assert "\\begin{matrix}" in vocab and "\\end{matrix}" in vocab
    assert len(vocab) == 100
    assert vocab.environments == {"matrix"}


def test_unfused_environments():
    vocab = build_vocab(MacroCatalog.from_entries(environments=["matrix"]), fuse_environments=False)
    assert len(vocab) == 98
    assert not vocab.environments


def test_size_formula_and_ordering():
    cat = MacroCatalog.from_entries(["\\beta", "\\alpha", "\\,", "\\{"], ["cases", "array"])
    vocab = build_vocab(cat)
    assert len(vocab) == 98 + 2 + 2 + 2 * 2
    assert vocab.tokens[98:102] == ("\\,", "\\alpha", "\\beta", "\\{")
    assert vocab.tokens[102:] == ("\\begin{array}", "\\end{array}", "\\begin{cases}", "\\end{cases}")


def test_bundled_catalog_within_band():
    cat = load_bundled_catalog()
    vocab = build_vocab(cat)
    assert 500 <= len(vocab) <= 900
    assert len(vocab) == 98 + len(cat.control_words) + len(cat.control_symbols) + 2 * len(cat.environments)
    for entry in cat.control_words | cat.control_symbols:
        assert vocab.tokens.count(entry) == 1


def test_build_is_deterministic():
    cat = load_bundled_catalog()
    assert build_vocab(cat).tokens == build_vocab(load_bundled_catalog()).tokens


def test_vocab_file_roundtrip(tmp_path):
    vocab = build_vocab(load_bundled_catalog())
    path = tmp_path / "vocab.txt"
    vocab.save(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[:4] == ["<pad>", "<s>", "</s>", "<unk>"]
    assert len(lines) == len(vocab)
    loaded = CuratedVocabulary.load(path)
    assert loaded.tokens == vocab.tokens
    assert loaded.environments == vocab.environments


def test_token_to_id_is_inverse():
    vocab = build_vocab(load_bundled_catalog())
    assert all(vocab.token_to_id[t] == i for i, t in enumerate(vocab.tokens))
    assert len(vocab.token_to_id) == len(vocab.tokens)


@pytest.mark.parametrize(
    "tokens",
    [
        ("<pad>", "<s>", "</s>", "<unk>", "a", "a"),
        ("<pad>", "<s>", "</s>", "<unk>", "a b"),
        ("<s>", "<pad>", "</s>", "<unk>"),
    ],
)
def test_vocab_invariants_enforced(tokens):
    with pytest.raises(CatalogError):
        CuratedVocabulary(tokens)


def test_catalog_rejects_bad_entries():
    with pytest.raises(CatalogError):
        MacroCatalog(control_words=frozenset({"\\a,"}))
    with pytest.raises(CatalogError):
        MacroCatalog(control_symbols=frozenset({"\\ab"}))

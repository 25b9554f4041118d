import math
import random

import numpy as np
import pytest

from texo.bpe import BaseTokenizer
from texo.catalog import MacroCatalog, build_vocab
from texo.catalog import CuratedVocabulary
from texo.tensor_io import EmbeddingMatrix
from texo.transfer import (
    MappingError,
    TokenMapping,
    build_mapping,
    embedding_param_count,
    format_report,
    transfer_embeddings,
    transfer_pair,
)

SPECIALS = ("<pad>", "<s>", "</s>", "<unk>")


def mean_oracle(E, ids):
    """Per-component mean accumulated in float64 with fsum, rounded once to float32."""
    return [np.float32(math.fsum(float(E[k][j]) for k in ids) / len(ids)) for j in range(len(E[0]))]


def test_tiny_instance_takes_marker_branch(tiny_base):
    curated = CuratedVocabulary(SPECIALS + ("ab",))
    mapping = build_mapping(tiny_base, curated)
    assert mapping[4] == (3,)


def test_bare_branch_when_marker_form_missing():
    base = BaseTokenizer({"a": 0, "b": 1, "ab": 2, "<unk>": 3}, (("a", "b"),))
    mapping = build_mapping(base, CuratedVocabulary(SPECIALS + ("ab", "ba")))
    assert mapping[4] == (2,)
    assert mapping[5] == (1, 0)


def test_marker_branch_requires_bare_token_too():
    # "▁ab" exists but "ab" itself does not: line 5 condition fails
    base = BaseTokenizer({"a": 0, "b": 1, "▁": 2, "▁a": 3, "▁ab": 4}, (("▁", "a"), ("▁a", "b")))
    mapping = build_mapping(base, CuratedVocabulary(SPECIALS + ("ab",)))
    assert mapping[4] == (0, 1)


def test_gpt2_mapping(gpt2, vocab):
    mapping = build_mapping(gpt2, vocab)
    assert len(mapping) == len(vocab)
    t = vocab.token_to_id
    assert mapping[t["x"]] == (gpt2.token_to_id["Ġx"],)
    assert [gpt2.id_to_token[i] for i in mapping[t["\\leftarrow"]]] == ["\\", "left", "arrow"]
    eot = gpt2.token_to_id["<|endoftext|>"]
    assert mapping[0] == mapping[1] == mapping[2] == mapping[3] == (eot,)
    assert all(ids and max(ids) < len(gpt2) for ids in mapping.entries)


def test_specials_map_by_name():
    base = BaseTokenizer({"<pad>": 0, "<s>": 1, "</s>": 2, "<unk>": 3, "x": 4})
    mapping = build_mapping(base, CuratedVocabulary(SPECIALS + ("x",)))
    assert mapping.entries[:4] == ((0,), (1,), (2,), (3,))


def test_specials_fall_back_to_unk():
    base = BaseTokenizer({"<unk>": 0, "x": 1, "<": 2, ">": 3, "u": 4, "n": 5, "k": 6})
    mapping = build_mapping(base, CuratedVocabulary(SPECIALS + ("x",)))
    assert mapping.entries[:4] == ((0,), (0,), (0,), (0,))


def test_unencodable_token_listed():
    base = BaseTokenizer({"<unk>": 0, "a": 1, "<": 2, ">": 3, "u": 4, "n": 5, "k": 6})
    with pytest.raises(MappingError, match="zz"):
        build_mapping(base, CuratedVocabulary(SPECIALS + ("a", "zz")))


def test_mapping_invariants():
    with pytest.raises(MappingError):
        TokenMapping(((0,), ()))
    with pytest.raises(MappingError):
        TokenMapping(((0,), (-1,)))


def test_singleton_is_exact_copy():
    E = EmbeddingMatrix(np.array([[0.1, 0.2], [0.3, 1e-30]], np.float32))
    out = transfer_embeddings(E, TokenMapping(((1,), (0,))), 2)
    assert out.data[0].tobytes() == E.data[1].tobytes()
    assert out.data[1].tobytes() == E.data[0].tobytes()


def test_pair_mean():
    E = EmbeddingMatrix(np.array([[1, 2], [3, 4]], np.float32))
    out = transfer_embeddings(E, TokenMapping(((0, 1),)), 1)
    assert out.data.tolist() == [[2.0, 3.0]]


def test_duplicates_keep_multiplicity():
    E = EmbeddingMatrix(np.array([[0.0], [3.0]], np.float32))
    out = transfer_embeddings(E, TokenMapping(((1, 1, 0),)), 1)
    assert out.data[0, 0] == 2.0


def test_random_against_oracle():
    rng = np.random.default_rng(7)
    E = EmbeddingMatrix(rng.standard_normal((8, 4)).astype(np.float32))
    prng = random.Random(7)
    entries = tuple(tuple(prng.randrange(8) for _ in range(prng.randint(1, 3))) for _ in range(6))
    out = transfer_embeddings(E, TokenMapping(entries), 6)
    for i, ids in enumerate(entries):
        expected = mean_oracle(E.data.tolist(), ids)
        assert np.allclose(out.data[i], expected, atol=1e-6, rtol=0)
        lo = E.data[list(ids)].min(axis=0)
        hi = E.data[list(ids)].max(axis=0)
        assert np.all(lo <= out.data[i]) and np.all(out.data[i] <= hi)


def test_transfer_errors():
    E = EmbeddingMatrix(np.zeros((2, 2), np.float32))
    with pytest.raises(MappingError):
        transfer_embeddings(E, TokenMapping(((0,),)), 2)
    with pytest.raises(MappingError):
        transfer_embeddings(E, TokenMapping(((5,),)), 1)


def test_transfer_pair_tied_and_untied():
    E_in = EmbeddingMatrix(np.array([[1, 1], [3, 3]], np.float32))
    E_out = EmbeddingMatrix(np.array([[0, 2], [4, 6]], np.float32))
    mapping = TokenMapping(((0, 1), (1,)))
    a, b = transfer_pair(E_in, E_out, mapping)
    assert a.data.tolist() == [[2, 2], [3, 3]]
    assert b.data.tolist() == [[2, 4], [4, 6]]
    a, b = transfer_pair(E_in, None, mapping, tied=True)
    assert a is b
    with pytest.raises(MappingError):
        transfer_pair(E_in, None, mapping)


@pytest.mark.parametrize(
    "vocab_size, dim, tied, expected",
    [
        (50000, 384, False, 38_400_000),
        (50000, 512, False, 51_200_000),
        (687, 384, False, 527_616),
        (687, 384, True, 263_808),
    ],
)
def test_param_count(vocab_size, dim, tied, expected):
    assert embedding_param_count(vocab_size, dim, tied) == expected


def test_param_count_rejects_nonpositive():
    with pytest.raises(ValueError):
        embedding_param_count(0, 384)


def test_report_format(tiny_base):
    curated = CuratedVocabulary(SPECIALS + ("ab",))
    report = format_report(build_mapping(tiny_base, curated), curated)
    assert report.splitlines()[-1] == "4\tab\t3"


def test_whole_bundled_vocab_transfers(gpt2):
    vocab = build_vocab(MacroCatalog.from_entries(["\\alpha", "\\frac"], ["matrix"]))
    mapping = build_mapping(gpt2, vocab)
    E = EmbeddingMatrix(np.ones((len(gpt2), 3), np.float32))
    out = transfer_embeddings(E, mapping, len(vocab))
    assert out.data.shape == (len(vocab), 3)
    assert np.all(out.data == 1.0)

"""Curated LaTeX vocabulary, tokenizer, and embedding transfer for formula recognition."""

from texo.bpe import BaseTokenizer, bpe_encode, load_base
from texo.catalog import (
    BOS,
    EOS,
    PAD,
    UNK,
    CuratedVocabulary,
    MacroCatalog,
    build_vocab,
    load_bundled_catalog,
    load_catalog,
)
from texo.evaluation import CorpusStats, compare_tokenizers, sequence_metrics, token_length_stats
from texo.normalizer import (
    NormalizationRuleset,
    canonicalize_scripts,
    normalize,
    strip_redundant_braces,
)
from texo.tensor_io import EmbeddingMatrix, read_tensor, write_tensor
from texo.tokenizer import decode, encode, lex
from texo.transfer import TokenMapping, build_mapping, embedding_param_count, transfer_embeddings

__version__ = "0.1.0"

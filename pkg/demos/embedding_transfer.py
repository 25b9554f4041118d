"""Initialize embeddings for the curated vocabulary from a base model's table."""

import tempfile
from pathlib import Path

import numpy as np

import texo
from texo.bpe import BaseTokenizer
from texo.transfer import format_report, transfer_pair

# a tiny base tokenizer: "ab" exists both bare and with the word marker
base = BaseTokenizer({"a": 0, "b": 1, "ab": 2, "▁ab": 3, "▁": 4}, (("a", "b"),))
curated = texo.CuratedVocabulary(("<pad>", "<s>", "</s>", "<unk>", "ab", "ba"))

mapping = texo.build_mapping(base, curated)
print(format_report(mapping, curated))

# each new row is the mean of the base rows it maps to
rng = np.random.default_rng(0)
E = texo.EmbeddingMatrix(rng.standard_normal((5, 3)).astype(np.float32))
new = texo.transfer_embeddings(E, mapping, len(curated))
print(new.data)
print("'ab' copies base row 3:", np.array_equal(new.data[4], E.data[3]))
print("'ba' is the mean of rows 1 and 0:", new.data[5], (E.data[1] + E.data[0]) / 2)

# input and output tables are transferred together; tied models share one
P = texo.EmbeddingMatrix(rng.standard_normal((5, 3)).astype(np.float32))
new_in, new_out = transfer_pair(E, P, mapping)
print(new_in.data.shape, new_out.data.shape)

# parameter count of the two tables before and after
print(texo.embedding_param_count(50000, 384))
print(texo.embedding_param_count(len(texo.build_vocab(texo.load_bundled_catalog())), 384))

# tables are stored in a small little-endian binary format
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "emb.bin"
    texo.write_tensor(path, new)
    print(path.stat().st_size, "bytes")
    print(texo.read_tensor(path) == new)

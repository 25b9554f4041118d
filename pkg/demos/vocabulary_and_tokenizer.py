"""Build the curated LaTeX vocabulary and tokenize a few formulas with it."""

import texo
from texo.bpe import load_base
from texo.tokenizer import encode_tokens
from importlib import resources

# the bundled catalog lists the KaTeX-supported commands and environments
catalog = texo.load_bundled_catalog()
vocab = texo.build_vocab(catalog)
print("catalog commands:", len(catalog.control_words) + len(catalog.control_symbols))
print("environments:    ", len(catalog.environments))
print("vocabulary size: ", len(vocab))
print("first tokens:    ", vocab.tokens[:8])

# every macro is one token, whitespace is dropped
formula = r"\frac { \alpha } { 2 } \leftarrow x ^ { 2 }"
print(encode_tokens(vocab, formula))
ids = texo.encode(vocab, formula)
print(ids)

# decoding gives compact LaTeX that lexes back to the same ids
text = texo.decode(vocab, ids)
print(text)
assert texo.encode(vocab, text) == ids

# environments are fused into one token when the catalog knows them
print(encode_tokens(vocab, r"\begin{pmatrix} a & b \end{pmatrix}"))

# unknown macros become <unk>
print(encode_tokens(vocab, r"\mymacro + 1"))

# compare with a general-purpose 50k BPE: the same macro costs several pieces
data = resources.files("texo") / "data" / "base"
gpt2 = load_base(data / "vocab.json", data / "merges.txt", marker="Ġ")
print(gpt2.bpe("Ġ" + r"\leftarrow"))

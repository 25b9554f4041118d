"""Measure token lengths on the sample corpus and score predictions."""

import tempfile
from importlib import resources
from pathlib import Path

import texo

data = resources.files("texo") / "data"
corpus = data / "sample_corpus.txt"
vocab = texo.build_vocab(texo.load_bundled_catalog())

stats = texo.token_length_stats(vocab, corpus)
print(stats.to_dict())

# against a general-purpose BPE, splitting words on whitespace
gpt2 = texo.load_base(data / "base" / "vocab.json", data / "base" / "merges.txt", marker="Ġ")
stats = texo.compare_tokenizers(vocab, gpt2, corpus, jobs=2)
print("curated", stats.mean_token_length, "base", stats.base_mean_token_length)
print("ratio", round(stats.compression_ratio, 3))

# exact match and token edit distance between predictions and references
with tempfile.TemporaryDirectory() as tmp:
    pred, ref = Path(tmp) / "pred.txt", Path(tmp) / "ref.txt"
    pred.write_text("x^{2}\n\\frac{a}{b}\nx \\le y\n", encoding="utf-8")
    ref.write_text("x^{3}\n\\frac{a}{b}\nx \\leq y\n", encoding="utf-8")
    report = texo.sequence_metrics(pred, ref, vocab)
    print(report["exact_match"], report["edit_distance"])
    print(report["per_line"])

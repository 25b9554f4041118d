"""Canonicalize formula spellings before tokenizing."""

import texo
from texo.normalizer import NormalizationRuleset, strip_comments

rules = NormalizationRuleset.default()
print(sorted(rules.synonym_table.items())[:4])

# comments go, whitespace collapses, synonyms map to one spelling
print(texo.normalize(r"x \le y   % a remark", rules))
print(texo.normalize("a ≤ b → c", rules))

# redundant brace layers are removed, one group is kept
print(texo.strip_redundant_braces(r"\frac{{a}}{{b+c}}"))

# bare script arguments get explicit braces
print(texo.canonicalize_scripts(r"a_\alpha^b"))

# the pipeline is idempotent
once = texo.normalize(r"{{x}}^2 \ne y", rules)
print(once, texo.normalize(once, rules) == once)

# steps can be switched off individually
raw = NormalizationRuleset(rules.synonym_table, reduce_braces=False, canonicalize_scripts=False)
print(texo.normalize(r"{{x}}^2 \ne y", raw))
print(repr(strip_comments("50\\% off % not this")))

# fewer tokens after normalization
vocab = texo.build_vocab(texo.load_bundled_catalog())
s = r"{ { x } } + { { y } } \le z"
print(len(texo.encode(vocab, s)), "->", len(texo.encode(vocab, texo.normalize(s, rules))))

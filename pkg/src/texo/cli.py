"""Command-line entry point: ``texo <subcommand> ...``.

Exit codes: 0 success, 1 operational error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from contextlib import contextmanager
from pathlib import Path

from texo.bpe import METASPACE, load_base
from texo.catalog import CuratedVocabulary, build_vocab, load_catalog
from texo.evaluation import compare_tokenizers, sequence_metrics, token_length_stats
from texo.normalizer import NormalizationRuleset, normalize
from texo.tensor_io import read_tensor, to_bytes
from texo.tokenizer import encode, encode_tokens
from texo.transfer import build_mapping, format_report, transfer_pair

log = logging.getLogger("texo")


class UsageError(Exception):
    pass


def _default_jobs() -> int:
    raw = os.environ.get("TEXO_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _require_files(*paths):
    for p in paths:
        if p is not None and not Path(p).is_file():
            raise FileNotFoundError(f"no such file: {p}")


def _require_out_dirs(*paths):
    for p in paths:
        if p is not None and not Path(p).resolve().parent.is_dir():
            raise FileNotFoundError(f"output directory does not exist: {Path(p).parent}")


class _Outputs:
    """Stage output files and publish them only if the command succeeds."""

    def __init__(self, partial: bool):
        self.partial = partial
        self.staged: list[tuple[Path, Path]] = []

    def path_for(self, target) -> Path:
        target = Path(target)
        if self.partial:
            return target
        fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.resolve().parent)
        os.close(fd)
        self.staged.append((Path(tmp), target))
        return Path(tmp)

    def commit(self):
        for tmp, target in self.staged:
            os.replace(tmp, target)
        self.staged.clear()

    def discard(self):
        for tmp, _ in self.staged:
            tmp.unlink(missing_ok=True)
        self.staged.clear()


@contextmanager
def _outputs(partial: bool):
    outs = _Outputs(partial)
    try:
        yield outs
    except BaseException:
        outs.discard()
        raise
    outs.commit()


def _write_text(outs: _Outputs, path, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        outs.path_for(path).write_text(text, encoding="utf-8")


def _read_input(path) -> str:
    if path is None:
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _rules(path) -> NormalizationRuleset:
    return NormalizationRuleset.from_file(path) if path else NormalizationRuleset.default()


def cmd_build_vocab(args, outs):
    _require_files(args.catalog)
    _require_out_dirs(args.out)
    vocab = build_vocab(load_catalog(args.catalog), fuse_environments=not args.no_fuse_env)
    vocab.save(outs.path_for(args.out))
    print(f"vocabulary size: {len(vocab)}")


def cmd_normalize(args, outs):
    _require_files(args.rules, args.in_)
    _require_out_dirs(args.out)
    rules = _rules(args.rules)
    lines = _read_input(args.in_).splitlines()
    out = [normalize(line, rules) for line in lines]
    _write_text(outs, args.out, "".join(o + "\n" for o in out))


def cmd_tokenize(args, outs):
    _require_files(args.vocab, args.in_)
    _require_out_dirs(args.out)
    vocab = CuratedVocabulary.load(args.vocab)
    out = []
    for line in _read_input(args.in_).splitlines():
        if args.tokens:
            out.append(" ".join(encode_tokens(vocab, line)))
        else:
            out.append(" ".join(map(str, encode(vocab, line))))
    _write_text(outs, args.out, "".join(o + "\n" for o in out))


def cmd_stats(args, outs):
    _require_files(args.vocab, args.corpus, args.rules, args.base_vocab, args.base_merges)
    _require_out_dirs(args.out)
    if (args.base_vocab is None) != (args.base_merges is None):
        raise UsageError("--base-vocab and --base-merges must be given together")
    vocab = CuratedVocabulary.load(args.vocab)
    rules = _rules(args.rules)
    if args.base_vocab:
        base = load_base(args.base_vocab, args.base_merges, args.marker)
        stats = compare_tokenizers(vocab, base, args.corpus, rules, jobs=args.jobs)
    else:
        stats = token_length_stats(vocab, args.corpus, rules, jobs=args.jobs)
    _write_text(outs, args.out, json.dumps(stats.to_dict(), indent=2) + "\n")


def cmd_transfer(args, outs):
    if not args.tied and (args.in_proj is None or args.out_proj is None):
        raise UsageError("--in-proj and --out-proj are required unless --tied is given")
    _require_files(args.base_vocab, args.base_merges, args.target_vocab, args.in_emb, args.in_proj)
    _require_out_dirs(args.out_emb, args.out_proj, args.report)
    base = load_base(args.base_vocab, args.base_merges, args.marker)
    curated = CuratedVocabulary.load(args.target_vocab)
    mapping = build_mapping(base, curated)
    E_in = read_tensor(args.in_emb)
    E_out = read_tensor(args.in_proj) if args.in_proj and not args.tied else None
    new_in, new_out = transfer_pair(E_in, E_out, mapping, tied=args.tied)
    outs.path_for(args.out_emb).write_bytes(to_bytes(new_in))
    if args.out_proj:
        outs.path_for(args.out_proj).write_bytes(to_bytes(new_out))
    if args.report:
        outs.path_for(args.report).write_text(format_report(mapping, curated), encoding="utf-8")
    log.info("transferred %d x %d -> %d x %d", E_in.rows, E_in.dim, new_in.rows, new_in.dim)


def cmd_metrics(args, outs):
    _require_files(args.vocab, args.pred, args.ref, args.rules)
    _require_out_dirs(args.out)
    vocab = CuratedVocabulary.load(args.vocab)
    report = sequence_metrics(args.pred, args.ref, vocab, _rules(args.rules))
    _write_text(outs, args.out, json.dumps(report, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--partial", action="store_true",
                        help="write outputs in place even if the command later fails")

    parser = argparse.ArgumentParser(prog="texo", description="Curated LaTeX vocabulary toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-vocab", parents=[common], help="build a curated vocabulary from a macro catalog")
    p.add_argument("--catalog", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-fuse-env", action="store_true")
    p.set_defaults(func=cmd_build_vocab)

    p = sub.add_parser("normalize", parents=[common], help="canonicalize formulas, one per line")
    p.add_argument("--rules")
    p.add_argument("--in", dest="in_")
    p.add_argument("--out")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("tokenize", parents=[common], help="encode formulas with a curated vocabulary")
    p.add_argument("--vocab", required=True)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--ids", action="store_true", help="space-separated ids (default)")
    fmt.add_argument("--tokens", action="store_true", help="space-separated token strings")
    p.add_argument("--in", dest="in_")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("stats", parents=[common], help="token length statistics over a corpus")
    p.add_argument("--vocab", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--rules")
    p.add_argument("--base-vocab")
    p.add_argument("--base-merges")
    p.add_argument("--marker", default=METASPACE)
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("transfer", parents=[common], help="transfer base embeddings to the curated vocabulary")
    p.add_argument("--base-vocab", required=True)
    p.add_argument("--base-merges", required=True)
    p.add_argument("--marker", required=True)
    p.add_argument("--target-vocab", required=True)
    p.add_argument("--in-emb", required=True)
    p.add_argument("--out-emb", required=True)
    p.add_argument("--in-proj")
    p.add_argument("--out-proj")
    p.add_argument("--tied", action="store_true")
    p.add_argument("--report")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("metrics", parents=[common], help="exact match and token edit distance")
    p.add_argument("--vocab", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--rules")
    p.add_argument("--out")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        with _outputs(args.partial) as outs:
            args.func(args, outs)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"texo: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, IndexError) as exc:
        print(f"texo {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

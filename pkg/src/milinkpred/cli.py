"""Command-line front end: ``stats``, ``run``, ``score`` and ``complexity``.

Exit codes: 0 ok, 2 I/O or unusable input, 3 protocol error (e.g. an empty
probe set), 4 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys

from . import __version__
from .bench import (ExperimentConfig, InfeasibleError, resolve_threads, run_complexity,
                    run_experiment)
from .evaluation import AucMode, rank_candidates
from .graph import EdgeListParseError, StatsError, giant_component, network_stats, read_edge_list
from .predictors import Scorer, ScorerKind
from .split import SplitError

log = logging.getLogger("milinkpred")

EXIT_OK, EXIT_IO, EXIT_PROTOCOL, EXIT_USAGE = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_list(cast):
    def parse(text):
        try:
            return [cast(t) for t in text.replace(",", " ").split()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def _predictors(text):
    names = [t for t in text.replace(",", " ").split() if t]
    if names == ["all"]:
        return list(ScorerKind)
    try:
        return [ScorerKind.parse(t) for t in names]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="milinkpred", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("stats", help="topology statistics of the giant component")
    s.add_argument("file")
    s.add_argument("--no-gc", action="store_true", help="use the whole graph")
    s.add_argument("--threads", default=None)

    r = sub.add_parser("run", help="repeated train/probe evaluation")
    r.add_argument("file")
    r.add_argument("--runs", type=int, default=100)
    r.add_argument("--fraction", type=float, default=0.1)
    r.add_argument("--predictors", default="all", help="comma list or 'all'")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--top-l", type=int, default=100)
    r.add_argument("--auc", default="auto", help="exact | auto | sampled:N")
    r.add_argument("--threads", default=None, help="int or 'auto' (env LINKPRED_THREADS)")
    r.add_argument("--out", default=None, help="output path (default stdout)")
    r.add_argument("--format", choices=("json", "csv"), default="json")
    r.add_argument("--no-gc", action="store_true")
    r.add_argument("--no-elapsed", action="store_true",
                   help="omit timings so JSON output is byte-reproducible")

    c = sub.add_parser("score", help="score pairs using the whole graph as training set")
    c.add_argument("file")
    c.add_argument("--predictor", required=True)
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--pairs", help="file with one 'label label' pair per line")
    g.add_argument("--top", type=int, help="emit the K best-scored non-edges")

    x = sub.add_parser("complexity", help="time MI vs CAR/CRA on random graphs")
    x.add_argument("--sizes", type=_csv_list(int), default=[2000])
    x.add_argument("--degrees", type=_csv_list(float), default=[4.0, 8.0, 16.0])
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--predictors", default="mi,car,cra")
    x.add_argument("--repeats", type=int, default=3)
    x.add_argument("--max-seconds", type=float, default=600.0)
    x.add_argument("--json", action="store_true")
    return p


def _fmt(v: float) -> str:
    return "-inf" if v == -math.inf else f"{v:.6f}"


def cmd_stats(args, out) -> int:
    g = read_edge_list(args.file)
    if not args.no_gc:
        g = giant_component(g)
    st = network_stats(g, threads=resolve_threads(args.threads))
    out.write(st.to_json() + "\n")
    return EXIT_OK


def cmd_run(args, out) -> int:
    cfg = ExperimentConfig(
        probe_fraction=args.fraction, runs=args.runs, predictors=_predictors(args.predictors),
        seed=args.seed, l=args.top_l, auc_mode=AucMode.parse(args.auc),
        threads=resolve_threads(args.threads), giant_component=not args.no_gc)
    g = read_edge_list(args.file)
    result = run_experiment(g, cfg, dataset=args.file)
    if args.format == "json":
        text = result.to_json(include_elapsed=not args.no_elapsed) + "\n"
    else:
        text = result.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _read_pairs(path, g):
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith(("#", "%")):
                continue
            tok = s.split()
            if len(tok) < 2:
                raise EdgeListParseError(lineno, line)
            pairs.append((g.node_id(tok[0]), g.node_id(tok[1])))
    return pairs


def cmd_score(args, out) -> int:
    kind = ScorerKind.parse(args.predictor)
    g = read_edge_list(args.file)
    scorer = Scorer(kind, g)
    lab = g.labels
    if args.top is not None:
        if args.top < 1:
            raise UsageError("--top must be >= 1")
        ranked = rank_candidates(g, scorer)
        for u, v, s in ranked.top(args.top):
            out.write(f"{lab[u]}\t{lab[v]}\t{_fmt(s)}\n")
        return EXIT_OK
    for x, y in _read_pairs(args.pairs, g):
        s = scorer.score(x, y)
        flag = ""
        if g.has_edge(x, y):
            log.warning("pair (%s, %s) is an existing edge; scored anyway", lab[x], lab[y])
            flag = "\tedge"
        out.write(f"{lab[x]}\t{lab[y]}\t{_fmt(s)}{flag}\n")
    return EXIT_OK


def cmd_complexity(args, out) -> int:
    kinds = _predictors(args.predictors)
    res = run_complexity(args.sizes, args.degrees, seed=args.seed, predictors=kinds,
                         repeats=args.repeats, max_seconds=args.max_seconds)
    out.write((json.dumps(res.to_dict(), sort_keys=True, indent=2) if args.json
               else res.table()) + "\n")
    return EXIT_OK


COMMANDS = {"stats": cmd_stats, "run": cmd_run, "score": cmd_score,
            "complexity": cmd_complexity}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (OSError, EdgeListParseError, StatsError, UnicodeDecodeError) as exc:
        log.error("%s", exc)
        return EXIT_IO
    except KeyError as exc:
        log.error("%s", exc.args[0] if exc.args else exc)
        return EXIT_IO
    except (SplitError, InfeasibleError) as exc:
        log.error("%s", exc)
        return EXIT_PROTOCOL
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands: ``stats``, ``keywords``, ``network``, ``map`` and ``analyze``.
Parameters come from an INI config file (``--config``) and/or flags; flag
names are the config keys, and flags win over the file, which wins over
the defaults.

Exit codes: 0 success, 1 usage or config error, 2 input parse error,
3 nothing left to analyze after frequency pruning.
"""
from __future__ import annotations

import argparse
import configparser
import datetime as dt
import hashlib
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from .coword_net import CoWordNetwork, build_network
from .keyword_norm import (
    KeywordIndex,
    NormalizationRules,
    ThesaurusError,
    build_index,
    load_thesaurus,
    rank_keywords,
)
from .render import (
    edges_csv,
    export_network_dot,
    export_report_json,
    ranking_csv,
    render_map_svg,
    themes_csv,
)
from .strategic_map import build_strategic_map
from .theme_cluster import ClusterParams, simple_centers
from .wos_ingest import Corpus, CorpusStats, ParseError, corpus_stats, merge_corpora, parse_wos

log = logging.getLogger("cowordmap")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_EMPTY = 0, 1, 2, 3

# config key -> (section, default)
PARAMETERS = {
    "input-format": ("input", "auto"),
    "keyword-field": ("input", "author"),
    "min-freq": ("network", 3),
    "thesaurus": ("network", None),
    "min-theme-size": ("cluster", 3),
    "max-theme-size": ("cluster", 10),
    "max-themes": ("cluster", None),
    "origin-mode": ("map", "median"),
    "origin-centrality": ("map", None),
    "origin-density": ("map", None),
    "doc-count-mode": ("map", "any_member"),
    "output-dir": ("outputs", "."),
}

OUTPUT_FILES = {
    "stats": "stats.txt",
    "keywords-csv": "keywords.csv",
    "dot": "network.dot",
    "edges-csv": "edges.csv",
    "json": "report.json",
    "svg": "map.svg",
    "themes-csv": "themes.csv",
    "manifest": "manifest.txt",
}

CHOICES = {
    "input-format": ("auto", "plaintext", "tabdelimited"),
    "keyword-field": ("author", "plus"),
    "origin-mode": ("median", "mean", "explicit"),
    "doc-count-mode": ("any_member", "freq_sum"),
}
INT_KEYS = {"min-freq", "min-theme-size", "max-theme-size", "max-themes"}
FLOAT_KEYS = {"origin-centrality", "origin-density"}
PATH_KEYS = {"thesaurus", "output-dir"} | set(OUTPUT_FILES)


class ConfigError(Exception):
    pass


class EmptyAnalysis(Exception):
    pass


@dataclass
class PipelineConfig:
    inputs: list[Path]
    input_format: str = "auto"
    keyword_field: str = "author"
    min_freq: int = 3
    thesaurus_path: Optional[Path] = None
    cluster: ClusterParams = field(default_factory=ClusterParams)
    origin_mode: object = "median"
    doc_count_mode: str = "any_member"
    output_dir: Path = Path(".")
    outputs: dict[str, Path] = field(default_factory=dict)
    params: dict[str, object] = field(default_factory=dict)

    def output(self, kind: str) -> Path:
        return self.outputs.get(kind) or self.output_dir / OUTPUT_FILES[kind]


def _coerce(key: str, value):
    if value is None or value == "":
        return None
    if key in INT_KEYS:
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be an integer, got {value!r}") from None
    if key in FLOAT_KEYS:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be a number, got {value!r}") from None
    if key in CHOICES and value not in CHOICES[key]:
        raise ConfigError(f"{key} must be one of {', '.join(CHOICES[key])}, got {value!r}")
    return value


def read_config_file(path: Path) -> tuple[dict[str, object], list[Path]]:
    """Values and input paths from an INI file; relative paths resolve against its folder."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"bad config {path}: {exc}") from exc

    known = set(PARAMETERS) | set(OUTPUT_FILES) | {"inputs"}
    base = path.parent
    values: dict[str, object] = {}
    inputs: list[Path] = []
    for section in parser.sections():
        for key, raw in parser.items(section):
            if key not in known:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
            if key == "inputs":
                inputs = [base / p for p in raw.replace(",", "\n").split() if p]
                continue
            value = _coerce(key, raw.strip())
            if key in PATH_KEYS and value is not None:
                value = base / value
            values[key] = value
    return values, inputs


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """Merge defaults, config file and flags (flag > file > default)."""
    file_values: dict[str, object] = {}
    file_inputs: list[Path] = []
    if args.config:
        file_values, file_inputs = read_config_file(Path(args.config))

    params: dict[str, object] = {}
    for key in list(PARAMETERS) + list(OUTPUT_FILES):
        flag = getattr(args, key.replace("-", "_"), None)
        default = PARAMETERS[key][1] if key in PARAMETERS else None
        if flag is not None:
            value = _coerce(key, flag)
            if key in PATH_KEYS:
                value = Path(value)
        elif key in file_values:
            value = file_values[key]
        else:
            value = default
        params[key] = value

    inputs = [Path(p) for p in args.inputs] if args.inputs else file_inputs
    if not inputs:
        raise ConfigError("no input files given (positional arguments or [input] inputs)")
    inputs = sorted(inputs, key=lambda p: (p.name, str(p)))
    for p in inputs:
        if not p.is_file():
            raise ConfigError(f"input file not found: {p}")
    thesaurus = params["thesaurus"]
    if thesaurus is not None and not Path(thesaurus).is_file():
        raise ConfigError(f"thesaurus file not found: {thesaurus}")

    if params["min-freq"] < 1:
        raise ConfigError("min-freq must be >= 1")
    try:
        cluster = ClusterParams(params["min-theme-size"], params["max-theme-size"], params["max-themes"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    origin_mode: object = params["origin-mode"]
    if origin_mode == "explicit":
        if params["origin-centrality"] is None or params["origin-density"] is None:
            raise ConfigError("origin-mode explicit needs origin-centrality and origin-density")
        origin_mode = (params["origin-centrality"], params["origin-density"])

    return PipelineConfig(
        inputs=inputs,
        input_format=params["input-format"],
        keyword_field=params["keyword-field"],
        min_freq=params["min-freq"],
        thesaurus_path=Path(thesaurus) if thesaurus is not None else None,
        cluster=cluster,
        origin_mode=origin_mode,
        doc_count_mode=params["doc-count-mode"],
        output_dir=Path(params["output-dir"]),
        outputs={k: Path(params[k]) for k in OUTPUT_FILES if params[k] is not None},
        params=params,
    )


# -- pipeline stages -------------------------------------------------------


def load_corpus(config: PipelineConfig) -> Corpus:
    corpora = []
    for path in config.inputs:
        corpora.append(parse_wos(path.read_bytes(), str(path), config.input_format))
        log.info("parsed %s: %d records", path, len(corpora[-1]))
    return merge_corpora(corpora)


def load_index(config: PipelineConfig, corpus: Corpus) -> KeywordIndex:
    thesaurus = None
    if config.thesaurus_path is not None:
        try:
            thesaurus = load_thesaurus(config.thesaurus_path.read_bytes())
        except (ThesaurusError, UnicodeDecodeError) as exc:
            raise ConfigError(f"{config.thesaurus_path}: {exc}") from exc
    return build_index(corpus, config.keyword_field, NormalizationRules(thesaurus=thesaurus))


def load_network(config: PipelineConfig, index: KeywordIndex) -> CoWordNetwork:
    network = build_network(index, config.min_freq)
    if not network.nodes:
        raise EmptyAnalysis(
            f"no keywords reach min-freq {config.min_freq}; try a lower --min-freq"
        )
    log.info("network: %d nodes, %d edges", len(network.nodes), len(network.edges))
    return network


def load_map(config: PipelineConfig, network: CoWordNetwork, index: KeywordIndex):
    themes, residual = simple_centers(network, config.cluster)
    if not themes:
        raise EmptyAnalysis(
            f"no theme reaches min-theme-size {config.cluster.min_theme_size}; "
            "try a lower --min-freq or --min-theme-size"
        )
    log.info("themes: %d, residual keywords: %d", len(themes), len(residual))
    smap = build_strategic_map(themes, network, index, config.origin_mode, config.doc_count_mode)
    return themes, smap


def format_stats(stats: CorpusStats) -> str:
    span = f"{stats.year_span[0]}-{stats.year_span[1]}" if stats.year_span else "-"
    growth = "-" if stats.annual_growth_rate_pct is None else f"{stats.annual_growth_rate_pct:.2f}"
    rows = [
        ("Timespan", span),
        ("Sources (journals, books, other)", str(stats.source_count)),
        ("Documents", str(stats.document_count)),
        ("Annual growth rate %", growth),
        ("Keywords Plus", str(stats.keywords_plus_count)),
        ("Author keywords", str(stats.author_keyword_count)),
    ]
    width = max(len(k) for k, _ in rows)
    lines = [f"{k:<{width}}  {v}" for k, v in rows]
    if stats.per_year_counts:
        lines.append("")
        lines.append("Documents per year")
        lines.extend(f"  {y}  {n}" for y, n in stats.per_year_counts.items())
    return "\n".join(lines) + "\n"


def format_ranking(ranking: list[tuple[str, int]]) -> str:
    if not ranking:
        return "keyword  frequency\n"
    width = max(len("keyword"), max(len(t) for t, _ in ranking))
    lines = [f"{'keyword':<{width}}  frequency"]
    lines.extend(f"{t:<{width}}  {f}" for t, f in ranking)
    return "\n".join(lines) + "\n"


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(config: PipelineConfig, command: str, written: list[Path], timestamp: Optional[str]) -> Path:
    """``key: value`` lines: tool version, parameters, input and output digests."""
    if timestamp is None:
        timestamp = dt.datetime.now(dt.timezone.utc).replace(microsecond=0).isoformat()
    lines = [
        f"tool: cowordmap {__version__}",
        f"command: {command}",
        f"created: {timestamp}",
    ]
    for key in PARAMETERS:
        if key == "output-dir":
            continue
        value = config.params.get(key)
        lines.append(f"{key}: {'' if value is None else value}")
    for path in config.inputs:
        lines.append(f"input: {path} sha256={_sha256(path)}")
    for path in written:
        lines.append(f"output: {path} sha256={_sha256(path)}")
    target = config.output("manifest")
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return target


def _write(path: Path, data: bytes, written: list[Path]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    written.append(path)
    log.info("wrote %s", path)


# -- subcommands -----------------------------------------------------------


def cmd_stats(config: PipelineConfig, fmt: str = "text", out=None) -> int:
    out = out or sys.stdout
    stats = corpus_stats(load_corpus(config))
    if fmt == "json":
        payload = {
            "document_count": stats.document_count,
            "source_count": stats.source_count,
            "year_span": list(stats.year_span) if stats.year_span else None,
            "per_year_counts": {str(y): n for y, n in stats.per_year_counts.items()},
            "author_keyword_count": stats.author_keyword_count,
            "keywords_plus_count": stats.keywords_plus_count,
            "annual_growth_rate_pct": stats.annual_growth_rate_pct,
        }
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write(format_stats(stats))
    return EXIT_OK


def cmd_keywords(config: PipelineConfig, top_n: int = 20, fmt: str = "text", out=None) -> int:
    out = out or sys.stdout
    index = load_index(config, load_corpus(config))
    ranking = rank_keywords(index, top_n)
    if fmt == "csv":
        out.write(ranking_csv(ranking).decode("utf-8"))
    else:
        out.write(format_ranking(ranking))
    return EXIT_OK


def cmd_network(config: PipelineConfig, timestamp: Optional[str] = None) -> int:
    index = load_index(config, load_corpus(config))
    network = load_network(config, index)
    written: list[Path] = []
    _write(config.output("dot"), export_network_dot(network), written)
    _write(config.output("edges-csv"), edges_csv(network), written)
    write_manifest(config, "network", written, timestamp)
    return EXIT_OK


def cmd_map(config: PipelineConfig, timestamp: Optional[str] = None) -> int:
    index = load_index(config, load_corpus(config))
    network = load_network(config, index)
    _, smap = load_map(config, network, index)
    written: list[Path] = []
    _write(config.output("json"), export_report_json(smap), written)
    _write(config.output("svg"), render_map_svg(smap), written)
    _write(config.output("themes-csv"), themes_csv(smap), written)
    write_manifest(config, "map", written, timestamp)
    return EXIT_OK


def cmd_analyze(config: PipelineConfig, top_n: int = 20, timestamp: Optional[str] = None) -> int:
    corpus = load_corpus(config)
    index = load_index(config, corpus)
    written: list[Path] = []
    _write(config.output("stats"), format_stats(corpus_stats(corpus)).encode("utf-8"), written)
    _write(config.output("keywords-csv"), ranking_csv(rank_keywords(index, top_n)), written)
    network = load_network(config, index)
    themes, smap = load_map(config, network, index)
    _write(config.output("dot"), export_network_dot(network, themes), written)
    _write(config.output("edges-csv"), edges_csv(network), written)
    _write(config.output("json"), export_report_json(smap), written)
    _write(config.output("svg"), render_map_svg(smap), written)
    _write(config.output("themes-csv"), themes_csv(smap), written)
    write_manifest(config, "analyze", written, timestamp)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("inputs", nargs="*", help="WoS export files (plain text or tab-delimited)")
    common.add_argument("--config", help="INI config file")
    common.add_argument("--input-format", choices=CHOICES["input-format"])
    common.add_argument("--keyword-field", choices=CHOICES["keyword-field"])
    common.add_argument("--thesaurus", help="variant<TAB>canonical file")
    common.add_argument("--min-freq", type=int, help="minimum keyword document frequency (default 3)")
    common.add_argument("--min-theme-size", type=int)
    common.add_argument("--max-theme-size", type=int)
    common.add_argument("--max-themes", type=int)
    common.add_argument("--origin-mode", choices=CHOICES["origin-mode"])
    common.add_argument("--origin-centrality", type=float)
    common.add_argument("--origin-density", type=float)
    common.add_argument("--doc-count-mode", choices=CHOICES["doc-count-mode"])
    common.add_argument("--output-dir")
    for kind in OUTPUT_FILES:
        common.add_argument(f"--{kind}", metavar="PATH", help=f"output path (default {OUTPUT_FILES[kind]})")
    common.add_argument("--timestamp", help="fixed manifest timestamp for reproducible runs")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="cowordmap", description="Co-word science mapping from Web of Science exports")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stats", parents=[common], help="corpus statistics")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p = sub.add_parser("keywords", parents=[common], help="most frequent keywords")
    p.add_argument("--top", type=int, default=20)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    sub.add_parser("network", parents=[common], help="write DOT graph and CSV edge list")
    sub.add_parser("map", parents=[common], help="write JSON report and SVG strategic diagram")
    p = sub.add_parser("analyze", parents=[common], help="all outputs into --output-dir")
    p.add_argument("--top", type=int, default=20)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        config = resolve_config(args)
        if args.command == "stats":
            return cmd_stats(config, args.format)
        if args.command == "keywords":
            if args.top < 1:
                raise ConfigError("--top must be >= 1")
            return cmd_keywords(config, args.top, args.format)
        if args.command == "network":
            return cmd_network(config, args.timestamp)
        if args.command == "map":
            return cmd_map(config, args.timestamp)
        if args.command == "analyze":
            if args.top < 1:
                raise ConfigError("--top must be >= 1")
            return cmd_analyze(config, args.top, args.timestamp)
    except ConfigError as exc:
        print(f"cowordmap: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"cowordmap: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EmptyAnalysis as exc:
        print(f"cowordmap: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line driver. Exit codes: 0 success, 1 input error, 2 internal error."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .config import build_config
from .errors import AuditToolError
from .pipeline import run_audit, run_network, run_translate, write_artifacts

CONFIG_FLAGS = (
    "src_vec",
    "dst_vec",
    "lexicon",
    "cache",
    "words",
    "provider_config",
    "out",
    "targets",
    "src_lang",
    "dst_lang",
    "bin_width",
    "threshold",
    "sig_threshold",
    "multi_token",
    "side",
    "max_internal",
)


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--src-vec", dest="src_vec", help="source-language vector file")
    parser.add_argument("--dst-vec", dest="dst_vec", help="target-language vector file")
    parser.add_argument("--lexicon", help="bilingual lexicon TSV")
    parser.add_argument("--cache", help="translation cache TSV (source<TAB>target)")
    parser.add_argument("--words", help="plain word list, one word per line")
    parser.add_argument(
        "--provider-config",
        dest="provider_config",
        help="key=value config for the optional HTTP translation provider",
    )
    parser.add_argument("--out", help="output directory for artifacts")
    parser.add_argument(
        "--targets",
        help="4 comma-separated anchor words: X_src,Y_src,X_dst,Y_dst "
        "(default she,he,lei,lui)",
    )
    parser.add_argument("--src-lang", dest="src_lang", help="source language code")
    parser.add_argument("--dst-lang", dest="dst_lang", help="target language code")
    parser.add_argument("--bin-width", dest="bin_width", help="intensity bin width")
    parser.add_argument("--threshold", help="similarity network threshold")
    parser.add_argument(
        "--sig-threshold",
        dest="sig_threshold",
        help="report-level significance highlighting threshold",
    )
    parser.add_argument(
        "--multi-token",
        dest="multi_token",
        choices=["reject", "head", "mean"],
        help="policy for multi-token translations",
    )
    parser.add_argument(
        "--format",
        dest="formats",
        action="append",
        help="output format (repeatable): json, csv, markdown; "
        "edge-csv, dot for network",
    )
    parser.add_argument(
        "--side",
        choices=["src", "dst"],
        help="which lexicon column feeds the network word list",
    )
    parser.add_argument(
        "--max-internal",
        dest="max_internal",
        help="warn when anchor internal similarity exceeds this",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simbias",
        description="Audit gender bias in bilingual word-embedding spaces "
        "and machine-translation lexicons.",
    )
    parser.add_argument("--version", action="version", version=f"simbias {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    audit_parser = subparsers.add_parser("audit", help="run the full bilingual audit")
    _add_common_options(audit_parser)

    network_parser = subparsers.add_parser(
        "network", help="export the thresholded similarity network"
    )
    _add_common_options(network_parser)

    translate_parser = subparsers.add_parser(
        "translate", help="fill missing lexicon translations from cache/provider"
    )
    _add_common_options(translate_parser)

    serve_parser = subparsers.add_parser("serve", help="run the HTTP service")
    serve_parser.add_argument("--host", default="127.0.0.1")
    serve_parser.add_argument("--port", type=int, default=8000)
    return parser


def _collect_flags(args: argparse.Namespace) -> dict[str, object]:
    flags: dict[str, object] = {}
    for name in CONFIG_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            flags[name] = value
    formats = getattr(args, "formats", None)
    if formats:
        flags["formats"] = ",".join(formats)
    return flags


def _run_command(args: argparse.Namespace) -> int:
    config = build_config(_collect_flags(args), getattr(args, "config", None))
    if args.command == "audit":
        config.require("out")
        run = run_audit(config)
    elif args.command == "network":
        config.require("out")
        run = run_network(config)
    else:
        config.require("out")
        run = run_translate(config)
        for word in run.fill.unavailable:
            print(f"warning: no translation available for {word!r}", file=sys.stderr)
        for word, translation in run.fill.policy_violations:
            print(
                f"warning: multi-token translation {translation!r} for {word!r} "
                "rejected by policy",
                file=sys.stderr,
            )
    write_artifacts(config.out, run.artifacts)
    for line in run.summary:
        print(line, file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("simbias.service.app:app", host=args.host, port=args.port)
        return 0
    try:
        return _run_command(args)
    except AuditToolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - map anything else to exit 2
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()

"""Command-line entry point.

`hplus --p 7 --q 67` resolves every odd prime below the bound for one
conductor and prints the report; `--l` restricts to named primes.  A
config file holds `key = value` lines for any run option, and flags
given on the command line win over the file.
"""

import argparse
import sys
from pathlib import Path

from .errors import HplusError
from .pipeline import (
    STATUS_INCONCLUSIVE,
    RunConfig,
    render_csv,
    render_json,
    render_table,
    run,
)

_RENDERERS = {"json": render_json, "csv": render_csv, "table": render_table}

# config-file keys, with the RunConfig field and parser for each
_FILE_KEYS = {
    "p": ("p", int),
    "q": ("q", int),
    "l_bound": ("l_bound", int),
    "l": ("l_only", lambda s: tuple(int(t) for t in s.replace(",", " ").split())),
    "m_cap": ("m_cap", int),
    "prime_budget": ("prime_budget", int),
    "r_cap": ("r_cap", int),
    "precision_cap": ("precision_cap", int),
    "stabilization_window": ("stabilization_window", int),
    "cache": ("cache_path", str),
    "out": ("out_path", str),
}


def parse_config_file(path):
    """Run options from `key = value` lines; '#' starts a comment."""
    options = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _FILE_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown option {key!r}")
        field, parse = _FILE_KEYS[key]
        options[field] = parse(value.strip())
    return options


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hplus",
        description="l-parts of the class number h+ for the real "
        "cyclotomic field of conductor p*q",
    )
    parser.add_argument("--p", type=int, help="smaller prime of the conductor")
    parser.add_argument("--q", type=int, help="larger prime of the conductor")
    parser.add_argument("--l-bound", type=int, dest="l_bound",
                        help="resolve all odd primes below this bound")
    parser.add_argument("--l", type=int, action="append", dest="l_only",
                        metavar="L", help="resolve only this prime "
                        "(repeatable; overrides --l-bound)")
    parser.add_argument("--m-cap", type=int, dest="m_cap",
                        help="highest power of l tried as working modulus")
    parser.add_argument("--prime-budget", type=int, dest="prime_budget",
                        help="split primes consumed per modulus before giving up")
    parser.add_argument("--r-cap", type=int, dest="r_cap",
                        help="largest split prime the search may visit")
    parser.add_argument("--precision-cap", type=int, dest="precision_cap",
                        help="decimal digits the certificate pass may use")
    parser.add_argument("--cache", dest="cache_path",
                        help="JSON-lines cache of Frobenius polynomials")
    parser.add_argument("--out", dest="out_path",
                        help="write the rendered report here instead of stdout")
    parser.add_argument("--format", choices=sorted(_RENDERERS),
                        default="json", help="output format (default json)")
    parser.add_argument("--config", help="file of key = value run options")
    return parser


def config_from_args(args):
    options = parse_config_file(args.config) if args.config else {}
    for field in ("p", "q", "l_bound", "l_only", "m_cap", "prime_budget",
                  "r_cap", "precision_cap", "cache_path", "out_path"):
        value = getattr(args, field)
        if value is not None:
            options[field] = tuple(value) if field == "l_only" else value
    if "p" not in options or "q" not in options:
        raise ValueError("both --p and --q are required")
    return RunConfig(**options)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        report = run(config)
    except (ValueError, OSError, HplusError) as exc:
        print(f"hplus: {exc}", file=sys.stderr)
        return 1
    text = _RENDERERS[args.format](report)
    if config.out_path:
        Path(config.out_path).write_text(text)
    else:
        sys.stdout.write(text)
    unresolved = any(
        rpt["status"] == STATUS_INCONCLUSIVE for rpt in report["reports"]
    )
    return 2 if unresolved else 0


if __name__ == "__main__":
    sys.exit(main())

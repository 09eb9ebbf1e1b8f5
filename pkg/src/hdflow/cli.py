"""Command-line front end: ``hdflow selfmap | orbits | verify``.

Exit codes: 0 success, 1 a verified claim failed, 2 bad input,
3 unsupported prime, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BadLambda, FieldTooLarge, NotIrreducible
from .fields import parse_field, prime_field
from .selfmap import FORMAT_VERSION, GRAPH_CAP, build_selfmap, orbit_graph
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_RESOURCE = 0, 1, 2, 3, 4

CONFIG_KEYS = ("p", "field", "lambda", "format", "out", "pmax", "mode", "f", "seed", "suite")
INT_KEYS = ("p", "pmax", "f", "seed")


class InputError(Exception):
    pass


class UnsupportedPrime(Exception):
    pass


def _check_p(p) -> None:
    if p == 2:
        raise UnsupportedPrime("p = 2 is not supported")


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "lambda_":
            key = "lambda"
        if key not in CONFIG_KEYS:
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def effective_config(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    cfg = {"format": "text"}
    if args.command == "verify":
        cfg.update(mode="symbolic", seed=0)
    if args.config:
        cfg.update(read_config_file(args.config))
    for key in CONFIG_KEYS:
        value = getattr(args, key.replace("lambda", "lam"), None)
        if value is not None:
            cfg[key] = value
    for key in INT_KEYS:
        if key in cfg:
            try:
                cfg[key] = int(cfg[key])
            except ValueError:
                raise InputError(f"{key} must be an integer, got {cfg[key]!r}") from None
    cfg["command"] = args.command
    return dict(sorted(cfg.items()))


def _field_and_lambda(cfg: dict, default_symbolic: bool):
    p = cfg.get("p")
    if p is None:
        raise InputError("-p is required")
    _check_p(p)
    lam = cfg.get("lambda", "symbolic" if default_symbolic else None)
    if lam is None:
        raise InputError("--lambda is required")
    if lam == "symbolic":
        return p, None, "symbolic"
    field = parse_field(cfg["field"]) if "field" in cfg else prime_field(p)
    try:
        lam = int(lam)
    except ValueError:
        raise InputError(f"lambda must be an integer encoding or 'symbolic', got {lam!r}") from None
    if not 0 <= lam < field.q:
        raise BadLambda(f"lambda encoding {lam} is outside 0..{field.q - 1}")
    return p, field, lam


def _emit(text: str, cfg: dict) -> None:
    if cfg.get("out"):
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_selfmap(cfg: dict) -> int:
    p, field, lam = _field_and_lambda(cfg, default_symbolic=True)
    sm = build_selfmap(p, lam, field)
    if cfg["format"] == "json":
        doc = {
            "format_version": FORMAT_VERSION,
            "config": cfg,
            "phi": sm.phi.to_text("z"),
            "phi_tilde": sm.phi_tilde.to_text("w"),
            "degree": sm.phi.degree(),
        }
        _emit(json.dumps(doc) + "\n", cfg)
    elif cfg["format"] == "text":
        lines = [f"# format_version={FORMAT_VERSION}"]
        lines += [f"# {k}={v}" for k, v in cfg.items()]
        lines += [f"phi(z) = {sm.phi.to_text('z')}", f"phi_tilde(w) = {sm.phi_tilde.to_text('w')}"]
        _emit("\n".join(lines) + "\n", cfg)
    else:
        raise InputError("selfmap supports --format text or json")
    return EXIT_OK


def cmd_orbits(cfg: dict) -> int:
    p, field, lam = _field_and_lambda(cfg, default_symbolic=False)
    if lam == "symbolic":
        raise InputError("orbits needs a concrete lambda")
    if field.q > GRAPH_CAP:
        raise FieldTooLarge(f"orbit graphs are capped at q <= {GRAPH_CAP}")
    graph = orbit_graph(build_selfmap(p, lam, field))
    graph.config = cfg
    fmt = cfg["format"]
    if fmt == "json":
        _emit(graph.to_json() + "\n", cfg)
    elif fmt == "dot":
        _emit(graph.to_dot(), cfg)
    else:
        _emit(graph.to_text(), cfg)
    return EXIT_OK


def cmd_verify(cfg: dict) -> int:
    suite = cfg.get("suite", "all")
    _check_p(cfg.get("p"))
    if cfg["mode"] not in ("symbolic", "sampled"):
        raise InputError("--mode must be symbolic or sampled")
    field = parse_field(cfg["field"]) if "field" in cfg else None
    lam = cfg.get("lambda")
    if lam is not None:
        try:
            lam = int(lam)
        except ValueError:
            raise InputError(f"lambda must be an integer encoding, got {lam!r}") from None
    reports = run_suite(
        suite, p=cfg.get("p"), pmax=cfg.get("pmax"), mode=cfg["mode"], field=field, lam=lam, f=cfg.get("f"), seed=cfg["seed"]
    )
    lines = [json.dumps({"format_version": FORMAT_VERSION, "config": cfg})]
    lines += [r.to_json() for r in reports]
    n_pass = sum(r.passed for r in reports)
    lines.append(json.dumps({"summary": {"pass": n_pass, "fail": len(reports) - n_pass}}))
    _emit("\n".join(lines) + "\n", cfg)
    return EXIT_OK if n_pass == len(reports) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, help="the prime p")
    common.add_argument("--field", help='coefficient field, "p" or "p^n:c0,...,cn"')
    common.add_argument("--lambda", dest="lam", help='integer encoding of lambda, or "symbolic"')
    common.add_argument("--format", choices=("text", "json", "dot"))
    common.add_argument("--out", help="write the artifact here instead of stdout")
    common.add_argument("--config", help="flat key=value file; flags override it")

    parser = argparse.ArgumentParser(prog="hdflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("selfmap", parents=[common], help="print phi and phi_tilde")
    sub.add_parser("orbits", parents=[common], help="functional graph of phi on P^1(F_q)")
    ver = sub.add_parser("verify", parents=[common], help="run verification suites")
    ver.add_argument("suite", nargs="?", choices=SUITES + ("all",))
    ver.add_argument("--pmax", type=int, help="largest prime for range suites")
    ver.add_argument("--mode", choices=("symbolic", "sampled"))
    ver.add_argument("-f", type=int, help="period")
    ver.add_argument("--seed", type=int, help="sampling seed")
    return parser


COMMANDS = {"selfmap": cmd_selfmap, "orbits": cmd_orbits, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for key in ("pmax", "mode", "f", "seed", "suite"):
        if not hasattr(args, key):
            setattr(args, key, None)
    try:
        cfg = effective_config(args)
        return COMMANDS[args.command](cfg)
    except UnsupportedPrime as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except FieldTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, BadLambda, NotIrreducible, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

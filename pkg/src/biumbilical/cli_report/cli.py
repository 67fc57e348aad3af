"""Command-line front end: ``biumbilical <command> [--config PATH] [flags]``.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage,
configuration or I/O errors.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import commands
from .config import ConfigError, load_scenario
from .mesh import MeshError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

COMMANDS = {
    "verify-closed-form": commands.cmd_verify_closed_form,
    "solve-r": commands.cmd_solve_r,
    "solve-r-constructive": commands.cmd_solve_r_constructive,
    "solve-l": commands.cmd_solve_l,
    "check-semisymmetry": commands.cmd_check_semisymmetry,
    "char-poly": commands.cmd_char_poly,
    "mesh": commands.cmd_mesh,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser():
    parser = _Parser(prog="biumbilical", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", help="JSON scenario file")
        p.add_argument("--seed", type=int)
        p.add_argument("--tol", type=float, help="override the primary tolerance")
        p.add_argument("--out", metavar="PATH", help="also write the report here")
        p.add_argument("--samples", type=int)
        p.add_argument("--params", type=_float_list, metavar="A,B[,C0,C1,C2,C3]")
        if name == "verify-closed-form":
            p.add_argument("--tamper", action="store_true", default=None, help="negative control")
        if name in ("solve-r", "solve-r-constructive", "solve-l"):
            p.add_argument("--field", metavar="PATH", help="write the solved field as JSON")
        if name == "solve-l":
            p.add_argument("--perturbation", type=float)
            p.add_argument("--rotate", action="store_true", default=None)
        if name == "mesh":
            p.add_argument("--obj", metavar="PATH", help="OBJ output path")
            p.add_argument("--w", type=_float_list, metavar="W1,W2,...")
            p.add_argument("--projection", help="drop1..drop4 or a comma-separated 4-vector")
        if name in ("solve-r", "solve-l", "mesh"):
            p.add_argument("--nx", type=int)
            p.add_argument("--ny", type=int)
    return parser


def _overrides(args):
    o = {"seed": args.seed, "tol": args.tol, "out": args.out, "samples": args.samples}
    if args.params is not None:
        if len(args.params) not in (2, 6):
            raise ConfigError("--params takes A,B or A,B,C0,C1,C2,C3")
        o["a"], o["b"] = args.params[:2]
        if len(args.params) == 6:
            o["c"] = args.params[2:]
    for key, dest in (("tamper", "tamper"), ("field", "field_out"), ("perturbation", "perturbation"),
                      ("rotate", "rotate"), ("obj", "mesh_out"), ("w", "w_values"), ("nx", "nx"), ("ny", "ny")):
        if getattr(args, key, None) is not None:
            o[dest] = getattr(args, key)
    proj = getattr(args, "projection", None)
    if proj is not None:
        o["projection"] = proj if proj.startswith("drop") else _float_list(proj)
    return o


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        sc = load_scenario(args.config, _overrides(args))
        if args.command == "mesh":
            if not sc.mesh_out:
                raise ConfigError("mesh needs an output path (--obj or mesh_out)")
            report, text = commands.cmd_mesh(sc)
            with open(sc.mesh_out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            report = COMMANDS[args.command](sc)
        text = report.to_json()
        if sc.out:
            with open(sc.out, "w", encoding="utf-8") as fh:
                fh.write(text)
    except (ConfigError, MeshError, argparse.ArgumentTypeError) as exc:
        print(f"biumbilical: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"biumbilical: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    for r in report.failures():
        print(f"FAIL {r.check}: {r.max_residual:.3e} > {r.tolerance:.1e}", file=sys.stderr)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

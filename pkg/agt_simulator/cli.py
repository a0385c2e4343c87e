"""
cli.py — Command-line front end

Usage:
    python -m agt_simulator gap --protocol teleport --out out
    python -m agt_simulator sweep --protocol teleport --T 1,5,20,50
    python -m agt_simulator gadget --r 0.1 --analysis alpha
    python -m agt_simulator simulate --circuit tests/circuit_aba.txt --state random
    python -m agt_simulator serve --port 8000

Exit codes: 0 success, 2 usage / parse / compile errors, 3 numeric domain violations,
1 everything else. Failures print one JSON object to stderr:
{"error": <class>, "message": <text>, "exit_code": <n>}.
"""

import argparse
import json
import logging
import sys

from pydantic import ValidationError

from . import __version__
from .errors import AgtError
from .logging_config import setup_logging
from .models import CliConfig
from .workflow import dispatch

log = logging.getLogger(__name__)

USAGE_EXIT = 2


class UsageError(Exception):
    """Raised instead of argparse's own exit so main() can report it as JSON."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from None


def _common_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--omega", type=float, default=1.0, help="pair coupling ω")
    common.add_argument("--T", type=_float_list, default=[50.0], help="total time(s), comma-separated")
    common.add_argument("--steps", type=int, default=None, help="midpoint steps per run or segment")
    common.add_argument("--method", choices=["spectral", "expm"], default="spectral")
    common.add_argument("--schedule", choices=["linear", "smoothstep"], default=None,
                        help="ramp shape (default linear; smoothstep for sweep)")
    common.add_argument("--state", default="0", help="basis labels over {0,1,+,-}, 'random' or 'amp'")
    common.add_argument("--alpha", type=float, default=None, help="amplitude of |0⟩ for --state amp")
    common.add_argument("--beta", type=float, default=None, help="amplitude of |1⟩ for --state amp")
    common.add_argument("--grid-points", type=int, default=101)
    common.add_argument("--refine-tol", type=float, default=1e-6)
    common.add_argument("--out", default=None, help="output directory (default $AGT_OUT_DIR or 'out')")
    common.add_argument("--name", default=None, help="run name used for file names and log prefixes")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--log-level", default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="agt_simulator", description="Adiabatic gate teleportation simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    for command in ("teleport", "agt", "agp", "agt2", "isotropic"):
        p = sub.add_parser(command, parents=[common])
        p.add_argument("--gate", default="A", help="gate for agt (I, H, X, Z, A, B, ...) and agp (A, B)")

    sub.add_parser("nogo", parents=[common])

    p = sub.add_parser("gadget", parents=[common])
    p.add_argument("--r", type=float, default=0.1, help="coupling ratio λ/ω")
    p.add_argument("--analysis", choices=["alpha", "gap", "bound", "run"], default="alpha")
    p.add_argument("--encoded-z", choices=["z4", "z3"], default="z4")

    for command in ("gap", "sweep"):
        p = sub.add_parser(command, parents=[common])
        p.add_argument("--protocol", choices=["teleport", "agt", "agp", "agt2", "isotropic"], default="teleport")
        p.add_argument("--gate", default="A")

    for command in ("compile", "simulate"):
        p = sub.add_parser(command, parents=[common])
        p.add_argument("--circuit", required=True, help="circuit file or inline lines separated by ';'")
        p.add_argument("--layout", choices=["chain", "3n"], default="chain")
        p.add_argument("--gadgetized", action="store_true")
        p.add_argument("--r", type=float, default=0.1)
        p.add_argument("--segment-times", type=_float_list, default=None)

    p = sub.add_parser("serve")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _fail(error: str, message: str, exit_code: int) -> int:
    print(json.dumps({"error": error, "message": message, "exit_code": exit_code}, sort_keys=True), file=sys.stderr)
    return exit_code


def config_from_args(args: argparse.Namespace) -> CliConfig:
    values = {key: value for key, value in vars(args).items() if value is not None and key != "log_level"}
    return CliConfig(**values)


def serve(host: str, port: int) -> int:
    import uvicorn

    log.info(f"Starte HTTP-Service auf {host}:{port}.")
    uvicorn.run("agt_simulator.main:app", host=host, port=port)
    return 0


def main(argv: list[str] | None = None) -> int:
    """
    Parses `argv`, runs the subcommand and maps failures to exit codes.

    Returns:
        int: Process exit status.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        return _fail("UsageError", str(e), USAGE_EXIT)

    setup_logging(getattr(args, "log_level", None))
    if args.command == "serve":
        return serve(args.host, args.port)

    try:
        cfg = config_from_args(args)
        for path in dispatch(cfg):
            print(path)
    except AgtError as e:
        return _fail(type(e).__name__, str(e), e.exit_code)
    except ValidationError as e:
        return _fail("ValidationError", str(e), USAGE_EXIT)
    except Exception as e:
        log.critical(f"Unerwarteter Fehler: {e}", exc_info=True)
        return _fail(type(e).__name__, str(e), 1)
    return 0


"""Command-line entry point.

Run with: qcompletion <command> [options], or python -m qcompletion.

Exit codes: 0 when every check of the command passes, 1 on a verification
failure, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from pymeasure.experiment import Procedure

from qcompletion.algebra.actions import completion_module, is_complete_module
from qcompletion.algebra.modules import Element, ModuleShape, format_shape, parse_shape
from qcompletion.completion.deodhar import (
    DeodharSymbol,
    completion_coordinates,
    deodhar_normalize,
    in_completion,
)
from qcompletion.completion.lattices import (
    complete_lattice,
    complete_verma_lattice,
    sn_complete_lattice,
)
from qcompletion.completion.verify import verify_lattice_completion
from qcompletion.core.config import AppConfig
from qcompletion.core.errors import ShapeError
from qcompletion.crystal.basis import standard_lattice
from qcompletion.crystal.graph import crystal_graph, to_dot
from qcompletion.crystal.lattice import Lattice, lattice_equal
from qcompletion.decomp.decompose import decompose, verify_certificate
from qcompletion.decomp.twisted import TwistedPresentation, random_twist
from qcompletion.procedures import (
    CompletionSweepProcedure,
    DecompositionSweepProcedure,
    QIdentityProcedure,
)

log = logging.getLogger(__name__)

SWEEPS = {
    "identities": QIdentityProcedure,
    "completion": CompletionSweepProcedure,
    "decomposition": DecompositionSweepProcedure,
}


def get_default_config_path() -> Path:
    """Get the default configuration file path.

    Returns platform-appropriate path:
    - Windows: %APPDATA%/QCompletion/config.yaml
    - macOS: ~/Library/Application Support/QCompletion/config.yaml
    - Linux: ~/.config/qcompletion/config.yaml

    Returns:
        Path to the default config file.
    """
    if sys.platform == "win32":
        app_data = os.environ.get("APPDATA", os.path.expanduser("~"))
        return Path(app_data) / "QCompletion" / "config.yaml"
    elif sys.platform == "darwin":
        return Path.home() / "Library" / "Application Support" / "QCompletion" / "config.yaml"
    else:
        xdg_config = os.environ.get("XDG_CONFIG_HOME", os.path.expanduser("~/.config"))
        return Path(xdg_config) / "qcompletion" / "config.yaml"


def load_config(path: Optional[Path] = None) -> AppConfig:
    """Load configuration from file or return defaults.

    Args:
        path: Path to config file. If None, uses default path.

    Returns:
        Loaded or default AppConfig.
    """
    if path is None:
        path = get_default_config_path()

    return AppConfig.load_or_default(path)


def setup_logging(level: int = logging.INFO) -> None:
    """Set up logging configuration.

    Args:
        level: Logging level.
    """
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%H:%M:%S",
    )


# ----------------------------------------------------------------------
# Command results
# ----------------------------------------------------------------------


@dataclass
class CommandResult:
    """What a command prints.

    Attributes:
        passed: Whether every check of the command passed.
        data: JSON payload.
        text: Plain-text rendering.
        dot: DOT rendering, for commands that have one.
    """

    passed: bool
    data: Dict[str, Any] = field(default_factory=dict)
    text: str = ""
    dot: Optional[str] = None

    def render(self, fmt: str, sort_keys: bool = False) -> str:
        if fmt == "json":
            return json.dumps(self.data, indent=2, sort_keys=sort_keys) + "\n"
        if fmt == "dot":
            if self.dot is None:
                raise ValueError("This command has no DOT output")
            return self.dot
        return self.text.rstrip("\n") + "\n"


def run_procedure(procedure: Procedure) -> List[Dict[str, Any]]:
    """Run a procedure in-process and collect its results rows."""
    rows: List[Dict[str, Any]] = []

    def emit(topic: str, record: Any) -> None:
        if topic == "results":
            rows.append(record)

    procedure.emit = emit
    procedure.should_stop = lambda: False
    procedure.startup()
    try:
        procedure.execute()
    finally:
        procedure.shutdown()
    return rows


def _rows_result(name: str, procedure: Procedure, rows: List[Dict[str, Any]]) -> CommandResult:
    failures = list(procedure.failures)
    columns = procedure.DATA_COLUMNS
    lines = ["\t".join(columns)]
    lines += ["\t".join(str(row[c]) for c in columns) for row in rows]
    status = "PASS" if not failures else f"FAIL ({len(failures)}): " + ", ".join(failures[:10])
    lines.append(f"{name}: {len(rows)} checks, {status}")
    data = {"suite": name, "passed": not failures, "failures": failures, "rows": rows}
    return CommandResult(not failures, data, "\n".join(lines))


def _lattice_text(lattice: Lattice) -> List[str]:
    lines = [f"window {lattice.window}"]
    for w, basis in lattice.gens:
        if basis:
            lines.append(f"  weight {w}: " + "; ".join(str(b) for b in basis))
    for (component, tag), law in lattice.tails:
        lines.append(
            f"  tail {tag}{component}: {law.unit} * q^({law.a}*k + {law.b})"
            f" for k > {lattice.window}"
        )
    return lines


def _window(
    args: argparse.Namespace,
    config: AppConfig,
    shape: Optional[ModuleShape] = None,
    n: int = 0,
) -> int:
    if args.window is not None:
        if args.window < 1:
            raise ValueError(f"--window must be >= 1, got {args.window}")
        return args.window
    if shape is not None:
        n = max([0] + [c.block for c in shape.components])
    return config.lattice.window_for(n)


def _shape(args: argparse.Namespace) -> ModuleShape:
    if not args.shape:
        raise ValueError("--shape is required")
    return parse_shape(args.shape)


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------


def cmd_identities(args: argparse.Namespace, config: AppConfig) -> CommandResult:
    """Run the q-identity and relation suite."""
    if not 0 <= args.max_n <= 50:
        raise ValueError(f"--max-n must be in 0..50, got {args.max_n}")
    procedure = QIdentityProcedure()
    procedure.max_n = args.max_n
    procedure.corrupt = args.corrupt or ""
    procedure.seed = config.suite.seed
    procedure.random_elements = config.suite.random_elements
    procedure.lemma_max_p = config.suite.lemma_max_p
    rows = run_procedure(procedure)
    return _rows_result("identities", procedure, rows)


def cmd_complete(args: argparse.Namespace, config: AppConfig) -> CommandResult:
    """Complete the standard crystal basis of a shape and verify the result."""
    shape = _shape(args)
    if shape.has_findim:
        raise ShapeError(f"{shape} has finite-dimensional summands without B_q-structure")
    window = _window(args, config, shape)
    target, _ = completion_module(shape)
    basis = standard_lattice(shape, window)
    completed = complete_lattice(basis)
    report = verify_lattice_completion(basis.lattice, completed.lattice, basis, completed)

    complete = is_complete_module(shape)
    lines = [f"M = {format_shape(shape)}", f"C(M) = {format_shape(target)}"]
    if complete:
        lines.append("M is complete")
    lines.append("completed lattice:")
    lines += _lattice_text(completed.lattice)
    lines.append(str(report))
    data = {
        "shape": format_shape(shape),
        "completion": format_shape(target),
        "complete": complete,
        "lattice": completed.lattice.to_dict(),
        "report": report.to_dict(),
    }
    return CommandResult(report.passed, data, "\n".join(lines))


def cmd_graph(args: argparse.Namespace, config: AppConfig) -> CommandResult:
    """Crystal graph of the standard basis of a shape."""
    shape = _shape(args)
    window = _window(args, config, shape)
    graph = crystal_graph(standard_lattice(shape, window))
    dot = to_dot(graph)
    lines = [node.label for node in graph.nodes]
    lines += [f"{a} -> {b}" for a, b in graph.edges]
    data = {
        "shape": format_shape(shape),
        "nodes": [
            {
                "index": node.index,
                "component": node.component,
                "tag": node.tag,
                "k": node.k,
                "weight": node.weight,
            }
            for node in graph.nodes
        ],
        "edges": [list(e) for e in graph.edges],
    }
    return CommandResult(True, data, "\n".join(lines), dot)


def cmd_deodhar(args: argparse.Namespace, config: AppConfig) -> CommandResult:
    """Membership of f^-k m0 in the completion of M(-n-2)."""
    if args.n is None or args.k is None:
        raise ValueError("deodhar needs --n and --k")
    if args.n < 0 or args.k < 0:
        raise ValueError(f"deodhar needs n, k >= 0, got n={args.n}, k={args.k}")
    shape = parse_shape(f"M({-args.n - 2})")
    symbol = DeodharSymbol(args.k, Element.of(0, "m"))
    member = in_completion(symbol, shape)
    expected = args.k < args.n + 2
    normal = deodhar_normalize(symbol, shape)
    coords = completion_coordinates(symbol, args.n)
    verdict = "in C(M)" if member else "not in C(M)"
    lines = [f"f^-{args.k} m0 in {format_shape(shape)}: {verdict}", f"minimal symbol: {normal}"]
    if coords is not None:
        lines.append(f"in C(M) = M({args.n}): {coords}")
    if member != expected:
        lines.append(f"disagrees with the criterion k < n+2 ({expected})")
    data = {
        "n": args.n,
        "k": args.k,
        "in_completion": member,
        "criterion": expected,
        "coordinates": coords.to_records() if coords is not None else None,
    }
    return CommandResult(member == expected, data, "\n".join(lines))


def cmd_sn_compare(args: argparse.Namespace, config: AppConfig) -> CommandResult:
    """Compare the S_n lattice with the directly completed lattice."""
    if args.n is None or args.n < 0:
        raise ValueError("sn-compare needs --n >= 0")
    window = _window(args, config, n=args.n)
    first = sn_complete_lattice(args.n, window)
    second = complete_verma_lattice(args.n, window)
    equal = lattice_equal(first, second)
    text = f"n={args.n}, window {window}: {'equal' if equal else 'not equal'}"
    data = {
        "n": args.n,
        "window": window,
        "equal": equal,
        "sn_tails": [law.to_dict() for _, law in first.tails],
        "direct_tails": [law.to_dict() for _, law in second.tails],
    }
    return CommandResult(equal, data, text)


def cmd_decompose(args: argparse.Namespace, config: AppConfig) -> CommandResult:
    """Decompose a twisted presentation read from JSON, or a random twist of --shape."""
    if args.twist is not None:
        with open(args.twist, "r", encoding="utf-8") as f:
            presentation = TwistedPresentation.from_dict(json.load(f))
    elif args.shape:
        rng = np.random.default_rng(config.suite.seed)
        presentation = random_twist(rng, parse_shape(args.shape))
    else:
        raise ValueError("decompose needs --twist PATH or --shape")
    cert = decompose(presentation)
    report = verify_certificate(cert)
    rs, ns = cert.parameters
    lines = [
        f"presentation: {presentation}",
        f"standard shape: {format_shape(cert.standard_shape)}",
        f"parameters: r = {rs}, n = {ns}",
    ]
    for part in cert.parts:
        gens = ", ".join(str(g) for g in part.generators)
        lines.append(f"  {part.component}: {gens}")
    lines.append(str(report))
    data = {"presentation": presentation.to_dict(), "certificate": cert.to_dict()}
    data["report"] = report.to_dict()
    return CommandResult(report.passed, data, "\n".join(lines))


def cmd_sweep(args: argparse.Namespace, config: AppConfig) -> CommandResult:
    """Run one procedure by name."""
    procedure = SWEEPS[args.name]()
    if args.name == "identities":
        procedure.max_n = config.suite.max_n
        procedure.random_elements = config.suite.random_elements
        procedure.lemma_max_p = config.suite.lemma_max_p
    elif args.name == "completion":
        procedure.max_n = config.suite.completion_max_n
        procedure.deodhar_max_n = config.suite.deodhar_max_n
    else:
        procedure.twist_count = config.suite.twist_count
    if hasattr(procedure, "seed"):
        procedure.seed = config.suite.seed
    if args.window is not None and hasattr(procedure, "window"):
        procedure.window = args.window
    rows = run_procedure(procedure)
    return _rows_result(args.name, procedure, rows)


COMMANDS: Dict[str, Callable[[argparse.Namespace, AppConfig], CommandResult]] = {
    "identities": cmd_identities,
    "complete": cmd_complete,
    "graph": cmd_graph,
    "deodhar": cmd_deodhar,
    "sn-compare": cmd_sn_compare,
    "decompose": cmd_decompose,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=int, help="k-window for lattices")
    common.add_argument("--format", choices=["json", "dot", "text"], help="Output format")
    common.add_argument("--out", type=Path, help="Write output to this file")

    parser = argparse.ArgumentParser(
        prog="qcompletion", description="Crystal bases and completions of U_q(sl2)-modules"
    )
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    parser.add_argument("--config", type=Path, help="Path to configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identities", parents=[common], help="Run the identity suite")
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--corrupt", help="Negate the named identity")

    for name, text in (("complete", "Complete a shape"), ("graph", "Crystal graph of a shape")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--shape", required=True, help="Shape such as M(-4)+T(1)")

    p = sub.add_parser("deodhar", parents=[common], help="Membership of f^-k m0 in C(M(-n-2))")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("sn-compare", parents=[common], help="Compare both completed lattices")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("decompose", parents=[common], help="Decompose a twisted presentation")
    p.add_argument("--twist", type=Path, help="JSON twist file")
    p.add_argument("--shape", help="Decompose a random twist of this shape instead")

    p = sub.add_parser("sweep", parents=[common], help="Run a verification procedure")
    p.add_argument("name", choices=sorted(SWEEPS))
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the qcompletion command.

    Returns:
        Exit code (0 pass, 1 verification failure, 2 usage error).
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.debug:
        os.environ["QCOMPLETION_DEBUG"] = "1"
    log_level = logging.DEBUG if os.environ.get("QCOMPLETION_DEBUG") else logging.INFO
    setup_logging(log_level)

    config = load_config(args.config)
    fmt = args.format or ("dot" if args.command == "graph" else config.output.format)
    log.info(f"Running {args.command}")

    try:
        result = COMMANDS[args.command](args, config)
        output = result.render(fmt, config.output.sort_keys)
    except (ValueError, OSError) as e:
        log.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2

    if args.out is not None:
        args.out.write_text(output, encoding="utf-8")
        log.info(f"Wrote {args.out}")
    else:
        sys.stdout.write(output)

    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Subcommands: ``run`` (bundled example), ``run-ir`` (serialized program file),
``emit-ir`` (write a bundled example as JSON), ``bloch`` (coordinates of a
one-qubit snapshot), and ``examples``.  Shots re-execute the whole program
with seeds seed, seed+1, ..., so conditioned blocks resample correctly.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .errors import (
    BadFormat,
    EngineFailure,
    EntangledSelection,
    MalformedCode,
    QvmError,
    WrongArity,
)
from .examples import EXAMPLES
from .ir import QuantumCode, new_process
from .render import bloch_coords, bloch_svg, parse_format, show
from .serialize import deserialize, serialize
from .simulator import ExecutionResult, execute

_MASK64 = (1 << 64) - 1


@dataclass
class RunConfig:
    """Settings for one run: program source, seeds, repetitions, rendering."""

    target: str
    seed: int = 0
    shots: int = 1
    format: str | None = None
    output: str = "human"


def _build_example(name: str) -> QuantumCode:
    if name not in EXAMPLES:
        raise MalformedCode(
            f"unknown example {name!r}; see the 'examples' subcommand"
        )
    process = new_process()
    EXAMPLES[name].build(process)
    return process.code


def _result_json(result: ExecutionResult) -> dict:
    return {
        "futures": {str(fid): value for fid, value in sorted(result.futures.items())},
        "dumps": {
            str(did): {
                "qubits": list(data.qubits),
                "states": [
                    {"basis": basis, "re": amp.real, "im": amp.imag}
                    for basis, amp in data.basis_states
                ],
            }
            for did, data in sorted(result.dumps.items())
        },
    }


def _run_code(code: QuantumCode, config: RunConfig) -> int:
    if config.shots < 1:
        raise ValueError("shots must be >= 1")
    spec = parse_format(config.format or "")
    results = [
        execute(code, (config.seed + shot) & _MASK64) for shot in range(config.shots)
    ]
    if config.output == "json":
        for result in results:
            print(json.dumps(_result_json(result)))
        return 0
    sections: list[str] = []
    first = results[0]
    for dump_id in sorted(first.dumps):
        sections.append(show(first.dumps[dump_id], spec))
    if code.num_futures:
        counts: dict[tuple[int, ...], int] = {}
        for result in results:
            key = tuple(result.futures[fid] for fid in range(code.num_futures))
            counts[key] = counts.get(key, 0) + 1
        lines = [
            f"{' '.join(str(v) for v in key)}: {count} ({count / config.shots * 100:.2f}%)"
            for key, count in sorted(counts.items())
        ]
        sections.append("\n".join(lines))
    if sections:
        print("\n\n".join(sections))
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    config = RunConfig(args.example, args.seed, args.shots, args.format, args.output)
    return _run_code(_build_example(args.example), config)


def _cmd_run_ir(args: argparse.Namespace) -> int:
    with open(args.path, "rb") as handle:
        data = handle.read()
    config = RunConfig(args.path, args.seed, args.shots, args.format, args.output)
    return _run_code(deserialize(data), config)


def _cmd_emit_ir(args: argparse.Namespace) -> int:
    data = serialize(_build_example(args.example))
    if args.out:
        with open(args.out, "wb") as handle:
            handle.write(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return 0


def _cmd_bloch(args: argparse.Namespace) -> int:
    result = execute(_build_example(args.example), args.seed & _MASK64)
    if not result.dumps:
        raise WrongArity(f"example {args.example!r} produces no snapshot")
    data = result.dumps[min(result.dumps)]
    coords = bloch_coords(data)
    print(
        f"x={coords.x + 0.0:.6f} y={coords.y + 0.0:.6f} z={coords.z + 0.0:.6f}"
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(bloch_svg(coords))
    return 0


def _cmd_examples(_args: argparse.Namespace) -> int:
    width = max(len(name) for name in EXAMPLES)
    for name in sorted(EXAMPLES):
        print(f"{name:<{width}}  {EXAMPLES[name].description}")
    return 0


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="base seed (64-bit)")
    parser.add_argument("--shots", type=int, default=1, help="number of repetitions")
    parser.add_argument("--format", default=None, help="ket grouping, e.g. i1:i1")
    parser.add_argument("--output", choices=("human", "json"), default="human")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qvm", description="Record and simulate small quantum programs."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a bundled example")
    run.add_argument("example")
    _add_run_flags(run)
    run.set_defaults(func=_cmd_run)

    run_ir = sub.add_parser("run-ir", help="run a serialized program file")
    run_ir.add_argument("path")
    _add_run_flags(run_ir)
    run_ir.set_defaults(func=_cmd_run_ir)

    emit = sub.add_parser("emit-ir", help="serialize a bundled example")
    emit.add_argument("example")
    emit.add_argument("--out", default=None, help="output path (default: stdout)")
    emit.set_defaults(func=_cmd_emit_ir)

    bloch = sub.add_parser("bloch", help="sphere coordinates of a 1-qubit snapshot")
    bloch.add_argument("example")
    bloch.add_argument("--seed", type=int, default=0)
    bloch.add_argument("--out", default=None, help="write an SVG here as well")
    bloch.set_defaults(func=_cmd_bloch)

    listing = sub.add_parser("examples", help="list bundled examples")
    listing.set_defaults(func=_cmd_examples)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (WrongArity, EntangledSelection) as exc:
        # state-inspection failures are usage errors, not engine crashes
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EngineFailure as exc:
        print(f"engine failure: {exc}", file=sys.stderr)
        return 2
    except (MalformedCode, BadFormat, QvmError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

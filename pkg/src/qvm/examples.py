"""Bundled demonstration programs, keyed by name for the command line.

Each entry is a builder that records its circuit into a fresh process, so
every run exercises the combinator path rather than replaying stored files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import library as lib
from .ir import Process, around, ctrl


@dataclass(frozen=True)
class Example:
    name: str
    description: str
    build: Callable[[Process], None]


def _bell(p: Process) -> None:
    a, b = p.alloc(2)
    lib.bell(a, b)
    p.dump_state([a, b])
    p.measure([a])
    p.measure([b])


def _ctrlh(p: Process) -> None:
    a, b = p.alloc(2)
    lib.ry(math.pi / 2, a)
    with ctrl(a):
        lib.h(b)
    p.dump_state([a, b])


def _ctrlbell(p: Process) -> None:
    q0, q1, q2 = p.alloc(3)
    lib.h(q0)
    with ctrl(q0):
        lib.bell(q1, q2)
    p.dump_state([q0, q1, q2])


def _around_bell(p: Process) -> None:
    a, b = p.alloc(2)
    with around(p, lambda: lib.bell(a, b)):
        lib.x(a)
    p.dump_state([a, b])


def _teleport(p: Process) -> None:
    lib.teleport(p, lambda q: lib.phase(math.pi / 4, lib.h(q)))


def _qft_demo(p: Process) -> None:
    qs = p.alloc(3)
    lib.qft(qs)
    p.dump_state(qs)


def _grover_diffusor_demo(p: Process) -> None:
    # one amplification round with |11⟩ marked: lands exactly on |11⟩
    q0, q1 = p.alloc(2)
    lib.h(q0)
    lib.h(q1)
    with ctrl(q0):
        lib.z(q1)
    lib.grover_diffusor([q0, q1])
    p.dump_state([q0, q1])
    p.measure([q0, q1])


def _x_gate(p: Process) -> None:
    (q,) = p.alloc(1)
    lib.x(q)
    p.dump_state([q])


def _hadamard(p: Process) -> None:
    (q,) = p.alloc(1)
    lib.h(q)
    p.dump_state([q])


EXAMPLES: dict[str, Example] = {
    example.name: example
    for example in [
        Example("bell", "entangled pair: dump, then measure each qubit", _bell),
        Example("ctrlh", "controlled Hadamard after a π/2 Y rotation", _ctrlh),
        Example("ctrlbell", "Bell preparation under an extra control qubit", _ctrlbell),
        Example("around-bell", "bit flip inside an entangle/disentangle sandwich", _around_bell),
        Example("teleport", "three-qubit teleport of a phased superposition", _teleport),
        Example("qft-demo", "Fourier transform of |000⟩ (uniform superposition)", _qft_demo),
        Example(
            "grover-diffusor-demo",
            "one diffusion round with |11⟩ phase-marked",
            _grover_diffusor_demo,
        ),
        Example("x-gate", "single qubit flipped to |1⟩", _x_gate),
        Example("hadamard", "single qubit in equal superposition", _hadamard),
    ]
}

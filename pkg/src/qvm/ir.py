"""Program construction: processes, qubit handles, and the instruction stream.

A :class:`Process` records every quantum operation into an instruction list
instead of performing it.  Gates may be wrapped in control and adjoint scopes
that rewrite the recorded stream, and measurements or state dumps hand back
placeholder values whose first read triggers execution of the accumulated
program.  That single execution freezes the process: afterwards every handle
is invalid and every attempt to extend the program raises
:class:`~qvm.errors.ProcessTerminated`.

Scope rules enforced while recording:

* allocation, measurement, and dumps are rejected inside any open control or
  adjoint scope, and inside conditioned-block bodies;
* control scopes accumulate: each recorded gate picks up the controls of all
  open control scopes, outermost first;
* adjoint scopes buffer gates and, on close, append the reversed sequence
  with each gate inverted, so nested adjoints cancel pairwise.
"""

from __future__ import annotations

import itertools
import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Callable, Sequence, Union

from .errors import (
    ControlTargetOverlap,
    DuplicateControl,
    InvalidHandle,
    MalformedCode,
    ProcessTerminated,
    ScopeUnderflow,
    ScopeViolation,
    UnknownFuture,
)

if TYPE_CHECKING:
    from .simulator import DumpData, ExecutionResult

Engine = Callable[["QuantumCode", int], "ExecutionResult"]


class GateKind(str, Enum):
    PAULI_X = "x"
    PAULI_Y = "y"
    PAULI_Z = "z"
    HADAMARD = "h"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    PHASE = "phase"


PARAMETRIC_KINDS = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.PHASE})


@dataclass(frozen=True)
class Gate:
    """A single-qubit gate; rotation and phase kinds carry an angle in radians."""

    kind: GateKind
    angle: float | None = None

    def __post_init__(self):
        if self.kind in PARAMETRIC_KINDS:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"gate {self.kind.value!r} requires a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"gate {self.kind.value!r} takes no angle")

    def inverse(self) -> "Gate":
        # X, Y, Z, H are self-inverse; parametric gates invert by negating the angle.
        if self.kind in PARAMETRIC_KINDS:
            return Gate(self.kind, -self.angle)
        return self


@dataclass(frozen=True)
class Alloc:
    count: int


@dataclass(frozen=True)
class GateApp:
    gate: Gate
    target: int
    controls: tuple[int, ...] = ()


@dataclass(frozen=True)
class Measure:
    qubits: tuple[int, ...]
    future: int


@dataclass(frozen=True)
class Dump:
    qubits: tuple[int, ...]
    dump: int


@dataclass(frozen=True)
class Condition:
    """Equality test of a measurement future against an integer literal."""

    future: int
    equals: int


@dataclass(frozen=True)
class Branch:
    condition: Condition
    body: tuple["Instruction", ...]


Instruction = Union[Alloc, GateApp, Measure, Dump, Branch]


@dataclass(frozen=True)
class QuantumCode:
    """A complete recorded program, ready for execution or serialization."""

    num_qubits: int
    instructions: tuple[Instruction, ...]
    num_futures: int = 0
    num_dumps: int = 0

    def validate(self) -> None:
        """Check structural well-formedness; raise MalformedCode otherwise.

        Qubit references are checked against the number of qubits allocated
        up to that point in program order, so a gate can never run before
        its qubit exists.
        """
        state = _ValidationState()
        _validate_block(self.instructions, state, in_branch=False)
        if state.allocated != self.num_qubits:
            raise MalformedCode(
                f"program allocates {state.allocated} qubits, header says {self.num_qubits}"
            )
        if state.futures_seen != set(range(self.num_futures)):
            raise MalformedCode("future ids are not exactly 0..num_futures-1")
        if state.dumps_seen != set(range(self.num_dumps)):
            raise MalformedCode("dump ids are not exactly 0..num_dumps-1")


class _ValidationState:
    def __init__(self):
        self.allocated = 0
        self.futures_seen: set[int] = set()
        self.dumps_seen: set[int] = set()


def _check_indices(qubits: Sequence[int], allocated: int, what: str) -> None:
    for q in qubits:
        if not isinstance(q, int) or isinstance(q, bool) or not 0 <= q < allocated:
            raise MalformedCode(f"{what} references qubit {q!r}, only {allocated} allocated")
    if len(set(qubits)) != len(qubits):
        raise MalformedCode(f"{what} lists a qubit more than once")


def _validate_block(instructions, state: _ValidationState, in_branch: bool) -> None:
    for ins in instructions:
        if isinstance(ins, Alloc):
            if in_branch:
                raise MalformedCode("allocation inside a conditioned block")
            if not isinstance(ins.count, int) or ins.count < 1:
                raise MalformedCode(f"allocation count must be >= 1, got {ins.count!r}")
            state.allocated += ins.count
        elif isinstance(ins, GateApp):
            if not isinstance(ins.gate, Gate):
                raise MalformedCode("gate application without a gate")
            _check_indices((ins.target, *ins.controls), state.allocated, "gate")
        elif isinstance(ins, Measure):
            if in_branch:
                raise MalformedCode("measurement inside a conditioned block")
            _check_indices(ins.qubits, state.allocated, "measure")
            if not ins.qubits:
                raise MalformedCode("measure covers no qubits")
            if ins.future in state.futures_seen:
                raise MalformedCode(f"future id {ins.future} produced twice")
            state.futures_seen.add(ins.future)
        elif isinstance(ins, Dump):
            if in_branch:
                raise MalformedCode("dump inside a conditioned block")
            _check_indices(ins.qubits, state.allocated, "dump")
            if not ins.qubits:
                raise MalformedCode("dump covers no qubits")
            if ins.dump in state.dumps_seen:
                raise MalformedCode(f"dump id {ins.dump} produced twice")
            state.dumps_seen.add(ins.dump)
        elif isinstance(ins, Branch):
            if ins.condition.future not in state.futures_seen:
                raise MalformedCode(
                    f"condition on future {ins.condition.future} with no prior measure"
                )
            if ins.condition.equals < 0:
                raise MalformedCode("condition literal must be non-negative")
            _validate_block(ins.body, state, in_branch=True)
        else:
            raise MalformedCode(f"unknown instruction {ins!r}")


class ProcessState(Enum):
    BUILDING = "building"
    EXECUTED = "executed"


@dataclass
class _CtrlScope:
    controls: tuple[int, ...]


@dataclass
class _AdjScope:
    buffer: list[GateApp] = field(default_factory=list)


_process_ids = itertools.count()


@dataclass(frozen=True)
class QubitHandle:
    """Reference to one qubit of a process; valid only while it is building."""

    process_id: int
    index: int
    _process: "Process" = field(repr=False, compare=False)

    @property
    def process(self) -> "Process":
        return self._process

    @property
    def valid(self) -> bool:
        return self._process.state is ProcessState.BUILDING


@dataclass(frozen=True, eq=False)
class FutureValue:
    """Promise for a measurement outcome; reading it executes the program."""

    _process: "Process" = field(repr=False)
    future_id: int = 0

    @property
    def process(self) -> "Process":
        return self._process

    @property
    def process_id(self) -> int:
        return self._process.id

    @property
    def cached(self) -> int | None:
        result = self._process.result
        return None if result is None else result.futures[self.future_id]

    @property
    def value(self) -> int:
        return self._process.execute().futures[self.future_id]


@dataclass(frozen=True, eq=False)
class DumpSnapshot:
    """Promise for a state snapshot; reading it executes the program."""

    _process: "Process" = field(repr=False)
    dump_id: int = 0

    @property
    def process(self) -> "Process":
        return self._process

    @property
    def cached(self) -> "DumpData | None":
        result = self._process.result
        return None if result is None else result.dumps[self.dump_id]

    @property
    def data(self) -> "DumpData":
        return self._process.execute().dumps[self.dump_id]


class Process:
    """Records quantum instructions and defers their execution.

    Every method that extends the program requires the process to be in the
    building state.  ``execute`` (called implicitly by the first future or
    dump read) runs the recorded program once on the configured engine and
    caches the results; it is idempotent afterwards.

    A process and its handles form a single-threaded unit; distinct
    processes are independent and may run concurrently.
    """

    def __init__(self, seed: int = 0, engine: Engine | None = None):
        self.id = next(_process_ids)
        self.seed = seed
        self.engine = engine
        self.state = ProcessState.BUILDING
        self.num_qubits = 0
        self.num_futures = 0
        self.num_dumps = 0
        self._instructions: list[Instruction] = []
        self._scopes: list[_CtrlScope | _AdjScope] = []
        self._bodies: list[list[Instruction]] = []
        self._arounds: list[Callable[[], None]] = []
        self._result: "ExecutionResult | None" = None

    def __repr__(self):
        return (
            f"Process(id={self.id}, qubits={self.num_qubits}, "
            f"state={self.state.value})"
        )

    @property
    def code(self) -> QuantumCode:
        """Snapshot of the program recorded so far (buffered scopes excluded)."""
        return QuantumCode(
            self.num_qubits, tuple(self._instructions), self.num_futures, self.num_dumps
        )

    @property
    def result(self) -> "ExecutionResult | None":
        return self._result

    # -- internal plumbing ------------------------------------------------

    def _require_building(self) -> None:
        if self.state is not ProcessState.BUILDING:
            raise ProcessTerminated(
                f"process {self.id} already executed; allocate a new one"
            )

    def _require_own(self, handle: QubitHandle) -> None:
        if not isinstance(handle, QubitHandle) or handle.process is not self:
            raise InvalidHandle(f"{handle!r} does not belong to process {self.id}")

    def _active_controls(self) -> tuple[int, ...]:
        out: list[int] = []
        for scope in self._scopes:
            if isinstance(scope, _CtrlScope):
                out.extend(scope.controls)
        return tuple(out)

    def _emit_gate(self, ins: GateApp) -> None:
        for scope in reversed(self._scopes):
            if isinstance(scope, _AdjScope):
                scope.buffer.append(ins)
                return
        self._sink().append(ins)

    def _sink(self) -> list[Instruction]:
        return self._bodies[-1] if self._bodies else self._instructions

    def _require_no_scopes(self, what: str) -> None:
        if self._scopes:
            kind = "adjoint" if isinstance(self._scopes[-1], _AdjScope) else "control"
            raise ScopeViolation(f"{what} is not allowed inside an open {kind} scope")
        if self._bodies:
            raise ScopeViolation(f"{what} is not allowed inside a conditioned block")

    # -- builder operations -----------------------------------------------

    def alloc(self, count: int) -> list[QubitHandle]:
        """Allocate ``count`` fresh qubits in |0⟩ and return their handles."""
        self._require_building()
        self._require_no_scopes("allocation")
        if count < 1:
            raise ValueError(f"allocation count must be >= 1, got {count}")
        start = self.num_qubits
        self.num_qubits += count
        self._instructions.append(Alloc(count))
        return [QubitHandle(self.id, start + i, self) for i in range(count)]

    def apply_gate(self, gate: Gate, target: QubitHandle) -> QubitHandle:
        """Record ``gate`` on ``target`` (plus any active controls); returns the handle."""
        self._require_building()
        self._require_own(target)
        if not isinstance(gate, Gate):
            raise TypeError(f"expected a Gate, got {gate!r}")
        controls = self._active_controls()
        if target.index in controls:
            raise ControlTargetOverlap(
                f"qubit {target.index} is an active control and cannot be a target"
            )
        self._emit_gate(GateApp(gate, target.index, controls))
        return target

    def ctrl_begin(self, controls: Sequence[QubitHandle]) -> None:
        """Open a control scope: gates recorded until ``ctrl_end`` gain these controls."""
        self._require_building()
        handles = tuple(controls)
        if not handles:
            raise ValueError("control scope needs at least one qubit")
        for handle in handles:
            self._require_own(handle)
        indices = tuple(h.index for h in handles)
        active = set(self._active_controls())
        seen: set[int] = set()
        for idx in indices:
            if idx in seen or idx in active:
                raise DuplicateControl(f"qubit {idx} is already an active control")
            seen.add(idx)
        self._scopes.append(_CtrlScope(indices))

    def ctrl_end(self) -> None:
        if not self._scopes or not isinstance(self._scopes[-1], _CtrlScope):
            raise ScopeUnderflow("no open control scope to close")
        self._scopes.pop()

    def adj_begin(self) -> None:
        """Open an adjoint scope: gates buffer until ``adj_end`` emits their inverse."""
        self._require_building()
        self._scopes.append(_AdjScope())

    def adj_end(self) -> None:
        if not self._scopes or not isinstance(self._scopes[-1], _AdjScope):
            raise ScopeUnderflow("no open adjoint scope to close")
        scope = self._scopes.pop()
        for ins in reversed(scope.buffer):
            self._emit_gate(GateApp(ins.gate.inverse(), ins.target, ins.controls))

    def around_begin(self, outer: Callable[[], None]) -> None:
        """Emit ``outer`` now and remember it; ``around_end`` emits its adjoint."""
        self._require_building()
        self._arounds.append(outer)
        outer()

    def around_end(self) -> None:
        if not self._arounds:
            raise ScopeUnderflow("no open around scope to close")
        outer = self._arounds.pop()
        self.adj_begin()
        outer()
        self.adj_end()

    def measure(self, qubits: QubitHandle | Sequence[QubitHandle]) -> FutureValue:
        """Record a measurement; the first listed qubit is the outcome's MSB.

        The qubits collapse at execution time but remain usable for further
        gates within the same program.
        """
        indices = self._check_qubit_list(qubits, "measure")
        future_id = self.num_futures
        self.num_futures += 1
        self._instructions.append(Measure(indices, future_id))
        return FutureValue(self, future_id)

    def dump_state(self, qubits: QubitHandle | Sequence[QubitHandle]) -> DumpSnapshot:
        """Record a snapshot request for the listed qubits (simulator feature)."""
        indices = self._check_qubit_list(qubits, "dump")
        dump_id = self.num_dumps
        self.num_dumps += 1
        self._instructions.append(Dump(indices, dump_id))
        return DumpSnapshot(self, dump_id)

    def _check_qubit_list(self, qubits, what: str) -> tuple[int, ...]:
        self._require_building()
        handles = (qubits,) if isinstance(qubits, QubitHandle) else tuple(qubits)
        if not handles:
            raise ValueError(f"{what} needs at least one qubit")
        for handle in handles:
            self._require_own(handle)
        self._require_no_scopes(what)
        indices = tuple(h.index for h in handles)
        if len(set(indices)) != len(indices):
            raise ValueError(f"{what} lists a qubit more than once")
        return indices

    def branch(self, future: FutureValue, equals: int, body: Callable[[], None]) -> None:
        """Record a block the engine applies only when ``future == equals``.

        The comparison happens during execution; the builder never learns the
        outcome.  The body may record gates and nested branches only.
        """
        self._require_building()
        if not isinstance(future, FutureValue) or future.process is not self:
            raise UnknownFuture(f"{future!r} was not produced by process {self.id}")
        if equals < 0:
            raise ValueError("condition literal must be non-negative")
        if self._scopes:
            raise ScopeViolation("conditioned blocks cannot open inside control/adjoint scopes")
        self._bodies.append([])
        try:
            body()
            if self._scopes:
                raise ScopeViolation("conditioned block left scopes open")
        finally:
            recorded = self._bodies.pop()
        self._sink().append(Branch(Condition(future.future_id, equals), tuple(recorded)))

    # -- execution ---------------------------------------------------------

    def execute(self) -> "ExecutionResult":
        """Run the recorded program once on the configured engine; idempotent."""
        if self.state is ProcessState.EXECUTED:
            assert self._result is not None
            return self._result
        if self._scopes or self._bodies or self._arounds:
            raise ScopeViolation("cannot execute with open scopes")
        engine = self.engine
        if engine is None:
            from . import simulator

            engine = simulator.execute
        result = engine(self.code, self.seed)
        self._result = result
        self.state = ProcessState.EXECUTED
        return result


def new_process(seed: int = 0, engine: Engine | None = None) -> Process:
    """Create a fresh process; ``engine`` defaults to the bundled simulator."""
    return Process(seed=seed, engine=engine)


def _process_of(qubits: Sequence[QubitHandle], what: str) -> Process:
    if not qubits:
        raise ValueError(f"{what} needs at least one qubit")
    first = qubits[0]
    if not isinstance(first, QubitHandle):
        raise InvalidHandle(f"{first!r} is not a qubit handle")
    return first.process


@contextmanager
def ctrl(*qubits: QubitHandle):
    """Control scope as a ``with`` block; controls come from the handles."""
    process = _process_of(qubits, "ctrl")
    process.ctrl_begin(qubits)
    yield qubits
    process.ctrl_end()


@contextmanager
def adj(process: Process):
    """Adjoint scope as a ``with`` block: the body is emitted inverted."""
    process.adj_begin()
    yield
    process.adj_end()


def around(process: Process, outer: Callable[[], None], inner: Callable[[], None] | None = None):
    """Emit ``outer``, an inner section, then the adjoint of ``outer``.

    With ``inner`` given this is a one-shot call; without it, it returns a
    ``with`` block whose body forms the inner section.
    """
    if inner is not None:
        process.around_begin(outer)
        inner()
        process.around_end()
        return None
    return _around_block(process, outer)


@contextmanager
def _around_block(process: Process, outer: Callable[[], None]):
    process.around_begin(outer)
    yield
    process.around_end()


def measure(*qubits: QubitHandle) -> FutureValue:
    """Measure the listed qubits as one integer outcome (first qubit = MSB)."""
    return _process_of(qubits, "measure").measure(qubits)


def dump(*qubits: QubitHandle) -> DumpSnapshot:
    """Request a snapshot of the listed qubits."""
    return _process_of(qubits, "dump").dump_state(qubits)

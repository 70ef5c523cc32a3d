"""Dense state-vector execution of recorded programs.

Qubit ``i`` occupies bit ``n - 1 - i`` of the amplitude index, so qubit 0 is
the leftmost symbol in |...⟩ labels and the most significant bit of
measurement outcomes.  Gates are applied in place by pairing amplitude
indices that differ in the target bit and whose control bits are all set.

Execution is a pure function of ``(code, seed)``: one xoshiro256** stream per
run, advanced by exactly one draw per measurement, with the outcome chosen
against the cumulative outcome distribution in ascending outcome order.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateState,
    EntangledSelection,
    IndexOutOfRange,
    IndexOverlap,
)
from .ir import Alloc, Branch, Dump, Gate, GateApp, GateKind, Measure, QuantumCode
from .rng import Xoshiro256StarStar

# Amplitudes below this magnitude are treated as zero when snapshotting.
DUST = 1e-12

_SQRT1_2 = 1.0 / math.sqrt(2.0)

_FIXED_MATRICES = {
    GateKind.PAULI_X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.PAULI_Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.PAULI_Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.HADAMARD: np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=complex),
}


def gate_matrix(gate: Gate) -> np.ndarray:
    """2x2 unitary of a gate.

    Conventions: RX(θ) = [[cos θ/2, -i sin θ/2], [-i sin θ/2, cos θ/2]],
    RY(θ) = [[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]],
    RZ(θ) = diag(e^{-iθ/2}, e^{iθ/2}), Phase(λ) = diag(1, e^{iλ}).
    The inverse gate's matrix is the conjugate transpose.
    """
    if gate.kind in _FIXED_MATRICES:
        return _FIXED_MATRICES[gate.kind]
    t = gate.angle
    if gate.kind is GateKind.RX:
        c, s = math.cos(t / 2), math.sin(t / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if gate.kind is GateKind.RY:
        c, s = math.cos(t / 2), math.sin(t / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if gate.kind is GateKind.RZ:
        return np.array(
            [[cmath.exp(-0.5j * t), 0], [0, cmath.exp(0.5j * t)]], dtype=complex
        )
    if gate.kind is GateKind.PHASE:
        return np.array([[1, 0], [0, cmath.exp(1j * t)]], dtype=complex)
    raise ValueError(f"no matrix for gate {gate!r}")


@dataclass
class StateVector:
    """2**n complex amplitudes; the engine's ground truth."""

    n: int
    amps: np.ndarray

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1.0
        return cls(n, amps)

    @classmethod
    def basis(cls, n: int, k: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=complex)
        amps[k] = 1.0
        return cls(n, amps)

    def extend(self, count: int) -> None:
        """Append ``count`` fresh qubits in |0⟩ (existing indices keep their qubits)."""
        amps = np.zeros(len(self.amps) << count, dtype=complex)
        amps[np.arange(len(self.amps)) << count] = self.amps
        self.n += count
        self.amps = amps

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)


@dataclass(frozen=True)
class DumpData:
    """Snapshot of the selected qubits: nonzero amplitudes by basis integer.

    ``basis_states`` is sorted ascending; the first listed qubit is the most
    significant bit of the basis integer.  The overall sign is normalized so
    the first nonzero amplitude has phase in (-π/2, π/2].
    """

    qubits: tuple[int, ...]
    basis_states: tuple[tuple[int, complex], ...]


@dataclass(frozen=True)
class ExecutionResult:
    """Everything a program run produced, keyed by future and dump ids."""

    futures: dict[int, int]
    dumps: dict[int, DumpData]


def _check_targets(n: int, target: int, controls: Sequence[int]) -> None:
    indices = (target, *controls)
    for q in indices:
        if not 0 <= q < n:
            raise IndexOutOfRange(f"qubit {q} out of range for {n}-qubit state")
    if len(set(indices)) != len(indices):
        raise IndexOverlap(f"target {target} and controls {tuple(controls)} overlap")


def apply_kernel(
    state: StateVector,
    matrix: np.ndarray,
    target: int,
    controls: Sequence[int] = (),
) -> StateVector:
    """Apply a controlled 2x2 gate in place and return the state.

    Touches exactly the amplitude pairs that differ in the target bit and
    have every control bit set to 1.
    """
    controls = tuple(controls)
    n = state.n
    _check_targets(n, target, controls)
    tbit = 1 << (n - 1 - target)
    cmask = 0
    for c in controls:
        cmask |= 1 << (n - 1 - c)
    indices = np.arange(1 << n, dtype=np.intp)
    base = indices[(indices & tbit) == 0]
    if cmask:
        base = base[(base & cmask) == cmask]
    pair = base | tbit
    amps = state.amps
    a0 = amps[base]
    a1 = amps[pair]
    amps[base] = matrix[0, 0] * a0 + matrix[0, 1] * a1
    amps[pair] = matrix[1, 0] * a0 + matrix[1, 1] * a1
    return state


def _outcome_indices(n: int, qubits: Sequence[int]) -> np.ndarray:
    """Map every full-basis index to the integer read off the listed qubits."""
    k = len(qubits)
    indices = np.arange(1 << n, dtype=np.intp)
    out = np.zeros(1 << n, dtype=np.intp)
    for j, q in enumerate(qubits):
        out |= ((indices >> (n - 1 - q)) & 1) << (k - 1 - j)
    return out


def measure_kernel(
    state: StateVector, qubits: Sequence[int], rng: Xoshiro256StarStar
) -> tuple[int, StateVector]:
    """Sample an outcome by the Born rule and collapse the state in place.

    The outcome integer reads the listed qubits with the first as MSB.
    Amplitudes inconsistent with the outcome are zeroed and the rest divided
    by √p, so the state stays normalized.
    """
    qubits = tuple(qubits)
    n = state.n
    for q in qubits:
        if not 0 <= q < n:
            raise IndexOutOfRange(f"qubit {q} out of range for {n}-qubit state")
    if len(set(qubits)) != len(qubits):
        raise IndexOverlap("measured qubits must be distinct")
    out_idx = _outcome_indices(n, qubits)
    weights = np.abs(state.amps) ** 2
    probs = np.bincount(out_idx, weights=weights, minlength=1 << len(qubits))
    total = float(probs.sum())
    if total < 1e-12:
        raise DegenerateState("state has no probability mass left")
    cumulative = np.cumsum(probs)
    u = rng.uniform()
    outcome = int(np.searchsorted(cumulative, u, side="right"))
    if outcome >= len(probs):
        outcome = int(np.max(np.nonzero(probs > 0)[0]))
    p = float(probs[outcome])
    if p < 1e-12:
        raise DegenerateState(f"sampled outcome {outcome} has probability {p}")
    state.amps[out_idx != outcome] = 0.0
    state.amps *= 1.0 / math.sqrt(p)
    return outcome, state


def extract_dump(state: StateVector, qubits: Sequence[int]) -> DumpData:
    """Read the standalone pure state of the selected qubits.

    The full amplitudes are grouped by the bit pattern of the unselected
    qubits; every group with non-negligible norm must be parallel to the
    dominant one (relative residual <= 1e-9), otherwise the selection has no
    pure state of its own and EntangledSelection is raised.  The common
    vector is normalized and sign-flipped so its first nonzero amplitude has
    phase in (-π/2, π/2].
    """
    qubits = tuple(qubits)
    n = state.n
    if not qubits:
        raise ValueError("dump selection is empty")
    for q in qubits:
        if not 0 <= q < n:
            raise IndexOutOfRange(f"qubit {q} out of range for {n}-qubit state")
    if len(set(qubits)) != len(qubits):
        raise IndexOverlap("dumped qubits must be distinct")
    rest = [i for i in range(n) if i not in qubits]
    tensor = state.amps.reshape((2,) * n)
    groups = tensor.transpose(rest + list(qubits)).reshape(-1, 1 << len(qubits))
    norms = np.linalg.norm(groups, axis=1)
    dominant = int(np.argmax(norms))
    reference = groups[dominant] / norms[dominant]
    for row, norm in zip(groups, norms):
        if norm <= 1e-9:
            continue
        residual = row - np.vdot(reference, row) * reference
        if np.linalg.norm(residual) / norm > 1e-9:
            raise EntangledSelection(
                f"qubits {qubits} are entangled with the rest of the state"
            )
    vector = reference
    for amp in vector:
        if abs(amp) > DUST:
            angle = math.atan2(amp.imag, amp.real)
            if not -math.pi / 2 < angle <= math.pi / 2:
                vector = -vector
            break
    basis_states = tuple(
        (int(i), complex(vector[i]))
        for i in range(len(vector))
        if abs(vector[i]) > DUST
    )
    return DumpData(qubits, basis_states)


def execute(code: QuantumCode, seed: int = 0) -> ExecutionResult:
    """Interpret a program deterministically and collect all results.

    Allocation extends the state with |0⟩ qubits, gates run through
    ``apply_kernel``, measurements through ``measure_kernel``, dumps through
    ``extract_dump``, and a conditioned block runs iff its future, already
    recorded earlier in the run, equals the literal.
    """
    code.validate()
    rng = Xoshiro256StarStar(seed)
    state = StateVector.zero(0)
    futures: dict[int, int] = {}
    dumps: dict[int, DumpData] = {}

    def run_block(instructions: Iterable) -> None:
        for ins in instructions:
            if isinstance(ins, Alloc):
                state.extend(ins.count)
            elif isinstance(ins, GateApp):
                apply_kernel(state, gate_matrix(ins.gate), ins.target, ins.controls)
            elif isinstance(ins, Measure):
                outcome, _ = measure_kernel(state, ins.qubits, rng)
                futures[ins.future] = outcome
            elif isinstance(ins, Dump):
                dumps[ins.dump] = extract_dump(state, ins.qubits)
            elif isinstance(ins, Branch):
                if futures[ins.condition.future] == ins.condition.equals:
                    run_block(ins.body)
                continue  # no state change to re-check
            norm = state.norm_sq()
            assert abs(norm - 1.0) <= 1e-9, f"state norm drifted to {norm}"

    run_block(code.instructions)
    return ExecutionResult(futures=futures, dumps=dumps)

"""Engine semantics: gate matrices, kernels, sampling, snapshots, determinism."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import qvm
from qvm import Gate, GateKind
from qvm.errors import (
    DegenerateState,
    EntangledSelection,
    IndexOutOfRange,
    IndexOverlap,
    MalformedCode,
)
from qvm.rng import Xoshiro256StarStar
from qvm.simulator import (
    StateVector,
    apply_kernel,
    execute,
    extract_dump,
    gate_matrix,
    measure_kernel,
)

from oracles import dense_controlled, run_gates

SQRT1_2 = 1 / math.sqrt(2)

ALL_KINDS = list(GateKind)


def random_gate(rng):
    kind = ALL_KINDS[rng.integers(len(ALL_KINDS))]
    if kind in qvm.ir.PARAMETRIC_KINDS:
        return Gate(kind, float(rng.uniform(-2 * math.pi, 2 * math.pi)))
    return Gate(kind)


def random_state(rng, n):
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(n, amps / np.linalg.norm(amps))


class TestRng:
    def test_first_output_of_known_state(self):
        # for state (1, 2, 3, 4): rotl(2*5, 7) * 9 = 1280 * 9
        gen = Xoshiro256StarStar(0)
        gen._s = [1, 2, 3, 4]
        assert gen.next_u64() == 11520

    def test_streams_are_reproducible(self):
        a = [Xoshiro256StarStar(42).next_u64() for _ in range(5)]
        b = [Xoshiro256StarStar(42).next_u64() for _ in range(5)]
        assert a == b

    def test_uniform_range(self):
        gen = Xoshiro256StarStar(7)
        draws = [gen.uniform() for _ in range(1000)]
        assert all(0.0 <= u < 1.0 for u in draws)
        assert 0.4 < sum(draws) / len(draws) < 0.6


class TestGateMatrices:
    def test_hadamard_columns_match_truth_table(self):
        m = gate_matrix(Gate(GateKind.HADAMARD))
        np.testing.assert_allclose(m[:, 0], [SQRT1_2, SQRT1_2], atol=1e-15)
        np.testing.assert_allclose(m[:, 1], [SQRT1_2, -SQRT1_2], atol=1e-15)

    def test_phase_special_cases(self):
        z = gate_matrix(Gate(GateKind.PAULI_Z))
        s = np.diag([1, 1j])
        t = np.diag([1, np.exp(1j * math.pi / 4)])
        assert np.abs(gate_matrix(Gate(GateKind.PHASE, math.pi)) - z).max() < 1e-12
        assert np.abs(gate_matrix(Gate(GateKind.PHASE, math.pi / 2)) - s).max() < 1e-12
        assert np.abs(gate_matrix(Gate(GateKind.PHASE, math.pi / 4)) - t).max() < 1e-12

    @pytest.mark.parametrize("lam", [math.pi / 3, 1.0, 2.5])
    def test_phase_is_rz_up_to_global_phase(self, lam):
        lhs = gate_matrix(Gate(GateKind.PHASE, lam))
        rhs = np.exp(0.5j * lam) * gate_matrix(Gate(GateKind.RZ, lam))
        assert np.abs(lhs - rhs).max() < 1e-12

    @given(st.integers(0, 10**6))
    def test_every_gate_is_unitary_and_inverse_is_dagger(self, seed):
        gate = random_gate(np.random.default_rng(seed))
        m = gate_matrix(gate)
        assert np.abs(m @ m.conj().T - np.eye(2)).max() < 1e-12
        assert np.abs(gate_matrix(gate.inverse()) - m.conj().T).max() < 1e-12


class TestApplyKernel:
    def test_cnot_truth_table(self):
        x = gate_matrix(Gate(GateKind.PAULI_X))
        for source, expected in [(0b00, 0b00), (0b01, 0b01), (0b10, 0b11), (0b11, 0b10)]:
            state = apply_kernel(StateVector.basis(2, source), x, target=1, controls=[0])
            assert abs(state.amps[expected] - 1.0) < 1e-12

    def test_bell_preparation(self):
        state = StateVector.zero(2)
        apply_kernel(state, gate_matrix(Gate(GateKind.HADAMARD)), 0)
        apply_kernel(state, gate_matrix(Gate(GateKind.PAULI_X)), 1, [0])
        np.testing.assert_allclose(state.amps, [SQRT1_2, 0, 0, SQRT1_2], atol=1e-15)

    def test_index_errors(self):
        state = StateVector.zero(2)
        x = gate_matrix(Gate(GateKind.PAULI_X))
        with pytest.raises(IndexOverlap):
            apply_kernel(state, x, 0, [0])
        with pytest.raises(IndexOutOfRange):
            apply_kernel(state, x, 2)
        with pytest.raises(IndexOutOfRange):
            apply_kernel(state, x, 0, [5])

    def test_matches_dense_oracle_on_200_random_cases(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            n = int(rng.integers(1, 7))
            target = int(rng.integers(n))
            others = [q for q in range(n) if q != target]
            rng.shuffle(others)
            controls = others[: rng.integers(0, len(others) + 1)]
            gate = random_gate(rng)
            state = random_state(rng, n)
            expected = dense_controlled(gate_matrix(gate), n, target, controls) @ state.amps
            got = apply_kernel(state, gate_matrix(gate), target, controls)
            assert np.abs(got.amps - expected).max() < 1e-10

    def test_norm_preserved(self):
        rng = np.random.default_rng(5)
        state = random_state(rng, 4)
        apply_kernel(state, gate_matrix(Gate(GateKind.RY, 1.1)), 2, [0, 3])
        assert abs(state.norm_sq() - 1.0) < 1e-12


class TestMeasureKernel:
    def bell_state(self):
        state = StateVector.zero(2)
        apply_kernel(state, gate_matrix(Gate(GateKind.HADAMARD)), 0)
        apply_kernel(state, gate_matrix(Gate(GateKind.PAULI_X)), 1, [0])
        return state

    def test_bell_outcomes_and_frequencies(self):
        counts = {0: 0, 3: 0}
        for seed in range(10000):
            outcome, _ = measure_kernel(self.bell_state(), (0, 1), Xoshiro256StarStar(seed))
            assert outcome in (0, 3)
            counts[outcome] += 1
        assert 0.47 <= counts[0] / 10000 <= 0.53

    def test_partial_measure_collapses_to_consistent_state(self):
        for seed in range(50):
            state = self.bell_state()
            outcome, collapsed = measure_kernel(state, (0,), Xoshiro256StarStar(seed))
            expected = np.zeros(4, dtype=complex)
            expected[0b11 if outcome else 0b00] = 1.0
            np.testing.assert_allclose(collapsed.amps, expected, atol=1e-12)

    def test_basis_state_is_deterministic(self):
        state = StateVector.basis(1, 0)
        outcome, collapsed = measure_kernel(state, (0,), Xoshiro256StarStar(99))
        assert outcome == 0
        np.testing.assert_allclose(collapsed.amps, [1, 0], atol=1e-15)

    def test_first_listed_qubit_is_msb(self):
        state = StateVector.basis(2, 0b01)  # qubit0=0, qubit1=1
        outcome, _ = measure_kernel(state, (1, 0), Xoshiro256StarStar(0))
        assert outcome == 0b10

    def test_degenerate_state_detected(self):
        state = StateVector(1, np.zeros(2, dtype=complex))
        with pytest.raises(DegenerateState):
            measure_kernel(state, (0,), Xoshiro256StarStar(0))

    def test_statistics_match_born_rule(self):
        # amplitudes fixed arbitrarily; 20000 seeded draws per state
        rng = np.random.default_rng(11)
        for n in (1, 2, 4):
            state = random_state(rng, n)
            probs = np.abs(state.amps) ** 2
            counts = np.zeros(1 << n)
            trials = 20000
            for seed in range(trials):
                fresh = StateVector(n, state.amps.copy())
                outcome, _ = measure_kernel(fresh, tuple(range(n)), Xoshiro256StarStar(seed))
                counts[outcome] += 1
            assert np.abs(counts / trials - probs).max() <= 0.02


class TestExtractDump:
    def test_full_bell_selection(self):
        state = StateVector(2, np.array([SQRT1_2, 0, 0, SQRT1_2], dtype=complex))
        data = extract_dump(state, (0, 1))
        assert data.qubits == (0, 1)
        assert [b for b, _ in data.basis_states] == [0, 3]
        for _, amp in data.basis_states:
            assert abs(amp - SQRT1_2) < 1e-12

    def test_single_qubit_of_bell_pair_is_entangled(self):
        state = StateVector(2, np.array([SQRT1_2, 0, 0, SQRT1_2], dtype=complex))
        with pytest.raises(EntangledSelection):
            extract_dump(state, (0,))

    def test_separable_selection_of_product_state(self):
        plus = np.array([SQRT1_2, SQRT1_2])
        one = np.array([0, 1])
        state = StateVector(2, np.kron(one, plus).astype(complex))
        data = extract_dump(state, (1,))
        np.testing.assert_allclose(
            [amp for _, amp in data.basis_states], [SQRT1_2, SQRT1_2], atol=1e-12
        )

    def test_sign_convention_flips_negative_leads(self):
        state = StateVector(1, np.array([-SQRT1_2, SQRT1_2], dtype=complex))
        data = extract_dump(state, (0,))
        assert data.basis_states[0][1].real > 0
        assert data.basis_states[1][1].real < 0

    def test_imaginary_lead_in_right_half_plane_is_kept(self):
        state = StateVector(1, np.array([0, 1j], dtype=complex))
        data = extract_dump(state, (0,))
        assert data.basis_states == ((1, 1j),)

    def test_selection_order_sets_bit_order(self):
        state = StateVector.basis(2, 0b01)
        data = extract_dump(state, (1, 0))
        assert data.basis_states == ((0b10, (1 + 0j)),)


class TestExecute:
    def test_alloc_only_program(self):
        code = qvm.QuantumCode(3, (qvm.Alloc(3), qvm.Dump((0, 1, 2), 0)), 0, 1)
        result = execute(code, seed=9)
        assert result.futures == {}
        assert result.dumps[0].basis_states == ((0, (1 + 0j)),)

    def test_mid_program_alloc_extends_with_zeros(self):
        p = qvm.new_process()
        (a,) = p.alloc(1)
        qvm.x(a)
        (b,) = p.alloc(1)
        p.dump_state([a, b])
        result = execute(p.code, seed=0)
        assert result.dumps[0].basis_states == ((0b10, (1 + 0j)),)

    def test_deterministic_in_code_and_seed(self):
        p = qvm.new_process()
        qs = p.alloc(3)
        for q in qs:
            qvm.h(q)
        p.measure(qs)
        p.dump_state(qs)
        code = p.code
        first = execute(code, seed=1234)
        second = execute(code, seed=1234)
        assert first == second

    def test_branch_applied_iff_condition_holds(self):
        for equals, expected in [(1, 1), (0, 0)]:
            p = qvm.new_process()
            a, b = p.alloc(2)
            qvm.x(a)
            f = p.measure([a])
            p.branch(f, equals, lambda: qvm.x(b))
            m = p.measure([b])
            result = execute(p.code, seed=0)
            assert result.futures[f.future_id] == 1
            assert result.futures[m.future_id] == expected

    def test_invalid_code_rejected(self):
        bad = qvm.QuantumCode(1, (qvm.Alloc(1), qvm.GateApp(Gate(GateKind.PAULI_X), 5)), 0, 0)
        with pytest.raises(MalformedCode):
            execute(bad)


class TestAlgebraicProperties:
    @given(st.integers(0, 10**6))
    @settings(max_examples=60)
    def test_sequence_then_adjoint_returns_to_prefix(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 6))

        def random_ops(count):
            ops = []
            for _ in range(count):
                gate = random_gate(rng)
                target = int(rng.integers(n))
                controls = []
                if n > 1 and rng.random() < 0.4:
                    controls = [int(c) for c in rng.choice(
                        [q for q in range(n) if q != target],
                        size=rng.integers(1, n),
                        replace=False,
                    )]
                ops.append((gate, target, tuple(controls)))
            return ops

        prefix = random_ops(int(rng.integers(0, 8)))
        middle = random_ops(int(rng.integers(1, 31)))

        def emit(process, qubits, ops):
            for gate, target, controls in ops:
                if controls:
                    process.ctrl_begin([qubits[c] for c in controls])
                process.apply_gate(gate, qubits[target])
                if controls:
                    process.ctrl_end()

        reference = qvm.new_process()
        emit(reference, reference.alloc(n), prefix)

        round_trip = qvm.new_process()
        qs = round_trip.alloc(n)
        emit(round_trip, qs, prefix)
        emit(round_trip, qs, middle)
        with qvm.adj(round_trip):
            emit(round_trip, qs, middle)

        want = run_gates(reference.code, StateVector.zero(n))
        got = run_gates(round_trip.code, StateVector.zero(n))
        assert np.abs(got.amps - want.amps).max() < 1e-9

    @given(st.integers(0, 10**6))
    @settings(max_examples=100)
    def test_hadamard_equals_ry_then_x(self, seed):
        rng = np.random.default_rng(seed)
        amps = rng.normal(size=2) + 1j * rng.normal(size=2)
        amps /= np.linalg.norm(amps)

        via_h = StateVector(1, amps.copy())
        apply_kernel(via_h, gate_matrix(Gate(GateKind.HADAMARD)), 0)

        via_ry = StateVector(1, amps.copy())
        apply_kernel(via_ry, gate_matrix(Gate(GateKind.RY, math.pi / 2)), 0)
        apply_kernel(via_ry, gate_matrix(Gate(GateKind.PAULI_X)), 0)

        assert np.abs(via_h.amps - via_ry.amps).max() < 1e-10

    def test_norm_holds_after_every_instruction(self):
        # long random program through the full interpreter
        rng = np.random.default_rng(77)
        p = qvm.new_process()
        qs = p.alloc(4)
        for _ in range(60):
            kind = rng.integers(3)
            target = qs[rng.integers(4)]
            if kind == 0:
                p.apply_gate(random_gate(rng), target)
            elif kind == 1:
                other = qs[(target.index + 1) % 4]
                qvm.cnot(other, target)
            else:
                p.measure([target])
        p.dump_state(qs)
        execute(p.code, seed=3)  # interpreter asserts normalization internally

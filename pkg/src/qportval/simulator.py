"""Dense statevector simulation of the loading-and-payoff circuit.

The register layout is ``|i> ⊗ |ancilla>`` for grid index ``i``: amplitude
``k = 2*i + anc``, ancilla last.  The full pipeline is

    A = W (P ⊗ 1)        P: load sqrt(p(i)) onto the grid register
                         W: rotate each branch's ancilla to amplitude sqrt(f(i))

so the ancilla-1 probability of ``A|0>`` is ``sum_i p(i) f(i)``.  The
amplification operator ``Q = A S0 A^T S_chi`` (S_chi flips the sign of every
ancilla-1 amplitude, S0 flips only the global all-zeros state) advances the
amplitude angle by 2*theta per application.

All constructions here are real, so adjoints are plain transposes; the middle
product ``A S0 A^T`` is applied as the rank-one reflection ``1 - 2|psi><psi|``
with ``|psi> = A|0>``, which is algebraically identical for orthogonal ``A``.
``P`` itself is written by direct amplitude assignment; a binary-tree rotation
decomposition of ``P`` is provided for round-trip verification and gate
counting, not as the runtime path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ModeMismatch
from .estimation import ShotRecord
from .grids import DiscreteDistribution, JointGrid

_REAL_TOL = 1e-12

PAYOFF_MODES = ("exact", "linear_rotation")


@dataclass
class StateVector:
    """Amplitudes over grid ⊗ ancilla, ancilla as the fastest-varying bit."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        n = len(self.amplitudes)
        if n < 2 or n & (n - 1):
            raise ValueError(f"amplitude count {n} is not a power of two")

    @property
    def n_qubits(self) -> int:
        return int(len(self.amplitudes)).bit_length() - 1

    @property
    def n_grid_states(self) -> int:
        return len(self.amplitudes) // 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy())

    def probabilities(self) -> np.ndarray:
        """Born-rule outcome distribution over all basis states."""
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class PayoffEncoding:
    """How payoff values enter the ancilla rotation.

    ``exact`` writes each f(i) directly into the ancilla-1 probability via a
    per-state rotation (feasible at these register sizes and used as the
    verification reference).  ``linear_rotation`` uses the small-angle
    controlled-rotation scheme: ancilla-1 amplitude ``sin(c*(f - 1/2) + pi/4)``
    with scaling ``c``; estimates must then be inverted downstream.
    """

    mode: str
    f_values: np.ndarray
    scaling: float = 0.25

    def __post_init__(self) -> None:
        if self.mode not in PAYOFF_MODES:
            raise ModeMismatch(f"unknown payoff mode {self.mode!r}")
        if self.mode == "linear_rotation" and not 0.0 < self.scaling <= 0.5:
            raise ValueError(f"scaling c={self.scaling} must lie in (0, 0.5]")
        f = np.asarray(self.f_values, dtype=float)
        if np.any(f < 0.0) or np.any(f > 1.0):
            raise ValueError("payoff values must lie in [0, 1]")
        object.__setattr__(self, "f_values", f)

    def half_angles(self) -> np.ndarray:
        """Per-state ancilla rotation half-angles."""
        if self.mode == "exact":
            return np.arcsin(np.sqrt(self.f_values))
        return self.scaling * (self.f_values - 0.5) + np.pi / 4


def prepare_p(grid: JointGrid) -> StateVector:
    """Loading state: amplitude sqrt(p(i)) on ``|i>|0>``, ancilla untouched."""
    amps = np.zeros(2 * len(grid), dtype=complex)
    amps[0::2] = np.sqrt(grid.probs)
    return StateVector(amps)


def apply_w(state: StateVector, enc: PayoffEncoding) -> StateVector:
    """Rotate each grid branch's ancilla by the encoding's angle.

    On a state whose ancilla is |0>-aligned this leaves the ancilla-1
    amplitude of branch ``i`` at ``sin(half_angle_i)`` times the branch
    amplitude (``sqrt(f(i))`` in exact mode).
    """
    if len(enc.f_values) != state.n_grid_states:
        raise ModeMismatch(
            f"{len(enc.f_values)} payoff values vs {state.n_grid_states} grid states"
        )
    half = enc.half_angles()
    cos, sin = np.cos(half), np.sin(half)
    pairs = state.amplitudes.reshape(-1, 2)
    out = np.empty_like(pairs)
    out[:, 0] = cos * pairs[:, 0] - sin * pairs[:, 1]
    out[:, 1] = sin * pairs[:, 0] + cos * pairs[:, 1]
    return StateVector(out.reshape(-1))


def ancilla_one_probability(state: StateVector) -> float:
    """Total probability of measuring the ancilla in |1>."""
    return float(np.sum(np.abs(state.amplitudes[1::2]) ** 2))


@dataclass
class Oracle:
    """The full loading operator ``A``: grid distribution plus payoff rotation.

    Holds the prepared state ``A|0>`` and the gate counts of an equivalent
    circuit; one application of the amplification operator counts two calls
    to ``A``.
    """

    grid: JointGrid
    encoding: PayoffEncoding
    _prepared: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        psi = apply_w(prepare_p(self.grid), self.encoding).amplitudes
        if np.max(np.abs(psi.imag)) > _REAL_TOL:
            raise AssertionError("loading construction produced complex amplitudes")
        self._prepared = psi

    def initial_state(self) -> StateVector:
        """Fresh copy of ``A|0>``."""
        return StateVector(self._prepared.copy())

    @property
    def amplitude(self) -> float:
        """Ancilla-1 probability of ``A|0>`` (the estimation target)."""
        return float(np.sum(np.abs(self._prepared[1::2]) ** 2))

    @property
    def preparation_gate_count(self) -> int:
        """Rotations loading both marginals onto the grid register."""
        return (len(self.grid.delta_e_dist) - 1) + (len(self.grid.delta_r_dist) - 1)

    @property
    def payoff_gate_count(self) -> int:
        """Controlled rotations realizing the payoff encoding."""
        if self.encoding.mode == "exact":
            return len(self.grid)
        # affine angle in the register bits: one rotation per qubit plus offset
        return self.grid.n_qubits + 1

    @property
    def a_gate_count(self) -> int:
        return self.preparation_gate_count + self.payoff_gate_count

    @property
    def q_gate_count(self) -> int:
        """Gates per amplification step: two A applications plus reflections."""
        return 2 * self.a_gate_count + 2

    def circuit_gate_count(self, grover_power: int) -> int:
        """Gates of the whole circuit ``Q^m A`` for a given power ``m``."""
        return self.a_gate_count + grover_power * self.q_gate_count


def apply_q(state: StateVector, oracle: Oracle) -> StateVector:
    """One amplification step ``Q = A S0 A^T S_chi``, right to left.

    S_chi negates every ancilla-1 amplitude; ``A S0 A^T`` then reflects
    through the prepared state (rank-one form, exact for real orthogonal A).
    """
    v = state.amplitudes.copy()
    v[1::2] *= -1.0
    psi = oracle._prepared
    v -= 2.0 * psi * np.dot(psi, v)
    return StateVector(v)


def amplified_state(oracle: Oracle, grover_power: int) -> StateVector:
    """State after ``grover_power`` amplification steps on ``A|0>``."""
    state = oracle.initial_state()
    for _ in range(grover_power):
        state = apply_q(state, oracle)
    return state


@dataclass(frozen=True)
class ControlledRotation:
    """Y-rotation on ``target`` conditioned on control bits matching values."""

    target: int
    angle: float
    controls: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class GateDecomposition:
    """Ordered rotation gates preparing a distribution on a small register."""

    n_qubits: int
    gates: tuple[ControlledRotation, ...]

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Apply all gates to an amplitude vector of 2**n_qubits entries."""
        v = np.array(vec, copy=True)
        idx = np.arange(len(v))
        for gate in self.gates:
            sel = np.ones(len(v), dtype=bool)
            for qubit, value in gate.controls:
                sel &= ((idx >> qubit) & 1) == value
            i0 = idx[sel & (((idx >> gate.target) & 1) == 0)]
            i1 = i0 | (1 << gate.target)
            c, s = np.cos(gate.angle / 2.0), np.sin(gate.angle / 2.0)
            v0, v1 = v[i0].copy(), v[i1].copy()
            v[i0] = c * v0 - s * v1
            v[i1] = s * v0 + c * v1
        return v

    def apply_to_zero(self) -> np.ndarray:
        """Amplitudes produced from the all-zeros register state."""
        v = np.zeros(2**self.n_qubits)
        v[0] = 1.0
        return self.apply(v)


def grover_rudolph_decompose(dist: DiscreteDistribution) -> GateDecomposition:
    """Binary-tree rotation decomposition loading ``sqrt(p)`` onto a register.

    Level ``l`` rotates the register's bit of significance ``q-1-l``,
    conditioned on the ``l`` more significant bits; the rotation angle at each
    node is ``2*arccos(sqrt(P(left half) / P(node)))``.  Nodes with zero mass
    get angle 0 (all mass kept left).
    """
    n = len(dist)
    q = int(n - 1).bit_length()
    if 2**q != n:
        raise ValueError(f"distribution size {n} is not a power of two")
    probs = dist.probs
    gates: list[ControlledRotation] = []
    for level in range(q):
        target = q - 1 - level
        block = 2 ** (q - level)
        for node in range(2**level):
            p_node = probs[node * block : (node + 1) * block].sum()
            p_left = probs[node * block : node * block + block // 2].sum()
            if p_node <= 0.0:
                angle = 0.0
            else:
                ratio = min(max(p_left / p_node, 0.0), 1.0)
                angle = 2.0 * np.arccos(np.sqrt(ratio))
            controls = tuple(
                (q - 1 - bit, (node >> (level - 1 - bit)) & 1) for bit in range(level)
            )
            gates.append(ControlledRotation(target=target, angle=angle, controls=controls))
    return GateDecomposition(n_qubits=q, gates=tuple(gates))


def sample_shots(
    state: StateVector, n_shots: int, seed, grover_power: int = 0
) -> tuple[ShotRecord, np.ndarray]:
    """Measure every qubit ``n_shots`` times with a seeded generator.

    Returns the ancilla-1 count as a shot record (tagged with the circuit's
    amplification power) plus the full histogram over all basis states, which
    the fidelity analysis consumes.  Identical seeds give identical counts.
    """
    if n_shots < 1:
        raise ValueError("n_shots must be >= 1")
    probs = state.probabilities()
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    histogram = rng.multinomial(n_shots, probs)
    n_good = int(histogram[1::2].sum())
    record = ShotRecord(grover_power=grover_power, n_shots=n_shots, n_good=n_good)
    return record, histogram


def depolarize(probs: np.ndarray, rate_per_gate: float, gate_count: int) -> np.ndarray:
    """Mix an outcome distribution toward uniform, compounding per gate.

    The surviving fraction after ``gate_count`` gates at per-gate error
    ``rate_per_gate`` is ``(1 - rate)**gates``; the lost fraction lands on the
    uniform distribution over all outcomes.
    """
    if not 0.0 <= rate_per_gate <= 1.0:
        raise ValueError("rate_per_gate must lie in [0, 1]")
    probs = np.asarray(probs, dtype=float)
    keep = (1.0 - rate_per_gate) ** gate_count
    return keep * probs + (1.0 - keep) / len(probs)

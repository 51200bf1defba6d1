"""Statevector simulator: loading, payoff rotation, amplification, sampling."""

import math

import numpy as np
import pytest

from qportval.errors import ModeMismatch
from qportval.grids import (
    DiscreteDistribution,
    GridSpec,
    discretize_truncated_normal,
    joint_grid,
)
from qportval.simulator import (
    Oracle,
    PayoffEncoding,
    StateVector,
    amplified_state,
    ancilla_one_probability,
    apply_q,
    apply_w,
    depolarize,
    grover_rudolph_decompose,
    prepare_p,
    sample_shots,
)

from helpers import two_asset_pipeline
from qportval.grids import grid_values_to_payoff


def uniform_grid(bits_each: int = 1) -> "JointGrid":
    spec = GridSpec(bits=bits_each, mean=0.0, sigma=100.0, lower=-1, upper=1)
    return joint_grid(spec, spec)


def random_instance(rng: np.random.Generator):
    """Random (grid, payoff) pair with a well-conditioned amplitude."""
    bits = int(rng.integers(1, 3))
    e_spec = GridSpec(
        bits=bits,
        mean=float(rng.uniform(-0.05, 0.05)),
        sigma=float(rng.uniform(0.05, 0.5)),
        lower=-float(rng.uniform(0.2, 0.5)),
        upper=float(rng.uniform(0.2, 0.5)),
    )
    r_spec = GridSpec(
        bits=bits,
        mean=0.0,
        sigma=float(rng.uniform(0.005, 0.05)),
        lower=-float(rng.uniform(0.02, 0.05)),
        upper=float(rng.uniform(0.02, 0.05)),
    )
    grid = joint_grid(e_spec, r_spec)
    f = rng.uniform(0.0, 1.0, size=len(grid))
    mode = "exact" if rng.random() < 0.5 else "linear_rotation"
    enc = PayoffEncoding(mode=mode, f_values=f, scaling=0.25)
    return Oracle(grid=grid, encoding=enc)


class TestPrepare:
    def test_uniform_four_state_amplitudes(self):
        state = prepare_p(uniform_grid())
        np.testing.assert_allclose(state.amplitudes[0::2], [0.5] * 4, atol=1e-15)
        np.testing.assert_allclose(state.amplitudes[1::2], [0.0] * 4, atol=1e-15)

    def test_stable_grid_amplitudes_are_sqrt_probs(self):
        *_, grid = two_asset_pipeline()
        state = prepare_p(grid)
        np.testing.assert_allclose(
            state.amplitudes[0::2].real, np.sqrt(grid.probs), atol=1e-15
        )
        assert state.norm() == pytest.approx(1.0, abs=1e-12)

    def test_measurement_distribution_is_grid_distribution(self):
        *_, grid = two_asset_pipeline()
        probs = prepare_p(grid).probabilities()
        np.testing.assert_allclose(probs[0::2], grid.probs, atol=1e-15)
        np.testing.assert_allclose(probs[1::2], 0.0, atol=1e-15)


class TestPayoffRotation:
    def test_f_one_everywhere_gives_certain_ancilla(self):
        grid = uniform_grid()
        enc = PayoffEncoding(mode="exact", f_values=np.ones(len(grid)))
        state = apply_w(prepare_p(grid), enc)
        assert ancilla_one_probability(state) == pytest.approx(1.0, abs=1e-12)

    def test_f_zero_everywhere_gives_no_ancilla(self):
        grid = uniform_grid()
        enc = PayoffEncoding(mode="exact", f_values=np.zeros(len(grid)))
        state = apply_w(prepare_p(grid), enc)
        assert ancilla_one_probability(state) == pytest.approx(0.0, abs=1e-12)

    def test_linear_rotation_fixed_point_at_half(self):
        grid = uniform_grid()
        for c in (0.1, 0.25, 0.5):
            enc = PayoffEncoding(
                mode="linear_rotation", f_values=np.full(len(grid), 0.5), scaling=c
            )
            state = apply_w(prepare_p(grid), enc)
            assert ancilla_one_probability(state) == pytest.approx(0.5, abs=1e-12)

    def test_exact_mode_per_state_probability_is_f(self):
        *_, grid = two_asset_pipeline()
        rng = np.random.default_rng(7)
        f = rng.uniform(0, 1, size=len(grid))
        state = apply_w(prepare_p(grid), PayoffEncoding(mode="exact", f_values=f))
        probs = state.probabilities()
        branch = probs[0::2] + probs[1::2]
        with np.errstate(invalid="ignore"):
            conditional = np.where(branch > 0, probs[1::2] / branch, 0.0)
        np.testing.assert_allclose(conditional, f, atol=1e-12)

    def test_linear_rotation_per_state_probability(self):
        *_, grid = two_asset_pipeline()
        rng = np.random.default_rng(8)
        f = rng.uniform(0, 1, size=len(grid))
        c = 0.25
        enc = PayoffEncoding(mode="linear_rotation", f_values=f, scaling=c)
        state = apply_w(prepare_p(grid), enc)
        probs = state.probabilities()
        branch = probs[0::2] + probs[1::2]
        expected = np.sin(c * (f - 0.5) + np.pi / 4) ** 2
        np.testing.assert_allclose(probs[1::2] / branch, expected, atol=1e-12)

    def test_norm_preserved(self):
        *_, grid = two_asset_pipeline()
        rng = np.random.default_rng(9)
        f = rng.uniform(0, 1, size=len(grid))
        state = apply_w(prepare_p(grid), PayoffEncoding(mode="exact", f_values=f))
        assert state.norm() == pytest.approx(1.0, abs=1e-12)

    def test_length_mismatch_raises(self):
        grid = uniform_grid()
        enc = PayoffEncoding(mode="exact", f_values=np.zeros(3))
        with pytest.raises(ModeMismatch):
            apply_w(prepare_p(grid), enc)

    def test_bad_mode_and_scaling_rejected(self):
        with pytest.raises(ModeMismatch):
            PayoffEncoding(mode="other", f_values=np.zeros(4))
        with pytest.raises(ValueError):
            PayoffEncoding(mode="linear_rotation", f_values=np.zeros(4), scaling=0.9)
        with pytest.raises(ValueError):
            PayoffEncoding(mode="exact", f_values=np.array([0.2, 1.2]))


class TestAncillaProbability:
    def test_basis_state_with_ancilla_one(self):
        amps = np.zeros(8)
        amps[1] = 1.0  # |00>|1>
        assert ancilla_one_probability(StateVector(amps)) == 1.0

    def test_equal_superposition_is_half(self):
        amps = np.full(32, 1 / math.sqrt(32))
        assert ancilla_one_probability(StateVector(amps)) == pytest.approx(0.5)

    def test_matches_brute_force_sum(self):
        _, spec, coeffs, scale, grid = two_asset_pipeline()
        f = grid_values_to_payoff(grid, spec, coeffs, scale)
        oracle = Oracle(grid=grid, encoding=PayoffEncoding(mode="exact", f_values=f))
        assert oracle.amplitude == pytest.approx(float(grid.probs @ f), abs=1e-12)


class TestAmplification:
    def test_quarter_amplitude_reaches_one_in_one_step(self):
        # a = sin^2(pi/6) = 0.25; one step: sin^2(pi/2) = 1
        grid = uniform_grid()
        enc = PayoffEncoding(mode="exact", f_values=np.full(len(grid), 0.25))
        oracle = Oracle(grid=grid, encoding=enc)
        state = apply_q(oracle.initial_state(), oracle)
        assert ancilla_one_probability(state) == pytest.approx(1.0, abs=1e-10)

    def test_zero_amplitude_is_fixed_point(self):
        grid = uniform_grid()
        enc = PayoffEncoding(mode="exact", f_values=np.zeros(len(grid)))
        oracle = Oracle(grid=grid, encoding=enc)
        state = amplified_state(oracle, 3)
        assert ancilla_one_probability(state) == pytest.approx(0.0, abs=1e-12)

    def test_closed_form_across_random_instances(self):
        rng = np.random.default_rng(1234)
        for _ in range(10):
            oracle = random_instance(rng)
            theta = math.asin(math.sqrt(oracle.amplitude))
            state = oracle.initial_state()
            for m in range(33):
                expected = math.sin((2 * m + 1) * theta) ** 2
                assert ancilla_one_probability(state) == pytest.approx(
                    expected, abs=1e-10
                )
                state = apply_q(state, oracle)

    def test_norm_preserved_through_many_steps(self):
        rng = np.random.default_rng(5)
        oracle = random_instance(rng)
        state = amplified_state(oracle, 32)
        assert state.norm() == pytest.approx(1.0, abs=1e-10)

    def test_q_is_orthogonal_on_the_full_space(self):
        _, spec, coeffs, scale, grid = two_asset_pipeline()
        f = grid_values_to_payoff(grid, spec, coeffs, scale)
        oracle = Oracle(grid=grid, encoding=PayoffEncoding(mode="exact", f_values=f))
        dim = 2 * len(grid)
        columns = []
        for k in range(dim):
            basis = np.zeros(dim)
            basis[k] = 1.0
            columns.append(apply_q(StateVector(basis), oracle).amplitudes)
        q_matrix = np.column_stack(columns)
        assert np.max(np.abs(q_matrix.imag)) < 1e-12
        np.testing.assert_allclose(
            q_matrix.T @ q_matrix, np.eye(dim), atol=1e-10
        )


class TestGroverRudolph:
    def test_balanced_split_angle(self):
        dist = DiscreteDistribution(
            points=np.array([0.0, 1.0]), probs=np.array([0.5, 0.5])
        )
        decomp = grover_rudolph_decompose(dist)
        assert decomp.gate_count == 1
        assert decomp.gates[0].angle == pytest.approx(math.pi / 2)

    def test_degenerate_branch_angle_zero(self):
        dist = DiscreteDistribution(
            points=np.array([0.0, 1.0]), probs=np.array([1.0, 0.0])
        )
        decomp = grover_rudolph_decompose(dist)
        assert decomp.gates[0].angle == pytest.approx(0.0)
        np.testing.assert_allclose(decomp.apply_to_zero(), [1.0, 0.0], atol=1e-15)

    def test_roundtrip_q2_truncated_normal(self):
        dist = discretize_truncated_normal(
            GridSpec(bits=2, mean=0.0, sigma=0.1, lower=-0.3, upper=0.3)
        )
        decomp = grover_rudolph_decompose(dist)
        assert decomp.gate_count == 3  # one node per tree level slot
        np.testing.assert_allclose(
            decomp.apply_to_zero(), np.sqrt(dist.probs), atol=1e-12
        )

    def test_roundtrip_asymmetric_q3(self):
        dist = discretize_truncated_normal(
            GridSpec(bits=3, mean=0.07, sigma=0.2, lower=-0.3, upper=0.5)
        )
        decomp = grover_rudolph_decompose(dist)
        assert decomp.gate_count == 7
        np.testing.assert_allclose(
            decomp.apply_to_zero(), np.sqrt(dist.probs), atol=1e-12
        )


class TestSampling:
    def test_certain_outcomes(self):
        grid = uniform_grid()
        ones = PayoffEncoding(mode="exact", f_values=np.ones(len(grid)))
        state = apply_w(prepare_p(grid), ones)
        record, _ = sample_shots(state, 500, seed=3)
        assert record.n_good == 500
        zeros = PayoffEncoding(mode="exact", f_values=np.zeros(len(grid)))
        state = apply_w(prepare_p(grid), zeros)
        record, _ = sample_shots(state, 500, seed=3)
        assert record.n_good == 0

    def test_binomial_concentration_at_half(self):
        grid = uniform_grid()
        enc = PayoffEncoding(mode="exact", f_values=np.full(len(grid), 0.5))
        state = apply_w(prepare_p(grid), enc)
        n = 10**6
        record, _ = sample_shots(state, n, seed=42)
        assert abs(record.n_good / n - 0.5) < 5 * 0.0005

    def test_seed_determinism(self):
        *_, grid = two_asset_pipeline()
        rng = np.random.default_rng(11)
        f = rng.uniform(0, 1, len(grid))
        state = apply_w(prepare_p(grid), PayoffEncoding(mode="exact", f_values=f))
        rec1, hist1 = sample_shots(state, 1000, seed=(7, 0), grover_power=2)
        rec2, hist2 = sample_shots(state, 1000, seed=(7, 0), grover_power=2)
        assert rec1 == rec2
        np.testing.assert_array_equal(hist1, hist2)
        rec3, _ = sample_shots(state, 1000, seed=(8, 0))
        assert rec3.n_good != rec1.n_good or rec3 != rec1

    def test_histogram_totals_and_consistency(self):
        *_, grid = two_asset_pipeline()
        state = prepare_p(grid)
        record, hist = sample_shots(state, 1000, seed=1)
        assert hist.sum() == 1000
        assert record.n_good == hist[1::2].sum()


class TestDepolarize:
    def test_zero_rate_is_identity(self):
        probs = np.array([0.5, 0.25, 0.25, 0.0])
        np.testing.assert_array_equal(depolarize(probs, 0.0, 100), probs)

    def test_full_mixing_is_uniform(self):
        probs = np.array([1.0, 0.0, 0.0, 0.0])
        np.testing.assert_allclose(depolarize(probs, 1.0, 1), np.full(4, 0.25))

    def test_fidelity_decreases_with_noise(self):
        from qportval.harness import hellinger_fidelity

        *_, grid = two_asset_pipeline()
        ideal = prepare_p(grid).probabilities()
        fids = [
            hellinger_fidelity(ideal, depolarize(ideal, rate, 20))
            for rate in (0.001, 0.01, 0.05)
        ]
        assert fids[0] > fids[1] > fids[2]

    def test_remains_normalized(self):
        *_, grid = two_asset_pipeline()
        ideal = prepare_p(grid).probabilities()
        noisy = depolarize(ideal, 0.02, 37)
        assert noisy.sum() == pytest.approx(1.0, abs=1e-12)

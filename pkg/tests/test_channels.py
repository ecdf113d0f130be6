import numpy as np
import pytest

from fidelion import channels
from fidelion.errors import DimensionMismatchError, InvalidParameterError, ParseError
from fidelion.fidelity import fidelity_two_qubit, teleportation_witness, witness_value
from fidelion.states import DensityMatrix, random_density_matrix, schmidt_state

BELL = schmidt_state([0.5, 0.5])


def single(d, mat):
    return DensityMatrix((1, d), mat)


class TestKrausChannel:
    def test_trace_preservation_enforced(self):
        with pytest.raises(InvalidParameterError):
            channels.KrausChannel(2, 2, (np.eye(2) * 0.5,))

    def test_needs_an_operator(self):
        with pytest.raises(InvalidParameterError):
            channels.KrausChannel(2, 2, ())

    def test_depolarizing_is_unital(self):
        assert channels.depolarizing(2, 0.3).is_unital()
        assert channels.depolarizing(3, 0.7).is_unital()


class TestDepolarizing:
    def test_parameter_validation(self):
        with pytest.raises(InvalidParameterError):
            channels.depolarizing(5, 0.5)
        with pytest.raises(InvalidParameterError):
            channels.depolarizing(2, 1.5)

    def test_p_one_is_identity(self):
        chan = channels.depolarizing(2, 1.0)
        rho = random_density_matrix(1, 2, seed=3)
        out = channels.apply(chan, rho)
        assert np.abs(out.matrix - rho.matrix).max() <= 1e-12

    def test_p_zero_is_constant(self):
        chan = channels.depolarizing(3, 0.0)
        rho = random_density_matrix(1, 3, seed=4)
        out = channels.apply(chan, rho)
        assert np.abs(out.matrix - np.eye(3) / 3).max() <= 1e-12

    def test_half_depolarized_ground_state(self):
        chan = channels.depolarizing(2, 0.5)
        out = chan.apply_matrix(np.diag([1.0, 0.0]).astype(complex))
        assert np.abs(out - np.diag([0.75, 0.25])).max() <= 1e-12

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_affine_action_on_random_inputs(self, d):
        rng = np.random.default_rng(d)
        for _ in range(20):
            p = rng.uniform()
            chan = channels.depolarizing(d, p)
            rho = random_density_matrix(1, d, seed=rng)
            out = chan.apply_matrix(rho.matrix)
            expected = p * rho.matrix + (1 - p) * np.eye(d) / d
            assert np.abs(out - expected).max() <= 1e-10


class TestApply:
    def test_one_sided_identity_action(self):
        out = channels.apply_one_sided(channels.depolarizing(2, 1.0), BELL, side="B")
        assert np.abs(out.matrix - BELL.matrix).max() <= 1e-12

    def test_two_local_output_matches_closed_form_matrix(self):
        # the closed-form matrix is an independent route against the
        # Kraus simulation; a regression in either shows up entrywise
        chan = {}
        max_dev = 0.0
        for p in np.linspace(0, 1, 21):
            chan[p] = channels.depolarizing(2, p)
            for q0 in np.linspace(0, 1, 21):
                out = channels.apply_two_local(chan[p], chan[p], schmidt_state([q0, 1 - q0]))
                analytic = channels.two_local_depol_output(p, q0)
                max_dev = max(max_dev, np.abs(out.matrix - analytic).max())
        assert max_dev <= 1e-12

    def test_one_sided_output_matches_closed_form_matrix(self):
        max_dev = 0.0
        for p in np.linspace(0, 1, 21):
            chan = channels.depolarizing(2, p)
            for q0 in np.linspace(0, 1, 21):
                out = channels.apply_one_sided(chan, schmidt_state([q0, 1 - q0]), side="B")
                analytic = channels.one_sided_depol_output(p, q0)
                max_dev = max(max_dev, np.abs(out.matrix - analytic).max())
        assert max_dev <= 1e-12

    def test_outputs_are_valid_states(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            d = int(rng.integers(2, 4))
            p = rng.uniform()
            rho = random_density_matrix(d, d, seed=rng)
            out = channels.apply_one_sided(channels.depolarizing(d, p), rho, side="B")
            # construction validates Hermiticity, trace, and positivity
            assert abs(np.trace(out.matrix).real - 1.0) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            channels.apply_one_sided(channels.depolarizing(3, 0.5), BELL, side="B")


class TestComposeAndMix:
    def test_compose_with_identity(self):
        chan = channels.depolarizing(2, 0.4)
        comp = channels.compose(channels.identity_channel(2), chan)
        rho = random_density_matrix(1, 2, seed=0)
        assert np.abs(comp.apply_matrix(rho.matrix) - chan.apply_matrix(rho.matrix)).max() <= 1e-12

    def test_compose_depolarizing_multiplies_p(self):
        comp = channels.compose(channels.depolarizing(2, 0.6), channels.depolarizing(2, 0.5))
        expected = channels.depolarizing(2, 0.3)
        rng = np.random.default_rng(1)
        for _ in range(10):
            rho = random_density_matrix(1, 2, seed=rng)
            assert np.abs(
                comp.apply_matrix(rho.matrix) - expected.apply_matrix(rho.matrix)
            ).max() <= 1e-10

    def test_mix_extremes(self):
        n1 = channels.depolarizing(2, 0.2)
        n2 = channels.depolarizing(2, 0.9)
        rho = random_density_matrix(1, 2, seed=2)
        full = channels.convex_mix(1.0, n1, n2)
        assert np.abs(full.apply_matrix(rho.matrix) - n1.apply_matrix(rho.matrix)).max() <= 1e-12

    def test_mix_of_depolarizing_is_depolarizing(self):
        mix = channels.convex_mix(0.5, channels.depolarizing(2, 0.2), channels.depolarizing(2, 0.8))
        expected = channels.depolarizing(2, 0.5)
        rho = random_density_matrix(1, 2, seed=5)
        assert np.abs(
            mix.apply_matrix(rho.matrix) - expected.apply_matrix(rho.matrix)
        ).max() <= 1e-10


class TestClosedFormFidelities:
    def test_two_local_values(self):
        assert abs(channels.depol_2local_fidelity(1 / np.sqrt(3), 0.5) - 0.5) <= 1e-12
        assert channels.depol_2local_fidelity(0.0, 0.3) == 0.25
        assert np.isclose(channels.depol_2local_fidelity(0.5, 0.5), 0.4375)

    def test_fbc_values(self):
        assert abs(channels.depol_fbc_fidelity(1 / 3, 0.5) - 0.5) <= 1e-12
        assert np.isclose(channels.depol_fbc_fidelity(1.0, 0.5), 1.0)
        expected = (1 + 0.2 + 0.8 * np.sqrt(0.1875)) / 4
        assert np.isclose(channels.depol_fbc_fidelity(0.2, 0.25), expected)

    @pytest.mark.parametrize("formula,applier", [
        (channels.depol_2local_fidelity, "two_local"),
        (channels.depol_fbc_fidelity, "one_sided"),
    ])
    def test_formulas_match_simulation_on_grid(self, formula, applier):
        for p in np.linspace(0, 1, 21):
            chan = channels.depolarizing(2, p)
            for q0 in np.linspace(0, 1, 21):
                rho = schmidt_state([q0, 1 - q0])
                if applier == "two_local":
                    out = channels.apply_two_local(chan, chan, rho)
                else:
                    out = channels.apply_one_sided(chan, rho, side="B")
                assert abs(formula(p, q0) - fidelity_two_qubit(out).value) <= 1e-9


class TestQutritWitness:
    def test_formula_values(self):
        assert abs(channels.qutrit_witness_min(0.5)) <= 1e-15
        assert np.isclose(channels.qutrit_witness_min(0.0), 2.0 / 9.0)
        assert np.isclose(channels.qutrit_witness_min(1.0), -2.0 / 3.0)

    def test_matches_simulation_at_uniform_input(self):
        w = teleportation_witness(3)
        uniform = schmidt_state([1 / 3, 1 / 3, 1 / 3])
        for p in (0.0, 0.25, 0.5, 0.75, 1.0):
            chan = channels.depolarizing(3, p)
            out = channels.apply_two_local(chan, chan, uniform)
            assert abs(witness_value(w, out) - channels.qutrit_witness_min(p)) <= 1e-10

    def test_uniform_schmidt_vector_minimizes(self):
        # oracle: scan the Schmidt simplex with the affine two-local form
        # omega = p^2 rho + (1-p)^2 I/9 + p(1-p)(rho_1 x I/3 + I/3 x rho_2),
        # then refine around the best grid point
        from scipy.optimize import minimize

        p = 0.8
        w = teleportation_witness(3).matrix

        def value(q0, q1):
            q2 = 1.0 - q0 - q1
            if q2 < 0:
                return np.inf
            rho = schmidt_state([q0, q1, q2])
            marg = np.diag([q0, q1, q2]).astype(complex)
            omega = (
                p**2 * rho.matrix
                + (1 - p) ** 2 * np.eye(9) / 9
                + p * (1 - p) * (np.kron(marg, np.eye(3) / 3) + np.kron(np.eye(3) / 3, marg))
            )
            return np.trace(w @ omega).real

        grid = np.linspace(0, 1, 41)
        vals = [(value(q0, q1), q0, q1) for q0 in grid for q1 in grid if q0 + q1 <= 1]
        _, q0_best, q1_best = min(vals)
        res = minimize(
            lambda q: value(np.clip(q[0], 0, 1), np.clip(q[1], 0, 1)),
            [q0_best, q1_best],
            method="Nelder-Mead",
            options={"fatol": 1e-14, "xatol": 1e-8},
        )
        assert abs(res.x[0] - 1 / 3) <= 1e-3
        assert abs(res.x[1] - 1 / 3) <= 1e-3
        assert abs(res.fun - channels.qutrit_witness_min(p)) <= 1e-9


class TestChannelFiles:
    def test_round_trip(self, tmp_path):
        chan = channels.depolarizing(2, 0.35)
        path = tmp_path / "depol.chan"
        channels.write_channel_file(chan, path)
        back = channels.read_channel_file(path)
        assert back.dim_in == 2 and back.dim_out == 2
        assert len(back.ops) == len(chan.ops)
        for a, b in zip(back.ops, chan.ops):
            assert np.array_equal(a, b)

    def test_parse_errors(self, tmp_path):
        path = tmp_path / "bad.chan"
        path.write_text("dims 2 2\nkraus 1\n1+0j 0+0j\n")
        with pytest.raises(ParseError):
            channels.read_channel_file(path)

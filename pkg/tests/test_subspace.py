"""Principal-subspace construction: selection loops and initializations."""

import numpy as np
import pytest

from ascvqe.hamio import (
    excitation_pool,
    jordan_wigner_generator,
    mp2_amplitudes,
)
from ascvqe.oracle import determinant_ci_energy, ground_energy
from ascvqe.pauli import dense_matrix
from ascvqe.simulator import expectation, hf_reference
from ascvqe.subspace import (
    SelectionConfig,
    adapt_vqe,
    generator_informed_init,
    initialize_parameters,
    mp2s_ansatz,
    pool_gradients,
)
from ascvqe.vqe import CostFunction


class TestSelectionConfig:
    def test_defaults_valid(self):
        cfg = SelectionConfig()
        assert cfg.method == "adapt"

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"method": "vqe"},
            {"init_strategy": "warm"},
            {"epsilon": 0.0},
            {"epsilon_bar": -1.0},
        ],
    )
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            SelectionConfig(**kwargs)


class TestPoolGradients:
    def test_matches_dense_commutator(self, h2):
        m, s, h = h2
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        state = hf_reference(s.n_so, m.n_electrons)
        grads = pool_gradients(state, pool, h)
        hd = dense_matrix(h)
        v = state.amplitudes
        for g_val, x in zip(grads, pool):
            gd = dense_matrix(jordan_wigner_generator(x, s.n_so))
            comm = hd @ gd - gd @ hd
            want = np.real(v.conj() @ comm @ v)
            assert g_val == pytest.approx(want, abs=1e-10)

    def test_eigenstate_stationarity(self, h2):
        m, s, h = h2
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        fci = ground_energy(h, m.n_electrons, m.ms2).ground_state
        grads = pool_gradients(fci, pool, h)
        assert np.max(np.abs(grads)) < 1e-8

    def test_h2_hf_largest_is_the_double(self, h2):
        m, s, h = h2
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        state = hf_reference(s.n_so, m.n_electrons)
        grads = np.abs(pool_gradients(state, pool, h))
        best = pool[int(np.argmax(grads))]
        assert best.rank == 2
        # unique winner: every other gradient strictly smaller
        assert np.sum(grads == np.max(grads)) == 1


class TestAdaptVqe:
    def test_h2_reaches_fci(self, h2):
        m, s, h = h2
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        cfg = SelectionConfig(method="adapt", epsilon=1e-6)
        ansatz, trace = adapt_vqe(h, pool, cfg, s.n_so, m.n_electrons)
        assert trace.converged
        assert 1 <= len(ansatz.factors) <= 2
        c = CostFunction(h, ansatz)
        e = c.energy([f.theta for f in ansatz.factors])
        assert e == pytest.approx(determinant_ci_energy(m), abs=1e-8)

    def test_huge_epsilon_returns_hf(self, h2):
        m, s, h = h2
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        cfg = SelectionConfig(method="adapt", epsilon=100.0)
        ansatz, trace = adapt_vqe(h, pool, cfg, s.n_so, m.n_electrons)
        assert trace.converged and len(ansatz.factors) == 0
        # only the selection sweep was spent
        assert trace.total_expectation_evals == len(pool)
        ref = hf_reference(s.n_so, m.n_electrons)
        c = CostFunction(h, ansatz)
        assert c.energy([]) == pytest.approx(expectation(ref, h), abs=1e-12)

    def test_termination_soundness(self, h4_175):
        m, s, h = h4_175
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        cfg = SelectionConfig(method="adapt", epsilon=1e-2)
        ansatz, trace = adapt_vqe(h, pool, cfg, s.n_so, m.n_electrons)
        assert trace.converged
        c = CostFunction(h, ansatz)
        state = c.state([f.theta for f in ansatz.factors])
        fresh = pool_gradients(state, pool, h)
        assert np.max(np.abs(fresh)) < cfg.epsilon

    def test_max_operators_cap(self, h4_175):
        m, s, h = h4_175
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        cfg = SelectionConfig(method="adapt", epsilon=1e-12, max_operators=2)
        ansatz, trace = adapt_vqe(h, pool, cfg, s.n_so, m.n_electrons)
        assert not trace.converged
        assert len(ansatz.factors) == 2

    def test_trace_monotone_and_argmax(self, h4_175):
        m, s, h = h4_175
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        cfg = SelectionConfig(method="adapt", epsilon=1e-2)
        ansatz, trace = adapt_vqe(h, pool, cfg, s.n_so, m.n_electrons)
        energies = [r.energy for r in trace.records]
        assert all(b <= a + 1e-8 for a, b in zip(energies, energies[1:]))
        evals = [r.expectation_evals_cum for r in trace.records]
        assert evals == sorted(evals)
        # argmax property: replay each macro-iteration's selection
        theta_prefix = []
        for r in trace.records:
            prefix = ansatz.factors[: len(theta_prefix)]
            from ascvqe.simulator import AnsatzState

            sub = AnsatzState(s.n_so, m.n_electrons, list(prefix))
            state = CostFunction(h, sub).state(theta_prefix)
            grads = pool_gradients(state, pool, h)
            assert abs(r.gradient) == pytest.approx(
                np.max(np.abs(grads)), abs=1e-9
            )
            theta_prefix = r.parameters
        assert trace.to_jsonl().count("\n") == len(trace.records) - 1

    def test_method_guard(self, h2):
        m, s, h = h2
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        with pytest.raises(ValueError):
            adapt_vqe(
                h, pool, SelectionConfig(method="mp2s"), s.n_so, m.n_electrons
            )


class TestMp2sAnsatz:
    def test_screen_counts_h4_150(self, h4_150):
        m, s, h = h4_150
        amps = mp2_amplitudes(s, m.n_electrons)
        assert len(amps.screened(0.05)) == 8

    def test_ordering_non_increasing(self, h4_150):
        m, s, _ = h4_150
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        amps = mp2_amplitudes(s, m.n_electrons)
        cfg = SelectionConfig(method="mp2s", epsilon_bar=0.05)
        ansatz = mp2s_ansatz(amps, pool, cfg, s.n_so, m.n_electrons)
        doubles = [f for f in ansatz.factors if f.excitation.rank == 2]
        singles = [f for f in ansatz.factors if f.excitation.rank == 1]
        assert len(doubles) == 8
        mags = [abs(f.theta) for f in doubles]
        assert mags == sorted(mags, reverse=True)
        # doubles block strictly precedes the singles block
        ranks = [f.excitation.rank for f in ansatz.factors]
        assert ranks == [2] * len(doubles) + [1] * len(singles)
        assert all(f.theta == 0.0 for f in singles)

    def test_singles_canonical_order(self, h4_150):
        m, s, _ = h4_150
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        amps = mp2_amplitudes(s, m.n_electrons)
        cfg = SelectionConfig(method="mp2s", epsilon_bar=0.05)
        ansatz = mp2s_ansatz(amps, pool, cfg, s.n_so, m.n_electrons)
        singles = [f.excitation for f in ansatz.factors if f.excitation.rank == 1]
        assert singles == [x for x in pool if x.rank == 1]

    def test_huge_threshold_warns_singles_only(self, h4_150):
        m, s, _ = h4_150
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        amps = mp2_amplitudes(s, m.n_electrons)
        cfg = SelectionConfig(method="mp2s", epsilon_bar=1e6)
        with pytest.warns(UserWarning):
            ansatz = mp2s_ansatz(amps, pool, cfg, s.n_so, m.n_electrons)
        assert all(f.excitation.rank == 1 for f in ansatz.factors)

    def test_method_guard(self, h4_150):
        m, s, _ = h4_150
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        amps = mp2_amplitudes(s, m.n_electrons)
        with pytest.raises(ValueError):
            mp2s_ansatz(
                amps, pool, SelectionConfig(method="adapt"), s.n_so, m.n_electrons
            )


class TestGeneratorInformedInit:
    def test_matches_auxiliary_mapping(self, h2):
        from ascvqe.asc import map_auxiliary_parameters

        m, s, h = h2
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={2})
        state = hf_reference(s.n_so, m.n_electrons)
        g = jordan_wigner_generator(pool[0], s.n_so)
        theta = generator_informed_init(state, g, h)
        mapping = map_auxiliary_parameters(state, [pool[0]], h)
        assert theta == pytest.approx(mapping[pool[0]], abs=1e-12)

    def test_newton_step_matches_finite_difference_model(self, h2):
        """theta_init equals -E'(0)/E''(0) of the one-parameter energy."""
        m, s, h = h2
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={2})
        state = hf_reference(s.n_so, m.n_electrons)
        g = jordan_wigner_generator(pool[0], s.n_so)
        theta = generator_informed_init(state, g, h)

        from ascvqe.simulator import AnsatzFactor, AnsatzState

        c = CostFunction(
            h, AnsatzState(s.n_so, m.n_electrons, [AnsatzFactor(pool[0], 0.0)])
        )
        eps = 1e-4
        e0, ep, em = c.energy([0.0]), c.energy([eps]), c.energy([-eps])
        d1 = (ep - em) / (2 * eps)
        d2 = (ep - 2 * e0 + em) / eps**2
        assert theta == pytest.approx(-d1 / d2, abs=1e-6)

    def test_improves_over_zero_on_h2(self, h2):
        m, s, h = h2
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={2})
        state = hf_reference(s.n_so, m.n_electrons)
        g = jordan_wigner_generator(pool[0], s.n_so)
        theta = generator_informed_init(state, g, h)

        from ascvqe.simulator import AnsatzFactor, AnsatzState

        c = CostFunction(
            h, AnsatzState(s.n_so, m.n_electrons, [AnsatzFactor(pool[0], 0.0)])
        )
        e_fci = determinant_ci_energy(m)
        assert abs(c.energy([theta]) - e_fci) < abs(c.energy([0.0]) - e_fci)

    def test_quadratic_model_value_not_above_e0(self, h4_175):
        m, s, h = h4_175
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1, 2})
        state = hf_reference(s.n_so, m.n_electrons)
        from ascvqe.asc import map_auxiliary_parameters

        mapping = map_auxiliary_parameters(state, pool, h)
        for e in mapping.entries:
            if e.positive_curvature and not e.degenerate:
                model = e.theta * e.numerator + 0.5 * e.theta**2 * e.denominator
                assert model <= 1e-15

    def test_flat_generator_gives_zero(self, h2):
        m, s, h = h2
        # de-exciting the HF state: generator annihilates it symmetrically,
        # numerator vanishes
        pool = excitation_pool(s.n_so, m.n_electrons, ranks={1})
        state = hf_reference(s.n_so, m.n_electrons)
        grads = pool_gradients(state, pool, h)
        for x, g_val in zip(pool, grads):
            if abs(g_val) < 1e-14:
                g = jordan_wigner_generator(x, s.n_so)
                assert generator_informed_init(state, g, h) == pytest.approx(
                    0.0, abs=1e-10
                )


class TestInitializeParameters:
    def test_recycled_empty(self):
        np.testing.assert_array_equal(
            initialize_parameters("recycled", []), [0.0]
        )

    def test_hf_zero(self):
        out = initialize_parameters("hf_zero", [0.3, -0.2, 0.1, 0.5])
        np.testing.assert_array_equal(out, np.zeros(5))

    def test_generator_informed_appends(self):
        out = initialize_parameters("generator_informed", [0.3], theta_new=-0.07)
        np.testing.assert_allclose(out, [0.3, -0.07])

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            initialize_parameters("warm", [0.1])

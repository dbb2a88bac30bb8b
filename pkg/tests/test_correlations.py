import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimercorr import (
    KB_MEV_PER_K,
    CorrelationPoint,
    DensityMatrix,
    DimerModel,
    MeasurementBasis,
    chsh_max,
    chsh_tc_closed,
    classical_correlation_closed,
    classical_correlation_optimized,
    concurrence_closed,
    concurrence_wootters,
    correlation_point,
    critical_temperatures,
    discord,
    discord_optimized,
    entanglement_tc_closed,
    find_chsh_tc,
    find_crossing_temperature,
    find_entanglement_tc,
    g_parameter,
    gibbs_state,
    maximally_mixed_state,
    mutual_information,
    mutual_information_from_state,
    singlet_state,
    witness,
)

G_DOMAIN = st.floats(-1.0, 1.0 / 3.0)


def direct_mutual_information(G):
    """Independent scalar evaluation of the mutual-information formula."""
    total = 0.0
    for weight, value in ((1.0, 1.0 - 3.0 * G), (3.0, 1.0 + G)):
        if value > 0.0:
            total += weight * value * math.log2(value)
    return 0.25 * total


def direct_classical_correlation(G):
    total = 0.0
    for value in (1.0 - G, 1.0 + G):
        if value > 0.0:
            total += value * math.log2(value)
    return 0.5 * total


def conjugate_by_local_unitaries(rho, u1, u2):
    u = np.kron(u1, u2)
    return DensityMatrix(u @ rho.matrix @ u.conj().T)


class TestWitness:
    def test_singlet(self):
        value, flag = witness(singlet_state())
        assert abs(value - 0.75) < 1e-14 and flag

    def test_maximally_mixed(self):
        value, flag = witness(maximally_mixed_state())
        assert value < 1e-14 and not flag

    def test_at_threshold_temperature(self, vodpo_model):
        # 82.5 K is the rounded threshold, so the witness sits just below 1/4.
        value, flag = witness(gibbs_state(vodpo_model, 82.5))
        assert abs(value - 0.25) < 1e-4
        assert not flag


class TestConcurrenceClosed:
    @pytest.mark.parametrize("G,expected", [(-1.0, 1.0), (-1.0 / 3.0, 0.0), (0.0, 0.0)])
    def test_reference_points(self, G, expected):
        assert abs(concurrence_closed(G) - expected) < 1e-14

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            concurrence_closed(-1.2)
        with pytest.raises(ValueError):
            concurrence_closed(0.5)

    @given(G=G_DOMAIN)
    def test_bounded(self, G):
        assert 0.0 <= concurrence_closed(G) <= 1.0


class TestConcurrenceWootters:
    def test_singlet(self):
        assert abs(concurrence_wootters(singlet_state()) - 1.0) < 1e-12

    def test_maximally_mixed(self):
        assert concurrence_wootters(maximally_mixed_state()) == 0.0

    def test_matches_closed_form_at_40K(self, vodpo_model):
        rho = gibbs_state(vodpo_model, 40.0)
        expected = concurrence_closed(g_parameter(vodpo_model, 40.0))
        assert abs(concurrence_wootters(rho) - expected) < 1e-10

    def test_oracle_equivalence_on_random_temperatures(self, vodpo_model):
        rng = np.random.default_rng(11)
        for T in rng.uniform(1.0, 500.0, 200):
            general = concurrence_wootters(gibbs_state(vodpo_model, T))
            closed = concurrence_closed(g_parameter(vodpo_model, T))
            assert abs(general - closed) < 1e-10


class TestMutualInformation:
    def test_pure_singlet_limit(self):
        assert abs(mutual_information(-1.0) - 2.0) < 1e-14

    def test_uncorrelated(self):
        assert mutual_information(0.0) == 0.0

    def test_value_at_threshold(self):
        # Direct evaluation: (1/4)[2 log2 2 + 2 log2(2/3)] = 1 - log2(3)/2.
        expected = direct_mutual_information(-1.0 / 3.0)
        assert abs(expected - (1.0 - math.log2(3.0) / 2.0)) < 1e-15
        assert abs(mutual_information(-1.0 / 3.0) - expected) < 1e-12

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            mutual_information(0.34)

    @settings(max_examples=80)
    @given(G=st.floats(-0.999999, 1.0 / 3.0))
    def test_entropy_identity(self, G):
        # I = 2 - S(rho) with spectrum {(1-3G)/4, (1+G)/4 x3}.
        spectrum = np.array([(1.0 - 3.0 * G) / 4.0] + [(1.0 + G) / 4.0] * 3)
        spectrum = spectrum[spectrum > 0.0]
        entropy = float(-np.sum(spectrum * np.log2(spectrum)))
        assert abs(mutual_information(G) - (2.0 - entropy)) < 1e-10


class TestClassicalCorrelation:
    def test_pure_singlet_limit(self):
        assert abs(classical_correlation_closed(-1.0) - 1.0) < 1e-14

    def test_uncorrelated(self):
        assert classical_correlation_closed(0.0) == 0.0

    def test_value_at_threshold(self):
        expected = direct_classical_correlation(-1.0 / 3.0)
        assert abs(expected - 0.08170416594551049) < 1e-15
        assert abs(classical_correlation_closed(-1.0 / 3.0) - expected) < 1e-12

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            classical_correlation_closed(1.5)

    @pytest.mark.parametrize("T", [15.0, 40.0, 90.0, 250.0])
    def test_matches_measurement_optimizer(self, vodpo_model, T):
        rho = gibbs_state(vodpo_model, T)
        optimized, basis = classical_correlation_optimized(rho, tol=1e-10)
        closed = classical_correlation_closed(g_parameter(vodpo_model, T))
        assert abs(optimized - closed) < 1e-8
        assert isinstance(basis, MeasurementBasis)


class TestDiscord:
    def test_pure_singlet_limit(self):
        assert abs(discord(-1.0) - 1.0) < 1e-14

    def test_uncorrelated(self):
        assert discord(0.0) == 0.0

    def test_room_temperature_value(self, vodpo_model):
        # Direct evaluation at G(300 K) = -0.081031: about 8.8e-3 bits,
        # small but strictly positive.
        G = g_parameter(vodpo_model, 300.0)
        expected = direct_mutual_information(G) - direct_classical_correlation(G)
        assert abs(discord(G) - expected) < 1e-12
        assert abs(discord(G) - 8.7958e-3) < 1e-6
        assert discord(G) > 0.0

    def test_positivity_across_domain(self):
        for G in np.linspace(-0.9999, 1.0 / 3.0, 501):
            value = discord(G)
            assert value >= -1e-12
            if abs(G) > 1e-6:
                assert value > 0.0
        assert discord(0.0) == 0.0


class TestDiscordOptimized:
    def test_maximally_mixed(self):
        assert abs(discord_optimized(maximally_mixed_state(), 1e-9)) < 1e-9

    def test_singlet(self):
        assert abs(discord_optimized(singlet_state(), 1e-9) - 1.0) < 1e-9

    def test_matches_closed_form_at_50K(self, vodpo_model):
        rho = gibbs_state(vodpo_model, 50.0)
        closed = discord(g_parameter(vodpo_model, 50.0))
        assert abs(discord_optimized(rho, 1e-9) - closed) < 1e-6

    def test_rejects_nonpositive_tolerance(self, vodpo_model):
        with pytest.raises(ValueError):
            classical_correlation_optimized(gibbs_state(vodpo_model, 50.0), tol=0.0)


class TestLocalUnitaryInvariance:
    @pytest.mark.parametrize("D", [0.0, 4.0])
    def test_concurrence_and_discord_invariant(self, unitary_factory, D):
        rng = np.random.default_rng(31)
        rho = gibbs_state(DimerModel(J=7.81, D=D), 60.0)
        reference_c = concurrence_wootters(rho)
        reference_d = discord_optimized(rho, 1e-10)
        for _ in range(5):
            rotated = conjugate_by_local_unitaries(
                rho, unitary_factory(rng, 2), unitary_factory(rng, 2)
            )
            assert abs(concurrence_wootters(rotated) - reference_c) < 1e-8
            assert abs(discord_optimized(rotated, 1e-10) - reference_d) < 1e-8


class TestChshMax:
    def test_singlet(self):
        assert abs(chsh_max(singlet_state()) - 2.0 * math.sqrt(2.0)) < 1e-12

    def test_maximally_mixed(self):
        assert chsh_max(maximally_mixed_state()) < 1e-12

    def test_boundary_temperature(self, vodpo_model):
        assert abs(chsh_max(gibbs_state(vodpo_model, 38.3)) - 2.0) < 0.002

    def test_identity_with_g_parameter(self, vodpo_model):
        for T in np.linspace(2.0, 400.0, 40):
            expected = 2.0 * math.sqrt(2.0) * abs(g_parameter(vodpo_model, T))
            assert abs(chsh_max(gibbs_state(vodpo_model, T)) - expected) < 1e-10


class TestMeasurementBasis:
    def test_angles_validated(self):
        MeasurementBasis(theta=0.0, phi=0.0)
        MeasurementBasis(theta=math.pi, phi=6.28)
        with pytest.raises(ValueError):
            MeasurementBasis(theta=-0.1, phi=0.0)
        with pytest.raises(ValueError):
            MeasurementBasis(theta=1.0, phi=7.0)


class TestCorrelationPoint:
    def test_closed_and_general_paths_agree(self, vodpo_model):
        point = correlation_point(vodpo_model, 45.0)
        rho = gibbs_state(vodpo_model, 45.0)
        assert abs(point.concurrence - concurrence_wootters(rho)) < 1e-10
        assert abs(point.chsh_max - chsh_max(rho)) < 1e-10
        assert abs(point.mutual_info - mutual_information_from_state(rho)) < 1e-10
        assert abs(point.discord - discord_optimized(rho, 1e-9)) < 1e-6

    def test_flags_follow_values(self, vodpo_model):
        cold = correlation_point(vodpo_model, 20.0)
        assert cold.entangled and cold.nonlocal_flag
        warm = correlation_point(vodpo_model, 60.0)
        assert warm.entangled and not warm.nonlocal_flag
        hot = correlation_point(vodpo_model, 200.0)
        assert not hot.entangled and not hot.nonlocal_flag
        assert hot.discord > 0.0

    def test_general_path_used_for_dm_coupling(self):
        point = correlation_point(DimerModel(J=7.81, D=4.0), 60.0)
        assert point.entangled
        assert abs(point.discord - (point.mutual_info - point.classical_corr)) < 1e-12

    def test_inconsistent_fields_rejected(self):
        with pytest.raises(ValueError):
            CorrelationPoint(
                T=10.0, G=-0.5, witness=0.375, concurrence=0.3,
                mutual_info=1.0, classical_corr=0.4, discord=0.9,
                chsh_max=1.5, entangled=True, nonlocal_flag=False,
            )
        with pytest.raises(ValueError):
            CorrelationPoint(
                T=10.0, G=-0.5, witness=0.375, concurrence=0.3,
                mutual_info=1.0, classical_corr=0.4, discord=0.6,
                chsh_max=1.5, entangled=False, nonlocal_flag=False,
            )


def dm_entanglement_tc_oracle(J, D):
    """Root of the analytic concurrence-death condition for the DM thermal state.

    The thermal state is an X state with rho14 = 0, so its concurrence is
    2 max(0, |rho23| - rho11).  With W = sqrt(J^2 + D^2)/2 the condition
    |rho23| = rho11 reduces to sinh(W/kT) = exp(-J/(2kT)).
    """
    W = 0.5 * math.sqrt(J * J + D * D)

    def height(T):
        return math.sinh(W / (KB_MEV_PER_K * T)) - math.exp(-J / (2.0 * KB_MEV_PER_K * T))

    lo, hi = 1.0, 2000.0
    assert height(lo) > 0.0 > height(hi)
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if height(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestCriticalTemperatures:
    def test_closed_forms(self):
        assert abs(entanglement_tc_closed(7.81) - 82.5) < 0.1
        assert abs(chsh_tc_closed(7.81) - 38.3) < 0.1

    def test_bisection_matches_closed_forms(self, vodpo_model):
        assert abs(find_entanglement_tc(vodpo_model) - entanglement_tc_closed(7.81)) < 2e-3
        assert abs(find_chsh_tc(vodpo_model) - chsh_tc_closed(7.81)) < 2e-3

    def test_crossing_temperature(self, vodpo_model):
        t_cross = find_crossing_temperature(vodpo_model)
        assert abs(t_cross - 53.783) < 5e-3

    def test_full_panel_at_zero_dm(self, vodpo_model):
        result = critical_temperatures(vodpo_model)
        assert abs(result.tc_entanglement - 82.496) < 1e-3
        assert abs(result.tc_chsh - 38.302) < 1e-3
        assert result.tc_chsh < result.t_cross < result.tc_entanglement

    def test_dm_coupling_panel_matches_analytic_oracle(self):
        model = DimerModel(J=7.81, D=2.0)
        result = critical_temperatures(model)
        assert abs(result.tc_entanglement - dm_entanglement_tc_oracle(7.81, 2.0)) < 2e-3
        assert result.tc_chsh < result.tc_entanglement
        assert result.t_cross > 0.0

    def test_linear_scaling_with_exchange(self):
        doubled = critical_temperatures(DimerModel(J=15.62))
        assert abs(doubled.tc_entanglement - 2.0 * 82.496) < 0.2

    def test_ferromagnetic_rejected(self):
        with pytest.raises(ValueError):
            critical_temperatures(DimerModel(J=-7.81))
        with pytest.raises(ValueError):
            find_entanglement_tc(DimerModel(J=-1.0))
        with pytest.raises(ValueError):
            entanglement_tc_closed(0.0)

import numpy as np
import pytest
from scipy import integrate

from zenosim import oracles
from zenosim.models import DriveParams, ReservoirSpec

# reservoir with the golden-rule rate pinned exactly to 0.01
G0_EXACT = float(np.sqrt(0.01 * 0.001 / (2 * np.pi)))


def paper_band(slope=0.0, g0=0.001262):
    return ReservoirSpec(n_modes=1001, half_width=0.5, g0=g0, slope=slope)


def exact_band(slope=0.0):
    return paper_band(slope=slope, g0=G0_EXACT)


class TestMeasurementTime:
    def test_reference_values(self):
        assert oracles.measurement_time(10.0, 1.0) == pytest.approx(5.0)
        assert oracles.measurement_time(10.0, np.sqrt(2)) == pytest.approx(2.5)

    def test_zero_coupling(self):
        with pytest.raises(ZeroDivisionError):
            oracles.measurement_time(10.0, 0.0)


class TestCoherenceFactor:
    def test_limits(self):
        assert oracles.coherence_factor(0.0, 5.0) == 1.0
        assert oracles.coherence_factor(5.0, 5.0) == pytest.approx(np.exp(-1), abs=1e-12)
        assert oracles.coherence_factor(1e4, 5.0) < 1e-300 or \
            oracles.coherence_factor(1e4, 5.0) == 0.0


class TestRabiAmplitude:
    def test_initial(self):
        assert oracles.rabi_amplitude(0.0, DriveParams(0.1, 0.2)) == pytest.approx(1.0)

    def test_resonant_cosine(self):
        d = DriveParams(omega_r=0.3, detuning=0.0)
        for t in (0.5, 2.0, 7.7):
            assert oracles.rabi_amplitude(t, d) == pytest.approx(np.cos(0.15 * t), abs=1e-12)

    def test_detuned_extremes(self):
        d = DriveParams(omega_r=0.1, detuning=0.2)
        om = np.hypot(0.1, 0.2)
        t_half = np.pi / om
        # at half the generalized period the transfer is maximal
        assert abs(oracles.rabi_amplitude(t_half, d)) ** 2 == pytest.approx(0.8, abs=1e-12)
        assert max(
            1 - abs(oracles.rabi_amplitude(t, d)) ** 2
            for t in np.linspace(0, 40, 4001)
        ) == pytest.approx(0.2, abs=1e-4)

    def test_magnitude_bounded(self):
        d = DriveParams(omega_r=0.4, detuning=-0.3)
        assert all(abs(oracles.rabi_amplitude(t, d)) <= 1 + 1e-12
                   for t in np.linspace(0, 20, 100))


class TestZenoTransitionRate:
    def test_resonant_value(self):
        assert oracles.zeno_transition_rate(DriveParams(0.1, 0.0), 5.0).rate == \
            pytest.approx(0.025, abs=1e-15)

    def test_detuned_value(self):
        assert oracles.zeno_transition_rate(DriveParams(0.1, 0.2), 5.0).rate == \
            pytest.approx(0.0125, abs=1e-15)

    def test_freezes_at_short_measurement(self):
        assert oracles.zeno_transition_rate(DriveParams(0.1, 0.0), 1e-9).rate < 1e-10

    def test_maximized_on_resonance(self):
        rates = [oracles.zeno_transition_rate(DriveParams(0.1, d), 5.0).rate
                 for d in np.linspace(-1, 1, 41)]
        assert np.argmax(rates) == 20


class TestRateEquationPopulation:
    def test_limits(self):
        assert oracles.rate_equation_population(0.0, 0.025) == 1.0
        assert oracles.rate_equation_population(1e9, 0.025) == pytest.approx(0.5)
        assert oracles.rate_equation_population(20.0, 0.025) == \
            pytest.approx(0.5 * (1 + np.exp(-1)), abs=1e-12)


class TestGoldenRule:
    def test_paper_value(self):
        assert oracles.golden_rule_rate(paper_band()).rate == \
            pytest.approx(0.010007, abs=1e-6)

    def test_zero_coupling(self):
        assert oracles.golden_rule_rate(paper_band(g0=0.0)).rate == 0.0

    def test_quadratic_scaling(self):
        r1 = oracles.golden_rule_rate(paper_band(g0=0.001)).rate
        r2 = oracles.golden_rule_rate(paper_band(g0=0.002)).rate
        assert r2 == pytest.approx(4 * r1, rel=1e-12)

    def test_slope_does_not_enter(self):
        assert oracles.golden_rule_rate(paper_band(slope=2.0)).rate == \
            oracles.golden_rule_rate(paper_band()).rate


class TestResolvent:
    def test_flat_band_structure(self):
        res = exact_band()
        strength = np.pi * res.density_of_states * res.g0 ** 2
        for z in (0.02, 0.5, 2.0):
            expected = z + strength * (1 - (2 / np.pi) * np.arctan(z / 0.5))
            assert oracles.resolvent(z, res) == pytest.approx(expected, abs=1e-15)

    def test_conjugate_symmetry_flat(self):
        res = exact_band()
        z = 0.013 + 0.007j
        assert oracles.resolvent(np.conj(z), res) == \
            pytest.approx(np.conj(oracles.resolvent(z, res)), abs=1e-15)

    @pytest.mark.parametrize("slope", [0.0, 2.0])
    def test_matches_band_integral(self, slope):
        # independent quadrature of the defining integral, right half-plane
        res = exact_band(slope)

        def integrand(x, part):
            val = (res.density_of_states * res.coupling(res.omega_a + x) ** 2
                   / (z + 1j * x))
            return val.real if part == 0 else val.imag

        for z in (0.01 + 0.003j, 0.2 - 0.05j, 1.5 + 0j):
            re = integrate.quad(integrand, -0.5, 0.5, args=(0,),
                                epsabs=1e-14, epsrel=1e-12, limit=200)[0]
            im = integrate.quad(integrand, -0.5, 0.5, args=(1,),
                                epsabs=1e-14, epsrel=1e-12, limit=200)[0]
            assert oracles.resolvent(z, res) == pytest.approx(z + re + 1j * im, abs=1e-12)

    def test_branch_point_raises(self):
        with pytest.raises(oracles.DomainError):
            oracles.resolvent(0.5j, exact_band())

    @pytest.mark.parametrize("slope,rel", [(0.0, 1e-3), (2.0, 0.01)])
    def test_root_against_series(self, slope, rel):
        res = exact_band(slope)
        rate = oracles.resolvent_decay_rate(res)
        series = oracles.corrected_free_decay_rate(res).rate
        assert rate == pytest.approx(series, rel=rel)

    def test_root_near_half_golden_rate(self):
        root = oracles.resolvent_root(exact_band())
        assert root.real == pytest.approx(-0.005, rel=0.05)


class TestCorrectedFreeRate:
    def test_wide_band_limit(self):
        res = ReservoirSpec(n_modes=1001, half_width=500.0, g0=G0_EXACT * np.sqrt(1000))
        # same golden rate, huge band: correction vanishes
        assert oracles.corrected_free_decay_rate(res).rate == \
            pytest.approx(res.golden_rate(), rel=1e-3)

    def test_sloped_value(self):
        assert oracles.corrected_free_decay_rate(exact_band(2.0)).rate == \
            pytest.approx(0.0087904, abs=2e-6)

    def test_zero_correction_slope(self):
        res = exact_band(1.0 / np.sqrt(5.0))
        assert oracles.corrected_free_decay_rate(res).rate == \
            pytest.approx(res.golden_rate(), rel=1e-12)


class TestMeasuredDecayRate:
    def test_reference_value(self):
        assert oracles.measured_decay_rate(exact_band(), 5.0).rate == \
            pytest.approx(0.00757747, abs=2e-7)

    def test_limits(self):
        res = exact_band()
        assert oracles.measured_decay_rate(res, 1e9).rate == \
            pytest.approx(res.golden_rate(), rel=1e-8)
        assert oracles.measured_decay_rate(res, 1e-9).rate < 1e-10

    def test_monotone_in_measurement_time(self):
        res = exact_band()
        taus = np.logspace(-2, 3, 30)
        rates = [oracles.measured_decay_rate(res, t).rate for t in taus]
        assert np.all(np.diff(rates) > 0)

    def test_requires_flat_band(self):
        with pytest.raises(ValueError):
            oracles.measured_decay_rate(exact_band(2.0), 5.0)

    def test_series_agreement(self):
        # series and arctan forms: within 2% from half_width*tau_m = 5 up,
        # with monotonically shrinking difference
        res = exact_band()
        devs = []
        for x in (5.0, 10.0, 20.0, 50.0, 100.0):
            tau = x / res.half_width
            full = oracles.measured_decay_rate(res, tau).rate
            series = oracles.measured_decay_rate_series(res, tau).rate
            devs.append(abs(series - full) / full)
        assert devs[0] <= 0.02
        assert np.all(np.diff(devs) < 0)


class TestAntiZenoRate:
    def test_reference_value(self):
        assert oracles.anti_zeno_rate(exact_band(2.0), 5.0).rate == \
            pytest.approx(0.0164298, abs=2e-6)

    def test_sign_change_at_unit_slope(self):
        for tau in (2.0, 5.0, 50.0):
            below = oracles.anti_zeno_rate(exact_band(0.5), tau).rate \
                - oracles.corrected_free_decay_rate(exact_band(0.5)).rate
            at = oracles.anti_zeno_rate(exact_band(1.0), tau).rate \
                - oracles.corrected_free_decay_rate(exact_band(1.0)).rate
            above = oracles.anti_zeno_rate(exact_band(2.0), tau).rate \
                - oracles.corrected_free_decay_rate(exact_band(2.0)).rate
            assert below < 0 and above > 0
            assert at == pytest.approx(0.0, abs=1e-15)

    def test_flat_limit_matches_series_to_first_order(self):
        # difference to the flat-band series is exactly the second-order
        # band-correction term
        res = exact_band(0.0)
        tau = 5.0
        anti = oracles.anti_zeno_rate(res, tau).rate
        series = oracles.measured_decay_rate_series(res, tau).rate
        second_order = res.golden_rate() ** 2 / (np.pi * res.half_width)
        assert anti - series == pytest.approx(second_order, rel=1e-9)

    def test_validity_note_for_short_measurement(self):
        assert "marginal" in oracles.anti_zeno_rate(exact_band(2.0), 1.0).validity_note


class TestLaplaceResidual:
    def test_decoupled_band_is_identity(self):
        res = paper_band(g0=0.0)
        for z in (0.01 + 0j, -0.004 + 0.002j, 0.3 - 0.1j):
            assert oracles.laplace_rate_equation_residual(z, res, 5.0) == \
                pytest.approx(z, abs=1e-15)

    def test_analytic_across_imaginary_axis(self):
        # without the residue continuation the residual would jump by a few
        # 1e-3 across Re z = 0; the continued function varies smoothly
        res = exact_band(2.0)
        eps = 1e-4
        f_plus = oracles.laplace_rate_equation_residual(eps + 0.002j, res, 5.0,
                                                        epsrel=1e-8)
        f_minus = oracles.laplace_rate_equation_residual(-eps + 0.002j, res, 5.0,
                                                         epsrel=1e-8)
        assert abs(f_plus - f_minus) <= 1e-3

    def test_domain_guard(self):
        with pytest.raises(oracles.DomainError):
            oracles.laplace_rate_equation_residual(-0.3, exact_band(), 5.0)

    def test_flat_root_matches_arctan_form(self):
        res = exact_band()
        rate = oracles.laplace_decay_rate(res, 5.0, epsrel=1e-7)
        assert rate == pytest.approx(oracles.measured_decay_rate(res, 5.0).rate,
                                     rel=0.02)

    def test_shift_invariance(self):
        res_a = ReservoirSpec(n_modes=1001, half_width=0.5, g0=G0_EXACT,
                              slope=2.0, omega_a=1.0)
        res_b = ReservoirSpec(n_modes=1001, half_width=0.5, g0=G0_EXACT,
                              slope=2.0, omega_a=4.2)
        z = -0.003 + 0.001j
        assert oracles.laplace_rate_equation_residual(z, res_a, 5.0, epsrel=1e-7) == \
            oracles.laplace_rate_equation_residual(z, res_b, 5.0, epsrel=1e-7)


class TestRatePredictions:
    def test_formula_ids(self):
        assert oracles.golden_rule_rate(paper_band()).formula_id == "golden_rule"
        assert oracles.measured_decay_rate(exact_band(), 5.0).formula_id == \
            "measured_decay_arctan"
        with pytest.raises(ValueError):
            oracles.RatePrediction(0.1, "not-a-formula")

    def test_rates_nonnegative(self):
        for pred in (
            oracles.golden_rule_rate(paper_band()),
            oracles.corrected_free_decay_rate(exact_band(2.0)),
            oracles.measured_decay_rate(exact_band(), 0.3),
            oracles.anti_zeno_rate(exact_band(2.0), 3.0),
            oracles.zeno_transition_rate(DriveParams(0.1, 0.4), 2.0),
        ):
            assert pred.rate >= 0.0

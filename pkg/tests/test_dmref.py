import numpy as np
import pytest

from zenosim import dmref
from zenosim.config import ModelSpec
from zenosim.models import DetectorParams, DriveParams, FreeDecayModel, ReservoirSpec


class TestDetectorReducedOdes:
    def test_uncoupled_detector_stays_put(self):
        times, aa, bb, ab, ba = dmref.detector_reduced_odes(
            10.0, 0.01, DetectorParams(gamma=10.0, lam=0.0))
        np.testing.assert_allclose(bb, 1.0, atol=1e-12)
        np.testing.assert_allclose(aa, 0.0, atol=1e-12)

    def test_coherence_envelope(self):
        params = DetectorParams(gamma=10.0, lam=1.0, omega_d=1.0)
        times, aa, bb, ab, ba = dmref.detector_reduced_odes(15.0, 0.005, params)
        mask = times <= 15.0
        envelope = np.exp(-times[mask] / 5.0)
        rel = np.abs(np.abs(bb[mask]) - envelope) / envelope
        assert rel.max() <= 0.10

    def test_fast_detector_limit(self):
        # gamma up at fixed lam^2/gamma: convergence to the simple
        # exponential improves monotonically
        errs = []
        for gamma in (10.0, 40.0, 160.0):
            lam = np.sqrt(gamma / 10.0)
            params = DetectorParams(gamma=gamma, lam=lam, omega_d=1.0)
            times, aa, bb, ab, ba = dmref.detector_reduced_odes(10.0, 0.002, params)
            target = np.exp(-2 * lam ** 2 * times / gamma)
            errs.append(np.max(np.abs(np.abs(bb) - target)))
        assert errs[0] > errs[1] > errs[2]


class TestMasterDetector:
    def test_uncoupled_populations_frozen(self):
        spec = ModelSpec("detector", detector=DetectorParams(gamma=10.0, lam=0.0))
        psi = np.array([0, 1, 0, 0], complex)
        times, rhos = dmref.evolve_master_detector(spec, 5.0, 0.01,
                                                   rho0=np.outer(psi, psi.conj()))
        pops = dmref.four_level_populations(rhos)
        np.testing.assert_allclose(pops["rho_ee"], 1.0, atol=1e-12)

    def test_trace_preserved(self):
        spec = ModelSpec("detector", detector=DetectorParams())
        times, rhos = dmref.evolve_master_detector(spec, 20.0, 0.01, record_every=100)
        traces = np.einsum("tii->t", rhos).real
        np.testing.assert_allclose(traces, 1.0, atol=1e-9 * 20.0)

    def test_hermiticity_and_positivity(self):
        spec = ModelSpec("detector", detector=DetectorParams())
        times, rhos = dmref.evolve_master_detector(spec, 10.0, 0.01, record_every=200)
        for rho in rhos:
            dmref.check_density_matrix(rho, hermiticity_tol=1e-10, trace_tol=1e-8)

    def test_monitored_populations_constant(self):
        # without a perturbation the measurement does not move the system's
        # level populations
        spec = ModelSpec("detector", detector=DetectorParams())
        times, rhos = dmref.evolve_master_detector(spec, 25.0, 0.01, record_every=50)
        pops = dmref.four_level_populations(rhos)
        np.testing.assert_allclose(pops["rho_ee"], 0.5, atol=1e-9)
        np.testing.assert_allclose(pops["rho_gg"], 0.5, atol=1e-9)

    def test_coherence_decay_envelope(self):
        spec = ModelSpec("detector", detector=DetectorParams())
        times, rhos = dmref.evolve_master_detector(spec, 15.0, 0.005, record_every=20)
        pops = dmref.four_level_populations(rhos)
        mag = np.hypot(pops["rho_eg_re"], pops["rho_eg_im"])
        target = 0.5 * np.exp(-times / 5.0)
        rel = np.abs(mag - target) / target
        assert rel.max() <= 0.10

    def test_drive_moves_populations(self):
        spec = ModelSpec("rabi", detector=DetectorParams(),
                         drive=DriveParams(omega_r=0.1))
        times, rhos = dmref.evolve_master_detector(spec, 30.0, 0.01, record_every=300)
        pops = dmref.four_level_populations(rhos)
        assert pops["rho_gg"][-1] < 0.99
        assert np.einsum("tii->t", rhos).real[-1] == pytest.approx(1.0, abs=1e-8)

    def test_rejects_reservoir_models(self):
        spec = ModelSpec("freedecay", reservoir=ReservoirSpec(n_modes=5, g0=0.01))
        with pytest.raises(ValueError):
            dmref.evolve_master_detector(spec, 1.0, 0.01)


class TestMeasuredDecayDm:
    def test_long_measurement_matches_free_decay(self):
        # negligible coherence damping: the reduced matrix must reproduce
        # the pure wavefunction decay on the same band
        res = ReservoirSpec(n_modes=51, half_width=0.5,
                            g0=float(np.sqrt(0.01 * 0.02 / (2 * np.pi))))
        times, pops = dmref.evolve_measured_decay_dm(res, tau_m=1e9, t_max=50.0,
                                                     dt=0.02)
        model = FreeDecayModel(res)
        c = model.initial_amplitudes()
        dt = 0.02
        wave = [1.0]
        for i in range(int(round(50.0 / dt))):
            t = i * dt
            k1 = model.derivative(t, c)
            k2 = model.derivative(t + dt / 2, c + dt / 2 * k1)
            k3 = model.derivative(t + dt / 2, c + dt / 2 * k2)
            k4 = model.derivative(t + dt, c + dt * k3)
            c = c + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            if (i + 1) % 50 == 0:
                wave.append(abs(c[0]) ** 2)
        np.testing.assert_allclose(pops, wave, atol=5e-6)

    def test_zeno_rate_on_coarse_band(self):
        res = ReservoirSpec(n_modes=1001, half_width=0.5, g0=0.001262).with_modes(101)
        times, pops = dmref.evolve_measured_decay_dm(res, tau_m=5.0, t_max=200.0,
                                                     dt=0.05)
        mask = times >= 10.0
        slope = np.polyfit(times[mask], np.log(pops[mask]), 1)[0]
        from zenosim import oracles
        expected = oracles.measured_decay_rate(res, 5.0).rate
        assert -slope == pytest.approx(expected, rel=0.10)

    def test_anti_zeno_exceeds_free_rate(self):
        res = ReservoirSpec(n_modes=1001, half_width=0.5, g0=0.001262,
                            slope=2.0).with_modes(101)
        times, pops = dmref.evolve_measured_decay_dm(res, tau_m=5.0, t_max=200.0,
                                                     dt=0.05)
        mask = times >= 10.0
        rate = -np.polyfit(times[mask], np.log(pops[mask]), 1)[0]
        from zenosim import oracles
        free = oracles.corrected_free_decay_rate(res).rate
        assert rate > free

    def test_mode_cap(self):
        res = ReservoirSpec(n_modes=301, half_width=0.5, g0=0.001)
        with pytest.raises(ValueError):
            dmref.evolve_measured_decay_dm(res, 5.0, 1.0, 0.05)


class TestDensityMatrixChecks:
    def test_rejects_nonhermitian(self):
        rho = np.array([[0.5, 0.1], [0.3, 0.5]], complex)
        with pytest.raises(dmref.ToleranceExceeded):
            dmref.check_density_matrix(rho)

    def test_rejects_bad_trace(self):
        rho = np.diag([0.6, 0.6]).astype(complex)
        with pytest.raises(dmref.ToleranceExceeded):
            dmref.check_density_matrix(rho)

    def test_accepts_valid(self):
        rho = np.diag([0.25, 0.75]).astype(complex)
        dmref.check_density_matrix(rho)

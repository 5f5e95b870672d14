"""Exact density-matrix integrators used as independent ensemble oracles.

These deterministic references are integrated with fixed-step RK4 at a
finer step than the stochastic engine, so their error is negligible against
Monte Carlo error.  Populations from a large trajectory ensemble must agree
with them pointwise; that comparison is the core consistency check of the
whole package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import DetectorParams, ReservoirSpec
from .config import ModelSpec

HERMITICITY_TOL = 1e-8
TRACE_TOL = 1e-7


class ToleranceExceeded(RuntimeError):
    """Integrator drifted outside the density-matrix invariants."""


@dataclass
class DensityMatrix:
    """Dense Hermitian unit-trace matrix over a model basis."""

    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError("density matrix must be square")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def check_density_matrix(rho: np.ndarray, hermiticity_tol: float = 1e-10,
                         trace_tol: float = 1e-10, eig_tol: float = 1e-8) -> None:
    """Raise ToleranceExceeded unless rho is Hermitian, unit trace and PSD."""
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > hermiticity_tol:
        raise ToleranceExceeded(f"hermiticity defect {herm:.3g}")
    tr = abs(np.trace(rho) - 1.0)
    if tr > trace_tol:
        raise ToleranceExceeded(f"trace defect {tr:.3g}")
    eigs = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if eigs.min() < -eig_tol:
        raise ToleranceExceeded(f"negative eigenvalue {eigs.min():.3g}")


def _rk4(rhs, y, dt):
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * dt * k1)
    k3 = rhs(y + 0.5 * dt * k2)
    k4 = rhs(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _rk4_t(rhs, t, y, dt):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = rhs(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


_SM = np.array([[0, 0], [1, 0]], dtype=complex)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SZ = np.diag([1.0, -1.0]).astype(complex)
_I2 = np.eye(2, dtype=complex)


def _four_level_operators(spec: ModelSpec):
    """Hamiltonian pieces and dissipator operators on the (system x detector)
    four-level basis |e,a>, |e,b>, |g,a>, |g,b>."""
    det = spec.detector
    proj_e = np.diag([1.0, 0.0]).astype(complex)
    proj_g = np.diag([0.0, 1.0]).astype(complex)
    h_det = 0.5 * det.omega_d * np.kron(_I2, _SZ)
    mon = proj_g if det.coupling_target == "ground" else proj_e
    h_int = det.lam * np.kron(mon, _SX)
    sm = np.kron(_I2, _SM)
    if spec.variant == "detector":
        h_sys = spec.omega_a * np.kron(proj_e, _I2)
        h_static = h_sys + h_det + h_int
        drive = None
    else:
        # interaction picture: no static system term, explicit drive phases
        h_static = h_det + h_int
        omega_r, detuning = spec.drive.omega_r, spec.drive.detuning

        def drive(t):
            v = np.zeros((4, 4), complex)
            ph = -0.5 * omega_r * np.exp(1j * detuning * t)
            v[0, 2] = ph
            v[1, 3] = ph
            v[2, 0] = np.conj(ph)
            v[3, 1] = np.conj(ph)
            return v

    return h_static, drive, sm, det.gamma


def evolve_master_detector(spec: ModelSpec, t_max: float, dt: float,
                           rho0: np.ndarray | None = None,
                           record_every: int = 1):
    """Integrate the monitored-system master equation on the 4-level basis.

    ``spec`` must be a 'detector' or 'rabi' ModelSpec.  Returns
    (times, rhos) with rhos of shape (n_rec, 4, 4).  Hermiticity is checked
    at every recorded step; trace preservation holds to integrator accuracy.
    """
    if spec.variant not in ("detector", "rabi"):
        raise ValueError("master-equation reference covers the 4-level models only")
    h_static, drive, sm, gamma = _four_level_operators(spec)
    sp = sm.conj().T
    spsm = sp @ sm

    if rho0 is None:
        if spec.variant == "detector":
            psi = np.array([0, 1, 0, 1], complex) / np.sqrt(2)
        else:
            psi = np.array([0, 0, 0, 1], complex)
        rho = np.outer(psi, psi.conj())
    else:
        rho = np.asarray(rho0, dtype=complex).copy()
        check_density_matrix(rho, hermiticity_tol=1e-10, trace_tol=1e-9)

    def rhs(t, r):
        h = h_static if drive is None else h_static + drive(t)
        comm = h @ r - r @ h
        return -1j * comm + gamma * (sm @ r @ sp - 0.5 * (spsm @ r + r @ spsm))

    n_steps = int(round(t_max / dt))
    times = [0.0]
    rhos = [rho.copy()]
    for i in range(n_steps):
        rho = _rk4_t(rhs, i * dt, rho, dt)
        if (i + 1) % record_every == 0:
            herm = np.max(np.abs(rho - rho.conj().T))
            if herm > HERMITICITY_TOL:
                raise ToleranceExceeded(f"hermiticity drift {herm:.3g} at t={(i+1)*dt}")
            times.append((i + 1) * dt)
            rhos.append(rho.copy())
    return np.array(times), np.array(rhos)


def four_level_populations(rhos: np.ndarray) -> dict[str, np.ndarray]:
    """Observables matching the trajectory models' names, from 4-level rhos."""
    rho_aa = np.real(rhos[:, 0, 0] + rhos[:, 2, 2])
    rho_bb = np.real(rhos[:, 1, 1] + rhos[:, 3, 3])
    rho_ee = np.real(rhos[:, 0, 0] + rhos[:, 1, 1])
    rho_gg = np.real(rhos[:, 2, 2] + rhos[:, 3, 3])
    rho_eg = rhos[:, 0, 2] + rhos[:, 1, 3]
    return {
        "rho_aa": rho_aa,
        "rho_bb": rho_bb,
        "rho_ee": rho_ee,
        "rho_gg": rho_gg,
        "rho_eg_re": rho_eg.real,
        "rho_eg_im": rho_eg.imag,
    }


def detector_reduced_odes(t_max: float, dt: float, params: DetectorParams):
    """Detector matrix elements evolved by the coherence-sector generator.

    This is the non-trace-preserving evolution whose trace gives the factor
    multiplying the monitored system's off-diagonal element.  Starts from
    the detector ground state.  Returns (times, rho_aa, rho_bb, rho_ab,
    rho_ba) as complex arrays.
    """
    gamma, lam, omega_d = params.gamma, params.lam, params.omega_d

    def rhs(y):
        aa, bb, ab, ba = y
        return np.array([
            1j * lam * ab - gamma * aa,
            1j * lam * ba + gamma * aa,
            -1j * omega_d * ab + 1j * lam * aa - 0.5 * gamma * ab,
            1j * omega_d * ba + 1j * lam * bb - 0.5 * gamma * ba,
        ], dtype=complex)

    y = np.array([0, 1, 0, 0], dtype=complex)
    n_steps = int(round(t_max / dt))
    out = np.empty((n_steps + 1, 4), dtype=complex)
    out[0] = y
    for i in range(n_steps):
        y = _rk4(rhs, y, dt)
        out[i + 1] = y
    times = np.arange(n_steps + 1) * dt
    return times, out[:, 0], out[:, 1], out[:, 2], out[:, 3]


def evolve_measured_decay_dm(res: ReservoirSpec, tau_m: float, t_max: float,
                             dt: float, record_every: int | None = None):
    """Excited-state population of the measured decaying system, dense DM.

    Integrates the single-excitation Liouville-von Neumann equation with
    the system <-> reservoir coherences additionally damped at 1/tau_m (the
    detector enters through that rate only).  Dense (n_modes+1)^2 storage,
    so the mode count is capped at 201; use ReservoirSpec.with_modes to
    coarsen the band while preserving the decay rate.

    Returns (times, populations) where populations is the excited-state
    occupation.  Raises ToleranceExceeded if the trace drifts beyond 1e-7.
    """
    if res.n_modes > 201:
        raise ValueError("dense reference capped at 201 modes; rescale with with_modes()")
    if tau_m <= 0:
        raise ValueError("tau_m must be > 0")
    dim = res.n_modes + 1
    g = res.mode_couplings().astype(complex)

    # global frequency shift by omega_a drops out of the commutator
    h = np.zeros((dim, dim), complex)
    h[np.arange(1, dim), np.arange(1, dim)] = -res.mode_detunings()
    h[0, 1:] = g
    h[1:, 0] = np.conj(g)
    damp = np.zeros((dim, dim))
    damp[0, 1:] = 1.0 / tau_m
    damp[1:, 0] = 1.0 / tau_m

    def rhs(r):
        return -1j * (h @ r - r @ h) - damp * r

    rho = np.zeros((dim, dim), complex)
    rho[0, 0] = 1.0

    n_steps = int(round(t_max / dt))
    if record_every is None:
        record_every = max(1, int(round(1.0 / dt)))
    times = [0.0]
    pops = [1.0]
    for i in range(n_steps):
        rho = _rk4(rhs, rho, dt)
        if (i + 1) % record_every == 0:
            drift = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
            if drift > TRACE_TOL:
                raise ToleranceExceeded(f"trace drift {drift:.3g} at t={(i+1)*dt}")
            times.append((i + 1) * dt)
            pops.append(float(rho[0, 0].real))
    return np.array(times), np.array(pops)

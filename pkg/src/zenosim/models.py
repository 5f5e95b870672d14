"""The four physical models driving the jump engine.

Each model supplies, over a fixed labeled basis:

* ``derivative(t, c)``     -- action of the non-Hermitian effective
  Hamiltonian, as the time derivative of the amplitude array,
* ``excited_weight(c)``    -- total probability in the detector-excited
  subspace (the collapse operator is ``sqrt(Gamma) sigma_-`` on the detector,
  so the jump rate is ``Gamma`` times this weight),
* ``collapse_amplitudes(c)`` -- the unnormalized post-jump amplitudes,
* named observables used for recording.

Models
------
``DetectorMeasurementModel``
    Two-level system monitored by a dissipative two-level detector; no
    perturbation.  Written in the frame where the system phase ``omega_a``
    appears explicitly, which is why that parameter exists at all; recorded
    observables do not depend on it.
``RabiMeasuredModel``
    The same monitored system driven by a classical field (rotating-wave
    coupling ``omega_r``, detuning ``detuning``), written in the interaction
    picture so the drive carries explicit ``exp(+/- i detuning t)`` phases.
``FreeDecayModel``
    Excited two-level system coupled to a band of discretized reservoir
    modes; single-excitation sector, interaction picture, no detector and
    hence no jumps.
``MeasuredDecayModel``
    The decaying system of ``FreeDecayModel`` with the detector attached to
    the ground level (or to the excited level, via ``coupling_target``).

Basis ordering follows (system level, mode index, detector level) with
``e`` before ``g`` and ``a`` before ``b``.  Storage is dense; the
Hamiltonian action is matrix-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevec import BasisLabel, StateVector


@dataclass(frozen=True)
class DetectorParams:
    """Dissipative two-level detector.

    gamma is the decay rate of the excited detector level, lam the coupling
    strength to the monitored system level, omega_d the detector level
    splitting.  coupling_target selects which system level the detector
    monitors ('ground' or 'excited').
    """

    gamma: float = 10.0
    lam: float = 1.0
    omega_d: float = 1.0
    coupling_target: str = "ground"

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        if self.coupling_target not in ("ground", "excited"):
            raise ValueError("coupling_target must be 'ground' or 'excited'")


@dataclass(frozen=True)
class DriveParams:
    """Classical drive in the rotating-wave approximation."""

    omega_r: float = 0.0
    detuning: float = 0.0

    def __post_init__(self):
        if self.omega_r < 0:
            raise ValueError("omega_r must be >= 0")


@dataclass(frozen=True)
class ReservoirSpec:
    """Discretized reservoir band.

    n_modes equally spaced mode frequencies span
    [omega_a - half_width, omega_a + half_width] inclusive of both
    endpoints, so the spacing is 2 * half_width / (n_modes - 1) and the
    density of states is its inverse.  The coupling is linear across the
    band: g(w) = g0 * (1 + (slope / half_width) * (w - omega_a)); slope = 0
    gives a flat coupling.
    """

    n_modes: int = 1001
    half_width: float = 0.5
    g0: float = 0.001262
    slope: float = 0.0
    omega_a: float = 1.0

    def __post_init__(self):
        if self.n_modes < 2:
            raise ValueError("n_modes must be >= 2")
        if self.half_width <= 0:
            raise ValueError("half_width must be > 0")

    @property
    def mode_spacing(self) -> float:
        return 2.0 * self.half_width / (self.n_modes - 1)

    @property
    def density_of_states(self) -> float:
        return 1.0 / self.mode_spacing

    def mode_frequencies(self) -> np.ndarray:
        k = np.arange(self.n_modes)
        return self.omega_a - self.half_width + k * self.mode_spacing

    def mode_detunings(self) -> np.ndarray:
        """omega_a - omega_k, computed without touching omega_a.

        Everything downstream depends on the band only through these
        detunings, so building them this way makes all dynamics exactly
        invariant under shifts of omega_a.
        """
        return self.half_width - np.arange(self.n_modes) * self.mode_spacing

    def coupling(self, omega) -> np.ndarray:
        return self.g0 * (1.0 + (self.slope / self.half_width) * (np.asarray(omega) - self.omega_a))

    def mode_couplings(self) -> np.ndarray:
        return self.g0 * (1.0 - (self.slope / self.half_width) * self.mode_detunings())

    def golden_rate(self) -> float:
        """Lowest-order decay rate into the band, 2 pi rho0 g0^2."""
        return 2.0 * np.pi * self.density_of_states * self.g0 ** 2

    def with_modes(self, n_modes: int) -> "ReservoirSpec":
        """Same band and decay rate on a coarser/finer mode grid.

        g0 is rescaled with the square root of the spacing ratio so the
        golden-rule rate is preserved.
        """
        new_spacing = 2.0 * self.half_width / (n_modes - 1)
        scale = np.sqrt(new_spacing / self.mode_spacing)
        return ReservoirSpec(
            n_modes=n_modes,
            half_width=self.half_width,
            g0=self.g0 * scale,
            slope=self.slope,
            omega_a=self.omega_a,
        )


def _detector_phase_rates(omega_d: float, gamma: float) -> tuple[complex, complex]:
    """Per-slot rates of the detector sector.

    Detector-excited slots evolve with -i*omega_d/2 - gamma/2, ground slots
    with +i*omega_d/2.
    """
    return (-0.5j * omega_d - 0.5 * gamma, +0.5j * omega_d)


class DetectorMeasurementModel:
    """Unperturbed two-level system continuously monitored by the detector.

    Basis order: |e,a>, |e,b>, |g,a>, |g,b>.  Amplitude equations (ground
    coupling):

        d c_ea/dt = -i (omega_a + omega_d/2 - i gamma/2) c_ea
        d c_eb/dt = -i (omega_a - omega_d/2) c_eb
        d c_ga/dt = -i lam c_gb - i (omega_d/2) c_ga - (gamma/2) c_ga
        d c_gb/dt = -i lam c_ga + i (omega_d/2) c_gb

    For excited coupling the lam terms move symmetrically to the e rows.
    """

    def __init__(self, detector: DetectorParams, omega_a: float = 1.0):
        self.detector = detector
        self.omega_a = omega_a
        self.dim = 4
        self.gamma = detector.gamma

    def basis_labels(self) -> tuple[BasisLabel, ...]:
        return tuple(
            BasisLabel(s, None, d) for s in ("e", "g") for d in ("a", "b")
        )

    def initial_amplitudes(self) -> np.ndarray:
        # superposition (|e> + |g>)/sqrt(2), detector in its ground level
        return np.array([0, 1, 0, 1], dtype=complex) / np.sqrt(2)

    def derivative(self, t: float, c: np.ndarray) -> np.ndarray:
        det = self.detector
        ra, rb = _detector_phase_rates(det.omega_d, det.gamma)
        system_phase = -1j * self.omega_a
        lam = -1j * det.lam
        if det.coupling_target == "ground":
            return np.array(
                [
                    (system_phase + ra) * c[0],
                    (system_phase + rb) * c[1],
                    ra * c[2] + lam * c[3],
                    rb * c[3] + lam * c[2],
                ],
                dtype=complex,
            )
        return np.array(
            [
                (system_phase + ra) * c[0] + lam * c[1],
                (system_phase + rb) * c[1] + lam * c[0],
                ra * c[2],
                rb * c[3],
            ],
            dtype=complex,
        )

    def excited_weight(self, c: np.ndarray) -> float:
        return (c[0].real ** 2 + c[0].imag ** 2) + (c[2].real ** 2 + c[2].imag ** 2)

    def collapse_amplitudes(self, c: np.ndarray) -> np.ndarray:
        # sigma_- on the detector: a -> b, previous b amplitudes discarded
        return np.array([0.0, c[0], 0.0, c[2]], dtype=complex)

    def observables(self):
        return _four_level_observables()

    default_observables = ("rho_aa", "rho_ee", "rho_gg", "rho_eg_re", "rho_eg_im")


class RabiMeasuredModel:
    """Driven two-level system monitored by the detector, interaction picture.

    Basis order: |e,a>, |e,b>, |g,a>, |g,b>.  The drive couples e and g rows
    with the same detector index through (omega_r/2) exp(+/- i detuning t);
    detector sector and coupling as in DetectorMeasurementModel with the
    system phase absorbed into the picture.
    """

    def __init__(self, detector: DetectorParams, drive: DriveParams):
        self.detector = detector
        self.drive = drive
        self.dim = 4
        self.gamma = detector.gamma

    def basis_labels(self) -> tuple[BasisLabel, ...]:
        return tuple(
            BasisLabel(s, None, d) for s in ("e", "g") for d in ("a", "b")
        )

    def initial_amplitudes(self) -> np.ndarray:
        # system in the ground level, detector in its ground level
        return np.array([0, 0, 0, 1], dtype=complex)

    def derivative(self, t: float, c: np.ndarray) -> np.ndarray:
        det = self.detector
        ra, rb = _detector_phase_rates(det.omega_d, det.gamma)
        lam = -1j * det.lam
        half_wr = 0.5j * self.drive.omega_r
        ph = np.exp(1j * self.drive.detuning * t)
        drive_e = half_wr * ph        # e rows pick up + detuning phase
        drive_g = half_wr / ph
        if det.coupling_target == "ground":
            return np.array(
                [
                    drive_e * c[2] + ra * c[0],
                    drive_e * c[3] + rb * c[1],
                    drive_g * c[0] + ra * c[2] + lam * c[3],
                    drive_g * c[1] + rb * c[3] + lam * c[2],
                ],
                dtype=complex,
            )
        return np.array(
            [
                drive_e * c[2] + ra * c[0] + lam * c[1],
                drive_e * c[3] + rb * c[1] + lam * c[0],
                drive_g * c[0] + ra * c[2],
                drive_g * c[1] + rb * c[3],
            ],
            dtype=complex,
        )

    def excited_weight(self, c: np.ndarray) -> float:
        return (c[0].real ** 2 + c[0].imag ** 2) + (c[2].real ** 2 + c[2].imag ** 2)

    def collapse_amplitudes(self, c: np.ndarray) -> np.ndarray:
        return np.array([0.0, c[0], 0.0, c[2]], dtype=complex)

    def observables(self):
        return _four_level_observables()

    default_observables = ("rho_gg", "rho_ee", "rho_aa")


def _four_level_observables():
    def rho_aa(c):
        return abs(c[0]) ** 2 + abs(c[2]) ** 2

    def rho_bb(c):
        return abs(c[1]) ** 2 + abs(c[3]) ** 2

    def rho_ee(c):
        return abs(c[0]) ** 2 + abs(c[1]) ** 2

    def rho_gg(c):
        return abs(c[2]) ** 2 + abs(c[3]) ** 2

    def rho_eg_re(c):
        return (c[0] * np.conj(c[2]) + c[1] * np.conj(c[3])).real

    def rho_eg_im(c):
        return (c[0] * np.conj(c[2]) + c[1] * np.conj(c[3])).imag

    return {
        "rho_aa": rho_aa,
        "rho_bb": rho_bb,
        "rho_ee": rho_ee,
        "rho_gg": rho_gg,
        "rho_eg_re": rho_eg_re,
        "rho_eg_im": rho_eg_im,
    }


class FreeDecayModel:
    """Excited system decaying into the discretized band; no detector.

    Basis order: |e,0> followed by |g,k> for k = 0..n_modes-1.  Interaction
    picture: the mode detunings appear as explicit exp(+/- i (omega_a -
    omega_k) t) phases computed from the absolute time, never accumulated
    incrementally.
    """

    def __init__(self, reservoir: ReservoirSpec):
        self.reservoir = reservoir
        self.dim = reservoir.n_modes + 1
        self.gamma = 0.0
        self._det = reservoir.mode_detunings()
        self._g = reservoir.mode_couplings().astype(complex)

    def basis_labels(self) -> tuple[BasisLabel, ...]:
        labels = [BasisLabel("e", 0, None)]
        labels += [BasisLabel("g", k, None) for k in range(self.reservoir.n_modes)]
        return tuple(labels)

    def initial_amplitudes(self) -> np.ndarray:
        c = np.zeros(self.dim, dtype=complex)
        c[0] = 1.0
        return c

    def derivative(self, t: float, c: np.ndarray) -> np.ndarray:
        gph = self._g * np.exp(1j * self._det * t)
        d = np.empty_like(c)
        d[0] = -1j * np.dot(gph, c[1:])
        d[1:] = -1j * np.conj(gph) * c[0]
        return d

    def excited_weight(self, c: np.ndarray) -> float:
        return 0.0

    def collapse_amplitudes(self, c: np.ndarray) -> np.ndarray:
        raise ValueError("free decay model has no jump operator")

    def observables(self):
        def rho_ee(c):
            return abs(c[0]) ** 2

        def rho_gg(c):
            a = c[1:]
            return float(np.real(np.vdot(a, a)))

        return {"rho_ee": rho_ee, "rho_gg": rho_gg}

    default_observables = ("rho_ee",)


class MeasuredDecayModel:
    """Decaying system with the detector attached, single-excitation sector.

    Basis order: |e,0,a>, |e,0,b>, then |g,k,a>, |g,k,b> per mode k.
    Reservoir terms as in FreeDecayModel on matching detector indices;
    detector terms as in DetectorMeasurementModel on the monitored level
    (k rows for ground coupling, e rows for excited coupling).
    """

    def __init__(self, reservoir: ReservoirSpec, detector: DetectorParams):
        self.reservoir = reservoir
        self.detector = detector
        self.dim = 2 * (reservoir.n_modes + 1)
        self.gamma = detector.gamma
        self._det = reservoir.mode_detunings()
        self._g = reservoir.mode_couplings().astype(complex)

    def basis_labels(self) -> tuple[BasisLabel, ...]:
        labels = [BasisLabel("e", 0, "a"), BasisLabel("e", 0, "b")]
        for k in range(self.reservoir.n_modes):
            labels.append(BasisLabel("g", k, "a"))
            labels.append(BasisLabel("g", k, "b"))
        return tuple(labels)

    def initial_amplitudes(self) -> np.ndarray:
        c = np.zeros(self.dim, dtype=complex)
        c[1] = 1.0  # |e,0,b>
        return c

    def derivative(self, t: float, c: np.ndarray) -> np.ndarray:
        det = self.detector
        ra, rb = _detector_phase_rates(det.omega_d, det.gamma)
        lam = -1j * det.lam
        gph = self._g * np.exp(1j * self._det * t)
        cgph = np.conj(gph)
        ka = c[2::2]
        kb = c[3::2]
        d = np.empty_like(c)
        d[0] = -1j * np.dot(gph, ka) + ra * c[0]
        d[1] = -1j * np.dot(gph, kb) + rb * c[1]
        d[2::2] = -1j * cgph * c[0] + ra * ka
        d[3::2] = -1j * cgph * c[1] + rb * kb
        if det.coupling_target == "ground":
            d[2::2] += lam * kb
            d[3::2] += lam * ka
        else:
            d[0] += lam * c[1]
            d[1] += lam * c[0]
        return d

    def excited_weight(self, c: np.ndarray) -> float:
        ca = c[::2]
        return float(np.real(np.vdot(ca, ca)))

    def collapse_amplitudes(self, c: np.ndarray) -> np.ndarray:
        out = np.zeros_like(c)
        out[1::2] = c[::2]
        return out

    def observables(self):
        def rho_ee(c):
            return abs(c[0]) ** 2 + abs(c[1]) ** 2

        def rho_gg(c):
            a = c[2:]
            return float(np.real(np.vdot(a, a)))

        def rho_aa(c):
            return self.excited_weight(c)

        return {"rho_ee": rho_ee, "rho_gg": rho_gg, "rho_aa": rho_aa}

    default_observables = ("rho_ee",)


def initial_state(model) -> StateVector:
    """The model's default initial state as a labeled StateVector."""
    return StateVector(model.initial_amplitudes(), model.basis_labels(), time=0.0)

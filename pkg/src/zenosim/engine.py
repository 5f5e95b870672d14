"""Stochastic quantum-jump integrator.

One trajectory advances on a uniform grid t_n = n*dt.  At each step the
collapse probability ``p = Gamma * dt * excited_weight`` is evaluated on the
current (normalized) state, a uniform random number ``r`` is drawn, and the
state either collapses (``p > r``) or evolves one step under the
non-Hermitian effective Hamiltonian and is renormalized.  Observables are
recorded after the step, at t_{n+1}; the initial values are recorded at t=0.

Randomness comes from a counter-based Philox generator keyed by
``(master_seed, stream_id)``, so any (seed, trajectory) pair reproduces the
identical uniform sequence on every platform and trajectories are
independent by construction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
import numpy as np

from .statevec import StateVector, ZeroNorm, norm_squared

JUMP_PROBABILITY_WARN = 0.1


class ProbabilityOverflow(RuntimeError):
    """Jump probability per step exceeded 1; the time step is too large."""


class JumpProbabilityWarning(UserWarning):
    """Per-step jump probability is large enough for visible splitting error."""


@dataclass(frozen=True)
class RngStream:
    """Keyed substream of the ensemble's random numbers.

    Equal (master_seed, stream_id) pairs give bit-identical uniform
    sequences; distinct pairs give statistically independent streams.
    """

    master_seed: int
    stream_id: int

    def generator(self) -> np.random.Generator:
        key = np.array(
            [self.master_seed & 0xFFFFFFFFFFFFFFFF, self.stream_id & 0xFFFFFFFFFFFFFFFF],
            dtype=np.uint64,
        )
        return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class JumpEvent:
    """A collapse: grid time at which it was decided, the norm of the
    detector-excited component just before the collapse, and the trajectory
    it belongs to."""

    time: float
    pre_jump_norm: float
    trajectory_id: int


@dataclass
class TrajectoryRecord:
    """Recorded time series of one trajectory."""

    trajectory_id: int
    times: np.ndarray
    observables: dict[str, np.ndarray]
    jumps: list[JumpEvent]
    seed_used: int
    final_observables: dict[str, float] = field(default_factory=dict)


def _euler_step(model, t, dt, c):
    return c + dt * model.derivative(t, c)


def _rk4_step(model, t, dt, c):
    k1 = model.derivative(t, c)
    k2 = model.derivative(t + 0.5 * dt, c + 0.5 * dt * k1)
    k3 = model.derivative(t + 0.5 * dt, c + 0.5 * dt * k2)
    k4 = model.derivative(t + dt, c + dt * k3)
    return c + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


_STEPPERS = {"euler": _euler_step, "rk4": _rk4_step}


def _renormalize(c: np.ndarray) -> np.ndarray:
    n2 = np.real(np.vdot(c, c))
    if n2 <= 1e-300:
        raise ZeroNorm(f"state norm underflowed ({n2})")
    return c / np.sqrt(n2)


def jump_probability(state: StateVector, model, dt: float) -> float:
    """Collapse probability over one step from ``state``.

    Gamma * dt * (detector-excited probability) / norm^2; the engine keeps
    states normalized so the denominator is 1 there.  Warns above 0.1 and
    raises ProbabilityOverflow above 1.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    n2 = norm_squared(state)
    p = model.gamma * dt * model.excited_weight(state.amplitudes) / n2
    if p > 1.0:
        raise ProbabilityOverflow(f"jump probability {p} > 1 at t={state.time}")
    if p > JUMP_PROBABILITY_WARN:
        warnings.warn(
            f"jump probability {p:.3g} > {JUMP_PROBABILITY_WARN}; "
            "first-order splitting error becomes visible",
            JumpProbabilityWarning,
            stacklevel=2,
        )
    return p


def deterministic_step(state: StateVector, model, t: float, dt: float,
                       integrator: str = "euler") -> StateVector:
    """Advance one no-jump step under the effective Hamiltonian, renormalized."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    stepper = _STEPPERS[integrator]
    c = _renormalize(stepper(model, t, dt, state.amplitudes))
    return StateVector(c, state.basis, time=t + dt)


def collapse(state: StateVector, model) -> StateVector:
    """Apply the jump operator (detector a -> b transfer) and renormalize."""
    c = _renormalize(model.collapse_amplitudes(state.amplitudes))
    return StateVector(c, state.basis, time=state.time)


def run_trajectory(model, config, stream: RngStream) -> TrajectoryRecord:
    """Integrate one stochastic trajectory.

    ``config`` needs dt, t_max, integrator, observables, decimation and an
    optional initial_amplitudes override.  The result is fully determined by
    (model, config, stream).
    """
    dt = config.dt
    if dt <= 0:
        raise ValueError("dt must be > 0")
    n_steps = int(round(config.t_max / dt))
    if n_steps < 1:
        raise ValueError("t_max must be at least one step")
    stride = int(config.decimation) if config.decimation else 1
    if stride < 1:
        raise ValueError("decimation must be >= 1")

    if getattr(config, "initial_amplitudes", None) is not None:
        c = np.asarray(config.initial_amplitudes, dtype=complex).copy()
        if c.shape != (model.dim,):
            raise ValueError(f"initial amplitudes must have shape ({model.dim},)")
    else:
        c = model.initial_amplitudes().astype(complex)
    c = _renormalize(c)

    names = tuple(config.observables) if config.observables else model.default_observables
    obs_funcs = model.observables()
    unknown = [n for n in names if n not in obs_funcs]
    if unknown:
        raise KeyError(f"unknown observables for this model: {unknown}")
    funcs = [obs_funcs[n] for n in names]

    n_rec = n_steps // stride
    times = np.arange(n_rec + 1) * (stride * dt)
    recs = {n: np.empty(n_rec + 1) for n in names}
    for name, f in zip(names, funcs):
        recs[name][0] = f(c)

    gamma_dt = model.gamma * dt
    stepper = _STEPPERS[config.integrator]
    rng = stream.generator()
    rand = rng.random
    jumps: list[JumpEvent] = []
    warned = False

    for i in range(n_steps):
        t = i * dt
        if gamma_dt > 0.0:
            w = model.excited_weight(c)
            p = gamma_dt * w
            if p > 1.0:
                raise ProbabilityOverflow(
                    f"jump probability {p} > 1 at t={t} (trajectory {stream.stream_id})"
                )
            if p > JUMP_PROBABILITY_WARN and not warned:
                warnings.warn(
                    f"jump probability reached {p:.3g} at t={t}; dt is large for this model",
                    JumpProbabilityWarning,
                    stacklevel=2,
                )
                warned = True
        else:
            p = 0.0
        if p > rand():
            c = _renormalize(model.collapse_amplitudes(c))
            jumps.append(JumpEvent(time=t, pre_jump_norm=float(np.sqrt(w)),
                                   trajectory_id=stream.stream_id))
        else:
            c = _renormalize(stepper(model, t, dt, c))
        if (i + 1) % stride == 0:
            j = (i + 1) // stride
            for name, f in zip(names, funcs):
                recs[name][j] = f(c)

    final = {name: float(f(c)) for name, f in zip(names, funcs)}
    return TrajectoryRecord(
        trajectory_id=stream.stream_id,
        times=times,
        observables=recs,
        jumps=jumps,
        seed_used=stream.master_seed,
        final_observables=final,
    )

"""Closed-form and semi-analytic rate predictions used as ground truth.

Conventions: rates returned here describe exponential decay of populations
(|amplitude|^2 quantities), except where a function documents otherwise.
``tau_m = gamma / (2 lam^2)`` is the characteristic time the detector needs
to destroy the monitored system's coherence; it is the single parameter all
measurement-modified rates depend on.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .models import DriveParams, ReservoirSpec

_FORMULAS = (
    "golden_rule",
    "corrected_free",
    "zeno_two_level",
    "measured_decay_arctan",
    "measured_decay_series",
    "anti_zeno_decay",
)


class DomainError(ValueError):
    """Evaluation requested at or beyond a branch point."""


class QuadratureFailure(RuntimeError):
    """Adaptive quadrature could not reach the requested tolerance."""


@dataclass(frozen=True)
class RatePrediction:
    rate: float
    formula_id: str
    validity_note: str = ""

    def __post_init__(self):
        if self.formula_id not in _FORMULAS:
            raise ValueError(f"unknown formula id {self.formula_id!r}")


def measurement_time(gamma: float, lam: float) -> float:
    """Characteristic measurement duration gamma / (2 lam^2)."""
    if lam <= 0:
        raise ZeroDivisionError("measurement never completes for lam = 0")
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    return gamma / (2.0 * lam * lam)


def coherence_factor(t: float, tau_m: float) -> float:
    """Surviving fraction of the monitored system's coherence, exp(-t/tau_m)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if tau_m <= 0:
        raise ValueError("tau_m must be > 0")
    return float(np.exp(-t / tau_m))


def rabi_amplitude(t: float, drive: DriveParams) -> complex:
    """Ground-level amplitude of the free driven system starting in |g>."""
    if t < 0:
        raise ValueError("t must be >= 0")
    om = np.hypot(drive.detuning, drive.omega_r)
    if om == 0.0:
        return 1.0 + 0j
    half = 0.5 * t
    osc = np.cos(half * om) + 1j * (drive.detuning / om) * np.sin(half * om)
    return complex(np.exp(-0.5j * t * drive.detuning) * osc)


def zeno_transition_rate(drive: DriveParams, tau_m: float) -> RatePrediction:
    """Level-flip rate of the frequently measured driven system.

    (omega_r^2 / 2) * tau_m / (1 + (tau_m * detuning)^2); the relaxation
    rate of the population difference is twice this.
    """
    if tau_m <= 0:
        raise ValueError("tau_m must be > 0")
    rate = 0.5 * drive.omega_r ** 2 * tau_m / (1.0 + (tau_m * drive.detuning) ** 2)
    return RatePrediction(rate, "zeno_two_level",
                          "rate approximation; needs tau_m << 1/omega_r")


def rate_equation_population(t: float, rate: float) -> float:
    """Ground-level population under symmetric flip rates, starting in |g>."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if rate < 0:
        raise ValueError("rate must be >= 0")
    return 0.5 * (1.0 + np.exp(-2.0 * rate * t))


def golden_rule_rate(res: ReservoirSpec) -> RatePrediction:
    """Lowest-order decay rate 2 pi rho0 |g(omega_a)|^2 = 2 pi g0^2 / spacing."""
    return RatePrediction(res.golden_rate(), "golden_rule",
                          "flat-band lowest order; slope does not enter")


def resolvent(z: complex, res: ReservoirSpec) -> complex:
    """Laplace-domain resolvent of the free decaying amplitude.

    Closed form for the linear coupling profile; analytic continuation of
    the band integral through Re z = 0, so its zero near
    z = -golden_rate/2 is the physical amplitude pole.  Branch points sit
    at z = +/- i half_width.
    """
    lam_b = res.half_width
    z = complex(z)
    for bp in (1j * lam_b, -1j * lam_b):
        if abs(z - bp) < 1e-12 * max(1.0, lam_b):
            raise DomainError(f"resolvent branch point at z = {bp}")
    a = res.slope
    zl = z / lam_b
    at = np.arctan(zl)
    strength = np.pi * res.density_of_states * res.g0 ** 2
    core = 1.0 - (2.0 / np.pi) * at
    slope_part = (a * a * zl - 2j * a) * ((2.0 / np.pi) - zl + (2.0 / np.pi) * zl * at)
    return z + strength * (core + slope_part)


def resolvent_root(res: ReservoirSpec, z0: complex | None = None,
                   tol: float = 1e-12) -> complex:
    """Newton zero of the resolvent, seeded at -golden_rate/2."""
    if z0 is None:
        z0 = -0.5 * res.golden_rate()
    return _newton(lambda z: resolvent(z, res), complex(z0), tol=tol)


def resolvent_decay_rate(res: ReservoirSpec) -> float:
    """Population decay rate from the resolvent zero, -2 Re z*."""
    return -2.0 * resolvent_root(res).real


def corrected_free_decay_rate(res: ReservoirSpec) -> RatePrediction:
    """First-order band correction to the golden-rule rate.

    gamma0 * (1 - gamma0 / (pi half_width) * (5 a^2 - 1)).
    """
    g0rate = res.golden_rate()
    small = g0rate / (np.pi * res.half_width)
    rate = g0rate * (1.0 - small * (5.0 * res.slope ** 2 - 1.0))
    note = "" if small < 0.1 else f"expansion parameter {small:.3g} not small"
    return RatePrediction(rate, "corrected_free", note)


def measured_decay_rate(res: ReservoirSpec, tau_m: float) -> RatePrediction:
    """Measurement-slowed decay rate, gamma0 * (2/pi) * arctan(half_width * tau_m).

    Valid for a flat coupling profile (slope = 0); monotone in tau_m and
    approaching the golden-rule rate as tau_m grows.
    """
    if tau_m <= 0:
        raise ValueError("tau_m must be > 0")
    if res.slope != 0.0:
        raise ValueError("measured_decay_rate requires a flat coupling (slope = 0)")
    rate = res.golden_rate() * (2.0 / np.pi) * np.arctan(res.half_width * tau_m)
    return RatePrediction(rate, "measured_decay_arctan", "")


def measured_decay_rate_series(res: ReservoirSpec, tau_m: float) -> RatePrediction:
    """Large-(half_width*tau_m) series of the measured flat-band decay rate."""
    if tau_m <= 0:
        raise ValueError("tau_m must be > 0")
    x = res.half_width * tau_m
    rate = res.golden_rate() * (1.0 - (2.0 / np.pi) / x)
    note = "" if x >= 2.0 else f"half_width*tau_m = {x:.3g} < 2; series marginal"
    return RatePrediction(rate, "measured_decay_series", note)


def anti_zeno_rate(res: ReservoirSpec, tau_m: float) -> RatePrediction:
    """Measurement-modified decay rate for the sloped coupling profile.

    corrected_free_decay_rate plus gamma0 * (2/pi) (a^2 - 1)/(half_width
    tau_m): exceeds the free rate for a > 1, equals it at a = 1, falls
    below it for a < 1.
    """
    if tau_m <= 0:
        raise ValueError("tau_m must be > 0")
    g0rate = res.golden_rate()
    x = res.half_width * tau_m
    base = corrected_free_decay_rate(res).rate
    rate = base + g0rate * (2.0 / np.pi) * (res.slope ** 2 - 1.0) / x
    note = "" if x >= 2.0 else f"half_width*tau_m = {x:.3g} < 2; series marginal"
    return RatePrediction(rate, "anti_zeno_decay", note)


# ---------------------------------------------------------------------------
# Laplace-domain rate equation for the measured decaying system


def _complex_quad(f, lo, hi, epsrel, points=None):
    kw = dict(epsabs=1e-14, epsrel=epsrel, limit=400, full_output=1)
    if points is not None:
        pts = sorted({float(p) for p in points if lo < p < hi})
        if pts:
            kw["points"] = pts
    re, re_err, *_ = integrate.quad(lambda x: f(x).real, lo, hi, **kw)
    im, im_err, *_ = integrate.quad(lambda x: f(x).imag, lo, hi, **kw)
    val = re + 1j * im
    budget = max(1e-9, 100.0 * epsrel * max(abs(val), 1e-2))
    if max(re_err, im_err) > budget:
        raise QuadratureFailure(
            f"quadrature error {max(re_err, im_err):.2g} above budget {budget:.2g} "
            f"on [{lo}, {hi}]"
        )
    return val


def laplace_rate_equation_residual(z: complex, res: ReservoirSpec, tau_m: float,
                                   epsrel: float = 1e-9) -> complex:
    """Inverse Laplace transform denominator of the measured excited population.

    The population's pole is the zero of this residual; its negative real
    part is the decay rate.  Integrals run over the band in the detuning
    variable (so the result cannot depend on the absolute system
    frequency).  The ``1/(z + i(w - w'))`` kernel is continued analytically
    across Re z = 0: the pole it drags over the integration contour for
    Re z < 0 is picked up as an explicit residue term, making the returned
    function the analytic continuation of the Re z > 0 Laplace data, where
    the physical pole lives.
    """
    if tau_m <= 0:
        raise ValueError("tau_m must be > 0")
    z = complex(z)
    inv_tau = 1.0 / tau_m
    if z.real <= -inv_tau:
        raise DomainError("residual is defined for Re z > -1/tau_m")
    half = res.half_width
    rho_g2 = res.density_of_states * res.g0 ** 2
    a_over = res.slope / res.half_width

    def G(x):
        # band density times |coupling|^2 at detuning x = w - omega_a
        return rho_g2 * (1.0 + a_over * x) ** 2

    def bracket(x, xp):
        return (1.0 / (z + 1j * x + inv_tau) + 1.0 / (z - 1j * xp + inv_tau))

    term1 = _complex_quad(lambda x: G(x) * bracket(x, x), -half, half, epsrel)

    # half-width of the sharp diagonal feature in the inner integral
    feature = abs(z.real) if z.real != 0.0 else 0.0

    def inner(x):
        def f(xp):
            b = bracket(x, xp)
            return G(xp) / (z + 1j * (x - xp)) * b * b
        pts = [x - 5 * feature, x, x + 5 * feature] if feature else [x]
        val = _complex_quad(f, -half, half, epsrel, points=pts)
        if z.real < 0.0:
            xp_star = x - 1j * z
            b = bracket(x, xp_star)
            val = val + 2.0 * np.pi * G(xp_star) * b * b
        return val

    term2 = _complex_quad(lambda x: G(x) * inner(x), -half, half, epsrel)
    return z + term1 - term2


def laplace_decay_rate(res: ReservoirSpec, tau_m: float, z0: complex | None = None,
                       epsrel: float = 1e-8, tol: float = 1e-11) -> float:
    """Population decay rate from the Laplace residual zero, -Re z*."""
    if z0 is None:
        z0 = -0.5 * res.golden_rate()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        root = _newton(
            lambda z: laplace_rate_equation_residual(z, res, tau_m, epsrel=epsrel),
            complex(z0), tol=tol, max_step=0.02,
        )
    return -root.real


def _newton(f, z0: complex, tol: float = 1e-12, maxit: int = 60,
            max_step: float | None = None) -> complex:
    """Damped Newton iteration with a central-difference derivative."""
    z = z0
    for _ in range(maxit):
        fz = f(z)
        if abs(fz) < tol:
            return z
        h = 1e-7 * max(abs(z), 1e-3)
        df = (f(z + h) - f(z - h)) / (2.0 * h)
        if df == 0:
            raise RuntimeError("Newton derivative vanished")
        step = fz / df
        if max_step is not None and abs(step) > max_step:
            step *= max_step / abs(step)
        z = z - step
    raise RuntimeError(f"Newton did not converge within {maxit} iterations; |f| = {abs(fz):.3g}")

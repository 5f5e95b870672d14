"""Complex state vectors over a labeled product basis.

A state is a dense array of complex amplitudes together with an ordered list
of basis labels.  Labels carry the two-level system index (``g``/``e``), an
optional reservoir mode index and an optional detector level (``a`` excited,
``b`` ground).  Amplitudes are stored in (system, mode, detector) order.

All operations are pure; states are plain values and safe to copy between
threads or processes.  hbar = 1 throughout, so every rate and frequency is a
plain real number in the same inverse-time unit.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

ZERO_NORM_THRESHOLD = 1e-300


class ZeroNorm(ValueError):
    """Raised when a state's norm is too small to renormalize.

    Signals a numerically dead trajectory, e.g. a collapse applied to a state
    with no weight in the collapsed subspace.
    """


@dataclass(frozen=True)
class BasisLabel:
    """One basis ket of the product space.

    system_level is 'g' or 'e'; reservoir_mode is a mode index (present only
    for models with a reservoir); detector_level is 'a' or 'b' (present only
    for models with a detector).
    """

    system_level: str
    reservoir_mode: Optional[int] = None
    detector_level: Optional[str] = None

    def __post_init__(self):
        if self.system_level not in ("g", "e"):
            raise ValueError(f"system_level must be 'g' or 'e', got {self.system_level!r}")
        if self.detector_level not in (None, "a", "b"):
            raise ValueError(f"detector_level must be 'a' or 'b', got {self.detector_level!r}")


@dataclass
class StateVector:
    """Dense complex amplitudes over an ordered basis, tagged with a time."""

    amplitudes: np.ndarray
    basis: tuple[BasisLabel, ...] = field(repr=False)
    time: float = 0.0

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        self.basis = tuple(self.basis)
        if self.amplitudes.ndim != 1 or len(self.amplitudes) != len(self.basis):
            raise ValueError(
                f"{len(self.amplitudes)} amplitudes for {len(self.basis)} basis labels"
            )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def copy(self) -> "StateVector":
        return replace(self, amplitudes=self.amplitudes.copy())


def norm_squared(state: StateVector) -> float:
    """Sum of |c_i|^2 over all amplitudes."""
    a = state.amplitudes
    return float(np.real(np.vdot(a, a)))


def normalize(state: StateVector) -> StateVector:
    """Rescale so that the squared norm is 1.

    The scaling factor is a positive real, so the global phase is untouched.
    Raises ZeroNorm when the squared norm is at or below the underflow
    threshold (1e-300).
    """
    n2 = norm_squared(state)
    if n2 <= ZERO_NORM_THRESHOLD:
        raise ZeroNorm(f"cannot normalize state with squared norm {n2}")
    return replace(state, amplitudes=state.amplitudes / np.sqrt(n2))


def subspace_probability(state: StateVector, predicate: Callable[[BasisLabel], bool]) -> float:
    """Total probability of the basis states selected by ``predicate``."""
    mask = basis_mask(state.basis, predicate)
    a = state.amplitudes
    return float(np.sum(np.abs(a[mask]) ** 2))


def basis_mask(basis: Sequence[BasisLabel], predicate: Callable[[BasisLabel], bool]) -> np.ndarray:
    """Boolean index array of the labels matching ``predicate``."""
    return np.fromiter((bool(predicate(lbl)) for lbl in basis), dtype=bool, count=len(basis))

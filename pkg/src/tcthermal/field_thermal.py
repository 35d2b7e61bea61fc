"""Thermal (Bose-Einstein) photon-number distribution and its truncation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_EPSILON = 1e-12
GUARD_LEVELS = 4


def thermal_weight(n: int, nbar: float) -> float:
    """Probability of ``n`` photons in a thermal field of mean photon number ``nbar``."""
    if nbar < 0:
        raise ValueError(f"mean photon number must be nonnegative, got {nbar}")
    if n < 0:
        raise ValueError(f"photon number must be nonnegative, got {n}")
    if nbar == 0:
        return 1.0 if n == 0 else 0.0
    return (nbar / (1.0 + nbar)) ** n / (1.0 + nbar)


@dataclass(frozen=True)
class FockTruncation:
    """Fock-diagonal field state restricted to photon numbers ``0..cutoff``.

    ``weights[n]`` is the probability of ``n`` photons and ``tail_mass`` the
    probability discarded above the cutoff. Joint-space simulations use
    ``field_dim = cutoff + GUARD_LEVELS`` so that every level reachable from
    a populated one is represented.
    """

    nbar: float
    cutoff: int
    weights: np.ndarray = field(repr=False)
    tail_mass: float

    @property
    def field_dim(self) -> int:
        return self.cutoff + GUARD_LEVELS

    @classmethod
    def fock(cls, ell: int) -> "FockTruncation":
        """Pure Fock state ``|ell>`` written as a degenerate weight vector."""
        if ell < 0:
            raise ValueError(f"photon number must be nonnegative, got {ell}")
        w = np.zeros(ell + 1)
        w[ell] = 1.0
        w.setflags(write=False)
        return cls(nbar=float(ell), cutoff=ell, weights=w, tail_mass=0.0)


def thermal_weights(cutoff: int, nbar: float) -> np.ndarray:
    """Weights ``P_0..P_cutoff`` built by the ratio recursion from ``P_0``."""
    if nbar < 0:
        raise ValueError(f"mean photon number must be nonnegative, got {nbar}")
    w = np.zeros(cutoff + 1)
    w[0] = 1.0 / (1.0 + nbar)
    ratio = nbar / (1.0 + nbar)
    for n in range(cutoff):
        w[n + 1] = w[n] * ratio
    return w


def tail_probability(cutoff: int, nbar: float) -> float:
    """Probability of more than ``cutoff`` photons, ``(nbar/(1+nbar))**(cutoff+1)``."""
    if nbar == 0:
        return 0.0
    return (nbar / (1.0 + nbar)) ** (cutoff + 1)


def choose_truncation(nbar: float, epsilon: float = DEFAULT_EPSILON) -> FockTruncation:
    """Smallest cutoff whose discarded thermal tail is at most ``epsilon``."""
    if nbar < 0:
        raise ValueError(f"mean photon number must be nonnegative, got {nbar}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if nbar == 0:
        cutoff = 0
    else:
        ratio = nbar / (1.0 + nbar)
        # log estimate, then fix off-by-one from rounding
        cutoff = max(0, math.ceil(math.log(epsilon) / math.log(ratio)) - 1)
        while cutoff > 0 and tail_probability(cutoff - 1, nbar) <= epsilon:
            cutoff -= 1
        while tail_probability(cutoff, nbar) > epsilon:
            cutoff += 1
    w = thermal_weights(cutoff, nbar)
    w.setflags(write=False)
    return FockTruncation(nbar=float(nbar), cutoff=cutoff, weights=w,
                          tail_mass=tail_probability(cutoff, nbar))

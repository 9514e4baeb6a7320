"""Selector circuits built from a feedback loop instead of a staircase.

Closing output 1 of a two-rail switch chain back onto input 1 turns the
Mach-Zehnder selector cell into a one-port device: the probe either
bounces straight off (control phase 0) or takes one trip around the loop
and through the memory phase (control phase pi).  The resulting 1x1
scattering is unit modulus, so the device is a pure phase readout.

The closed forms here were derived by applying the generic feedback
elimination rule to the component chain and are pinned against that rule
by the test suite; a sign in the loop denominator is easy to get wrong,
and the wrong sign visibly breaks the phi = 0 bypass case.

A second, weighted variant replaces the binary control by an arbitrary
angle phi, giving output phase arg((e^{i mu} - cos phi)/(1 - e^{i mu}
cos phi)) with small-signal gain cot^2(phi/2): a tunable, non-binary
selection weight.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    ArityError,
    DomainError,
    FEEDBACK_SINGULAR_TOL,
    SingularLoopError,
    SlhModel,
    feedback,
    identity,
    series,
)
from .components import beamsplitter, phase_shift
from .selector import TWO_PI, _phase_on_port, canonical_phase

__all__ = [
    "TransferCurve",
    "build_feedback_selector",
    "build_weighted_selector",
    "chain_feedback_selectors",
    "feedback_selector_scattering",
    "principal_phase",
    "sweep_transfer",
    "weighted_output_phase",
    "weighted_selector_scattering",
    "weighted_small_mu_gain",
]


def principal_phase(z: complex) -> float:
    """Argument of ``z`` canonicalized to (-pi, pi]."""
    a = cmath.phase(z)
    return math.pi if a == -math.pi else a


# ---------------------------------------------------------------------------
# binary feedback selector
# ---------------------------------------------------------------------------

def _selector_loop(phi: float, mu: float) -> SlhModel:
    # (Phi_mu + I) <| B(-pi/4) <| (Phi_phi + I) <| B(pi/4), not yet closed
    chain = series(_phase_on_port(phi, 1), beamsplitter(math.pi / 4))
    chain = series(beamsplitter(-math.pi / 4), chain)
    return series(_phase_on_port(mu, 1), chain)


def build_feedback_selector(phi: float, mu: float,
                            allow_removable: bool = False) -> SlhModel:
    """One-port selector: the switch loop closed from output 1 to input 1.

    Singular exactly at (phi, mu) = (0, 0) mod 2*pi, where the loop gain
    hits the well-posedness threshold.  There the limit of the scattering
    is 1 from every direction; ``allow_removable`` substitutes that limit
    instead of raising.
    """
    try:
        return feedback(_selector_loop(phi, mu), 1, 1)
    except SingularLoopError:
        if allow_removable:
            return SlhModel(np.eye(1), np.zeros(1), 0.0)
        raise


def feedback_selector_scattering(phi: float, mu: float,
                                 allow_removable: bool = False) -> complex:
    """Closed-form scattering of the feedback selector.

    S = (1 + e^{i phi} - 2 e^{i(phi+mu)}) / (2 - e^{i mu} - e^{i(phi+mu)}).
    The numerator equals -e^{i(mu+phi)} times the conjugate of the
    denominator, which forces |S| = 1 wherever the loop is well posed.
    """
    e_mu = cmath.exp(1j * mu)
    e_pm = cmath.exp(1j * (phi + mu))
    den = 2.0 - e_mu - e_pm
    if abs(den) < FEEDBACK_SINGULAR_TOL:
        if allow_removable:
            return 1.0 + 0.0j
        raise SingularLoopError(
            1, 1, 1.0 - den / 2.0,
            f"feedback selector singular at phi={phi!r}, mu={mu!r}: "
            f"|loop denominator| = {abs(den):.3e}",
        )
    return (1.0 + cmath.exp(1j * phi) - 2.0 * e_pm) / den


def chain_feedback_selectors(mu, phi) -> float:
    """Output phase of n feedback selectors in series, in [0, 2*pi).

    With binary controls the selector vector is read off directly as
    s = phi / pi; no banded-matrix compilation and no tail phase are
    needed, unlike the staircase layout.  Each stage is built by generic
    feedback elimination and the stages are series-composed in order.
    """
    mu_arr = np.asarray(mu, dtype=np.float64)
    phi_arr = np.asarray(phi, dtype=np.float64)
    if mu_arr.shape != phi_arr.shape or mu_arr.ndim != 1:
        raise ArityError("memory and control vectors must have equal length")
    for x in phi_arr:
        if not (x == 0.0 or x == math.pi):
            raise DomainError(f"control phase must be exactly 0 or pi, got {x!r}")
    model = identity(1)
    for i in range(mu_arr.shape[0]):
        # (0, 0) is the removable bypass: reading a zero phase is a no-op
        stage = build_feedback_selector(phi_arr[i], mu_arr[i], allow_removable=True)
        model = series(stage, model)
    return canonical_phase(principal_phase(model.scattering[0, 0]))


# ---------------------------------------------------------------------------
# weighted selector
# ---------------------------------------------------------------------------

def _weighted_loop(phi: float, mu: float) -> SlhModel:
    chain = series(_phase_on_port(2.0 * phi, 1), beamsplitter(math.pi / 4))
    chain = series(beamsplitter(-math.pi / 4), chain)
    return series(_phase_on_port(mu - phi, 1), chain)


def build_weighted_selector(phi: float, mu: float) -> SlhModel:
    """One-port weighted selector: closed loop plus an outer phase pi - phi.

    Singular where 1 - e^{i mu} cos phi vanishes, i.e. at (0, 0) and
    (pi, pi) mod 2*pi.
    """
    closed = feedback(_weighted_loop(phi, mu), 1, 1)
    return series(phase_shift(math.pi - phi), closed)


def weighted_selector_scattering(phi: float, mu: float) -> complex:
    """Closed-form scattering (e^{i mu} - cos phi) / (1 - e^{i mu} cos phi)."""
    e_mu = cmath.exp(1j * mu)
    cos_phi = math.cos(phi)
    den = 1.0 - e_mu * cos_phi
    if abs(den) < FEEDBACK_SINGULAR_TOL:
        raise SingularLoopError(
            1, 1, e_mu * cos_phi,
            f"weighted selector singular at phi={phi!r}, mu={mu!r}: "
            f"|loop denominator| = {abs(den):.3e}",
        )
    return (e_mu - cos_phi) / den


def weighted_output_phase(phi: float, mu: float) -> float:
    """Output phase of the weighted selector, canonical range (-pi, pi].

    Equals mu at phi = pi/2, collapses to 0 at phi = pi, and interpolates
    non-linearly in between; the small-mu slope is cot^2(phi/2).
    """
    return principal_phase(weighted_selector_scattering(phi, mu))


def weighted_small_mu_gain(phi: float) -> float:
    """Small-signal phase gain d(mu_out)/d(mu) at mu = 0: cot^2(phi/2)."""
    den = 1.0 - math.cos(phi)
    if den == 0.0:
        raise DomainError(f"gain diverges at phi = 0 (mod 2*pi), got {phi!r}")
    return (1.0 + math.cos(phi)) / den


# ---------------------------------------------------------------------------
# transfer sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransferCurve:
    """Sampled weighted-selector response.

    ``samples`` is an (N, 3) float array with columns (mu, phi, mu_out),
    grouped by phi in sweep order with mu ascending inside each group.
    Every row is finite and avoids the singular set.
    """

    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 3:
            raise ArityError("samples must be an (N, 3) array")
        if not np.all(np.isfinite(arr)):
            raise DomainError("transfer curve contains non-finite samples")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def column(self, phi: float) -> np.ndarray:
        """The (mu, mu_out) rows for one control value, in sweep order."""
        rows = self.samples[self.samples[:, 1] == phi]
        return rows[:, [0, 2]]


def sweep_transfer(phis, mu_grid) -> TransferCurve:
    """Evaluate the weighted selector over a (phi, mu) product grid.

    phis are swept in the order given; the mu grid is sorted ascending
    once and shared by every phi.  Any grid point on the singular set
    aborts the sweep with an error naming the point.
    """
    phis_arr = np.asarray(phis, dtype=np.float64)
    mus = np.sort(np.asarray(mu_grid, dtype=np.float64))
    if phis_arr.ndim != 1 or mus.ndim != 1:
        raise ArityError("phi list and mu grid must be 1-D")
    den = np.abs(1.0 - np.exp(1j * mus)[None, :] * np.cos(phis_arr)[:, None])
    bad = np.argwhere(den < FEEDBACK_SINGULAR_TOL)
    if bad.size:
        i, j = bad[0]
        raise SingularLoopError(
            1, 1, np.exp(1j * mus[j]) * np.cos(phis_arr[i]),
            f"sweep grid touches the singular set at phi={phis_arr[i]!r}, "
            f"mu={mus[j]!r}",
        )
    out = kernels.weighted_phase_grid(phis_arr, mus)
    out = np.where(out == -math.pi, math.pi, out)
    samples = np.empty((phis_arr.size * mus.size, 3), dtype=np.float64)
    for i in range(phis_arr.size):
        block = samples[i * mus.size : (i + 1) * mus.size]
        block[:, 0] = mus
        block[:, 1] = phis_arr[i]
        block[:, 2] = out[i]
    return TransferCurve(samples)

"""Mach-Zehnder switching and the binary phase-selector staircase.

A Mach-Zehnder cell with internal phase 0 or pi acts as an exact identity
or swap on its two rails, so a ladder of such cells can route a probe beam
past a row of memory phases and accumulate exactly the subset selected by
a binary vector s.  The probe enters on the top rail, dips onto the bottom
rail wherever a control phase of pi flips the switch state, picks up the
memory phase stored there, and is returned to the top rail by the tail
phase.  The output phase is then the dot product s . mu modulo 2*pi.

Control schedules are compiled from selector vectors with the banded
matrix Gamma and recovered with its lower-triangular inverse L; both are
exact in floating point because every entry is an integer multiple of pi
(or 1/pi) and (1/pi)*pi == 1.0 holds in IEEE double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import ArityError, DomainError, SlhModel, concat, identity, series
from .components import beamsplitter, phase_shift

TWO_PI = 2.0 * math.pi

__all__ = [
    "CompilationMatrices",
    "MatrixProductSpec",
    "SelectorSpec",
    "build_selector_chain",
    "canonical_phase",
    "compilation_matrices",
    "compile_selector",
    "compile_selector_matrix",
    "crossing",
    "eval_matrix_product",
    "eval_selector",
    "mz",
    "mz_switch",
    "recover_selector",
    "recover_selector_matrix",
    "selector_scattering",
    "selector_sweep_amplitudes",
    "staircase_arrays",
]


def canonical_phase(x: float) -> float:
    """Reduce a phase to the canonical range [0, 2*pi)."""
    r = float(np.mod(x, TWO_PI))
    # mod of a tiny negative number can round up to exactly 2*pi
    if r >= TWO_PI:
        r = 0.0
    return r


def _as_bits(s, what: str = "selector") -> np.ndarray:
    arr = np.asarray(s)
    if arr.size and not np.issubdtype(arr.dtype, np.number) and arr.dtype != np.bool_:
        raise DomainError(f"{what} entries must be 0 or 1")
    arr = np.asarray(arr, dtype=np.float64)
    if arr.size and not np.all((arr == 0.0) | (arr == 1.0)):
        raise DomainError(f"{what} entries must be 0 or 1")
    return arr.astype(np.int64)


# ---------------------------------------------------------------------------
# Mach-Zehnder cells
# ---------------------------------------------------------------------------

def mz(theta1: float, theta2: float, phi: float) -> SlhModel:
    """Mach-Zehnder interferometer: B(theta2) after a port-1 phase after B(theta1).

    The scattering matrix is R(theta2) @ diag(e^{i phi}, 1) @ R(theta1).
    """
    inner = series(concat(phase_shift(phi), identity(1)), beamsplitter(theta1))
    return series(beamsplitter(theta2), inner)


def mz_switch(phi: float) -> SlhModel:
    """The balanced Mach-Zehnder used as a binary switch.

    phi must be exactly 0 or pi (the float ``math.pi``); the cell is then
    exactly the identity or the swap.  Anything else raises DomainError,
    because a partial switch is never a valid control setting here.
    """
    if not (phi == 0.0 or phi == math.pi):
        raise DomainError(f"switch control phase must be exactly 0 or pi, got {phi!r}")
    return mz(math.pi / 4, -math.pi / 4, phi)


def crossing() -> SlhModel:
    """A waveguide crossing: the fully switched Mach-Zehnder, i.e. a swap."""
    return mz_switch(math.pi)


# ---------------------------------------------------------------------------
# staircase description
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SelectorSpec:
    """Phase settings of one selector staircase.

    ``memory_phases`` are the n stored phases in [0, 2*pi).
    ``control_phases`` are the n switch settings, each exactly 0 or pi.
    ``tail_phase`` is the final switch setting returning the probe to the
    top rail; it must equal the mod-2 sum of the control phases, otherwise
    the staircase leaks power out the wrong port.
    """

    memory_phases: tuple
    control_phases: tuple
    tail_phase: float

    def __post_init__(self):
        mem = tuple(float(x) for x in self.memory_phases)
        ctrl = tuple(float(x) for x in self.control_phases)
        object.__setattr__(self, "memory_phases", mem)
        object.__setattr__(self, "control_phases", ctrl)
        object.__setattr__(self, "tail_phase", float(self.tail_phase))
        if len(mem) != len(ctrl):
            raise ArityError(
                f"{len(mem)} memory phases need {len(mem)} control phases, got {len(ctrl)}"
            )
        for x in mem:
            if not (0.0 <= x < TWO_PI) or not math.isfinite(x):
                raise DomainError(f"memory phase {x!r} outside [0, 2*pi)")
        for x in ctrl + (self.tail_phase,):
            if not (x == 0.0 or x == math.pi):
                raise DomainError(f"control phase must be exactly 0 or pi, got {x!r}")
        if sum(self.control_bits) % 2 != int(self.tail_phase == math.pi):
            raise DomainError(
                "tail phase must equal the mod-2 sum of the control phases"
            )

    @property
    def n(self) -> int:
        return len(self.memory_phases)

    @property
    def control_bits(self) -> tuple:
        return tuple(int(x == math.pi) for x in self.control_phases)

    @classmethod
    def from_selector(cls, s, mu) -> "SelectorSpec":
        """Compile selector bits ``s`` and attach the memory bank ``mu``."""
        control, tail = compile_selector(s)
        mu = tuple(float(x) for x in np.asarray(mu, dtype=np.float64))
        if len(mu) != len(control):
            raise ArityError(f"selector length {len(control)} != memory length {len(mu)}")
        return cls(mu, tuple(control), tail)


def staircase_arrays(spec: SelectorSpec):
    """Angles, interleaved phases, and phase ports of the staircase.

    Beamsplitter angles alternate +pi/4, -pi/4 over 2(n+1) cells.  Control
    phase i sits inside cell i on the top rail (port 1); memory phase i
    sits between cells i and i+1 on the bottom rail (port 2); the tail
    phase sits inside the last cell on the top rail.  Everything is listed
    input side first, matching ``kernels.chain_unitary``.
    """
    n = spec.n
    thetas = np.empty(2 * (n + 1), dtype=np.float64)
    thetas[0::2] = math.pi / 4
    thetas[1::2] = -math.pi / 4
    phases = np.empty(2 * n + 1, dtype=np.float64)
    ports = np.empty(2 * n + 1, dtype=np.int8)
    phases[0 : 2 * n : 2] = spec.control_phases
    ports[0 : 2 * n : 2] = 1
    phases[1 : 2 * n : 2] = spec.memory_phases
    ports[1 : 2 * n : 2] = 2
    phases[2 * n] = spec.tail_phase
    ports[2 * n] = 1
    return thetas, phases, ports


def _phase_on_port(value: float, port: int) -> SlhModel:
    if port == 1:
        return concat(phase_shift(value), identity(1))
    return concat(identity(1), phase_shift(value))


def build_selector_chain(spec: SelectorSpec) -> SlhModel:
    """Fold the staircase through the generic circuit algebra.

    This is the slow reference route: 2(n+1) beamsplitters and 2n+1 phase
    components combined one series product at a time.  The fast route,
    ``selector_scattering``, must agree with it exactly up to float
    associativity.
    """
    thetas, phases, ports = staircase_arrays(spec)
    model = identity(2)
    for i in range(len(thetas)):
        model = series(beamsplitter(thetas[i]), model)
        if i < len(phases):
            model = series(_phase_on_port(phases[i], int(ports[i])), model)
    return model


def selector_scattering(spec: SelectorSpec) -> np.ndarray:
    """2x2 scattering of the staircase via the compiled chain kernel."""
    thetas, phases, ports = staircase_arrays(spec)
    return kernels.chain_unitary(thetas, phases, ports)


def selector_sweep_amplitudes(mu, selectors) -> np.ndarray:
    """Output amplitudes for many selectors sharing one memory bank.

    Each row of ``selectors`` is compiled to its control schedule and the
    corresponding staircase is folded against the drive (1, 0).  Returns
    an (m, 2) complex array of (top, bottom) output amplitudes.
    """
    bits = np.atleast_2d(_as_bits(selectors))
    mu_arr = np.asarray(mu, dtype=np.float64)
    if bits.shape[1] != mu_arr.shape[0]:
        raise ArityError(
            f"selector length {bits.shape[1]} != memory length {mu_arr.shape[0]}"
        )
    controls = np.empty((bits.shape[0], bits.shape[1] + 1), dtype=np.float64)
    for r in range(bits.shape[0]):
        phi, tail = compile_selector(bits[r])
        controls[r, :-1] = phi
        controls[r, -1] = tail
    return kernels.selector_batch_amplitudes(mu_arr, controls)


# ---------------------------------------------------------------------------
# compilation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompilationMatrices:
    """The compile/recover matrix pair for length-n selectors.

    ``lower`` is L with entries (1/pi) on and below the diagonal; ``gamma``
    is its inverse, pi on the diagonal and -pi on the first subdiagonal.
    L @ Gamma == Gamma @ L == I holds exactly, not just to rounding, since
    each nonzero product is (1/pi)*pi == 1.0 and the sums are small
    integers.  Exactness requires per-element rounding: BLAS matmul may
    fuse multiply-adds and leak the 1/pi rounding into the sums, so the
    identity must be evaluated with scalar products (the test suite does).
    """

    lower: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        for name in ("lower", "gamma"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def compilation_matrices(n: int) -> CompilationMatrices:
    if n < 0:
        raise ArityError(f"selector length must be nonnegative, got {n}")
    lower = np.tril(np.ones((n, n))) / math.pi
    gamma = math.pi * (np.eye(n) - np.eye(n, k=-1))
    return CompilationMatrices(lower, gamma)


def compile_selector(s):
    """Control schedule (phi vector, tail phase) for selector bits ``s``.

    Applies Gamma and reduces mod 2*pi, which lands every entry on exactly
    0.0 or math.pi: Gamma @ s has entries in {-pi, 0, pi} exactly, and
    -pi + 2*pi == pi in floats.  The tail is the mod-2 sum of the schedule.
    """
    bits = _as_bits(s)
    if bits.ndim != 1:
        raise ArityError("selector must be a 1-D vector")
    n = bits.shape[0]
    raw = compilation_matrices(n).gamma @ bits.astype(np.float64)
    control = np.where(raw < 0.0, raw + TWO_PI, raw)
    # the schedule sum telescopes to the last selector bit
    tail = math.pi * (int(np.count_nonzero(control)) % 2)
    return control, tail


def recover_selector(control) -> np.ndarray:
    """Invert a control schedule back to selector bits, exactly.

    This is the action of L followed by the mod-2 reduction: prefix sums
    of the schedule divided by pi.  Computed in integer space so that the
    result cannot pick up rounding from any float path.
    """
    phi = np.asarray(control, dtype=np.float64)
    if phi.ndim != 1:
        raise ArityError("control schedule must be a 1-D vector")
    for x in phi:
        if not (x == 0.0 or x == math.pi):
            raise DomainError(f"control phase must be exactly 0 or pi, got {x!r}")
    steps = (phi == math.pi).astype(np.int64)
    return np.cumsum(steps) % 2


def eval_selector(mu, s) -> float:
    """Output phase of the staircase: s . mu reduced into [0, 2*pi).

    This is the closed-form route; it must match the argument of the top
    output amplitude of the built chain.
    """
    mu_arr = np.asarray(mu, dtype=np.float64)
    bits = _as_bits(s)
    if mu_arr.shape != bits.shape:
        raise ArityError(
            f"memory length {mu_arr.shape} != selector length {bits.shape}"
        )
    total = float(bits @ mu_arr) if bits.size else 0.0
    return canonical_phase(total)


# ---------------------------------------------------------------------------
# matrix extension
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatrixProductSpec:
    """A bank of m memory columns read by k selector columns.

    ``memory_matrix`` is n x m with entries in [0, 2*pi); ``control_matrix``
    is the n x k compiled schedule with entries exactly 0 or pi;
    ``tail_phases`` holds the k tail settings, one per selector column,
    each the mod-2 column sum of the schedule.
    """

    memory_matrix: np.ndarray
    control_matrix: np.ndarray
    tail_phases: np.ndarray

    def __post_init__(self):
        mem = np.asarray(self.memory_matrix, dtype=np.float64)
        ctrl = np.asarray(self.control_matrix, dtype=np.float64)
        tail = np.asarray(self.tail_phases, dtype=np.float64)
        if mem.ndim != 2 or ctrl.ndim != 2 or tail.ndim != 1:
            raise ArityError("memory/control must be matrices, tails a vector")
        if mem.shape[0] != ctrl.shape[0]:
            raise ArityError(
                f"memory rows {mem.shape[0]} != control rows {ctrl.shape[0]}"
            )
        if tail.shape[0] != ctrl.shape[1]:
            raise ArityError(
                f"{ctrl.shape[1]} selector columns need {ctrl.shape[1]} tails"
            )
        if mem.size and (mem.min() < 0.0 or mem.max() >= TWO_PI):
            raise DomainError("memory phases must lie in [0, 2*pi)")
        for x in np.concatenate([ctrl.ravel(), tail]):
            if not (x == 0.0 or x == math.pi):
                raise DomainError(f"control phase must be exactly 0 or pi, got {x!r}")
        col_bits = (ctrl == math.pi).sum(axis=0) % 2
        if ctrl.size and not np.array_equal(col_bits * math.pi, tail):
            raise DomainError(
                "each tail phase must equal the mod-2 column sum of the schedule"
            )
        mem.setflags(write=False)
        ctrl.setflags(write=False)
        tail.setflags(write=False)
        object.__setattr__(self, "memory_matrix", mem)
        object.__setattr__(self, "control_matrix", ctrl)
        object.__setattr__(self, "tail_phases", tail)

    @classmethod
    def from_selector_matrix(cls, selectors, memories) -> "MatrixProductSpec":
        phi, tail = compile_selector_matrix(selectors)
        return cls(np.asarray(memories, dtype=np.float64), phi, tail)


def compile_selector_matrix(selectors):
    """Columnwise control schedule (Phi, tails) for a binary matrix.

    Phi = Gamma @ S reduced into {0, pi}; the tails are the mod-2 column
    sums.  Column j compiled alone equals compile_selector on column j.
    """
    bits = _as_bits(selectors, what="selector matrix")
    if bits.ndim != 2:
        raise ArityError("selector matrix must be 2-D")
    n = bits.shape[0]
    raw = compilation_matrices(n).gamma @ bits.astype(np.float64)
    phi = np.where(raw < 0.0, raw + TWO_PI, raw)
    tails = (np.count_nonzero(phi, axis=0) % 2).astype(np.float64) * math.pi
    return phi, tails


def recover_selector_matrix(control_matrix) -> np.ndarray:
    """Columnwise schedule inversion; see ``recover_selector``."""
    phi = np.asarray(control_matrix, dtype=np.float64)
    if phi.ndim != 2:
        raise ArityError("control matrix must be 2-D")
    for x in phi.ravel():
        if not (x == 0.0 or x == math.pi):
            raise DomainError(f"control phase must be exactly 0 or pi, got {x!r}")
    steps = (phi == math.pi).astype(np.int64)
    return np.cumsum(steps, axis=0) % 2


def eval_matrix_product(spec: MatrixProductSpec) -> np.ndarray:
    """All m*k output phases at once: mod(M^T S, 2*pi).

    S is recovered from the stored control schedule, so the result reflects
    what the compiled hardware would read, not the selectors the caller
    thinks they compiled.
    """
    bits = recover_selector_matrix(spec.control_matrix)
    m_out = spec.memory_matrix.T @ bits.astype(np.float64)
    out = np.mod(m_out, TWO_PI)
    out[out >= TWO_PI] = 0.0
    return out

"""Constructors for the four orthogonal-subspace states and their mixtures.

Each even qubit count n >= 4 carries four mutually orthogonal states
rho+, rho-, sigma+, sigma- (normalized projectors of rank 2**(n-2)).
They can be built three independent ways: summing GHZ-basis projectors
directly, conjugating rho+ by a single Pauli on the last qubit, or through
the Bell-correlated recursion that peels qubits (1, 2) off as a Bell pair.
n = 2 is the degenerate base where the four states are the Bell projectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import basis
from .basis import BELL_LABELS, BellLabel, bell_projector, enumerate_p_strings, enumerate_q_strings, ghz_state
from .config import max_qubits
from .linalg import DensityMatrix, PAULIS, tensor


class ConstructError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class StateClass:
    """One of the four families, encoded as a Bell label.

    parity 0 <-> rho (even-zeros strings), parity 1 <-> sigma; phase 0 <-> '+'.
    The encoding makes the recursion's case analysis and the Pauli relations
    the same Z2 x Z2 group action.
    """

    label: BellLabel

    @property
    def family(self) -> str:
        return "rho" if self.label.parity == 0 else "sigma"

    @property
    def sign(self) -> int:
        return +1 if self.label.phase == 0 else -1

    @property
    def descriptor(self) -> str:
        return self.family + ("+" if self.sign > 0 else "-")

    @classmethod
    def parse(cls, text: str) -> "StateClass":
        t = text.strip().lower()
        for sc in STATE_CLASSES:
            if t == sc.descriptor:
                return sc
        raise ConstructError(f"unknown state class {text!r} (want rho+|rho-|sigma+|sigma-)")

    def __xor__(self, label: BellLabel) -> "StateClass":
        return StateClass(self.label ^ label)

    def __str__(self) -> str:
        return self.descriptor


RHO_PLUS = StateClass(basis.PHI_PLUS)
RHO_MINUS = StateClass(basis.PHI_MINUS)
SIGMA_PLUS = StateClass(basis.PSI_PLUS)
SIGMA_MINUS = StateClass(basis.PSI_MINUS)
STATE_CLASSES = (RHO_PLUS, RHO_MINUS, SIGMA_PLUS, SIGMA_MINUS)

# which single Pauli on the last qubit maps rho+ onto each class
PAULI_FOR_LABEL = {
    basis.PHI_MINUS: "z",
    basis.PSI_PLUS: "x",
    basis.PSI_MINUS: "y",
}


def _check_size(n: int) -> None:
    if n < 2 or n % 2:
        raise ConstructError(f"qubit count must be even and >= 2, got {n}")
    ceiling = max_qubits()
    if n > ceiling:
        raise ConstructError(
            f"n={n} exceeds the size ceiling {ceiling} (raise BCABE_MAX_N to override)"
        )


def ghz_family(cls: StateClass, n: int) -> list[basis.PureStateVector]:
    """The 2**(n-2) GHZ-basis members spanning the class subspace, in string order."""
    _check_size(n)
    strings = enumerate_p_strings(n) if cls.family == "rho" else enumerate_q_strings(n)
    return [ghz_state(s, cls.sign) for s in strings]


def projector_direct(cls: StateClass, n: int) -> DensityMatrix:
    """Normalized subspace projector from the GHZ-basis enumeration."""
    _check_size(n)
    members = ghz_family(cls, n)
    dim = 2**n
    m = np.zeros((dim, dim), dtype=complex)
    half = 0.5 / len(members)
    for state in members:
        (i, ai), (j, aj) = state.amplitudes.items()
        s = 1.0 if (ai * np.conj(aj)).real > 0 else -1.0
        m[i, i] += half
        m[j, j] += half
        m[i, j] += s * half
        m[j, i] += s * half
    return DensityMatrix(n, m)


def projector_recursive(cls: StateClass, n: int) -> DensityMatrix:
    """Bell-correlated recursion: 1/4 sum_b [Bell_b]_(1,2) (x) state(cls^b, n-2)."""
    _check_size(n)
    if n == 2:
        return DensityMatrix(2, bell_projector(cls.label))
    dim = 2**n
    m = np.zeros((dim, dim), dtype=complex)
    for b in BELL_LABELS:
        inner = projector_recursive(cls ^ b, n - 2)
        m += tensor(bell_projector(b), inner.matrix)
    return DensityMatrix(n, m / 4.0)


def pauli_relate(base: DensityMatrix, target: StateClass) -> DensityMatrix:
    """Map rho+ onto `target` by conjugating with one Pauli on the last qubit."""
    if target == RHO_PLUS:
        return base
    name = PAULI_FOR_LABEL[target.label]
    u = tensor(np.eye(2 ** (base.qubits - 1), dtype=complex), PAULIS[name])
    return DensityMatrix(base.qubits, u @ base.matrix @ u.conj().T)


def class_projector_unnormalized(cls: StateClass, n: int) -> np.ndarray:
    """The rank-2**(n-2) subspace projector itself (trace 2**(n-2))."""
    return projector_direct(cls, n).matrix * (2 ** (n - 2))


@dataclass(frozen=True)
class NoisyWeights:
    """Convex weights (x+, x-, y+, y-) over the four classes."""

    x_plus: float
    x_minus: float
    y_plus: float
    y_minus: float

    def __post_init__(self):
        vals = self.as_tuple()
        if any(v < 0 or v > 1 for v in vals):
            raise ConstructError(f"weights must lie in [0, 1], got {vals}")
        if abs(sum(vals) - 1.0) > 1e-12:
            raise ConstructError(f"weights must sum to 1, got sum {sum(vals)!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x_plus, self.x_minus, self.y_plus, self.y_minus)

    @property
    def w_max(self) -> float:
        return max(self.as_tuple())

    def weight_for(self, cls: StateClass) -> float:
        return dict(zip(STATE_CLASSES, self.as_tuple()))[cls]

    @classmethod
    def parse(cls, text: str) -> "NoisyWeights":
        parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
        if len(parts) != 4:
            raise ConstructError(f"need four comma-separated weights, got {text!r}")
        return cls(*(float(p) for p in parts))

    @property
    def descriptor(self) -> str:
        x1, x2, y1, y2 = (repr(float(v)) for v in self.as_tuple())
        return f"noisy x+={x1} x-={x2} y+={y1} y-={y2}"


def noisy_state(weights: NoisyWeights, n: int) -> DensityMatrix:
    """Convex mixture x+ rho+ + x- rho- + y+ sigma+ + y- sigma-."""
    _check_size(n)
    m = sum(
        weights.weight_for(cls) * projector_direct(cls, n).matrix
        for cls in STATE_CLASSES
    )
    return DensityMatrix(n, m)


def bell_diagonal(weights: NoisyWeights, family: str, sign: int) -> DensityMatrix:
    """The 2-qubit Bell-diagonal mixtures the activation protocol leaves behind.

    family 'pi': x+-weighted on [Phi+-]; family 'gamma': x+-weighted on [Psi+-].
    """
    if family not in ("pi", "gamma"):
        raise ConstructError(f"family must be 'pi' or 'gamma', got {family!r}")
    if sign not in (+1, -1):
        raise ConstructError(f"sign must be +1 or -1, got {sign}")
    phase = 0 if sign > 0 else 1
    major = 0 if family == "pi" else 1  # parity of the x-weighted Bell pair
    x1, x2, y1, y2 = weights.as_tuple()
    m = (
        x1 * bell_projector(BellLabel(major, phase))
        + x2 * bell_projector(BellLabel(major, phase ^ 1))
        + y1 * bell_projector(BellLabel(major ^ 1, phase))
        + y2 * bell_projector(BellLabel(major ^ 1, phase ^ 1))
    )
    return DensityMatrix(2, m)

"""Exact simulation of the two activation protocols.

Both protocols are simulated by full branch enumeration (no sampling):
outcome trees stay small (at most 4**3 branches at n = 8), and exactness
turns the protocol claims into equality tests.  Post-measurement operators
are kept unnormalized along the way; a branch probability is simply the
trace of its final operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BELL_LABELS, BellLabel, bell_vector
from .config import DEFAULT_TOLERANCES, Tolerances
from .construct import STATE_CLASSES, StateClass, class_projector_unnormalized
from .linalg import (
    DensityMatrix,
    pair_sandwich,
    partial_trace_matrix,
    reorder_qubits,
    tensor,
)


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class MeasurementOutcome:
    """One projective outcome: its label, probability, and conditional state."""

    label: BellLabel | StateClass
    probability: float
    post_state: DensityMatrix | None  # None when the branch has ~zero probability


@dataclass(frozen=True)
class UnlockBranch:
    labels: tuple[BellLabel, ...]
    probability: float
    state: DensityMatrix | None
    best_label: BellLabel | None
    fidelity: float | None


@dataclass(frozen=True)
class UnlockResult:
    keep: tuple[int, int]
    pairing: tuple[tuple[int, int], ...]
    branches: tuple[UnlockBranch, ...]
    min_fidelity: float
    xor_rule_holds: bool

    @property
    def total_probability(self) -> float:
        return sum(b.probability for b in self.branches)


def bell_fidelity(rho2: DensityMatrix) -> tuple[BellLabel, float]:
    """Best Bell overlap <B|rho|B>; ties go to the canonical label order."""
    if rho2.qubits != 2:
        raise ProtocolError(f"expected a 2-qubit state, got {rho2.qubits} qubits")
    best_label, best = BELL_LABELS[0], -1.0
    for label in BELL_LABELS:
        v = bell_vector(label)
        f = float(np.real(v.conj() @ rho2.matrix @ v))
        if f > best + 1e-15:
            best_label, best = label, f
    return best_label, best


def bell_sandwich(
    mat: np.ndarray, n: int, pair: tuple[int, int]
) -> dict[BellLabel, np.ndarray]:
    """Unnormalized conditional operators <B_b| M |B_b> over one qubit pair."""
    return {b: pair_sandwich(mat, n, pair, bell_vector(b)) for b in BELL_LABELS}


def _normalize_pair(pair, n) -> tuple[int, int]:
    i, j = int(pair[0]), int(pair[1])
    if i == j:
        raise ProtocolError(f"pair qubits must be distinct, got {pair}")
    if not {i, j} <= set(range(1, n + 1)):
        raise ProtocolError(f"pair {pair} out of range for n={n}")
    return (min(i, j), max(i, j))


def bell_measure(
    rho: DensityMatrix,
    pair: tuple[int, int],
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[MeasurementOutcome]:
    """Projective Bell measurement of one pair; outcomes in canonical label order."""
    pair = _normalize_pair(pair, rho.qubits)
    outcomes = []
    for label, op in bell_sandwich(rho.matrix, rho.qubits, pair).items():
        p = float(np.trace(op).real)
        if p > tol.zero_probability:
            post = DensityMatrix(rho.qubits - 2, op / p)
        else:
            post = None
        outcomes.append(MeasurementOutcome(label, p, post))
    return outcomes


def default_pairing(n: int, keep: tuple[int, int]) -> tuple[tuple[int, int], ...]:
    """Ascending disjoint pairs of the non-kept qubits."""
    rest = [q for q in range(1, n + 1) if q not in keep]
    return tuple((rest[i], rest[i + 1]) for i in range(0, len(rest), 2))


def _relabel(pair: tuple[int, int], alive: list[int]) -> tuple[int, int]:
    # map original qubit labels to positions within the current reduced state
    return (alive.index(pair[0]) + 1, alive.index(pair[1]) + 1)


def unlock_sequential(
    rho: DensityMatrix,
    keep: tuple[int, int],
    pairing: tuple[tuple[int, int], ...] | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> UnlockResult:
    """Bell-measure all non-kept qubits pairwise and enumerate every branch.

    The kept pair's conditional state, probability, and best Bell fidelity are
    recorded per branch.  xor_rule_holds reports whether one fixed class label c
    explains every branch as best_label = c ^ (xor of measured labels).
    """
    n = rho.qubits
    if n % 2 or n < 4:
        raise ProtocolError(f"need an even qubit count >= 4, got {n}")
    keep = _normalize_pair(keep, n)
    if pairing is None:
        pairing = default_pairing(n, keep)
    else:
        pairing = tuple(_normalize_pair(p, n) for p in pairing)
    covered = sorted(q for p in pairing for q in p)
    expected = [q for q in range(1, n + 1) if q not in keep]
    if covered != expected:
        raise ProtocolError(
            f"pairing {pairing} must cover the non-kept qubits {expected} exactly"
        )

    # depth-first over outcome tuples, carrying unnormalized conditional operators
    branches: list[UnlockBranch] = []

    def descend(mat: np.ndarray, alive: list[int], index: int, labels: tuple[BellLabel, ...]):
        if index == len(pairing):
            p = float(np.trace(mat).real)
            if p > tol.zero_probability:
                state = DensityMatrix(2, mat / p)
                best, fid = bell_fidelity(state)
                branches.append(UnlockBranch(labels, p, state, best, fid))
            else:
                branches.append(UnlockBranch(labels, max(p, 0.0), None, None, None))
            return
        pair = pairing[index]
        local = _relabel(pair, alive)
        remaining = [q for q in alive if q not in pair]
        for label, op in bell_sandwich(mat, len(alive), local).items():
            descend(op, remaining, index + 1, labels + (label,))

    descend(rho.matrix, list(range(1, n + 1)), 0, ())

    live = [b for b in branches if b.state is not None]
    min_fid = min((b.fidelity for b in live), default=0.0)
    implied = {b.best_label ^ _xor_all(b.labels) for b in live}
    xor_rule = len(implied) == 1
    return UnlockResult(keep, pairing, tuple(branches), min_fid, xor_rule)


def _xor_all(labels: tuple[BellLabel, ...]) -> BellLabel:
    acc = BellLabel(0, 0)
    for lb in labels:
        acc = acc ^ lb
    return acc


def discriminate_subspace(
    rho: DensityMatrix,
    group: tuple[int, ...],
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[MeasurementOutcome]:
    """Joint four-outcome measurement {class subspaces} on all but one pair.

    Outcome k projects the group onto the class-k subspace; the post state is
    the kept pair's conditional state.  For the class states each outcome has
    probability 1/4 and leaves the kept pair in the correlated Bell state.
    """
    n = rho.qubits
    group = tuple(sorted(int(q) for q in group))
    kept = tuple(q for q in range(1, n + 1) if q not in group)
    if len(kept) != 2 or len(set(group)) != len(group):
        raise ProtocolError(
            f"group {group} must be all qubits except one pair of {n}"
        )
    g = len(group)
    outcomes = []
    for cls in STATE_CLASSES:
        proj_small = class_projector_unnormalized(cls, g)
        proj = _embed_on_group(proj_small, n, group)
        op = proj @ rho.matrix @ proj
        p = float(np.trace(op).real)
        if p > tol.zero_probability:
            reduced = partial_trace_matrix(op, n, kept)
            post = DensityMatrix(2, reduced / p)
        else:
            post = None
        outcomes.append(MeasurementOutcome(cls, p, post))
    return outcomes


def _embed_on_group(op: np.ndarray, n: int, group: tuple[int, ...]) -> np.ndarray:
    """op placed on `group`, identity elsewhere, for arbitrary qubit positions."""
    kept = [q for q in range(1, n + 1) if q not in group]
    big = tensor(np.eye(2 ** len(kept), dtype=complex), op)
    return reorder_qubits(big, n, kept + list(group))

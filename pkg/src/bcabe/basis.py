"""Parity-classified bit strings and the GHZ/cat and Bell bases.

Bit strings are ASCII '0'/'1' text with the first character belonging to
qubit 1, the most significant bit of the basis index.  GHZ states are kept
sparse (two amplitudes) and densified only at the matrix boundary.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

SQRT_HALF = 1.0 / math.sqrt(2.0)


class BasisError(ValueError):
    pass


def complement(bits: str) -> str:
    """Bitwise NOT, so <complement(x)|x> = 0 holds by construction."""
    return "".join("1" if b == "0" else "0" for b in bits)


def bit_index(bits: str) -> int:
    """Basis index of |bits>, qubit 1 most significant."""
    return int(bits, 2)


def _family_strings(n: int, zeros_parity: int) -> list[str]:
    if n < 2 or n % 2:
        raise BasisError(f"qubit count must be even and >= 2, got {n}")
    out = []
    for tail in itertools.product("01", repeat=n - 1):
        s = "0" + "".join(tail)
        if s.count("0") % 2 == zeros_parity:
            out.append(s)
    return out  # lexicographic by construction


def enumerate_p_strings(n: int) -> list[str]:
    """Strings with leading 0 and an even number of 0s; 2**(n-2) of them."""
    return _family_strings(n, 0)


def enumerate_q_strings(n: int) -> list[str]:
    """Strings with leading 0 and an odd number of 0s; 2**(n-2) of them."""
    return _family_strings(n, 1)


@dataclass(frozen=True, order=True)
class BellLabel:
    """(parity, phase) element of Z2 x Z2: parity 0 = Phi, phase 0 = +."""

    parity: int
    phase: int

    def __post_init__(self):
        if self.parity not in (0, 1) or self.phase not in (0, 1):
            raise BasisError(f"bits must be 0/1, got {(self.parity, self.phase)}")

    def __xor__(self, other: "BellLabel") -> "BellLabel":
        return BellLabel(self.parity ^ other.parity, self.phase ^ other.phase)

    @property
    def symbol(self) -> str:
        return ("phi" if self.parity == 0 else "psi") + ("+" if self.phase == 0 else "-")

    @classmethod
    def from_symbol(cls, symbol: str) -> "BellLabel":
        try:
            return _BELL_BY_SYMBOL[symbol.lower()]
        except KeyError:
            raise BasisError(f"unknown Bell label {symbol!r}") from None

    def __str__(self) -> str:
        return self.symbol


PHI_PLUS = BellLabel(0, 0)
PHI_MINUS = BellLabel(0, 1)
PSI_PLUS = BellLabel(1, 0)
PSI_MINUS = BellLabel(1, 1)
BELL_LABELS = (PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS)  # canonical order
_BELL_BY_SYMBOL = {b.symbol: b for b in BELL_LABELS}


@dataclass(frozen=True)
class PureStateVector:
    """Sparse amplitude map over computational basis indices."""

    qubits: int
    amplitudes: dict[int, complex] = field(repr=False)

    def __post_init__(self):
        dim = 2**self.qubits
        for idx in self.amplitudes:
            if not 0 <= idx < dim:
                raise BasisError(f"index {idx} out of range for {self.qubits} qubits")
        norm = sum(abs(a) ** 2 for a in self.amplitudes.values())
        if abs(norm - 1.0) > 1e-12:
            raise BasisError(f"state norm^2 = {norm} is not 1")

    def dense(self) -> np.ndarray:
        v = np.zeros(2**self.qubits, dtype=complex)
        for idx, amp in self.amplitudes.items():
            v[idx] = amp
        return v

    def projector(self) -> np.ndarray:
        dim = 2**self.qubits
        m = np.zeros((dim, dim), dtype=complex)
        items = list(self.amplitudes.items())
        for i, ai in items:
            for j, aj in items:
                m[i, j] = ai * np.conj(aj)
        return m

    def inner(self, other: "PureStateVector") -> complex:
        if other.qubits != self.qubits:
            raise BasisError("qubit counts differ")
        return sum(
            np.conj(amp) * other.amplitudes.get(idx, 0.0)
            for idx, amp in self.amplitudes.items()
        )


def ghz_state(bits: str, sign: int) -> PureStateVector:
    """(|x> + sign |~x>)/sqrt(2) for a bit string x."""
    if sign not in (+1, -1):
        raise BasisError(f"sign must be +1 or -1, got {sign}")
    if set(bits) - {"0", "1"}:
        raise BasisError(f"not a bit string: {bits!r}")
    return PureStateVector(
        len(bits),
        {bit_index(bits): SQRT_HALF, bit_index(complement(bits)): sign * SQRT_HALF},
    )


def bell_state(label: BellLabel) -> PureStateVector:
    """The standard 2-qubit Bell vector for the given (parity, phase)."""
    bits = "00" if label.parity == 0 else "01"
    return ghz_state(bits, +1 if label.phase == 0 else -1)


def bell_vector(label: BellLabel) -> np.ndarray:
    return bell_state(label).dense()


def bell_projector(label: BellLabel) -> np.ndarray:
    return bell_state(label).projector()

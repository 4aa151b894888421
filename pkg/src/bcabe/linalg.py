"""Dense complex kernel for multiqubit operators.

Matrices are plain complex128 numpy arrays of dimension 2**n, with qubit 1 as
the most significant bit of the basis index: index(a_1 .. a_n) = sum a_j 2**(n-j).
Everything here is a pure function of immutable inputs; the eigensolver works
on a private copy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances


class LinalgError(ValueError):
    """Raised on contract violations (bad cut, non-Hermitian input, ...)."""


I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def qubit_count(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise LinalgError(f"dimension {dim} is not a power of two >= 2")
    return n


def tensor(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product; the first factor is the most significant."""
    if not mats:
        raise LinalgError("tensor() needs at least one factor")
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise LinalgError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


@dataclass(frozen=True)
class Bipartition:
    """An unordered split of qubits {1..n} into two nonempty groups."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        left = tuple(sorted(self.left))
        right = tuple(sorted(self.right))
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        n = len(left) + len(right)
        if not left or not right:
            raise LinalgError("both sides of a bipartition must be nonempty")
        if set(left) & set(right):
            raise LinalgError(f"cut sides overlap: {left} | {right}")
        if set(left) | set(right) != set(range(1, n + 1)):
            raise LinalgError(f"cut does not cover 1..{n}: {left} | {right}")

    @classmethod
    def of(cls, left: Iterable[int], n: int) -> "Bipartition":
        left = tuple(sorted(left))
        right = tuple(q for q in range(1, n + 1) if q not in set(left))
        return cls(left, right)

    @property
    def qubits(self) -> int:
        return len(self.left) + len(self.right)

    def __str__(self) -> str:
        fmt = lambda side: ",".join(str(q) for q in side)
        return f"{fmt(self.left)}|{fmt(self.right)}"


@dataclass(frozen=True)
class DensityMatrix:
    """A (presumed normalized) n-qubit state; the array is frozen on creation."""

    qubits: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2**self.qubits, 2**self.qubits):
            raise LinalgError(
                f"matrix shape {m.shape} does not match {self.qubits} qubits"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return 2**self.qubits

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def validate(self, tol: Tolerances = DEFAULT_TOLERANCES, psd: bool = False) -> None:
        """Check Hermiticity and unit trace; eigenvalue floor only on request."""
        m = self.matrix
        herm_err = float(np.abs(m - m.conj().T).max())
        if herm_err > tol.hermiticity:
            raise LinalgError(f"not Hermitian: max deviation {herm_err:.3e}")
        tr_err = abs(np.trace(m) - 1.0)
        if tr_err > tol.trace:
            raise LinalgError(f"trace differs from 1 by {tr_err:.3e}")
        if psd:
            lo = hermitian_eigenvalues(m, tol)[0]
            if lo < -tol.psd:
                raise LinalgError(f"negative eigenvalue {lo:.3e}")


def _as_tensor(mat: np.ndarray, n: int) -> np.ndarray:
    return mat.reshape((2,) * (2 * n))


def partial_transpose(rho: DensityMatrix, cut: Bipartition) -> np.ndarray:
    """Transpose the indices of the cut's right group; Hermiticity-preserving."""
    if cut.qubits != rho.qubits:
        raise LinalgError(
            f"cut over {cut.qubits} qubits applied to a {rho.qubits}-qubit state"
        )
    return transpose_qubits(rho.matrix, rho.qubits, cut.right)


def transpose_qubits(mat: np.ndarray, n: int, qubits: Sequence[int]) -> np.ndarray:
    """Partial transpose of an arbitrary 1-based qubit subset."""
    if not set(qubits) <= set(range(1, n + 1)):
        raise LinalgError(f"qubits {qubits} out of range for n={n}")
    t = _as_tensor(np.asarray(mat, dtype=complex), n)
    axes = list(range(2 * n))
    for q in qubits:
        axes[q - 1], axes[n + q - 1] = axes[n + q - 1], axes[q - 1]
    return t.transpose(axes).reshape(2**n, 2**n)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out everything but `keep`; result qubits follow ascending old labels."""
    keep = tuple(sorted(set(keep)))
    n = rho.qubits
    if not keep:
        raise LinalgError("keep set must be nonempty")
    if not set(keep) <= set(range(1, n + 1)):
        raise LinalgError(f"keep set {keep} out of range for n={n}")
    reduced = partial_trace_matrix(rho.matrix, n, keep)
    return DensityMatrix(len(keep), reduced)


def partial_trace_matrix(mat: np.ndarray, n: int, keep: Sequence[int]) -> np.ndarray:
    t = _as_tensor(np.asarray(mat, dtype=complex), n)
    # contract row with column axis for every traced qubit
    row_labels = list(range(n))
    col_labels = [i if (i + 1) not in keep else n + i for i in range(n)]
    out_labels = [i for i in range(n) if (i + 1) in keep]
    out_labels += [n + i for i in range(n) if (i + 1) in keep]
    reduced = np.einsum(t, row_labels + col_labels, out_labels)
    k = len(keep)
    return reduced.reshape(2**k, 2**k)


def permutation_unitary_axes(n: int, perm: Sequence[int]) -> list[int]:
    """Tensor-axis order realizing qubit relabeling i -> perm[i-1] (1-based)."""
    if sorted(perm) != list(range(1, n + 1)):
        raise LinalgError(f"{perm} is not a permutation of 1..{n}")
    # qubit occupying output slot j came from input slot inv[j]
    inv = [0] * n
    for i, target in enumerate(perm):
        inv[target - 1] = i
    return inv


def apply_qubit_permutation(rho: DensityMatrix, perm: Sequence[int]) -> DensityMatrix:
    """Conjugate by the relabeling unitary sending qubit i to position perm[i-1]."""
    n = rho.qubits
    inv = permutation_unitary_axes(n, perm)
    t = _as_tensor(rho.matrix, n)
    axes = inv + [n + i for i in inv]
    return DensityMatrix(n, t.transpose(axes).reshape(rho.dim, rho.dim))


def reorder_qubits(mat: np.ndarray, n: int, order: Sequence[int]) -> np.ndarray:
    """Rearrange a matrix whose tensor slot i belongs to qubit order[i].

    Returns the same operator expressed on qubits in natural order 1..n; the
    inverse bookkeeping of building an operator as tensor(parts at positions).
    """
    if sorted(order) != list(range(1, n + 1)):
        raise LinalgError(f"{order} is not a qubit ordering of 1..{n}")
    slot_of = {q: i for i, q in enumerate(order)}
    row_axes = [slot_of[q] for q in range(1, n + 1)]
    axes = row_axes + [n + a for a in row_axes]
    t = _as_tensor(np.asarray(mat, dtype=complex), n)
    return t.transpose(axes).reshape(2**n, 2**n)


def pair_sandwich(
    mat: np.ndarray, n: int, pair: tuple[int, int], vec4: np.ndarray
) -> np.ndarray:
    """<v| M |v> over a 2-qubit pair, leaving an operator on the other qubits.

    The remaining qubits keep their ascending original order.
    """
    i, j = pair
    if i == j:
        raise LinalgError("pair qubits must be distinct")
    if not {i, j} <= set(range(1, n + 1)):
        raise LinalgError(f"pair {pair} out of range for n={n}")
    if i > j:
        i, j = j, i
    v = np.asarray(vec4, dtype=complex).reshape(2, 2)
    t = _as_tensor(np.asarray(mat, dtype=complex), n)
    labels = list(range(2 * n))
    out = [a for q, a in enumerate(labels[:n], start=1) if q not in (i, j)]
    out += [a for q, a in enumerate(labels[n:], start=1) if q not in (i, j)]
    contracted = np.einsum(
        t, labels, v.conj(), [i - 1, j - 1], v, [n + i - 1, n + j - 1], out
    )
    k = n - 2
    return contracted.reshape(2**k, 2**k)


# ---------------------------------------------------------------------------
# Hermitian eigensolver: cyclic Jacobi with complex plane rotations.
# dims here stay <= 1024, where this is plenty robust and the exact dyadic
# spectra of the projector states come out clean.
# ---------------------------------------------------------------------------

_MAX_SWEEPS = 100


def _check_hermitian(mat: np.ndarray) -> np.ndarray:
    m = np.array(mat, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max()))
    herm_err = float(np.abs(m - m.conj().T).max())
    if herm_err > 1e-10 * scale:
        raise LinalgError(f"matrix is not Hermitian: max deviation {herm_err:.3e}")
    return (m + m.conj().T) / 2.0


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _jacobi_rotate(a: np.ndarray, v: np.ndarray | None, p: int, q: int) -> None:
    apq = a[p, q]
    r = abs(apq)
    if r == 0.0:
        return
    app = a[p, p].real
    aqq = a[q, q].real
    tau = (aqq - app) / (2.0 * r)
    # small-magnitude root of t^2 - 2 tau t - 1 = 0; its sign is opposite tau
    if tau > 0.0:
        t = -1.0 / (tau + math.sqrt(1.0 + tau * tau))
    elif tau < 0.0:
        t = 1.0 / (-tau + math.sqrt(1.0 + tau * tau))
    else:
        t = 1.0
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = (t * c) * (apq / r).conjugate()
    # columns: A <- A U with U = [[c, -conj(s)], [s, c]] on (p, q)
    ap = a[:, p].copy()
    aq = a[:, q].copy()
    a[:, p] = c * ap + s * aq
    a[:, q] = -s.conjugate() * ap + c * aq
    # rows: A <- U^dag A
    bp = a[p, :].copy()
    bq = a[q, :].copy()
    a[p, :] = c * bp + s.conjugate() * bq
    a[q, :] = -s * bp + c * bq
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    if v is not None:
        vp = v[:, p].copy()
        vq = v[:, q].copy()
        v[:, p] = c * vp + s * vq
        v[:, q] = -s.conjugate() * vp + c * vq


def _jacobi(
    mat: np.ndarray, want_vectors: bool, tol: Tolerances
) -> tuple[np.ndarray, np.ndarray | None]:
    a = _check_hermitian(mat)
    dim = a.shape[0]
    v = np.eye(dim, dtype=complex) if want_vectors else None
    norm = float(np.linalg.norm(a))
    if dim == 1 or norm == 0.0:
        vals = np.diag(a).real.copy()
        return vals, v
    target = tol.eigen_offdiag * norm
    # anything below `skip` can contribute at most target/100 in total, so
    # skipping it can never leave the stop criterion unmet
    skip = target / (100.0 * dim)
    for _ in range(_MAX_SWEEPS):
        if _offdiag_norm(a) <= target:
            break
        candidates = np.argwhere(np.triu(np.abs(a) > skip, 1))
        if candidates.size == 0:
            break
        for p, q in candidates:
            if abs(a[p, q]) > skip:
                _jacobi_rotate(a, v, int(p), int(q))
        a = (a + a.conj().T) / 2.0
    else:
        raise LinalgError(f"Jacobi did not converge in {_MAX_SWEEPS} sweeps (dim {dim})")
    vals = np.diag(a).real.copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    if v is not None:
        v = v[:, order]
    return vals, v


def hermitian_eigenvalues(
    mat: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES
) -> np.ndarray:
    """All real eigenvalues of a Hermitian matrix, ascending."""
    vals, _ = _jacobi(mat, want_vectors=False, tol=tol)
    return vals


def hermitian_eigensystem(
    mat: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
    check_residuals: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and matching eigenvector columns.

    With check_residuals, enforces ||M v - lambda v|| <= eigen_residual * ||M||
    for every pair.
    """
    vals, vecs = _jacobi(mat, want_vectors=True, tol=tol)
    if check_residuals:
        m = np.asarray(mat, dtype=complex)
        bound = tol.eigen_residual * max(float(np.linalg.norm(m)), 1e-300)
        resid = m @ vecs - vecs * vals[np.newaxis, :]
        worst = float(np.linalg.norm(resid, axis=0).max())
        if worst > bound:
            raise LinalgError(f"eigenpair residual {worst:.3e} exceeds {bound:.3e}")
    return vals, vecs


# ---------------------------------------------------------------------------
# Text dump format: header "dim=<d>", then d*d lines "i j re im" (0-based,
# row-major, 17 significant digits).
# ---------------------------------------------------------------------------


def format_float(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return f"{x:.17g}"


def dump_matrix(mat: np.ndarray) -> str:
    m = np.asarray(mat, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {m.shape}")
    d = m.shape[0]
    lines = [f"dim={d}"]
    for i in range(d):
        for j in range(d):
            z = m[i, j]
            lines.append(f"{i} {j} {format_float(z.real)} {format_float(z.imag)}")
    return "\n".join(lines) + "\n"


def load_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("dim="):
        raise LinalgError("dump must start with a dim=<d> header")
    d = int(lines[0][4:])
    if len(lines) != 1 + d * d:
        raise LinalgError(f"expected {d * d} entry lines, got {len(lines) - 1}")
    m = np.zeros((d, d), dtype=complex)
    for ln in lines[1:]:
        i_s, j_s, re_s, im_s = ln.split()
        m[int(i_s), int(j_s)] = float(re_s) + 1j * float(im_s)
    return m

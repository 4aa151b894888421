#!/usr/bin/env python3
"""Regenerate tests/goldens/goldens.json by brute force.

Deliberately self-contained: states are rebuilt here from the bit-string
definitions with plain numpy, partial transposes are raw reshape/transpose
moves, and spectra come from np.linalg.eigvalsh.  The package under src/
is never imported, so these numbers stay an independent cross-check of the
production construction and of its Jacobi eigensolver.

Run:  python scripts/make_goldens.py
"""

import itertools
import json
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "tests" / "goldens" / "goldens.json"


def bit_index(bits):
    """Basis index with the first (leftmost) qubit as the most significant bit."""
    return int(bits, 2)


def family_strings(n, parity):
    """Length-n strings with leading 0 and a 0-count of the given parity (0=even)."""
    out = []
    for tail in itertools.product("01", repeat=n - 1):
        s = "0" + "".join(tail)
        if s.count("0") % 2 == parity:
            out.append(s)
    return out


def ghz_vector(bits, sign):
    n = len(bits)
    comp = "".join("1" if b == "0" else "0" for b in bits)
    v = np.zeros(2**n, dtype=complex)
    v[bit_index(bits)] = 1 / np.sqrt(2)
    v[bit_index(comp)] = sign / np.sqrt(2)
    return v


def class_state(n, family, sign):
    """Normalized projector onto one of the four GHZ-basis families."""
    strings = family_strings(n, 0 if family == "rho" else 1)
    dim = 2**n
    rho = np.zeros((dim, dim), dtype=complex)
    for s in strings:
        v = ghz_vector(s, +1 if sign == "+" else -1)
        rho += np.outer(v, v.conj())
    return rho / len(strings)


def partial_transpose(rho, n, qubits):
    """Transpose the listed 1-based qubits; raw tensor-axis swap."""
    t = rho.reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for q in qubits:
        axes[q - 1], axes[n + q - 1] = axes[n + q - 1], axes[q - 1]
    return t.transpose(axes).reshape(2**n, 2**n)


def cut_stats(rho, n, left):
    eigs = np.linalg.eigvalsh(partial_transpose(rho, n, left))
    neg = float(-eigs[eigs < 0].sum()) + 0.0
    return float(eigs[0]), neg


def all_cuts(n):
    """Every unordered bipartition, once, as the side containing qubit 1."""
    rest = list(range(2, n + 1))
    for r in range(0, n - 1):
        for extra in itertools.combinations(rest, r):
            yield (1,) + extra


def main():
    golden = {"per_n": {}}
    for n in (4, 6, 8):
        per_size = {}
        for family in ("rho", "sigma"):
            for sign in ("+", "-"):
                rho = class_state(n, family, sign)
                assert abs(np.trace(rho) - 1) < 1e-12
                for left in all_cuts(n):
                    size = min(len(left), n - len(left))
                    min_eig, neg = cut_stats(rho, n, left)
                    rec = per_size.setdefault(
                        size, {"min_eigenvalue": min_eig, "negativity": neg}
                    )
                    # permutation invariance: every same-size cut of every class
                    # must give the same spectrum
                    assert abs(rec["min_eigenvalue"] - min_eig) < 1e-12, (n, family, sign, left)
                    assert abs(rec["negativity"] - neg) < 1e-12, (n, family, sign, left)
        golden["per_n"][str(n)] = {
            "by_cut_size": {
                str(k): {
                    "min_eigenvalue": per_size[k]["min_eigenvalue"],
                    "negativity": per_size[k]["negativity"],
                    "ppt": per_size[k]["min_eigenvalue"] >= -1e-10,
                }
                for k in sorted(per_size)
            }
        }
        print(f"n={n}:")
        for k in sorted(per_size):
            print(
                f"  {k}-vs-rest  min_eig={per_size[k]['min_eigenvalue']:+.12f} "
                f"negativity={per_size[k]['negativity']:.12f}"
            )

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(golden, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()

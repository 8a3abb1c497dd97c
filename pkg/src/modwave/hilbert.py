"""Truncated multi-mode bosonic Hilbert spaces and superoperator plumbing.

Operators are plain dense complex ``numpy`` arrays over a :class:`FockBasis`.
Density matrices are vectorized by column stacking (Fortran order), so the
map ``rho -> A @ rho @ B`` becomes the matrix ``kron(B.T, A)`` acting on
``vec(rho)``.
"""

from __future__ import annotations

import itertools

import numpy as np

__all__ = [
    "FockBasis",
    "build_basis",
    "annihilation",
    "creation",
    "vec",
    "unvec",
    "sandwich_superop",
    "trace_functional",
    "vacuum_projector",
]


class FockBasis:
    """Ordered occupation-number basis with per-mode and total cutoffs.

    States are occupation tuples sorted lexicographically; the vacuum
    ``(0, ..., 0)`` is always index 0.
    """

    def __init__(self, n_modes: int, per_mode_cutoff: int, total_cutoff: int | None = None):
        if n_modes < 1:
            raise ValueError(f"n_modes must be >= 1, got {n_modes}")
        if per_mode_cutoff < 0:
            raise ValueError(f"per_mode_cutoff must be >= 0, got {per_mode_cutoff}")
        if total_cutoff is not None and total_cutoff < 0:
            raise ValueError(f"total_cutoff must be >= 0, got {total_cutoff}")

        self.n_modes = int(n_modes)
        self.per_mode_cutoff = int(per_mode_cutoff)
        self.total_cutoff = None if total_cutoff is None else int(total_cutoff)

        states = itertools.product(range(self.per_mode_cutoff + 1), repeat=self.n_modes)
        if self.total_cutoff is not None:
            states = (s for s in states if sum(s) <= self.total_cutoff)
        self.states: tuple[tuple[int, ...], ...] = tuple(sorted(states))
        self._index = {s: i for i, s in enumerate(self.states)}

    @property
    def size(self) -> int:
        return len(self.states)

    def index(self, state: tuple[int, ...]) -> int:
        """Index of an occupation tuple; raises KeyError if outside the truncation."""
        return self._index[tuple(state)]

    def contains(self, state: tuple[int, ...]) -> bool:
        return tuple(state) in self._index

    def __len__(self) -> int:
        return len(self.states)

    def __repr__(self) -> str:
        return (f"FockBasis(n_modes={self.n_modes}, per_mode_cutoff={self.per_mode_cutoff}, "
                f"total_cutoff={self.total_cutoff}, size={self.size})")


def build_basis(n_modes: int, per_mode_cutoff: int, total_cutoff: int | None = None) -> FockBasis:
    """Enumerate all admissible occupation tuples for the given cutoffs."""
    return FockBasis(n_modes, per_mode_cutoff, total_cutoff)


def annihilation(basis: FockBasis, mode: int) -> np.ndarray:
    """Dense annihilation operator for one mode: ``a|n> = sqrt(n)|n-1>``.

    Matrix elements that would leave the truncated basis are zero.
    """
    if not 0 <= mode < basis.n_modes:
        raise ValueError(f"mode {mode} out of range for {basis.n_modes} modes")
    d = basis.size
    op = np.zeros((d, d), dtype=complex)
    for col, state in enumerate(basis.states):
        n = state[mode]
        if n == 0:
            continue
        lowered = list(state)
        lowered[mode] = n - 1
        op[basis.index(tuple(lowered)), col] = np.sqrt(n)
    return op


def creation(basis: FockBasis, mode: int) -> np.ndarray:
    """Adjoint of :func:`annihilation`; respects the truncation automatically."""
    return annihilation(basis, mode).conj().T


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = np.asarray(v, dtype=complex)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise ValueError(f"vector of length {v.size} is not a stacked {dim}x{dim} matrix")
    return v.reshape((dim, dim), order="F")


def sandwich_superop(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator S with ``unvec(S @ vec(rho)) == a @ rho @ b``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"operators must be square and same shape, got {a.shape} and {b.shape}")
    return np.kron(b.T, a)


def trace_functional(dim: int) -> np.ndarray:
    """Row vector t with ``t @ vec(rho) == trace(rho)``."""
    t = np.zeros(dim * dim, dtype=complex)
    t[:: dim + 1] = 1.0
    return t


def vacuum_projector(basis: FockBasis) -> np.ndarray:
    """|0><0| over the given basis (vacuum is index 0 by construction)."""
    p = np.zeros((basis.size, basis.size), dtype=complex)
    p[0, 0] = 1.0
    return p

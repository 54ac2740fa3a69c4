"""Subspace values and their lattice algebra.

A subspace is stored as an ambient dimension plus an orthonormal basis; every
closed-subspace symbol in the rest of the package is one of these.  The zero
subspace (a basis with no columns) is a first-class value.  All values are
immutable and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernel
from .errors import InputError, NumericalFailure
from .kernel import DEFAULT_TOLERANCE, TolerancePolicy

_BASIS_TOL = 1.0e-10


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of R^ambient_dim with a stored orthonormal basis."""

    ambient_dim: int
    basis: np.ndarray  # (ambient_dim, dim), orthonormal columns

    def __post_init__(self):
        if self.ambient_dim < 0:
            raise InputError("ambient dimension must be nonnegative")
        basis = kernel.as_matrix(self.basis, "basis")
        if basis.shape[0] != self.ambient_dim:
            raise InputError(
                f"basis has {basis.shape[0]} rows, ambient dimension is {self.ambient_dim}"
            )
        if basis.shape[1] > self.ambient_dim:
            raise InputError("basis has more columns than the ambient dimension")
        if basis.shape[1]:
            gram_err = np.max(np.abs(basis.T @ basis - np.eye(basis.shape[1])))
            if gram_err > _BASIS_TOL:
                raise InputError(f"basis columns are not orthonormal (deviation {gram_err:.3e})")
        basis = basis.copy()
        basis.flags.writeable = False
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0)))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim))

    @classmethod
    def from_spanning(cls, vectors, ambient_dim: int,
                      tol: TolerancePolicy = DEFAULT_TOLERANCE) -> "Subspace":
        """Span of a list of ambient vectors; dim is the numerical rank."""
        rows = [kernel.as_vector(v, "spanning vector") for v in vectors]
        for v in rows:
            if v.shape[0] != ambient_dim:
                raise InputError(
                    f"spanning vector has length {v.shape[0]}, expected {ambient_dim}"
                )
        if not rows:
            return cls.zero(ambient_dim)
        columns = np.stack(rows, axis=1)
        return cls(ambient_dim, kernel.orthonormalize(columns, tol))

    @classmethod
    def from_columns(cls, matrix, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> "Subspace":
        """Column span of a matrix; dim is the numerical rank."""
        a = kernel.as_matrix(matrix, "matrix")
        return cls(a.shape[0], kernel.orthonormalize(a, tol))

    # -- lattice operations ------------------------------------------------

    def _check_ambient(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise InputError(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def orthocomplement(self) -> "Subspace":
        """The orthogonal complement (dim = ambient_dim - dim, exactly)."""
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        comp = kernel.null_space(self.basis.T, DEFAULT_TOLERANCE)
        if comp.shape[1] != self.ambient_dim - self.dim:
            raise NumericalFailure("orthocomplement dimension drifted from ambient - dim")
        return Subspace(self.ambient_dim, comp)

    def intersect(self, other: "Subspace", tol: TolerancePolicy = DEFAULT_TOLERANCE) -> "Subspace":
        """Intersection, computed from the near-null space of [B_self | -B_other]."""
        self._check_ambient(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        stacked = np.hstack([self.basis, -other.basis])
        null = kernel.null_space(stacked, tol)
        if null.shape[1] == 0:
            return Subspace.zero(self.ambient_dim)
        vectors = self.basis @ null[: self.dim, :]
        basis = kernel.orthonormalize(vectors, tol)
        if basis.shape[1] != null.shape[1]:
            raise NumericalFailure("intersection basis lost rank while orthonormalizing")
        return Subspace(self.ambient_dim, basis)

    def sum(self, other: "Subspace", tol: TolerancePolicy = DEFAULT_TOLERANCE) -> "Subspace":
        """Span of the union."""
        self._check_ambient(other)
        if self.dim == 0:
            return other
        if other.dim == 0:
            return self
        return Subspace(self.ambient_dim,
                        kernel.orthonormalize(np.hstack([self.basis, other.basis]), tol))

    def contains(self, x, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> bool:
        """Membership up to subspace_tol (the zero vector is always contained)."""
        v = kernel.as_vector(x, "x")
        if v.shape[0] != self.ambient_dim:
            raise InputError(f"vector has length {v.shape[0]}, ambient is {self.ambient_dim}")
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            return True
        resid = v - self.basis @ (self.basis.T @ v)
        return float(np.linalg.norm(resid)) <= tol.subspace_tol * norm

    def contains_subspace(self, other: "Subspace", tol: TolerancePolicy = DEFAULT_TOLERANCE) -> bool:
        self._check_ambient(other)
        return all(self.contains(other.basis[:, j], tol) for j in range(other.dim))

    def equals(self, other: "Subspace", tol: TolerancePolicy = DEFAULT_TOLERANCE) -> bool:
        """Equal dimensions and largest principal angle at most angle_tol."""
        self._check_ambient(other)
        if self.dim != other.dim:
            return False
        if self.dim == 0:
            return True
        resid = self.basis - other.basis @ (other.basis.T @ self.basis)
        return kernel.spectral_norm(resid) <= np.sin(tol.angle_tol)

    def projector(self) -> np.ndarray:
        """The orthogonal projector B @ B.T."""
        return self.basis @ self.basis.T

    def project(self, x) -> np.ndarray:
        v = kernel.as_vector(x, "x")
        if v.shape[0] != self.ambient_dim:
            raise InputError(f"vector has length {v.shape[0]}, ambient is {self.ambient_dim}")
        return self.basis @ (self.basis.T @ v)

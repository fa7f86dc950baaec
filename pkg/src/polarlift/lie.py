"""Dense real-matrix Lie algebras and the subspace machinery built on them.

Everything downstream works with coordinate vectors in a fixed basis of an
ambient algebra.  Matrices only appear when an algebra is constructed, when an
element is exponentiated, or when a bracket is cross-checked against the
matrix commutator.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

TOL_ALG = 1e-10
TOL_LIN = 1e-10
TOL_RANK = 1e-8


class ConstructionError(ValueError):
    """A construction was rejected because a defining relation failed."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class VacuousConstraintWarning(RuntimeWarning):
    """Raised (as a warning) when a joint kernel is taken over no operators."""


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _threshold(sv: np.ndarray, scale: float | None = None) -> float:
    # floor at unit scale: inputs are assembled from orthonormal bases, so
    # noise-level operators must not set their own reference.
    ref = max(float(sv[0]) if sv.size else 0.0, 1.0 if scale is None else scale)
    return TOL_RANK * ref


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """A real Lie algebra of N x N matrices with a fixed basis.

    ``structure_constants[i, j, k]`` is the k-th coordinate of
    ``[basis[i], basis[j]]``; ``inner`` is the Gram matrix of the invariant
    product in that basis.
    """

    family_tag: str
    basis: np.ndarray
    structure_constants: np.ndarray
    inner: np.ndarray
    normalization: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def matrix_size(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def from_matrices(cls, family_tag: str, mats: Sequence[np.ndarray],
                      orthonormalize: bool = True) -> "LieAlgebra":
        mats = np.asarray(mats, dtype=float)
        m, N, _ = mats.shape
        flat = mats.reshape(m, N * N).T
        if orthonormalize:
            q, r = np.linalg.qr(flat)
            signs = np.sign(np.diag(r))
            signs[signs == 0] = 1.0
            q = q * signs
            keep = np.abs(np.diag(r)) > TOL_RANK * max(np.abs(np.diag(r)).max(), 1.0)
            flat = q[:, keep]
        basis = flat.T.reshape(-1, N, N)
        n = basis.shape[0]
        pinv = np.linalg.pinv(flat)

        c = np.zeros((n, n, n))
        worst = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                comm = (basis[i] @ basis[j] - basis[j] @ basis[i]).reshape(-1)
                x = pinv @ comm
                worst = max(worst, float(np.linalg.norm(flat @ x - comm)))
                c[i, j] = x
                c[j, i] = -x
        if worst > TOL_LIN:
            raise ConstructionError(
                f"{family_tag}: basis is not bracket-closed (residual {worst:.3e})", worst)

        killing_like = -np.einsum("iab,jba->ij", basis, basis)
        scale = 1.0 / killing_like[0, 0]
        inner = 0.5 * (killing_like + killing_like.T) * scale
        norm = {"form": "-trace(XY) in the real encoding", "scale": float(scale),
                "matrix_size": int(N)}
        return cls(family_tag, _frozen(basis), _frozen(c), _frozen(inner), norm)

    def matrix(self, x) -> np.ndarray:
        return np.tensordot(np.asarray(x, dtype=float), self.basis, axes=(0, 0))

    def coords(self, mat, check: bool = True) -> np.ndarray:
        flat = self.basis.reshape(self.dim, -1).T
        v = np.asarray(mat, dtype=float).reshape(-1)
        x, *_ = np.linalg.lstsq(flat, v, rcond=None)
        if check:
            res = float(np.linalg.norm(flat @ x - v))
            if res > TOL_LIN * max(1.0, float(np.linalg.norm(v))):
                raise ValueError(f"matrix is not in {self.family_tag} (residual {res:.3e})")
        return x

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.structure_constants)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad(x) acting on coordinate columns."""
        return np.einsum("i,ijk->kj", x, self.structure_constants)

    def brackets(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """All brackets of columns of xs with columns of ys, shape (dim, a, b)."""
        return np.einsum("ia,jb,ijk->kab", xs, ys, self.structure_constants)

    def jacobi_residual(self) -> float:
        c = self.structure_constants
        t = np.einsum("ijm,mkl->ijkl", c, c)
        jac = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
        return float(np.abs(jac).max()) if jac.size else 0.0

    def invariance_residual(self) -> float:
        c, g = self.structure_constants, self.inner
        t = np.einsum("zxm,my->zxy", c, g)
        res = t + t.transpose(0, 2, 1)
        return float(np.abs(res).max()) if res.size else 0.0

    def element(self, coords) -> "AlgebraElement":
        return AlgebraElement(_frozen(coords), self)

    def whole(self) -> "Subspace":
        return Subspace(_frozen(np.linalg.inv(np.linalg.cholesky(self.inner)).T), self.inner)


def direct_sum(a: LieAlgebra, b: LieAlgebra, tag: str | None = None) -> LieAlgebra:
    """Block-diagonal sum; the basis is a's basis followed by b's, unchanged."""
    Na, Nb = a.matrix_size, b.matrix_size
    mats = []
    for m in a.basis:
        z = np.zeros((Na + Nb, Na + Nb))
        z[:Na, :Na] = m
        mats.append(z)
    for m in b.basis:
        z = np.zeros((Na + Nb, Na + Nb))
        z[Na:, Na:] = m
        mats.append(z)
    return LieAlgebra.from_matrices(tag or f"{a.family_tag}+{b.family_tag}", mats,
                                    orthonormalize=False)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    coords: np.ndarray
    ambient: LieAlgebra

    def __post_init__(self):
        if self.coords.shape != (self.ambient.dim,):
            raise ValueError(f"expected {self.ambient.dim} coordinates, got {self.coords.shape}")

    @property
    def matrix(self) -> np.ndarray:
        return self.ambient.matrix(self.coords)


def bracket(X: AlgebraElement, Y: AlgebraElement) -> AlgebraElement:
    """Matrix commutator XY - YX re-expanded in the ambient basis."""
    if X.ambient is not Y.ambient:
        raise ValueError("bracket of elements from different algebras")
    mx, my = X.matrix, Y.matrix
    comm = mx @ my - my @ mx
    try:
        coords = X.ambient.coords(comm)
    except ValueError as exc:
        raise ConstructionError(f"basis of {X.ambient.family_tag} is not closed: {exc}") from exc
    return X.ambient.element(coords)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Span of the columns of ``onb``, orthonormal for the Gram matrix ``form``."""

    onb: np.ndarray
    form: np.ndarray

    @property
    def ambient_dim(self) -> int:
        return self.onb.shape[0]

    @property
    def dim(self) -> int:
        return self.onb.shape[1]

    @classmethod
    def from_vectors(cls, vectors, form, scale: float | None = None) -> "Subspace":
        form = np.asarray(form, dtype=float)
        vecs = np.asarray(vectors, dtype=float).reshape(form.shape[0], -1)
        if vecs.shape[1] == 0:
            return cls.zero(form)
        R = np.linalg.cholesky(form).T
        u, sv, _ = np.linalg.svd(R @ vecs, full_matrices=False)
        keep = sv > _threshold(sv, scale)
        onb = np.linalg.solve(R, u[:, keep])
        return cls(_frozen(onb), _frozen(form))

    @classmethod
    def zero(cls, form) -> "Subspace":
        form = np.asarray(form, dtype=float)
        return cls(_frozen(np.zeros((form.shape[0], 0))), _frozen(form))

    def coeffs(self, v) -> np.ndarray:
        return self.onb.T @ self.form @ v

    def project(self, v) -> np.ndarray:
        return self.onb @ self.coeffs(v)

    def residual(self, vectors) -> float:
        """Largest form-norm of the component of any column outside the span."""
        v = np.asarray(vectors, dtype=float).reshape(self.ambient_dim, -1)
        if v.shape[1] == 0:
            return 0.0
        d = v - self.project(v)
        return float(np.sqrt(np.max(np.einsum("ia,ij,ja->a", d, self.form, d).clip(min=0))))

    def contains(self, other: "Subspace") -> float:
        return self.residual(other.onb)

    def orthonormality_residual(self) -> float:
        if self.dim == 0:
            return 0.0
        return float(np.abs(self.onb.T @ self.form @ self.onb - np.eye(self.dim)).max())


@dataclass(frozen=True, eq=False)
class LinearEndo:
    """An endomorphism written in the onb coordinates of ``carrier``."""

    matrix: np.ndarray
    carrier: Subspace

    def __post_init__(self):
        d = self.carrier.dim
        if self.matrix.shape != (d, d):
            raise ValueError(f"endomorphism shape {self.matrix.shape} does not match carrier dim {d}")


def span_closure(seed, mul: Callable[[np.ndarray, np.ndarray], np.ndarray],
                 form=None) -> Subspace:
    """Smallest subspace containing ``seed`` and closed under ``mul``.

    Products of the newest directions with the whole current span are
    orthogonalized against the span; directions whose residual clears the rank
    threshold are admitted, until a round adds nothing.
    """
    seed = np.asarray(seed, dtype=float)
    if seed.ndim == 1:
        seed = seed[:, None]
    n = seed.shape[0]
    form = np.eye(n) if form is None else np.asarray(form, dtype=float)
    R = np.linalg.cholesky(form).T
    Rinv = np.linalg.inv(R)

    def orth(vecs, basis, scale):
        # whitened coordinates: form becomes Euclidean
        if basis.shape[1]:
            vecs = vecs - basis @ (basis.T @ vecs)
            vecs = vecs - basis @ (basis.T @ vecs)
        if vecs.shape[1] == 0:
            return np.zeros((n, 0))
        u, sv, _ = np.linalg.svd(vecs, full_matrices=False)
        return u[:, sv > TOL_RANK * max(scale, 1.0)]

    w = R @ seed
    seed_scale = float(np.linalg.norm(w, 2)) if w.size else 0.0
    basis = orth(w, np.zeros((n, 0)), seed_scale)
    frontier = basis
    while frontier.shape[1] and basis.shape[1] < n:
        prods = []
        for f in frontier.T:
            for b in basis.T:
                prods.append(R @ mul(Rinv @ f, Rinv @ b))
                prods.append(R @ mul(Rinv @ b, Rinv @ f))
        prods = np.array(prods).T
        scale = max(seed_scale, float(np.linalg.norm(prods, 2)))
        new = orth(prods, basis, scale)
        basis = np.hstack([basis, new])
        frontier = new
    return Subspace(_frozen(Rinv @ basis), _frozen(form))


def orthogonal_complement(U: Subspace, within: Subspace) -> Subspace:
    res = within.contains(U)
    if res > TOL_LIN * 100:
        raise ValueError(f"subspace is not contained in the given ambient subspace (residual {res:.3e})")
    C = within.onb.T @ within.form @ U.onb
    if U.dim == 0:
        return within
    u, sv, _ = np.linalg.svd(C, full_matrices=True)
    rank = int(np.sum(sv > _threshold(sv)))
    return Subspace(_frozen(within.onb @ u[:, rank:]), within.form)


def null_space(stacked: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the kernel of ``stacked`` by singular values."""
    if stacked.shape[0] > stacked.shape[1]:
        # same singular values and right vectors, without the tall U
        stacked = np.linalg.qr(stacked, mode="r")
    _, sv, vt = np.linalg.svd(stacked, full_matrices=True)
    rank = int(np.sum(sv > _threshold(sv)))
    return vt[rank:].T


def joint_kernel(ops: Sequence[LinearEndo], carrier: Subspace | None = None) -> Subspace:
    """Common null space of a family of operators on one carrier."""
    if not ops:
        if carrier is None:
            raise ValueError("joint kernel of no operators needs an explicit carrier")
        warnings.warn("joint kernel over an empty operator set is the whole carrier",
                      VacuousConstraintWarning, stacklevel=2)
        return carrier
    carrier = ops[0].carrier
    if any(op.carrier is not carrier for op in ops):
        raise ValueError("operators do not share a carrier")
    ker = null_space(np.vstack([op.matrix for op in ops]))
    return Subspace(_frozen(carrier.onb @ ker), carrier.form)


def _sym_basis(d: int) -> np.ndarray:
    mats = []
    for i in range(d):
        for j in range(i, d):
            m = np.zeros((d, d))
            if i == j:
                m[i, i] = 1.0
            else:
                m[i, j] = m[j, i] = np.sqrt(0.5)
            mats.append(m)
    return np.array(mats).reshape(len(mats), d, d)


def symmetric_commutant(ops: Sequence[np.ndarray], form) -> list[np.ndarray]:
    """Basis of {M : [M, A] = 0 for all A, M self-adjoint for ``form``}.

    ``ops`` are square matrices on a common carrier; ``form`` is the Gram matrix
    of the carrier.  The returned operators are in the same coordinates.
    """
    form = np.asarray(form, dtype=float)
    d = form.shape[0]
    R = np.linalg.cholesky(form).T
    Rinv = np.linalg.inv(R)
    sym = _sym_basis(d)
    rows = []
    for A in ops:
        At = R @ np.asarray(A) @ Rinv
        # column t: commutator of the t-th symmetric basis matrix with At
        rows.append(np.einsum("tij->ijt", sym @ At - At @ sym).reshape(d * d, -1))
    if not rows:
        ker = np.eye(sym.shape[0])
    else:
        ker = null_space(np.vstack(rows))
    return [Rinv @ np.tensordot(c, sym, axes=(0, 0)) @ R for c in ker.T]


def symmetric_commutant_dim(ops: Sequence, form) -> tuple[int, list[np.ndarray]]:
    mats = [op.matrix if isinstance(op, LinearEndo) else op for op in ops]
    basis = symmetric_commutant(mats, form)
    return len(basis), basis

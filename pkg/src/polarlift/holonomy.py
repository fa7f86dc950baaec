"""Canonical-connection operators on qbar, the holonomy algebra they generate,
and the transvection / fixed-set / centre computations on the model.

Operators on qbar are matrices in the model basis of ``bar.qbar`` (p1 basis,
then embed2 of the p2 basis); g_s in that basis is ``metric.gram_qbar``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .bundle import BarModel, BundleSplit, MetricGs, metric_gs
from .lie import (TOL_ALG, TOL_LIN, LinearEndo, Subspace, VacuousConstraintWarning,
                  joint_kernel, span_closure, symmetric_commutant_dim)


def lambda_operator(bar: BarModel, X) -> LinearEndo:
    """ad on the kbar-component plus half the qbar-projected bracket on the qbar-component."""
    X = np.asarray(X, dtype=float)
    if X.shape != (bar.gbar.dim,):
        raise ValueError(f"expected a gbar vector of length {bar.gbar.dim}")
    Xk = bar.kbar.project(X)
    Xq = bar.qbar.project(X)
    op = bar.gbar.ad(Xk) + 0.5 * bar.gbar.ad(Xq)
    mat = bar.qbar.onb.T @ bar.form @ op @ bar.qbar.onb
    return LinearEndo(mat, bar.qbar)


def _skew_residual(mat: np.ndarray, gram: np.ndarray) -> float:
    if mat.size == 0:
        return 0.0
    return float(np.abs(gram @ mat + mat.T @ gram).max())


def natural_reductivity_check(bar: BarModel, metric: MetricGs) -> dict:
    """Skew-adjointness of Lambda(X) for X over bases of qbar and kbar."""
    G = metric.gram_qbar
    q_res = max((_skew_residual(lambda_operator(bar, x).matrix, G) for x in bar.qbar.onb.T),
                default=0.0)
    k_res = max((_skew_residual(lambda_operator(bar, x).matrix, G) for x in bar.kbar.onb.T),
                default=0.0)
    return {"qbar": q_res, "kbar": k_res, "max": max(q_res, k_res)}


@dataclass(frozen=True, eq=False)
class HolonomySet:
    bar: BarModel
    generators: list
    closure: Subspace
    skew_residual: float
    closed_residual: float

    @property
    def dim(self) -> int:
        return self.closure.dim

    def operators(self) -> list[np.ndarray]:
        d = self.bar.qbar.dim
        return [v.reshape(d, d) for v in self.closure.onb.T]


def _commutator(d: int):
    def mul(a, b):
        A, B = a.reshape(d, d), b.reshape(d, d)
        return (A @ B - B @ A).reshape(-1)
    return mul


def holonomy_algebra(bar: BarModel, metric: MetricGs | None = None) -> HolonomySet:
    """Lie algebra generated by Lambda over a basis of gbar."""
    metric = metric if metric is not None else metric_gs(bar.split, bar.s, bar)
    d = bar.qbar.dim
    eye = np.eye(bar.gbar.dim)
    gens = [lambda_operator(bar, e) for e in eye]
    seed = np.array([g.matrix.reshape(-1) for g in gens]).T
    mul = _commutator(d)
    closure = span_closure(seed, mul)
    ops = [v.reshape(d, d) for v in closure.onb.T]
    skew = max((_skew_residual(A, metric.gram_qbar) for A in ops), default=0.0)
    closed = 0.0
    if ops:
        comms = np.array([mul(a, b) for a in closure.onb.T for b in closure.onb.T]).T
        closed = closure.residual(comms)
    return HolonomySet(bar, gens, closure, skew, closed)


@dataclass(frozen=True, eq=False)
class IrreducibilityVerdict:
    irreducible: bool
    commutant_dim: int
    projectors: list
    invariant_subspaces: list
    invariance_residual: float


def irreducibility_check(hol: HolonomySet, metric: MetricGs, seed: int = 0) -> IrreducibilityVerdict:
    """Irreducible iff the g_s-self-adjoint commutant of the holonomy algebra is the scalars.

    Otherwise a random self-adjoint commutant element is diagonalized and its
    eigenspaces are returned as invariant subspaces.
    """
    G = metric.gram_qbar
    ops = hol.operators()
    dim, basis = symmetric_commutant_dim(ops, G)
    if dim <= 1:
        return IrreducibilityVerdict(True, dim, [], [], 0.0)

    rng = np.random.default_rng(seed)
    M = sum(c * B for c, B in zip(rng.standard_normal(dim), basis))
    R = np.linalg.cholesky(G).T
    Rinv = np.linalg.inv(R)
    S = R @ M @ Rinv
    w, U = np.linalg.eigh(0.5 * (S + S.T))
    groups = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[i - 1] > 1e-6 * max(1.0, abs(w).max()):
            groups.append([i])
        else:
            groups[-1].append(i)
    projectors, subspaces = [], []
    d = G.shape[0]
    worst = 0.0
    gens = [g.matrix for g in hol.generators] + ops
    for idx in groups:
        Ui = U[:, idx]
        P = Rinv @ Ui @ Ui.T @ R
        projectors.append(P)
        subspaces.append(Subspace(Rinv @ Ui, G))
        for A in gens:
            worst = max(worst, float(np.linalg.norm((np.eye(d) - P) @ A @ P, 2)))
    return IrreducibilityVerdict(False, dim, projectors, subspaces, worst)


def transvection_algebra(bar: BarModel) -> Subspace:
    """qbar + [qbar, qbar] closed under the gbar bracket."""
    gb = bar.gbar
    Q = bar.qbar.onb
    brs = gb.brackets(Q, Q).reshape(gb.dim, -1)
    seed = np.hstack([Q, brs])
    return span_closure(seed, gb.bracket, gb.inner)


@dataclass(frozen=True, eq=False)
class FixedSetReport:
    F: Subspace
    equals_p2: bool
    equals_q: bool
    residual_p2: float
    residual_q: float
    vacuous: bool
    escape: float


def fixed_set_adk(split: BundleSplit) -> FixedSetReport:
    """Joint kernel in q of ad(k); compared with p2 and with q."""
    g, Q = split.g, split.q
    ops, escape = [], 0.0
    for x in split.k.onb.T:
        A = g.ad(x) @ Q.onb
        escape = max(escape, Q.residual(A))
        ops.append(LinearEndo(Q.coeffs(A), Q))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", VacuousConstraintWarning)
        F = joint_kernel(ops, carrier=Q)
    res_p2 = max(split.p2.residual(F.onb), F.residual(split.p2.onb))
    res_q = max(Q.residual(F.onb), F.residual(Q.onb))
    return FixedSetReport(F, F.dim == split.p2.dim and res_p2 < TOL_LIN,
                          F.dim == Q.dim and res_q < TOL_LIN,
                          res_p2, res_q, not ops, escape)


@dataclass(frozen=True, eq=False)
class CenterReport:
    center: Subspace
    center_hk: Subspace
    contained_residual: float

    @property
    def dim(self) -> int:
        return self.center.dim

    @property
    def dim_hk(self) -> int:
        return self.center_hk.dim

    @property
    def contained(self) -> bool:
        return self.contained_residual < TOL_ALG


def _center(alg) -> Subspace:
    whole = alg.whole()
    if alg.dim == 0:
        return whole
    ops = [LinearEndo(whole.coeffs(alg.ad(e) @ whole.onb), whole) for e in np.eye(alg.dim)]
    return joint_kernel(ops)


def center_check(bar: BarModel) -> CenterReport:
    """Centre of gbar, centre of h/k, and whether the former sits in the h/k factor."""
    z = _center(bar.gbar)
    zc = _center(bar.p2c)
    contained = float(np.linalg.norm(z.onb[: bar.n_g], axis=0).max()) if z.dim else 0.0
    return CenterReport(z, zc, contained)

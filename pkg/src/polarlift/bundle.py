"""Symmetric pairs, the ideal split of the isotropy, the metric g_s, and the
enlarged model G x H/K acting on G/K.

Coordinates:

* elements of g are coordinate vectors in the basis of ``g``;
* tangent vectors at 1K live in q = p1 + p2 and are written in the q-basis
  ``split.q.onb`` (p1 vectors first, then p2 vectors);
* elements of gbar = g + p2c are concatenations (g-part, p2c-part), where p2c
  carries the bracket of p2 and stands in for h/k.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lie import (TOL_ALG, TOL_LIN, ConstructionError, LieAlgebra, Subspace,
                  _frozen, orthogonal_complement, span_closure)


def _columns(g: LieAlgebra, gens) -> np.ndarray:
    if isinstance(gens, np.ndarray):
        return gens.reshape(g.dim, -1)
    cols = []
    for x in gens:
        coords = getattr(x, "coords", x)
        if getattr(x, "ambient", g) is not g:
            raise ValueError("generator does not belong to this algebra")
        cols.append(np.asarray(coords, dtype=float))
    return np.array(cols).T if cols else np.zeros((g.dim, 0))


def bracket_residual(g: LieAlgebra, A: Subspace, B: Subspace, target: Subspace | None) -> float:
    """Largest component of [A, B] outside ``target`` (outside 0 when target is None)."""
    if A.dim == 0 or B.dim == 0:
        return 0.0
    br = g.brackets(A.onb, B.onb).reshape(g.dim, -1)
    if target is None:
        return float(np.sqrt(np.einsum("ia,ij,ja->a", br, g.inner, br).max()))
    return target.residual(br)


@dataclass(frozen=True, eq=False)
class SymmetricPair:
    g: LieAlgebra
    h: Subspace
    p1: Subspace
    residuals: dict = field(default_factory=dict)


def make_symmetric_pair(g: LieAlgebra, h_generators) -> SymmetricPair:
    gens = _columns(g, h_generators)
    h = span_closure(gens, g.bracket, g.inner)
    p1 = orthogonal_complement(h, g.whole())
    res = {
        "[h,h] in h": bracket_residual(g, h, h, h),
        "[h,p1] in p1": bracket_residual(g, h, p1, p1),
        "[p1,p1] in h": bracket_residual(g, p1, p1, h),
        "h perp p1": float(np.abs(h.onb.T @ g.inner @ p1.onb).max()) if h.dim and p1.dim else 0.0,
    }
    worst = max(res.values())
    if worst > TOL_ALG or h.dim + p1.dim != g.dim:
        raise ConstructionError(
            f"{g.family_tag}: not a symmetric pair (Cartan residual {worst:.3e})", worst)
    return SymmetricPair(g, h, p1, res)


@dataclass(frozen=True, eq=False)
class BundleSplit:
    pair: SymmetricPair
    k: Subspace
    p2: Subspace
    q: Subspace
    residuals: dict = field(default_factory=dict)

    @property
    def g(self) -> LieAlgebra:
        return self.pair.g

    @property
    def p1(self) -> Subspace:
        return self.pair.p1

    @property
    def h(self) -> Subspace:
        return self.pair.h

    @property
    def dims(self) -> dict:
        return {"g": self.g.dim, "h": self.h.dim, "p1": self.p1.dim, "k": self.k.dim,
                "p2": self.p2.dim, "q": self.q.dim}

    def to_q(self, x) -> np.ndarray:
        """q-coordinates of the projection of g-vectors along k."""
        return self.q.coeffs(x)

    def to_p2c(self, y) -> np.ndarray:
        return self.p2.coeffs(y)

    def from_p2c(self, c) -> np.ndarray:
        return self.p2.onb @ c

    def q_block(self, name: str) -> slice:
        d1 = self.p1.dim
        return slice(0, d1) if name == "p1" else slice(d1, self.q.dim)


def split_isotropy(pair: SymmetricPair, k_generators) -> BundleSplit:
    g = pair.g
    gens = _columns(g, k_generators)
    if gens.shape[1] and pair.h.residual(gens) > TOL_LIN * 100:
        raise ValueError("k generators do not lie in h")
    k = span_closure(gens, g.bracket, g.inner) if gens.shape[1] else Subspace.zero(g.inner)
    p2 = orthogonal_complement(k, pair.h)
    res = {
        "[k,k] in k": bracket_residual(g, k, k, k),
        "[p2,p2] in p2": bracket_residual(g, p2, p2, p2),
        "[k,p2] = 0": bracket_residual(g, k, p2, None),
    }
    worst = max(res.values())
    if worst > TOL_ALG:
        raise ConstructionError(
            f"{g.family_tag}: k is not an ideal with ideal complement in h "
            f"(residual {worst:.3e})", worst)
    q = Subspace(_frozen(np.hstack([pair.p1.onb, p2.onb])), g.inner)
    if q.dim != g.dim - k.dim:
        raise ConstructionError("dim q != dim g - dim k", float(abs(q.dim - g.dim + k.dim)))
    return BundleSplit(pair, k, p2, q, res)


def _empty_algebra(tag: str, N: int) -> LieAlgebra:
    return LieAlgebra(tag, _frozen(np.zeros((0, N, N))), _frozen(np.zeros((0, 0, 0))),
                      _frozen(np.zeros((0, 0))), {})


def quotient_copy(split: BundleSplit) -> LieAlgebra:
    """The disjoint copy of p2 with its own bracket, realizing h/k."""
    g = split.g
    if split.p2.dim == 0:
        return _empty_algebra("h/k", g.matrix_size)
    mats = [g.matrix(v) for v in split.p2.onb.T]
    return LieAlgebra.from_matrices("h/k", mats, orthonormalize=False)


@dataclass(frozen=True, eq=False)
class BarModel:
    """gbar = g + p2c with isotropy kbar and the s-dependent complement qbar.

    ``qbar.onb`` is the model basis: p1 vectors, then embed2 of the p2 basis.
    ``form`` makes kbar and qbar orthogonal, so projecting onto qbar with it
    is the projection along kbar.
    """

    split: BundleSplit
    s: float
    gbar: LieAlgebra
    p2c: LieAlgebra
    kbar: Subspace
    qbar: Subspace
    form: np.ndarray
    residuals: dict = field(default_factory=dict)

    @property
    def n_g(self) -> int:
        return self.split.g.dim

    def pack(self, a, b) -> np.ndarray:
        return np.concatenate([np.asarray(a, float), np.asarray(b, float)])

    def embed2(self, y) -> np.ndarray:
        """X in p2 (g-coordinates) -> (0, s^2 X, (s^2 - 1) X + k) in gbar."""
        s2 = self.s ** 2
        return self.pack(s2 * np.asarray(y), (s2 - 1) * self.split.to_p2c(y))

    def diag2(self, y) -> np.ndarray:
        """X in p2 -> (0, X, X + k), the p2-part of kbar."""
        return self.pack(y, self.split.to_p2c(y))

    def g_part(self, v) -> np.ndarray:
        return np.asarray(v)[: self.n_g]

    def c_part(self, v) -> np.ndarray:
        return np.asarray(v)[self.n_g:]

    def to_qbar(self, v) -> np.ndarray:
        """Model-basis coordinates of the qbar-component (along kbar)."""
        return self.qbar.coeffs(v)

    def to_kbar(self, v) -> np.ndarray:
        return self.kbar.coeffs(v)

    def orbit_differential(self) -> np.ndarray:
        """Matrix of (a, b) -> proj_q(a - b) from qbar model coordinates to q coordinates.

        This is the derivative at the identity of (g, hK) -> g h^-1 K.
        """
        cols = []
        for v in self.qbar.onb.T:
            cols.append(self.split.to_q(self.g_part(v) - self.split.from_p2c(self.c_part(v))))
        return np.array(cols).T


def build_bar_model(split: BundleSplit, s: float) -> BarModel:
    if not s > 0:
        raise ValueError(f"deformation parameter must be positive, got {s}")
    s = float(s)
    g = split.g
    N, n, d2 = g.matrix_size, g.dim, split.p2.dim
    p2c = quotient_copy(split)
    mats = []
    for b in g.basis:
        z = np.zeros((2 * N, 2 * N))
        z[:N, :N] = b
        mats.append(z)
    for b in p2c.basis:
        z = np.zeros((2 * N, 2 * N))
        z[N:, N:] = b
        mats.append(z)
    gbar = LieAlgebra.from_matrices(f"{g.family_tag}+h/k", mats, orthonormalize=False)

    s2 = s * s
    zc = np.zeros(d2)
    kb = [np.concatenate([v, zc]) for v in split.k.onb.T]
    kb += [np.concatenate([v, split.to_p2c(v)]) for v in split.p2.onb.T]
    qb = [np.concatenate([v, zc]) for v in split.p1.onb.T]
    qb += [np.concatenate([s2 * v, (s2 - 1) * split.to_p2c(v)]) for v in split.p2.onb.T]
    Kb = np.array(kb).T.reshape(n + d2, -1)
    Qb = np.array(qb).T.reshape(n + d2, -1)
    M = np.hstack([Kb, Qb])
    if M.shape[1] != n + d2 or np.linalg.matrix_rank(M) != n + d2:
        raise ConstructionError("kbar + qbar does not span gbar")
    Minv = np.linalg.inv(M)
    form = _frozen(Minv.T @ Minv)
    kbar = Subspace(_frozen(Kb), form)
    qbar = Subspace(_frozen(Qb), form)

    res = {
        "[kbar,kbar] in kbar": bracket_residual(gbar, kbar, kbar, kbar),
        "[kbar,qbar] in qbar": bracket_residual(gbar, kbar, qbar, qbar),
    }
    worst = max(res.values())
    if worst > TOL_ALG:
        raise ConstructionError(f"reductive model failed (residual {worst:.3e})", worst)
    return BarModel(split, s, gbar, p2c, kbar, qbar, form, res)


@dataclass(frozen=True, eq=False)
class MetricGs:
    """g_s on q (q-basis) and on qbar (model basis)."""

    s: float
    gram_q: np.ndarray
    gram_qbar: np.ndarray
    pullback_residual: float


def metric_gs(split: BundleSplit, s: float, bar: BarModel | None = None) -> MetricGs:
    if not s > 0:
        raise ValueError(f"deformation parameter must be positive, got {s}")
    s = float(s)
    g = split.g
    P1 = split.p1.onb @ split.p1.onb.T @ g.inner
    P2 = split.p2.onb @ split.p2.onb.T @ g.inner
    Q = split.q.onb
    gram_q = Q.T @ (P1.T @ g.inner @ P1 + s * s * P2.T @ g.inner @ P2) @ Q
    gram_q = 0.5 * (gram_q + gram_q.T)

    bar = bar if bar is not None else build_bar_model(split, s)
    if abs(bar.s - s) > 0:
        raise ValueError("bar model was built for a different s")
    D = bar.orbit_differential()
    gram_qbar = D.T @ gram_q @ D
    gram_qbar = 0.5 * (gram_qbar + gram_qbar.T)

    # the displayed identities: p1 block is g, cross terms vanish, p2 block is s^2 g
    d1 = split.p1.dim
    expected = np.zeros_like(gram_qbar)
    e1 = split.p1.onb.T @ g.inner @ split.p1.onb
    e2 = split.p2.onb.T @ g.inner @ split.p2.onb
    expected[:d1, :d1] = e1
    expected[d1:, d1:] = s * s * e2
    residual = float(np.abs(gram_qbar - expected).max()) if expected.size else 0.0
    if residual > TOL_LIN:
        raise ConstructionError(f"g_s pullback mismatch (residual {residual:.3e})", residual)
    return MetricGs(s, _frozen(gram_q), _frozen(gram_qbar), residual)


@dataclass(frozen=True)
class BracketFormulaReport:
    s: float
    seed: int
    samples: int
    residuals: dict
    escape: float
    coefficients: dict

    @property
    def max_residual(self) -> float:
        return max(max(self.residuals.values()), self.escape)


def _random_in(rng, sub: Subspace) -> np.ndarray:
    return sub.onb @ rng.standard_normal(sub.dim)


def bracket_formula_check(bar: BarModel, samples: int = 100, seed: int = 0) -> BracketFormulaReport:
    """Compare the three closed-form bracket identities with the generic gbar bracket."""
    split, gb, g = bar.split, bar.gbar, bar.split.g
    s2 = bar.s ** 2
    rng = np.random.default_rng(seed)
    worst = {"ad(X)Y": 0.0, "[X1,Y]_qbar": 0.0, "[Z,Y]_qbar": 0.0}
    escape = 0.0
    zc = np.zeros(split.p2.dim)
    p2 = split.p2
    for _ in range(samples):
        X0 = _random_in(rng, split.k)
        X1, Y1 = _random_in(rng, split.p1), _random_in(rng, split.p1)
        X2, Y2 = _random_in(rng, p2), _random_in(rng, p2)
        X = bar.pack(X0, zc) + bar.diag2(X2)
        Y = bar.pack(Y1, zc) + bar.embed2(Y2)
        Z = bar.embed2(X2)
        X1b = bar.pack(X1, zc)

        generic = gb.bracket(X, Y)
        proj = bar.qbar.project(generic)
        escape = max(escape, float(np.linalg.norm(generic - proj)))
        W = g.bracket(X2, Y2)
        Wc = split.to_p2c(W)
        closed = bar.pack(g.bracket(X0, Y1) + g.bracket(X2, Y1) + s2 * W, (s2 - 1) * Wc)
        worst["ad(X)Y"] = max(worst["ad(X)Y"], float(np.linalg.norm(proj - closed)))

        proj = bar.qbar.project(gb.bracket(X1b, Y))
        V = p2.project(g.bracket(X1, Y1))
        closed = bar.pack(s2 * g.bracket(X1, Y2) + s2 * V, (s2 - 1) * split.to_p2c(V))
        worst["[X1,Y]_qbar"] = max(worst["[X1,Y]_qbar"], float(np.linalg.norm(proj - closed)))

        proj = bar.qbar.project(gb.bracket(Z, Y))
        closed = bar.pack(s2 * g.bracket(X2, Y1) + s2 * (2 * s2 - 1) * W,
                          (s2 - 1) * (2 * s2 - 1) * Wc)
        worst["[Z,Y]_qbar"] = max(worst["[Z,Y]_qbar"], float(np.linalg.norm(proj - closed)))
    coeffs = {"p2 side of [Z,Y]": s2 * (2 * s2 - 1),
              "h/k side of [Z,Y]": (s2 - 1) * (2 * s2 - 1)}
    return BracketFormulaReport(bar.s, seed, samples, worst, escape, coeffs)

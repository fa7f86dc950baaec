"""Natural liftings of polar actions on G/H to (G/K, g_s).

Tangent vectors at a point xK are pulled back to 1K by left translation with
x^-1, which is a g_s-isometry; every tangent space below is therefore a
subspace of q in q-coordinates, orthonormal for ``metric.gram_q``.  The
action of (l, hK) is x K -> l x h^-1 K, so its orbit through xK pulls back to
proj_q(Ad(x^-1) l) plus -p2 (the gauge directions).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .bundle import BundleSplit, MetricGs, SymmetricPair, bracket_residual
from .lie import (TOL_ALG, TOL_LIN, LieAlgebra, Subspace, _frozen, null_space,
                  span_closure)


class HypothesisNotVerified(RuntimeError):
    """Polarity was requested for a section candidate that fails [m,m] in k."""


@dataclass(frozen=True, eq=False)
class ActionSpec:
    l: Subspace
    with_gauge: bool
    closed_residual: float = 0.0


def make_action(g: LieAlgebra, generators, with_gauge: bool = True) -> ActionSpec:
    gens = np.asarray(generators, dtype=float).reshape(g.dim, -1)
    l = Subspace.from_vectors(gens, g.inner)
    res = bracket_residual(g, l, l, l)
    if res > TOL_ALG:
        raise ValueError(f"acting algebra is not bracket-closed (residual {res:.3e})")
    return ActionSpec(l, with_gauge, res)


def _as_subspace(g: LieAlgebra, m) -> Subspace:
    if isinstance(m, Subspace):
        return m
    return Subspace.from_vectors(np.asarray(m, dtype=float).reshape(g.dim, -1), g.inner)


@dataclass(frozen=True)
class HypothesisResult:
    holds: bool
    residual: float


def check_theorem_hypothesis(split: BundleSplit, m) -> HypothesisResult:
    """Whether [m, m] lies in k; residual is the largest component outside k."""
    g = split.g
    m = _as_subspace(g, m)
    if split.p1.residual(m.onb) > TOL_LIN * 100:
        raise ValueError("m is not contained in p1")
    if m.dim == 0:
        return HypothesisResult(True, 0.0)
    br = g.brackets(m.onb, m.onb).reshape(g.dim, -1)
    res = split.k.residual(br) if split.k.dim else float(np.linalg.norm(br, axis=0).max())
    return HypothesisResult(res < TOL_ALG, res)


class SectionClosureError(ValueError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class SectionCandidate:
    m: Subspace
    s_alg: Subspace
    flat: bool
    bracket_span: Subspace
    escape: float = 0.0


def section_algebra(split: BundleSplit, m, strict: bool = True) -> SectionCandidate:
    """Lie algebra generated by m; in the good case it is m + [m, m] with no growth."""
    g = split.g
    m = _as_subspace(g, m)
    if split.p1.residual(m.onb) > TOL_LIN * 100:
        raise ValueError("m is not contained in p1")
    brs = g.brackets(m.onb, m.onb).reshape(g.dim, -1) if m.dim else np.zeros((g.dim, 0))
    mm = Subspace.from_vectors(brs, g.inner)
    naive = Subspace.from_vectors(np.hstack([m.onb, mm.onb]), g.inner)
    s_alg = span_closure(np.hstack([m.onb, brs]), g.bracket, g.inner)
    escape = naive.residual(s_alg.onb)
    if strict and (s_alg.dim != m.dim + mm.dim or escape > TOL_ALG):
        raise SectionClosureError(
            f"closure of m has dim {s_alg.dim}, expected dim m + dim [m,m] = {m.dim + mm.dim}",
            max(escape, 1.0))
    return SectionCandidate(m, s_alg, mm.dim == 0, mm, escape)


def maximal_abelian_in_p1(pair: SymmetricPair, seed: int | np.random.Generator = 0) -> Subspace:
    """Greedy maximal abelian subspace of p1 from a random start."""
    g, p1 = pair.g, pair.p1
    rng = np.random.default_rng(seed)
    cols = [p1.onb @ rng.standard_normal(p1.dim)]
    cols[0] /= np.sqrt(cols[0] @ g.inner @ cols[0])
    while True:
        M = np.array(cols).T
        # p1-coordinates of the centralizer of span(cols) inside p1
        C = null_space(np.vstack([g.ad(x) @ p1.onb for x in cols]))
        if C.shape[1] <= len(cols):
            break
        mc = p1.coeffs(M)
        y = C @ rng.standard_normal(C.shape[1])
        q, _ = np.linalg.qr(mc)
        y = y - q @ (q.T @ y)
        y = y / np.linalg.norm(y)
        cols.append(p1.onb @ y)
    return Subspace.from_vectors(np.array(cols).T, g.inner)


@dataclass(frozen=True, eq=False)
class SamplePoint:
    group_element: np.ndarray
    ad_inv: np.ndarray
    unitarity_residual: float


def sample_point(g: LieAlgebra, factors) -> SamplePoint:
    """The point exp(A_1) ... exp(A_j) for coordinate vectors A_i."""
    x = np.eye(g.matrix_size)
    for A in factors:
        x = x @ expm(g.matrix(A))
    unit = float(np.abs(x.T @ x - np.eye(g.matrix_size)).max())
    if unit > TOL_LIN * 100:
        raise ValueError(f"sampled group element is not orthogonal (residual {unit:.3e})")
    xinv = x.T
    flat = g.basis.reshape(g.dim, -1).T
    conj = np.einsum("ab,ibc,cd->iad", xinv, g.basis, x).reshape(g.dim, -1).T
    ad_inv = np.linalg.pinv(flat) @ conj
    return SamplePoint(_frozen(x), _frozen(ad_inv), unit)


def identity_point(g: LieAlgebra) -> SamplePoint:
    return sample_point(g, [])


def section_points(g: LieAlgebra, sc: SectionCandidate, n: int, seed: int,
                   factors: int = 2) -> list[SamplePoint]:
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(n):
        As = [sc.m.onb @ rng.standard_normal(sc.m.dim) for _ in range(factors)]
        pts.append(sample_point(g, As))
    return pts


def _tangent(split: BundleSplit, metric: MetricGs, vecs_q: np.ndarray) -> Subspace:
    return Subspace.from_vectors(vecs_q, metric.gram_q)


def orbit_tangent(split: BundleSplit, metric: MetricGs, action: ActionSpec,
                  at: SamplePoint) -> Subspace:
    vecs = split.to_q(at.ad_inv @ action.l.onb)
    if action.with_gauge:
        vecs = np.hstack([vecs, -split.to_q(split.p2.onb)])
    return _tangent(split, metric, vecs)


def section_tangent(split: BundleSplit, metric: MetricGs, sc: SectionCandidate,
                    at: SamplePoint) -> Subspace:
    return _tangent(split, metric, split.to_q(at.ad_inv @ sc.s_alg.onb))


def vertical_space(split: BundleSplit, metric: MetricGs) -> Subspace:
    return _tangent(split, metric, -split.to_q(split.p2.onb))


def _cross(A: Subspace, B: Subspace) -> float:
    if A.dim == 0 or B.dim == 0:
        return 0.0
    return float(np.linalg.norm(A.onb.T @ A.form @ B.onb, 2))


@dataclass(frozen=True)
class PolarityReport:
    orthogonality: float
    orbit_dims: list
    section_dims: list
    dim_q: int
    samples: int
    seed: int
    hypothesis: HypothesisResult

    @property
    def regular_dim(self) -> int:
        return max(self.orbit_dims)

    @property
    def regular_count(self) -> int:
        return sum(d == self.regular_dim for d in self.orbit_dims)

    @property
    def dims_ok(self) -> bool:
        return all(o + t == self.dim_q for o, t in zip(self.orbit_dims, self.section_dims)
                   if o == self.regular_dim)


def polarity_check(split: BundleSplit, metric: MetricGs, action: ActionSpec,
                   sc: SectionCandidate, n_samples: int = 20, seed: int = 0,
                   require_hypothesis: bool = True) -> PolarityReport:
    """Orthogonality of orbit and section tangents plus the transversality dimension count."""
    hyp = check_theorem_hypothesis(split, sc.m)
    if require_hypothesis and not hyp.holds:
        raise HypothesisNotVerified(
            f"[m,m] is not contained in k (residual {hyp.residual:.3e})")
    worst, odims, tdims = 0.0, [], []
    for pt in section_points(split.g, sc, n_samples, seed):
        O = orbit_tangent(split, metric, action, pt)
        T = section_tangent(split, metric, sc, pt)
        worst = max(worst, _cross(O, T))
        odims.append(O.dim)
        tdims.append(T.dim)
    return PolarityReport(worst, odims, tdims, split.q.dim, n_samples, seed, hyp)


@dataclass(frozen=True)
class HorizontalityReport:
    residual: float
    samples: int
    seed: int


def horizontality_check(split: BundleSplit, metric: MetricGs, sc: SectionCandidate,
                        n_samples: int = 20, seed: int = 0) -> HorizontalityReport:
    V = vertical_space(split, metric)
    worst = _cross(section_tangent(split, metric, sc, identity_point(split.g)), V)
    for pt in section_points(split.g, sc, n_samples, seed):
        worst = max(worst, _cross(section_tangent(split, metric, sc, pt), V))
    return HorizontalityReport(worst, n_samples, seed)


@dataclass(frozen=True)
class VerticalityReport:
    residuals: list = field(default_factory=list)
    regular_dim: int = 0
    with_gauge: bool = True

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    @property
    def contained(self) -> bool:
        return self.max_residual < TOL_ALG


def verticality_claim_check(split: BundleSplit, metric: MetricGs, action: ActionSpec,
                            sc: SectionCandidate, n_samples: int = 20,
                            seed: int = 0) -> VerticalityReport:
    """At regular samples, residual of the vertical space outside the orbit tangent."""
    V = vertical_space(split, metric)
    pts = section_points(split.g, sc, n_samples, seed)
    tangents = [orbit_tangent(split, metric, action, pt) for pt in pts]
    top = max(O.dim for O in tangents)
    res = [O.residual(V.onb) for O in tangents if O.dim == top]
    return VerticalityReport(res, top, action.with_gauge)


def corrupted_section(pair: SymmetricPair, m: Subspace, seed: int = 0,
                      strength: float = 0.5) -> Subspace:
    """A same-dimension subspace of p1 obtained by tilting m in random p1 directions."""
    rng = np.random.default_rng(seed)
    p1 = pair.p1
    tilt = p1.onb @ rng.standard_normal((p1.dim, m.dim))
    return Subspace.from_vectors(m.onb + strength * tilt, pair.g.inner)

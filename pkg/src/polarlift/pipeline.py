"""Run the verification claims for one corpus entry at one value of s."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import holonomy as hol
from .bundle import (bracket_formula_check, build_bar_model, make_symmetric_pair,
                     metric_gs, split_isotropy)
from .classical import diagonal_torus, named_isotropy, real_part_mask
from .corpus import CorpusEntry, resolve_k
from .lie import ConstructionError, Subspace
from .polar import (HypothesisNotVerified, SectionClosureError, check_theorem_hypothesis,
                    corrupted_section, horizontality_check, make_action,
                    maximal_abelian_in_p1, polarity_check, section_algebra,
                    verticality_claim_check)

log = logging.getLogger(__name__)

CLAIMS = ("algebra", "pair", "split", "brackets", "reductive", "irreducible",
          "transvection", "fixed-set", "center", "lift-hyperpolar", "vertical",
          "lift-section")

TOLERANCES = {
    "algebra": 1e-10, "pair": 1e-10, "split": 1e-10, "brackets": 1e-10,
    "reductive": 1e-10, "irreducible": 1e-10, "transvection": 0.0,
    "fixed-set": 1e-10, "center": 1e-10, "lift-hyperpolar": 1e-8,
    "vertical": 1e-10, "lift-section": 1e-8,
}
INVARIANT_SUBSPACE_TOL = 1e-8


@dataclass
class ClaimRecord:
    claim: str
    verdict: str  # pass | fail | skip | rejected
    residual: float = 0.0
    tolerance: float = 0.0
    dimensions: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    samples: int = 0
    detail: str = ""


@dataclass
class VerificationReport:
    entry_id: str
    s: float
    seed: int
    normalization: dict
    claims: list
    wall_time: float | None = None

    @property
    def rejected(self) -> bool:
        return any(c.verdict == "rejected" for c in self.claims)

    @property
    def failed(self) -> bool:
        return any(c.verdict == "fail" for c in self.claims)

    @property
    def passed(self) -> bool:
        return not (self.rejected or self.failed)


def _dims_match(found: dict, expected: dict) -> list[str]:
    return [f"{k}: expected {expected[k]}, got {found[k]}"
            for k in expected if k in found and found[k] != expected[k]]


class _Run:
    """State threaded through the claims of one (entry, s) run."""

    def __init__(self, entry: CorpusEntry, s: float, seed: int, samples: int,
                 tol: float | None):
        self.entry, self.s, self.seed, self.samples, self.tol = entry, s, seed, samples, tol
        self.records: dict[str, ClaimRecord] = {}
        self.iso = self.pair = self.split = self.bar = self.metric = None
        self.blocked: str | None = None
        self._m = None

    def tolerance(self, claim: str) -> float:
        return TOLERANCES.get(claim, 0.0) if self.tol is None else self.tol

    def expect(self, *names) -> dict:
        return {n: self.entry.expected[n] for n in names if n in self.entry.expected}

    def record(self, claim, ok, residual, dims=None, expected=None, samples=0, detail=""):
        rec = ClaimRecord(claim, "pass" if ok else "fail", float(residual),
                          self.tolerance(claim), dict(dims or {}), dict(expected or {}),
                          samples, detail)
        self.records[claim] = rec
        return rec

    # construction stages -------------------------------------------------
    def build(self, upto: str):
        e = self.entry
        if self.iso is None:
            self.iso = named_isotropy(e.family, e.h_spec, e.params)
        if upto == "algebra" or self.blocked:
            return
        if self.pair is None:
            try:
                self.pair = make_symmetric_pair(self.iso.g, self.iso.h_generators)
            except ConstructionError as exc:
                self._reject("pair", exc)
                return
        if upto == "pair":
            return
        if self.split is None:
            names = resolve_k(e, self.iso.factors, self.iso.extra)
            table = {**self.iso.factors, **self.iso.extra}
            gens = (np.hstack([table[n] for n in names]) if names
                    else np.zeros((self.iso.g.dim, 0)))
            try:
                self.split = split_isotropy(self.pair, gens)
            except ConstructionError as exc:
                self._reject("split", exc)
                return
        if upto == "split":
            return
        if self.bar is None:
            try:
                self.bar = build_bar_model(self.split, self.s)
                self.metric = metric_gs(self.split, self.s, self.bar)
            except ConstructionError as exc:
                self._reject("model", exc)

    def _reject(self, claim, exc):
        self.blocked = claim
        self.records[claim] = ClaimRecord(claim, "rejected", float(exc.residual),
                                          self.tolerance(claim), {}, {}, 0, str(exc))

    def maximal_abelian(self) -> Subspace:
        if self._m is None:
            self._m = maximal_abelian_in_p1(self.pair, self.seed)
        return self._m

    # claims --------------------------------------------------------------
    def algebra(self):
        g = self.iso.g
        res = max(g.jacobi_residual(), g.invariance_residual())
        dims = {"g": g.dim}
        exp = self.expect("dim_g") and {"g": self.entry.expected["dim_g"]}
        bad = _dims_match(dims, exp)
        self.record("algebra", res < self.tolerance("algebra") and not bad, res, dims, exp,
                    detail="; ".join(bad))

    def pair_claim(self):
        d = {"h": self.pair.h.dim, "p1": self.pair.p1.dim}
        exp = {k[4:]: v for k, v in self.expect("dim_h", "dim_p1").items()}
        res = max(self.pair.residuals.values())
        bad = _dims_match(d, exp)
        self.record("pair", res < self.tolerance("pair") and not bad, res, d, exp,
                    detail="; ".join(bad))

    def split_claim(self):
        d = {k: v for k, v in self.split.dims.items() if k in ("k", "p2", "q")}
        exp = {k[4:]: v for k, v in self.expect("dim_k", "dim_p2", "dim_q").items()}
        res = max(self.split.residuals.values())
        bad = _dims_match(d, exp)
        self.record("split", res < self.tolerance("split") and not bad, res, d, exp,
                    detail="; ".join(bad))

    def brackets(self):
        n = 100
        rep = bracket_formula_check(self.bar, n, self.seed)
        detail = ", ".join(f"{k}={v:.3e}" for k, v in rep.residuals.items())
        self.record("brackets", rep.max_residual < self.tolerance("brackets"),
                    rep.max_residual, samples=n, detail=detail)

    def reductive(self):
        nr = hol.natural_reductivity_check(self.bar, self.metric)
        res = max(nr["max"], self.metric.pullback_residual)
        self.record("reductive", res < self.tolerance("reductive"), res,
                    {"qbar": self.bar.qbar.dim, "kbar": self.bar.kbar.dim,
                     "gbar": self.bar.gbar.dim},
                    detail=f"qbar={nr['qbar']:.3e}, kbar={nr['kbar']:.3e}, "
                           f"pullback={self.metric.pullback_residual:.3e}")

    def irreducible(self):
        hs = hol.holonomy_algebra(self.bar, self.metric)
        verdict = hol.irreducibility_check(hs, self.metric, self.seed)
        want = self.entry.expected.get("irreducible", self.entry.simple)
        dims = {"holonomy": hs.dim, "commutant": verdict.commutant_dim,
                "invariant_subspaces": len(verdict.invariant_subspaces)}
        if want:
            res = max(hs.skew_residual, hs.closed_residual)
            ok = verdict.irreducible and res < self.tolerance("irreducible")
            detail = f"skew={hs.skew_residual:.3e}, closure={hs.closed_residual:.3e}"
        else:
            res = verdict.invariance_residual
            ok = (not verdict.irreducible and verdict.commutant_dim >= 2
                  and res < INVARIANT_SUBSPACE_TOL)
            detail = "invariant subspaces of dims " + ",".join(
                str(v.dim) for v in verdict.invariant_subspaces)
        self.record("irreducible", ok, res, dims, {"irreducible": want}, detail=detail)

    def transvection(self):
        tr = hol.transvection_algebra(self.bar)
        g, gbar = self.split.g.dim, self.bar.gbar.dim
        if self.s == 1.0:
            want = self.entry.expected.get("transvection_s1", g if self.entry.simple else None)
        else:
            want = self.entry.expected.get("transvection", gbar if self.entry.simple else None)
        dims = {"transvection": tr.dim, "g": g, "gbar": gbar}
        if want is None:
            self.records["transvection"] = ClaimRecord(
                "transvection", "skip", 0.0, 0.0, dims, {},
                detail="no expectation for non-simple G")
            return
        self.record("transvection", tr.dim == want, abs(tr.dim - want), dims,
                    {"transvection": want})

    def fixed_set(self):
        fs = hol.fixed_set_adk(self.split)
        target = "q" if self.entry.k_trivial else "p2"
        res = fs.residual_q if target == "q" else fs.residual_p2
        ok = fs.equals_q if target == "q" else fs.equals_p2
        dims = {"F": fs.F.dim, "p2": self.split.p2.dim, "q": self.split.q.dim}
        self.record("fixed-set", ok, res, dims, {"F": target},
                    detail="vacuous (K trivial)" if fs.vacuous else "")

    def center(self):
        c = hol.center_check(self.bar)
        dims = {"center": c.dim, "center_hk": c.dim_hk}
        exp = {"center": self.entry.expected["dim_center"]} if "dim_center" in self.entry.expected else {}
        bad = _dims_match(dims, exp)
        ok = c.contained and c.dim == c.dim_hk and not bad
        self.record("center", ok, c.contained_residual, dims, exp, detail="; ".join(bad))

    def _lift(self, claim, m, action_l, strict):
        e = self.entry
        split, metric = self.split, self.metric
        act = make_action(split.g, action_l, with_gauge=True)
        hyp = check_theorem_hypothesis(split, m)
        sc = section_algebra(split, m, strict=strict and hyp.holds)
        pol = polarity_check(split, metric, act, sc, self.samples, self.seed,
                             require_hypothesis=False)
        hz = horizontality_check(split, metric, sc, self.samples, self.seed)
        res = max(pol.orthogonality, hz.residual, hyp.residual)
        dims = {"m": m.dim, "s_alg": sc.s_alg.dim, "orbit": pol.regular_dim, "q": split.q.dim,
                "regular_samples": pol.regular_count}
        ok = hyp.holds and pol.dims_ok and res < self.tolerance(claim)
        exp = {}
        if claim == "lift-hyperpolar" and "rank" in e.expected:
            exp = {"m": e.expected["rank"]}
            ok = ok and m.dim == e.expected["rank"]
        detail = (f"hypothesis={'holds' if hyp.holds else 'fails'} ({hyp.residual:.3e}), "
                  f"orthogonality={pol.orthogonality:.3e}, horizontal={hz.residual:.3e}, "
                  f"dims_add={'yes' if pol.dims_ok else 'no'}")
        self.record(claim, ok, res, dims, exp, self.samples, detail)

    def lift_hyperpolar(self):
        self._lift("lift-hyperpolar", self.maximal_abelian(), self.pair.h.onb, strict=True)

    def vertical(self):
        split, metric = self.split, self.metric
        m = self.maximal_abelian()
        sc = section_algebra(split, m)
        lifted = verticality_claim_check(split, metric, make_action(split.g, self.pair.h.onb, True),
                                         sc, self.samples, self.seed)
        base = verticality_claim_check(split, metric, make_action(split.g, self.pair.h.onb, False),
                                       sc, self.samples, self.seed)
        self.record("vertical", lifted.max_residual < self.tolerance("vertical"),
                    lifted.max_residual, {"orbit": lifted.regular_dim,
                                          "regular_samples": len(lifted.residuals)},
                    samples=self.samples,
                    detail=f"base action without gauge: {base.max_residual:.3e}")

    def lift_section(self):
        e = self.entry
        if e.section is None:
            self.records["lift-section"] = ClaimRecord("lift-section", "skip", 0.0, 0.0,
                                                       detail="entry has no section")
            return
        g = self.split.g
        if e.section == "real":
            p1 = self.pair.p1
            m = Subspace.from_vectors(real_part_mask(g, e.family) @ p1.onb, g.inner)
        else:
            m = corrupted_section(self.pair, self.maximal_abelian(), self.seed)
        if e.action == "torus":
            action_l = diagonal_torus(g, g.matrix_size // 2)
        else:
            action_l = self.pair.h.onb
        self._lift("lift-section", m, action_l, strict=e.section == "real")


_ORDER = {
    "algebra": ("algebra", "algebra"),
    "pair": ("pair", "pair_claim"),
    "split": ("split", "split_claim"),
    "brackets": ("bar", "brackets"),
    "reductive": ("bar", "reductive"),
    "irreducible": ("bar", "irreducible"),
    "transvection": ("bar", "transvection"),
    "fixed-set": ("split", "fixed_set"),
    "center": ("bar", "center"),
    "lift-hyperpolar": ("bar", "lift_hyperpolar"),
    "vertical": ("bar", "vertical"),
    "lift-section": ("bar", "lift_section"),
}


def run_pipeline(entry: CorpusEntry, claims=CLAIMS, seed: int = 0, s: float | None = None,
                 samples: int = 20, tol: float | None = None) -> VerificationReport:
    if entry.skip:
        raise ValueError(f"entry {entry.id} is marked skip: {entry.skip}")
    unknown = [c for c in claims if c not in CLAIMS]
    if unknown:
        raise ValueError(f"unknown claims: {', '.join(unknown)}")
    s = entry.s_values[0] if s is None else float(s)
    claims = [c for c in CLAIMS if c in claims]
    start = time.perf_counter()
    run = _Run(entry, s, seed, samples, tol)
    for claim in claims:
        stage, method = _ORDER[claim]
        run.build(stage)
        if claim in run.records:
            continue
        if run.blocked:
            run.records[claim] = ClaimRecord(claim, "skip", 0.0, run.tolerance(claim),
                                             detail=f"upstream {run.blocked} rejected")
            continue
        log.debug("%s s=%g: %s", entry.id, s, claim)
        try:
            getattr(run, method)()
        except (SectionClosureError, HypothesisNotVerified) as exc:
            run.records[claim] = ClaimRecord(claim, "fail", float(getattr(exc, "residual", 1.0)),
                                             run.tolerance(claim), detail=str(exc))
    # rejection records can be produced for stages that were not requested
    records = [run.records[c] for c in claims]
    extra = [r for c, r in run.records.items() if c not in claims and r.verdict == "rejected"]
    g = run.iso.g
    return VerificationReport(entry.id, s, seed, dict(g.normalization), records + extra,
                              time.perf_counter() - start)

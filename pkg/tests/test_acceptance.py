"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are repeated
in the terminal summary under "acceptance criteria".
"""
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, corpus_entries, entry_model, entry_split, runnable_entries
from polarlift import holonomy as hol
from polarlift.bundle import bracket_formula_check
from polarlift.classical import diagonal_torus, named_isotropy, real_part_mask
from polarlift.cli import main
from polarlift.corpus import default_corpus_path, load_corpus
from polarlift.lie import Subspace
from polarlift.pipeline import run_pipeline
from polarlift.polar import (horizontality_check, make_action, maximal_abelian_in_p1,
                             polarity_check, section_algebra, verticality_claim_check)
from polarlift.report import parse_structured

S_ALL = (0.5, 1 / math.sqrt(2), 1.0, 2.0)


def verdict(number: int, title: str, ok: bool, summary: str):
    line = f"criterion {number:>2} {title:<26} {'PASS' if ok else 'FAIL'}  {summary}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def simple_ids():
    return [e for e in runnable_entries() if corpus_entries()[e].simple]


def test_criterion_01_algebra_axioms():
    worst, slowest = 0.0, 0.0
    for entry in runnable_entries():
        e = corpus_entries()[entry]
        t0 = time.perf_counter()
        g = named_isotropy(e.family, e.h_spec, e.params).g
        res = max(g.jacobi_residual(), g.invariance_residual())
        slowest = max(slowest, time.perf_counter() - t0)
        worst = max(worst, res)
    verdict(1, "algebra axioms", worst < 1e-10 and slowest < 5.0,
            f"max residual {worst:.2e} (< 1e-10), slowest algebra {slowest:.2f} s (< 5 s)")


def test_criterion_02_cartan_and_split():
    worst, mismatches = 0.0, []
    for entry in runnable_entries():
        e = corpus_entries()[entry]
        split = entry_split(entry)
        worst = max(worst, *split.pair.residuals.values(), *split.residuals.values())
        found = {"dim_h": split.h.dim, "dim_p1": split.p1.dim, "dim_k": split.k.dim,
                 "dim_p2": split.p2.dim, "dim_q": split.q.dim}
        mismatches += [f"{entry}.{k}" for k, v in found.items() if e.expected.get(k) != v]
    verdict(2, "Cartan and split relations", worst < 1e-10 and not mismatches,
            f"max residual {worst:.2e}, dimension mismatches: {mismatches or 'none'}")


def test_criterion_03_bracket_formulas():
    worst, runs = 0.0, 0
    for entry in runnable_entries():
        for s in S_ALL:
            _, bar, _ = entry_model(entry, s)
            worst = max(worst, bracket_formula_check(bar, 100, seed=0).max_residual)
            runs += 1
    verdict(3, "bracket formulas", worst < 1e-10,
            f"max discrepancy {worst:.2e} over {runs} (entry, s) runs x 100 samples, "
            f"s in {{0.5, 1/sqrt(2), 1, 2}}")


def test_criterion_04_natural_reductivity():
    worst = 0.0
    for entry in runnable_entries():
        for s in (0.5, 1.0, 2.0):
            _, bar, metric = entry_model(entry, s)
            worst = max(worst, hol.natural_reductivity_check(bar, metric)["max"])
    verdict(4, "natural reductivity", worst < 1e-10, f"max skew residual {worst:.2e}")


def test_criterion_05_irreducibility():
    bad, slowest, control = [], 0.0, None
    for entry in runnable_entries():
        t0 = time.perf_counter()
        for s in (0.5, 2.0):
            _, bar, metric = entry_model(entry, s)
            v = hol.irreducibility_check(hol.holonomy_algebra(bar, metric), metric)
            if corpus_entries()[entry].simple:
                if v.commutant_dim != 1:
                    bad.append(f"{entry}@{s}: commutant {v.commutant_dim}")
            else:
                ok = (v.commutant_dim >= 2 and v.invariant_subspaces
                      and v.invariance_residual < 1e-8)
                control = (v.commutant_dim, [u.dim for u in v.invariant_subspaces],
                           v.invariance_residual)
                if not ok:
                    bad.append(f"{entry}@{s}: control not split")
        slowest = max(slowest, time.perf_counter() - t0)
    ok = not bad and control is not None and slowest < 30.0
    verdict(5, "local irreducibility", ok,
            f"simple entries commutant 1; control commutant {control[0]}, subspaces "
            f"{control[1]}, residual {control[2]:.1e}; slowest entry {slowest:.2f} s; "
            f"problems: {bad or 'none'}")


def test_criterion_06_transvection_dichotomy():
    bad = []
    for entry in simple_ids():
        for s in (0.5, 1.0, 2.0):
            _, bar, _ = entry_model(entry, s)
            want = bar.n_g if s == 1.0 else bar.gbar.dim
            got = hol.transvection_algebra(bar).dim
            if got != want:
                bad.append(f"{entry}@{s}: {got} != {want}")
    verdict(6, "transvection dichotomy", not bad,
            f"{len(simple_ids())} simple entries at s = 0.5, 1, 2; mismatches: {bad or 'none'}")


def test_criterion_07_fixed_set():
    bad, worst = [], 0.0
    for entry in simple_ids():
        split = entry_split(entry)
        rep = hol.fixed_set_adk(split)
        if split.k.dim:
            worst = max(worst, rep.residual_p2)
            if not rep.equals_p2:
                bad.append(entry)
    berger = hol.fixed_set_adk(entry_split("berger-su2"))
    ok = not bad and berger.equals_q and worst < 1e-10
    verdict(7, "fixed set", ok,
            f"F = p2 for nontrivial K (max residual {worst:.2e}), F = q for trivial K: "
            f"{berger.equals_q}; failures: {bad or 'none'}")


def _lift(split, metric, m, action_l):
    act = make_action(split.g, action_l)
    sc = section_algebra(split, m)
    pol = polarity_check(split, metric, act, sc, 20, 0)
    hz = horizontality_check(split, metric, sc, 20, 0)
    exact = all(o + sc.m.dim == split.q.dim for o in pol.orbit_dims if o == pol.regular_dim)
    return max(pol.orthogonality, hz.residual), exact and pol.dims_ok


def test_criterion_08_lifted_polarity():
    worst, bad = 0.0, []
    for entry in runnable_entries():
        for s in (0.5, 1.0, 2.0):
            split, _, metric = entry_model(entry, s)
            m = maximal_abelian_in_p1(split.pair, 0)
            res, exact = _lift(split, metric, m, split.h.onb)
            worst = max(worst, res)
            if not exact or res >= 1e-8:
                bad.append(f"{entry}@{s}")
    section_res = 0.0
    for s in (0.5, 2.0):
        split, _, metric = entry_model("su3-cp2", s)
        g = split.g
        m = Subspace.from_vectors(real_part_mask(g, "su") @ split.p1.onb, g.inner)
        res, exact = _lift(split, metric, m, diagonal_torus(g, 3))
        section_res = max(section_res, res)
        if not exact or res >= 1e-8:
            bad.append(f"cp2-real@{s}")
    verdict(8, "lifted polarity", not bad,
            f"hyperpolar max residual {worst:.2e}, nonflat real section {section_res:.2e} "
            f"(< 1e-8), dims exact; failures: {bad or 'none'}")


def test_criterion_09_verticality():
    worst = 0.0
    for entry in runnable_entries():
        for s in (0.5, 2.0):
            split, _, metric = entry_model(entry, s)
            sc = section_algebra(split, maximal_abelian_in_p1(split.pair, 0))
            rep = verticality_claim_check(split, metric, make_action(split.g, split.h.onb),
                                          sc, 20, 0)
            worst = max(worst, rep.max_residual)
    verdict(9, "verticality", worst < 1e-10, f"max residual at regular samples {worst:.2e}")


def test_criterion_10_negative_controls(capsys):
    controls = {e.id: e for e in load_corpus(default_corpus_path("controls"))}
    path = str(default_corpus_path("controls"))
    nonideal = run_pipeline(controls["su4-so4-nonideal"], s=0.5)
    rej = next(c for c in nonideal.claims if c.verdict == "rejected")
    corrupted = run_pipeline(controls["su4-so4-corrupted"], s=0.5)
    bad = next(c for c in corrupted.claims if c.claim == "lift-section")
    clean = next(c for c in corrupted.claims if c.claim == "lift-hyperpolar")
    code_nonideal = main(["verify", "--corpus", path, "--entry", "su4-so4-nonideal"])
    code_corrupted = main(["verify", "--corpus", path, "--entry", "su4-so4-corrupted"])
    capsys.readouterr()
    separation = math.log10(bad.residual / max(clean.residual, 1e-300))
    ok = (rej.residual > 1e-2 and bad.verdict == "fail" and bad.residual > 1e-2
          and code_nonideal != 0 and code_corrupted != 0 and clean.verdict == "pass"
          and bad.residual / clean.tolerance >= 1e6)
    verdict(10, "negative controls", ok,
            f"non-ideal k residual {rej.residual:.2e} exit {code_nonideal}; corrupted section "
            f"residual {bad.residual:.2e} exit {code_corrupted}; separation from clean run "
            f"{separation:.1f} decades")


def test_criterion_11_determinism(tmp_path, capsys):
    outs = []
    for i in range(2):
        out = tmp_path / f"full{i}.json"
        code = main(["verify", "--format", "structured", "--out", str(out), "--seed", "0"])
        outs.append((code, out.read_bytes()))
    capsys.readouterr()
    reports = parse_structured(outs[0][1].decode())
    ok = outs[0][1] == outs[1][1] and outs[0][0] == outs[1][0] == 0
    verdict(11, "determinism", ok,
            f"two full-corpus runs ({len(reports)} reports, {len(outs[0][1])} bytes) "
            f"byte-identical: {outs[0][1] == outs[1][1]}; all claims pass: {outs[0][0] == 0}")


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_full_corpus_all_claims_pass(s):
    failing = []
    for entry in runnable_entries():
        rep = run_pipeline(corpus_entries()[entry], s=s)
        failing += [f"{entry}:{c.claim}" for c in rep.claims if c.verdict in ("fail", "rejected")]
    assert not failing
    assert np.isfinite(s)

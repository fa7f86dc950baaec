import math
import textwrap

import pytest

from conftest import entry_split, runnable_entries
from polarlift.corpus import CorpusError, default_corpus_path, load_corpus, parse_corpus, parse_s
from polarlift.pipeline import run_pipeline

GOOD = """
[DEFAULT]
s_values = 0.5, 2

[su3]
family = su
params = 2, 1
h = s(u(p)+u(q))
k = su(p)
expect.dim_q = 5
"""


def entry_text(**overrides):
    fields = {"family": "su", "params": "2, 1", "h": "s(u(p)+u(q))", "k": "su(p)",
              "s_values": "0.5"}
    fields.update(overrides)
    body = "\n".join(f"{k} = {v}" for k, v in fields.items() if v is not None)
    return f"[x]\n{body}\n"


def test_default_corpus_covers_classical_rows():
    entries = {e.id: e for e in load_corpus(default_corpus_path())}
    runnable = [e for e in entries.values() if not e.skip]
    assert len(runnable) >= 6
    assert {e.family for e in runnable} >= {"su", "so", "sp"}
    for row in ("su3-cp2", "su4-so4", "so5-so3", "so6-u3", "sp2-sp1sp1", "berger-su2"):
        assert row in entries and not entries[row].skip
    assert entries["berger-su2"].k_trivial
    skipped = [e for e in entries.values() if e.skip]
    assert skipped and all(e.skip == "unsupported-family" for e in skipped)
    assert any(not e.simple for e in runnable)


def test_default_s_values_include_degenerations():
    e = load_corpus(default_corpus_path())[1]
    assert any(abs(s - 1 / math.sqrt(2)) < 1e-15 for s in e.s_values)
    assert 1.0 in e.s_values


@pytest.mark.parametrize("entry", runnable_entries())
def test_expected_dimensions_match_construction(entry):
    from conftest import corpus_entries
    e = corpus_entries()[entry]
    split = entry_split(entry)
    found = {"dim_g": split.g.dim, "dim_h": split.h.dim, "dim_p1": split.p1.dim,
             "dim_k": split.k.dim, "dim_p2": split.p2.dim, "dim_q": split.q.dim}
    for key, val in found.items():
        assert e.expected[key] == val, key
    assert e.expected["dim_q"] == e.expected["dim_g"] - e.expected["dim_k"]


def test_parse_good_entry():
    (e,) = parse_corpus(GOOD)
    assert e.id == "su3" and e.params == (2, 1) and e.s_values == (0.5, 2.0)
    assert e.k_choice == ("su(p)",) and e.expected == {"dim_q": 5}


@pytest.mark.parametrize("token,value", [("0.5", 0.5), ("1/sqrt(2)", 1 / math.sqrt(2)),
                                         (" 2 ", 2.0), ("1/sqrt(4)", 0.5)])
def test_parse_s(token, value):
    assert parse_s(token) == pytest.approx(value, rel=1e-15)


@pytest.mark.parametrize("token", ["0", "-1", "nan", "inf", "abc", "1/sqrt(0)"])
def test_parse_s_rejects(token):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_s(token)


def test_zero_s_rejected_with_location():
    with pytest.raises(CorpusError) as info:
        parse_corpus(entry_text(s_values="0.5, 0"), "c.corpus")
    assert info.value.field_name == "s_values"
    assert info.value.line == 6
    assert "c.corpus:6" in str(info.value)


@pytest.mark.parametrize("override,field", [
    ({"k": "sp(p)"}, "k"),
    ({"k": "second, third"}, "k"),
    ({"family": "e"}, "family"),
    ({"h": "u(n)"}, "h"),
    ({"params": "two, 1"}, "params"),
    ({"params": "0, 1"}, "params"),
    ({"params": "2"}, "params"),
    ({"section": "imaginary"}, "section"),
    ({"action": "everything"}, "action"),
    ({"simple": "maybe"}, "simple"),
    ({"expect.dim_q": "-1"}, "expect.dim_q"),
    ({"expect.colour": "3"}, "expect.colour"),
    ({"k": None}, None),
])
def test_invalid_fields_rejected(override, field):
    with pytest.raises(CorpusError) as info:
        parse_corpus(entry_text(**override))
    assert info.value.field_name == field


def test_syntax_error_reports_line():
    with pytest.raises(CorpusError) as info:
        parse_corpus("[a]\nfamily = su\n[a]\nfamily = so\n")
    assert info.value.line == 3
    with pytest.raises(CorpusError):
        parse_corpus("family = su\n")


def test_skip_entries_need_no_params():
    (e,) = parse_corpus("[e8]\nfamily = e8\nh = e7\nskip = unsupported-family\n")
    assert e.skip == "unsupported-family"
    with pytest.raises(ValueError):
        run_pipeline(e)


def test_non_ideal_k_rejected_downstream():
    (e,) = load_corpus(default_corpus_path("controls"))[:1]
    assert e.k_choice == ("so(3)std",)
    rep = run_pipeline(e, s=0.5)
    rejected = [c for c in rep.claims if c.verdict == "rejected"]
    assert [c.claim for c in rejected] == ["split"]
    assert rejected[0].residual > 1e-2


def test_load_missing_file():
    with pytest.raises(OSError):
        load_corpus("/nonexistent/none.corpus")


def test_inline_comments_and_multiple_factors():
    text = textwrap.dedent("""
        [gr]
        family = su   # the unitary family
        params = 2, 2
        h = s(u(p)+u(q))
        k = su(p), u(1)
        s_values = 1/sqrt(2)
    """)
    (e,) = parse_corpus(text)
    assert e.family == "su" and e.k_choice == ("su(p)", "u(1)")

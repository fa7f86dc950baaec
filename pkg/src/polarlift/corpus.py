"""Corpus files: one INI-style section per bundle G/K -> G/H.

Grammar (see ``data/classical.corpus`` for a commented example)::

    [entry-id]
    family   = su | so | sp | su+su        (anything else needs ``skip``)
    params   = comma-separated integers, interpreted by ``h``
    h        = named isotropy construction, e.g. s(u(p)+u(q))
    k        = trivial | first | second | comma-separated factor names
    s_values = comma-separated positive reals; 1/sqrt(2) is accepted
    section  = real | corrupted            (optional, drives lift-section)
    action   = isotropy | torus            (optional, default isotropy)
    simple   = true | false                (default true)
    skip     = reason                      (entry is listed but not run)
    expect.<name> = integer or true/false

A ``[DEFAULT]`` section supplies values shared by all entries.
"""
from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .classical import ISOTROPY_SPECS, named_isotropy

EXPECT_INT = ("dim_g", "dim_h", "dim_p1", "dim_k", "dim_p2", "dim_q", "rank",
              "dim_center", "transvection", "transvection_s1")
EXPECT_BOOL = ("irreducible",)
SECTIONS = ("real", "corrupted")
ACTIONS = ("isotropy", "torus")


class CorpusError(ValueError):
    def __init__(self, message: str, path: str = "", line: int | None = None,
                 field_name: str | None = None):
        where = path
        if line is not None:
            where += f":{line}"
        if field_name:
            where += f" [{field_name}]"
        super().__init__(f"{where}: {message}" if where else message)
        self.line = line
        self.field_name = field_name


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    family: str
    params: tuple
    h_spec: str
    k_choice: tuple
    s_values: tuple
    expected: dict = field(default_factory=dict)
    section: str | None = None
    action: str = "isotropy"
    simple: bool = True
    skip: str | None = None
    line: int | None = None

    @property
    def k_trivial(self) -> bool:
        return len(self.k_choice) == 0


def default_corpus_path(name: str = "classical") -> Path:
    return Path(str(resources.files("polarlift") / "data" / f"{name}.corpus"))


_SQRT = re.compile(r"^1/sqrt\((\d+(?:\.\d*)?)\)$")


def parse_s(token: str) -> float:
    token = token.strip().replace(" ", "")
    m = _SQRT.match(token)
    value = 1.0 / math.sqrt(float(m.group(1))) if m else float(token)
    if not value > 0 or not math.isfinite(value):
        raise ValueError(f"s must be a positive real, got {token!r}")
    return value


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "1"):
        return True
    if t in ("false", "no", "0"):
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def _locate(lines: list[str], section: str, key: str | None) -> int | None:
    start = None
    for i, raw in enumerate(lines, 1):
        s = raw.strip()
        if s == f"[{section}]":
            start = i
            if key is None:
                return i
        elif start is not None and s.startswith("["):
            break
        elif start is not None and key and re.match(rf"^{re.escape(key)}\s*[=:]", s):
            return i
    return start


def resolve_k(entry: CorpusEntry, factors: dict, extra: dict) -> list[str]:
    names = list(factors)
    out = []
    for name in entry.k_choice:
        if name == "first":
            out.append(names[0])
        elif name == "second":
            if len(names) < 2:
                raise ValueError("h has no second factor")
            out.append(names[1])
        elif name in factors or name in extra:
            out.append(name)
        else:
            raise ValueError(f"unknown factor {name!r}; h has {names + list(extra)}")
    return out


def _entry(cp: configparser.ConfigParser, sec: str, lines: list[str], path: str) -> CorpusEntry:
    body = cp[sec]

    def fail(msg, key=None):
        raise CorpusError(msg, path, _locate(lines, sec, key), key)

    def get(key, required=True):
        if key not in body:
            if required:
                fail(f"missing field {key!r}", None)
            return None
        return body[key].strip()

    skip = get("skip", required=False)
    family = get("family")
    if skip:
        return CorpusEntry(sec, family, (), get("h", required=False) or "", (), (),
                           skip=skip, line=_locate(lines, sec, None))
    h_spec = get("h")
    try:
        params = tuple(int(t) for t in get("params").split(","))
    except ValueError:
        fail("params must be comma-separated integers", "params")
    if (family, h_spec) not in ISOTROPY_SPECS:
        known = sorted({f for f, _ in ISOTROPY_SPECS})
        if family not in known:
            fail(f"unsupported family {family!r} (known: {', '.join(known)})", "family")
        fail(f"no isotropy construction {h_spec!r} for family {family!r}", "h")
    try:
        s_values = tuple(parse_s(t) for t in get("s_values").split(","))
    except ValueError as exc:
        fail(str(exc), "s_values")
    k_raw = get("k")
    k_choice = () if k_raw == "trivial" else tuple(t.strip() for t in k_raw.split(","))

    expected = {}
    for key, value in body.items():
        if not key.startswith("expect."):
            continue
        name = key[len("expect."):]
        try:
            if name in EXPECT_INT:
                expected[name] = int(value)
                if expected[name] < 0:
                    raise ValueError("dimensions are nonnegative")
            elif name in EXPECT_BOOL:
                expected[name] = _bool(value)
            else:
                raise ValueError(f"unknown expectation {name!r}")
        except ValueError as exc:
            fail(str(exc), key)

    section = get("section", required=False)
    if section is not None and section not in SECTIONS:
        fail(f"section must be one of {SECTIONS}", "section")
    action = get("action", required=False) or "isotropy"
    if action not in ACTIONS:
        fail(f"action must be one of {ACTIONS}", "action")
    try:
        simple = _bool(get("simple", required=False) or "true")
    except ValueError as exc:
        fail(str(exc), "simple")

    entry = CorpusEntry(sec, family, params, h_spec, k_choice, s_values, expected,
                        section, action, simple, None, _locate(lines, sec, None))
    try:
        iso = named_isotropy(family, h_spec, params)
    except ValueError as exc:
        fail(str(exc), "params")
    try:
        resolve_k(entry, iso.factors, iso.extra)
    except ValueError as exc:
        fail(f"invalid k_choice: {exc}", "k")
    return entry


def load_corpus(path) -> list[CorpusEntry]:
    path = str(path)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_corpus(text, path)


def parse_corpus(text: str, path: str = "<corpus>") -> list[CorpusEntry]:
    lines = text.splitlines()
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read_string(text, source=path)
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        if line is None and getattr(exc, "errors", None):
            line = exc.errors[0][0]
        raise CorpusError(exc.message.splitlines()[0], path, line) from exc
    return [_entry(cp, sec, lines, path) for sec in cp.sections()]

"""Numerical verification of polar actions lifted to homogeneous bundles G/K -> G/H
over compact symmetric spaces, with the one-parameter family of metrics g_s."""
from .bundle import (build_bar_model, bracket_formula_check, make_symmetric_pair, metric_gs,
                     split_isotropy)
from .classical import build_classical, named_isotropy
from .corpus import CorpusEntry, CorpusError, default_corpus_path, load_corpus
from .lie import ConstructionError, LieAlgebra, Subspace
from .pipeline import CLAIMS, VerificationReport, run_pipeline
from .report import emit_report, parse_structured

__version__ = "0.1.0"

__all__ = [
    "CLAIMS", "ConstructionError", "CorpusEntry", "CorpusError", "LieAlgebra", "Subspace",
    "VerificationReport", "bracket_formula_check", "build_bar_model", "build_classical",
    "default_corpus_path", "emit_report", "load_corpus", "make_symmetric_pair", "metric_gs",
    "named_isotropy", "parse_structured", "run_pipeline", "split_isotropy",
]

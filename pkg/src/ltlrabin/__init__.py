"""Translation of an LTL fragment to deterministic Rabin automata."""

from .errors import (
    AlphabetMismatch, LTLSyntaxError, NegationNotEliminable, NotMmaa, ResourceCapExceeded,
    StructureViolation, TranslationError, UnsupportedCombination, UnsupportedFragment,
)
from .ltl import Formula, FragmentClass, classify_fragment, eval_lasso, parse, simplify_formula, to_positive_normal_form
from .oracle import EquivalenceReport, cross_check, enumerate_lassos
from .output import format_output
from .pipeline import Options, PipelineResult, run_pipeline
from .words import Alphabet, LassoWord

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "LassoWord", "Formula", "FragmentClass", "parse", "to_positive_normal_form",
    "simplify_formula", "classify_fragment", "eval_lasso", "Options", "PipelineResult",
    "run_pipeline", "format_output", "cross_check", "enumerate_lassos", "EquivalenceReport",
    "TranslationError", "LTLSyntaxError", "NegationNotEliminable", "UnsupportedFragment",
    "StructureViolation", "NotMmaa", "AlphabetMismatch", "ResourceCapExceeded",
    "UnsupportedCombination",
]

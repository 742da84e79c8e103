"""Pairwise comparison matrices, inconsistency indices and axiom falsification."""

__version__ = "0.1.0"

from .pcm import Pcm, new_pcm, from_upper, corner_matrix, random_consistent, random_pcm, verify_consistency_equivalences, verify_prop1
from .indices import IndexHandle, TriadGenerator, build_triad_index, lookup, registry
from .axioms import AxiomVerdict, CheckConfig, Witness, check, replay, search_triad_worsening
from .compliance import diff_report, expected_matrix, run_compliance
from .similarity import fig1_matrix, jaccard, published_similarity_matrix

__all__ = [
    "Pcm", "new_pcm", "from_upper", "corner_matrix", "random_consistent", "random_pcm", "verify_consistency_equivalences", "verify_prop1",
    "IndexHandle", "TriadGenerator", "build_triad_index", "lookup", "registry",
    "AxiomVerdict", "CheckConfig", "Witness", "check", "replay", "search_triad_worsening",
    "diff_report", "expected_matrix", "run_compliance",
    "published_similarity_matrix", "fig1_matrix", "jaccard",
]

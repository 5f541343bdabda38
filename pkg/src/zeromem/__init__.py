"""Zero-memory graph exploration with vertex colouring: simulator, strategies,
exhaustive adversarial verifier and colour-budget synthesis."""

from .adversary import Verdict, verify_all, verify_family, worst_case_colors
from .algorithms import cyclic_max, get_strategy
from .graph import Graph, GraphError, circumference, classify
from .model import STOP, Environment, Move, Strategy, mod1, observe, run, run_scripted
from .synthesis import SynthesisResult, enumerate_tables_oracle, refute_with_pruning, synthesize

__all__ = [
    "STOP", "Environment", "Graph", "GraphError", "Move", "Strategy", "SynthesisResult",
    "Verdict", "circumference", "classify", "cyclic_max", "enumerate_tables_oracle",
    "get_strategy", "mod1", "observe", "refute_with_pruning", "run", "run_scripted",
    "synthesize", "verify_all", "verify_family", "worst_case_colors",
]

"""
Testing Framework

Corpus loading, small program builders and solver doubles shared by the tests.
"""

from .corpus import CORPUS_DIR, DIFF_PROGRAMS, corpus_names, corpus_path, load_corpus
from .builders import counting_loop, single_function
from .solvers import CountingSolver, ScriptedSolver, requires_z3_binary

__all__ = [
    'CORPUS_DIR',
    'DIFF_PROGRAMS',
    'corpus_names',
    'corpus_path',
    'load_corpus',
    'counting_loop',
    'single_function',
    'CountingSolver',
    'ScriptedSolver',
    'requires_z3_binary',
]

"""DPLL solving of Boolean polynomial systems with XOR reasoning.

Main entry points: :func:`parse_anf`, :func:`to_cnf_xor`, :func:`solve`,
:func:`min_vertex_cover` and :func:`generate_instance`.
"""

from .anf import AnfEquation, AnfSystem, CnfXorFormula, XorClause, evaluate, format_anf, is_model, parse_anf, to_cnf_xor, xor_to_cnf
from .mvc import build_graph, min_vertex_cover
from .solver import SolveResult, SolverConfig, solve
from .weil import InstanceSpec, generate_instance

__version__ = "0.1.0"

"""Evolving graphs, dynamic min-cuts and reliable communication under Byzantine faults."""

from .classes import ClassQuery, Method, check_inclusion_theorems, is_member
from .cuts import UNBOUNDED, dyn_min_cut, dyn_min_cut_both
from .errors import DynRCError
from .generators import generate
from .graph import FiniteGraph, PeriodicGraph, TimeInterval, finite_graph, periodic_graph
from .journeys import earliest_arrival, enumerate_sigma, find_journey, journey_exists
from .hitting import min_hitting_set
from .sim import ANY, FailureSpec, RcInstance, Setting, predict_solvability, run_trial
from .tegio import load_teg, parse_teg, serialize_teg

__all__ = [
    "ANY", "ClassQuery", "DynRCError", "FailureSpec", "FiniteGraph", "Method", "PeriodicGraph",
    "RcInstance", "Setting", "TimeInterval", "UNBOUNDED", "check_inclusion_theorems", "dyn_min_cut",
    "dyn_min_cut_both", "earliest_arrival", "enumerate_sigma", "find_journey", "finite_graph",
    "generate", "is_member", "journey_exists", "load_teg", "min_hitting_set", "parse_teg",
    "periodic_graph", "predict_solvability", "run_trial", "serialize_teg",
]

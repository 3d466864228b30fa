"""State class graphs for P-Time and A-Time Petri nets under strong semantics."""
from .dbm import Dbm, convex_union, difference, enclosing
from .explorer import ExploreConfig, explore, stats
from .kernels import BACKEND
from .model import ANet, Interval, PNet, load_net, parse_net, translate_p_to_a

__version__ = "0.1.0"

__all__ = [
    "ANet", "BACKEND", "Dbm", "ExploreConfig", "Interval", "PNet", "convex_union", "difference",
    "enclosing", "explore", "load_net", "parse_net", "stats", "translate_p_to_a",
]

"""Simple-cycle-free labelings of K_{n,n} and independent sets in the Birkhoff polytope graph."""

from .birkhoff import BlockSystem, PermSet, adjacent, is_cycle, verify_independent
from .cycles import SimpleCycle, count_simple_cycles, enumerate_simple_cycles
from .errors import BudgetExceeded
from .labeling import Label, Labeling, construct_random, construct_recursive, cycle_sum, verify_cycle_free

__version__ = "0.1.0"

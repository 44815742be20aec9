"""Exact computations for GL_n over truncated polynomial rings F_q[eps]/(eps^r)."""

from .characters import CharacterSpec, ClassFunction, StageId, induce, verify_main_theorem, verify_stage_chain
from .free_algebra import FreeAlgebra, NCPoly
from .scalars import Cyclotomic
from .truncated_groups import GroupContext, TruncatedMatrix

__version__ = "0.1.0"

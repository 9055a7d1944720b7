"""Finite Minkowski planes from sharply 3-transitive permutation sets, with axiom and statement checkers."""

__version__ = "0.1.0"

from .axioms import check_axiom, check_hyperbola, check_rectangle, check_symmetry, check_touching, replay_witness
from .errors import *  # noqa: F401,F403
from .field import (
    FieldElement,
    GaloisField,
    MobiusMap,
    NearField9,
    ProjPoint,
    enumerate_permutation_set,
    field_arith,
    mobius_apply,
    projective_line,
)
from .permalg import (
    CirclePerm,
    PermTable,
    compose_resolve,
    decompose_involutions,
    f_of_circle,
    invert,
    perm_table,
    sharp3_certify,
    verify_statement4,
)
from .permset import PermutationSet
from .plane import Plane, build_from_permutation_set, bundle, circle_through, pencil, pq, tangent_circle, trace
from .report import CheckReport, render_reports
from .statements import STATEMENT_IDS, verify_statement
from .statements4 import STATEMENT4_IDS
from .symmetry import characteristic, circle_symmetry, orthogonal, symmetric_point

__all__ = [
    "CheckReport", "CirclePerm", "FieldElement", "GaloisField", "MobiusMap", "NearField9", "PermTable",
    "PermutationSet", "Plane", "ProjPoint", "STATEMENT4_IDS", "STATEMENT_IDS", "build_from_permutation_set",
    "bundle", "characteristic", "check_axiom", "check_hyperbola", "check_rectangle", "check_symmetry",
    "check_touching", "circle_symmetry", "circle_through", "compose_resolve", "decompose_involutions",
    "enumerate_permutation_set", "f_of_circle", "field_arith", "invert", "mobius_apply", "orthogonal", "pencil",
    "perm_table", "pq", "projective_line", "render_reports", "replay_witness", "sharp3_certify",
    "symmetric_point", "tangent_circle", "trace", "verify_statement", "verify_statement4",
]

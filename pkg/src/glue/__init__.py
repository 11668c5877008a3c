"""Max-gluing and the inductive q-convex construction."""

from src.glue.construct import (
    ConstructionLog,
    EmptyingSequence,
    build_q_convex,
    certify_constructed,
)
from src.glue.gluing import GlueRegion, choose_scaling, glue_pair
from src.glue.tree import ConstructedFunction, Leaf, MaxNode, evaluate_constructed

__all__ = [
    "ConstructedFunction",
    "ConstructionLog",
    "EmptyingSequence",
    "GlueRegion",
    "Leaf",
    "MaxNode",
    "build_q_convex",
    "certify_constructed",
    "choose_scaling",
    "evaluate_constructed",
    "glue_pair",
]

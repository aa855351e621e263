"""Decision procedures for extending typical actions of countable abelian
groups, and an exact simulator of finite block-permutation actions."""
from .grammar import ParseError, format_group, parse_group
from .group_model import (
    OMEGA,
    GroupDesc,
    GroupError,
    MultiplicityMap,
    PrimePower,
    UnboundedGroupError,
    bounded_split,
    direct_sum,
    exponent,
    group,
    m_bar,
    multiply,
    normalize,
)

__version__ = "0.1.0"

__all__ = [
    "OMEGA",
    "GroupDesc",
    "GroupError",
    "MultiplicityMap",
    "ParseError",
    "PrimePower",
    "UnboundedGroupError",
    "bounded_split",
    "direct_sum",
    "exponent",
    "format_group",
    "group",
    "m_bar",
    "multiply",
    "normalize",
    "parse_group",
]

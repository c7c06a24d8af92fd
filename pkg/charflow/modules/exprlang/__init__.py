"""Expression language module."""

from charflow.modules.exprlang.services.dual import Dual2
from charflow.modules.exprlang.services.field_file import FieldDefinition, load_field_file, parse_field_file
from charflow.modules.exprlang.services.nodes import Expr, eval_dual, evaluate, to_source, variables
from charflow.modules.exprlang.services.parser import parse

__all__ = [
    "Dual2",
    "Expr",
    "FieldDefinition",
    "eval_dual",
    "evaluate",
    "load_field_file",
    "parse",
    "parse_field_file",
    "to_source",
    "variables",
]

"""Field definition files: one `key = expression` per line, '#' starts a comment line."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Union

from charflow.core.exceptions import ExprSyntaxError, FieldFileError
from charflow.modules.exprlang.services.nodes import Expr
from charflow.modules.exprlang.services.parser import parse

logger = logging.getLogger(__name__)

GRAPH_KEYS = ("u", "F1", "F2")
DIRECT_KEYS = ("theta", "H")


@dataclass(frozen=True)
class FieldDefinition:
    """Parsed field file: graph mode (u, F1, F2) or direct mode (theta, optional H)."""

    mode: str
    exprs: Dict[str, Expr] = field(default_factory=dict)
    source: Optional[str] = None

    def get(self, key: str) -> Optional[Expr]:
        return self.exprs.get(key)


def parse_field_file(text: str, source: Optional[str] = None) -> FieldDefinition:
    exprs: Dict[str, Expr] = {}
    lines: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FieldFileError(lineno, "expected 'key = expression'")
        key, _, body = line.partition("=")
        key = key.strip()
        if key not in GRAPH_KEYS + DIRECT_KEYS:
            raise FieldFileError(lineno, f"unknown key {key!r}")
        if key in exprs:
            raise FieldFileError(lineno, f"duplicate key {key!r} (first on line {lines[key]})")
        try:
            exprs[key] = parse(body.strip())
        except ExprSyntaxError as e:
            raise FieldFileError(lineno, f"{key}: {e.message}") from e
        lines[key] = lineno

    has_graph = any(k in exprs for k in GRAPH_KEYS)
    has_direct = any(k in exprs for k in DIRECT_KEYS)
    if has_graph and has_direct:
        raise FieldFileError(0, "mixes graph keys (u, F1, F2) with direct keys (theta, H)")
    if has_direct:
        if "theta" not in exprs:
            raise FieldFileError(0, "direct mode needs a 'theta' line")
        mode = "direct"
    else:
        missing = [k for k in GRAPH_KEYS if k not in exprs]
        if missing:
            raise FieldFileError(0, f"graph mode is missing {', '.join(missing)}")
        mode = "graph"
    logger.debug(f"Parsed {mode} field definition with keys {sorted(exprs)}")
    return FieldDefinition(mode=mode, exprs=exprs, source=source)


def load_field_file(path: Union[str, Path]) -> FieldDefinition:
    path = Path(path)
    return parse_field_file(path.read_text(encoding="utf-8"), source=str(path))

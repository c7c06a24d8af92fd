"""Expression tree nodes and their dual-number evaluation."""

import math
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Tuple

from charflow.modules.exprlang.services import dual
from charflow.modules.exprlang.services.dual import Dual2, Scalar

# name -> (arity, dual implementation)
FUNCTIONS: Dict[str, Tuple[int, Callable[..., Dual2]]] = {
    "sin": (1, dual.sin),
    "cos": (1, dual.cos),
    "tan": (1, dual.tan),
    "exp": (1, dual.exp),
    "log": (1, dual.log),
    "sqrt": (1, dual.sqrt),
    "abs": (1, dual.fabs),
    "atan2": (2, dual.atan2),
    "min": (2, dual.minimum),
    "max": (2, dual.maximum),
}

CONSTANTS: Dict[str, float] = {"pi": math.pi}

VARIABLES = ("x", "y")

BINARY_OPS: Dict[str, Callable[[Dual2, Dual2], Dual2]] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
    "^": dual.power,
}


class Expr:
    """Immutable expression over the variables x and y."""

    def dual(self, x: Dual2, y: Dual2) -> Dual2:
        raise NotImplementedError

    def eval_dual(self, x: Scalar, y: Scalar) -> Dual2:
        """Value and both first partials at (x, y); x and y may be numpy arrays."""
        return self.dual(Dual2.variable_x(x), Dual2.variable_y(y))

    def evaluate(self, x: Scalar, y: Scalar) -> Scalar:
        return self.eval_dual(x, y).value

    def children(self) -> Tuple["Expr", ...]:
        return ()

    def variables(self) -> FrozenSet[str]:
        """Names of the variables the expression reads."""
        out: FrozenSet[str] = frozenset()
        for child in self.children():
            out |= child.variables()
        return out

    def to_source(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.to_source()


@dataclass(frozen=True)
class Num(Expr):
    value: float

    def dual(self, x: Dual2, y: Dual2) -> Dual2:
        return Dual2(self.value, 0.0, 0.0)

    def to_source(self) -> str:
        return repr(float(self.value))


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def variables(self) -> FrozenSet[str]:
        return frozenset((self.name,))

    def dual(self, x: Dual2, y: Dual2) -> Dual2:
        return x if self.name == "x" else y

    def to_source(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const(Expr):
    name: str

    def dual(self, x: Dual2, y: Dual2) -> Dual2:
        return Dual2(CONSTANTS[self.name], 0.0, 0.0)

    def to_source(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr

    def children(self) -> Tuple[Expr, ...]:
        return (self.operand,)

    def dual(self, x: Dual2, y: Dual2) -> Dual2:
        return -self.operand.dual(x, y)

    def to_source(self) -> str:
        return f"(-{self.operand.to_source()})"


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def children(self) -> Tuple[Expr, ...]:
        return (self.left, self.right)

    def dual(self, x: Dual2, y: Dual2) -> Dual2:
        return BINARY_OPS[self.op](self.left.dual(x, y), self.right.dual(x, y))

    def to_source(self) -> str:
        return f"({self.left.to_source()} {self.op} {self.right.to_source()})"


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: Tuple[Expr, ...]

    def children(self) -> Tuple[Expr, ...]:
        return self.args

    def dual(self, x: Dual2, y: Dual2) -> Dual2:
        _, fn = FUNCTIONS[self.name]
        return fn(*(arg.dual(x, y) for arg in self.args))

    def to_source(self) -> str:
        return f"{self.name}({', '.join(arg.to_source() for arg in self.args)})"


def eval_dual(e: Expr, x: Scalar, y: Scalar) -> Dual2:
    """Value and both first partials of e at (x, y)."""
    return e.eval_dual(x, y)


def evaluate(e: Expr, x: Scalar, y: Scalar) -> Scalar:
    return e.evaluate(x, y)


def to_source(e: Expr) -> str:
    """Fully parenthesized source text; parses back to an equal tree."""
    return e.to_source()


def variables(e: Expr) -> FrozenSet[str]:
    return e.variables()

import math

import numpy as np
import pytest

from charflow.core.exceptions import DomainError, ExprSyntaxError, FieldFileError
from charflow.modules.exprlang.services.field_file import load_field_file, parse_field_file
from charflow.modules.exprlang.services.parser import parse

VALUES = [
    ("1", 0.0, 0.0, 1.0),
    ("3.", 0.0, 0.0, 3.0),
    (".5", 0.0, 0.0, 0.5),
    ("1e3", 0.0, 0.0, 1000.0),
    ("2.5e-1", 0.0, 0.0, 0.25),
    ("x", 2.0, 3.0, 2.0),
    ("y", 2.0, 3.0, 3.0),
    ("pi", 0.0, 0.0, math.pi),
    ("+x", 2.0, 0.0, 2.0),
    ("--x", 2.0, 0.0, 2.0),
    ("1 - 2 - 3", 0.0, 0.0, -4.0),
    ("8 / 4 / 2", 0.0, 0.0, 1.0),
    ("2 * 3 + 4", 0.0, 0.0, 10.0),
    ("2 + 3 * 4", 0.0, 0.0, 14.0),
    ("(2 + 3) * 4", 0.0, 0.0, 20.0),
    ("2^3^2", 0.0, 0.0, 512.0),
    ("-2^2", 0.0, 0.0, -4.0),
    ("(-2)^2", 0.0, 0.0, 4.0),
    ("2^-1", 0.0, 0.0, 0.5),
    ("-x^2", 3.0, 0.0, -9.0),
    ("(-x)^2", 3.0, 0.0, 9.0),
    ("x^0", 5.0, 0.0, 1.0),
    ("x^0.5", 4.0, 0.0, 2.0),
    ("x^y", 2.0, 3.0, 8.0),
    ("(-x)^3", 2.0, 0.0, -8.0),
    ("x^-2", 2.0, 0.0, 0.25),
    ("sin(pi/2)", 0.0, 0.0, 1.0),
    ("cos(0)", 0.0, 0.0, 1.0),
    ("tan(0)", 0.0, 0.0, 0.0),
    ("exp(0)", 0.0, 0.0, 1.0),
    ("log(exp(2))", 0.0, 0.0, 2.0),
    ("sqrt(16)", 0.0, 0.0, 4.0),
    ("abs(-3)", 0.0, 0.0, 3.0),
    ("abs(x)", -1.5, 0.0, 1.5),
    ("atan2(1, 1)", 0.0, 0.0, math.pi / 4),
    ("atan2(y, x)", -1.0, 0.0, math.pi),
    ("min(x, y)", 2.0, 3.0, 2.0),
    ("max(x, y)", 2.0, 3.0, 3.0),
    ("x*y + y", 2.0, 3.0, 9.0),
    ("x*y + (y*abs(y))", 1.0, -2.0, -6.0),
    ("1/sqrt(x*x + y*y)", 3.0, 4.0, 0.2),
    ("x*max(y, 0)", 2.0, -1.0, 0.0),
    ("  x\t+\ny ", 1.0, 2.0, 3.0),
    ("sin(x)^2 + cos(x)^2", 0.7, 0.0, 1.0),
]

ERRORS = [
    ("", 0),
    ("   ", 0),
    ("x +", 3),
    ("x ^", 3),
    ("1 + * 2", 4),
    (")", 0),
    ("(x", 2),
    ("2 * (x + 1", 10),
    ("x y", 2),
    ("x $ y", 2),
    ("z", 0),
    ("1 + foo(x)", 4),
    ("sin x", 0),
    ("atan2(x)", 0),
    ("2 * sin(x, y)", 4),
    ("max(x, y, 1)", 0),
]


@pytest.mark.parametrize("source,x,y,expected", VALUES)
def test_evaluates(source, x, y, expected):
    assert float(parse(source).evaluate(x, y)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("source,offset", ERRORS)
def test_syntax_error_offsets(source, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(source)
    assert info.value.offset == offset
    assert info.value.details["offset"] == offset


def test_to_source_reparses_to_same_tree():
    for source, *_ in VALUES:
        e = parse(source)
        assert parse(e.to_source()) == e


@pytest.mark.parametrize("source,names", [
    ("1 + pi", set()),
    ("x", {"x"}),
    ("-sin(y) * 2", {"y"}),
    ("atan2(y, x)", {"x", "y"}),
])
def test_variables(source, names):
    assert parse(source).variables() == names


def test_evaluates_on_arrays():
    X, Y = np.meshgrid(np.linspace(0.5, 1.5, 4), np.linspace(-1.0, 1.0, 3), indexing="ij")
    value = parse("x*y + sin(y)").evaluate(X, Y)
    np.testing.assert_allclose(value, X * Y + np.sin(Y))


@pytest.mark.parametrize("source,x,y", [
    ("log(x)", 0.0, 1.0),
    ("log(x)", -1.0, 1.0),
    ("sqrt(x)", -1.0, 0.0),
    ("1/x", 0.0, 0.0),
    ("atan2(y, x)", 0.0, 0.0),
    ("x^0.5", -4.0, 0.0),
])
def test_domain_errors(source, x, y):
    with pytest.raises(DomainError):
        parse(source).evaluate(x, y)


def test_sqrt_at_zero_with_flat_argument():
    assert parse("sqrt(0)").evaluate(1.0, 2.0) == 0.0
    d = parse("sqrt(x*x + y*y)").eval_dual(0.0, 0.0)
    assert (d.value, d.dx, d.dy) == (0.0, 0.0, 0.0)
    values = parse("sqrt(x*x)").evaluate(np.array([0.0, -2.0]), np.zeros(2))
    np.testing.assert_allclose(values, [0.0, 2.0])
    with pytest.raises(DomainError):
        parse("sqrt(x)").evaluate(0.0, 1.0)


def test_exp_overflow_is_reported():
    with pytest.raises(DomainError):
        parse("exp(x)").evaluate(1000.0, 0.0)


SMOOTH = [
    "sin(x*y) + x^3",
    "exp(-x*y)/(1 + y^2)",
    "log(x + y)*sqrt(x)",
    "atan2(y, x) + x^y",
    "tan(0.3*x) - cos(y)^2",
]

UNARY = [
    "sin({a})", "cos({a})", "exp(sin({a}))", "log(2 + cos({a}))", "sqrt(1 + ({a})^2)",
    "({a})^2", "-({a})", "tan(0.5*sin({a}))", "abs(1.5 + sin({a}))", "(1.5 + sin({a}))^y",
]
BINARY = [
    "({a} + {b})", "({a} - {b})", "({a} * {b})", "({a}) / (2 + sin({b}))", "atan2({a}, 3 + cos({b}))",
    "min(1 + sin({a})^2, 3 + ({b})^2)",
]


def _random_source(gen, depth, leaf_chance=0.25):
    if depth == 0 or gen.random() < leaf_chance:
        leaf = gen.integers(3)
        return ("x", "y", f"({gen.uniform(-1.0, 1.0):.3f})")[leaf]
    if gen.random() < 0.5:
        return UNARY[gen.integers(len(UNARY))].format(a=_random_source(gen, depth - 1))
    template = BINARY[gen.integers(len(BINARY))]
    return template.format(a=_random_source(gen, depth - 1), b=_random_source(gen, depth - 1))


def _random_corpus(size, seed=1729):
    """Seeded expressions and points in [0.5, 1.5]², kept only where the partials stay moderate."""
    gen = np.random.default_rng(seed)
    cases = []
    while len(cases) < size:
        source = _random_source(gen, 3, leaf_chance=0.0)
        x, y = (float(v) for v in gen.uniform(0.5, 1.5, size=2))
        e = parse(source)
        try:
            here = e.eval_dual(x, y)
            near = e.eval_dual(x + 1e-2, y - 1e-2)
        except DomainError:
            continue
        partials = np.array([here.dx, here.dy], dtype=float)
        drift = np.array([near.dx - here.dx, near.dy - here.dy], dtype=float)
        if abs(here.value) > 20 or np.max(np.abs(partials)) > 20 or np.max(np.abs(drift)) > 2:
            continue
        cases.append((source, x, y))
    return cases


CORPUS = [(s, x, y) for s in SMOOTH for x, y in [(0.7, 1.3), (1.4, 0.6)]] + _random_corpus(200)


@pytest.mark.parametrize("source,x,y", CORPUS, ids=[f"case{i}" for i in range(len(CORPUS))])
def test_dual_partials_match_central_differences(source, x, y):
    e = parse(source)
    h = 1e-5
    d = e.eval_dual(x, y)
    fd_x = (e.evaluate(x + h, y) - e.evaluate(x - h, y)) / (2 * h)
    fd_y = (e.evaluate(x, y + h) - e.evaluate(x, y - h)) / (2 * h)
    assert abs(float(d.dx) - float(fd_x)) <= 1e-6 * (1 + abs(float(d.dx))), source
    assert abs(float(d.dy) - float(fd_y)) <= 1e-6 * (1 + abs(float(d.dy))), source


def test_random_corpus_is_reproducible():
    assert _random_corpus(20) == _random_corpus(20)
    assert len({source for source, _, _ in _random_corpus(200)}) > 150


def test_abs_subgradient_at_zero():
    d = parse("abs(x)").eval_dual(0.0, 0.0)
    assert float(d.dx) == 0.0


def test_min_tie_takes_first_argument():
    d = parse("min(x, y)").eval_dual(1.0, 1.0)
    assert (float(d.dx), float(d.dy)) == (1.0, 0.0)


def test_graph_field_file():
    defn = parse_field_file("# bilinear\nu = x*y\nF1 = -y\n\nF2 = x\n", source="mem")
    assert defn.mode == "graph"
    assert sorted(defn.exprs) == ["F1", "F2", "u"]


def test_direct_field_file_without_H(tmp_path):
    path = tmp_path / "radial.field"
    path.write_text("theta = atan2(y, x)\n", encoding="utf-8")
    defn = load_field_file(path)
    assert defn.mode == "direct"
    assert defn.get("H") is None
    assert defn.source == str(path)


@pytest.mark.parametrize("text,line", [
    ("u = x*y\nF1 = -y\n", 0),
    ("u = x*y\nF1 = -y\nF2 = x\ntheta = 0\n", 0),
    ("H = 1\n", 0),
    ("u = x*y\nu = x\n", 2),
    ("w = 1\n", 1),
    ("u x*y\n", 1),
    ("u = x*y\nF1 = (y\n", 2),
])
def test_field_file_errors(text, line):
    with pytest.raises(FieldFileError) as info:
        parse_field_file(text)
    assert info.value.details["line"] == line

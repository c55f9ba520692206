import pytest
import sympy

from steinkit.diagram import FrontDiagram

UNKNOT = FrontDiagram((((0, 0), (1, 1), (2, 0), (1, -1)),))
# Legendrian push-off pair: lk = tb = -1
PUSHOFF_PAIR = FrontDiagram((((0, 0), (4, 4), (8, 0), (4, -4)), ((0, 2), (4, 6), (8, 2), (4, -2))))


def sympy_signature(rows) -> int:
    """Signature by Descartes' rule on the characteristic polynomial (exact: all roots are real)."""
    n = len(rows)
    if n == 0:
        return 0
    m = sympy.Matrix(rows)
    x = sympy.symbols("x")
    poly = sympy.Poly(m.charpoly(x).as_expr(), x)
    coeffs = poly.all_coeffs()
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zero += 1

    def changes(cs):
        signs = [c > 0 for c in cs if c != 0]
        return sum(a != b for a, b in zip(signs, signs[1:]))

    pos = changes(coeffs)
    deg = len(coeffs) - 1
    neg = changes([c * (-1) ** (deg - i) for i, c in enumerate(coeffs)])
    assert pos + neg + zero == n
    return pos - neg


@pytest.fixture
def unknot():
    return UNKNOT


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

"""Built-in test problems from the Hock-Schittkowski, Boggs-Tolle and CUTEst collections.

Equality-only problems get one extra inequality ``R - sum(x_i^2) >= 0``
with ``R`` far above the optimum's squared norm, so every problem has
``p >= 1`` without moving its solution.
"""

from __future__ import annotations

import enum
import functools
import math

import sympy

from .errors import UnknownProblem
from .model import ProblemDef, symbolic_problem


class Tag(str, enum.Enum):
    QCQP = "QCQP"
    OTHER = "OTHER"


def _ball(x, radius_sq):
    return radius_sq - sum(v**2 for v in x)


def _bounds(x, lower, upper):
    out = []
    for v, lo, hi in zip(x, lower, upper):
        if lo is not None:
            out.append(v - lo)
        if hi is not None:
            out.append(hi - v)
    return out


def _maratos(x):
    x1, x2 = x
    tau = sympy.Rational(1, 10**6)
    return -x1 + tau * (x1**2 + x2**2 - 1), [x1**2 + x2**2 - 1], [_ball(x, 10)]


def _hs8(x):
    x1, x2 = x
    return sympy.Integer(-1), [x1**2 + x2**2 - 25, x1 * x2 - 9], [_ball(x, 100)]


def _hs10(x):
    x1, x2 = x
    return x1 - x2, [], [-3 * x1**2 + 2 * x1 * x2 - x2**2 + 1]


def _hs11(x):
    x1, x2 = x
    return (x1 - 5) ** 2 + x2**2 - 25, [], [-x1**2 + x2]


def _hs12(x):
    x1, x2 = x
    f = x1**2 / 2 + x2**2 - x1 * x2 - 7 * x1 - 7 * x2
    return f, [], [25 - 4 * x1**2 - x2**2]


def _hs14(x):
    x1, x2 = x
    return (x1 - 2) ** 2 + (x2 - 1) ** 2, [x1 - 2 * x2 + 1], [-x1**2 / 4 - x2**2 + 1]


def _hs22(x):
    x1, x2 = x
    return (x1 - 2) ** 2 + (x2 - 1) ** 2, [], [-x1 - x2 + 2, -x1**2 + x2]


def _hs30(x):
    x1, x2, x3 = x
    g = [x1**2 + x2**2 - 1] + _bounds(x, (1, -10, -10), (10, 10, 10))
    return x1**2 + x2**2 + x3**2, [], g


def _hs40(x):
    x1, x2, x3, x4 = x
    h = [x1**3 + x2**2 - 1, x1**2 * x4 - x3, x4**2 - x2]
    return -x1 * x2 * x3 * x4, h, [_ball(x, 100)]


def _hs43(x):
    x1, x2, x3, x4 = x
    f = x1**2 + x2**2 + 2 * x3**2 + x4**2 - 5 * x1 - 5 * x2 - 21 * x3 + 7 * x4
    g = [
        8 - x1**2 - x2**2 - x3**2 - x4**2 - x1 + x2 - x3 + x4,
        10 - x1**2 - 2 * x2**2 - x3**2 - 2 * x4**2 + x1 + x4,
        5 - 2 * x1**2 - x2**2 - x3**2 - 2 * x1 + x2 + x4,
    ]
    return f, [], g


def _hs63(x):
    x1, x2, x3 = x
    f = 1000 - x1**2 - 2 * x2**2 - x3**2 - x1 * x2 - x1 * x3
    h = [8 * x1 + 14 * x2 + 7 * x3 - 56, x1**2 + x2**2 + x3**2 - 25]
    return f, h, list(x)


def _hs65(x):
    x1, x2, x3 = x
    f = (x1 - x2) ** 2 + (x1 + x2 - 10) ** 2 / 9 + (x3 - 5) ** 2
    g = [48 - x1**2 - x2**2 - x3**2] + _bounds(x, (-4.5, -4.5, -5), (4.5, 4.5, 5))
    return f, [], g


def _hs77(x):
    x1, x2, x3, x4, x5 = x
    f = (x1 - 1) ** 2 + (x1 - x2) ** 2 + (x3 - 1) ** 2 + (x4 - 1) ** 4 + (x5 - 1) ** 6
    h = [
        x1**2 * x4 + sympy.sin(x4 - x5) - 2 * sympy.sqrt(2),
        x2 + x3**4 * x4**2 - 8 - sympy.sqrt(2),
    ]
    return f, h, [_ball(x, 100)]


def _hs78(x):
    x1, x2, x3, x4, x5 = x
    h = [sum(v**2 for v in x) - 10, x2 * x3 - 5 * x4 * x5, x1**3 + x2**3 + 1]
    return x1 * x2 * x3 * x4 * x5, h, [_ball(x, 100)]


def _hs79(x):
    x1, x2, x3, x4, x5 = x
    f = (x1 - 1) ** 2 + (x1 - x2) ** 2 + (x2 - x3) ** 2 + (x3 - x4) ** 4 + (x4 - x5) ** 4
    h = [
        x1 + x2**2 + x3**3 - 2 - 3 * sympy.sqrt(2),
        x2 - x3**2 + x4 + 2 - 2 * sympy.sqrt(2),
        x1 * x5 - 2,
    ]
    return f, h, [_ball(x, 100)]


def _bt11(x):
    x1, x2, x3, x4, x5 = x
    f = (x1 - 1) ** 2 + (x1 - x2) ** 2 + (x2 - x3) ** 2 + (x3 - x4) ** 4 + (x4 - x5) ** 4
    h = [
        x1 + x2**2 + x3**3 + 2 - 3 * sympy.sqrt(2),
        x2 + x4 - x3**2 + 2 - 2 * sympy.sqrt(2),
        x1 - x5 - 2,
    ]
    return f, h, [_ball(x, 100)]


def _dixchlng(x):
    f = 0
    for i in range(7):
        f += (
            100 * (x[i + 1] - x[i] ** 2) ** 2
            + (1 - x[i]) ** 2
            + 90 * (x[i + 3] - x[i + 2] ** 2) ** 2
            + (1 - x[i + 2]) ** 2
            + sympy.Rational(101, 10) * ((x[i + 1] - 1) ** 2 + (x[i + 3] - 1) ** 2)
            + sympy.Rational(198, 10) * (x[i + 1] - 1) * (x[i + 3] - 1)
        )
    h = [sympy.Mul(*x[:k]) - 1 for k in (2, 4, 6, 8, 10)]
    return f, h, [_ball(x, 1000)]


# name -> (n, builder, x0, reference objective, tag)
_CATALOG = {
    "MARATOS": (2, _maratos, (1.1, 0.1), -1.0, Tag.QCQP),
    "HS8": (2, _hs8, (2.0, 1.0), -1.0, Tag.QCQP),
    "HS10": (2, _hs10, (-10.0, 10.0), -1.0, Tag.QCQP),
    "HS11": (2, _hs11, (4.9, 0.1), -8.498464223, Tag.QCQP),
    "HS12": (2, _hs12, (0.0, 0.0), -30.0, Tag.QCQP),
    "HS14": (2, _hs14, (2.0, 2.0), 9 - 23 * math.sqrt(7) / 8, Tag.QCQP),
    "HS22": (2, _hs22, (2.0, 2.0), 1.0, Tag.QCQP),
    "HS30": (3, _hs30, (1.0, 1.0, 1.0), 1.0, Tag.QCQP),
    "HS43": (4, _hs43, (0.0, 0.0, 0.0, 0.0), -44.0, Tag.QCQP),
    "HS63": (3, _hs63, (2.0, 2.0, 2.0), 961.7151721, Tag.QCQP),
    "HS65": (3, _hs65, (-5.0, 5.0, 0.0), 0.9535288567, Tag.QCQP),
    "HS40": (4, _hs40, (0.8, 0.8, 0.8, 0.8), -0.25, Tag.OTHER),
    "HS77": (5, _hs77, (2.0,) * 5, 0.24150513, Tag.OTHER),
    "HS78": (5, _hs78, (-2.0, 1.5, 2.0, -1.0, -1.0), -2.919700, Tag.OTHER),
    "HS79": (5, _hs79, (2.0,) * 5, 0.0787768209, Tag.OTHER),
    "BT11": (5, _bt11, (2.0,) * 5, 0.8248917783, Tag.OTHER),
    "DIXCHLNG": (10, _dixchlng, (-2.0, -0.5, 3.0, 1 / 3, -4.0, -0.25, 5.0, 0.2, -6.0, -1 / 6), 2471.897811,
                 Tag.OTHER),
}

# Objective / iteration counts reported for (arc, line, arc-simplified).
PUBLISHED_RESULTS = {
    "MARATOS": ((-1.0000, 3), (-1.0000, 14), (-1.0000, 3)),
    "HS8": ((-1.0000, 6), (-1.0000, 21), (-1.0000, 4)),
    "HS10": ((-1.0000, 7), (-1.0001, 8), (-1.0000, 9)),
    "HS11": ((-8.4988, 7), (-8.4985, 13), (-8.4987, 8)),
    "HS12": ((-30.0000, 8), (-30.0001, 15), (-30.0000, 12)),
    "HS14": ((1.3933, 5), (1.3934, 9), (1.3934, 6)),
    "HS22": ((0.9999, 6), (0.9999, 5), (1.0000, 5)),
    "HS30": ((0.9999, 10), (0.9999, 9), (0.9999, 10)),
    "HS43": ((-44.0003, 8), (-44.0002, 11), (-44.0003, 9)),
    "HS63": ((961.7152, 9), (961.7151, 7), (961.7152, 10)),
    "HS65": ((0.9535, 12), (0.9535, 10), (0.9535, 15)),
    "HS40": ((-0.2500, 3), (-0.2500, 15), (-0.2500, 3)),
    "HS77": ((0.2415, 8), (0.2415, 18), (0.2415, 8)),
    "HS78": ((-2.9197, 3), (-2.9197, 20), (-2.9197, 3)),
    "HS79": ((0.0788, 3), (0.0788, 19), (0.0788, 4)),
    "BT11": ((0.8249, 6), (0.8249, 21), (0.8249, 7)),
    "DIXCHLNG": ((2471.8978, 9), (2471.8978, 33), (2471.8978, 9)),
}

PUBLISHED_COLUMNS = ("arc", "line", "arc-simplified")


def available() -> list:
    return list(_CATALOG)


def tag_of(name: str) -> Tag:
    _check(name)
    return _CATALOG[name][4]


def names_with_tag(tag: Tag) -> list:
    return [name for name, entry in _CATALOG.items() if entry[4] == tag]


def _check(name):
    if name not in _CATALOG:
        raise UnknownProblem(name, available())


@functools.lru_cache(maxsize=None)
def get(name: str) -> ProblemDef:
    """Return the named built-in problem; raises UnknownProblem otherwise."""
    _check(name)
    n, build, x0, reference, _ = _CATALOG[name]
    return symbolic_problem(name, n, build, x0, known_objective=reference)


def published_result(name: str, method: str):
    """(objective, iterations) printed in the published tables, or None."""
    row = PUBLISHED_RESULTS.get(name)
    if row is None:
        return None
    return row[PUBLISHED_COLUMNS.index(method)]

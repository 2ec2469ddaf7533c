"""Independent reference computations shared by the test modules.

Each one reaches its value by a route that shares no code with the package.
"""

from fractions import Fraction
from math import factorial


def alexander_inverse_by_geometric_series(d):
    """Taylor coefficients of 1/(3 - 2 cosh z) through z^d.

    1/(1 - w) with w = 2 cosh z - 2 = sum_{k>=1} 2 z^{2k} / (2k)!.  w has no
    constant term, so sum_{n<=d} w^n is exact through order d.
    """
    w = [Fraction(0)] * (d + 1)
    for k in range(1, d // 2 + 1):
        w[2 * k] = Fraction(2, factorial(2 * k))
    total = [Fraction(0)] * (d + 1)
    power = [Fraction(1)] + [Fraction(0)] * d
    for _ in range(d + 1):
        total = [a + b for a, b in zip(total, power)]
        power = [sum(power[i] * w[n - i] for i in range(n + 1)) for n in range(d + 1)]
    return total

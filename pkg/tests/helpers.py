"""Shared oracles for the test suite: deliberately independent, low-tech
implementations used to cross-check the package's own routines."""

from fractions import Fraction

from mpmath import mp, mpf


def round_decimals(x, k: int) -> str:
    """x rounded to k decimals, as a plain decimal string (for comparing
    against printed reference values)."""
    with mp.workdps(mp.dps + 10):
        n = int(mp.nint(mpf(x) * mpf(10) ** k))
    s = str(abs(n)).rjust(k + 1, "0")
    return ("-" if n < 0 else "") + s[:-k] + "." + s[-k:]


def agm(a, b, digits: int = 60):
    """Arithmetic-geometric mean by the textbook iteration."""
    with mp.workdps(digits + 10):
        a, b = mpf(a), mpf(b)
        for _ in range(digits + 20):
            a, b = (a + b) / 2, mp.sqrt(a * b)
            if abs(a - b) < mpf(10) ** (-digits - 5):
                return (a + b) / 2
    raise RuntimeError("agm did not converge")


def poly_mul_trunc(a: list, b: list, n: int) -> list:
    out = [Fraction(0)] * n
    for i, ai in enumerate(a[:n]):
        if ai:
            for j, bj in enumerate(b[: n - i]):
                if bj:
                    out[i + j] += ai * bj
    return out


def brute_euler_power(e: int, nmax: int, order: int) -> list:
    """prod_{n<=nmax} (1-x^n)^e by literal repeated convolution."""
    out = [Fraction(1)] + [Fraction(0)] * (order - 1)
    for n in range(1, nmax + 1):
        factor = [Fraction(0)] * order
        factor[0] = Fraction(1)
        if n < order:
            factor[n] = Fraction(-1)
        for _ in range(e):
            out = poly_mul_trunc(out, factor, order)
    return out


def long_division_reciprocal(a: list, order: int) -> list:
    """1/a(x) by schoolbook long division (a[0] must be nonzero)."""
    out = [Fraction(1) / a[0]]
    for k in range(1, order):
        s = Fraction(0)
        for j in range(1, k + 1):
            if j < len(a):
                s += a[j] * out[k - j]
        out.append(-s / a[0])
    return out

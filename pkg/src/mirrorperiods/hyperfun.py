"""High-precision numerics for the special functions behind the period checks.

mpmath supplies the arbitrary-precision substrate: "PrecFloat/PrecComplex"
values are plain ``mpf``/``mpc`` computed at a caller-chosen number of decimal
digits (default 120, minimum 30) plus guard digits.  Everything here is a
direct series or product evaluation with an explicit geometric tail bound;
analytic continuation beyond the convergence disks is pfode's job.

Nome conventions, distinguished everywhere downstream:

    q  = exp(pi*i*tau)     (half nome; theta constants, lambda(tau))
    Q  = exp(2*pi*i*tau)   (full nome; eta products, modular forms)

so Q = q**2.  Mixing them up is the classic trap in this corner of the
literature; helpers `half_nome` / `full_nome` exist so callers never have to
write the exponentials by hand.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction
from typing import Union

from mpmath import mp, mpc, mpf

from .qseries import RationalSeries

DEFAULT_DIGITS = 120
MIN_DIGITS = 30
GUARD_DIGITS = 15

Number = Union[int, float, Fraction, mpf, mpc]


class PrecisionError(ValueError):
    """Raised when a precision request or evaluation precondition fails."""


@contextmanager
def working_precision(digits: int):
    """Context manager: run mpmath at `digits` decimal digits plus guard."""
    if digits < MIN_DIGITS:
        raise PrecisionError(f"digits must be >= {MIN_DIGITS}, got {digits}")
    with mp.workdps(digits + GUARD_DIGITS):
        yield


def to_mp(x: Number):
    """Exact conversion of rationals/ints to the current working precision."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / mpf(x.denominator)
    if isinstance(x, int):
        return mpf(x)
    return x


def as_mpc(x) -> mpc:
    """Convert to mpc at the current working precision.

    Accepts mpf/mpc/int/float/complex, exact Fractions, decimal strings, and
    (re, im) pairs of any of those.  Exact inputs are converted at the call
    site's precision, so module-level constants can stay precision-free.
    """
    if isinstance(x, tuple):
        re, im = x
        return mpc(as_mpc(re).real, as_mpc(im).real)
    if isinstance(x, Fraction):
        return mpc(mpf(x.numerator) / mpf(x.denominator))
    if isinstance(x, str):
        return as_mpc(Fraction(x))
    return mpc(x)


def half_nome(tau, digits: int = DEFAULT_DIGITS):
    """q = exp(pi*i*tau)."""
    with working_precision(digits):
        return mp.exp(mp.pi * mp.mpc(0, 1) * mpc(tau))


def full_nome(tau, digits: int = DEFAULT_DIGITS):
    """Q = exp(2*pi*i*tau) = half_nome(tau)**2."""
    with working_precision(digits):
        return mp.exp(2 * mp.pi * mp.mpc(0, 1) * mpc(tau))


# ---------------------------------------------------------------------------
# Gauss hypergeometric function, direct series on |z| <= 0.9
# ---------------------------------------------------------------------------


def hyp2f1_series(a: Fraction, b: Fraction, c: Fraction, order: int) -> RationalSeries:
    """Exact rational Taylor coefficients of 2F1(a,b;c;z) at z=0."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if c.denominator == 1 and c <= 0:
        raise PrecisionError("2F1 undefined for nonpositive integer c")
    coeffs = [Fraction(1)]
    t = Fraction(1)
    for n in range(1, order):
        t *= (a + n - 1) * (b + n - 1) / ((c + n - 1) * n)
        coeffs.append(t)
    return RationalSeries(coeffs, 0, order)


def hyp2f1(a, b, c, z, digits: int = DEFAULT_DIGITS):
    """2F1(a,b;c;z) by direct summation, |z| <= 0.9.

    The truncation error is controlled by a geometric bound: the term ratio
    (a+n)(b+n)/((c+n)(1+n)) * z has modulus <= |z| whenever a+b <= c+1 and
    a*b <= c (true for every parameter triple in scope), so the tail after
    term T_n is at most |T_n| * |z| / (1-|z|).  Points outside the disk go
    through pfode.continue_solution instead.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if c.denominator == 1 and c <= 0:
        raise PrecisionError("2F1 undefined for nonpositive integer c")
    with working_precision(digits):
        z = mpc(z)
        if z == 0:
            return mpc(1)
        az = abs(z)
        if az > mpf("0.9") + mpf(10) ** -10:  # slack for binary-decimal boundary noise
            raise PrecisionError(
                f"|z| = {mp.nstr(az, 8)} > 0.9; use pfode.continue_solution beyond the disk")
        if not (a > 0 and b > 0 and c > 0 and a + b <= c + 1 and a * b <= c):
            raise PrecisionError(
                "parameters outside the range covered by the geometric tail bound")
        eps = mpf(10) ** (-(digits + 10))
        total = mpc(0)
        term = mpc(1)
        n = 0
        geo = az / (1 - az)
        while True:
            total += term
            if abs(term) * geo < eps * max(mpf(1), abs(total)):
                return total
            term *= to_mp(a + n) * to_mp(b + n) / (to_mp(c + n) * (n + 1)) * z
            n += 1
            if n > 200 * (digits + 10):
                raise PrecisionError("2F1 series failed to converge within budget")


# ---------------------------------------------------------------------------
# Theta constants and the Dedekind eta function
# ---------------------------------------------------------------------------


def theta_const(kind: int, q, digits: int = DEFAULT_DIGITS):
    """Theta constant theta_kind(0, q) for kind in {2, 3, 4}, |q| < 1.

    theta2 = 2 * q^(1/4) * sum q^(n(n+1)), with the principal quarter root;
    only fourth powers of theta2 are consumed downstream, which kills the
    root-of-unity ambiguity.  Truncated once |q|^(N^2) drops below
    10^-(digits+10).
    """
    if kind not in (2, 3, 4):
        raise PrecisionError(f"theta kind must be 2, 3 or 4, got {kind}")
    with working_precision(digits):
        q = mpc(q)
        aq = abs(q)
        if aq >= 1:
            raise PrecisionError("theta constants require |q| < 1")
        if q == 0:
            return mpc(0) if kind == 2 else mpc(1)
        eps = mpf(10) ** (-(digits + 10))
        nmax = int(mp.ceil(mp.sqrt((digits + 12) * mp.log(10) / -mp.log(aq)))) + 2
        if aq ** ((nmax + 1) ** 2) / (1 - aq) > eps:
            raise PrecisionError("theta truncation bound not met")
        if kind == 2:
            s = mpc(0)
            for n in range(nmax, -1, -1):
                s += q ** (n * (n + 1))
            return 2 * q ** mpf("0.25") * s
        s = mpc(1)
        for n in range(nmax, 0, -1):
            t = 2 * q ** (n * n)
            s += -t if (kind == 4 and n % 2 == 1) else t
        return s


def eta_value(tau, digits: int = DEFAULT_DIGITS):
    """Dedekind eta(tau) = Q^(1/24) * prod(1 - Q^n), Q = exp(2*pi*i*tau).

    Requires Im(tau) > 0.  The prefactor is computed as exp(pi*i*tau/12)
    directly from tau, so no root extraction of Q is involved.
    """
    with working_precision(digits):
        tau = mpc(tau)
        if tau.imag <= 0:
            raise PrecisionError("eta requires Im(tau) > 0")
        bigq = mp.exp(2 * mp.pi * mp.mpc(0, 1) * tau)
        aq = abs(bigq)
        # tail: |log prod_{n>N}(1-Q^n)| <= |Q|^(N+1) / ((1-|Q|)^2)
        eps = mpf(10) ** (-(digits + 10))
        nmax = int(mp.ceil(((digits + 12) * mp.log(10) + 2 * abs(mp.log(1 - aq)))
                           / (2 * mp.pi * tau.imag))) + 3
        prod = mpc(1)
        qp = bigq
        for _ in range(1, nmax + 1):
            prod *= 1 - qp
            qp *= bigq
        if aq ** (nmax + 1) / (1 - aq) ** 2 > eps:
            raise PrecisionError("eta truncation bound not met")
        return mp.exp(mp.pi * mp.mpc(0, 1) * tau / 12) * prod


# ---------------------------------------------------------------------------
# Harmonic sums standing in for polygamma brackets
# ---------------------------------------------------------------------------

_H: list[Fraction] = [Fraction(0)]
_H2: list[Fraction] = [Fraction(0)]


def harmonic_sums(n: int) -> tuple[Fraction, Fraction]:
    """(H_n, H_n^(2)) as exact rationals.

    These realize the polygamma combinations of the period series without any
    transcendental evaluation: Psi(n+1) - Psi(1) = H_n and
    Psi'(n+1) = pi^2/6 - H_n^(2), so Psi(4n+1) - Psi(n+1) = H_4n - H_n and the
    Euler-Mascheroni constant never appears.
    """
    if n < 0:
        raise ValueError("harmonic_sums requires n >= 0")
    while len(_H) <= n:
        k = len(_H)
        _H.append(_H[k - 1] + Fraction(1, k))
        _H2.append(_H2[k - 1] + Fraction(1, k * k))
    return _H[n], _H2[n]

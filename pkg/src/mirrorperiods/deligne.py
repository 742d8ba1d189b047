"""L-values of the weight-3 newform and the period ratios they should hit.

The L-function attached to the quartic surface's transcendental motive is
L(s) = sum b_n / n^s with b_n the coefficients of Q prod(1-Q^(4n))^6.  Its
Mellin integral

    Lambda(s) = integral_0^inf eta(4iz)^6 z^(s-1) dz

is split at the fixed point z = 1/4 of z -> 1/(16z); the lower half maps to
the upper half by the eta relation eta(i/(4y))^6 = 64 y^3 eta(4iy)^6 (derived
from eta(-1/tau) = sqrt(-i tau) eta(tau) and verified numerically, not
cited), after which both halves integrate termwise with elementary incomplete
gamma factors: Gamma(1,x) = e^-x and Gamma(2,x) = (1+x) e^-x.  The critical
values are L1 = 2 pi Lambda(1) and L2 = (2 pi)^2 Lambda(2).

The matching periods come from the theta value at the quartic point:
with v = theta3^4(0, -i e^(-pi/2)) (purely imaginary, = varpi0(2)^2),

    c_minus = v,  c_plus = i v,
    c_tate1 = 2 pi i c_minus,  c_tate2 = (2 pi i)^2 c_plus,

and the ratios c_tate1/L1, c_tate2/L2 reconstruct to small rationals
(16 and -64) by continued fractions with a hard denominator bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

from . import arith, pfode
from .hyperfun import (DEFAULT_DIGITS, PrecisionError, as_mpc, eta_value,
                       theta_const, working_precision)

MAX_DIGITS = 300  # coefficient tables and quadrature are sized for this


class ReconstructionError(ArithmeticError):
    """No small rational within tolerance; indicates a computation bug."""


@dataclass(frozen=True)
class LValueResult:
    s: int
    value: mpf
    method: str
    error_estimate: mpf

    def to_dict(self) -> dict:
        return {"s": self.s, "value": mp.nstr(self.value, mp.dps),
                "method": self.method,
                "error_estimate": mp.nstr(self.error_estimate, 3)}


@dataclass(frozen=True)
class DelignePeriodSet:
    """c^+ and c^- of the base motive and the two critical Tate twists.

    c_plus is real, c_minus purely imaginary; theta4_value is the underlying
    theta3^4(0, -i e^(-pi/2)) and crosscheck_residual the disagreement
    between that value and varpi0(2)^2 from ODE continuation.
    """
    c_plus: mpc
    c_minus: mpc
    c_plus_tate1: mpc
    c_plus_tate2: mpc
    theta4_value: mpc
    crosscheck_residual: mpf


def _gamma_upper(s: int, x):
    """Gamma(s, x) for s in {1, 2}: e^-x and (1+x) e^-x."""
    if s == 1:
        return mp.exp(-x)
    if s == 2:
        return (1 + x) * mp.exp(-x)
    raise ValueError("only s in {1, 2} arises here")


def _lambda_termwise(s: int, digits: int):
    """Lambda(s) by termwise incomplete-gamma integration of both halves."""
    nmax = int(mpf(2) * (digits + 20) * mp.log(10) / mp.pi) + 30
    coeffs = arith.eta6_coefficients(nmax)
    total = mpf(0)
    twopi = 2 * mp.pi
    for n in range(1, nmax + 1, 4):
        b = coeffs[n]
        if not b:
            continue
        x = mp.pi * n / 2  # = 2 pi n * (1/4)
        upper = _gamma_upper(s, x) / (twopi * n) ** s
        lower = 64 * mpf(16) ** (-s) * _gamma_upper(3 - s, x) / (twopi * n) ** (3 - s)
        total += b * (upper + lower)
    # first omitted term bounds the tail up to a geometric factor
    tail = mpf(nmax + 1) * mp.exp(-mp.pi * (nmax + 1) / 2)
    return total, tail


def _lambda_quadrature(s: int, digits: int):
    """Lambda(s) by adaptive quadrature of the eta product itself (oracle
    route; shares only the split substitution with the termwise method)."""
    def upper(z):
        return eta_value(4j * z, digits) ** 6 * z ** (s - 1)

    def lower(u):
        return 64 * mpf(16) ** (-s) * eta_value(4j * u, digits) ** 6 * u ** (2 - s)

    quarter = mpf(1) / 4
    val = mp.quad(upper, [quarter, 1, 3, mp.inf]) + \
        mp.quad(lower, [quarter, 1, 3, mp.inf])
    return val.real, mpf(10) ** (-mp.dps + 6)


def lvalue(s: int, digits: int = DEFAULT_DIGITS, method: str = "termwise") -> LValueResult:
    """L of the critical Tate twists: s=1 gives 2 pi Lambda(1), s=2 gives
    (2 pi)^2 Lambda(2)."""
    if s not in (1, 2):
        raise ValueError("critical twists are s = 1 and s = 2 only")
    if digits > MAX_DIGITS:
        raise PrecisionError(f"digits capped at {MAX_DIGITS}")
    with working_precision(digits):
        if method == "termwise":
            lam, err = _lambda_termwise(s, digits)
        elif method == "quadrature":
            lam, err = _lambda_quadrature(s, digits)
        else:
            raise ValueError(f"unknown method {method!r}")
        scale = (2 * mp.pi) ** s
        return LValueResult(s, scale * lam.real, method, scale * err)


def theta_quartic_point(digits: int = DEFAULT_DIGITS) -> mpc:
    """theta3^4(0, -i e^(-pi/2)), the purely imaginary period constant."""
    with working_precision(digits):
        q0 = -mp.mpc(0, 1) * mp.exp(-mp.pi / 2)
        return theta_const(3, q0, digits) ** 4


def deligne_periods(digits: int = DEFAULT_DIGITS) -> DelignePeriodSet:
    """Periods of the base motive and its two critical twists.

    The underlying varpi0(2)^2 is computed both as the theta value and via
    ODE continuation to lambda = 2 along the canonical lower-detour path;
    a disagreement beyond 10^-(digits-15) raises.
    """
    th4 = theta_quartic_point(digits)
    frame = pfode.continue_legendre(pfode.CANONICAL_PATH_TO_TWO, digits)
    with working_precision(digits):
        w0sq = frame.columns[0][0] ** 2
        mismatch = abs(w0sq - th4)
        if mismatch > mpf(10) ** (-(digits - 15)):
            raise PrecisionError(
                f"theta vs continuation cross-check failed: {mp.nstr(mismatch, 5)}")
        c_minus = th4
        c_plus = mp.mpc(0, 1) * th4
        twopii = 2 * mp.pi * mp.mpc(0, 1)
        return DelignePeriodSet(
            c_plus=c_plus,
            c_minus=c_minus,
            c_plus_tate1=twopii * c_minus,
            c_plus_tate2=twopii ** 2 * c_plus,
            theta4_value=th4,
            crosscheck_residual=mismatch,
        )


def rationalize(x, max_denominator: int = 10 ** 6, tol=None) -> Fraction:
    """Continued-fraction reconstruction of a small rational from an mpf.

    Fails loudly if no convergent with denominator <= max_denominator lands
    within tol; a period ratio that is not a small rational is a computation
    bug, not a refutation.
    """
    x = mpf(x)
    if tol is None:
        tol = mpf(10) ** (-mp.dps + 10)
    h2, h1 = 0, 1
    k2, k1 = 1, 0
    y = x
    for _ in range(200):
        a = int(mp.floor(y))
        h2, h1 = h1, a * h1 + h2
        k2, k1 = k1, a * k1 + k2
        if k1 > max_denominator:
            raise ReconstructionError(
                f"no rational with denominator <= {max_denominator} within {mp.nstr(tol, 3)}")
        if abs(x - mpf(h1) / k1) < tol:
            return Fraction(h1, k1)
        frac = y - a
        if frac == 0:
            return Fraction(h1, k1)
        y = 1 / frac
    raise ReconstructionError("continued fraction did not terminate")


def fricke_residual(y, digits: int = DEFAULT_DIGITS):
    """|eta(i/(4y))^6 - 64 y^3 eta(4iy)^6| at real y > 0."""
    with working_precision(digits):
        y = as_mpc(y).real
        lhs = eta_value(mp.mpc(0, 1) / (4 * y), digits) ** 6
        rhs = 64 * y ** 3 * eta_value(4 * mp.mpc(0, 1) * y, digits) ** 6
        return abs(lhs - rhs)


def verify_ratios(digits: int = DEFAULT_DIGITS):
    """(r1, r2, report): the two Deligne ratios as exact rationals.

    r1 = c^+(twist 1) / L(twist 1) and r2 = c^+(twist 2) / L(twist 2),
    reconstructed by continued fractions with denominator bound 10^6 and
    residual tolerance 10^-(digits-10).
    """
    if digits < 40:
        raise PrecisionError("ratio verification needs digits >= 40")
    periods = deligne_periods(digits)
    l1 = lvalue(1, digits)
    l2 = lvalue(2, digits)
    with working_precision(digits):
        tol = mpf(10) ** (-(digits - 10))
        ratio1 = periods.c_plus_tate1 / l1.value
        ratio2 = periods.c_plus_tate2 / l2.value
        if abs(ratio1.imag) > tol or abs(ratio2.imag) > tol:
            raise ReconstructionError("period ratios failed to be real")
        r1 = rationalize(ratio1.real, tol=tol)
        r2 = rationalize(ratio2.real, tol=tol)
        report = {
            "digits": digits,
            "L1": mp.nstr(l1.value, digits),
            "L2": mp.nstr(l2.value, digits),
            "ratio1": str(r1),
            "ratio2": str(r2),
            "ratio1_float": mp.nstr(ratio1.real, 25),
            "ratio2_float": mp.nstr(ratio2.real, 25),
        }
        return r1, r2, report


def report(digits: int = DEFAULT_DIGITS) -> dict:
    """The JSON-facing summary: theta value, L-values, twisted periods,
    ratios, and the self-checks that gate them."""
    checks = []
    with working_precision(digits):
        for y in (Fraction(3, 10), Fraction(7, 10), Fraction(3, 2)):
            res = fricke_residual(y, digits)
            checks.append({
                "name": f"fricke-eta6-y={y}",
                "residual": mp.nstr(res, 6),
                "tolerance": mp.nstr(mpf(10) ** (-(digits - 10)), 3),
                "passed": bool(res < mpf(10) ** (-(digits - 10))),
            })
    periods = deligne_periods(digits)
    r1, r2, ratio_rep = verify_ratios(digits)
    with working_precision(digits):
        checks.append({
            "name": "theta-vs-continuation",
            "residual": mp.nstr(periods.crosscheck_residual, 6),
            "tolerance": mp.nstr(mpf(10) ** (-(digits - 15)), 3),
            "passed": True,
        })
        return {
            "digits": digits,
            "theta4_value": mp.nstr(periods.theta4_value, digits),
            "L1": ratio_rep["L1"],
            "L2": ratio_rep["L2"],
            "c_plus_tate1": mp.nstr(periods.c_plus_tate1, digits),
            "c_plus_tate2": mp.nstr(periods.c_plus_tate2, digits),
            "ratio1": str(r1),
            "ratio2": str(r2),
            "checks": checks,
        }

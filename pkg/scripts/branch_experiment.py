#!/usr/bin/env python3
"""Which homotopy class of paths to lambda = 2 hits the printed values?

The quartic relation only fixes the change of variables up to branch
choices, so the period ratio at lambda = 2 depends on how the path winds
around the singularities at 0 and 1.  This experiment transports the
Legendre frame along the detour through Im(lambda) < 0 and through
Im(lambda) > 0 and compares both endpoints against

    tau(2)      = (-1+i)/2
    varpi0(2)   = theta3^2(0, -i e^(-pi/2))

The lower detour reproduces both, which is why it is the canonical path in
pfode; the upper detour lands on (1+i)/2 and the conjugate theta value.

Usage: python scripts/branch_experiment.py [--digits N]
"""

import argparse
import sys
from fractions import Fraction as F
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mpmath import mp  # noqa: E402

from mirrorperiods import pfode  # noqa: E402
from mirrorperiods.hyperfun import theta_const, working_precision  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--digits", type=int, default=50)
    args = parser.parse_args()
    digits = args.digits

    paths = {
        "lower (Im < 0)": pfode.ContinuationPath(
            ((F(1, 10), F(0)), (F(1, 10), F(-6, 5)), (F(2), F(0)))),
        "upper (Im > 0)": pfode.ContinuationPath(
            ((F(1, 10), F(0)), (F(1, 10), F(6, 5)), (F(2), F(0)))),
    }
    with working_precision(digits):
        q0 = -mp.mpc(0, 1) * mp.exp(-mp.pi / 2)
        theta2 = theta_const(3, q0, digits) ** 2
        print(f"theta3^2(0, -i e^-pi/2) = {mp.nstr(theta2, 30)}")
        print(f"printed tau(2)          = (-1+i)/2")
        print()
    for name, path in paths.items():
        frame = pfode.continue_legendre(path, digits)
        with working_precision(digits):
            w0 = frame.columns[0][0]
            tau = frame.columns[1][0] / w0
            print(f"{name} detour:")
            print(f"  tau(2)    = {mp.nstr(tau, 30)}")
            print(f"  varpi0(2) = {mp.nstr(w0, 30)}")
            print(f"  |varpi0(2) - theta3^2| = {mp.nstr(abs(w0 - theta2), 4)}")
            print()
    return 0


if __name__ == "__main__":
    sys.exit(main())

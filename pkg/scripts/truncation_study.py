"""How the fd_evolve L1 error for the fig1 system depends on the spatial window.

A zero-flux scheme keeps all probability inside [x_min, x_max], whereas the
analytic density leaks out through the window edges as it spreads.  The L1
distance is therefore bounded below by the analytic mass outside the window.
This script prints that bound next to the measured L1 at t = 2, 3, 4.

    python scripts/truncation_study.py
"""
from scipy import special

from fpsim.oracle import fd_evolve, l1_distance, sample_solution
from fpsim.solutions import gaussian_solution

SOL = gaussian_solution(1.0, 0.5, 1.0, 1.0)
WINDOWS = [(-12.0, 24.0, 2000), (-16.0, 32.0, 2667), (-25.0, 41.0, 3667)]


def outside_mass(x_min, x_max, t):
    sd = SOL.variance(t) ** 0.5
    m = SOL.mean(t)
    return special.ndtr((x_min - m) / sd) + special.ndtr(-(x_max - m) / sd)


def main():
    print(f"{'window':>18s} {'t':>3s} {'outside mass':>13s} {'L1':>10s}")
    for x_min, x_max, n in WINDOWS:
        w = sample_solution(SOL, 1.0, x_min, x_max, n)
        for t in (2.0, 3.0, 4.0):
            w = fd_evolve(SOL.coefficients(), w, t, 1000)
            l1 = l1_distance(w, sample_solution(SOL, t, x_min, x_max, n))
            print(f"[{x_min:g},{x_max:g}]x{n:<5d} {t:3g} {outside_mass(x_min, x_max, t):13.3e} {l1:10.3e}")


if __name__ == "__main__":
    main()

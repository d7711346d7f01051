"""Expected absolute error of the baseline vs square-wave style mechanisms.

Direction: for a two-level circular density with half-width h, height p and
low level q, the mean arc error is p*h^2 + q*(pi^2 - h^2).  Distance: mean
|y - x| integrated per piece and averaged over uniform private inputs.
Budgets use the eps*pi/(pi+1) direction share.
"""
import argparse
import math

import numpy as np
from scipy import integrate

from tracs import mechanisms as mech
from tracs.mechanisms import PrivacyBudget


def arc_error(pdf) -> float:
    h = pdf.width / 2
    return pdf.p * h * h + pdf.low * (math.pi**2 - h * h)


def distance_error(factory, eps: float, n_inputs: int = 201) -> float:
    def at(x):
        pdf = factory(x, eps)
        return sum(integrate.quad(lambda y: abs(y - x) * d, s, e, points=[x] if s < x < e else None)[0] for s, e, d in pdf.pieces())

    xs = (np.arange(n_inputs) + 0.5) / n_inputs
    return float(np.mean([at(x) for x in xs]))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps", type=float, nargs="+", default=[2, 3, 4, 5, 6, 7, 8])
    args = ap.parse_args()
    print("eps  dir(base) dir(sw)  ratio   dist(base) dist(sw) ratio")
    for eps in args.eps:
        b = PrivacyBudget.heuristic(eps)
        db, ds = arc_error(mech.mcirc_pdf(0.0, b.eps_d)), arc_error(mech.sw_direction_pdf(0.0, b.eps_d))
        rb, rs = distance_error(mech.mdist_pdf, b.eps_r), distance_error(mech.sw_distance_pdf, b.eps_r)
        print(f"{eps:<4g} {db:.4f}    {ds:.4f}   {db / ds:.3f}   {rb:.4f}     {rs:.4f}   {rb / rs:.3f}")


if __name__ == "__main__":
    main()

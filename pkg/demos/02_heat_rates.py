# # Heat equation: first versus second order steps
#
# Two three-point steps approximate exp(t d^2/dx^2). The one with weights (1/4, 1/2, 1/4)
# matches the Gaussian through the second moment; the (1/6, 2/3, 1/6) step matches
# through the fourth. Sup-norm errors over a grid show rates 1/n and 1/n^2.

from chernoff_lab.chernoff import heat_G, heat_S, moment_match_order
from chernoff_lab.experiments import DEFAULT_NS, error_curve, fit_rate
from chernoff_lab.semigroups import heat_oracle
from chernoff_lab.testfns import gaussian, sine

oracle = heat_oracle(1.0)

for f in (sine(1), gaussian(1)):
    print(f"\n## {f.name}")
    curves = {fam.name: error_curve(fam, oracle, f, 1.0, DEFAULT_NS) for fam in (heat_G(1.0), heat_S(1.0))}
    print("    n   " + "  ".join(f"{name:>12}" for name in curves))
    for i, n in enumerate(DEFAULT_NS):
        print(f"{n:5d}   " + "  ".join(f"{c.errors[i]:12.4e}" for c in curves.values()))
    for name, c in curves.items():
        fit = fit_rate(c)
        print(f"{name}: fitted exponent {fit.exponent:.3f} (r^2 {fit.r_squared:.5f})")

# ## Moment matching predicts the exponent

for fam in (heat_G(1.0), heat_S(1.0)):
    mm = moment_match_order(fam, 1.0, 1.0, 8)
    print(f"{fam.name}: first mismatched moment {mm.first_mismatch_k}, predicted exponent {mm.predicted_rate_exponent}")

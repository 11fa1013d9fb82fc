# # Rough data and arbitrarily slow convergence
#
# A shift by t + t^2 (a quadratic error in the step) converges at rate 1/n on
# Lipschitz data but only n^-alpha on alpha-Holder data such as |sin x|^alpha.

from chernoff_lab.chernoff import inverse_log_rate, power_rate, quadratic_shift
from chernoff_lab.experiments import DEFAULT_NS, error_curve, fit_rate, slow_convergence_experiment, subspace_probe
from chernoff_lab.semigroups import translation_oracle
from chernoff_lab.testfns import holder_sine

oracle = translation_oracle()
fam = quadratic_shift(1.0)

for alpha in (0.25, 0.5, 1.0):
    f = holder_sine(alpha)
    curves = [error_curve(fam, oracle, f, tau, DEFAULT_NS) for tau in (0.25, 0.5, 1.0)]
    fit = fit_rate(curves[-1])
    ok = subspace_probe(curves, power_rate(alpha)).bounded
    faster = subspace_probe(curves, power_rate(alpha + 0.3)).bounded
    print(f"alpha={alpha}: fitted {fit.exponent:.3f}; error/n^-alpha bounded: {ok}; "
          f"error/n^-(alpha+0.3) bounded: {faster}")

# ## Slow convergence
#
# Perturbing the exact shift by t w(1/t) makes the n-th power miss by t w(n/t).
# With w(x) = 1/ln(e + x) the error falls below any power of 1/n eventually, yet
# stays above w(n)/2.

res = slow_convergence_experiment(inverse_log_rate(), 1.0)
for n, e, b in zip(res.curve.ns, res.curve.errors, res.lower_bounds):
    print(f"{n:5d}  error {e:.4f}  bound {b:.4f}")
print("bound holds beyond n0 =", res.n0)
print("fitted exponent over this range:", round(fit_rate(res.curve).exponent, 3))

# # Checking the hypotheses of a Chernoff family
#
# Three checks: G(0) is the identity, (G(t) f - f)/t approaches the generator,
# and ||G(t)|| <= exp(omega t).

import numpy as np

from chernoff_lab.chernoff import (
    generator_action,
    heat_G,
    heat_S,
    norm_growth_check,
    tangency_check,
    tangency_ok,
    translation_exact,
)
from chernoff_lab.experiments import default_domain
from chernoff_lab.testfns import gaussian, sine

ts = [10.0 ** -k for k in range(1, 6)]

for fam in (heat_G(1.0), heat_S(1.0), translation_exact()):
    print(f"\n## {fam.name}")
    print("G(0):", fam(0.0).atoms)
    for f in (sine(1), gaussian(1)):
        res = tangency_check(fam, f, generator_action(fam, f), ts, default_domain(f))
        print(f"tangency on {f.name}:", np.array2string(res, precision=3), "ok" if tangency_ok(res) else "FAILED")
    ng = norm_growth_check(fam, np.logspace(-3, 0, 7))
    print(f"norm growth omega ~ {ng.omega_estimate:.2e}, satisfied: {ng.satisfied}")

# # Shift mixtures
#
# An operator of the form f(x) -> sum_j w_j f(x + s_j) is stored as a sorted list of
# (offset, weight) atoms. Composition of two such operators convolves their atoms,
# so n-fold powers stay exact and finite.

import numpy as np

from chernoff_lab import mixture as mx
from chernoff_lab.chernoff import heat_G, heat_S

# ## Building and composing

step = mx.make([(0.0, 0.5), (0.7, 0.5)])
print("one step:", step.atoms)
print("two steps:", mx.convolve(step, step).atoms)

# Offsets closer than the merge tolerance collapse into one atom.

print(mx.make([(0.0, 0.5), (1e-18, 0.5)]).atoms)

# ## Powers
#
# Powers use binary exponentiation. Lattice-supported mixtures such as the
# three-point heat step go through a dense np.convolve path.

G = heat_G(1.0)
p = mx.power(G(1 / 40), 40)
print("atoms in G(1/40)^40:", len(p))
print("mass, mean, variance:", mx.moment(p, 0), mx.moment(p, 1), mx.variance(p))

# ## Applying to a function

x = np.linspace(0, np.pi, 5)
print("G(1/40)^40 sin:", mx.apply(p, np.sin, x))
print("exp(-1) sin:   ", np.exp(-1) * np.sin(x))

# ## Characteristic function
#
# On e^{ikx} a mixture acts as multiplication by sum_j w_j e^{iks_j}; powers multiply.

S = heat_S(1.0)
m = S(0.1)
print(mx.charfn(mx.power(m, 10), 1.0), mx.charfn(m, 1.0) ** 10)

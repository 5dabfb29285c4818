# coding: utf-8

# # Translation semigroups on weighted L^p
#
# Cesàro integrals (1/b) ∫_0^b ||T_t f|| dt for step functions f, computed by
# adaptive Simpson quadrature split at the kinks of t -> ||T_t f||.

# In[1]:

import numpy as np

from meanchaos.semigroup import (MultiplicativeTranslation, StepFunction, Translation,
                                 acb_integral_check, cesaro_integral, sandwich_check,
                                 semigroup_norm)

f = StepFunction.indicator(1.0, 2.0)


# In[2]:

fam = MultiplicativeTranslation(1.0, 1.0)
ts = np.linspace(0.0, 2.0, 9)
np.array([semigroup_norm(fam, f, t) for t in ts])


# In[3]:

for b in (2.5, 5.0, 50.0):
    print(b, cesaro_integral(fam, f, b).value)


# The continuous means sit between discrete Cesàro means of T_1.

# In[4]:

for family in (Translation(), fam):
    rep = sandwich_check(family, f, 1.0, [2.5, 5.0, 50.0])
    print(type(family).__name__, rep.passed)


# Multiplier weights with exponent (1-eps)/p keep the normalised integrals bounded.

# In[5]:

for p in (1, 2):
    rep = acb_integral_check(0.5, p, f, [1.0, 10.0, 100.0, 1000.0], tau=1e-6)
    print(p, max(e.lhs for e in rep.entries), rep.passed)

# coding: utf-8

# # Backward shifts with unbounded and bounded orbits
#
# Two unilateral backward shifts: harmonic weights k/(k-1), and blocks of
# halves followed by blocks of twos.

# In[1]:

import numpy as np

from meanchaos import BlockHalvesTwos, Harmonic, SparseVec
from meanchaos.detect import construct_irregular_vector, mlycc_witness_search, verify_certificate
from meanchaos.shiftops import UnilateralBackward, orbit_norm


# ## Harmonic weights
#
# ||T^n e_(n+1)|| is exactly n+1.

# In[2]:

H = UnilateralBackward(Harmonic())
np.array([orbit_norm(H, SparseVec.basis(n + 1), n).to_real() for n in range(1, 11)])


# Smallest basis vectors whose Cesàro mean exceeds k, with the step where it happens.

# In[3]:

for w in mlycc_witness_search(H, k_max=5):
    print(w.k, w.y.indices[0], w.N)


# ## Blocks of halves and twos
#
# Every weight product stays at most 1, yet a Cesàro-irregular vector can be
# built stage by stage.

# In[4]:

B = UnilateralBackward(BlockHalvesTwos())
cert = construct_irregular_vector(B, C=2.0, stages=3, budget=10 ** 6)
for st in cert.stages:
    print(st.m, st.x, st.N)
print(cert.evaluations, "candidate evaluations")


# In[5]:

rep = verify_certificate(B, cert)
print(rep.passed)
for e in rep.entries[:4]:
    print(e.name, e.lhs, e.relation, e.rhs)

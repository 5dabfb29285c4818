# coding: utf-8

# # Cesàro means along a hill/valley weight
#
# The forward shift below has weights that dip towards zero and climb back,
# on index windows that grow like k^3. Orbit norms of e_0 are read off the
# weight profile directly, so the means can be evaluated at steps with
# hundreds of thousands of digits.

# In[1]:

import numpy as np

from meanchaos import build_tbilcami
from meanchaos.cesaro import TbilcamiDips, TbilcamiHills, cesaro_mean, cesaro_trace
from meanchaos.logcore import index_str
from meanchaos.shiftops import BilateralForward, SparseVec, orbit_norm_series


# The profile is lazy: anchors are generated on demand up to level k_max.

# In[2]:

profile = build_tbilcami("original", 10 ** 4)
T = BilateralForward(profile)
x = SparseVec.basis(0)


# Valley steps: the means drop below every positive threshold.

# In[3]:

dips = TbilcamiDips([1, 2, 3, 10, 100]).points()
series = orbit_norm_series(T, x, dips[-1])
trace = cesaro_trace(series, dips, "segment")
for N, v in zip(dips, trace.values):
    print(len(index_str(N)), "digits", v.to_real())


# The closed-form sums agree with the direct loop where both are cheap.

# In[4]:

for N in dips[:2]:
    print(N, cesaro_mean(series, N, "loop").to_real(), cesaro_mean(series, N, "segment").to_real())


# Hill steps: the means climb back, slowly.

# In[5]:

hills = TbilcamiHills([10, 100, 10 ** 4]).points()
series = orbit_norm_series(T, x, hills[-1])
means = np.array([v.to_real() for v in cesaro_trace(series, hills, "segment").values])
means


# In[6]:

np.diff(means) > 0


# With every hill flattened to 1 the means no longer recover.

# In[7]:

flat = BilateralForward(build_tbilcami("flattened", 100))
pts = TbilcamiHills([10, 100]).points()
s = orbit_norm_series(flat, x, pts[-1])
[v.to_real() for v in cesaro_trace(s, pts, "segment").values]

"""Bottleneck distance between diagrams on n points.

Run: python demos/01_bottleneck.py
"""
import numpy as np

from pdembed import DIAG, PersistenceDiagram, bottleneck_bruteforce, bottleneck_distance
from pdembed.verify import sample_diagram

# %% Two small diagrams.  Matching (0,10)->(1,9) and (4,6)->diagonal costs 1;
# the crossed matching would cost 5.
x = PersistenceDiagram([(0, 10), (4, 6)])
y = PersistenceDiagram([(1, 9), DIAG])
print("x =", x)
print("y =", y)
print("d_B(x, y) =", bottleneck_distance(x, y))

# %% Shorter diagrams are padded with diagonal entries, which does not change distances.
z = PersistenceDiagram([(1, 2)], n=3)
print("a single point against the empty diagram:", bottleneck_distance(z, PersistenceDiagram.diagonal(3)))

# %% The matching-based routine agrees exactly with the permutation oracle.
rng = np.random.default_rng(0)
agree = 0
for _ in range(300):
    a, b = sample_diagram(rng, 5, 10.0, 0.2), sample_diagram(rng, 5, 10.0, 0.2)
    agree += bottleneck_distance(a, b) == bottleneck_bruteforce(a, b)
print(f"{agree}/300 random 5-point pairs agree with brute force")

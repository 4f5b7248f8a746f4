"""Landmark cutoff map at one scale.

At scale R each landmark p (a multiset of grid points (mR, kR) and diagonal
entries) contributes max(3R/2 - d_B(p, x), 0).  Only a few landmarks are
non-zero for any x.

Run: python demos/02_single_scale.py
"""
import math

from pdembed import PersistenceDiagram, grid_candidates, key_to_text, phi_scale
from pdembed.grid import sparse_distance, sparse_norm

R = 1.0

# %% Candidate grid points for single points.
for p in [(2.2, 9.1), (2, 8), (1, 3.5), (5.0, 5.1)]:
    print(p, "->", sorted(grid_candidates(p, R)), "(0,0) is the diagonal")

# %% A two-point diagram: one point between two grid points, one near the diagonal.
x = PersistenceDiagram([(2, 8), (1, 3.5)])
e = phi_scale(x, R)
print(f"\nphi_R(x) has {len(e)} non-zero coordinates (bound 4^n = 16):")
for key, v in sorted(e.entries.items()):
    print(f"  {key_to_text(key, 1):>16}  {v:.4f}")
print(f"norm {sparse_norm(e):.4f} >= R/8 = {R / 8}")

# %% Far-apart diagrams land on disjoint supports.
y = PersistenceDiagram([(0, 20), (1, 3.5)])
print(f"\nd_B(x, y) = 6 >= 3R, image gap = {sparse_distance(phi_scale(x, R), phi_scale(y, R)):.4f} "
      f">= R sqrt(2)/8 = {R * math.sqrt(2) / 8:.4f}")

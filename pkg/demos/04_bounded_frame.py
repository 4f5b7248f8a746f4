"""Finite-dimensional map for diagrams in a frame [0, L]^2.

Covers landmark counts, the step and linear lower bounds, the uniform-scale
construction with its lambda shortcut, the loss of injectivity near the
diagonal, and a pair showing that the step bound stated for d_B >= R_i can
fail while the bound derived from 3R separation holds.

Run: python demos/04_bounded_frame.py
"""
from pdembed import (
    DIAG,
    PersistenceDiagram,
    bottleneck_distance,
    non_injectivity_witness,
    phi3,
    phi3_distance,
    rho3_linear,
    rho3_steps,
    rho3_steps_separated,
    uniform_spec,
)

# %% Evenly spaced scales on [1, 5) with constant weights, arity 4.
for N in (4, 19):
    spec, lam, slope = uniform_spec(1.0, 5.0, N, 4)
    print(f"N={N:>2}: lambda={lam:.4f} slope={slope:.3e} landmarks per scale {spec.landmark_counts[:4]}...")

spec = uniform_spec(1.0, 5.0, 4, 4)[0]
print("\n   t   steps      linear")
for t in [0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0]:
    print(f"{t:4.1f}  {rho3_steps(spec, t):.3e}  {rho3_linear(spec, t):.3e}")

# %% Two different diagrams with the same image: a short bar slides along the diagonal.
x, y = non_injectivity_witness(spec)
print(f"\nwitness: {x} vs {y}")
print(f"d_B = {bottleneck_distance(x, y):.3f}, image distance = {phi3_distance(phi3(x, spec), phi3(y, spec))}")

# %% A pair with d_B >= R_1 whose image gap is below the step value at R_1.
x = PersistenceDiagram([(0.847759953057437, 2.8934701642184617), (2.0884913156233513, 2.200094321229164),
                        (2.4245853596815863, 4.477527702394996), DIAG])
y = PersistenceDiagram([(0.8665841130634933, 2.9224198944686988), (2.406545434602359, 2.653907379520928),
                        (3.669563490102623, 4.441430928133093), DIAG])
d = bottleneck_distance(x, y)
gap = phi3_distance(phi3(x, spec), phi3(y, spec))
print(f"\nd_B = {d:.4f} >= R_1 = 1")
print(f"image gap {gap:.3e} vs step bound {rho3_steps(spec, d):.3e} "
      f"and separated bound {rho3_steps_separated(spec, d):.3e}")

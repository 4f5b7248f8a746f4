"""Injective angle map and its inverse.

Every point is seen from n+1 anchors (s, s) with s < 0; the sorted angles per
anchor determine the diagram.

Run: python demos/05_injective.py
"""
from pdembed import PersistenceDiagram, default_anchors, injective_embed, reconstruct
from pdembed.injective import IllConditionedError

L = 10.0
x = PersistenceDiagram([(1.0, 4.0), (2.0, 3.0), (2.0, 3.0)], n=4)
anchors = default_anchors(L, x.arity)
v = injective_embed(x, anchors, L)
print("anchors:", anchors.values)
print("image:", [round(c, 6) for c in v])
print("reconstructed:", reconstruct(v, anchors, x.arity))

# %% Points hugging the diagonal crowd the value pi/4 and cannot be told apart reliably.
near = PersistenceDiagram([(3.0, 3.0 + 1e-12)])
try:
    reconstruct(injective_embed(near, default_anchors(L, 1)), default_anchors(L, 1), 1)
except IllConditionedError as e:
    print("refused:", e)

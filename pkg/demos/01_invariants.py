"""
Legendrian invariants and the Stein 4-manifold they build
=========================================================

Read a grid diagram, take its front, and turn the front into a handlebody
with every 2-handle attached at framing tb - 1.
"""

from pathlib import Path

from steinkit import nucleus
from steinkit.diagram import classical_invariants, grid_to_front, parse_grid, stabilize
from steinkit.surgery import SpincOnW, SurgeryPresentation, hopf_and_grading, linking_matrix

data = Path(__file__).parent / "data"

# the standard unknot: tb = -1, rot = 0
grid = parse_grid((data / "unknot.grid").read_text())
front = grid_to_front(grid)
print("unknot", classical_invariants(front))

# each stabilization lowers tb by one and moves rot by one
for sign in (1, -1):
    print("stabilized", sign, classical_invariants(stabilize(front, 0, sign)))

# a trefoil and an unknot with n-2 kinks, k-1 of one sign and n-1-k of the other
for k in (1, 2):
    p = nucleus.trefoil_family_presentation(3, k)
    inv = linking_matrix(p)
    s = SpincOnW.from_presentation(p, inv)
    h = hopf_and_grading(inv, s)
    print(f"k={k}: Q={inv.linking_matrix} rot={s.rotation_vector} c1^2={s.c1_squared} "
          f"h={h.hopf_invariant} grading={h.grading}")

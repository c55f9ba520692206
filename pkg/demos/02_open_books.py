"""
From a front to a Lefschetz fibration over the disk
===================================================

Fronts made of slope +-1 segments sit on the fiber surface of a torus link.
The Hopf-band cores plus the link components are the vanishing cycles.
"""

from steinkit import nucleus, openbook
from steinkit.surgery import SurgeryPresentation, linking_matrix

p = nucleus.trefoil_family_presentation(3, 1)
fib = openbook.stein_to_palf(p)
s = fib.square_bridge
print(f"lines: {s.p} of slope +1, {s.q} of slope -1 (padding {s.padding})")
print(f"page: genus {fib.fiber_genus}, chi {fib.page.euler_char}, {fib.node_count} vanishing cycles")

for v in fib.framing_verdicts:
    print(v.name, v.data)

# H_1 of the boundary two ways: from the monodromy and from the linking matrix
print("coker(rho - I):", fib.boundary_homology())
print("b2 =", len(linking_matrix(p).linking_matrix), "and chi(W) =", fib.euler_char)

# the ribbon graph itself, for inspection
pg = openbook.torus_page(2, 3)
print("T(2,3) faces:", pg.graph.faces)

"""
Closing a Stein filling into a Lefschetz fibration over the sphere
==================================================================

Cap the binding, stabilizing the page to genus 2 when needed, then invert
the monodromy with positive twists and add two relator blocks.  The Euler
characteristic of the closed manifold is computed from the pieces and from
the fiber and node count; the two must agree.
"""

import time

from steinkit import assembly, nucleus, openbook
from steinkit.diagram import FrontDiagram
from steinkit.surgery import SpincOnW, SurgeryPresentation, linking_matrix

for name, p in [("ball", SurgeryPresentation(FrontDiagram(()))),
                ("n=4", nucleus.trefoil_family_presentation(4, 1))]:
    t = time.perf_counter()
    rep = assembly.close_up(openbook.stein_to_palf(p))
    print(f"{name}: fiber genus {rep.fiber_genus}, {rep.node_count} nodes, chi(X) = {rep.chi_X}, "
          f"pieces {rep.chi_pieces} ({time.perf_counter() - t:.2f}s)")
    print("  c1 offsets n -> 2n(2-2g):", rep.spinc_offsets)

# the cobordism maps separate the contact classes of the n-1 structures
n = 5
pres = [nucleus.trefoil_family_presentation(n, k) for k in range(1, n)]
inv = linking_matrix(pres[0])
cobor = assembly.theorem_cobor_report([SpincOnW.from_presentation(q, inv) for q in pres], None, inv)
for row in cobor.to_json()["matrix"]:
    print(" ".join(f"{x:9}" for x in row))
print(cobor.rank_bounds, "->", cobor.to_json()["statement"])

"""The trefoil family: Legendrian surgery on a trefoil and a kinked meridian.

``L_k`` consists of the maximal Legendrian right-handed trefoil (tb = 1) and a
Legendrian meridian unknot stabilized ``n - 2`` times, ``k - 1`` times
positively and ``n - k - 1`` times negatively.  Counting the two cusps of the
unstabilized unknot as one kink on each side gives ``k`` kinks on the right and
``n - k`` on the left, and rotation number ``2k - n``.  With Stein framings the
linking matrix is ``[[0, 1], [1, -n]]``: the 4-manifold is the nucleus ``N_n``.
"""

from __future__ import annotations

from functools import lru_cache

from .diagram import FrontDiagram, GridDiagram, grid_to_front, stabilize

# 7x7 grid: right-handed trefoil (component 0) and a meridian square around
# one of its corners (component 1), linking number +1.
BASE_GRID = GridDiagram(7, (1, 0, 2, 3, 4, 5, 6), (4, 3, 5, 0, 6, 1, 2))

# known HF-hat(-Sigma(2,3,6n-1)) for this family; carried as untested reference data
def reference_hf_hat(n: int) -> dict:
    return {"grading_+2": n, "grading_+1": n - 1}


@lru_cache(maxsize=None)
def trefoil_family_front(n: int, k: int) -> FrontDiagram:
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in 1..{n - 1}, got {k}")
    f = grid_to_front(BASE_GRID)
    for _ in range(k - 1):
        f = stabilize(f, 1, +1)
    for _ in range(n - k - 1):
        f = stabilize(f, 1, -1)
    return f


def trefoil_family_presentation(n: int, k: int):
    from .surgery import SurgeryPresentation

    return SurgeryPresentation(trefoil_family_front(n, k))

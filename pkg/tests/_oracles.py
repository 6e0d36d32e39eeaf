"""Independent cross-checks used by the tests.

The path enumerator deliberately avoids the layer recurrence of the
library: it walks every admissible step sequence and multiplies integer
numerators along the path, so agreement with the dynamic program is a
genuine two-route check and not the same code run twice.
"""
from fractions import Fraction
from math import lcm


def enumerate_paths(w, K):
    """Weights of confined paths by exhaustive depth-first search.

    Returns a list `layers` with layers[k][(i, j)] = total weight of
    the length-k paths from (0,0) to (i,j) staying in the quarter
    plane, as exact Fractions. Exponential in K; meant for K <= 8 on
    small supports.
    """
    items = [(i, j, f) for (i, j), f in w.items() if f != 0]
    denom = lcm(*(f.denominator for (_, _, f) in items))
    steps = [(i, j, int(f * denom)) for (i, j, f) in items]

    layers = [dict() for _ in range(K + 1)]
    layers[0][(0, 0)] = 1

    def extend(x, y, k, prod):
        if k == K:
            return
        for dx, dy, n in steps:
            nx, ny = x + dx, y + dy
            if nx < 0 or ny < 0:
                continue
            np = prod * n
            nk = k + 1
            key = (nx, ny)
            layers[nk][key] = layers[nk].get(key, 0) + np
            extend(nx, ny, nk, np)

    extend(0, 0, 0, 1)
    return [
        {pos: Fraction(v, denom ** k) for pos, v in layer.items()}
        for k, layer in enumerate(layers)
    ]

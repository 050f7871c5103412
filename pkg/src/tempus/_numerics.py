"""Finite-difference helpers shared by the temporal and dispersion modules."""

import numpy as np


def _stencil_starts(n, width):
    """Start index of the ``width``-point stencil used at every grid point.

    Interior points get a centred stencil; points near either edge get the
    nearest one-sided stencil of the same width.
    """
    half = width // 2
    starts = np.arange(n) - half
    return np.clip(starts, 0, n - width)


def derivative(x, y, order=4):
    """First derivative of samples ``y(x)`` on a strictly increasing grid.

    ``order`` is the formal accuracy (2 or 4): an ``order + 1`` point
    Lagrange stencil, centred in the interior and one-sided at the edges.
    Non-uniform spacing is handled exactly by differentiating the local
    interpolating polynomial.
    """
    if order not in (2, 4):
        raise ValueError(f"order must be 2 or 4, got {order}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    n = x.size
    width = order + 1
    if n < width:
        raise ValueError(f"need at least {width} points for order {order}, got {n}")

    idx = _stencil_starts(n, width)[:, None] + np.arange(width)[None, :]
    nodes = x[idx]                                  # (n, width)
    x0 = x[:, None]

    # derivative of the j-th Lagrange basis polynomial at x0:
    #   L_j'(x0) = sum_{k != j} 1/(x_j - x_k) prod_{l != j,k} (x0 - x_l)/(x_j - x_l)
    diff = nodes[:, :, None] - nodes[:, None, :]    # x_j - x_k
    eye = np.eye(width, dtype=bool)
    diff_safe = np.where(eye, 1.0, diff)
    num = x0 - nodes                                # x0 - x_l
    weights = np.zeros_like(nodes)
    for j in range(width):
        total = 0.0
        for k in range(width):
            if k == j:
                continue
            term = 1.0 / diff_safe[:, j, k]
            for l in range(width):
                if l == j or l == k:
                    continue
                term = term * num[:, l] / diff_safe[:, j, l]
            total = total + term
        weights[:, j] = total
    return np.sum(weights * y[idx], axis=1)


def richardson_derivative(f, x, h, levels=3):
    """Central-difference derivative of ``f`` at ``x`` with Richardson extrapolation.

    Works for complex-valued ``f``. Error is O(h**(2*levels)).
    """
    table = []
    step = h
    for _ in range(levels):
        table.append((f(x + step) - f(x - step)) / (2.0 * step))
        step /= 2.0
    for level in range(1, levels):
        factor = 4.0 ** level
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0)
                 for i in range(len(table) - 1)]
    return table[0]


def default_step(x):
    return max(1e-6, 1e-6 * abs(x))

"""Compensated summation helpers.

Spectrum normalizations and entropy sums can run over up to 1e8 addends;
plain left-to-right accumulation loses digits long before that.  Arrays are
summed pairwise in blocks and the block partials are combined with a
Neumaier (improved Kahan) carry.
"""

import numpy as np

_BLOCK = 1 << 16


def compensated_sum(values) -> float:
    """Sum of a 1-D array of floats with a compensated carry."""
    a = np.ascontiguousarray(values, dtype=np.float64).ravel()
    s = 0.0
    c = 0.0
    for start in range(0, a.size, _BLOCK):
        x = float(a[start:start + _BLOCK].sum())
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c

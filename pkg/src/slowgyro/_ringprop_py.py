"""Pure-Python twin of the compiled ring-propagation kernel.

Selected at import time when the Cython extension is unavailable (or when
SLOWGYRO_PURE=1 forces it).  Must stay semantically identical to
_ringprop.pyx: same fixed-step fourth-order scheme, same right-hand side,
same return contract.
"""

import math

import numpy as np

BACKEND = "python"


def _rhs(y, loss, pref, tan2, rc2, vrec_c, gate):
    s = math.exp(2.0 * y.real) / rc2
    d1 = 1.0 + s
    sat2 = tan2 / (d1 * d1)
    sat3 = sat2 / d1
    return complex(-loss, pref * (1.0 + gate * sat2) / (1.0 + vrec_c * sat3))


def integrate(y0, h, n_steps, loss, pref, tan2, rc2, vrec_c, gate):
    """Integrate d/dx ln(rabi_p) = -loss + i*k_p*chi'(s) over n_steps of
    size h, re-evaluating the saturation s from the local amplitude.

    Returns (log-amplitude samples at the n_steps+1 grid points,
    largest per-step increment |h * dy/dx| seen).
    """
    out = np.empty(n_steps + 1, dtype=complex)
    y = complex(y0)
    out[0] = y
    max_step = 0.0
    for i in range(n_steps):
        k1 = _rhs(y, loss, pref, tan2, rc2, vrec_c, gate)
        k2 = _rhs(y + 0.5 * h * k1, loss, pref, tan2, rc2, vrec_c, gate)
        k3 = _rhs(y + 0.5 * h * k2, loss, pref, tan2, rc2, vrec_c, gate)
        k4 = _rhs(y + h * k3, loss, pref, tan2, rc2, vrec_c, gate)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = y
        step = abs(h * k1)
        if step > max_step:
            max_step = step
    return out, max_step

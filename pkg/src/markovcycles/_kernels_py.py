"""Pure-python (numpy) fallback for the compiled kernels.

Vectorised over the node axis but looping over poles / series terms in the
same order as the compiled code, so both backends agree to rounding noise.
"""

from __future__ import annotations

import numpy as np


def pole_pair_sums(nodes: np.ndarray, w: np.ndarray, wt: np.ndarray) -> np.ndarray:
    """out[k] = sum_i (w[i]-wt[i]) / ((z_k-w[i]) (z_k-wt[i])), Kahan-compensated."""
    nodes = np.ascontiguousarray(nodes, dtype=np.complex128)
    w = np.ascontiguousarray(w, dtype=np.float64)
    wt = np.ascontiguousarray(wt, dtype=np.float64)
    if w.shape != wt.shape:
        raise ValueError("pole arrays must have equal length")
    s = np.zeros_like(nodes)
    c = np.zeros_like(nodes)
    for wi, wti in zip(w, wt):
        term = (wi - wti) / ((nodes - wi) * (nodes - wti))
        y = term - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


def eisenstein_pair(
    q: np.ndarray, sigma3: np.ndarray, sigma5: np.ndarray, nterms: int
) -> tuple[np.ndarray, np.ndarray]:
    """E4 and E6 partial sums: 1 + 240 sum sigma3(n) q^n, 1 - 504 sum sigma5(n) q^n."""
    q = np.ascontiguousarray(q, dtype=np.complex128)
    if nterms > len(sigma3) or nterms > len(sigma5):
        raise ValueError("divisor tables shorter than requested term count")
    qn = np.ones_like(q)
    s4 = np.zeros_like(q)
    s6 = np.zeros_like(q)
    for n in range(nterms):
        qn = qn * q
        s4 = s4 + sigma3[n] * qn
        s6 = s6 + sigma5[n] * qn
    return 1.0 + 240.0 * s4, 1.0 - 504.0 * s6

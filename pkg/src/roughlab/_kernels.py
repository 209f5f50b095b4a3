"""Compiled inner loops for the rough-path partition programs.

The partition dynamic programs and the greedy block walker are O(n^2) with
tiny per-pair work (a d x d tensor norm); at Monte Carlo scale the numpy
call overhead dominates, so these run as numba kernels over the prefix
arrays P_i = x_i - x_0 and A_i = X_{0,i}.  Pairwise weights are evaluated
inline from Chen's relation: X_{j,i} = A_i - A_j - P_j (x) (P_i - P_j).
"""
import numpy as np
from numba import njit


@njit(cache=True)
def pvar_dp_pow(values, p):
    """Max over partitions of the sum of |increment|^p for sampled values
    (m, d): the p-variation dynamic program, before the 1/p root."""
    m, d = values.shape
    best = np.zeros(m)
    for i in range(1, m):
        top = -1.0
        for j in range(i):
            acc = 0.0
            for a in range(d):
                diff = values[i, a] - values[j, a]
                acc += diff * diff
            cand = best[j] + acc ** (0.5 * p)
            if cand > top:
                top = cand
        best[i] = top
    return best[m - 1]


@njit(cache=True)
def prefix_tensors(level2, dx):
    """Prefix arrays (A, P) from per-segment tensors and increments."""
    nseg, d, _ = level2.shape
    P = np.zeros((nseg + 1, d))
    A = np.zeros((nseg + 1, d, d))
    for i in range(nseg):
        for a in range(d):
            P[i + 1, a] = P[i, a] + dx[i, a]
        for a in range(d):
            for b in range(d):
                A[i + 1, a, b] = A[i, a, b] + level2[i, a, b] + P[i, a] * dx[i, b]
    return A, P


@njit(cache=True, inline="always")
def _pair_weights_sq(P, A, j, i):
    """(|x_{j,i}|^2, |X_{j,i}|_F^2) for grid indices j < i."""
    d = P.shape[1]
    acc1 = 0.0
    for a in range(d):
        diff = P[i, a] - P[j, a]
        acc1 += diff * diff
    acc2 = 0.0
    for a in range(d):
        for b in range(d):
            e = A[i, a, b] - A[j, a, b] - P[j, a] * (P[i, b] - P[j, b])
            acc2 += e * e
    return acc1, acc2


@njit(cache=True)
def rough_dp_pow(P, A, s, t, p):
    """Partition suprema over [s, t]: max sum |x|^p and max sum |X|^{p/2}."""
    m = t - s + 1
    best1 = np.zeros(m)
    best2 = np.zeros(m)
    for io in range(1, m):
        i = s + io
        b1 = -1.0
        b2 = -1.0
        for jo in range(io):
            sq1, sq2 = _pair_weights_sq(P, A, s + jo, i)
            c1 = best1[jo] + sq1 ** (0.5 * p)
            if c1 > b1:
                b1 = c1
            c2 = best2[jo] + sq2 ** (0.25 * p)
            if c2 > b2:
                b2 = c2
        best1[io] = b1
        best2[io] = b2
    return best1[m - 1], best2[m - 1]


@njit(cache=True)
def rough_greedy_count(P, A, s, t, p, alpha):
    """Greedy accumulation count of the homogeneous control over [s, t].

    Each block restarts the incremental dynamic programs at the previous
    stopping point and walks right until the control reaches alpha.
    """
    count = 0
    cur = s
    while cur < t:
        span = t - cur
        best1 = np.zeros(span + 1)
        best2 = np.zeros(span + 1)
        hit = -1
        for off in range(1, span + 1):
            i = cur + off
            b1 = -1.0
            b2 = -1.0
            for jo in range(off):
                sq1, sq2 = _pair_weights_sq(P, A, cur + jo, i)
                c1 = best1[jo] + sq1 ** (0.5 * p)
                if c1 > b1:
                    b1 = c1
                c2 = best2[jo] + sq2 ** (0.25 * p)
                if c2 > b2:
                    b2 = c2
            best1[off] = b1
            best2[off] = b2
            control = (b1 ** (1.0 / p) + b2 ** (2.0 / p)) ** p
            if control >= alpha:
                hit = i
                break
        if hit < 0 or hit == t:
            break
        count += 1
        cur = hit
    return count


@njit(cache=True)
def rough_pair_diff_dp_pow(P1, A1, P2, A2, s, t, p):
    """Partition suprema of the level-wise differences of two rough paths."""
    m = t - s + 1
    best1 = np.zeros(m)
    best2 = np.zeros(m)
    d = P1.shape[1]
    for io in range(1, m):
        i = s + io
        b1 = -1.0
        b2 = -1.0
        for jo in range(io):
            j = s + jo
            acc1 = 0.0
            for a in range(d):
                diff = (P1[i, a] - P1[j, a]) - (P2[i, a] - P2[j, a])
                acc1 += diff * diff
            acc2 = 0.0
            for a in range(d):
                for b in range(d):
                    e1 = A1[i, a, b] - A1[j, a, b] - P1[j, a] * (P1[i, b] - P1[j, b])
                    e2 = A2[i, a, b] - A2[j, a, b] - P2[j, a] * (P2[i, b] - P2[j, b])
                    e = e1 - e2
                    acc2 += e * e
            c1 = best1[jo] + acc1 ** (0.5 * p)
            if c1 > b1:
                b1 = c1
            c2 = best2[jo] + acc2 ** (0.25 * p)
            if c2 > b2:
                b2 = c2
        best1[io] = b1
        best2[io] = b2
    return best1[m - 1], best2[m - 1]

"""Numpy fallback for the closure kernels (same contract as ``_ckernels``)."""
import numpy as np

INF = 1 << 61


def _add(col, row):
    s = col + row - ((col | row) & 1)
    s[(col >= INF) | (row >= INF)] = INF
    return s


def close(m):
    n = m.shape[0]
    for k in range(n):
        np.minimum(m, _add(m[:, k:k + 1], m[k:k + 1, :]), out=m)
        if m[k, k] < 1:
            return False
    return bool(np.all(np.diagonal(m) >= 1))


def close_edge(m, i, j):
    mij = m[i, j]
    back = m[j, i]
    if mij < INF and back < INF and mij + back - ((mij | back) & 1) < 1:
        m[i, i] = mij + back - ((mij | back) & 1)
        return False
    via = _add(m[:, i:i + 1], np.full((1, 1), mij, dtype=np.int64))
    np.minimum(m, _add(via, m[j:j + 1, :]), out=m)
    return True

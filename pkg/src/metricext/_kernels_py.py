"""Pure-Python twin of the compiled pair-integration kernel."""
import numpy as np


def _merge(ends1, labels1, i, stop1, ends2, labels2, j, stop2, table):
    prev = 0.0
    acc = 0.0
    while i < stop1 and j < stop2:
        e1, e2 = ends1[i], ends2[j]
        cut = e1 if e1 < e2 else e2
        acc += (cut - prev) * table[labels1[i]][labels2[j]]
        prev = cut
        if e1 == cut:
            i += 1
        if e2 == cut:
            j += 1
    return acc


def integrate_one(ends1, labels1, ends2, labels2, table):
    return _merge(list(ends1), list(labels1), 0, len(ends1),
                  list(ends2), list(labels2), 0, len(ends2), np.asarray(table).tolist())


def integrate_all(offsets, ends, labels, table, symmetric=False):
    offsets = [int(o) for o in offsets]
    ends = list(map(float, ends))
    labels = [int(v) for v in labels]
    rows = np.asarray(table).tolist()
    n = len(offsets) - 1
    out = np.empty((n, n))
    for y in range(n):
        for z in range(y if symmetric else 0, n):
            out[y, z] = _merge(ends, labels, offsets[y], offsets[y + 1],
                               ends, labels, offsets[z], offsets[z + 1], rows)
            if symmetric:
                out[z, y] = out[y, z]
    return out

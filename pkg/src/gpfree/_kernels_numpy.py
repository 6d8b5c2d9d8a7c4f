"""No-JIT twins of the numba kernels.

Same signatures, same traversal order, same node accounting and
tie-breaking as _kernels_numba — any divergence between the two modules
is a bug (tests/test_backends.py holds them together). Feasibility here
uses Python big-int bitmasks; the enumeration oracle is vectorized with
numpy over chunks of the subset space.
"""

from __future__ import annotations

import numpy as np

STATUS_OK = 0
STATUS_BUDGET = 1

_CHUNK_BITS = 20


def _ap_pred_masks(ell, k):
    """pred[e] = bitmasks m such that chosen ⊇ m means adding e closes an AP."""
    pred = []
    for e in range(ell):
        masks = []
        for d in range(1, e // (k - 1) + 1):
            m = 0
            for j in range(1, k):
                m |= 1 << (e - j * d)
            masks.append(m)
        pred.append(masks)
    return pred


def rk_step(ell, k, ub, best_init, max_value, node_budget):
    """See _kernels_numba.rk_step; identical contract."""
    pred = _ap_pred_masks(ell, k)
    state = bytearray(ell)
    chosen_bits = 0
    witness_bits = 0
    best = best_init
    count = 0
    nodes = 0
    status = STATUS_OK
    pos = 0
    descend = True
    while pos >= 0:
        if descend:
            if pos == ell:
                descend = False
                pos -= 1
                continue
            if count + ub[ell - pos] <= best:
                descend = False
                pos -= 1
                continue
            nodes += 1
            if nodes > node_budget:
                status = STATUS_BUDGET
                break
            feasible = True
            for m in pred[pos]:
                if chosen_bits & m == m:
                    feasible = False
                    break
            if feasible:
                chosen_bits |= 1 << pos
                count += 1
                state[pos] = 1
                if count > best:
                    best = count
                    witness_bits = chosen_bits
                    if best >= max_value:
                        break
            else:
                state[pos] = 2
            pos += 1
        else:
            if state[pos] == 1:
                chosen_bits &= ~(1 << pos)
                count -= 1
                state[pos] = 2
                pos += 1
                descend = True
            else:
                state[pos] = 0
                pos -= 1
    witness = np.zeros(ell, np.uint8)
    for i in range(ell):
        if witness_bits >> i & 1:
            witness[i] = 1
    return status, int(best), witness, nodes


def rk_oracle_max(ell, ap_masks):
    """See _kernels_numba.rk_oracle_max; identical contract."""
    best = 0
    total = 1 << ell
    chunk = 1 << _CHUNK_BITS
    masks = np.asarray(ap_masks, dtype=np.uint64)
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        arr = np.arange(lo, hi, dtype=np.uint64)
        valid = np.ones(arr.shape[0], dtype=bool)
        for m in masks:
            valid &= (arr & m) != m
        if valid.any():
            c = int(np.bitwise_count(arr[valid]).max())
            if c > best:
                best = c
    return best


def avoid_max(n, pred_ptr, pred_masks):
    """See _kernels_numba.avoid_max; identical contract."""
    preds = [
        [int(pred_masks[i]) for i in range(int(pred_ptr[e]), int(pred_ptr[e + 1]))]
        for e in range(n)
    ]
    state = bytearray(n)
    chosen_bits = 0
    count = 0
    best = 0
    pos = 0
    descend = True
    while pos >= 0:
        if descend:
            if pos == n:
                descend = False
                pos -= 1
                continue
            if count + (n - pos) <= best:
                descend = False
                pos -= 1
                continue
            feasible = True
            for m in preds[pos]:
                if chosen_bits & m == m:
                    feasible = False
                    break
            if feasible:
                chosen_bits |= 1 << pos
                count += 1
                state[pos] = 1
                if count > best:
                    best = count
            else:
                state[pos] = 2
            pos += 1
        else:
            if state[pos] == 1:
                chosen_bits &= ~(1 << pos)
                count -= 1
                state[pos] = 2
                pos += 1
                descend = True
            else:
                state[pos] = 0
                pos -= 1
    return best

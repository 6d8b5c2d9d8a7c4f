"""numba-compiled search kernels.

Three hot loops live here: the branch-and-bound row solver for the
AP-free extremal table, the exhaustive subset-enumeration oracle, and
the pattern-avoiding DFS behind the progression oracles. The no-JIT
twins are in _kernels_numpy; the two modules must keep identical
traversal order, node accounting and tie-breaking so that results never
depend on the selected backend.

Conventions shared by both backends:

* the DFS walks ground elements in increasing order and tries "include"
  before "exclude", so the first subset recorded at any size is the
  lexicographically least one of that size;
* a node is counted when a fresh position is expanded, i.e. after the
  bound check passes and before feasibility is probed;
* bound check is ``count + ub[remaining] <= best`` (ties pruned: only a
  strict improvement is ever recorded).
"""

from __future__ import annotations

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_BUDGET = 1


@njit(cache=True)
def _completes_ap(chosen, e, k):
    # True iff adding e creates a k-term AP whose largest element is e.
    # Elements are added in increasing order, so checking completions at
    # the top element catches every AP exactly once.
    dmax = e // (k - 1)
    for d in range(1, dmax + 1):
        x = e - d
        hit = True
        for _ in range(k - 1):
            if chosen[x] == 0:
                hit = False
                break
            x -= d
        if hit:
            return True
    return False


@njit(cache=True)
def rk_step(ell, k, ub, best_init, max_value, node_budget):
    """Solve one table row: largest AP-free subset of {0..ell-1}.

    ub[j] must upper-bound what any window of j consecutive ground
    elements can contribute (ub[ell] doubles as the hard value cap).
    Returns (status, best, witness_membership, nodes_used); the witness
    is the lexicographically least subset of the returned size.
    """
    chosen = np.zeros(ell, np.uint8)
    state = np.zeros(ell, np.int8)
    witness = np.zeros(ell, np.uint8)
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
            if _completes_ap(chosen, pos, k):
                state[pos] = 2
            else:
                chosen[pos] = 1
                count += 1
                state[pos] = 1
                if count > best:
                    best = count
                    for i in range(ell):
                        witness[i] = chosen[i]
                    if best >= max_value:
                        break
            pos += 1
        else:
            if state[pos] == 1:
                chosen[pos] = 0
                count -= 1
                state[pos] = 2
                pos += 1
                descend = True
            else:
                state[pos] = 0
                pos -= 1
    return status, best, witness, nodes


@njit(cache=True)
def rk_oracle_max(ell, ap_masks):
    """Enumerate all 2**ell subsets; return the largest AP-free size.

    Deliberately blind: no pruning, no structure shared with rk_step.
    """
    best = 0
    total = np.int64(1) << ell
    for mask_val in range(total):
        ok = True
        for i in range(ap_masks.shape[0]):
            m = ap_masks[i]
            if mask_val & m == m:
                ok = False
                break
        if ok:
            c = 0
            v = mask_val
            while v:
                v &= v - 1
                c += 1
            if c > best:
                best = c
    return best


@njit(cache=True)
def avoid_max(n, pred_ptr, pred_masks):
    """Largest subset of {1..n} never completing a forbidden pattern.

    Element e (bit e-1) is blocked exactly when some mask in
    pred_masks[pred_ptr[e-1]:pred_ptr[e]] is fully chosen. Cardinality
    bound only; independent of any chain or table structure.
    """
    state = np.zeros(n, np.int8)
    chosen_mask = np.int64(0)
    one = np.int64(1)
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
            for i in range(pred_ptr[pos], pred_ptr[pos + 1]):
                m = pred_masks[i]
                if chosen_mask & m == m:
                    feasible = False
                    break
            if feasible:
                chosen_mask |= one << pos
                count += 1
                state[pos] = 1
                if count > best:
                    best = count
            else:
                state[pos] = 2
            pos += 1
        else:
            if state[pos] == 1:
                chosen_mask &= ~(one << pos)
                count -= 1
                state[pos] = 2
                pos += 1
                descend = True
            else:
                state[pos] = 0
                pos -= 1
    return best

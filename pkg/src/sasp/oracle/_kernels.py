"""Candidate enumeration kernels for stable model search.

A candidate is a bitmask over the choice atoms (atoms occurring under
negation). For each candidate S the kernel takes the reduct with respect to
S, computes its least model M, and keeps S when M agrees with S on the
choice atoms and derives no constraint violation.

The numba kernel is used when numba imports and SASP_DISABLE_NUMBA is unset;
otherwise a vectorized numpy version runs.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False


def numba_enabled() -> bool:
    return HAS_NUMBA and os.environ.get("SASP_DISABLE_NUMBA", "") in ("", "0")


class Packed:
    """Rule arrays in CSR form."""

    def __init__(self, n_atoms, rules, choice):
        self.n_atoms = n_atoms
        self.n_rules = len(rules)
        self.head = np.array([r[0] for r in rules], dtype=np.int64)
        self.pos_ptr = np.zeros(len(rules) + 1, dtype=np.int64)
        self.neg_ptr = np.zeros(len(rules) + 1, dtype=np.int64)
        pos, neg = [], []
        for i, (_, p, n) in enumerate(rules):
            pos.extend(p)
            neg.extend(n)
            self.pos_ptr[i + 1] = len(pos)
            self.neg_ptr[i + 1] = len(neg)
        self.pos_idx = np.array(pos, dtype=np.int64)
        self.neg_idx = np.array(neg, dtype=np.int64)
        occ = [[] for _ in range(n_atoms)]
        for i, (_, p, _n) in enumerate(rules):
            for a in p:
                occ[a].append(i)
        self.occ_ptr = np.zeros(n_atoms + 1, dtype=np.int64)
        flat = []
        for a in range(n_atoms):
            flat.extend(occ[a])
            self.occ_ptr[a + 1] = len(flat)
        self.occ_idx = np.array(flat, dtype=np.int64)
        self.choice = np.array(choice, dtype=np.int64)


def _enumerate_py(n_atoms, head, pos_ptr, pos_idx, neg_ptr, neg_idx, occ_ptr, occ_idx, choice):
    k = choice.shape[0]
    n_rules = head.shape[0]
    found = np.empty(1 << k, dtype=np.int64)
    n_found = 0
    in_s = np.zeros(n_atoms, dtype=np.bool_)
    lm = np.zeros(n_atoms, dtype=np.bool_)
    remaining = np.zeros(n_rules, dtype=np.int64)
    active = np.zeros(n_rules, dtype=np.bool_)
    queue = np.empty(n_atoms + 1, dtype=np.int64)
    for s in range(1 << k):
        for a in range(n_atoms):
            in_s[a] = False
            lm[a] = False
        for j in range(k):
            if (s >> j) & 1:
                in_s[choice[j]] = True
        qh = 0
        qt = 0
        violated = False
        for r in range(n_rules):
            act = True
            for t in range(neg_ptr[r], neg_ptr[r + 1]):
                if in_s[neg_idx[t]]:
                    act = False
                    break
            active[r] = act
            remaining[r] = pos_ptr[r + 1] - pos_ptr[r]
            if act and remaining[r] == 0:
                h = head[r]
                if h < 0:
                    violated = True
                elif not lm[h]:
                    lm[h] = True
                    queue[qt] = h
                    qt += 1
        while qh < qt and not violated:
            a = queue[qh]
            qh += 1
            for t in range(occ_ptr[a], occ_ptr[a + 1]):
                r = occ_idx[t]
                remaining[r] -= 1
                if remaining[r] == 0 and active[r]:
                    h = head[r]
                    if h < 0:
                        violated = True
                        break
                    if not lm[h]:
                        lm[h] = True
                        queue[qt] = h
                        qt += 1
        if violated:
            continue
        ok = True
        for j in range(k):
            if lm[choice[j]] != (((s >> j) & 1) == 1):
                ok = False
                break
        if ok:
            found[n_found] = s
            n_found += 1
    return found[:n_found]


if HAS_NUMBA:
    _enumerate_nb = njit(cache=True)(_enumerate_py)
else:  # pragma: no cover
    _enumerate_nb = None


def _enumerate_np(packed: Packed, chunk: int = 4096):
    """Vectorized over candidates: boolean matrix products drive the fixpoint."""
    n, R = packed.n_atoms, packed.n_rules
    k = len(packed.choice)
    pos_inc = np.zeros((R, n), dtype=np.float32)
    neg_inc = np.zeros((R, n), dtype=np.float32)
    for r in range(R):
        pos_inc[r, packed.pos_idx[packed.pos_ptr[r]:packed.pos_ptr[r + 1]]] = 1
        neg_inc[r, packed.neg_idx[packed.neg_ptr[r]:packed.neg_ptr[r + 1]]] = 1
    pos_count = pos_inc.sum(axis=1)
    # column n collects constraint violations
    head_inc = np.zeros((R, n + 1), dtype=np.float32)
    for r in range(R):
        h = packed.head[r]
        head_inc[r, h if h >= 0 else n] = 1
    out = []
    total = 1 << k
    bits = np.arange(k, dtype=np.int64)
    for start in range(0, total, chunk):
        cand = np.arange(start, min(start + chunk, total), dtype=np.int64)
        s_bits = ((cand[:, None] >> bits[None, :]) & 1).astype(bool)
        in_s = np.zeros((len(cand), n), dtype=np.float32)
        in_s[:, packed.choice] = s_bits
        active = (in_s @ neg_inc.T) == 0
        lm = np.zeros((len(cand), n + 1), dtype=np.float32)
        while True:
            sat = (lm[:, :n] @ pos_inc.T) >= pos_count[None, :]
            fire = (active & sat).astype(np.float32)
            new = ((fire @ head_inc) > 0).astype(np.float32)
            if np.array_equal(new, lm):
                break
            lm = new
        ok = lm[:, n] == 0
        ok &= np.all((lm[:, packed.choice] > 0) == s_bits, axis=1)
        out.append(cand[ok])
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def enumerate_choice_sets(packed: Packed, use_numba: bool | None = None) -> np.ndarray:
    """Return the bitmasks of all choice sets that yield a stable model."""
    if use_numba is None:
        use_numba = numba_enabled()
    if use_numba and _enumerate_nb is not None:
        return _enumerate_nb(
            packed.n_atoms, packed.head, packed.pos_ptr, packed.pos_idx, packed.neg_ptr,
            packed.neg_idx, packed.occ_ptr, packed.occ_idx, packed.choice,
        )
    return _enumerate_np(packed)


def least_model_of(packed: Packed, s: int) -> np.ndarray:
    """Least model of the reduct selected by choice bitmask s, as atom ids."""
    k = len(packed.choice)
    n = packed.n_atoms
    in_s = np.zeros(n, dtype=bool)
    for j in range(k):
        if (s >> j) & 1:
            in_s[packed.choice[j]] = True
    lm = np.zeros(n, dtype=bool)
    changed = True
    while changed:
        changed = False
        for r in range(packed.n_rules):
            neg = packed.neg_idx[packed.neg_ptr[r]:packed.neg_ptr[r + 1]]
            if in_s[neg].any():
                continue
            pos = packed.pos_idx[packed.pos_ptr[r]:packed.pos_ptr[r + 1]]
            h = packed.head[r]
            if h >= 0 and not lm[h] and lm[pos].all():
                lm[h] = True
                changed = True
    return np.flatnonzero(lm)

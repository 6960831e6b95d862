"""Batch kernels over lasso words.

Every kernel works on a batch of lassos sharing one shape: ``pre`` is an
``(N, P)`` array of prefix letters and ``per`` an ``(N, Q)`` array of period
letters, ``Q >= 1``.  Two interchangeable implementations exist:

* ``numba``: per-lasso loops compiled with ``numba.njit``; runs are simulated
  until the (state, period position) pair repeats.
* ``numpy``: vectorised over the batch; runs are iterated for ``|S|`` whole
  periods to enter the cycle of period-boundary states and for ``|S|`` more
  to collect the states (or edges) on the cycle.

The numba path is the default.  Set ``LTLRABIN_DISABLE_NUMBA=1`` (or call
:func:`set_backend`) to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

BACKENDS = ("numba", "numpy")

_disabled = os.environ.get("LTLRABIN_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
_backend = "numpy" if (_disabled or numba is None) else "numba"


def backend() -> str:
    return _backend


def set_backend(name: str) -> str:
    """Select the kernel implementation; returns the previous one."""
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and numba is None:
        raise RuntimeError("numba is not installed")
    previous, _backend = _backend, name
    return previous


def _jit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# --------------------------------------------------------------------------
# least fixpoint of  u[i] = b[i] | (a[i] & u[next(i)])  on a lasso


def _until_loops(a, b, p):
    n_words, length = a.shape
    u = np.zeros((n_words, length), dtype=np.bool_)
    for n in range(n_words):
        # two sweeps over the period propagate witnesses across the wrap
        for _ in range(2):
            for i in range(length - 1, p - 1, -1):
                nxt = u[n, p] if i == length - 1 else u[n, i + 1]
                u[n, i] = b[n, i] or (a[n, i] and nxt)
        for i in range(p - 1, -1, -1):
            u[n, i] = b[n, i] or (a[n, i] and u[n, i + 1])
    return u


_until_jit = _jit(_until_loops)


def _until_numpy(a, b, p):
    length = a.shape[1]
    u = np.zeros(a.shape, dtype=bool)
    for _ in range(2):
        for i in range(length - 1, p - 1, -1):
            nxt = u[:, p] if i == length - 1 else u[:, i + 1]
            u[:, i] = b[:, i] | (a[:, i] & nxt)
    for i in range(p - 1, -1, -1):
        u[:, i] = b[:, i] | (a[:, i] & u[:, i + 1])
    return u


def until(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Truth of ``a U b`` at every position of every lasso in the batch.

    ``a`` and ``b`` are ``(N, P+Q)`` boolean arrays; position ``P+Q-1`` is
    followed by position ``p``.
    """
    a = np.ascontiguousarray(a, dtype=np.bool_)
    b = np.ascontiguousarray(b, dtype=np.bool_)
    if _backend == "numba":
        return _until_jit(a, b, p)
    return _until_numpy(a, b, p)


# --------------------------------------------------------------------------
# acceptance of deterministic automata with (generalised) Rabin conditions


def _accept_loops(trans, init, pre, per, fin, inf, owner, edge_based):
    n_words, plen = pre.shape
    qlen = per.shape[1]
    n_states, n_letters = trans.shape
    n_pairs = fin.shape[0]
    n_inf = inf.shape[0]
    out = np.zeros(n_words, dtype=np.bool_)
    seen = np.full((n_states, qlen), -1, dtype=np.int64)
    hist = np.empty(n_states * qlen + 1, dtype=np.int64)
    hist_state = np.empty(n_states * qlen + 1, dtype=np.int64)
    for n in range(n_words):
        s = init
        for i in range(plen):
            s = trans[s, pre[n, i]]
        pos = 0
        t = 0
        while seen[s, pos] < 0:
            seen[s, pos] = t
            a = per[n, pos]
            hist_state[t] = s
            hist[t] = s * n_letters + a if edge_based else s
            s = trans[s, a]
            pos += 1
            if pos == qlen:
                pos = 0
            t += 1
        start = seen[s, pos]
        for k in range(t):
            seen[hist_state[k], k % qlen] = -1
        accepted = False
        for r in range(n_pairs):
            hit_fin = False
            for k in range(start, t):
                if fin[r, hist[k]]:
                    hit_fin = True
                    break
            if hit_fin:
                continue
            ok = True
            for m in range(n_inf):
                if owner[m] != r:
                    continue
                hit = False
                for k in range(start, t):
                    if inf[m, hist[k]]:
                        hit = True
                        break
                if not hit:
                    ok = False
                    break
            if ok:
                accepted = True
                break
        out[n] = accepted
    return out


_accept_jit = _jit(_accept_loops)


def _accept_numpy(trans, init, pre, per, fin, inf, owner, edge_based):
    n_words, plen = pre.shape
    qlen = per.shape[1]
    n_states, n_letters = trans.shape
    s = np.full(n_words, init, dtype=np.int64)
    for i in range(plen):
        s = trans[s, pre[:, i]]
    for _ in range(n_states):
        for j in range(qlen):
            s = trans[s, per[:, j]]
    width = n_states * n_letters if edge_based else n_states
    visited = np.zeros((n_words, width), dtype=bool)
    rows = np.arange(n_words)
    for _ in range(n_states):
        for j in range(qlen):
            a = per[:, j]
            visited[rows, s * n_letters + a if edge_based else s] = True
            s = trans[s, a]
    v = visited.astype(np.float32)
    ok = (v @ fin.T.astype(np.float32)) == 0
    if inf.shape[0]:
        hit = (v @ inf.T.astype(np.float32)) > 0
        for m in range(inf.shape[0]):
            ok[:, owner[m]] &= hit[:, m]
    return ok.any(axis=1)


def accept(trans, init, pre, per, fin, inf, owner, edge_based: bool) -> np.ndarray:
    """Acceptance of each lasso by a complete deterministic automaton.

    ``trans[s, a]`` is the successor of state ``s`` on letter ``a``.  Pair
    ``r`` is satisfied when no element of ``fin[r]`` recurs and, for every
    row ``m`` of ``inf`` with ``owner[m] == r``, some element of ``inf[m]``
    recurs.  Elements are states, or edges ``s * n_letters + a`` when
    ``edge_based`` is set.
    """
    trans = np.ascontiguousarray(trans, dtype=np.int64)
    pre = np.ascontiguousarray(pre, dtype=np.int64)
    per = np.ascontiguousarray(per, dtype=np.int64)
    fin = np.ascontiguousarray(fin, dtype=np.bool_)
    inf = np.ascontiguousarray(inf, dtype=np.bool_)
    owner = np.ascontiguousarray(owner, dtype=np.int64)
    if _backend == "numba":
        return _accept_jit(trans, int(init), pre, per, fin, inf, owner, bool(edge_based))
    return _accept_numpy(trans, int(init), pre, per, fin, inf, owner, bool(edge_based))

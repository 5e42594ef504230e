"""Hot enumeration kernels: numba-compiled with a pure-numpy fallback.

The kernels do the float64 heavy lifting (heights of every lattice vector in
a coefficient box, approximation-quality scans); certified interval
recomputation of the few surviving candidates happens in the calling layer.
Backend selection: environment variable ``BADK_KERNEL`` set to ``numpy``
forces the fallback, ``numba`` requires the JIT (ImportError if missing);
unset prefers numba when importable.

Coefficient vectors are enumerated as little-endian base-(2*box+1) digits of
a linear index, so a kernel call is just a contiguous index range and both
backends agree on ordering exactly.
"""

from __future__ import annotations

import os

import numpy as np

_CHOICE = os.environ.get("BADK_KERNEL", "").strip().lower()
if _CHOICE not in ("", "numba", "numpy"):
    raise ValueError(f"BADK_KERNEL must be 'numba' or 'numpy', got {_CHOICE!r}")

if _CHOICE == "numpy":
    _HAVE_NUMBA = False
else:
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        if _CHOICE == "numba":
            raise
        _HAVE_NUMBA = False

BLOCK = 1 << 17


def backend() -> str:
    return "numba" if _HAVE_NUMBA else "numpy"


def combo_count(box: int, ncoef: int) -> int:
    total = (2 * box + 1) ** ncoef
    if total > 1 << 62:
        raise ValueError(f"coefficient box {box}^{ncoef} overflows the index space")
    return total


def decode_coeffs(idx: int, box: int, ncoef: int) -> tuple:
    radix = 2 * box + 1
    out = []
    for _ in range(ncoef):
        out.append(idx % radix - box)
        idx //= radix
    return tuple(out)


def _digits_block(start: int, stop: int, box: int, ncoef: int) -> np.ndarray:
    radix = 2 * box + 1
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((stop - start, ncoef), dtype=np.int64)
    for j in range(ncoef):
        digits[:, j] = idx % radix - box
        idx = idx // radix
    return digits


# ---------------------------------------------------------------------------
# heights of tau(a, b) * g over a coefficient box
# ---------------------------------------------------------------------------


def _heights_block_np(powers, gmat, eexp, box, start, stop):
    d = powers.shape[1]
    digits = _digits_block(start, stop, box, 2 * d)
    sa = digits[:, :d].astype(np.complex128) @ powers.T  # (m, nplaces)
    sb = digits[:, d:].astype(np.complex128) @ powers.T
    v1 = sa * gmat[:, 0, 0] + sb * gmat[:, 1, 0]
    v2 = sa * gmat[:, 0, 1] + sb * gmat[:, 1, 1]
    n = np.maximum(np.abs(v1), np.abs(v2))
    sup = n.max(axis=1)
    h = np.where(eexp == 2, n * n, n).prod(axis=1)
    zero = (digits == 0).all(axis=1)
    h[zero] = np.inf
    sup[zero] = np.inf
    return h, sup


if _HAVE_NUMBA:

    @njit(cache=True)
    def _heights_block_nb(powers, gmat, eexp, box, start, stop, h, sup):  # pragma: no cover
        nplaces, d = powers.shape
        radix = 2 * box + 1
        ncoef = 2 * d
        ca = np.empty(ncoef, dtype=np.int64)
        for idx in range(start, stop):
            rem = idx
            allzero = True
            for j in range(ncoef):
                c = rem % radix - box
                rem //= radix
                ca[j] = c
                if c != 0:
                    allzero = False
            if allzero:
                h[idx - start] = np.inf
                sup[idx - start] = np.inf
                continue
            hv = 1.0
            sv = 0.0
            for k in range(nplaces):
                sa = complex(0.0, 0.0)
                sb = complex(0.0, 0.0)
                for j in range(d):
                    sa += ca[j] * powers[k, j]
                    sb += ca[d + j] * powers[k, j]
                v1 = sa * gmat[k, 0, 0] + sb * gmat[k, 1, 0]
                v2 = sa * gmat[k, 0, 1] + sb * gmat[k, 1, 1]
                n = max(abs(v1), abs(v2))
                if n > sv:
                    sv = n
                if eexp[k] == 2:
                    n = n * n
                hv *= n
            h[idx - start] = hv
            sup[idx - start] = sv
        return h, sup


def heights_block(powers, gmat, eexp, box, start, stop):
    """Float64 heights and sup norms of combos [start, stop); zero combo -> inf."""
    if _HAVE_NUMBA:
        m = stop - start
        h = np.empty(m, dtype=np.float64)
        sup = np.empty(m, dtype=np.float64)
        return _heights_block_nb(powers, gmat, eexp, box, start, stop, h, sup)
    return _heights_block_np(powers, gmat, eexp, box, start, stop)


def scan_heights(powers, gmat, eexp, box, bound=None, margin=1e-9):
    """Scan the whole box. Returns (min_h, argmin_idx, min_sup, argmin_sup_idx,
    below) where below lists (idx, h_float) for h < bound*(1+margin)."""
    total = combo_count(box, 2 * powers.shape[1])
    best_h = np.inf
    best_hi = -1
    best_s = np.inf
    best_si = -1
    below = []
    cutoff = bound * (1 + margin) if bound is not None else None
    for start in range(0, total, BLOCK):
        stop = min(start + BLOCK, total)
        h, sup = heights_block(powers, gmat, eexp, box, start, stop)
        i = int(np.argmin(h))
        if h[i] < best_h:
            best_h = float(h[i])
            best_hi = start + i
        j = int(np.argmin(sup))
        if sup[j] < best_s:
            best_s = float(sup[j])
            best_si = start + j
        if cutoff is not None:
            for k in np.nonzero(h < cutoff)[0]:
                below.append((start + int(k), float(h[k])))
    return best_h, best_hi, best_s, best_si, below


# ---------------------------------------------------------------------------
# badly-approximable constant scan: min over q of sup-error * sup-denominator
# ---------------------------------------------------------------------------


def _badc_block_np(powers, xvals, minv, offsets, box, qbound, start, stop, cplx_place):
    d = powers.shape[1]
    nplaces = powers.shape[0]
    digits = _digits_block(start, stop, box, d)
    sq = digits.astype(np.complex128) @ powers.T  # sigma(q), (m, nplaces)
    qn = np.abs(sq).max(axis=1)
    ok = (qn <= qbound * (1 + 1e-12)) & (digits != 0).any(axis=1)
    target = -(xvals[None, :] * sq)  # best sigma(p) per place
    coords = np.empty((digits.shape[0], d), dtype=np.float64)
    col = 0
    for k in range(nplaces):
        coords[:, col] = target[:, k].real
        col += 1
        if cplx_place[k]:
            coords[:, col] = target[:, k].imag
            col += 1
    base = np.rint(coords @ minv.T)
    best = np.full(digits.shape[0], np.inf)
    bestp = np.zeros((digits.shape[0], d), dtype=np.int64)
    for off in offsets:
        p = base + off
        sp = p.astype(np.complex128) @ powers.T
        err = np.abs(sp + xvals[None, :] * sq).max(axis=1)
        quality = err * qn
        better = quality < best
        best = np.where(better, quality, best)
        bestp[better] = p[better].astype(np.int64)
    best[~ok] = np.inf
    i = int(np.argmin(best))
    return float(best[i]), start + i, bestp[i].copy()


if _HAVE_NUMBA:

    @njit(cache=True)
    def _badc_block_nb(powers, xvals, minv, offsets, box, qbound, start, stop,
                       cplx_place):  # pragma: no cover
        nplaces, d = powers.shape
        radix = 2 * box + 1
        best = np.inf
        besti = -1
        bestp = np.zeros(d, dtype=np.int64)
        cq = np.empty(d, dtype=np.int64)
        sq = np.empty(nplaces, dtype=np.complex128)
        coords = np.empty(d, dtype=np.float64)
        pc = np.empty(d, dtype=np.float64)
        for idx in range(start, stop):
            rem = idx
            allzero = True
            for j in range(d):
                c = rem % radix - box
                rem //= radix
                cq[j] = c
                if c != 0:
                    allzero = False
            if allzero:
                continue
            qn = 0.0
            for k in range(nplaces):
                s = complex(0.0, 0.0)
                for j in range(d):
                    s += cq[j] * powers[k, j]
                sq[k] = s
                if abs(s) > qn:
                    qn = abs(s)
            if qn > qbound * (1 + 1e-12):
                continue
            col = 0
            for k in range(nplaces):
                t = -(xvals[k] * sq[k])
                coords[col] = t.real
                col += 1
                if cplx_place[k] == 1:
                    coords[col] = t.imag
                    col += 1
            for i in range(d):
                acc = 0.0
                for j in range(d):
                    acc += minv[i, j] * coords[j]
                pc[i] = np.rint(acc)
            for o in range(offsets.shape[0]):
                err = 0.0
                for k in range(nplaces):
                    s = complex(0.0, 0.0)
                    for j in range(d):
                        s += (pc[j] + offsets[o, j]) * powers[k, j]
                    e = abs(s + xvals[k] * sq[k])
                    if e > err:
                        err = e
                quality = err * qn
                if quality < best:
                    best = quality
                    besti = idx
                    for j in range(d):
                        bestp[j] = np.int64(pc[j] + offsets[o, j])
        return best, besti, bestp


def badc_scan(powers, xvals, minv, offsets, box, qbound, cplx_place):
    """Best witness over all q in the box: (quality, q_index, p_coeffs)."""
    d = powers.shape[1]
    total = combo_count(box, d)
    cplx = np.asarray(cplx_place, dtype=np.int64)
    best = (np.inf, -1, np.zeros(d, dtype=np.int64))
    for start in range(0, total, BLOCK):
        stop = min(start + BLOCK, total)
        if _HAVE_NUMBA:
            q, i, p = _badc_block_nb(powers, xvals, minv, offsets, box, qbound,
                                     start, stop, cplx)
        else:
            q, i, p = _badc_block_np(powers, xvals, minv, offsets, box, qbound,
                                     start, stop, cplx)
        if q < best[0]:
            best = (q, i, p)
    return best


def neighborhood_offsets(d: int, radius: int = 1) -> np.ndarray:
    """All offset vectors in [-radius, radius]^d, zero vector first."""
    rng = np.arange(-radius, radius + 1)
    grid = np.array(np.meshgrid(*[rng] * d)).reshape(d, -1).T.astype(np.float64)
    order = np.argsort(np.abs(grid).sum(axis=1), kind="stable")
    return np.ascontiguousarray(grid[order])

"""Blocked word-parallel GF(2) rank for large column streams.

Same elimination semantics as :class:`hitpoly.gf2.EchelonBasis` (columns
arrive in task order, pivot = lowest set bit, only independent columns
are stored) but organized for throughput: columns are packed 64 per
machine word and absorbed in batches.  Per batch, bit positions are
walked one 64-bit word at a time; for each word eight 256-entry tables
encode the XOR chains that clear one byte each, so a row crosses a word
with a single fused multi-table XOR pass instead of one row-XOR per
pivot bit.

A reduced row stops at the first bit with no pivot (it is independent
there; anything above is harmless residue), exactly as the reference
engine does.  Rows surviving a word are resolved sequentially in task
order so freshly claimed pivots are visible to later columns.

Memory is dominated by the stored basis: n_bits rows of n_bits packed
bits, i.e. rank * n_bits / 8 bytes at worst.  The projection is checked
against the configured cap before anything is allocated.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

from .errors import ResourceLimitError

_WORD_BITS = 64


@njit(cache=True)
def _pack_rows(W, m, flat, offsets):
    for r in range(m):
        for p in range(offsets[r], offsets[r + 1]):
            i = flat[p]
            W[r, i >> 6] |= uint64(1) << uint64(i & 63)


@njit(cache=True)
def _process_batch(
    W,
    m,
    basis,
    pivot_of_bit,
    count,
    n_bits,
    T,
    wv,
    cmb,
    states,
    marks,
    approws,
    selbuf,
    nselbuf,
    tile,
):
    """Absorb m packed rows into the growing echelon basis.

    Returns the new stored-vector count, or -(r + 2) if row r failed the
    end-of-batch zero check (an internal invariant violation).
    """
    n_words = W.shape[1]
    n_windows = (n_bits + _WORD_BITS - 1) // _WORD_BITS
    for r in range(m):
        states[r] = 0
    for win in range(n_windows):
        base = win * _WORD_BITS
        span = n_bits - base
        if span >= _WORD_BITS:
            wmask = ~uint64(0)
        else:
            wmask = (uint64(1) << uint64(span)) - uint64(1)

        # ---- build the eight byte tables from the current pivot set ----
        for bt in range(8):
            tb = bt * 256
            cmb[tb] = 0
            wv[tb] = uint64(0)
            lo = base + bt * 8
            has = False
            for b in range(8):
                g = lo + b
                if g < n_bits and pivot_of_bit[g] >= 0:
                    has = True
                    break
            if not has:
                for v in range(1, 256):
                    cmb[tb + v] = 0
                    wv[tb + v] = uint64(0)
                continue
            for b in range(7, -1, -1):
                g = lo + b
                slot = -1
                if g < n_bits:
                    slot = pivot_of_bit[g]
                step = 1 << (b + 1)
                if slot < 0:
                    for v in range(1 << b, 256, step):
                        cmb[tb + v] = 0
                        wv[tb + v] = uint64(0)
                else:
                    pwin = basis[slot, win] & wmask
                    pbyte = int((pwin >> uint64(bt * 8)) & uint64(0xFF))
                    for v in range(1 << b, 256, step):
                        ref = v ^ pbyte  # lowest bit of ref is above b: built
                        if cmb[tb + ref]:
                            wv[tb + v] = wv[tb + ref] ^ pwin
                            for w in range(win, n_words):
                                T[tb + v, w] = T[tb + ref, w] ^ basis[slot, w]
                        else:
                            wv[tb + v] = pwin
                            for w in range(win, n_words):
                                T[tb + v, w] = basis[slot, w]
                        cmb[tb + v] = 1

        # ---- cascade the window word of every active row through the
        # tables, recording which table rows to apply; mark stopped rows ----
        nmarks = 0
        napp = 0
        for r in range(m):
            if states[r]:
                continue
            x = W[r, win] & wmask
            if x == uint64(0):
                continue
            nsel = 0
            for bt in range(8):
                sh = uint64(bt * 8)
                bidx = bt * 256 + int((x >> sh) & uint64(0xFF))
                if cmb[bidx]:
                    selbuf[r, nsel] = np.int16(bidx)
                    nsel += 1
                    x ^= wv[bidx]
                if (x >> sh) & uint64(0xFF):
                    # leftover bit with no pivot: row settles in this window
                    marks[nmarks] = r
                    nmarks += 1
                    break
            nselbuf[r] = np.uint8(nsel)
            if nsel != 0:
                approws[napp] = r
                napp += 1

        # ---- apply the recorded table rows tile by tile so each table
        # tile is read once per window, not once per row ----
        step_w = tile if tile > 0 else n_words
        for tstart in range(win, n_words, step_w):
            tend = tstart + step_w
            if tend > n_words:
                tend = n_words
            for a_i in range(napp):
                r = approws[a_i]
                nsel = int(nselbuf[r])
                t0 = int(selbuf[r, 0])
                if nsel == 1:
                    for w in range(tstart, tend):
                        W[r, w] ^= T[t0, w]
                elif nsel == 2:
                    t1 = int(selbuf[r, 1])
                    for w in range(tstart, tend):
                        W[r, w] ^= T[t0, w] ^ T[t1, w]
                elif nsel == 3:
                    t1 = int(selbuf[r, 1])
                    t2 = int(selbuf[r, 2])
                    for w in range(tstart, tend):
                        W[r, w] ^= T[t0, w] ^ T[t1, w] ^ T[t2, w]
                elif nsel == 4:
                    t1 = int(selbuf[r, 1])
                    t2 = int(selbuf[r, 2])
                    t3 = int(selbuf[r, 3])
                    for w in range(tstart, tend):
                        W[r, w] ^= T[t0, w] ^ T[t1, w] ^ T[t2, w] ^ T[t3, w]
                elif nsel == 5:
                    t1 = int(selbuf[r, 1])
                    t2 = int(selbuf[r, 2])
                    t3 = int(selbuf[r, 3])
                    t4 = int(selbuf[r, 4])
                    for w in range(tstart, tend):
                        W[r, w] ^= T[t0, w] ^ T[t1, w] ^ T[t2, w] ^ T[t3, w] ^ T[t4, w]
                elif nsel == 6:
                    t1 = int(selbuf[r, 1])
                    t2 = int(selbuf[r, 2])
                    t3 = int(selbuf[r, 3])
                    t4 = int(selbuf[r, 4])
                    t5 = int(selbuf[r, 5])
                    for w in range(tstart, tend):
                        W[r, w] ^= (
                            T[t0, w] ^ T[t1, w] ^ T[t2, w] ^ T[t3, w] ^ T[t4, w]
                            ^ T[t5, w]
                        )
                elif nsel == 7:
                    t1 = int(selbuf[r, 1])
                    t2 = int(selbuf[r, 2])
                    t3 = int(selbuf[r, 3])
                    t4 = int(selbuf[r, 4])
                    t5 = int(selbuf[r, 5])
                    t6 = int(selbuf[r, 6])
                    for w in range(tstart, tend):
                        W[r, w] ^= (
                            T[t0, w] ^ T[t1, w] ^ T[t2, w] ^ T[t3, w] ^ T[t4, w]
                            ^ T[t5, w] ^ T[t6, w]
                        )
                else:
                    t1 = int(selbuf[r, 1])
                    t2 = int(selbuf[r, 2])
                    t3 = int(selbuf[r, 3])
                    t4 = int(selbuf[r, 4])
                    t5 = int(selbuf[r, 5])
                    t6 = int(selbuf[r, 6])
                    t7 = int(selbuf[r, 7])
                    for w in range(tstart, tend):
                        W[r, w] ^= (
                            T[t0, w] ^ T[t1, w] ^ T[t2, w] ^ T[t3, w] ^ T[t4, w]
                            ^ T[t5, w] ^ T[t6, w] ^ T[t7, w]
                        )

        # ---- resolve stopped rows sequentially, in task order ----
        for mi in range(nmarks):
            r = marks[mi]
            while True:
                x = W[r, win] & wmask
                if x == uint64(0):
                    break  # cleared by pivots claimed moments ago; stays active
                b = 0
                while not (x >> uint64(b)) & uint64(1):
                    b += 1
                g = base + b
                slot = pivot_of_bit[g]
                if slot >= 0:
                    for w in range(win, n_words):
                        W[r, w] ^= basis[slot, w]
                else:
                    if count >= basis.shape[0]:
                        return -1
                    for w in range(win, n_words):
                        basis[count, w] = W[r, w]
                    pivot_of_bit[g] = count
                    count += 1
                    states[r] = 1
                    break

    # dependent rows must have been cleared completely
    for r in range(m):
        if states[r] == 0:
            for w in range(n_words):
                if W[r, w] != uint64(0):
                    return -(r + 2)
    return count


class PackedEliminator:
    """Streaming rank of a GF(2) column set, columns given as row indices."""

    def __init__(
        self,
        n_bits: int,
        *,
        batch_rows: int | None = None,
        memory_cap_bytes: int | None = None,
        tile_words: int = 512,
    ):
        if n_bits < 0:
            raise ValueError(f"bit length must be >= 0, got {n_bits}")
        self.tile_words = tile_words
        self.n_bits = n_bits
        self.n_words = max(1, (n_bits + _WORD_BITS - 1) // _WORD_BITS)
        row_bytes = self.n_words * 8
        if batch_rows is None:
            # small batches keep in-batch pivot collisions cheap during the
            # growth phase; table rebuild costs stay minor at this size
            batch_rows = max(256, min(2048, (64 << 20) // row_bytes))
        self.batch_rows = batch_rows
        projected = (
            n_bits * row_bytes  # stored basis, worst case rank = n_bits
            + batch_rows * row_bytes  # packing buffer
            + 2048 * row_bytes  # window tables
        )
        self.projected_bytes = projected
        if memory_cap_bytes is not None and projected > memory_cap_bytes:
            raise ResourceLimitError(
                f"projected elimination memory {projected / 2**30:.2f} GiB "
                f"(basis {n_bits} x {row_bytes} B) exceeds the cap of "
                f"{memory_cap_bytes / 2**30:.2f} GiB",
                projected=projected,
                cap=memory_cap_bytes,
            )
        self._basis = None
        self._pivot_of_bit = None
        self._W = None
        self._T = None
        self._wv = None
        self._cmb = None
        self._states = None
        self._marks = None
        self._pending: list[np.ndarray] = []
        self._count = 0
        self.n_columns = 0
        self._finished = False

    def _alloc(self) -> None:
        if self._basis is not None:
            return
        self._basis = np.zeros((max(1, self.n_bits), self.n_words), dtype=np.uint64)
        self._pivot_of_bit = np.full(max(1, self.n_bits), -1, dtype=np.int64)
        self._W = np.zeros((self.batch_rows, self.n_words), dtype=np.uint64)
        self._T = np.zeros((2048, self.n_words), dtype=np.uint64)
        self._wv = np.zeros(2048, dtype=np.uint64)
        self._cmb = np.zeros(2048, dtype=np.uint8)
        self._states = np.zeros(self.batch_rows, dtype=np.uint8)
        self._marks = np.zeros(self.batch_rows, dtype=np.int64)
        self._approws = np.zeros(self.batch_rows, dtype=np.int64)
        self._selbuf = np.zeros((self.batch_rows, 8), dtype=np.int16)
        self._nselbuf = np.zeros(self.batch_rows, dtype=np.uint8)

    def add_column(self, row_indices: np.ndarray) -> None:
        """Queue one column (sorted ascending row indices) for absorption."""
        if self._finished:
            raise RuntimeError("eliminator already finished")
        idx = np.ascontiguousarray(row_indices, dtype=np.int64)
        if idx.size and (idx[0] < 0 or idx[-1] >= self.n_bits):
            raise ValueError(
                f"row index out of range [0, {self.n_bits}): "
                f"{int(idx[0])}..{int(idx[-1])}"
            )
        self.n_columns += 1
        self._pending.append(idx)
        if len(self._pending) >= self.batch_rows:
            self._flush()

    def _flush(self) -> None:
        if not self._pending:
            return
        self._alloc()
        m = len(self._pending)
        offsets = np.zeros(m + 1, dtype=np.int64)
        for r, idx in enumerate(self._pending):
            offsets[r + 1] = offsets[r] + idx.size
        flat = (
            np.concatenate(self._pending)
            if offsets[-1]
            else np.zeros(0, dtype=np.int64)
        )
        self._pending.clear()
        self._W[:m].fill(0)
        _pack_rows(self._W, m, flat, offsets)
        new_count = _process_batch(
            self._W,
            m,
            self._basis,
            self._pivot_of_bit,
            self._count,
            self.n_bits,
            self._T,
            self._wv,
            self._cmb,
            self._states,
            self._marks,
            self._approws,
            self._selbuf,
            self._nselbuf,
            self.tile_words,
        )
        if new_count < 0:
            raise RuntimeError(
                "internal error: packed elimination failed its zero check"
            )
        self._count = int(new_count)

    def finish(self) -> int:
        """Flush pending columns and return the rank."""
        self._flush()
        self._finished = True
        rank = self._count
        # release working memory; rank queries remain valid
        self._basis = None
        self._W = None
        self._T = None
        return rank

    @property
    def rank(self) -> int:
        return self._count

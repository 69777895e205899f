"""Exact bit-packed linear algebra over F2.

Vectors are arbitrary-precision Python ints wrapped in :class:`BitVector`
(bit i = row i).  :class:`EchelonBasis` maintains a pivot-indexed set of
reduced vectors for incremental rank, membership and certificates; the
pivot of a stored vector is its lowest set bit, and columns are inserted
in task order so combination records are reproducible run to run.

Large rank-only jobs are routed to :mod:`hitpoly.fastrank`, which
implements the same elimination on packed machine words.
"""

from __future__ import annotations

from typing import Iterable, Iterator, TextIO

#: above this many (rows x cols) cells, rank() switches to the packed engine
FAST_RANK_CELLS = 1 << 22


class BitVector:
    """Fixed-length bit vector over F2 backed by a Python int."""

    __slots__ = ("n_bits", "value")

    def __init__(self, n_bits: int, value: int = 0):
        if n_bits < 0:
            raise ValueError(f"length must be >= 0, got {n_bits}")
        if value < 0 or value >> n_bits:
            raise ValueError(f"value has bits beyond length {n_bits}")
        self.n_bits = n_bits
        self.value = value

    @classmethod
    def from_indices(cls, n_bits: int, indices: Iterable[int]) -> "BitVector":
        value = 0
        for i in indices:
            if not 0 <= i < n_bits:
                raise ValueError(f"bit index {i} out of range [0, {n_bits})")
            value |= 1 << i
        return cls(n_bits, value)

    def indices(self) -> list[int]:
        out = []
        v = self.value
        while v:
            low = v & -v
            out.append(low.bit_length() - 1)
            v ^= low
        return out

    def popcount(self) -> int:
        return self.value.bit_count()

    def lowest_set_bit(self) -> int | None:
        if self.value == 0:
            return None
        return (self.value & -self.value).bit_length() - 1

    def to_bytes(self) -> bytes:
        """Canonical little-endian packing, zero-padded to full bytes."""
        return self.value.to_bytes((self.n_bits + 7) // 8 or 1, "little")

    def _check_len(self, other: "BitVector") -> None:
        if self.n_bits != other.n_bits:
            raise ValueError(f"length mismatch: {self.n_bits} vs {other.n_bits}")

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check_len(other)
        return BitVector(self.n_bits, self.value ^ other.value)

    def __and__(self, other: "BitVector") -> "BitVector":
        self._check_len(other)
        return BitVector(self.n_bits, self.value & other.value)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.n_bits == other.n_bits
            and self.value == other.value
        )

    def __hash__(self) -> int:
        return hash((self.n_bits, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __len__(self) -> int:
        return self.n_bits

    def __repr__(self) -> str:
        return f"BitVector({self.n_bits}, 0b{self.value:b})"


class SparseColumnSet:
    """Columns of an F2 matrix as sorted row-index tuples, in task order."""

    __slots__ = ("n_rows", "columns", "tags")

    def __init__(self, n_rows: int):
        if n_rows < 0:
            raise ValueError(f"row count must be >= 0, got {n_rows}")
        self.n_rows = n_rows
        self.columns: list[tuple[int, ...]] = []
        self.tags: list[object] = []

    def append(self, rows: Iterable[int], tag: object = None) -> None:
        col = tuple(rows)
        prev = -1
        for i in col:
            if i <= prev:
                raise ValueError("row indices must be strictly increasing")
            if not 0 <= i < self.n_rows:
                raise ValueError(f"row index {i} out of range [0, {self.n_rows})")
            prev = i
        self.columns.append(col)
        self.tags.append(tag)

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def column_value(self, j: int) -> int:
        value = 0
        for i in self.columns[j]:
            value |= 1 << i
        return value

    def column_bitvector(self, j: int) -> BitVector:
        return BitVector(self.n_rows, self.column_value(j))

    def iter_values(self) -> Iterator[int]:
        for j in range(len(self.columns)):
            yield self.column_value(j)

    def dump_sms(self, stream: TextIO) -> None:
        """SMS sparse triple format: header, 1-based 'i j 1' lines, 0 0 0."""
        stream.write(f"{self.n_rows} {len(self.columns)} M\n")
        for j, col in enumerate(self.columns):
            for i in col:
                stream.write(f"{i + 1} {j + 1} 1\n")
        stream.write("0 0 0\n")

    def sms_bytes(self) -> bytes:
        import io

        buf = io.StringIO()
        self.dump_sms(buf)
        return buf.getvalue().encode("ascii")


class EchelonBasis:
    """Pivot-indexed reduced column basis with optional combination records.

    Insertion reduces the incoming vector against stored pivots (lowest set
    bit first) and either stores the nonzero remainder under a fresh pivot
    or absorbs it.  With ``track_combinations`` every stored vector and
    every absorbed column remembers which original columns XOR to it.
    """

    INDEPENDENT = "independent"
    ABSORBED = "absorbed"

    def __init__(self, n_rows: int, *, track_combinations: bool = False):
        if n_rows < 0:
            raise ValueError(f"row count must be >= 0, got {n_rows}")
        self.n_rows = n_rows
        self.track_combinations = track_combinations
        self._pivot_slot: dict[int, int] = {}
        self._values: list[int] = []
        self._pivots: list[int] = []
        self._combos: list[int] = []
        self._null_combos: list[int] = []
        self.n_inserted = 0

    @property
    def rank(self) -> int:
        return len(self._values)

    def _reduce(self, value: int) -> tuple[int, int]:
        """Reduce value against stored pivots; return (residual, combo)."""
        combo = 0
        while value:
            low_bit = (value & -value).bit_length() - 1
            slot = self._pivot_slot.get(low_bit)
            if slot is None:
                break
            value ^= self._values[slot]
            if self.track_combinations:
                combo ^= self._combos[slot]
        return value, combo

    def insert(self, v: BitVector, tag: object = None) -> str:
        """Insert one column; returns INDEPENDENT or ABSORBED."""
        if v.n_bits != self.n_rows:
            raise ValueError(f"length mismatch: {v.n_bits} vs {self.n_rows}")
        column_id = self.n_inserted
        self.n_inserted += 1
        residual, combo = self._reduce(v.value)
        if self.track_combinations:
            combo ^= 1 << column_id
        if residual == 0:
            if self.track_combinations:
                self._null_combos.append(combo)
            return self.ABSORBED
        pivot = (residual & -residual).bit_length() - 1
        self._pivot_slot[pivot] = len(self._values)
        self._values.append(residual)
        self._pivots.append(pivot)
        if self.track_combinations:
            self._combos.append(combo)
        return self.INDEPENDENT

    def membership_combo(self, b: BitVector) -> int | None:
        """Combination of original columns reproducing b, or None.

        Requires combination tracking.  The empty combination answers b = 0.
        """
        if not self.track_combinations:
            raise ValueError("echelon basis was built without combination records")
        if b.n_bits != self.n_rows:
            raise ValueError(f"length mismatch: {b.n_bits} vs {self.n_rows}")
        residual, combo = self._reduce(b.value)
        if residual != 0:
            return None
        return combo

    def null_combos(self) -> list[int]:
        """Combination records of absorbed columns (null space basis)."""
        if not self.track_combinations:
            raise ValueError("echelon basis was built without combination records")
        return list(self._null_combos)


def rank(matrix: SparseColumnSet, *, engine: str = "auto") -> int:
    """Rank of the column set over F2.

    ``engine`` is "echelon" (int bit-vector insertion), "packed" (blocked
    word-parallel elimination) or "auto".  Both produce the same number;
    auto picks by problem size.
    """
    if engine == "auto":
        cells = matrix.n_rows * max(matrix.n_cols, 1)
        engine = "packed" if cells > FAST_RANK_CELLS else "echelon"
    if engine == "echelon":
        basis = EchelonBasis(matrix.n_rows)
        for value in matrix.iter_values():
            basis.insert(BitVector(matrix.n_rows, value))
        return basis.rank
    if engine == "packed":
        import numpy as np

        from .fastrank import PackedEliminator

        elim = PackedEliminator(matrix.n_rows)
        for col in matrix.columns:
            elim.add_column(np.asarray(col, dtype=np.int64))
        return elim.finish()
    raise ValueError(f"unknown rank engine {engine!r}")


def solve(matrix: SparseColumnSet, b: BitVector) -> BitVector | None:
    """Coefficient vector c with (columns selected by c) XOR-ing to b.

    Returns None when b is outside the column space.  Every returned
    solution is re-verified against the original columns before return.
    """
    if b.n_bits != matrix.n_rows:
        raise ValueError(f"length mismatch: {b.n_bits} vs {matrix.n_rows}")
    basis = EchelonBasis(matrix.n_rows, track_combinations=True)
    for value in matrix.iter_values():
        basis.insert(BitVector(matrix.n_rows, value))
    combo = basis.membership_combo(b)
    if combo is None:
        return None
    solution = BitVector(matrix.n_cols, combo)
    check = 0
    for j in solution.indices():
        check ^= matrix.column_value(j)
    if check != b.value:
        raise RuntimeError(
            "internal error: solve certificate failed verification"
        )
    return solution


def nullspace_basis(matrix: SparseColumnSet) -> list[BitVector]:
    """Basis of {c : Mc = 0}; each vector is verified before return."""
    basis = EchelonBasis(matrix.n_rows, track_combinations=True)
    for value in matrix.iter_values():
        basis.insert(BitVector(matrix.n_rows, value))
    out = []
    for combo in basis.null_combos():
        vec = BitVector(matrix.n_cols, combo)
        check = 0
        for j in vec.indices():
            check ^= matrix.column_value(j)
        if check != 0:
            raise RuntimeError(
                "internal error: null space certificate failed verification"
            )
        out.append(vec)
    return out

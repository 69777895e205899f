"""Hit-space engines: generator tasks, hit matrix, dimensions, decisions.

The degree-d hit space of F2[x1..xk] is spanned by the images Sq^(2^j)(g)
over monomials g of degree d' = d - 2^j, for every j with 2^j <= d.
Everything here reduces to GF(2) linear algebra on the matrix whose
columns are the coordinate vectors of those images:

* ``hit_dimension``           rank of that matrix,
* ``quotient_dimension``      C(d+k-1, k-1) minus the rank,
* ``decide_hit``              solvability of M c = [f], with an explicit
                              re-verified decomposition on success,
* ``nonuniqueness_witness``   a second decomposition from the null space.

Shift degrees d' with alpha(d' + k) > k consist entirely of hit
polynomials, and dropping them (``use_alpha_filter=True``) shrinks the
column set considerably at large degrees.  The drop is NOT always
rank-preserving at small k, though: Sq^1(x^5) = x^6 spans the whole
degree-6 hit space of F2[x] yet its shift degree 5 fails the condition.
Engines therefore default to the full generating set, which costs
nothing below the degrees where the filter starts to bite (d >= 58 at
k = 5), and take the filter as an explicit opt-in for long runs.

Task evaluation is embarrassingly parallel; results always merge in task
order, so matrices and ranks are identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .arith import alpha, mu
from .basis import DEFAULT_BASIS_CAP, DegreeBasis, basis_dimension, composition_rank
from .errors import InputError, ResourceLimitError
from .gf2 import BitVector, EchelonBasis, SparseColumnSet
from .poly import Monomial, PolyF2
from .steenrod import SqEvaluator

DEFAULT_TASK_THRESHOLD = 5000
DEFAULT_MEMORY_CAP = 2 * 1024**3

#: below this many matrix cells the int-based echelon engine is used directly
_SMALL_RANK_CELLS = 1 << 22


@dataclass(frozen=True)
class GeneratorTask:
    """One generator evaluation: apply Sq^(2^j) to the monomial g."""

    j: int
    g: Monomial

    @property
    def power(self) -> int:
        return 1 << self.j


@dataclass
class HitMatrix:
    """Assembled hit matrix with its row basis and column provenance.

    ``matrix`` holds one column per task with a nonzero image, in task
    order; ``tasks`` is aligned with those columns and ``omitted`` records
    the tasks whose images vanished.
    """

    basis: DegreeBasis
    matrix: SparseColumnSet
    tasks: tuple[GeneratorTask, ...]
    omitted: tuple[GeneratorTask, ...]

    @property
    def n_tasks(self) -> int:
        return len(self.tasks) + len(self.omitted)

    def sms_bytes(self) -> bytes:
        return self.matrix.sms_bytes()


@dataclass
class HitResult:
    """Outcome of a hit decision.

    When hit, ``decomposition`` maps j to h_j with f equal to the sum of
    Sq^(2^j)(h_j); the map is re-verified by evaluation before being
    returned.  ``alternative`` is only populated by
    :func:`nonuniqueness_witness`.
    """

    hit: bool
    degree: int
    decomposition: dict[int, PolyF2] | None = None
    alternative: dict[int, PolyF2] | None = None


def admissible_shifts(k: int, d: int, *, use_alpha_filter: bool = True) -> list[tuple[int, int]]:
    """(j, d - 2^j) pairs with 2^j <= d, optionally alpha-filtered."""
    if k < 1 or d < 1:
        raise ValueError(f"need k >= 1 and d >= 1, got k={k}, d={d}")
    out = []
    j = 0
    while (1 << j) <= d:
        d_prime = d - (1 << j)
        if not use_alpha_filter or alpha(d_prime + k) <= k:
            out.append((j, d_prime))
        j += 1
    return out


def enumerate_tasks(
    k: int, d: int, *, use_alpha_filter: bool = True
) -> list[GeneratorTask]:
    """All generator tasks for (k, d): j ascending, monomials in canonical order."""
    from .basis import iter_compositions

    tasks = []
    for j, d_prime in admissible_shifts(k, d, use_alpha_filter=use_alpha_filter):
        for g in iter_compositions(k, d_prime):
            tasks.append(GeneratorTask(j, g))
    return tasks


def _count_tasks(k: int, d: int, *, use_alpha_filter: bool = True) -> int:
    return sum(
        basis_dimension(k, d_prime)
        for _, d_prime in admissible_shifts(k, d, use_alpha_filter=use_alpha_filter)
    )


def _eval_chunk(payload) -> list[np.ndarray | None]:
    """Worker body: evaluate a chunk of tasks to sorted row-index arrays."""
    k, d, items = payload
    evaluator = SqEvaluator()
    out: list[np.ndarray | None] = []
    for power, g in items:
        terms = evaluator.sq_mono(power, g)
        if not terms:
            out.append(None)
        else:
            rows = sorted(composition_rank(m) for m in terms)
            out.append(np.asarray(rows, dtype=np.int64))
    return out


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def iter_task_images(
    k: int,
    d: int,
    *,
    threads: int | None = None,
    task_threshold: int = DEFAULT_TASK_THRESHOLD,
    use_alpha_filter: bool = False,
) -> Iterator[tuple[GeneratorTask, np.ndarray | None]]:
    """Yield (task, sorted row indices of the image) in task order.

    The image is None when Sq^(2^j)(g) = 0.  Serial below the task
    threshold, a process pool above it; output order and content are
    identical either way.
    """
    tasks = enumerate_tasks(k, d, use_alpha_filter=use_alpha_filter)
    n_workers = _resolve_threads(threads)
    if n_workers == 1 or len(tasks) < task_threshold:
        evaluator = SqEvaluator()
        for task in tasks:
            terms = evaluator.sq_mono(task.power, task.g)
            if not terms:
                yield task, None
            else:
                rows = sorted(composition_rank(m) for m in terms)
                yield task, np.asarray(rows, dtype=np.int64)
        return

    chunk = max(64, -(-len(tasks) // (n_workers * 8)))
    payloads = [
        (k, d, [(t.power, t.g) for t in tasks[i : i + chunk]])
        for i in range(0, len(tasks), chunk)
    ]
    import multiprocessing

    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=n_workers, mp_context=ctx) as pool:
        idx = 0
        for chunk_result in pool.map(_eval_chunk, payloads):
            for rows in chunk_result:
                yield tasks[idx], rows
                idx += 1


def build_hit_matrix(
    k: int,
    d: int,
    *,
    threads: int | None = None,
    task_threshold: int = DEFAULT_TASK_THRESHOLD,
    basis_cap: int = DEFAULT_BASIS_CAP,
    use_alpha_filter: bool = False,
) -> HitMatrix:
    """Materialize the hit matrix (columns in task order, zero images dropped)."""
    if d < 1:
        raise InputError(f"hit matrix needs degree >= 1, got {d}")
    basis = DegreeBasis(k, d, cap=basis_cap)
    matrix = SparseColumnSet(len(basis))
    kept: list[GeneratorTask] = []
    omitted: list[GeneratorTask] = []
    for task, rows in iter_task_images(
        k, d, threads=threads, task_threshold=task_threshold,
        use_alpha_filter=use_alpha_filter,
    ):
        if rows is None:
            omitted.append(task)
        else:
            matrix.append(rows.tolist(), tag=task)
            kept.append(task)
    return HitMatrix(basis, matrix, tuple(kept), tuple(omitted))


def dimension_report(
    k: int,
    d: int,
    *,
    threads: int | None = None,
    task_threshold: int = DEFAULT_TASK_THRESHOLD,
    basis_cap: int = DEFAULT_BASIS_CAP,
    memory_cap_bytes: int = DEFAULT_MEMORY_CAP,
    use_alpha_filter: bool = False,
    dump_matrix_path: str | None = None,
) -> dict:
    """Hit-space rank at (k, d) plus assembly statistics.

    Returns {k, d, n_monomials, n_tasks, n_nonzero, rank, q_dim}.  With
    ``dump_matrix_path`` the assembled matrix is also written in SMS
    triple format while it streams through the eliminator.
    """
    if k < 1:
        raise InputError(f"variable count must be >= 1, got {k}")
    if d < 0:
        raise InputError(f"degree must be >= 0, got {d}")
    n_rows = basis_dimension(k, d)
    if n_rows > basis_cap:
        raise ResourceLimitError(
            f"degree-{d} basis over {k} variables has {n_rows} monomials, "
            f"above the cap of {basis_cap}",
            projected=n_rows,
            cap=basis_cap,
        )
    report = {
        "k": k,
        "d": d,
        "n_monomials": n_rows,
        "n_tasks": 0,
        "n_nonzero": 0,
        "rank": 0,
        "q_dim": n_rows,
    }
    if d == 0:
        # constants are never hit; no generator tasks exist
        if dump_matrix_path:
            with open(dump_matrix_path, "w", encoding="ascii") as out:
                out.write(f"{n_rows} 0 M\n0 0 0\n")
        return report

    n_cols_est = _count_tasks(k, d, use_alpha_filter=use_alpha_filter)
    images = iter_task_images(
        k, d, threads=threads, task_threshold=task_threshold,
        use_alpha_filter=use_alpha_filter,
    )

    if n_rows * max(n_cols_est, 1) <= _SMALL_RANK_CELLS:
        echelon = EchelonBasis(n_rows)
        consume = (
            lambda rows: echelon.insert(
                BitVector.from_indices(n_rows, rows.tolist())
            )
        )
        finish = lambda: echelon.rank
    else:
        from .fastrank import PackedEliminator

        eliminator = PackedEliminator(n_rows, memory_cap_bytes=memory_cap_bytes)
        consume = eliminator.add_column
        finish = eliminator.finish

    body_path = dump_matrix_path + ".part" if dump_matrix_path else None
    body = open(body_path, "w", encoding="ascii") if body_path else None
    try:
        for task, rows in images:
            report["n_tasks"] += 1
            if rows is None:
                continue
            report["n_nonzero"] += 1
            if body is not None:
                col = report["n_nonzero"]
                for i in rows.tolist():
                    body.write(f"{i + 1} {col} 1\n")
            consume(rows)
    finally:
        if body is not None:
            body.close()
    report["rank"] = int(finish())
    report["q_dim"] = n_rows - report["rank"]
    if dump_matrix_path:
        import os as _os

        with open(dump_matrix_path, "w", encoding="ascii") as out:
            out.write(f"{n_rows} {report['n_nonzero']} M\n")
            with open(body_path, "r", encoding="ascii") as src:
                for line in src:
                    out.write(line)
            out.write("0 0 0\n")
        _os.unlink(body_path)
    return report


def hit_dimension(
    k: int,
    d: int,
    *,
    threads: int | None = None,
    task_threshold: int = DEFAULT_TASK_THRESHOLD,
    basis_cap: int = DEFAULT_BASIS_CAP,
    memory_cap_bytes: int = DEFAULT_MEMORY_CAP,
    use_alpha_filter: bool = False,
) -> int:
    """dim of the degree-d hit space: rank of the hit matrix.

    d = 0 returns 0 (constants are never hit).
    """
    return dimension_report(
        k, d, threads=threads, task_threshold=task_threshold,
        basis_cap=basis_cap, memory_cap_bytes=memory_cap_bytes,
        use_alpha_filter=use_alpha_filter,
    )["rank"]


def quotient_dimension(k: int, d: int, **kwargs) -> int:
    """dim of the degree-d quotient: basis dimension minus hit dimension."""
    q = basis_dimension(k, d) - hit_dimension(k, d, **kwargs)
    if q < 0:
        raise RuntimeError("internal error: negative quotient dimension")
    return q


def wood_vanishes(k: int, d: int) -> bool:
    """Wood's criterion: the quotient vanishes whenever alpha(d + k) > k."""
    if k < 1 or d < 1:
        raise ValueError(f"need k >= 1 and d >= 1, got k={k}, d={d}")
    return alpha(d + k) > k


def kameko_reduces(k: int, d: int) -> int | None:
    """Kameko target (d - k) / 2 when mu(d) = k, else None.

    Advisory only: the quotient dimensions at d and at the target agree,
    but engines never substitute one computation for the other silently.
    """
    if k < 1 or d < 1:
        raise ValueError(f"need k >= 1 and d >= 1, got k={k}, d={d}")
    if mu(d) == k and (d - k) % 2 == 0:
        return (d - k) // 2
    return None


class _HitSystem:
    """Shared machinery for certificate-producing decisions at one (k, d)."""

    def __init__(self, k, d, *, threads, task_threshold, basis_cap, memory_cap_bytes):
        projected = basis_dimension(k, d) ** 2 // 8
        if projected > memory_cap_bytes:
            raise ResourceLimitError(
                f"certificate elimination at k={k}, d={d} projects to "
                f"{projected / 2**30:.2f} GiB, above the cap of "
                f"{memory_cap_bytes / 2**30:.2f} GiB",
                projected=projected,
                cap=memory_cap_bytes,
            )
        self.k = k
        self.d = d
        self.hit_matrix = build_hit_matrix(
            k, d, threads=threads, task_threshold=task_threshold,
            basis_cap=basis_cap,
        )
        self.echelon = EchelonBasis(
            len(self.hit_matrix.basis), track_combinations=True
        )
        for value in self.hit_matrix.matrix.iter_values():
            self.echelon.insert(BitVector(len(self.hit_matrix.basis), value))

    def solve(self, f: PolyF2) -> int | None:
        """Column-selection bitmask reproducing f, or None."""
        target = self.hit_matrix.basis.to_coordinates(f)
        return self.echelon.membership_combo(target)

    def selection_to_groups(self, selection: int) -> dict[int, PolyF2]:
        groups: dict[int, set[Monomial]] = {}
        sel = selection
        while sel:
            low = sel & -sel
            col = low.bit_length() - 1
            sel ^= low
            task = self.hit_matrix.tasks[col]
            groups.setdefault(task.j, set()).add(task.g)
        return {
            j: PolyF2(self.k, monos) for j, monos in sorted(groups.items())
        }

    def verify(self, groups: dict[int, PolyF2], f: PolyF2) -> None:
        evaluator = SqEvaluator()
        total = PolyF2.zero(self.k)
        for j, h in groups.items():
            total = total + evaluator.sq_poly(1 << j, h)
        if total != f:
            raise RuntimeError(
                "internal error: decomposition failed re-evaluation against f"
            )


def _validated_input(f: PolyF2, k: int) -> PolyF2:
    if not isinstance(f, PolyF2):
        raise InputError(f"expected a PolyF2, got {type(f).__name__}")
    if k < 1:
        raise InputError(f"variable count must be >= 1, got {k}")
    if f.k > k:
        raise InputError(
            f"polynomial uses {f.k} variables but k={k} was requested"
        )
    if f.is_zero():
        raise InputError("the zero polynomial is ill-posed for hit decisions")
    if f.degree == 0:
        raise InputError("degree-0 polynomials are not considered hit")
    return f.embed(k)


def decide_hit(
    f: PolyF2,
    k: int,
    *,
    threads: int | None = None,
    task_threshold: int = DEFAULT_TASK_THRESHOLD,
    basis_cap: int = DEFAULT_BASIS_CAP,
    memory_cap_bytes: int = DEFAULT_MEMORY_CAP,
) -> HitResult:
    """Decide whether f is hit; on success return a verified decomposition."""
    f = _validated_input(f, k)
    system = _HitSystem(
        k, f.degree, threads=threads, task_threshold=task_threshold,
        basis_cap=basis_cap, memory_cap_bytes=memory_cap_bytes,
    )
    selection = system.solve(f)
    if selection is None:
        return HitResult(hit=False, degree=f.degree)
    groups = system.selection_to_groups(selection)
    system.verify(groups, f)
    return HitResult(hit=True, degree=f.degree, decomposition=groups)


def nonuniqueness_witness(
    f: PolyF2,
    k: int,
    *,
    threads: int | None = None,
    task_threshold: int = DEFAULT_TASK_THRESHOLD,
    basis_cap: int = DEFAULT_BASIS_CAP,
    memory_cap_bytes: int = DEFAULT_MEMORY_CAP,
) -> dict[int, PolyF2] | None:
    """A second, distinct, verified decomposition of a hit polynomial.

    Absent when the matrix columns are independent (trivial null space).
    Raises InputError if f is not hit at all.
    """
    f = _validated_input(f, k)
    system = _HitSystem(
        k, f.degree, threads=threads, task_threshold=task_threshold,
        basis_cap=basis_cap, memory_cap_bytes=memory_cap_bytes,
    )
    selection = system.solve(f)
    if selection is None:
        raise InputError("polynomial is not hit; no decomposition to vary")
    primary = system.selection_to_groups(selection)
    for null_combo in system.echelon.null_combos():
        alt_selection = selection ^ null_combo
        groups = system.selection_to_groups(alt_selection)
        if groups != primary:
            system.verify(groups, f)
            return groups
    return None

"""Depth of squarefree monomial quotients through exact simplicial homology.

The complex attached to a squarefree ideal has as faces exactly the squarefree
monomials outside the ideal, encoded as bitmasks (bit j = variable x_{j+1}).
Multigraded Betti numbers of the quotient are read off reduced homology of
vertex-restricted subcomplexes; depth is the ambient size minus the largest
nonzero homological index.  All ranks are computed over the rationals by
integer elimination, so there are no floating point or characteristic issues.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd

from .errors import InputError
from .ideals import MonomialIdeal


@dataclass(frozen=True)
class SimplicialComplex:
    """A simplicial complex stored implicitly by its minimal non-faces.

    ``nonface_masks`` is the canonical (sorted, mutually incomparable) tuple of
    bitmasks; a subset is a face exactly when it contains none of them.  The
    complex always contains the empty face.
    """

    n: int
    nonface_masks: tuple[int, ...]

    def is_face(self, mask: int) -> bool:
        return not any(nf & mask == nf for nf in self.nonface_masks)

    def faces(self) -> list[int]:
        """All face masks, ascending by (popcount, value)."""
        out = [m for m in range(1 << self.n) if self.is_face(m)]
        out.sort(key=lambda m: (m.bit_count(), m))
        return out

    def restrict(self, vertex_mask: int) -> "SimplicialComplex":
        """Full subcomplex on a vertex subset, compressed to a fresh vertex set."""
        positions = [j for j in range(self.n) if vertex_mask >> j & 1]
        nonfaces = []
        for nf in self.nonface_masks:
            if nf & vertex_mask == nf:
                nonfaces.append(sum(1 << i for i, j in enumerate(positions) if nf >> j & 1))
        return SimplicialComplex(len(positions), tuple(sorted(nonfaces)))


def sr_complex(ideal: MonomialIdeal) -> SimplicialComplex:
    """Complex whose faces are the squarefree monomials outside the ideal."""
    if not ideal.is_squarefree():
        raise InputError("the ideal must be squarefree")
    if ideal.is_zero() or ideal.is_unit():
        raise InputError("the ideal must be a nonzero proper ideal")
    masks = tuple(
        sorted(sum(1 << (j - 1) for j in g.support()) for g in ideal.gens)
    )
    return SimplicialComplex(ideal.ambient, masks)


def _integer_rank(rows: list[dict[int, int]]) -> int:
    """Rank of an integer matrix given as sparse rows, by exact elimination.

    Cross-multiplication keeps everything in the integers; rows are reduced by
    their gcd after each elimination step so entries stay small.
    """
    active = [dict(r) for r in rows if r]
    rank = 0
    while active:
        best = None
        for ri, row in enumerate(active):
            for col, val in row.items():
                key = (abs(val) != 1, len(row), ri, col)
                if best is None or key < best[0]:
                    best = (key, ri, col)
            if best is not None and not best[0][0] and best[0][1] <= 2:
                break  # a +-1 pivot in a near-singleton row is good enough
        _, pi, pc = best
        pivot_row = active.pop(pi)
        pv = pivot_row[pc]
        rank += 1
        next_rows = []
        for row in active:
            v = row.get(pc)
            if v is None:
                next_rows.append(row)
                continue
            new_row = {}
            for col, val in row.items():
                if col == pc:
                    continue
                nv = val * pv - pivot_row.get(col, 0) * v
                if nv:
                    new_row[col] = nv
            for col, val in pivot_row.items():
                if col != pc and col not in row:
                    nv = -val * v
                    if nv:
                        new_row[col] = nv
            if new_row:
                g = 0
                for val in new_row.values():
                    g = gcd(g, val)
                if g > 1:
                    new_row = {c: v // g for c, v in new_row.items()}
                next_rows.append(new_row)
        active = next_rows
    return rank


def homology_ranks(complex_: SimplicialComplex) -> tuple[int, ...]:
    """Reduced homology ranks over the rationals, starting at degree -1.

    The empty face is carried as the single cell in degree -1, so the complex
    consisting of the empty face alone has ranks (1,).  An exact Euler count is
    asserted against the face numbers on every call.
    """
    faces = complex_.faces()
    by_size: list[list[int]] = []
    for mask in faces:
        size = mask.bit_count()
        while len(by_size) <= size:
            by_size.append([])
        by_size[size].append(mask)
    index_of = [{m: i for i, m in enumerate(level)} for level in by_size]
    top = len(by_size) - 1

    # boundary_rank[s] = rank of the map from size-s faces to size-(s-1) faces
    boundary_rank = [0] * (top + 2)
    for s in range(1, top + 1):
        rows: list[dict[int, int]] = [dict() for _ in by_size[s - 1]]
        for col, mask in enumerate(by_size[s]):
            vertices = [j for j in range(complex_.n) if mask >> j & 1]
            for pos, j in enumerate(vertices):
                sub = mask & ~(1 << j)
                rows[index_of[s - 1][sub]][col] = -1 if pos % 2 else 1
        boundary_rank[s] = _integer_rank(rows)

    ranks = []
    for s in range(0, top + 1):
        ranks.append(len(by_size[s]) - boundary_rank[s] - boundary_rank[s + 1])

    euler_faces = sum((-1) ** (s + 1) * len(by_size[s]) for s in range(top + 1))
    euler_homology = sum((-1) ** (s + 1) * ranks[s] for s in range(top + 1))
    assert euler_faces == euler_homology, "Euler count mismatch: rank computation is broken"
    assert all(r >= 0 for r in ranks)
    return tuple(ranks)


@dataclass(frozen=True)
class BettiTable:
    """Nonzero multigraded Betti numbers of a squarefree quotient ring.

    Keys are (homological index, sorted 1-based variable tuple); values are
    positive ranks.
    """

    n: int
    entries: dict[tuple[int, tuple[int, ...]], int]

    def projective_dimension(self) -> int:
        return max(i for i, _ in self.entries)

    def entry(self, i: int, variables: tuple[int, ...]) -> int:
        return self.entries.get((i, tuple(sorted(variables))), 0)


MAX_HOCHSTER_AMBIENT = 14


def hochster_betti(ideal: MonomialIdeal) -> BettiTable:
    """Full Betti table of the quotient by a squarefree ideal.

    The rank in homological index i and squarefree degree F is the reduced
    homology rank of the restriction to F in degree |F| - i - 1.  Subsets are
    scanned ascending by (popcount, value) so the table is deterministic.
    """
    if ideal.ambient > MAX_HOCHSTER_AMBIENT:
        raise InputError(
            f"ambient {ideal.ambient} exceeds the Betti table cap {MAX_HOCHSTER_AMBIENT}"
        )
    complex_ = sr_complex(ideal)
    n = ideal.ambient
    entries: dict[tuple[int, tuple[int, ...]], int] = {}
    subsets = sorted(range(1 << n), key=lambda m: (m.bit_count(), m))
    for fmask in subsets:
        size = fmask.bit_count()
        ranks = homology_ranks(complex_.restrict(fmask))
        fvars = tuple(j + 1 for j in range(n) if fmask >> j & 1)
        for degree_plus_one, rank in enumerate(ranks):
            if rank:
                i = size - degree_plus_one  # homological index for degree d = size - i - 1
                entries[(i, fvars)] = rank

    gen_supports = {g.support() for g in ideal.gens}
    degree_one = {f for i, f in entries if i == 1}
    assert degree_one == gen_supports, "index-1 table entries must be the generator supports"
    assert entries[(0, ())] == 1
    return BettiTable(n, entries)


def depth_squarefree(ideal: MonomialIdeal) -> int:
    """Depth of the quotient ring by a squarefree ideal: ambient minus pd."""
    table = hochster_betti(ideal)
    pd = table.projective_dimension()
    depth = ideal.ambient - pd
    assert depth + pd == ideal.ambient
    return depth

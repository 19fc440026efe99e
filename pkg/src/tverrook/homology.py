"""Reduced integral simplicial homology via Smith normal form.

Boundary matrices use the sorted-vertex sign convention and include the
augmentation map to the empty simplex, so all Betti numbers are reduced.
Smith normal form is computed by exact integer elimination with minimal
absolute-value pivoting; arbitrary-precision integers throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .simplicial import Complex, faces_by_dimension


def smith_invariants(matrix: list) -> list:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    A = [row[:] for row in matrix]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    invariants = []
    t = 0
    while True:
        # locate a nonzero pivot of minimal absolute value in the submatrix
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = A[i][j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        pi, pj = pivot
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]

        # clear the pivot row and column by remainders
        dirty = True
        while dirty:
            dirty = False
            p = A[t][t]
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // p
                    for j in range(t, cols):
                        A[i][j] -= q * A[t][j]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // p
                    for i in range(t, rows):
                        A[i][j] -= q * A[i][t]
                    if A[t][j]:
                        for i in range(rows):
                            A[i][t], A[i][j] = A[i][j], A[i][t]
                        dirty = True
                        break
            if dirty:
                continue
            # pivot must divide the remaining submatrix
            p = A[t][t]
            for i in range(t + 1, rows):
                bad = next((j for j in range(t + 1, cols) if A[i][j] % p), None)
                if bad is not None:
                    for j in range(t, cols):
                        A[t][j] += A[i][j]
                    dirty = True
                    break
        invariants.append(abs(A[t][t]))
        t += 1
        if t == rows or t == cols:
            break
    return invariants


def boundary_matrix(K: Complex, q: int) -> list:
    """Matrix of the boundary map from q-faces to (q-1)-faces.

    For q = 0 this is the augmentation map onto the empty simplex.
    """
    by_dim = faces_by_dimension(K)
    top = by_dim.get(q, [])
    bottom = by_dim.get(q - 1, [])
    index = {face: i for i, face in enumerate(bottom)}
    matrix = [[0] * len(top) for _ in bottom]
    for col, face in enumerate(top):
        for idx in range(len(face)):
            sub = face[:idx] + face[idx + 1:]
            matrix[index[sub]][col] += (-1) ** idx
    return matrix


@dataclass(frozen=True)
class HomologyProfile:
    """Reduced Betti numbers and torsion coefficients per dimension."""

    betti: tuple
    torsion: tuple  # tuple of tuples of invariant factors > 1
    reduced: bool = True

    def betti_number(self, q: int) -> int:
        return self.betti[q] if 0 <= q < len(self.betti) else 0

    def torsion_in(self, q: int) -> tuple:
        return self.torsion[q] if 0 <= q < len(self.torsion) else ()

    def to_json(self) -> list:
        return [
            {"q": q, "betti": b, "torsion": list(t)}
            for q, (b, t) in enumerate(zip(self.betti, self.torsion))
        ]


def betti_and_torsion(K: Complex) -> HomologyProfile:
    """Reduced integral homology of K in every dimension."""
    if K.facets == ((),):
        raise InputError("homology requires a nonempty complex")
    by_dim = faces_by_dimension(K)
    dim = K.dimension
    counts = {q: len(by_dim.get(q, [])) for q in range(dim + 1)}

    invariants = {}
    ranks = {}
    for q in range(dim + 2):
        inv = smith_invariants(boundary_matrix(K, q)) if q <= dim else []
        invariants[q] = inv
        ranks[q] = len(inv)

    betti = []
    torsion = []
    for q in range(dim + 1):
        betti.append(counts[q] - ranks[q] - ranks[q + 1])
        torsion.append(tuple(d for d in invariants[q + 1] if d > 1))
    return HomologyProfile(tuple(betti), tuple(torsion))


def homological_connectivity(K: Complex, c: int) -> bool:
    """True iff reduced homology (rank and torsion) vanishes in dimensions <= c.

    Necessary for topological c-connectivity; does not certify pi_1.
    """
    if c < -1:
        raise InputError("connectivity level must be >= -1")
    if K.facets == ((),):
        return False
    if c == -1:
        return True
    profile = betti_and_torsion(K)
    return all(
        profile.betti_number(q) == 0 and not profile.torsion_in(q) for q in range(c + 1)
    )

"""Index bookkeeping for the 2-form and 3-form bases on R^n.

Two-forms are enumerated as lexicographic index pairs (i, j) with i < j,
three-forms as lexicographic triples (i, j, k) with i < j < k.  Each basis
carries position and sign lookup tables so that fully antisymmetric index
access reconstructs the component for any index order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np


def _perm_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class PairBasis:
    """Lexicographic basis of index pairs i < j; N = n(n-1)/2 elements."""

    n: int
    pairs: tuple[tuple[int, int], ...]
    pos: np.ndarray   # (n, n) pair -> basis position, -1 on the diagonal
    sign: np.ndarray  # (n, n) +1 for i < j, -1 for i > j, 0 on the diagonal

    @property
    def size(self) -> int:
        return len(self.pairs)

    def position(self, i: int, j: int) -> int:
        p = int(self.pos[i, j])
        if p < 0:
            raise ValueError(f"({i}, {j}) is not a valid index pair")
        return p


@dataclass(frozen=True)
class TripleBasis:
    """Lexicographic basis of index triples i < j < k."""

    n: int
    triples: tuple[tuple[int, int, int], ...]
    pos: np.ndarray   # (n, n, n) triple -> basis position, -1 if degenerate
    sign: np.ndarray  # (n, n, n) permutation sign, 0 if degenerate

    @property
    def size(self) -> int:
        return len(self.triples)


@lru_cache(maxsize=None)
def pair_basis(n: int) -> PairBasis:
    if n < 2:
        raise ValueError(f"need dimension >= 2, got {n}")
    pairs = tuple((i, j) for i, j in combinations(range(n), 2))
    pos = np.full((n, n), -1, dtype=np.int64)
    sign = np.zeros((n, n))
    for a, (i, j) in enumerate(pairs):
        pos[i, j] = pos[j, i] = a
        sign[i, j] = 1.0
        sign[j, i] = -1.0
    pos.flags.writeable = False
    sign.flags.writeable = False
    return PairBasis(n, pairs, pos, sign)


@lru_cache(maxsize=None)
def triple_basis(n: int) -> TripleBasis:
    if n < 3:
        raise ValueError(f"need dimension >= 3, got {n}")
    triples = tuple((i, j, k) for i, j, k in combinations(range(n), 3))
    pos = np.full((n, n, n), -1, dtype=np.int64)
    sign = np.zeros((n, n, n))
    for a, t in enumerate(triples):
        for perm in permutations(range(3)):
            idx = tuple(t[p] for p in perm)
            pos[idx] = a
            sign[idx] = _perm_sign(perm)
    pos.flags.writeable = False
    sign.flags.writeable = False
    return TripleBasis(n, triples, pos, sign)


@lru_cache(maxsize=None)
def disjoint_pair_mask(n: int) -> np.ndarray:
    """Boolean (N, N) mask of pair-basis entries whose four indices are distinct."""
    pb = pair_basis(n)
    mask = np.zeros((pb.size, pb.size), dtype=bool)
    for a, (i, j) in enumerate(pb.pairs):
        for b, (k, l) in enumerate(pb.pairs):
            mask[a, b] = len({i, j, k, l}) == 4
    mask.flags.writeable = False
    return mask


def pair_matrix_to_four_tensor(n: int, mat: np.ndarray) -> np.ndarray:
    """Expand an N x N pair-basis matrix into the full (n, n, n, n) tensor."""
    pb = pair_basis(n)
    padded = np.zeros((pb.size + 1, pb.size + 1))
    padded[:-1, :-1] = mat
    pos = np.where(pb.pos >= 0, pb.pos, pb.size)
    four = padded[pos[:, :, None, None], pos[None, None, :, :]]
    four = four * pb.sign[:, :, None, None] * pb.sign[None, None, :, :]
    return four


def four_tensor_to_pair_matrix(n: int, four: np.ndarray) -> np.ndarray:
    """Read the N x N pair-basis matrix off a full (n, n, n, n) tensor."""
    pb = pair_basis(n)
    rows = np.array([p[0] for p in pb.pairs])
    cols = np.array([p[1] for p in pb.pairs])
    return four[rows[:, None], cols[:, None], rows[None, :], cols[None, :]]


def full3_to_pair_form(n: int, full: np.ndarray) -> np.ndarray:
    """(n, n, n) tensor antisymmetric in the first two slots -> (N, n) components."""
    pb = pair_basis(n)
    rows = np.array([p[0] for p in pb.pairs])
    cols = np.array([p[1] for p in pb.pairs])
    return full[rows, cols, :]


def pair_form_to_full3(n: int, comps: np.ndarray) -> np.ndarray:
    """(N, n) pair-indexed components -> full (n, n, n) antisymmetric tensor."""
    pb = pair_basis(n)
    padded = np.zeros((pb.size + 1, n))
    padded[:-1] = comps
    pos = np.where(pb.pos >= 0, pb.pos, pb.size)
    return padded[pos] * pb.sign[:, :, None]


def full5_to_triple_pair(n: int, full: np.ndarray) -> np.ndarray:
    """(n,n,n,n,n) tensor, 3-form in slots 0-2 and 2-form in slots 3-4 -> (T, N)."""
    tb = triple_basis(n)
    pb = pair_basis(n)
    t0 = np.array([t[0] for t in tb.triples])
    t1 = np.array([t[1] for t in tb.triples])
    t2 = np.array([t[2] for t in tb.triples])
    r = np.array([p[0] for p in pb.pairs])
    c = np.array([p[1] for p in pb.pairs])
    return full[t0[:, None], t1[:, None], t2[:, None], r[None, :], c[None, :]]

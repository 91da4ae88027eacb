"""Linear block subcodes used at generalized constraint nodes.

Codeword enumeration over GF(2), coordinate-permutation tables for
message-invariant codes, and ensemble design rates.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

MAX_ENUM_DIM = 24


class CodewordOverflowError(ValueError):
    """Null space too large to enumerate (dimension above MAX_ENUM_DIM)."""


def gf2_rref(matrix: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2). Returns (rref, pivot columns)."""
    a = (np.asarray(matrix) & 1).astype(np.uint8).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def gf2_rank(matrix: np.ndarray) -> int:
    return len(gf2_rref(matrix)[1])


def enumerate_codewords(parity_check: np.ndarray) -> np.ndarray:
    """All GF(2) null-space vectors of a parity-check matrix.

    Returns a (2^(K-rank), K) uint8 array in lexicographic order.
    """
    h = (np.asarray(parity_check) & 1).astype(np.uint8)
    if h.ndim != 2:
        raise ValueError("parity_check must be a 2-D binary matrix")
    rref, pivots = gf2_rref(h)
    k = h.shape[1]
    dim = k - len(pivots)
    if dim > MAX_ENUM_DIM:
        raise CodewordOverflowError(
            f"null space dimension {dim} exceeds enumeration cap {MAX_ENUM_DIM}"
        )
    free = [c for c in range(k) if c not in pivots]
    # basis vector per free column: free coordinate 1, pivots back-substituted
    basis = np.zeros((dim, k), dtype=np.uint8)
    for b, fc in enumerate(free):
        basis[b, fc] = 1
        for r, pc in enumerate(pivots):
            basis[b, pc] = rref[r, fc]
    if dim == 0:
        return np.zeros((1, k), dtype=np.uint8)
    combos = ((np.arange(1 << dim)[:, None] >> np.arange(dim)) & 1).astype(np.uint8)
    words = (combos @ basis) % 2
    order = np.lexsort(words.T[::-1])
    return words[order].astype(np.uint8)


@dataclass
class PermutationTable:
    """K coordinate permutations, one per target position.

    ``perms[i]`` maps slot s to source position perms[i][s] (0-based), with
    perms[i][0] == i, and permuting codeword coordinates by any row maps the
    codeword set onto itself.
    """

    perms: list[np.ndarray]

    def __post_init__(self):
        self.perms = [np.asarray(p, dtype=np.intp) for p in self.perms]

    def __len__(self) -> int:
        return len(self.perms)


@dataclass
class LinearSubcode:
    name: str
    parity_check: np.ndarray
    codewords: np.ndarray = field(default=None)
    permutations: PermutationTable | None = None

    def __post_init__(self):
        self.parity_check = (np.asarray(self.parity_check) & 1).astype(np.uint8)
        if self.codewords is None:
            self.codewords = enumerate_codewords(self.parity_check)

    @property
    def length(self) -> int:
        """Block length K."""
        return self.parity_check.shape[1]

    @property
    def m_prime(self) -> int:
        """Number of parity-check rows (rate convention uses rows, not rank)."""
        return self.parity_check.shape[0]

    @property
    def min_distance(self) -> int:
        weights = self.codewords.sum(axis=1)
        return int(weights[weights > 0].min())


# (6,3) shortened Hamming code
_H1 = [
    [1, 0, 0, 1, 1, 0],
    [0, 1, 0, 1, 0, 1],
    [0, 0, 1, 0, 1, 1],
]
# 1-based permutation rows for the (6,3) code, one per target position
_TABLE1 = [
    [1, 2, 3, 4, 5, 6],
    [2, 3, 1, 6, 4, 5],
    [3, 1, 2, 5, 6, 4],
    [4, 2, 6, 1, 5, 3],
    [5, 1, 4, 3, 6, 2],
    [6, 3, 5, 2, 4, 1],
]

# (7,4) Hamming code
_H2 = [
    [0, 1, 1, 1, 1, 0, 0],
    [1, 0, 1, 1, 0, 1, 0],
    [1, 1, 0, 1, 0, 0, 1],
]
_TABLE2 = [
    [1, 2, 3, 4, 5, 6, 7],
    [2, 3, 1, 4, 6, 7, 5],
    [3, 1, 2, 4, 7, 5, 6],
    [4, 7, 3, 1, 5, 6, 2],
    [5, 2, 7, 4, 1, 6, 3],
    [6, 2, 4, 3, 5, 1, 7],
    [7, 4, 3, 2, 5, 6, 1],
]


def _table_from_1based(rows: list[list[int]]) -> PermutationTable:
    return PermutationTable([np.asarray(r, dtype=np.intp) - 1 for r in rows])


def builtin_c1() -> LinearSubcode:
    """(6,3) shortened Hamming code with its permutation table."""
    return LinearSubcode("C1", np.asarray(_H1), permutations=_table_from_1based(_TABLE1))


def builtin_c2() -> LinearSubcode:
    """(7,4) Hamming code with its permutation table."""
    return LinearSubcode("C2", np.asarray(_H2), permutations=_table_from_1based(_TABLE2))


_BUILTINS = {"C1": builtin_c1, "C2": builtin_c2}


def get_subcode(name: str) -> LinearSubcode:
    try:
        return _BUILTINS[name.upper()]()
    except KeyError:
        raise KeyError(f"unknown builtin subcode {name!r}; have {sorted(_BUILTINS)}")


def load_subcode(path, name: str | None = None) -> LinearSubcode:
    """Load a subcode from a text file: first line "m' K", then m' rows of 0/1."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: expected header 'm_prime K'")
        m_prime, k = int(header[0]), int(header[1])
        rows = []
        for _ in range(m_prime):
            row = [int(tok) for tok in fh.readline().split()]
            if len(row) != k or any(b not in (0, 1) for b in row):
                raise ValueError(f"{path}: expected {k} binary entries per row")
            rows.append(row)
    return LinearSubcode(name or str(path), np.asarray(rows, dtype=np.uint8))


def spc_code(k: int) -> LinearSubcode:
    """Single-parity-check code of length k."""
    return LinearSubcode(f"SPC{k}", np.ones((1, k), dtype=np.uint8))


def permutation_preserves_code(code: LinearSubcode, perm: np.ndarray) -> bool:
    """True if permuting coordinates by perm maps the codeword set onto itself."""
    permuted = code.codewords[:, perm]
    a = permuted[np.lexsort(permuted.T[::-1])]
    return bool(np.array_equal(a, code.codewords))


@dataclass
class InvarianceReport:
    invariant: bool
    table: PermutationTable | None = None
    failing_position: int | None = None


def verify_message_invariance(code: LinearSubcode) -> InvarianceReport:
    """Search for coordinate automorphisms mapping position 0 to every position.

    Exhaustive over all K! permutations; returns the lexicographically first
    valid permutation per target position, or the first position with none.
    """
    k = code.length
    if k > 8:
        raise ValueError(
            f"K={k} too large for exhaustive automorphism search; "
            "supply an algebraic permutation table manually"
        )
    words = {tuple(w) for w in code.codewords.tolist()}
    rest = list(range(k))
    perms = []
    for i in range(k):
        found = None
        others = [p for p in rest if p != i]
        for tail in itertools.permutations(others):
            perm = np.asarray((i,) + tail, dtype=np.intp)
            permuted = {tuple(w) for w in code.codewords[:, perm].tolist()}
            if permuted == words:
                found = perm
                break
        if found is None:
            return InvarianceReport(False, failing_position=i)
        perms.append(found)
    return InvarianceReport(True, table=PermutationTable(perms))


def design_rate(j: int, k: int, m_prime: int, t: float) -> float:
    """Design rate R = 1 - J/K - t*(J/K)*(m'-1) of a (C, J, K, t) ensemble."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t={t} outside [0, 1]")
    if j >= k:
        raise ValueError(f"need J < K, got J={j} K={k}")
    r = 1.0 - j / k - t * (j / k) * (m_prime - 1)
    if r <= 0.0:
        warnings.warn(f"design rate {r:.4f} <= 0 for (J={j}, K={k}, m'={m_prime}, t={t})")
    return r


@dataclass
class EnsembleSpec:
    """Parameters of a (C, J, K, t) GLDPC ensemble, optionally with a block length."""

    subcode: LinearSubcode
    J: int
    K: int
    t: float
    n: int | None = None

    def __post_init__(self):
        if self.subcode.length != self.K:
            raise ValueError(
                f"subcode length {self.subcode.length} != constraint degree {self.K}"
            )
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"t={self.t} outside [0, 1]")
        if self.n is not None and (self.n * self.J) % self.K != 0:
            raise ValueError(f"n*J = {self.n * self.J} not divisible by K = {self.K}")

    @property
    def n_constraints(self) -> int:
        if self.n is None:
            raise ValueError("no block length set")
        return self.n * self.J // self.K

    @property
    def n_gc(self) -> int:
        return round(self.t * self.n_constraints)

    def design_rate(self) -> float:
        return design_rate(self.J, self.K, self.subcode.m_prime, self.t)

"""Finite Tanner-graph sampling for (C, J, K, t) ensembles.

Graphs come from the socket model: every variable node gets J sockets, every
constraint node K sockets, and a uniform permutation matches them. Constraint
nodes are tagged SPC or GC; for GC nodes the socket order fixes which subcode
position each attached variable occupies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .subcodes import EnsembleSpec, LinearSubcode, get_subcode

DEFAULT_MAX_SWAPS = 1_000_000


class CleaningError(RuntimeError):
    """Raised when 4-cycle / parallel-edge removal exhausts its swap budget."""

    def __init__(self, remaining: int):
        super().__init__(f"cleaning budget exhausted with {remaining} violating constraint(s)")
        self.remaining = remaining


@dataclass
class TannerGraph:
    """Bipartite constraint graph with typed constraint nodes.

    ``rows[c]`` lists the variable indices attached to constraint ``c`` in
    socket order; for GC constraints the position within the row is the subcode
    coordinate i_G. Rows may have unequal lengths (the derived comparison LDPC
    is irregular on both sides).
    """

    n: int
    rows: list[np.ndarray]
    is_gc: np.ndarray  # bool per constraint
    subcode: LinearSubcode | None
    j: int
    k: int
    t: float

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n_edges(self) -> int:
        return sum(r.size for r in self.rows)

    def variable_degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for r in self.rows:
            np.add.at(deg, r, 1)
        return deg

    def copy(self) -> "TannerGraph":
        return TannerGraph(self.n, [r.copy() for r in self.rows], self.is_gc.copy(),
                           self.subcode, self.j, self.k, self.t)


def sample_graph(spec: EnsembleSpec, n: int, seed: int) -> TannerGraph:
    """Draw a uniform socket matching for n variables under ``spec``."""
    if (n * spec.J) % spec.K != 0:
        raise ValueError(f"n*J = {n * spec.J} not divisible by K = {spec.K}")
    m = n * spec.J // spec.K
    rng = np.random.default_rng(seed)
    sockets = np.repeat(np.arange(n), spec.J)
    matching = rng.permutation(sockets).reshape(m, spec.K)
    n_gc = int(round(spec.t * m))
    is_gc = np.zeros(m, dtype=bool)
    is_gc[:n_gc] = True
    order = rng.permutation(m)
    rows = [matching[c] for c in order]
    return TannerGraph(n, rows, is_gc[order], spec.subcode, spec.J, spec.K, spec.t)


def _violating_constraints(rows: list[np.ndarray], n: int) -> set[int]:
    """Constraints involved in a parallel edge or a 4-cycle.

    A parallel edge is a repeated variable within one row; a 4-cycle is a pair
    of variables shared by two rows. Both reduce to "some unordered variable
    pair (or self-pair) appears under more than one (constraint, pair) slot",
    so one pass over per-row variable pairs finds everything.
    """
    bad: set[int] = set()
    seen: dict[tuple[int, int], int] = {}
    for c, r in enumerate(rows):
        if np.unique(r).size != r.size:
            bad.add(c)
        for a in range(r.size):
            for b in range(a + 1, r.size):
                key = (min(r[a], r[b]), max(r[a], r[b]))
                other = seen.get(key)
                if other is not None and other != c:
                    bad.add(c)
                    bad.add(other)
                else:
                    seen[key] = c
    return bad


@dataclass
class GirthReport:
    ok: bool
    parallel_edges: list[tuple[int, int]]  # (constraint, variable)
    four_cycles: list[tuple[int, int, int, int]]  # (c1, c2, v1, v2)


def girth_check(graph: TannerGraph) -> GirthReport:
    """Deterministic scan for parallel edges and 4-cycles with witnesses."""
    parallel: list[tuple[int, int]] = []
    cycles: list[tuple[int, int, int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for c, r in enumerate(graph.rows):
        vals, counts = np.unique(r, return_counts=True)
        for v in vals[counts > 1]:
            parallel.append((c, int(v)))
        for a in range(r.size):
            for b in range(a + 1, r.size):
                key = (min(r[a], r[b]), max(r[a], r[b]))
                other = seen.get(key)
                if other is not None and other != c:
                    cycles.append((other, c, key[0], key[1]))
                else:
                    seen[key] = c
    return GirthReport(not parallel and not cycles, parallel, cycles)


def clean_graph(graph: TannerGraph, seed: int,
                max_attempts: int = DEFAULT_MAX_SWAPS) -> TannerGraph:
    """Remove parallel edges and 4-cycles by constraint-side double-edge swaps.

    Each swap exchanges the variable endpoints of one edge incident to a
    violating constraint and one uniformly random edge. Degrees on both sides
    and GC socket semantics are preserved.
    """
    out = graph.copy()
    rng = np.random.default_rng(seed)
    slots = [(c, s) for c, r in enumerate(out.rows) for s in range(r.size)]
    attempts = 0
    bad = _violating_constraints(out.rows, out.n)
    while bad:
        if attempts >= max_attempts:
            raise CleaningError(len(bad))
        ordered = sorted(bad)
        c1 = ordered[rng.integers(len(ordered))]
        s1 = int(rng.integers(out.rows[c1].size))
        c2, s2 = slots[rng.integers(len(slots))]
        out.rows[c1][s1], out.rows[c2][s2] = out.rows[c2][s2], out.rows[c1][s1]
        attempts += 1
        bad = _violating_constraints(out.rows, out.n)
    return out


def derive_comparison_ldpc(graph: TannerGraph, seed: int,
                           max_attempts: int = DEFAULT_MAX_SWAPS) -> TannerGraph:
    """Expand GC nodes into their subcode parity rows and re-clean.

    The result is the LDPC code whose parity-check matrix equals the GLDPC's
    full binary matrix (same dimensions, hence same design rate), with 4-cycles
    removed by degree-preserving edge swaps.
    """
    rows: list[np.ndarray] = []
    for c, r in enumerate(graph.rows):
        if graph.is_gc[c]:
            h = graph.subcode.parity_check
            for parity_row in h:
                rows.append(r[np.flatnonzero(parity_row)].copy())
        else:
            rows.append(r.copy())
    ldpc = TannerGraph(graph.n, rows, np.zeros(len(rows), dtype=bool),
                       None, graph.j, graph.k, 0.0)
    return clean_graph(ldpc, seed, max_attempts)


def save_graph(graph: TannerGraph, path) -> None:
    """Adjacency-file serialization; constraint order encodes nothing, socket
    order within a row encodes i_G."""
    name = graph.subcode.name if graph.subcode is not None else "-"
    lines = [f"{graph.n} {graph.m} {graph.j} {graph.k} {graph.t} {name}"]
    for c, r in enumerate(graph.rows):
        tag = "GC" if graph.is_gc[c] else "SPC"
        lines.append(tag + " " + " ".join(str(int(v)) for v in r))
    Path(path).write_text("\n".join(lines) + "\n")


def load_graph(path) -> TannerGraph:
    lines = Path(path).read_text().splitlines()
    n_s, m_s, j_s, k_s, t_s, name = lines[0].split()
    n, m, j, k, t = int(n_s), int(m_s), int(j_s), int(k_s), float(t_s)
    subcode = get_subcode(name) if name != "-" else None
    rows, is_gc = [], []
    for line in lines[1:m + 1]:
        parts = line.split()
        is_gc.append(parts[0] == "GC")
        rows.append(np.array([int(v) for v in parts[1:]], dtype=int))
    return TannerGraph(n, rows, np.array(is_gc), subcode, j, k, t)

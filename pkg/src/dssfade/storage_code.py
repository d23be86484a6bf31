"""Single-repair-group locally repairable code.

A file is split into ``r`` vectors ``w[0..r-1]`` of length ``n = r + 1`` and a
parity vector ``s = w[0] + ... + w[r-1]``. Node ``j`` stores one coordinate of
each, cyclically shifted::

    grid[i][j] = w[i][(j + i) % n]      for rows i < r
    grid[r][j] = s[(j - 1) % n]         parity row

Every coordinate ``c`` then appears exactly once on each of the ``n`` nodes,
so a lost cell is the XOR of the ``r`` cells sharing its coordinate on the
surviving nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .gf import FieldElement, FieldParams

Cell = tuple[int, int]  # (row, node)


@dataclass(frozen=True)
class RepairScenario:
    """Everything needed to rebuild one subpacket from ``r`` helpers."""

    r: int
    alphas: tuple[FieldElement, ...]
    field: FieldParams

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        alphas = tuple(a if isinstance(a, FieldElement) else self.field(a) for a in self.alphas)
        if len(alphas) != self.r:
            raise ValueError(f"expected {self.r} coefficients, got {len(alphas)}")
        for a in alphas:
            if a.field != self.field:
                raise ValueError("coefficient from a different field")
            if not a:
                raise ValueError("repair coefficients must be nonzero")
        object.__setattr__(self, "alphas", alphas)

    @classmethod
    def lrc(cls, r: int, params: FieldParams) -> RepairScenario:
        """XOR repair: every coefficient is 1."""
        return cls(r, tuple(params(1) for _ in range(r)), params)

    @property
    def alpha_values(self) -> tuple[int, ...]:
        return tuple(a.value for a in self.alphas)


@dataclass(frozen=True)
class LrcLayout:
    r: int
    field: FieldParams
    rows: tuple[tuple[FieldElement, ...], ...]

    @property
    def n(self) -> int:
        return self.r + 1

    def cell(self, row: int, node: int) -> FieldElement:
        return self.rows[row][node]

    def node_contents(self, node: int) -> tuple[FieldElement, ...]:
        return tuple(row[node] for row in self.rows)

    def coordinate(self, row: int, node: int) -> int:
        """Coordinate index of the vector stored at ``(row, node)``."""
        n = self.n
        if row < self.r:
            return (node + row) % n
        return (node - 1) % n

    def parity_ok(self) -> bool:
        n, r = self.n, self.r
        w = [[None] * n for _ in range(r)]
        s = [None] * n
        for j in range(n):
            for i in range(r):
                w[i][(j + i) % n] = self.rows[i][j]
            s[(j - 1) % n] = self.rows[r][j]
        for c in range(n):
            acc = w[0][c]
            for i in range(1, r):
                acc = acc + w[i][c]
            if acc != s[c]:
                return False
        return True


def layout(file_vectors: Sequence[Sequence[FieldElement]], params: FieldParams) -> LrcLayout:
    r = len(file_vectors)
    if r < 1:
        raise ValueError("need at least one file vector")
    n = r + 1
    vecs = []
    for i, v in enumerate(file_vectors):
        if len(v) != n:
            raise ValueError(f"file vector {i} has length {len(v)}, expected {n}")
        vecs.append([x if isinstance(x, FieldElement) else params(x) for x in v])
        if any(x.field != params for x in vecs[-1]):
            raise ValueError(f"file vector {i} is over a different field")
    s = []
    for c in range(n):
        acc = vecs[0][c]
        for i in range(1, r):
            acc = acc + vecs[i][c]
        s.append(acc)
    rows = [tuple(vecs[i][(j + i) % n] for j in range(n)) for i in range(r)]
    rows.append(tuple(s[(j - 1) % n] for j in range(n)))
    return LrcLayout(r, params, tuple(rows))


def repair_equation(lay: LrcLayout, node: int, row: int) -> tuple[list[Cell], list[FieldElement]]:
    """Helper cells, one per surviving node, that XOR to the lost cell."""
    n, r = lay.n, lay.r
    if not 0 <= node < n:
        raise IndexError(f"node {node} out of range [0, {n})")
    if not 0 <= row <= r:
        raise IndexError(f"row {row} out of range [0, {r}]")
    c = lay.coordinate(row, node)
    # Cells holding coordinate c: w[i][c] at node (c - i) % n, s[c] at node (c + 1) % n.
    holders: list[Cell] = [(i, (c - i) % n) for i in range(r)] + [(r, (c + 1) % n)]
    helpers = [cell for cell in holders if cell != (row, node)]
    assert len(helpers) == r and len({nd for _, nd in helpers}) == r
    one = lay.field(1)
    return helpers, [one] * r


def reconstruct(scenario: RepairScenario, estimates: Sequence[FieldElement]) -> FieldElement:
    """``sum(alpha_i * estimate_i)`` over GF(q)."""
    if len(estimates) != scenario.r:
        raise ValueError(f"expected {scenario.r} estimates, got {len(estimates)}")
    f = scenario.field
    acc = f(0)
    for a, w in zip(scenario.alphas, estimates):
        acc = acc + a * (w if isinstance(w, FieldElement) else f(w))
    return acc

"""
Permutation groups acting on vertices, vertex sets and cells.

A permutation is a tuple ``perm`` with ``perm[v]`` the image of vertex ``v``.
"""

from __future__ import annotations

import logging
import re
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from ..config import get_settings
from ..errors import GroupTooLarge, InvalidPermutation, LabelMismatch
from .core import BidirectedGraph, members

logger = logging.getLogger(__name__)

Permutation = Tuple[int, ...]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``a`` after ``b``."""
    return tuple(a[b[v]] for v in range(len(b)))


def inverse(a: Permutation) -> Permutation:
    inv = [0] * len(a)
    for v, image in enumerate(a):
        inv[image] = v
    return tuple(inv)


def permute_set(perm: Permutation, mask: int) -> int:
    """Image of a vertex set."""
    out = 0
    for v in members(mask):
        out |= 1 << perm[v]
    return out


def permute_cell(perm: Permutation, cell: int) -> int:
    """Cell action ``j_v = i_{perm(v)}``."""
    out = 0
    for v, image in enumerate(perm):
        if cell >> image & 1:
            out |= 1 << v
    return out


def from_cycles(cycles: Iterable[Sequence[int]], nvars: int) -> Permutation:
    perm = list(range(nvars))
    seen = set()
    for cycle in cycles:
        for v in cycle:
            if not (0 <= v < nvars):
                raise InvalidPermutation(f"Vertex {v} outside 0..{nvars - 1}")
            if v in seen:
                raise InvalidPermutation(f"Vertex {v} appears twice in one generator")
            seen.add(v)
        m = len(cycle)
        for i in range(m):
            perm[cycle[i]] = cycle[(i + 1) % m]
    return tuple(perm)


class VertexPermutationGroup:
    """Group generated by vertex permutations, expanded by closure."""

    def __init__(
        self,
        labels: Sequence[str],
        generators: Iterable[Sequence[int]] = (),
        max_order: Optional[int] = None,
    ):
        self.labels: Tuple[str, ...] = tuple(labels)
        n = len(self.labels)
        gens: List[Permutation] = []
        for gen in generators:
            perm = tuple(int(x) for x in gen)
            if len(perm) != n or sorted(perm) != list(range(n)):
                raise InvalidPermutation(f"{list(perm)} is not a bijection of {n} vertices")
            gens.append(perm)
        self.generators: Tuple[Permutation, ...] = tuple(gens)
        cap = max_order if max_order is not None else get_settings().max_group_order
        self.elements: Tuple[Permutation, ...] = self._closure(cap)

    @classmethod
    def identity(cls, labels: Sequence[str]) -> "VertexPermutationGroup":
        return cls(labels, [])

    @classmethod
    def parse(
        cls, text: str, labels: Sequence[str], max_order: Optional[int] = None
    ) -> "VertexPermutationGroup":
        """Parse one generator per line in cycle notation, e.g. ``(A1 A2)(D1 D2)``."""
        index = {label: i for i, label in enumerate(labels)}
        generators = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            leftover = _CYCLE_RE.sub("", line).strip()
            if leftover:
                raise InvalidPermutation(f"Line {lineno}: cannot parse {leftover!r}")
            cycles = []
            for body in _CYCLE_RE.findall(line):
                names = body.replace(",", " ").split()
                for name in names:
                    if name not in index:
                        raise LabelMismatch(f"Line {lineno}: unknown vertex label {name!r}")
                cycles.append([index[name] for name in names])
            generators.append(from_cycles(cycles, len(labels)))
        return cls(labels, generators, max_order=max_order)

    def _closure(self, cap: int) -> Tuple[Permutation, ...]:
        ident = tuple(range(len(self.labels)))
        elements = {ident}
        boundary = [ident]
        while boundary:
            fresh = []
            for gen in self.generators:
                for elem in boundary:
                    prod = compose(gen, elem)
                    if prod not in elements:
                        elements.add(prod)
                        fresh.append(prod)
                        if len(elements) > cap:
                            raise GroupTooLarge(cap)
            boundary = fresh
        logger.debug(f"Group with {len(self.generators)} generators has order {len(elements)}")
        return tuple(sorted(elements))

    @property
    def nvars(self) -> int:
        return len(self.labels)

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def cycle_notation(self) -> List[str]:
        """Generators rendered back to cycle notation."""
        out = []
        for gen in self.generators:
            seen = set()
            parts = []
            for start in range(len(gen)):
                if start in seen or gen[start] == start:
                    continue
                cycle = [start]
                seen.add(start)
                nxt = gen[start]
                while nxt != start:
                    cycle.append(nxt)
                    seen.add(nxt)
                    nxt = gen[nxt]
                parts.append("(" + " ".join(self.labels[v] for v in cycle) + ")")
            out.append("".join(parts) or "()")
        return out


def is_invariant(g: BidirectedGraph, s: VertexPermutationGroup) -> bool:
    """True iff every generator maps the edge set of ``g`` onto itself."""
    if s.nvars != g.nvars:
        raise InvalidPermutation(f"Group acts on {s.nvars} vertices, graph has {g.nvars}")
    edges = set(g.edges)
    for gen in s.generators:
        mapped = {(min(gen[v], gen[w]), max(gen[v], gen[w])) for v, w in edges}
        if mapped != edges:
            return False
    return True


def orbit_of_set(s: VertexPermutationGroup, c: int) -> FrozenSet[int]:
    """All images of vertex set ``c`` under the group."""
    return frozenset(permute_set(perm, c) for perm in s.elements)

"""Bound quiver algebras A = kQ/I with monomial relations.

Paths are written as tuples of arrow indices in traversal order, so
``(a, b)`` means "first a, then b".  Vertices are 1-indexed.

Algebra file format (one directive per line, ``#`` starts a comment)::

    q = <prime>
    vertices = <n>
    arrow <name> <source> <target>
    relation <name1> <name2> [...]
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

from .coeff import PRIMES


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Path:
    start: int
    end: int
    arrows: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.arrows)


class AlgebraSpec:
    """Quiver, monomial relations and the prime q.  Immutable after construction."""

    def __init__(self, q: int, vertex_count: int, arrows, relations=(), name: str = ""):
        if q not in PRIMES:
            raise AlgebraError(f"q must be a prime in {PRIMES}, got {q}")
        if vertex_count < 1:
            raise AlgebraError("an algebra needs at least one vertex")
        self.q = q
        self.n = vertex_count
        self.name = name
        self.arrows: tuple[Arrow, ...] = tuple(Arrow(*a) if not isinstance(a, Arrow) else a for a in arrows)
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate arrow name")
        for a in self.arrows:
            if not (1 <= a.source <= self.n and 1 <= a.target <= self.n):
                raise AlgebraError(f"arrow {a.name} has an endpoint outside 1..{self.n}")
        index = {a.name: k for k, a in enumerate(self.arrows)}
        rels = []
        for rel in relations:
            try:
                path = tuple(index[r] if isinstance(r, str) else int(r) for r in rel)
            except KeyError as exc:
                raise AlgebraError(f"relation uses unknown arrow {exc.args[0]}") from None
            if len(path) < 2:
                raise AlgebraError("relations must have length at least 2")
            for x, y in zip(path, path[1:]):
                if self.arrows[x].target != self.arrows[y].source:
                    raise AlgebraError(f"relation {' '.join(self.arrows[k].name for k in path)} is not composable")
            rels.append(path)
        self.relations: tuple[tuple[int, ...], ...] = tuple(rels)
        self._all_paths = self._enumerate_paths()

    def __repr__(self) -> str:
        return f"AlgebraSpec(q={self.q}, n={self.n}, arrows={len(self.arrows)}, relations={len(self.relations)})"

    def arrow_index(self, name: str) -> int:
        for k, a in enumerate(self.arrows):
            if a.name == name:
                return k
        raise KeyError(name)

    def _is_zero_after(self, arrows: tuple[int, ...]) -> bool:
        # only suffixes can be new occurrences of a relation
        for rel in self.relations:
            if len(rel) <= len(arrows) and arrows[-len(rel):] == rel:
                return True
        return False

    def _enumerate_paths(self) -> list[Path]:
        longest = max((len(r) for r in self.relations), default=2)
        states = self.n * max(1, len(self.arrows)) ** (max(longest, 2) - 1)
        out = [Path(i, i, ()) for i in range(1, self.n + 1)]
        level = list(out)
        length = 0
        while level:
            length += 1
            if length > states + 1:
                raise AlgebraError("not finite dimensional")
            nxt = []
            for p in level:
                for k, a in enumerate(self.arrows):
                    if a.source != p.end:
                        continue
                    arrows = p.arrows + (k,)
                    if not self._is_zero_after(arrows):
                        nxt.append(Path(p.start, a.target, arrows))
            nxt.sort(key=lambda p: (p.start, p.arrows))
            out.extend(nxt)
            level = nxt
        return out

    @cached_property
    def path_basis(self) -> dict[tuple[int, int], list[Path]]:
        """Nonzero paths grouped by (start, end); e_i comes first in (i, i)."""
        basis: dict[tuple[int, int], list[Path]] = defaultdict(list)
        for p in self._all_paths:
            basis[(p.start, p.end)].append(p)
        return {k: list(v) for k, v in basis.items()}

    def paths(self, i: int, j: int) -> list[Path]:
        return self.path_basis.get((i, j), [])

    @property
    def dim(self) -> int:
        return len(self._all_paths)

    def extend(self, p: Path, arrow: int) -> Path | None:
        """p followed by ``arrow``; None when the product is zero in A."""
        a = self.arrows[arrow]
        if a.source != p.end:
            return None
        arrows = p.arrows + (arrow,)
        if self._is_zero_after(arrows):
            return None
        return Path(p.start, a.target, arrows)

    def to_text(self) -> str:
        lines = [f"q = {self.q}", f"vertices = {self.n}"]
        lines += [f"arrow {a.name} {a.source} {a.target}" for a in self.arrows]
        lines += ["relation " + " ".join(self.arrows[k].name for k in r) for r in self.relations]
        return "\n".join(lines) + "\n"


def parse_algebra(text: str, name: str = "") -> AlgebraSpec:
    q = None
    n = None
    arrows = []
    relations = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.replace("=", " = ").split()
        head = tokens[0]
        try:
            if head in ("q", "vertices"):
                if len(tokens) != 3 or tokens[1] != "=":
                    raise AlgebraError(f"line {lineno}: expected '{head} = <int>'")
                value = int(tokens[2])
                if head == "q":
                    q = value
                else:
                    n = value
            elif head == "arrow":
                if len(tokens) != 4:
                    raise AlgebraError(f"line {lineno}: expected 'arrow <name> <source> <target>'")
                arrows.append((tokens[1], int(tokens[2]), int(tokens[3])))
            elif head == "relation":
                if len(tokens) < 3:
                    raise AlgebraError(f"line {lineno}: a relation needs at least two arrows")
                relations.append(tuple(tokens[1:]))
            else:
                raise AlgebraError(f"line {lineno}: unknown directive {head!r}")
        except ValueError as exc:
            if isinstance(exc, AlgebraError):
                raise
            raise AlgebraError(f"line {lineno}: syntax error: {raw.strip()!r}") from None
    if q is None or n is None:
        raise AlgebraError("missing 'q = ...' or 'vertices = ...'")
    return AlgebraSpec(q, n, arrows, relations, name=name)


def load_algebra(path) -> AlgebraSpec:
    from pathlib import Path as _P

    p = _P(path)
    return parse_algebra(p.read_text(), name=p.stem)


def linear_quiver(n: int, q: int, rad2: bool = False) -> AlgebraSpec:
    """1 -> 2 -> ... -> n, optionally with every length-2 path set to zero."""
    arrows = [(f"a{i}", i, i + 1) for i in range(1, n)]
    relations = [(f"a{i}", f"a{i + 1}") for i in range(1, n - 1)] if rad2 else []
    tag = f"a{n}rad2" if rad2 and n > 2 else f"a{n}"
    return AlgebraSpec(q, n, arrows, relations, name=f"{tag}_q{q}" if q != 2 else tag)

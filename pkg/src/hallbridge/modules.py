"""The module category mod A at desk scale.

Representations, morphism spaces, iso-classes, minimal projective
resolutions, Ext groups, the Euler form and extension middle terms.
Morphisms are tuples of per-vertex matrices (index ``j - 1`` for vertex j),
each of shape (dim target_j, dim source_j).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from . import fq
from .quiver import AlgebraSpec, Path

ISO_SEARCH_CAP = 2**20
CATALOG_TUPLE_CAP = 2**20
CATALOG_GROUP_CAP = 2**16


class CapExceeded(RuntimeError):
    pass


class GlobalDimensionError(RuntimeError):
    pass


Morphism = tuple  # tuple[np.ndarray, ...]


class Representation:
    """A module over A: one vector space per vertex and one matrix per arrow."""

    def __init__(self, alg: AlgebraSpec, dims, maps=None, check: bool = True):
        self.alg = alg
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != alg.n:
            raise ValueError(f"dimension vector has {len(self.dims)} entries, algebra has {alg.n} vertices")
        if maps is None:
            maps = [fq.zeros(self.dims[a.target - 1], self.dims[a.source - 1]) for a in alg.arrows]
        self.maps = tuple(np.asarray(m, dtype=np.int64).reshape(self.dims[a.target - 1], self.dims[a.source - 1]) % alg.q
                          for m, a in zip(maps, alg.arrows))
        if len(self.maps) != len(alg.arrows):
            raise ValueError("one matrix per arrow is required")
        if check:
            for rel in alg.relations:
                if self.path_matrix_arrows(rel).any():
                    raise ValueError("representation violates a relation")

    @property
    def q(self) -> int:
        return self.alg.q

    def dim(self, vertex: int) -> int:
        return self.dims[vertex - 1]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_matrix_arrows(self, arrows) -> np.ndarray:
        start = self.alg.arrows[arrows[0]].source
        m = fq.eye(self.dim(start))
        for k in arrows:
            m = (self.maps[k] @ m) % self.q
        return m

    def path_matrix(self, p: Path) -> np.ndarray:
        if not p.arrows:
            return fq.eye(self.dim(p.start))
        return self.path_matrix_arrows(p.arrows)

    def encoding(self) -> tuple[int, ...]:
        """Dimension vector, then arrow matrices in declaration order, row-major."""
        out = list(self.dims)
        for m in self.maps:
            out.extend(int(x) for x in m.reshape(-1))
        return tuple(out)

    def map_code(self) -> int:
        code = 0
        for m in self.maps:
            for x in m.reshape(-1):
                code = code * self.q + int(x)
        return code

    def to_json(self) -> dict:
        return {"dim_vector": list(self.dims), "maps": [m.tolist() for m in self.maps]}

    def __eq__(self, other) -> bool:
        return isinstance(other, Representation) and other.alg is self.alg and other.encoding() == self.encoding()

    def __hash__(self) -> int:
        return hash(self.encoding())

    def __repr__(self) -> str:
        return f"Representation(dims={self.dims})"


class ProjectiveModule(Representation):
    """A direct sum of indecomposable projectives P_i, remembering its summands.

    At each vertex j the basis is the concatenation, over summands P_i in
    order, of the nonzero paths from i to j.
    """

    def __init__(self, alg: AlgebraSpec, summands):
        self.summands = tuple(int(s) for s in summands)
        dims = [0] * alg.n
        offsets = []
        for s in self.summands:
            off = []
            for j in range(1, alg.n + 1):
                off.append(dims[j - 1])
                dims[j - 1] += len(alg.paths(s, j))
            offsets.append(tuple(off))
        self.offsets = tuple(offsets)
        maps = []
        for k, a in enumerate(alg.arrows):
            m = fq.zeros(dims[a.target - 1], dims[a.source - 1])
            for idx, s in enumerate(self.summands):
                src = alg.paths(s, a.source)
                tgt = alg.paths(s, a.target)
                pos = {p: n for n, p in enumerate(tgt)}
                for col, p in enumerate(src):
                    ext = alg.extend(p, k)
                    if ext is not None:
                        m[offsets[idx][a.target - 1] + pos[ext], offsets[idx][a.source - 1] + col] = 1
            maps.append(m)
        super().__init__(alg, dims, maps, check=False)

    def block(self, idx: int, vertex: int) -> slice:
        s = self.summands[idx]
        off = self.offsets[idx][vertex - 1]
        return slice(off, off + len(self.alg.paths(s, vertex)))

    def generator_index(self, idx: int) -> int:
        """Row of e_i for summand ``idx`` inside the space at its own vertex."""
        return self.offsets[idx][self.summands[idx] - 1]

    @property
    def class_vector(self) -> tuple[int, ...]:
        return self.dims

    def __repr__(self) -> str:
        return f"ProjectiveModule({'+'.join(f'P{s}' for s in self.summands) or '0'})"


@lru_cache(maxsize=None)
def projective_sum(alg: AlgebraSpec, summands: tuple[int, ...]) -> ProjectiveModule:
    return ProjectiveModule(alg, summands)


def indec_projective(alg: AlgebraSpec, i: int) -> ProjectiveModule:
    if not 1 <= i <= alg.n:
        raise ValueError(f"vertex {i} outside 1..{alg.n}")
    return projective_sum(alg, (i,))


def simple(alg: AlgebraSpec, i: int) -> Representation:
    dims = [0] * alg.n
    dims[i - 1] = 1
    return Representation(alg, dims)


def zero_module(alg: AlgebraSpec) -> Representation:
    return Representation(alg, [0] * alg.n)


def direct_sum(*reps: Representation) -> Representation:
    alg = reps[0].alg
    dims = [sum(r.dims[j] for r in reps) for j in range(alg.n)]
    maps = []
    for k, a in enumerate(alg.arrows):
        m = fq.zeros(dims[a.target - 1], dims[a.source - 1])
        ro = co = 0
        for r in reps:
            blk = r.maps[k]
            m[ro:ro + blk.shape[0], co:co + blk.shape[1]] = blk
            ro += blk.shape[0]
            co += blk.shape[1]
        maps.append(m)
    return Representation(alg, dims, maps, check=False)


# ---------------------------------------------------------------- morphisms

def zero_morphism(m: Representation, n: Representation) -> Morphism:
    return tuple(fq.zeros(n.dims[j], m.dims[j]) for j in range(m.alg.n))


def identity(m: Representation) -> Morphism:
    return tuple(fq.eye(d) for d in m.dims)


def compose(f: Morphism, g: Morphism, q: int) -> Morphism:
    """f after g."""
    return tuple((a @ b) % q for a, b in zip(f, g))


def add(f: Morphism, g: Morphism, q: int) -> Morphism:
    return tuple((a + b) % q for a, b in zip(f, g))


def scale(c: int, f: Morphism, q: int) -> Morphism:
    return tuple((c * a) % q for a in f)


def flatten(f: Morphism) -> np.ndarray:
    if not f:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate([a.reshape(-1) for a in f])


def unflatten(vec: np.ndarray, src_dims, tgt_dims) -> Morphism:
    out = []
    off = 0
    for s, t in zip(src_dims, tgt_dims):
        out.append(np.array(vec[off:off + s * t], dtype=np.int64).reshape(t, s))
        off += s * t
    return tuple(out)


def is_morphism(f: Morphism, m: Representation, n: Representation) -> bool:
    q = m.q
    for k, a in enumerate(m.alg.arrows):
        lhs = (f[a.target - 1] @ m.maps[k]) % q
        rhs = (n.maps[k] @ f[a.source - 1]) % q
        if not np.array_equal(lhs, rhs):
            return False
    return True


def add_intertwiner_equations(sys: fq.BlockSystem, blocks, m: Representation, n: Representation,
                              coef: int = 1) -> None:
    """Constrain the per-vertex blocks to form a module map m -> n."""
    for k, a in enumerate(m.alg.arrows):
        s, t = a.source - 1, a.target - 1
        if n.dims[t] * m.dims[s] == 0:
            continue
        sys.equation([(coef, None, blocks[t], m.maps[k]), (-coef, n.maps[k], blocks[s], None)])


def hom_blocks(sys: fq.BlockSystem, m: Representation, n: Representation) -> list[int]:
    return [sys.block(n.dims[j], m.dims[j]) for j in range(m.alg.n)]


def hom_basis(m: Representation, n: Representation) -> list[Morphism]:
    """Basis of Hom_A(m, n) from the commuting-square equations."""
    if m.alg is not n.alg:
        raise ValueError("modules over different algebras")
    sys = fq.BlockSystem(m.q)
    blocks = hom_blocks(sys, m, n)
    add_intertwiner_equations(sys, blocks, m, n)
    return [tuple(sys.split(v)) for v in sys.kernel()]


def hom_dim(m: Representation, n: Representation) -> int:
    return len(hom_basis(m, n))


def _vertex_slices(src_dims, tgt_dims):
    out = []
    off = 0
    for s, t in zip(src_dims, tgt_dims):
        out.append((off, t, s))
        off += s * t
    return out


def find_invertible(basis: list[Morphism], src_dims, tgt_dims, q: int,
                    cap: int = ISO_SEARCH_CAP, rng_seed: int = 0) -> Morphism | None:
    """An element of span(basis) invertible at every vertex, or None.

    A short random probe runs first; absence is then certified by exhausting
    the whole span.
    """
    if tuple(src_dims) != tuple(tgt_dims):
        return None
    if sum(src_dims) == 0:
        return tuple(fq.zeros(0, 0) for _ in src_dims)
    h = len(basis)
    if h == 0:
        return None
    if q**h > cap:
        raise CapExceeded("iso test too large")
    mat = np.array([flatten(b) for b in basis], dtype=np.int64)
    slices = _vertex_slices(src_dims, tgt_dims)

    def check(coeffs: np.ndarray) -> int:
        flat = (coeffs @ mat) % q
        ok = np.ones(coeffs.shape[0], dtype=bool)
        for off, t, s in slices:
            if t == 0:
                continue
            blocks = flat[:, off:off + t * s].reshape(-1, t, s)
            ok &= fq.batched_invertible(blocks, q)
        hits = np.nonzero(ok)[0]
        return int(hits[0]) if hits.size else -1

    rng = np.random.default_rng(rng_seed)
    probe = rng.integers(0, q, size=(min(64, q**h), h), dtype=np.int64)
    hit = check(probe)
    if hit >= 0:
        return unflatten((probe[hit] @ mat) % q, src_dims, tgt_dims)
    for batch in fq.all_vectors(h, q):
        hit = check(batch)
        if hit >= 0:
            return unflatten((batch[hit] @ mat) % q, src_dims, tgt_dims)
    return None


def count_invertible(basis: list[Morphism], dims, q: int, cap: int = ISO_SEARCH_CAP) -> int:
    h = len(basis)
    if sum(dims) == 0:
        return 1
    if q**h > cap:
        raise CapExceeded("search space too large")
    if h == 0:
        return 0
    mat = np.array([flatten(b) for b in basis], dtype=np.int64)
    slices = _vertex_slices(dims, dims)
    total = 0
    for batch in fq.all_vectors(h, q):
        flat = (batch @ mat) % q
        ok = np.ones(batch.shape[0], dtype=bool)
        for off, t, s in slices:
            if t:
                ok &= fq.batched_invertible(flat[:, off:off + t * s].reshape(-1, t, s), q)
        total += int(ok.sum())
    return total


def is_isomorphic(m: Representation, n: Representation) -> bool:
    if m.dims != n.dims:
        return False
    return find_invertible(hom_basis(m, n), m.dims, n.dims, m.q) is not None


def aut_order(m: Representation) -> int:
    return count_invertible(hom_basis(m, m), m.dims, m.q)


# ------------------------------------------------------- sub and quotient

def subrepresentation(m: Representation, bases) -> tuple[Representation, Morphism]:
    """The subrepresentation spanned by the columns ``bases[j]`` and its inclusion."""
    q = m.q
    maps = []
    for k, a in enumerate(m.alg.arrows):
        bs, bt = bases[a.source - 1], bases[a.target - 1]
        img = (m.maps[k] @ bs) % q
        if bt.shape[1] == 0:
            if img.any():
                raise ValueError("columns are not closed under the arrow maps")
            maps.append(fq.zeros(0, bs.shape[1]))
            continue
        c = fq.solve(bt, img, q)
        if c is None:
            raise ValueError("columns are not closed under the arrow maps")
        maps.append(c)
    sub = Representation(m.alg, [b.shape[1] for b in bases], maps, check=False)
    return sub, tuple(b % q for b in bases)


def quotient(m: Representation, bases) -> tuple[Representation, Morphism]:
    """m / span(bases) and the projection, using standard-vector complements."""
    q = m.q
    comps, projs = [], []
    for j, b in enumerate(bases):
        b = fq.column_basis(b, q) if b.shape[1] else b
        c = fq.complete_basis(b, m.dims[j], q)
        full = np.concatenate([b, c], axis=1)
        inv = fq.inverse(full, q) if full.shape[0] else fq.zeros(0, 0)
        comps.append(c)
        projs.append(inv[b.shape[1]:, :])
    maps = []
    for k, a in enumerate(m.alg.arrows):
        maps.append((projs[a.target - 1] @ m.maps[k] @ comps[a.source - 1]) % q)
    quo = Representation(m.alg, [c.shape[1] for c in comps], maps, check=False)
    return quo, tuple(projs)


def kernel(f: Morphism, m: Representation) -> tuple[Representation, Morphism]:
    q = m.q
    bases = [fq.kernel(fj, q).T if fj.shape[0] else fq.eye(fj.shape[1]) for fj in f]
    return subrepresentation(m, bases)


def image(f: Morphism, n: Representation) -> tuple[Representation, Morphism]:
    q = n.q
    bases = [fq.column_basis(fj, q) if fj.shape[1] else fq.zeros(fj.shape[0], 0) for fj in f]
    return subrepresentation(n, bases)


def radical_bases(m: Representation) -> list[np.ndarray]:
    q = m.q
    out = []
    for j in range(1, m.alg.n + 1):
        cols = [m.maps[k] for k, a in enumerate(m.alg.arrows) if a.target == j]
        if cols and m.dim(j):
            out.append(fq.column_basis(np.concatenate(cols, axis=1) % q, q))
        else:
            out.append(fq.zeros(m.dim(j), 0))
    return out


def top_dims(m: Representation) -> tuple[int, ...]:
    return tuple(m.dims[j] - b.shape[1] for j, b in enumerate(radical_bases(m)))


def projective_morphism(p: ProjectiveModule, target: Representation, images) -> Morphism:
    """The map sending the generator of summand k to ``images[k]``."""
    alg = p.alg
    out = []
    for j in range(1, alg.n + 1):
        cols = []
        for idx, s in enumerate(p.summands):
            x = np.asarray(images[idx], dtype=np.int64).reshape(-1, 1)
            for path in alg.paths(s, j):
                cols.append((target.path_matrix(path) @ x) % alg.q)
        if cols:
            out.append(np.concatenate(cols, axis=1))
        else:
            out.append(fq.zeros(target.dim(j), 0))
    return tuple(out)


def generator_images(f: Morphism, p: ProjectiveModule) -> list[np.ndarray]:
    """Inverse of :func:`projective_morphism`: where each generator goes."""
    return [f[s - 1][:, p.generator_index(k)] for k, s in enumerate(p.summands)]


def projective_cover(m: Representation) -> tuple[ProjectiveModule, Morphism]:
    q = m.q
    summands, images = [], []
    for j, rad in enumerate(radical_bases(m), start=1):
        tops = fq.complete_basis(rad, m.dim(j), q)
        for c in range(tops.shape[1]):
            summands.append(j)
            images.append(tops[:, c])
    p = projective_sum(m.alg, tuple(summands))
    return p, projective_morphism(p, m, images)


# ------------------------------------------------------------ resolutions

@dataclass
class ResolutionInvariants:
    syzygy_classes: list[tuple[int, ...]]
    m_odd: tuple[int, ...]
    m_even: tuple[int, ...]
    p_odd: tuple[int, ...]
    p_even: tuple[int, ...]
    tau: tuple[int, ...]


def _vsum(vectors, n) -> tuple[int, ...]:
    out = [0] * n
    for v in vectors:
        for j in range(n):
            out[j] += v[j]
    return tuple(out)


def vsub(a, b) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def vadd(a, b) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def vneg(a) -> tuple[int, ...]:
    return tuple(-x for x in a)


@dataclass
class Resolution:
    """0 -> P_n -> ... -> P_1 -> P_0 -> M -> 0.

    ``maps[i - 1]`` is p_i : P_i -> P_{i-1}; ``augmentation`` is p_0 : P_0 -> M;
    ``syzygies[i - 1]`` is Im p_i as a representation.
    """

    module: Representation
    terms: list[ProjectiveModule]
    maps: list[Morphism]
    augmentation: Morphism
    syzygies: list[Representation]
    minimal: bool = True

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    @property
    def invariants(self) -> ResolutionInvariants:
        n = self.module.alg.n
        syz = [s.dims for s in self.syzygies]
        m_odd = _vsum([syz[i - 1] for i in range(1, len(syz) + 1) if i % 2 == 1], n)
        m_even = _vsum([syz[i - 1] for i in range(2, len(syz) + 1) if i % 2 == 0], n)
        p_odd = _vsum([t.dims for i, t in enumerate(self.terms) if i % 2 == 1], n)
        p_even = _vsum([t.dims for i, t in enumerate(self.terms) if i % 2 == 0], n)
        return ResolutionInvariants(syz, m_odd, m_even, p_odd, p_even, vsub(m_odd, m_even))

    def check_exact(self) -> bool:
        """Exactness by rank bookkeeping at every vertex of every term."""
        q = self.module.q
        aug_ranks = [fq.rank(a, q) for a in self.augmentation]
        if list(aug_ranks) != list(self.module.dims):
            return False
        prev = aug_ranks
        for i, t in enumerate(self.terms):
            nxt = self.maps[i] if i < len(self.maps) else None
            for j in range(len(t.dims)):
                ker = t.dims[j] - prev[j] if i == 0 else t.dims[j] - prev[j]
                img = fq.rank(nxt[j], q) if nxt is not None else 0
                if ker != img:
                    return False
            if nxt is not None:
                prev = [fq.rank(a, q) for a in nxt]
        return True


def minimal_resolution(m: Representation) -> Resolution:
    alg = m.alg
    p0, eps = projective_cover(m)
    terms, maps, syz = [p0], [], []
    k, inc = kernel(eps, p0)
    while not k.is_zero():
        if len(terms) > alg.dim:
            raise GlobalDimensionError("infinite global dimension")
        syz.append(k)
        p, cover = projective_cover(k)
        maps.append(compose(inc, cover, alg.q))
        terms.append(p)
        k, inc = kernel(cover, p)
    return Resolution(m, terms, maps, eps, syz, minimal=True)


def resolution_from_maps(m: Representation, terms, maps, augmentation) -> Resolution:
    """Wrap an arbitrary projective resolution, computing syzygies as images."""
    syz = [image(p, terms[i])[0] for i, p in enumerate(maps)]
    res = Resolution(m, list(terms), list(maps), augmentation, syz, minimal=False)
    if not res.check_exact():
        raise ValueError("resolution does not resolve the module")
    return res


@lru_cache(maxsize=None)
def global_dimension(alg: AlgebraSpec) -> int:
    return max(minimal_resolution(simple(alg, i)).length for i in range(1, alg.n + 1))


def ext_dims(m: Representation, n: Representation, res: Resolution | None = None) -> list[int]:
    """dim Ext^t(m, n) for t = 0..gldim A, from Hom(P_t, n) of a resolution of m."""
    q = m.q
    res = res or minimal_resolution(m)
    homs = [hom_basis(t, n) for t in res.terms]
    ranks = []
    for t in range(len(res.terms) - 1):
        p = res.maps[t]
        rows = [flatten(compose(f, p, q)) for f in homs[t]]
        ranks.append(fq.rank(np.array(rows, dtype=np.int64), q) if rows else 0)
    ranks.append(0)
    out = []
    for t in range(len(res.terms)):
        before = ranks[t - 1] if t else 0
        out.append(len(homs[t]) - ranks[t] - before)
    gl = global_dimension(m.alg)
    out += [0] * (gl + 1 - len(out))
    return out


@lru_cache(maxsize=None)
def euler_matrix(alg: AlgebraSpec) -> tuple[tuple[int, ...], ...]:
    rows = []
    for i in range(1, alg.n + 1):
        si = simple(alg, i)
        res = minimal_resolution(si)
        row = []
        for j in range(1, alg.n + 1):
            e = ext_dims(si, simple(alg, j), res)
            row.append(sum((-1) ** t * d for t, d in enumerate(e)))
        rows.append(tuple(row))
    return tuple(rows)


def euler_form(alg: AlgebraSpec, alpha, beta, symmetric: bool = False) -> int:
    e = euler_matrix(alg)
    val = sum(alpha[i] * e[i][j] * beta[j] for i in range(alg.n) for j in range(alg.n))
    if symmetric:
        val += euler_form(alg, beta, alpha)
    return val


# ------------------------------------------------------------ catalog

def _rows(vectors, width: int) -> np.ndarray:
    if not vectors:
        return np.zeros((0, width), dtype=np.int64)
    return np.array(vectors, dtype=np.int64).reshape(len(vectors), width)


@dataclass(frozen=True, order=True)
class ModuleClass:
    """Iso-class id: dimension vector plus rank inside that dimension vector."""

    dims: tuple[int, ...]
    index: int

    def __str__(self) -> str:
        return ",".join(map(str, self.dims)) + f"#{self.index}"

    @classmethod
    def parse(cls, text: str) -> ModuleClass:
        dims, idx = text.split("#")
        return cls(tuple(int(x) for x in dims.split(",")), int(idx))


@dataclass
class DimTable:
    dims: tuple[int, ...]
    reps: list[Representation] = field(default_factory=list)
    code_to_class: dict[int, int] = field(default_factory=dict)


def _gl_elements(d: int, q: int) -> np.ndarray:
    if d == 0:
        return np.zeros((1, 0, 0), dtype=np.int64)
    allm = np.concatenate(list(fq.all_vectors(d * d, q)), axis=0).reshape(-1, d, d)
    return allm[fq.batched_invertible(allm, q)]


def _batched_inverse(mats: np.ndarray, q: int) -> np.ndarray:
    return np.array([fq.inverse(m, q) if m.size else m for m in mats], dtype=np.int64).reshape(mats.shape)


class ModuleCategory:
    """Iso-classes of A-modules up to a dimension bound, with cached data.

    Classes of a given dimension vector are enumerated exhaustively on first
    use: every tuple of arrow matrices satisfying the relations is generated in
    lexicographic encoding order and grouped into orbits of the base-change
    group prod_i GL(d_i).  The first tuple met in an orbit is its
    representative, so classes come out sorted by minimal encoding.
    """

    def __init__(self, alg: AlgebraSpec, bound=None):
        self.alg = alg
        self.q = alg.q
        self.bound = tuple(bound) if bound is not None else None
        self._tables: dict[tuple[int, ...], DimTable] = {}
        self._resolutions: dict[ModuleClass, Resolution] = {}
        self._ext: dict[tuple[ModuleClass, ModuleClass], list[int]] = {}
        self._middles: dict[tuple[ModuleClass, ModuleClass], tuple[Counter, int, int]] = {}

    def in_bound(self, dims) -> bool:
        return self.bound is None or all(d <= b for d, b in zip(dims, self.bound))

    def check_bound(self, dims) -> None:
        if not self.in_bound(dims):
            raise CapExceeded(f"dimension vector {tuple(dims)} escapes the catalog bound {self.bound}")

    def table(self, dims) -> DimTable:
        dims = tuple(dims)
        if dims not in self._tables:
            self._tables[dims] = self._enumerate(dims)
        return self._tables[dims]

    def _enumerate(self, dims) -> DimTable:
        alg, q = self.alg, self.q
        shapes = [(dims[a.target - 1], dims[a.source - 1]) for a in alg.arrows]
        entries = sum(r * c for r, c in shapes)
        if q**entries > CATALOG_TUPLE_CAP:
            raise CapExceeded(f"catalog for dimension vector {dims} too large; use a smaller bound")
        gls = [_gl_elements(d, q) for d in dims]
        group_size = 1
        for g in gls:
            group_size *= len(g)
        if group_size > CATALOG_GROUP_CAP:
            raise CapExceeded(f"base-change group for {dims} too large; use a smaller bound")
        # the whole group as per-vertex stacks, with inverses
        idx = np.array(list(product(*[range(len(g)) for g in gls])), dtype=np.int64).reshape(group_size, len(dims))
        g_stack = [gls[j][idx[:, j]] for j in range(len(dims))]
        ginv_stack = [_batched_inverse(gls[j], q)[idx[:, j]] for j in range(len(dims))]
        weights = np.array([q ** (entries - 1 - k) for k in range(entries)], dtype=np.int64)

        table = DimTable(dims)
        for batch in fq.all_vectors(entries, q):
            for vec in batch:
                code = int(vec @ weights) if entries else 0
                if code in table.code_to_class:
                    continue
                maps, off = [], 0
                for r, c in shapes:
                    maps.append(vec[off:off + r * c].reshape(r, c))
                    off += r * c
                try:
                    rep = Representation(alg, dims, maps)
                except ValueError:
                    continue
                cls_index = len(table.reps)
                table.reps.append(rep)
                orbit = np.zeros((group_size, 0), dtype=np.int64)
                parts = []
                for k, a in enumerate(alg.arrows):
                    s, t = a.source - 1, a.target - 1
                    moved = np.einsum("gij,jk,gkl->gil", g_stack[t], rep.maps[k], ginv_stack[s]) % q
                    parts.append(moved.reshape(group_size, -1))
                orbit = np.concatenate(parts, axis=1) if parts else orbit
                codes = orbit @ weights if entries else np.zeros(group_size, dtype=np.int64)
                for c in set(codes.tolist()):
                    table.code_to_class[c] = cls_index
        return table

    def classify(self, m: Representation) -> ModuleClass:
        self.check_bound(m.dims)
        t = self.table(m.dims)
        return ModuleClass(m.dims, t.code_to_class[m.map_code()])

    def rep(self, cls: ModuleClass) -> Representation:
        return self.table(cls.dims).reps[cls.index]

    def classes(self, dims) -> list[ModuleClass]:
        return [ModuleClass(tuple(dims), k) for k in range(len(self.table(dims).reps))]

    def catalog(self) -> list[ModuleClass]:
        if self.bound is None:
            raise ValueError("a bound is required to list the catalog")
        out = []
        for dims in product(*[range(b + 1) for b in self.bound]):
            out.extend(self.classes(dims))
        return out

    def zero(self) -> ModuleClass:
        return ModuleClass(tuple([0] * self.alg.n), 0)

    def simple(self, i: int) -> ModuleClass:
        return self.classify(simple(self.alg, i))

    def projective(self, i: int) -> ModuleClass:
        return self.classify(indec_projective(self.alg, i))

    def resolution(self, cls: ModuleClass) -> Resolution:
        if cls not in self._resolutions:
            self._resolutions[cls] = minimal_resolution(self.rep(cls))
        return self._resolutions[cls]

    def ext_dims(self, a: ModuleClass, b: ModuleClass) -> list[int]:
        key = (a, b)
        if key not in self._ext:
            self._ext[key] = ext_dims(self.rep(a), self.rep(b), self.resolution(a))
        return self._ext[key]

    def hom_dim(self, a: ModuleClass, b: ModuleClass) -> int:
        return self.ext_dims(a, b)[0]

    def euler(self, alpha, beta, symmetric: bool = False) -> int:
        return euler_form(self.alg, alpha, beta, symmetric)

    def ext1_middles(self, a: ModuleClass, b: ModuleClass) -> tuple[Counter, int, int]:
        """Middle terms of Ext^1(a, b): (Counter class -> #classes, dim Ext^1, dim Hom).

        Ext^1(M, N) is Hom(Omega M, N) modulo maps that extend over the
        projective cover P_0 -> M; the extension attached to a cocycle f is
        the pushout (N + P_0) / {(f(w), -w) : w in Omega M}.
        """
        key = (a, b)
        if key in self._middles:
            return self._middles[key]
        q = self.q
        m, n = self.rep(a), self.rep(b)
        p0, eps = projective_cover(m)
        omega, inc = kernel(eps, p0)
        cocycles = hom_basis(omega, n)
        bounds = [flatten(compose(g, inc, q)) for g in hom_basis(p0, n)]
        width = sum(o * t for o, t in zip(omega.dims, n.dims))
        zrows = _rows([flatten(f) for f in cocycles], width)
        brows = _rows(bounds, width)
        reps = fq.quotient_complement(brows, zrows, q)
        e = reps.shape[0]
        middle_sum = direct_sum(n, p0)
        counts: Counter = Counter()
        for batch in fq.all_vectors(e, q):
            for coeffs in batch:
                f = unflatten((coeffs @ reps) % q if e else np.zeros(width, dtype=np.int64), omega.dims, n.dims)
                sub = [np.concatenate([f[j], (-inc[j]) % q], axis=0) for j in range(self.alg.n)]
                mid, _ = quotient(middle_sum, sub)
                counts[self.classify(mid)] += 1
        result = (counts, e, hom_dim(m, n))
        self._middles[key] = result
        return result

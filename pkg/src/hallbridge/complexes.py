"""Two-periodic complexes of projective modules.

A complex is a pair of projective sums X1, X0 with module maps
d1 : X1 -> X0 and d0 : X0 -> X1 composing to zero both ways.  Morphisms
are pairs (s1, s0); for searches they are flattened as the tuple
``s1 + s0`` of per-vertex matrices.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import fq
from .coeff import QSqrt
from .modules import (
    ISO_SEARCH_CAP,
    CapExceeded,
    ModuleCategory,
    ProjectiveModule,
    Representation,
    Resolution,
    euler_form,
    find_invertible,
    image,
    kernel,
    _rows,
    projective_sum,
    quotient,
    vsub,
)
from .quiver import AlgebraSpec


def _zero_maps(src: Representation, tgt: Representation) -> tuple:
    return tuple(fq.zeros(tgt.dims[j], src.dims[j]) for j in range(src.alg.n))


class TwoPeriodicComplex:
    """X1 -(d1)-> X0 -(d0)-> X1 with both composites zero."""

    def __init__(self, alg: AlgebraSpec, x1: ProjectiveModule, x0: ProjectiveModule, d1=None, d0=None,
                 check: bool = True):
        self.alg = alg
        self.x1 = x1
        self.x0 = x0
        q = alg.q
        self.d1 = tuple(np.asarray(m, dtype=np.int64) % q for m in (d1 if d1 is not None else _zero_maps(x1, x0)))
        self.d0 = tuple(np.asarray(m, dtype=np.int64) % q for m in (d0 if d0 is not None else _zero_maps(x0, x1)))
        if check:
            self.validate()

    @classmethod
    def from_summands(cls, alg: AlgebraSpec, s1, s0, d1=None, d0=None, check: bool = True) -> TwoPeriodicComplex:
        return cls(alg, projective_sum(alg, tuple(s1)), projective_sum(alg, tuple(s0)), d1, d0, check)

    def validate(self) -> None:
        from .modules import is_morphism

        q = self.alg.q
        for j in range(self.alg.n):
            if self.d1[j].shape != (self.x0.dims[j], self.x1.dims[j]):
                raise ValueError("d1 has the wrong shape")
            if self.d0[j].shape != (self.x1.dims[j], self.x0.dims[j]):
                raise ValueError("d0 has the wrong shape")
            if ((self.d0[j] @ self.d1[j]) % q).any() or ((self.d1[j] @ self.d0[j]) % q).any():
                raise ValueError("differentials do not compose to zero")
        if not is_morphism(self.d1, self.x1, self.x0) or not is_morphism(self.d0, self.x0, self.x1):
            raise ValueError("differentials are not module maps")

    @property
    def q(self) -> int:
        return self.alg.q

    @property
    def class_vector(self) -> tuple[int, ...]:
        return vsub(self.x0.dims, self.x1.dims)

    def is_zero(self) -> bool:
        return not self.x1.summands and not self.x0.summands

    def encoding(self) -> dict:
        return {
            "p1": list(self.x1.summands),
            "p0": list(self.x0.summands),
            "d1": [m.tolist() for m in self.d1],
            "d0": [m.tolist() for m in self.d0],
        }

    def key(self) -> tuple:
        return (self.x1.summands, self.x0.summands,
                tuple(tuple(m.reshape(-1).tolist()) for m in self.d1),
                tuple(tuple(m.reshape(-1).tolist()) for m in self.d0))

    def __eq__(self, other) -> bool:
        return isinstance(other, TwoPeriodicComplex) and other.alg is self.alg and other.key() == self.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        def name(p):
            return "+".join(f"P{s}" for s in p.summands) or "0"

        return f"Complex({name(self.x1)} <=> {name(self.x0)})"


def shift_star(x: TwoPeriodicComplex) -> TwoPeriodicComplex:
    """Swap the two components and negate both differentials."""
    q = x.q
    return TwoPeriodicComplex(x.alg, x.x0, x.x1, tuple((-m) % q for m in x.d0), tuple((-m) % q for m in x.d1),
                              check=False)


def zero_complex(alg: AlgebraSpec) -> TwoPeriodicComplex:
    return TwoPeriodicComplex.from_summands(alg, (), ())


def k_acyclic(alg: AlgebraSpec, summands, starred: bool = False) -> TwoPeriodicComplex:
    """K_P = (P, d1 = 1, d0 = 0), or K*_P = (P, d1 = 0, d0 = 1) when starred."""
    p = projective_sum(alg, tuple(summands))
    ident = tuple(fq.eye(d) for d in p.dims)
    zero = tuple(fq.zeros(d, d) for d in p.dims)
    if starred:
        return TwoPeriodicComplex(alg, p, p, zero, ident, check=False)
    return TwoPeriodicComplex(alg, p, p, ident, zero, check=False)


def _block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = fq.zeros(a.shape[0] + b.shape[0], a.shape[1] + b.shape[1])
    out[:a.shape[0], :a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def direct_sum(*xs: TwoPeriodicComplex) -> TwoPeriodicComplex:
    alg = xs[0].alg
    s1 = sum((x.x1.summands for x in xs), ())
    s0 = sum((x.x0.summands for x in xs), ())
    d1, d0 = [], []
    for j in range(alg.n):
        a = fq.zeros(0, 0)
        b = fq.zeros(0, 0)
        for x in xs:
            a = _block_diag(a, x.d1[j])
            b = _block_diag(b, x.d0[j])
        d1.append(a)
        d0.append(b)
    return TwoPeriodicComplex.from_summands(alg, s1, s0, d1, d0, check=False)


def pi_of_resolution(res: Resolution) -> TwoPeriodicComplex:
    """Fold a resolution: X1 = sum of odd terms, X0 = sum of even terms.

    d1 carries p_i for odd i, d0 carries p_i for even i >= 2.
    """
    alg = res.module.alg
    odd = [i for i in range(len(res.terms)) if i % 2 == 1]
    even = [i for i in range(len(res.terms)) if i % 2 == 0]
    x1 = projective_sum(alg, sum((res.terms[i].summands for i in odd), ()))
    x0 = projective_sum(alg, sum((res.terms[i].summands for i in even), ()))

    def offsets(indices):
        out, run = {}, [0] * alg.n
        for i in indices:
            out[i] = list(run)
            for j in range(alg.n):
                run[j] += res.terms[i].dims[j]
        return out

    off1, off0 = offsets(odd), offsets(even)
    d1 = [fq.zeros(x0.dims[j], x1.dims[j]) for j in range(alg.n)]
    d0 = [fq.zeros(x1.dims[j], x0.dims[j]) for j in range(alg.n)]
    for i in range(1, len(res.terms)):
        p = res.maps[i - 1]  # P_i -> P_{i-1}
        src_off = off1 if i % 2 == 1 else off0
        tgt_off = off0 if i % 2 == 1 else off1
        target = d1 if i % 2 == 1 else d0
        for j in range(alg.n):
            r0, c0 = tgt_off[i - 1][j], src_off[i][j]
            target[j][r0:r0 + p[j].shape[0], c0:c0 + p[j].shape[1]] = p[j]
    return TwoPeriodicComplex(alg, x1, x0, d1, d0)


# ------------------------------------------------------------ morphisms

def proj_hom_basis(p: ProjectiveModule, n: Representation) -> list[tuple]:
    """Basis of Hom(P, N): one generator of P sent to one basis vector of N."""
    alg = p.alg
    out = []
    for k, s in enumerate(p.summands):
        for e in range(n.dim(s)):
            maps = []
            for j in range(1, alg.n + 1):
                m = fq.zeros(n.dim(j), p.dim(j))
                blk = p.block(k, j)
                for c, path in enumerate(alg.paths(s, j)):
                    m[:, blk.start + c] = n.path_matrix(path)[:, e]
                maps.append(m)
            out.append(tuple(maps))
    return out


def _combine(basis: list, coeffs: np.ndarray, q: int) -> tuple:
    out = [fq.zeros(*m.shape) for m in basis[0]]
    for c, b in zip(coeffs, basis):
        if c:
            for j, m in enumerate(b):
                out[j] = (out[j] + int(c) * m) % q
    return tuple(out)


def _kernel_of_linear(basis: list, images: list[np.ndarray], q: int) -> np.ndarray:
    """Coefficient vectors c with sum c_k images[k] = 0, as rows."""
    if not basis:
        return fq.zeros(0, 0)
    mat = np.array(images, dtype=np.int64).T
    if mat.shape[0] == 0:
        return fq.eye(len(basis))
    return fq.kernel(mat, q)


def c2_hom_basis(x: TwoPeriodicComplex, y: TwoPeriodicComplex) -> list[tuple]:
    """Basis of Hom_{C_2}(x, y) as tuples ``s1 + s0``."""
    q, n = x.q, x.alg.n
    b1 = proj_hom_basis(x.x1, y.x1)
    b0 = proj_hom_basis(x.x0, y.x0)
    images = []
    for s1 in b1:
        s0 = _zero_maps(x.x0, y.x0)
        images.append(_chain_defect(x, y, s1, s0))
    for s0 in b0:
        s1 = _zero_maps(x.x1, y.x1)
        images.append(_chain_defect(x, y, s1, s0))
    ker = _kernel_of_linear(b1 + b0, images, q)
    out = []
    for row in ker:
        s1 = _combine(b1, row[:len(b1)], q) if b1 else _zero_maps(x.x1, y.x1)
        s0 = _combine(b0, row[len(b1):], q) if b0 else _zero_maps(x.x0, y.x0)
        out.append(tuple(s1) + tuple(s0))
    assert all(len(m) == 2 * n for m in out)
    return out


def _chain_defect(x, y, s1, s0) -> np.ndarray:
    q = x.q
    parts = []
    for j in range(x.alg.n):
        parts.append(((s0[j] @ x.d1[j]) - (y.d1[j] @ s1[j])) % q)
        parts.append(((s1[j] @ x.d0[j]) - (y.d0[j] @ s0[j])) % q)
    return np.concatenate([p.reshape(-1) for p in parts]) if parts else np.zeros(0, dtype=np.int64)


def c2_hom_dim(x: TwoPeriodicComplex, y: TwoPeriodicComplex) -> int:
    return len(c2_hom_basis(x, y))


def homotopy_rank(x: TwoPeriodicComplex, y: TwoPeriodicComplex) -> int:
    """Rank of (h1, h0) -> (d0Y h1 + h0 d1X, d1Y h0 + h1 d0X)."""
    q = x.q
    rows = []
    for h1 in proj_hom_basis(x.x1, y.x0):
        rows.append(np.concatenate([
            np.concatenate([((y.d0[j] @ h1[j]) % q).reshape(-1) for j in range(x.alg.n)] or [np.zeros(0, np.int64)]),
            np.concatenate([((h1[j] @ x.d0[j]) % q).reshape(-1) for j in range(x.alg.n)] or [np.zeros(0, np.int64)]),
        ]))
    for h0 in proj_hom_basis(x.x0, y.x1):
        rows.append(np.concatenate([
            np.concatenate([((h0[j] @ x.d1[j]) % q).reshape(-1) for j in range(x.alg.n)] or [np.zeros(0, np.int64)]),
            np.concatenate([((y.d1[j] @ h0[j]) % q).reshape(-1) for j in range(x.alg.n)] or [np.zeros(0, np.int64)]),
        ]))
    if not rows:
        return 0
    return fq.rank(np.array(rows, dtype=np.int64), q)


def k2_hom_dim(x: TwoPeriodicComplex, y: TwoPeriodicComplex) -> int:
    """dim Hom in the homotopy category: chain maps modulo null-homotopic ones."""
    return c2_hom_dim(x, y) - homotopy_rank(x, y)


def c2_invertible(x: TwoPeriodicComplex, y: TwoPeriodicComplex, cap: int = ISO_SEARCH_CAP):
    dx = tuple(x.x1.dims) + tuple(x.x0.dims)
    dy = tuple(y.x1.dims) + tuple(y.x0.dims)
    if dx != dy:
        return None
    return find_invertible(c2_hom_basis(x, y), dx, dy, x.q, cap)


def c2_is_isomorphic(x: TwoPeriodicComplex, y: TwoPeriodicComplex) -> bool:
    return c2_invertible(x, y) is not None


# ------------------------------------------------------------ extensions

@dataclass
class Ext1Data:
    cocycle_reps: np.ndarray  # rows: coset representatives spanning a complement of the coboundaries
    width: int
    dim: int


def _flat_pair(sig1, sig0) -> np.ndarray:
    parts = [m.reshape(-1) for m in sig1] + [m.reshape(-1) for m in sig0]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _unflat_pair(vec, m: TwoPeriodicComplex, n: TwoPeriodicComplex):
    sig1, sig0, off = [], [], 0
    for j in range(m.alg.n):
        r, c = n.x0.dims[j], m.x1.dims[j]
        sig1.append(np.array(vec[off:off + r * c], dtype=np.int64).reshape(r, c))
        off += r * c
    for j in range(m.alg.n):
        r, c = n.x1.dims[j], m.x0.dims[j]
        sig0.append(np.array(vec[off:off + r * c], dtype=np.int64).reshape(r, c))
        off += r * c
    return tuple(sig1), tuple(sig0)


def c2_ext1(m: TwoPeriodicComplex, n: TwoPeriodicComplex) -> Ext1Data:
    """Ext^1(m, n): cocycles sigma1 : M1 -> N0, sigma0 : M0 -> N1 modulo coboundaries.

    Cocycle condition (so the middle term squares to zero):
        d0N sigma1 + sigma0 d1M = 0,  d1N sigma0 + sigma1 d0M = 0.
    Coboundaries come from changing the splitting by h1 : M1 -> N1, h0 : M0 -> N0:
        sigma1 = h0 d1M - d1N h1,  sigma0 = h1 d0M - d0N h0.
    """
    q, nv = m.q, m.alg.n
    b1 = proj_hom_basis(m.x1, n.x0)
    b0 = proj_hom_basis(m.x0, n.x1)
    zero1 = _zero_maps(m.x1, n.x0)
    zero0 = _zero_maps(m.x0, n.x1)

    def defect(s1, s0):
        parts = []
        for j in range(nv):
            parts.append(((n.d0[j] @ s1[j]) + (s0[j] @ m.d1[j])) % q)
            parts.append(((n.d1[j] @ s0[j]) + (s1[j] @ m.d0[j])) % q)
        return np.concatenate([p.reshape(-1) for p in parts]) if parts else np.zeros(0, dtype=np.int64)

    basis = [(s, zero0) for s in b1] + [(zero1, s) for s in b0]
    width = sum(n.x0.dims[j] * m.x1.dims[j] + n.x1.dims[j] * m.x0.dims[j] for j in range(nv))
    ker = _kernel_of_linear(basis, [defect(*b) for b in basis], q)
    cocycles = []
    for row in ker:
        vec = np.zeros(width, dtype=np.int64)
        for c, (s1, s0) in zip(row, basis):
            if c:
                vec = (vec + int(c) * _flat_pair(s1, s0)) % q
        cocycles.append(vec)
    bounds = []
    for h1 in proj_hom_basis(m.x1, n.x1):
        s1 = tuple((-(n.d1[j] @ h1[j])) % q for j in range(nv))
        s0 = tuple((h1[j] @ m.d0[j]) % q for j in range(nv))
        bounds.append(_flat_pair(s1, s0))
    for h0 in proj_hom_basis(m.x0, n.x0):
        s1 = tuple((h0[j] @ m.d1[j]) % q for j in range(nv))
        s0 = tuple((-(n.d0[j] @ h0[j])) % q for j in range(nv))
        bounds.append(_flat_pair(s1, s0))
    zrows = _rows(cocycles, width)
    brows = _rows(bounds, width)
    reps = fq.quotient_complement(brows, zrows, q)
    return Ext1Data(reps, width, reps.shape[0])


def extension_middle(m: TwoPeriodicComplex, n: TwoPeriodicComplex, sig1, sig0) -> TwoPeriodicComplex:
    """Components N_i + M_i with differentials [[dN, sigma], [0, dM]]."""
    alg, q = m.alg, m.q
    d1, d0 = [], []
    for j in range(alg.n):
        top1 = np.concatenate([n.d1[j], sig1[j]], axis=1)
        bot1 = np.concatenate([fq.zeros(m.x0.dims[j], n.x1.dims[j]), m.d1[j]], axis=1)
        d1.append(np.concatenate([top1, bot1], axis=0) % q)
        top0 = np.concatenate([n.d0[j], sig0[j]], axis=1)
        bot0 = np.concatenate([fq.zeros(m.x1.dims[j], n.x0.dims[j]), m.d0[j]], axis=1)
        d0.append(np.concatenate([top0, bot0], axis=0) % q)
    return TwoPeriodicComplex.from_summands(alg, n.x1.summands + m.x1.summands, n.x0.summands + m.x0.summands,
                                            d1, d0, check=False)


def iter_extension_middles(m: TwoPeriodicComplex, n: TwoPeriodicComplex, cap: int = ISO_SEARCH_CAP):
    """Yield the middle term of every class in Ext^1(m, n), one per coset."""
    ext = c2_ext1(m, n)
    if m.q ** ext.dim > cap:
        raise CapExceeded("extension space too large")
    for batch in fq.all_vectors(ext.dim, m.q):
        for coeffs in batch:
            vec = (coeffs @ ext.cocycle_reps) % m.q if ext.dim else np.zeros(ext.width, dtype=np.int64)
            yield extension_middle(m, n, *_unflat_pair(vec, m, n))


# ------------------------------------------------------------ acyclic summands

@dataclass
class Stripped:
    k_summands: tuple[int, ...]   # P with K_P split off
    ks_summands: tuple[int, ...]  # Q with K*_Q split off
    reduced: TwoPeriodicComplex
    exponent: int                 # vfactor = v**exponent

    def vfactor(self) -> QSqrt:
        return QSqrt.vpow(self.exponent, self.reduced.q)


def _find_unit_block(d, src: ProjectiveModule, tgt: ProjectiveModule):
    """(l, k): a summand l of src and k of tgt, both P_i, with an invertible block."""
    for l, s in enumerate(src.summands):
        col = src.generator_index(l)
        m = d[s - 1]
        for k, t in enumerate(tgt.summands):
            if t == s and m[tgt.generator_index(k), col]:
                return l, k
    return None


def _drop(p: ProjectiveModule, idx: int) -> tuple[ProjectiveModule, list[np.ndarray]]:
    """The sum without summand ``idx`` and, per vertex, the kept row indices."""
    keep = []
    for j in range(1, p.alg.n + 1):
        blk = p.block(idx, j)
        keep.append(np.array([r for r in range(p.dims[j - 1]) if not blk.start <= r < blk.stop], dtype=np.int64))
    return projective_sum(p.alg, p.summands[:idx] + p.summands[idx + 1:]), keep


def _eliminate(d, e, src: ProjectiveModule, tgt: ProjectiveModule, l: int, k: int, q: int):
    """Split off src[l] -> tgt[k] from d : src -> tgt; e : tgt -> src is restricted.

    With d = [[phi, c], [b, D]] the remaining differential is D - b phi^-1 c;
    the other differential keeps its block between the remaining summands.
    """
    src2, keep_s = _drop(src, l)
    tgt2, keep_t = _drop(tgt, k)
    d2, e2 = [], []
    for j in range(1, src.alg.n + 1):
        bs, bt = src.block(l, j), tgt.block(k, j)
        ks, kt = keep_s[j - 1], keep_t[j - 1]
        m = d[j - 1]
        phi = m[bt, bs]
        if phi.size:
            phi_inv = fq.inverse(phi, q)
            c = m[bt][:, ks]
            b = m[kt][:, bs]
            dd = (m[np.ix_(kt, ks)] - b @ phi_inv @ c) % q
        else:
            dd = m[np.ix_(kt, ks)] % q
        d2.append(dd)
        e2.append(e[j - 1][np.ix_(ks, kt)] % q)
    return src2, tgt2, tuple(d2), tuple(e2)


def strip_acyclics(x: TwoPeriodicComplex) -> Stripped:
    """Split off every K_P and K*_P summand.

    A summand K_{P_i} exists exactly when d1 has a block P_i -> P_i whose e_i
    coefficient is nonzero (a composite through another P_j lies in the
    radical), and dually for K*_{P_i} and d0.
    """
    alg, q = x.alg, x.q
    x1, x0, d1, d0 = x.x1, x.x0, x.d1, x.d0
    ks, kss = [], []
    while True:
        hit = _find_unit_block(d1, x1, x0)
        if hit is not None:
            l, k = hit
            ks.append(x1.summands[l])
            x1, x0, d1, d0 = _eliminate(d1, d0, x1, x0, l, k, q)
            continue
        hit = _find_unit_block(d0, x0, x1)
        if hit is not None:
            l, k = hit
            kss.append(x0.summands[l])
            x0, x1, d0, d1 = _eliminate(d0, d1, x0, x1, l, k, q)
            continue
        break
    reduced = TwoPeriodicComplex(alg, x1, x0, d1, d0, check=False)
    r = reduced.class_vector
    p_cls = projective_sum(alg, tuple(sorted(ks))).dims
    q_cls = projective_sum(alg, tuple(sorted(kss))).dims
    exponent = -euler_form(alg, p_cls, r) + euler_form(alg, q_cls, r)
    return Stripped(tuple(sorted(ks)), tuple(sorted(kss)), reduced, exponent)


def is_reduced(x: TwoPeriodicComplex) -> bool:
    return _find_unit_block(x.d1, x.x1, x.x0) is None and _find_unit_block(x.d0, x.x0, x.x1) is None


# ------------------------------------------------------------ homology

@dataclass
class HomologyData:
    h0: Representation
    h1: Representation
    ker_d1_class: tuple[int, ...]
    im_d1_class: tuple[int, ...]


def _subquotient(ambient: Representation, outer_map, inner_map) -> Representation:
    """Ker(outer_map) / Im(inner_map), both inside ``ambient``."""
    q = ambient.q
    ker, inc = kernel(outer_map, ambient)
    bases = []
    for j in range(ambient.alg.n):
        img = fq.column_basis(inner_map[j], q) if inner_map[j].shape[1] else fq.zeros(ambient.dims[j], 0)
        if img.shape[1] == 0:
            bases.append(fq.zeros(ker.dims[j], 0))
            continue
        coords = fq.solve(inc[j], img, q)
        if coords is None:
            raise ValueError("image is not contained in the kernel")
        bases.append(coords)
    return quotient(ker, bases)[0]


def homology2(x: TwoPeriodicComplex) -> HomologyData:
    h0 = _subquotient(x.x0, x.d0, x.d1)
    h1 = _subquotient(x.x1, x.d1, x.d0)
    ker1 = kernel(x.d1, x.x1)[0]
    im1 = image(x.d1, x.x0)[0]
    return HomologyData(h0, h1, ker1.dims, im1.dims)


# ------------------------------------------------------------ registry

class ComplexRegistry:
    """Iso-classes of reduced complexes met so far, numbered in order of discovery.

    Candidates are filtered by cheap invariants and then confirmed by an
    invertible-element search in Hom_{C_2}.
    """

    def __init__(self, alg: AlgebraSpec):
        self.alg = alg
        self.reps: list[TwoPeriodicComplex] = []
        self._by_invariant: dict[tuple, list[int]] = {}
        self._exact: dict[tuple, int] = {}

    def invariants(self, x: TwoPeriodicComplex) -> tuple:
        q = x.q
        r1 = tuple(fq.rank(m, q) for m in x.d1)
        r0 = tuple(fq.rank(m, q) for m in x.d0)
        return (tuple(sorted(x.x1.summands)), tuple(sorted(x.x0.summands)), r1, r0)

    def classify(self, x: TwoPeriodicComplex) -> int:
        k = x.key()
        if k in self._exact:
            return self._exact[k]
        inv = self.invariants(x)
        bucket = self._by_invariant.setdefault(inv, [])
        for idx in bucket:
            if c2_is_isomorphic(x, self.reps[idx]):
                self._exact[k] = idx
                return idx
        idx = len(self.reps)
        self.reps.append(x)
        bucket.append(idx)
        self._exact[k] = idx
        return idx

    def rep(self, idx: int) -> TwoPeriodicComplex:
        return self.reps[idx]


class ComplexCategory:
    """Complex-level caches on top of a module category."""

    def __init__(self, modcat: ModuleCategory):
        self.modcat = modcat
        self.alg = modcat.alg
        self.registry = ComplexRegistry(self.alg)
        self._strip: dict[tuple, tuple[Stripped, int]] = {}
        self._product: dict[tuple[int, int], list] = {}
        self._cm: dict = {}

    def normalize(self, x: TwoPeriodicComplex) -> tuple[Stripped, int]:
        """Strip acyclic summands and classify the rest."""
        k = x.key()
        if k not in self._strip:
            st = strip_acyclics(x)
            self._strip[k] = (st, self.registry.classify(st.reduced))
        return self._strip[k]

    def classify(self, x: TwoPeriodicComplex) -> int:
        st, idx = self.normalize(x)
        if st.k_summands or st.ks_summands:
            raise ValueError("complex has acyclic summands")
        return idx

    def rep(self, idx: int) -> TwoPeriodicComplex:
        return self.registry.rep(idx)

    def resolution_complex(self, cls) -> TwoPeriodicComplex:
        if cls not in self._cm:
            self._cm[cls] = pi_of_resolution(self.modcat.resolution(cls))
        return self._cm[cls]

    def ext1_middles_raw(self, m: TwoPeriodicComplex, n: TwoPeriodicComplex) -> tuple[Counter, int, int]:
        """Counter over normalized middles (P, Q, class, exponent) -> #classes, dim Ext^1, dim Hom."""
        counts: Counter = Counter()
        ext = c2_ext1(m, n)
        for mid in iter_extension_middles(m, n):
            st, idx = self.normalize(mid)
            counts[(st.k_summands, st.ks_summands, idx, st.exponent)] += 1
        return counts, ext.dim, c2_hom_dim(m, n)

    def ext1_middles(self, a: int, b: int) -> tuple[Counter, int, int]:
        return self.ext1_middles_raw(self.rep(a), self.rep(b))

    def raw_product(self, m: TwoPeriodicComplex, n: TwoPeriodicComplex
                    ) -> list[tuple[QSqrt, tuple[int, ...], tuple[int, ...], int]]:
        """[M] * [N] in the twisted Hall algebra of complexes, normalized.

        Returns (coefficient, P-class, Q-class, reduced class) with each term
        meaning coefficient * K_P * K*_Q * [R].
        """
        alg, q = self.alg, self.alg.q
        twist = euler_form(alg, m.x0.dims, n.x0.dims) + euler_form(alg, m.x1.dims, n.x1.dims)
        counts, _, hom = self.ext1_middles_raw(m, n)
        acc: dict[tuple, QSqrt] = {}
        for (ps, qs, idx, expo), c in sorted(counts.items()):
            p_cls = projective_sum(alg, ps).dims
            q_cls = projective_sum(alg, qs).dims
            coeff = QSqrt.vpow(twist + expo, q) * c / (q ** hom)
            k = (p_cls, q_cls, idx)
            acc[k] = acc.get(k, QSqrt.zero(q)) + coeff
        return [(c, p, qq, idx) for (p, qq, idx), c in acc.items() if c]

    def twisted_product(self, a: int, b: int) -> list[tuple[QSqrt, tuple[int, ...], tuple[int, ...], int]]:
        """:meth:`raw_product` on two registered reduced complexes, memoized."""
        key = (a, b)
        if key not in self._product:
            self._product[key] = self.raw_product(self.rep(a), self.rep(b))
        return self._product[key]

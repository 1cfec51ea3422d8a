"""Dense linear algebra over the prime field F_q.

Matrices are plain ``numpy`` int64 arrays with entries in ``0..q-1``.  Every
routine returns freshly reduced arrays and never mutates its inputs.  Pivoting
is deterministic (leftmost column, topmost row) so kernel bases are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def mat(rows, q: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Build a reduced matrix; ``shape`` is required for empty inputs."""
    a = np.array(rows, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a % q


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def inv_scalar(x: int, q: int) -> int:
    x %= q
    if x == 0:
        raise ZeroDivisionError("division by zero in F_q")
    return pow(x, q - 2, q)


def mul(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return (a @ b) % q


def rref(a: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and the pivot columns."""
    r = np.array(a, dtype=np.int64) % q
    m, n = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        p = row + int(nz[0])
        if p != row:
            r[[row, p]] = r[[p, row]]
        r[row] = (r[row] * inv_scalar(int(r[row, col]), q)) % q
        factors = r[:, col].copy()
        factors[row] = 0
        if factors.any():
            r = (r - factors[:, None] * r[row][None, :]) % q
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: np.ndarray, q: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, q)[1])


def kernel(a: np.ndarray, q: int) -> np.ndarray:
    """Basis of Null(a) as the rows of a (k x cols) matrix."""
    m, n = a.shape
    r, pivots = rref(a, q) if m else (zeros(0, n), [])
    free = [c for c in range(n) if c not in set(pivots)]
    basis = zeros(len(free), n)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, p in enumerate(pivots):
            basis[k, p] = (-r[row, f]) % q
    return basis


@dataclass(frozen=True)
class SolveResult:
    rank: int
    kernel_basis: np.ndarray
    particular_solution: np.ndarray | None


def solve_and_kernel(a: np.ndarray, q: int, b: np.ndarray | None = None) -> SolveResult:
    """Rank, kernel basis and (when ``b`` is given) one solution of ``a x = b``."""
    m, n = a.shape
    ker = kernel(a, q)
    rk = n - ker.shape[0]
    if b is None:
        return SolveResult(rk, ker, None)
    b = np.asarray(b, dtype=np.int64).reshape(-1) % q
    if b.shape[0] != m:
        raise ValueError(f"dimension mismatch: matrix has {m} rows, rhs has {b.shape[0]}")
    aug = np.concatenate([a % q, b.reshape(m, 1)], axis=1)
    r, pivots = rref(aug, q)
    if n in pivots:
        return SolveResult(rk, ker, None)
    x = zeros(1, n)[0]
    for row, p in enumerate(pivots):
        x[p] = r[row, n]
    return SolveResult(rk, ker, x)


def solve(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray | None:
    """One solution X of ``a X = b`` (b may be a matrix) or None if inconsistent."""
    b = np.asarray(b, dtype=np.int64) % q
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    m, n = a.shape
    if b.shape[0] != m:
        raise ValueError(f"dimension mismatch: matrix has {m} rows, rhs has {b.shape[0]}")
    aug = np.concatenate([a % q, b], axis=1)
    r, pivots = rref(aug, q)
    if any(p >= n for p in pivots):
        return None
    x = zeros(n, b.shape[1])
    for row, p in enumerate(pivots):
        x[p] = r[row, n:]
    return x[:, 0] if vec else x


def inverse(a: np.ndarray, q: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    x = solve(a, eye(n), q)
    if x is None or rank(a, q) < n:
        raise ZeroDivisionError("singular matrix")
    return x


def column_basis(a: np.ndarray, q: int) -> np.ndarray:
    """Pivot columns of ``a``: a basis of its column space, in order."""
    if a.shape[1] == 0:
        return zeros(a.shape[0], 0)
    _, pivots = rref(a, q)
    return a[:, pivots] % q


def complete_basis(sub: np.ndarray, dim: int, q: int) -> np.ndarray:
    """Standard basis vectors that extend the independent columns ``sub`` to F_q^dim."""
    cur = sub % q
    added = []
    r = cur.shape[1]
    for i in range(dim):
        if r == dim:
            break
        e = zeros(dim, 1)
        e[i, 0] = 1
        trial = np.concatenate([cur, e], axis=1)
        if rank(trial, q) > r:
            cur = trial
            added.append(i)
            r += 1
    out = zeros(dim, len(added))
    for k, i in enumerate(added):
        out[i, k] = 1
    return out


def quotient_complement(rows_sub: np.ndarray, rows_all: np.ndarray, q: int) -> np.ndarray:
    """Rows of ``rows_all`` extending the row space of ``rows_sub`` to that of both.

    Both arguments hold vectors as rows.  The returned rows are coset
    representatives spanning a complement of span(rows_sub) inside
    span(rows_sub + rows_all).
    """
    cur = rows_sub % q
    r = rank(cur, q) if cur.shape[0] else 0
    picked = []
    for v in rows_all:
        trial = np.concatenate([cur, v.reshape(1, -1)], axis=0)
        rt = rank(trial, q)
        if rt > r:
            cur, r = trial, rt
            picked.append(v % q)
    if not picked:
        return zeros(0, rows_all.shape[1])
    return np.array(picked, dtype=np.int64)


def batched_invertible(mats: np.ndarray, q: int) -> np.ndarray:
    """Boolean mask: which of the stacked square matrices ``mats[k]`` are invertible."""
    a = np.array(mats, dtype=np.int64) % q
    nb, n, _ = a.shape
    ok = np.ones(nb, dtype=bool)
    if n == 0:
        return ok
    inv_table = np.array([0] + [pow(x, q - 2, q) for x in range(1, q)], dtype=np.int64)
    idx = np.arange(nb)
    for col in range(n):
        sub = a[:, col:, col]
        has = sub != 0
        found = has.any(axis=1)
        ok &= found
        prow = col + np.argmax(has, axis=1)
        # swap pivot row into place
        rows_c = a[idx, col].copy()
        a[idx, col] = a[idx, prow]
        a[idx, prow] = rows_c
        piv = a[:, col, col]
        scale = inv_table[piv]
        a[:, col] = (a[:, col] * scale[:, None]) % q
        factors = a[:, :, col].copy()
        factors[:, col] = 0
        a = (a - factors[:, :, None] * a[:, col][:, None, :]) % q
    return ok


def all_vectors(dim: int, q: int, chunk: int = 4096):
    """Yield all of F_q^dim as (batch, dim) arrays, in lexicographic order."""
    total = q**dim
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        nums = np.arange(start, stop, dtype=np.int64)
        out = np.empty((stop - start, dim), dtype=np.int64)
        for j in range(dim - 1, -1, -1):
            out[:, j] = nums % q
            nums //= q
        yield out


class BlockSystem:
    """Homogeneous linear system whose unknowns are matrix blocks.

    Each equation is a sum of terms ``c * A @ X_k @ B`` set equal to zero,
    where X_k is an unknown block.  Vectorisation is row-major, so
    ``vec(A X B) = kron(A, B.T) vec(X)``.
    """

    def __init__(self, q: int):
        self.q = q
        self.shapes: list[tuple[int, int]] = []
        self.offsets: list[int] = []
        self.nvars = 0
        self._rows: list[list[tuple[int, np.ndarray]]] = []

    def block(self, rows: int, cols: int) -> int:
        self.shapes.append((rows, cols))
        self.offsets.append(self.nvars)
        self.nvars += rows * cols
        return len(self.shapes) - 1

    def equation(self, terms) -> None:
        """``terms``: iterable of (coef, A or None, block, B or None)."""
        parts = []
        for coef, a, k, b in terms:
            r, c = self.shapes[k]
            a = eye(r) if a is None else a
            b = eye(c) if b is None else b
            if a.shape[1] != r or b.shape[0] != c:
                raise ValueError("term shape does not match its block")
            parts.append((k, (coef * np.kron(a, b.T)) % self.q))
        if parts:
            self._rows.append(parts)

    def matrix(self) -> np.ndarray:
        blocks = []
        for parts in self._rows:
            height = parts[0][1].shape[0]
            row = zeros(height, self.nvars)
            for k, m in parts:
                off = self.offsets[k]
                row[:, off:off + m.shape[1]] += m
            blocks.append(row % self.q)
        if not blocks:
            return zeros(0, self.nvars)
        return np.concatenate(blocks, axis=0)

    def kernel(self) -> np.ndarray:
        return kernel(self.matrix(), self.q)

    def split(self, vec: np.ndarray) -> list[np.ndarray]:
        out = []
        for (r, c), off in zip(self.shapes, self.offsets):
            out.append(np.array(vec[off:off + r * c], dtype=np.int64).reshape(r, c))
        return out

"""Dense linear algebra over F_p on the homogeneous pieces k[V]_d.

Vectors are coordinate rows in the monomial basis of a degree slice, and
linear maps act on the right: row ``i`` of a map's matrix holds the image of
basis monomial ``i``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Callable, Mapping

import numpy as np

from .action import CyclicAction, Subgroup, act, delta
from .poly import GREVLEX, MonomialOrder, Polynomial

# float64 matmul is exact while inner_dim * (p-1)^2 < 2^53
_FLOAT_EXACT = 2**53


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] == 0 or b.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if a.shape[1] * (p - 1) ** 2 < _FLOAT_EXACT:
        out = np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
        return out % p
    return (a @ b) % p


@lru_cache(maxsize=None)
def _inverses(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def rref(mat, p: int):
    """Reduced row echelon form mod p; returns ``(rows, pivots)`` with zero rows dropped."""
    a = np.array(mat, dtype=np.int64, copy=True) % p
    if a.ndim != 2:
        raise ValueError("rref needs a 2-d matrix")
    nrows, ncols = a.shape
    inv = _inverses(p)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r, c:] = a[r, c:] * inv[a[r, c]] % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit, c:] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : mat @ x = 0}``."""
    mat = np.asarray(mat, dtype=np.int64)
    ncols = mat.shape[1]
    r, pivots = rref(mat, p)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    out[np.arange(len(free)), free] = 1
    if pivots and free:
        out[:, pivots] = (-r[:, free].T) % p
    return out


@dataclass(frozen=True)
class SliceBasis:
    """All monomials of degree ``degree`` in ``nvars`` variables, descending."""

    nvars: int
    degree: int
    order: MonomialOrder
    monomials: tuple
    index: dict = field(compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def vector(self, f: Polynomial) -> np.ndarray:
        """Coordinates of a homogeneous ``f`` of this degree."""
        v = np.zeros(self.dim, dtype=np.int64)
        for mono, c in f.items():
            try:
                v[self.index[mono]] = c
            except KeyError:
                raise ValueError(f"{f} is not homogeneous of degree {self.degree}") from None
        return v

    def polynomial(self, vec, p: int) -> Polynomial:
        return Polynomial(
            {self.monomials[i]: int(c) for i, c in enumerate(vec) if c}, self.nvars, p
        )


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def monomial_basis(nvars: int, d: int, order: MonomialOrder = GREVLEX) -> SliceBasis:
    if d < 0:
        raise ValueError("degree must be nonnegative")
    monos = sorted(_compositions(d, nvars), key=order.key, reverse=True)
    assert len(monos) == comb(d + nvars - 1, nvars - 1)
    return SliceBasis(nvars, d, order, tuple(monos), {m: i for i, m in enumerate(monos)})


class SubspaceSlice:
    """A subspace of k[V]_d held as an RREF row basis."""

    __slots__ = ("basis", "p", "rows", "pivots")

    def __init__(self, basis: SliceBasis, vectors, p: int):
        vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, basis.dim)
        rows, pivots = rref(vectors, p)
        rows.flags.writeable = False
        self.basis = basis
        self.p = p
        self.rows = rows
        self.pivots = tuple(pivots)

    @classmethod
    def from_polys(cls, basis: SliceBasis, polys, p: int) -> SubspaceSlice:
        vecs = [basis.vector(f) for f in polys]
        return cls(basis, np.array(vecs, dtype=np.int64).reshape(-1, basis.dim), p)

    @property
    def degree(self) -> int:
        return self.basis.degree

    @property
    def rank(self) -> int:
        return self.rows.shape[0]

    def __len__(self):
        return self.rank

    def reduce(self, vec) -> np.ndarray:
        """Remainder of ``vec`` against the pivot rows."""
        v = np.array(vec, dtype=np.int64) % self.p
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v

    def contains(self, vec) -> bool:
        return not self.reduce(vec).any()

    def contains_poly(self, f: Polynomial) -> bool:
        return f.is_zero() or self.contains(self.basis.vector(f))

    def polys(self) -> list:
        return [self.basis.polynomial(r, self.p) for r in self.rows]

    def __repr__(self):
        return f"SubspaceSlice(degree={self.degree}, rank={self.rank}, dim={self.basis.dim})"


# -- operators on slices ----------------------------------------------------

_MEMO_LOCK = threading.Lock()


def _memo(a: CyclicAction, key, compute):
    hit = a._memo.get(key)
    if hit is None:
        hit = compute()
        with _MEMO_LOCK:
            hit = a._memo.setdefault(key, hit)
    return hit


def sigma_matrix(a: CyclicAction, power: int, d: int, order: MonomialOrder = GREVLEX) -> np.ndarray:
    """Matrix of ``sigma^power`` on k[V]_d."""
    power %= a.q

    def compute():
        basis = monomial_basis(a.nvars, d, order)
        if power == 0:
            return np.eye(basis.dim, dtype=np.int64)
        mat = np.array(
            [basis.vector(act(a, power, Polynomial.monomial(m, a.nvars, a.p))) for m in basis.monomials],
            dtype=np.int64,
        ).reshape(basis.dim, basis.dim)
        mat.flags.writeable = False
        return mat

    return _memo(a, ("sigma", power, d, order), compute)


def operator_matrix(a: CyclicAction, n: int, d: int, order: MonomialOrder = GREVLEX) -> np.ndarray:
    """Matrix of ``Delta^n`` on k[V]_d."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    dim = monomial_basis(a.nvars, d, order).dim
    if n == 0:
        return np.eye(dim, dtype=np.int64)
    if n >= a.q:
        return np.zeros((dim, dim), dtype=np.int64)

    def compute():
        step = (sigma_matrix(a, 1, d, order) - np.eye(dim, dtype=np.int64)) % a.p
        if n == 1:
            return step
        mat = matmul_mod(operator_matrix(a, n - 1, d, order), step, a.p)
        mat.flags.writeable = False
        return mat

    return _memo(a, ("delta", n, d, order), compute)


def left_kernel(mat: np.ndarray, p: int) -> np.ndarray:
    """Rows ``v`` with ``v @ mat = 0``."""
    return nullspace(np.asarray(mat).T, p)


def kernel_slice(a: CyclicAction, n: int, d: int, order: MonomialOrder = GREVLEX) -> SubspaceSlice:
    """``ker(Delta^n)`` in degree ``d``; ``n = 1`` gives the invariants."""
    if n < 1:
        raise ValueError("n must be at least 1")
    n = min(n, a.q)
    basis = monomial_basis(a.nvars, d, order)

    def compute():
        if n >= a.q:
            return SubspaceSlice(basis, np.eye(basis.dim, dtype=np.int64), a.p)
        return SubspaceSlice(basis, left_kernel(operator_matrix(a, n, d, order), a.p), a.p)

    return _memo(a, ("kernel", n, d, order), compute)


def invariant_slice(a: CyclicAction, d: int, order: MonomialOrder = GREVLEX) -> SubspaceSlice:
    return kernel_slice(a, 1, d, order)


def multiplication_matrix(
    a: CyclicAction, g: Polynomial, d: int, order: MonomialOrder = GREVLEX
) -> np.ndarray:
    """Matrix of ``f -> g*f`` from k[V]_d to k[V]_{d + deg g}."""
    src = monomial_basis(a.nvars, d, order)
    dst = monomial_basis(a.nvars, d + g.degree, order)

    def compute():
        mat = np.zeros((src.dim, dst.dim), dtype=np.int64)
        for i, m in enumerate(src.monomials):
            for mono, c in g.items():
                mat[i, dst.index[tuple(x + y for x, y in zip(m, mono))]] = c
        mat.flags.writeable = False
        return mat

    return _memo(a, ("mul", g, d, order), compute)


def _lookup(module_slices, d):
    if isinstance(module_slices, Mapping):
        return module_slices.get(d)
    return module_slices(d)


def module_product_slice(
    a: CyclicAction,
    algebra_gens: list,
    module_slices: Mapping | Callable,
    d: int,
    positive_only: bool = False,
    is_module: bool = False,
    order: MonomialOrder = GREVLEX,
) -> SubspaceSlice:
    """Degree-``d`` part of ``A*M`` (or ``A_+ * M`` when ``positive_only``).

    ``A`` is the algebra generated by ``algebra_gens``; ``module_slices`` maps a
    degree to a SubspaceSlice (missing degrees count as zero).  Pass
    ``is_module=True`` when ``M`` is already closed under ``A`` to skip the
    closure computation.
    """
    gens = []
    for g in algebra_gens:
        if g.is_zero() or not g.is_homogeneous() or g.degree < 1:
            raise ValueError(f"algebra generator {g} must be homogeneous of positive degree")
        if not delta(a, g).is_zero():
            raise ValueError(f"algebra generator {g} is not invariant")
        gens.append(g)
    p = a.p
    closure: dict = {}

    def module_part(e):
        sl = _lookup(module_slices, e) if e >= 0 else None
        dim = monomial_basis(a.nvars, e, order).dim if e >= 0 else 0
        return sl.rows if sl is not None else np.zeros((0, dim), dtype=np.int64)

    def products(e):
        basis = monomial_basis(a.nvars, e, order)
        blocks = [np.zeros((0, basis.dim), dtype=np.int64)]
        for g in gens:
            src = e - g.degree
            if src < 0:
                continue
            rows = full(src)
            if rows.shape[0]:
                blocks.append(matmul_mod(rows, multiplication_matrix(a, g, src, order), p))
        return np.vstack(blocks)

    def full(e):
        if e not in closure:
            if is_module:
                closure[e] = module_part(e)
            else:
                stacked = np.vstack([module_part(e), products(e)])
                closure[e] = rref(stacked, p)[0]
        return closure[e]

    basis = monomial_basis(a.nvars, d, order)
    if positive_only:
        return SubspaceSlice(basis, products(d), p)
    return SubspaceSlice(basis, full(d), p)


def transfer_kernel_slice(
    a: CyclicAction, h: Subgroup, d: int, order: MonomialOrder = GREVLEX
) -> SubspaceSlice:
    """``{f in k[V]^H_d : Tr^G_H(f) = 0}`` for a proper subgroup ``H``."""
    if not 0 < h.index_exponent <= a.prime.k:
        raise ValueError("transfer kernel needs a proper subgroup H < G")
    index = h.index(a.prime)
    basis = monomial_basis(a.nvars, d, order)
    eye = np.eye(basis.dim, dtype=np.int64)
    if index == a.q:
        h_inv = eye
    else:
        h_inv = SubspaceSlice(basis, left_kernel((sigma_matrix(a, index, d, order) - eye) % a.p, a.p), a.p).rows
    tr = np.zeros((basis.dim, basis.dim), dtype=np.int64)
    for i in range(index):
        tr = (tr + sigma_matrix(a, i, d, order)) % a.p
    images = matmul_mod(h_inv, tr, a.p)
    coeffs = left_kernel(images, a.p)
    return SubspaceSlice(basis, matmul_mod(coeffs, h_inv, a.p), a.p)

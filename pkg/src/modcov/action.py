"""The generator of a cyclic p-group acting on k[V] by a unipotent substitution,
and the operator calculus built on ``Delta = sigma - 1``."""

from __future__ import annotations

from dataclasses import dataclass
from .arith import Prime
from .poly import Polynomial


def _matmul(a, b, p):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) % p for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class Subgroup:
    """``H = <sigma^(p^m)>``, of index ``p^m`` in ``G``."""

    index_exponent: int

    def index(self, prime: Prime) -> int:
        return prime.p**self.index_exponent


class CyclicAction:
    """A generator ``sigma`` given by the images ``sigma(x_i)`` (linear forms).

    The group order ``q`` comes from ``prime``; the substitution must have order
    exactly ``q``.
    """

    def __init__(self, prime: Prime, sigma_images: list, name: str = ""):
        self.prime = prime
        self.p = prime.p
        self.q = prime.q
        self.nvars = m = len(sigma_images)
        self.name = name
        self.sigma_images = tuple(sigma_images)
        rows = []
        for i, img in enumerate(sigma_images):
            if img.nvars != m or img.p != self.p:
                raise ValueError(f"image of x{i + 1} lives in the wrong ring")
            if img and (img.degree != 1 or not img.is_homogeneous()):
                raise ValueError(f"image of x{i + 1} is not a linear form")
            row = [0] * m
            for mono, c in img.items():
                row[mono.index(1)] = c
            for j in range(i):
                if row[j]:
                    raise ValueError("sigma is not upper unitriangular")
            if row[i] != 1:
                raise ValueError("sigma is not unipotent")
            rows.append(row)
        self._powers = {0: [[int(i == j) for j in range(m)] for i in range(m)], 1: rows}
        self._memo: dict = {}
        if self._raw_power(self.q) != self._powers[0]:
            raise ValueError(f"sigma^{self.q} is not the identity")
        if self._raw_power(self.q // self.p) == self._powers[0]:
            raise ValueError("action is not faithful")

    def __repr__(self):
        return f"CyclicAction({self.name or 'sigma'}, p={self.p}, q={self.q}, nvars={self.nvars})"

    def _raw_power(self, e: int):
        result, base = self._powers[0], self._powers[1]
        while e:
            if e & 1:
                result = _matmul(result, base, self.p)
            e >>= 1
            if e:
                base = _matmul(base, base, self.p)
        return result

    def _matrix(self, power: int):
        power %= self.q
        mat = self._powers.get(power)
        if mat is None:
            mat = self._powers[power] = self._raw_power(power)
        return mat

    def images(self, power: int = 1) -> list:
        """The linear forms ``sigma^power(x_i)``."""
        m = self.nvars
        unit = [tuple(int(i == j) for j in range(m)) for i in range(m)]
        return [
            Polynomial({unit[j]: c for j, c in enumerate(row) if c}, m, self.p)
            for row in self._matrix(power)
        ]

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.nvars, self.p)

    def one(self) -> Polynomial:
        return Polynomial.constant(1, self.nvars, self.p)

    def var(self, i: int) -> Polynomial:
        return Polynomial.var(i, self.nvars, self.p)


def substitute(f: Polynomial, images: list) -> Polynomial:
    """Simultaneous substitution ``x_i -> images[i]``."""
    if len(images) != f.nvars:
        raise ValueError(f"{len(images)} images for {f.nvars} variables")
    if f.is_zero():
        return f
    powers = [{0: Polynomial.constant(1, f.nvars, f.p)} for _ in images]

    def pw(i, e):
        cache = powers[i]
        if e not in cache:
            cache[e] = pw(i, e - 1) * images[i]
        return cache[e]

    out = Polynomial.zero(f.nvars, f.p)
    for mono, c in f.items():
        term = None
        for i, e in enumerate(mono):
            if e:
                term = pw(i, e) if term is None else term * pw(i, e)
        if term is None:
            term = powers[0][0]
        out = out + term.scale(c)
    return out


def act(a: CyclicAction, power: int, f: Polynomial) -> Polynomial:
    """``sigma^power`` applied to ``f``."""
    if f.nvars != a.nvars or f.p != a.p:
        raise ValueError(f"polynomial in F_{f.p}[{f.nvars} vars] but action on {a.nvars} vars")
    if power % a.q == 0:
        return f
    return substitute(f, a.images(power))


def delta(a: CyclicAction, f: Polynomial) -> Polynomial:
    return act(a, 1, f) - f


def delta_pow(a: CyclicAction, n: int, f: Polynomial) -> Polynomial:
    """``Delta^n(f)`` by repeated first differences."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n >= a.q:
        act(a, 0, f)  # ring check
        return a.zero()
    for _ in range(n):
        if f.is_zero():
            break
        f = delta(a, f)
    return f


def delta_powers(a: CyclicAction, f: Polynomial) -> list:
    """``[f, Delta f, Delta^2 f, ...]`` up to and excluding the first zero."""
    out = []
    while not f.is_zero():
        out.append(f)
        f = delta(a, f)
    return out


def is_invariant(a: CyclicAction, f: Polynomial, power: int = 1) -> bool:
    """Whether ``sigma^power`` fixes ``f``."""
    return act(a, power, f) == f


def weight(a: CyclicAction, f: Polynomial) -> int:
    """Least ``i > 0`` with ``Delta^i(f) = 0``."""
    if f.is_zero():
        raise ValueError("weight of the zero polynomial is undefined")
    return len(delta_powers(a, f))


def _check_h_invariant(a: CyclicAction, h: Subgroup, f: Polynomial) -> int:
    if not 0 <= h.index_exponent <= a.prime.k:
        raise ValueError(f"no subgroup of index p^{h.index_exponent} in a group of order {a.q}")
    index = h.index(a.prime)
    if index < a.q and not is_invariant(a, f, index):
        raise ValueError(f"{f} is not invariant under sigma^{index}")
    return index


def transfer(a: CyclicAction, h: Subgroup, f: Polynomial, reps=None) -> Polynomial:
    """Relative transfer ``Tr^G_H(f)``, summing over cosets ``sigma^i H``.

    ``reps`` overrides the default representatives ``0, 1, ..., [G:H]-1``
    (as exponents of sigma).
    """
    index = _check_h_invariant(a, h, f)
    reps = range(index) if reps is None else reps
    out = a.zero()
    for i in reps:
        out = out + act(a, i, f)
    return out


def norm(a: CyclicAction, h: Subgroup, f: Polynomial, reps=None) -> Polynomial:
    """Relative norm ``N^G_H(f)``, the product over cosets ``sigma^i H``."""
    index = _check_h_invariant(a, h, f)
    reps = range(index) if reps is None else reps
    out = a.one()
    for i in reps:
        out = out * act(a, i, f)
    return out


def full_norm(a: CyclicAction, f: Polynomial) -> Polynomial:
    """``N^G(f)``, the norm over the trivial subgroup."""
    return norm(a, Subgroup(a.prime.k), f)

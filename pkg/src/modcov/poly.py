"""Sparse multivariate polynomials over F_p.

Monomials are exponent tuples ``(e_1, ..., e_m)`` with ``x_1 > x_2 > ... > x_m``.
The text format is ``x2^2 + 3*x1*x3 + 4*x2*x3``: terms joined by ``+``,
coefficients in ``[0, p)``, variables 1-based.
"""

from __future__ import annotations

import enum
import re
from typing import Iterable, Mapping

Monomial = tuple


class MonomialOrder(enum.Enum):
    GRLEX = "graded-lex"
    GREVLEX = "graded-revlex"

    def key(self, mono: Monomial):
        """Sort key; larger key means larger monomial."""
        if self is MonomialOrder.GRLEX:
            return (sum(mono), mono)
        return (sum(mono), tuple(-e for e in reversed(mono)))


GRLEX = MonomialOrder.GRLEX
GREVLEX = MonomialOrder.GREVLEX


def mono_degree(mono: Monomial) -> int:
    return sum(mono)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def cmp(order: MonomialOrder, a: Monomial, b: Monomial) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    if len(a) != len(b):
        raise ValueError(f"monomials have {len(a)} and {len(b)} variables")
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


class Polynomial:
    """Immutable sparse polynomial with coefficients reduced into ``[0, p)``."""

    __slots__ = ("_terms", "nvars", "p", "_sorted", "_hash")

    def __init__(self, terms: Mapping | Iterable = (), nvars: int = 1, p: int = 2):
        self.nvars = nvars
        self.p = p
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for mono, c in items:
            mono = tuple(mono)
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} does not have {nvars} variables")
            acc[mono] = (acc.get(mono, 0) + c) % p
        self._terms = {m: c for m, c in acc.items() if c}
        self._sorted: dict = {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int, p: int) -> Polynomial:
        # terms must already be reduced with no zero coefficients
        f = cls.__new__(cls)
        f._terms = terms
        f.nvars = nvars
        f.p = p
        f._sorted = {}
        f._hash = None
        return f

    @classmethod
    def zero(cls, nvars: int, p: int) -> Polynomial:
        return cls._raw({}, nvars, p)

    @classmethod
    def constant(cls, c: int, nvars: int, p: int) -> Polynomial:
        return cls({(0,) * nvars: c}, nvars, p)

    @classmethod
    def var(cls, i: int, nvars: int, p: int) -> Polynomial:
        """The variable ``x_i`` (1-based)."""
        if not 1 <= i <= nvars:
            raise ValueError(f"no variable x{i} among {nvars}")
        mono = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return cls._raw({mono: 1 % p}, nvars, p)

    @classmethod
    def monomial(cls, mono: Monomial, nvars: int, p: int, c: int = 1) -> Polynomial:
        return cls({tuple(mono): c}, nvars, p)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, mono: Monomial) -> int:
        return self._terms.get(tuple(mono), 0)

    @property
    def degree(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        return max(sum(m) for m in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> tuple:
        """Terms in strictly decreasing order under ``order``."""
        cached = self._sorted.get(order)
        if cached is None:
            cached = tuple(sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True))
            self._sorted[order] = cached
        return cached

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: Polynomial):
        if self.nvars != other.nvars or self.p != other.p:
            raise ValueError(
                f"ring mismatch: F_{self.p}[{self.nvars} vars] vs F_{other.p}[{other.nvars} vars]"
            )

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return Polynomial.constant(other, self.nvars, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(out, self.nvars, p)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Polynomial._raw({m: p - c for m, c in self._terms.items()}, self.nvars, p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c: int) -> Polynomial:
        c %= self.p
        if c == 0:
            return Polynomial.zero(self.nvars, self.p)
        p = self.p
        return Polynomial._raw({m: v * c % p for m, v in self._terms.items()}, self.nvars, p)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        p = self.p
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = (get(m, 0) + ca * cb) % p
        return Polynomial._raw({m: c for m, c in out.items() if c}, self.nvars, p)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(1, self.nvars, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_monomial(self, mono: Monomial, c: int = 1) -> Polynomial:
        p = self.p
        c %= p
        if c == 0:
            return Polynomial.zero(self.nvars, p)
        return Polynomial._raw(
            {mono_mul(m, mono): v * c % p for m, v in self._terms.items()}, self.nvars, p
        )

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other, self.nvars, self.p)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.p == other.p and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.p, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, nvars={self.nvars}, p={self.p})"


def lead_term(f: Polynomial, order: MonomialOrder) -> tuple:
    """The largest term ``(monomial, coefficient)`` of ``f`` under ``order``."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no lead term")
    return f.sorted_terms(order)[0]


def lead_monomial(f: Polynomial, order: MonomialOrder) -> Monomial:
    return lead_term(f, order)[0]


def format_monomial(mono: Monomial) -> str:
    parts = []
    for i, e in enumerate(mono, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def format_poly(f: Polynomial, order: MonomialOrder = GREVLEX) -> str:
    if f.is_zero():
        return "0"
    out = []
    for mono, c in f.sorted_terms(order):
        body = format_monomial(mono)
        if not body:
            out.append(str(c))
        elif c == 1:
            out.append(body)
        else:
            out.append(f"{c}*{body}")
    return " + ".join(out)


class PolyParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x(?P<idx>\d+)(?:\s*\^\s*(?P<exp>\d+))?)|(?P<op>[+*]))")


def parse_poly(text: str, nvars: int, p: int) -> Polynomial:
    """Parse the text format; whitespace between tokens is ignored."""
    tokens = []
    pos = 0
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        start = len(text) - len(text[pos:].lstrip())
        tokens.append((m, start))
        pos = m.end()
    if not tokens:
        raise PolyParseError("empty polynomial", 0)

    terms: dict = {}
    i = 0

    def expect_factor(i, allow_num):
        m, at = tokens[i]
        if m.group("num") is not None:
            if not allow_num:
                raise PolyParseError("coefficient must lead its term", at)
            c = int(m.group("num"))
            if c >= p:
                raise PolyParseError(f"coefficient {c} not in [0, {p})", at)
            return ("num", c), at
        if m.group("var") is not None:
            idx = int(m.group("idx"))
            if not 1 <= idx <= nvars:
                raise PolyParseError(f"unknown variable x{idx}", at)
            exp = int(m.group("exp")) if m.group("exp") is not None else 1
            return ("var", idx, exp), at
        raise PolyParseError(f"unexpected {m.group('op')!r}", at)

    while True:
        if i >= len(tokens):
            raise PolyParseError("expected a term", len(text))
        coeff = 1
        mono = [0] * nvars
        factor, _ = expect_factor(i, True)
        if factor[0] == "num":
            coeff = factor[1]
        else:
            mono[factor[1] - 1] += factor[2]
        i += 1
        while i < len(tokens) and tokens[i][0].group("op") == "*":
            if i + 1 >= len(tokens):
                raise PolyParseError("dangling '*'", tokens[i][1])
            factor, _ = expect_factor(i + 1, False)
            mono[factor[1] - 1] += factor[2]
            i += 2
        key = tuple(mono)
        terms[key] = terms.get(key, 0) + coeff
        if i == len(tokens):
            break
        m, at = tokens[i]
        if m.group("op") != "+":
            raise PolyParseError("expected '+'", at)
        if i + 1 == len(tokens):
            raise PolyParseError("dangling '+'", at)
        i += 1
    return Polynomial(terms, nvars, p)

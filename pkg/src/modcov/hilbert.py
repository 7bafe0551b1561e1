"""Truncated Hilbert series, numerators over an hsop, and the (rank, s) pair.

All coefficients are Python integers: these are dimensions, never field elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: tuple

    @property
    def bound(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, d):
        return self.coeffs[d]


@dataclass(frozen=True)
class HilbertNumerator:
    coeffs: tuple
    hsop_degrees: tuple = ()

    def at_one(self) -> int:
        return sum(self.coeffs)

    def derivative_at_one(self) -> int:
        return sum(i * c for i, c in enumerate(self.coeffs))

    def __str__(self):
        return format_series(self.coeffs)


@dataclass(frozen=True)
class RankS:
    r: int
    s: int


class NotPolynomialError(ValueError):
    """The numerator has nonzero coefficients past the expected top degree."""

    def __init__(self, degrees, coeffs):
        self.degrees = tuple(degrees)
        self.coeffs = tuple(coeffs)
        super().__init__(f"numerator not polynomial up to bound: nonzero in degrees {list(self.degrees)}")


def format_series(coeffs) -> str:
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            t = "t" if i == 1 else f"t^{i}"
            body = t if mag == 1 else f"{mag}*{t}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def hsop_series(degrees, bound: int) -> TruncatedSeries:
    """Coefficients of prod 1/(1 - t^d) up to ``t^bound``."""
    coeffs = [0] * (bound + 1)
    coeffs[0] = 1
    for d in degrees:
        if d < 1:
            raise ValueError(f"hsop degrees must be positive, got {d}")
        for i in range(d, bound + 1):
            coeffs[i] += coeffs[i - d]
    return TruncatedSeries(tuple(coeffs))


def numerator(series: TruncatedSeries, degrees, expected_top: int) -> HilbertNumerator:
    """f(t) = H(M, t) * prod(1 - t^d), checked to vanish on (expected_top, bound]."""
    bound = series.bound
    if bound < expected_top + max(degrees, default=0):
        raise ValueError(
            f"truncation bound {bound} too small; need {expected_top + max(degrees, default=0)}"
        )
    f = list(series.coeffs)
    for d in degrees:
        for i in range(bound, d - 1, -1):
            f[i] -= f[i - d]
    tail = [i for i in range(expected_top + 1, bound + 1) if f[i]]
    if tail:
        raise NotPolynomialError(tail, f)
    return HilbertNumerator(tuple(f[: expected_top + 1]), tuple(degrees))


def rank_s(f: HilbertNumerator, g: HilbertNumerator | None = None) -> RankS:
    """r = f(1)/g(1), s = (f'(1) g(1) - f(1) g'(1)) / g(1)^2; g defaults to 1."""
    f1, df1 = f.at_one(), f.derivative_at_one()
    g1, dg1 = (1, 0) if g is None else (g.at_one(), g.derivative_at_one())
    if g1 == 0:
        raise ValueError("g(1) = 0")
    r = Fraction(f1, g1)
    s = Fraction(df1 * g1 - f1 * dg1, g1 * g1)
    if r.denominator != 1 or s.denominator != 1 or r < 0 or s < 0:
        raise ValueError(f"inconsistent inputs: r = {r}, s = {s} are not nonnegative integers")
    return RankS(int(r), int(s))


@dataclass
class SsubalgReport:
    """Ranks and s-invariants of M over B, of A over B, and of M over A."""

    r_MB: int
    s_MB: int
    r_AB: int
    s_AB: int
    r_MA: int
    s_MA: int

    @property
    def identity_a(self) -> bool:
        return self.r_MB == self.r_MA * self.r_AB

    @property
    def identity_b(self) -> bool:
        return self.s_MB == self.r_MA * self.s_AB + self.r_AB * self.s_MA

    @property
    def ok(self) -> bool:
        return self.identity_a and self.identity_b


def ssubalg_report(module_num: HilbertNumerator, algebra_num: HilbertNumerator) -> SsubalgReport:
    """Compare M over the hsop algebra B directly with the route through A = k[V]^G."""
    mb = rank_s(module_num)
    ab = rank_s(algebra_num)
    ma = rank_s(module_num, algebra_num)
    return SsubalgReport(mb.r, mb.s, ab.r, ab.s, ma.r, ma.s)

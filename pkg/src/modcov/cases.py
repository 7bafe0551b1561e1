"""The four representations with codim(V^G) <= 2 and their explicit data.

Each case fixes a cyclic action, a homogeneous system of parameters (hsop),
secondary invariants generating k[V]^G over the hsop algebra A, and a candidate
free generating set for ``K_n = ker(Delta^n)`` over A.  ``xi`` turns kernel
elements into covariants ``sum Delta^i(f) (x) w_{i+1}`` with values in V_n.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, prod

import numpy as np

from .action import CyclicAction, Subgroup, act, delta, delta_pow, full_norm, norm
from .arith import Prime
from .hilbert import RankS
from .poly import GREVLEX, GRLEX, MonomialOrder, Polynomial, lead_term, parse_poly
from .slices import (
    kernel_slice,
    left_kernel,
    matmul_mod,
    monomial_basis,
    operator_matrix,
    rref,
    sigma_matrix,
)


class CaseKind(enum.Enum):
    V2 = "v2"
    V3 = "v3"
    V2V2 = "v2v2"
    V3C4 = "v3c4"


C4_S = {1: 3, 2: 6, 3: 11, 4: 16}


@dataclass(frozen=True)
class CaseSpec:
    kind: CaseKind
    p: int
    n: int

    def __post_init__(self):
        kind = CaseKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is CaseKind.V3C4:
            if self.p != 2:
                raise ValueError("the C4 case lives in characteristic 2")
            if not 1 <= self.n <= 4:
                raise ValueError(f"C4 case needs 1 <= n <= 4, got n={self.n}")
            return
        Prime(self.p)
        if kind is CaseKind.V3 and self.p == 2:
            raise ValueError("V3 with a group of order p needs p odd")
        if not 1 <= self.n <= self.p:
            raise ValueError(f"need 1 <= n <= p, got n={self.n}, p={self.p}")

    @property
    def prime(self) -> Prime:
        return Prime(2, 2) if self.kind is CaseKind.V3C4 else Prime(self.p)

    def label(self) -> str:
        if self.kind is CaseKind.V3C4:
            return f"v3c4 n={self.n}"
        return f"{self.kind.value} p={self.p} n={self.n}"


@dataclass
class CaseData:
    spec: CaseSpec
    action: CyclicAction
    hsop: list
    secondary: list
    expected: RankS
    candidates: list
    named: dict = field(default_factory=dict)

    @property
    def hsop_degrees(self) -> list:
        return [g.degree for g in self.hsop]

    @property
    def secondary_s(self) -> int:
        return sum(g.degree for g in self.secondary)


@lru_cache(maxsize=None)
def make_action(kind: CaseKind, p: int) -> CyclicAction:
    kind = CaseKind(kind)
    if kind is CaseKind.V2:
        m, images = 2, ["x1 + x2", "x2"]
    elif kind is CaseKind.V2V2:
        m, images = 4, ["x1 + x3", "x2 + x4", "x3", "x4"]
    else:
        m, images = 3, ["x1 + x2", "x2 + x3", "x3"]
    prime = Prime(2, 2) if kind is CaseKind.V3C4 else Prime(p)
    return CyclicAction(prime, [parse_poly(t, m, p) for t in images], name=kind.value)


def clear_caches():
    """Drop every memoised action, case and slice."""
    make_action.cache_clear()
    build_case.cache_clear()


def _v3_candidates(a: CyclicAction, p: int, n: int) -> list:
    x1, x2 = a.var(1), a.var(2)

    def m_i(i):
        return x1 ** (i // 2) if i % 2 == 0 else x1 ** ((i - 1) // 2) * x2

    def p_i(i):
        if i == 0:
            return x1 ** (p - 1) * x2
        if i % 2 == 0:
            return delta(a, x1 ** (p - i // 2))
        return x1 ** (p - (i + 1) // 2)

    return [m_i(i) for i in range(n)] + [delta_pow(a, p - n, p_i(i)) for i in range(n)]


def v2v2_block(a: CyclicAction, p: int, k: int) -> list:
    """``{x1^i x2^j : i + j = k, i < p, j < p}``, ordered by decreasing i."""
    x1, x2 = a.var(1), a.var(2)
    return [x1**i * x2 ** (k - i) for i in range(min(k, p - 1), -1, -1) if k - i < p]


def v2v2_parts(a: CyclicAction, p: int, n: int) -> tuple:
    u = a.var(1) * a.var(4) - a.var(2) * a.var(3)
    m_part = [f for k in range(n) for f in v2v2_block(a, p, k)]
    u_part = [u**k * f for k in range(1, p - n + 1) for f in v2v2_block(a, p, n - 1)]
    d_part = [delta_pow(a, p - n, f) for k in range(2 * p - n, 2 * p - 1) for f in v2v2_block(a, p, k)]
    return m_part, u_part, d_part


def _c4_candidates(a: CyclicAction, n: int, u: Polynomial) -> list:
    x1, x2 = a.var(1), a.var(2)
    nh_x1 = x1 * act(a, 2, x1)
    one = a.one()
    if n == 1:
        return [one, u]
    if n == 2:
        return [one, x2, nh_x1, x2 * nh_x1]
    if n == 3:
        return [one, x1, x2, x1**2, delta(a, x1**3), delta(a, x1**3 * x2)]
    return [one, x1, x2, x1**2, x1 * x2, x1**3, x1**2 * x2, x1**3 * x2]


@lru_cache(maxsize=None)
def build_case(spec: CaseSpec) -> CaseData:
    a = make_action(spec.kind, spec.p)
    p, n = spec.p, spec.n
    x = [None] + [a.var(i) for i in range(1, a.nvars + 1)]
    one = a.one()
    named = {}
    if spec.kind is CaseKind.V2:
        nx1 = full_norm(a, x[1])
        hsop = [x[2], nx1]
        secondary = [one]
        expected = RankS(n, n * (n - 1) // 2)
        candidates = [x[1] ** k for k in range(n)]
        named = {"N(x1)": nx1}
    elif spec.kind is CaseKind.V3:
        a2 = x[2] ** 2 - 2 * x[1] * x[3] - x[2] * x[3]
        a3 = full_norm(a, x[1])
        hsop = [x[3], a2, a3]
        nx2 = full_norm(a, x[2])
        secondary = [one, nx2]
        expected = RankS(2 * n, n * p)
        candidates = _v3_candidates(a, p, n)
        named = {"a1": x[3], "a2": a2, "a3": a3, "N(x2)": nx2}
    elif spec.kind is CaseKind.V2V2:
        u = x[1] * x[4] - x[2] * x[3]
        hsop = [x[3], x[4], full_norm(a, x[1]), full_norm(a, x[2])]
        secondary = [u**i for i in range(p)]
        expected = RankS(n * p, n * p * (p - 1))
        m_part, u_part, d_part = v2v2_parts(a, p, n)
        candidates = m_part + u_part + d_part
        named = {"u": u, "M": m_part, "U": u_part, "D": d_part}
    else:
        u = x[1] ** 2 * x[3] + x[1] * x[3] ** 2 + x[2] ** 3 + x[2] ** 2 * x[3]
        hsop = [full_norm(a, x[1]), norm(a, Subgroup(1), x[2]), x[3]]
        secondary = [one, u]
        expected = RankS(2 * n, C4_S[n])
        candidates = _c4_candidates(a, n, u)
        named = {"u": u, "N^H(x1)": x[1] * act(a, 2, x[1])}

    for g in hsop + secondary:
        if not delta(a, g).is_zero():
            raise AssertionError(f"{g} is not invariant")
    if prod(g.degree for g in hsop) != a.q * len(secondary):
        raise AssertionError("hsop degree product does not match the number of secondaries")
    return CaseData(spec, a, hsop, secondary, expected, candidates, named)


def candidate_generators(spec: CaseSpec) -> list:
    return list(build_case(spec).candidates)


# -- covariants ---------------------------------------------------------------


@dataclass(frozen=True)
class Covariant:
    """``sum_j components[j] (x) w_{j+1}`` in k[V] (x) V_n."""

    components: tuple

    def degree(self) -> int:
        return max((f.degree for f in self.components if f), default=0)


def w_action(n: int) -> list:
    """Coefficients of sigma(w_j) in w_1..w_n: ``sigma w_j = sum_{i<=j} (-1)^(j-i) w_i``."""
    return [[(-1) ** (j - i) if i <= j else 0 for i in range(n)] for j in range(n)]


def xi(spec: CaseSpec, f: Polynomial) -> Covariant:
    a = build_case(spec).action
    comps = []
    g = f
    for _ in range(spec.n):
        comps.append(g)
        g = delta(a, g)
    if not g.is_zero():
        raise ValueError(f"{f} is not in ker(Delta^{spec.n})")
    return Covariant(tuple(comps))


def is_covariant(spec: CaseSpec, phi: Covariant) -> bool:
    """Whether ``sum sigma(f_j) (x) sigma(w_j) == sum f_j (x) w_j``."""
    n = spec.n
    if len(phi.components) != n:
        raise ValueError(f"expected {n} components, got {len(phi.components)}")
    a = build_case(spec).action
    moved = [act(a, 1, f) for f in phi.components]
    w = w_action(n)
    for i in range(n):
        total = a.zero()
        for j in range(i, n):
            total = total + moved[j].scale(w[j][i])
        if total != phi.components[i]:
            return False
    return True


def _covariant_operator(spec: CaseSpec, d: int, order: MonomialOrder) -> np.ndarray:
    a = build_case(spec).action
    n, p = spec.n, a.p
    s = sigma_matrix(a, 1, d, order)
    dim = s.shape[0]
    w = w_action(n)
    big = np.zeros((n * dim, n * dim), dtype=np.int64)
    for j in range(n):
        for i in range(j + 1):
            big[j * dim:(j + 1) * dim, i * dim:(i + 1) * dim] = (w[j][i] * s) % p
        big[j * dim:(j + 1) * dim, j * dim:(j + 1) * dim] -= np.eye(dim, dtype=np.int64)
    return big % p


def covariant_slice(spec: CaseSpec, d: int, order: MonomialOrder = GREVLEX) -> np.ndarray:
    """RREF basis of (k[V]_d (x) V_n)^G computed from the diagonal action alone.

    Rows are laid out as n consecutive blocks of k[V]_d coordinates, block j
    holding the coefficient of w_{j+1}.
    """
    p = spec.prime.p
    return rref(left_kernel(_covariant_operator(spec, d, order), p), p)[0]


def xi_slice_matrix(spec: CaseSpec, d: int, order: MonomialOrder = GREVLEX) -> np.ndarray:
    """Images under xi of the RREF basis of K_n in degree d, as stacked rows."""
    a = build_case(spec).action
    ker = kernel_slice(a, spec.n, d, order)
    blocks = [matmul_mod(ker.rows, operator_matrix(a, i, d, order), a.p) for i in range(spec.n)]
    return np.hstack(blocks) if blocks else np.zeros((ker.rank, 0), dtype=np.int64)


def covariant_from_row(spec: CaseSpec, row, d: int, order: MonomialOrder = GREVLEX) -> Covariant:
    basis = monomial_basis(build_case(spec).action.nvars, d, order)
    p = spec.prime.p
    return Covariant(
        tuple(basis.polynomial(row[j * basis.dim:(j + 1) * basis.dim], p) for j in range(spec.n))
    )


# -- lead-term lemmas -----------------------------------------------------------


@dataclass
class LemmaReport:
    lemma: str
    p: int
    order: MonomialOrder
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.failures


LEMMAS = ("x1-powers", "x1-powers-x2", "v2v2-lead", "obs")


def lead_term_lemma_check(lemma: str, p: int, samples: int = 200, seed: int = 0) -> LemmaReport:
    """Exhaustively (or on random samples, for ``obs``) test a lead-term claim.

    ``x1-powers``: Delta^j(x1^k) leads with k!/(k-j)! x1^(k-j) x2^j (V3, graded-revlex).
    ``x1-powers-x2``: Delta^j(x1^k x2) leads with k!/(k-j)! x1^(k-j) x2^(j+1).
    ``v2v2-lead``: lead monomial of Delta^k(x1^i x2^j) on V2+V2 (graded-lex).
    ``obs``: elements of the hsop algebra for V3 lead with x1^(pi) x2^(2j) x3^k.
    """
    if p > 7:
        raise ValueError("lemma checks are limited to p <= 7")
    if lemma in ("x1-powers", "x1-powers-x2"):
        a = make_action(CaseKind.V3, p)
        rep = LemmaReport(lemma, p, GREVLEX)
        x1, x2 = a.var(1), a.var(2)
        extra = 1 if lemma == "x1-powers-x2" else 0
        for k in range(p):
            f = x1**k * (x2 if extra else a.one())
            for j in range(k + 1):
                g = delta_pow(a, j, f)
                want = ((k - j, j + extra, 0), factorial(k) // factorial(k - j) % p)
                got = lead_term(g, GREVLEX) if g else None
                rep.checked += 1
                if got != want:
                    rep.failures.append({"k": k, "j": j, "expected": want, "got": got})
                if g and j >= 2 and lead_term(g, GRLEX) != want and len(rep.notes) < 3:
                    rep.notes.append(f"graded-lex lead of Delta^{j}({f}) is {lead_term(g, GRLEX)}")
        return rep
    if lemma == "v2v2-lead":
        a = make_action(CaseKind.V2V2, p)
        rep = LemmaReport(lemma, p, GRLEX)
        x1, x2 = a.var(1), a.var(2)
        coeffs = {}
        for i in range(p):
            for j in range(p):
                f = x1**i * x2**j
                for k in range(min(i + j, p - 1) + 1):
                    g = delta_pow(a, k, f)
                    rep.checked += 1
                    if k <= j:
                        want = (i, j - k, 0, k)
                    else:
                        want = (i + j - k, 0, k - j, j)
                    got = lead_term(g, GRLEX) if g else None
                    if got is None or got[0] != want:
                        rep.failures.append({"i": i, "j": j, "k": k, "expected": want, "got": got})
                        continue
                    if k <= j:
                        if got[1] != factorial(j) // factorial(j - k) % p:
                            rep.failures.append({"i": i, "j": j, "k": k, "coefficient": got[1]})
                    else:
                        coeffs[(i, j, k)] = got[1]
        derived = all(
            c == factorial(k) * factorial(i) // (factorial(k - j) * factorial(i + j - k)) % p
            for (i, j, k), c in coeffs.items()
        )
        rep.notes.append(
            f"j < k branch: {len(coeffs)} lead coefficients measured; "
            f"match k! i! / ((k-j)! (i+j-k)!) mod p: {derived}"
        )
        rep.notes.append("j < k branch lead monomial is x1^(i+j-k) x3^(k-j) x4^j")
        return rep
    if lemma == "obs":
        case = build_case(CaseSpec(CaseKind.V3, p, 1))
        a = case.action
        a1, a2, a3 = case.hsop
        rep = LemmaReport(lemma, p, GREVLEX)
        rng = random.Random(seed + p)
        for _ in range(samples):
            f = a.zero()
            while f.is_zero():
                for _ in range(rng.randint(1, 4)):
                    e1, e2, e3 = rng.randint(0, 3), rng.randint(0, 2), rng.randint(0, 1)
                    f = f + (a1**e1 * a2**e2 * a3**e3).scale(rng.randint(1, p - 1))
            mono, _ = lead_term(f, GREVLEX)
            rep.checked += 1
            if mono[0] % p or mono[1] % 2:
                rep.failures.append({"f": str(f), "lead": mono})
        rep.notes.append(f"graded-lex lead term of a2 is {lead_term(a2, GRLEX)}")
        return rep
    raise ValueError(f"unknown lemma {lemma!r}; choose from {LEMMAS}")
